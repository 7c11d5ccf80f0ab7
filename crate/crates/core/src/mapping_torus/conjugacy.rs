//! Conjugacy in mapping tori.
//!
//! Conjugating `tᵖ·f` by `tˢ·h` gives `tᵖ·φᵖ(h)⁻¹·φˢ(f)·h`, and conjugators
//! may be taken modulo the center, so `0 ≤ s < k`. When `k | p` the twist
//! `φᵖ` is inner and the question is plain conjugacy in `F_m`. Otherwise a
//! conjugator search and a search for a separating finite quotient run in
//! alternating rounds.

use std::fmt;

use super::{MappingTorus, TorusElement};
use crate::budget::Budget;
use crate::congruence::FiniteQuotient;
use crate::words::{conjugate_in_free, reduced_words};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusConjugacy {
    /// `w` with `y = w⁻¹·x·w`.
    Conjugate(TorusElement),
    NotConjugate(NotConjugate),
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotConjugate {
    /// Conjugation preserves the t-exponent.
    Exponent { left: i64, right: i64 },
    /// `k` divides the exponent and no `φˢ`-twisted fibre pair is conjugate
    /// in the free group.
    FreeConjugacy,
    /// The `n`-th powers have exponent divisible by `k` and are not
    /// conjugate.
    Power { n: u32 },
    /// The images lie in different conjugacy classes of this quotient.
    Quotient(Box<FiniteQuotient>),
}

impl fmt::Display for NotConjugate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotConjugate::Exponent { .. } => write!(f, "exponent"),
            NotConjugate::FreeConjugacy => write!(f, "free-conjugacy"),
            NotConjugate::Power { n } => write!(f, "power {n}"),
            NotConjugate::Quotient(q) => write!(f, "quotient {} order {}", q.label(), q.order()),
        }
    }
}

impl NotConjugate {
    /// Re-checks the certificate for the pair `(x, y)`.
    pub fn verify(&self, x: &TorusElement, y: &TorusElement, torus: &MappingTorus) -> bool {
        match self {
            NotConjugate::Exponent { left, right } => {
                *left == x.t_exp && *right == y.t_exp && left != right
            }
            NotConjugate::FreeConjugacy => {
                x.t_exp == y.t_exp && matches!(exact_case(x, y, torus), Some(None))
            }
            NotConjugate::Power { n } => {
                let (xn, yn) = (torus.pow(x, *n as i64), torus.pow(y, *n as i64));
                matches!(exact_case(&xn, &yn, torus), Some(None))
            }
            NotConjugate::Quotient(q) => {
                q.verify(Some(torus)).is_ok() && q.class_of(q.eval(x)) != q.class_of(q.eval(y))
            }
        }
    }
}

/// Decides conjugacy using the torus's own quotient family.
pub fn torus_conjugate(
    x: &TorusElement,
    y: &TorusElement,
    torus: &MappingTorus,
    budget: Budget,
) -> TorusConjugacy {
    if x.t_exp != y.t_exp || x.t_exp % torus.order() as i64 == 0 {
        return torus_conjugate_with(x, y, torus, budget, &[]);
    }
    let family = torus.quotients();
    torus_conjugate_with(x, y, torus, budget, family.quotients())
}

/// As [`torus_conjugate`] with an explicit list of quotients for the
/// negative side. Each conjugator candidate costs one budget step.
pub fn torus_conjugate_with(
    x: &TorusElement,
    y: &TorusElement,
    torus: &MappingTorus,
    budget: Budget,
    quotients: &[FiniteQuotient],
) -> TorusConjugacy {
    if x.t_exp != y.t_exp {
        return TorusConjugacy::NotConjugate(NotConjugate::Exponent {
            left: x.t_exp,
            right: y.t_exp,
        });
    }
    let k = torus.order() as i64;
    let p = x.t_exp;
    if let Some(found) = exact_case(x, y, torus) {
        return match found {
            Some(w) => TorusConjugacy::Conjugate(w),
            None => TorusConjugacy::NotConjugate(NotConjugate::FreeConjugacy),
        };
    }
    let n = (k / gcd(p.unsigned_abs() as i64, k)) as u32;
    let (xn, yn) = (torus.pow(x, n as i64), torus.pow(y, n as i64));
    if let Some(None) = exact_case(&xn, &yn, torus) {
        return TorusConjugacy::NotConjugate(NotConjugate::Power { n });
    }

    let twisted: Vec<_> = (0..k).map(|s| torus.phi_pow(s, &x.fibre)).collect();
    let mut meter = budget.meter();
    let mut next_quotient = 0;
    for round in 0.. {
        let mut yes_done = false;
        for h in reduced_words(torus.alphabet(), round) {
            if !meter.tick() {
                yes_done = true;
                break;
            }
            let left = torus.phi_pow(p, &h).inverse();
            for (s, fs) in twisted.iter().enumerate() {
                if left.mul(fs).mul(&h) == y.fibre {
                    let w = TorusElement::new(s as i64, h);
                    debug_assert_eq!(torus.conjugate(x, &w), *y);
                    return TorusConjugacy::Conjugate(w);
                }
            }
        }
        // quotient tiers double in size
        let end = quotients.len().min((1usize << (round + 1)) - 1);
        for q in &quotients[next_quotient.min(end)..end] {
            if q.class_of(q.eval(x)) != q.class_of(q.eval(y)) {
                return TorusConjugacy::NotConjugate(NotConjugate::Quotient(Box::new(q.clone())));
            }
        }
        next_quotient = end;
        if yes_done {
            break;
        }
    }
    TorusConjugacy::Unresolved
}

/// When `k` divides the common exponent `p = nk`: `tᵖ·f ~ tᵖ·g` iff
/// `f₀⁻ⁿ·g` is conjugate in `F_m` to some `f₀⁻ⁿ·φˢ(f)`. Returns `None` when
/// `k ∤ p`, otherwise the verified conjugator if there is one.
fn exact_case(x: &TorusElement, y: &TorusElement, torus: &MappingTorus) -> Option<Option<TorusElement>> {
    let k = torus.order() as i64;
    if x.t_exp != y.t_exp || x.t_exp % k != 0 {
        return None;
    }
    let shift = torus.f0().pow(-(x.t_exp / k));
    let target = shift.mul(&y.fibre);
    for s in 0..k {
        let u = shift.mul(&torus.phi_pow(s, &x.fibre));
        if let Some(h) = conjugate_in_free(&u, &target) {
            let w = TorusElement::new(s, h);
            if torus.conjugate(x, &w) == *y {
                return Some(Some(w));
            }
        }
    }
    Some(None)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::FreeAutomorphism;
    use crate::words::Alphabet;

    fn torus(images: &[&str]) -> MappingTorus {
        let a = Alphabet::new(images.len() as u32).unwrap();
        MappingTorus::new(FreeAutomorphism::parse_images(images, a).unwrap()).unwrap()
    }

    #[test]
    fn swap_examples() {
        let t = torus(&["b", "a"]);
        let el = |s: &str| t.parse_element(s).unwrap();
        let budget = Budget::default();
        match torus_conjugate(&el("a"), &el("b"), &t, budget) {
            TorusConjugacy::Conjugate(w) => {
                assert_eq!(w, el("t^1"));
                assert_eq!(t.conjugate(&el("a"), &w), el("b"));
            }
            other => panic!("{other:?}"),
        }
        let v = torus_conjugate(&el("a"), &el("A"), &t, budget);
        match &v {
            TorusConjugacy::NotConjugate(c) => assert!(c.verify(&el("a"), &el("A"), &t)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            torus_conjugate(&el("t^1"), &el("t^2"), &t, budget),
            TorusConjugacy::NotConjugate(NotConjugate::Exponent { left: 1, right: 2 })
        );
    }

    #[test]
    fn odd_exponent_pairs() {
        let t = torus(&["b", "a"]);
        let el = |s: &str| t.parse_element(s).unwrap();
        let budget = Budget::default();
        // t·a and t·b are conjugate by t
        let w = match torus_conjugate(&el("t^1 a"), &el("t^1 b"), &t, budget) {
            TorusConjugacy::Conjugate(w) => w,
            other => panic!("{other:?}"),
        };
        assert_eq!(t.conjugate(&el("t^1 a"), &w), el("t^1 b"));
        match torus_conjugate(&el("t^1"), &el("t^1 a"), &t, budget) {
            TorusConjugacy::NotConjugate(c) => assert!(c.verify(&el("t^1"), &el("t^1 a"), &t)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nontrivial_f0() {
        let t = torus(&["a", "Aba"]);
        let el = |s: &str| t.parse_element(s).unwrap();
        let x = el("t^2 ab");
        let g = el("t^-3 bA");
        let y = t.conjugate(&x, &g);
        match torus_conjugate(&x, &y, &t, Budget::default()) {
            TorusConjugacy::Conjugate(w) => assert_eq!(t.conjugate(&x, &w), y),
            other => panic!("{other:?}"),
        }
    }
}
