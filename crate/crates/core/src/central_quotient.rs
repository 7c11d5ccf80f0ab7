//! Quotients `T/⟨xʲ⟩` of a mapping torus by powers of its central element
//! `x = tᵏ·f₀`.
//!
//! Every coset of `⟨xʲ⟩` has exactly one representative `t^r·f` with
//! `0 ≤ r < jk`: since `t` and `f₀` commute, `t^{njk} = x^{nj}·f₀^{−nj}`, so
//! `t^{njk + r}·f ≡ t^r·f₀^{−nj}·f`. With `j = 1` this is the virtually free
//! group `Q`.

use std::fmt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::mapping_torus::{torus_conjugate, MappingTorus, TorusConjugacy, TorusElement};
use crate::words::{reduced_words, Word};

#[derive(Clone, Debug)]
pub struct CentralQuotient {
    torus: MappingTorus,
    j: u32,
}

/// Canonical coset representative `t^residue·fibre`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QElement {
    pub residue: u32,
    pub fibre: Word,
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[t^{} {}]", self.residue, self.fibre)
    }
}

/// Torsion found by [`CentralQuotient::torsion_probe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    pub examined: usize,
    /// Nontrivial torsion elements with their orders, in enumeration order.
    pub torsion: Vec<(QElement, u32)>,
}

impl CentralQuotient {
    /// `Q = T/⟨x⟩`; needs `k > 1`.
    pub fn new(torus: MappingTorus) -> Result<Self> {
        if torus.order() < 2 {
            return Err(Error::Invalid(
                "the quotient by the center needs outer order k > 1".into(),
            ));
        }
        Ok(CentralQuotient { torus, j: 1 })
    }

    /// `T/⟨xʲ⟩` for any `j ≥ 1`.
    pub fn with_power(torus: MappingTorus, j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::Invalid("power of the center must be positive".into()));
        }
        Ok(CentralQuotient { torus, j })
    }

    pub fn torus(&self) -> &MappingTorus {
        &self.torus
    }

    pub fn power(&self) -> u32 {
        self.j
    }

    /// Length `jk` of the residue window.
    pub fn window(&self) -> u32 {
        self.j * self.torus.order()
    }

    pub fn project(&self, x: &TorusElement) -> QElement {
        let w = self.window() as i64;
        let (n, r) = (x.t_exp.div_euclid(w), x.t_exp.rem_euclid(w));
        let shift = self.torus.f0().pow(-n * self.j as i64);
        QElement {
            residue: r as u32,
            fibre: shift.mul(&x.fibre),
        }
    }

    /// The canonical lift `t^r·f`.
    pub fn lift(&self, q: &QElement) -> TorusElement {
        TorusElement::new(q.residue as i64, q.fibre.clone())
    }

    pub fn identity(&self) -> QElement {
        self.project(&self.torus.identity())
    }

    /// Images of the fibre generators followed by the image of `t`.
    pub fn generators(&self) -> Vec<QElement> {
        self.torus.generators().iter().map(|g| self.project(g)).collect()
    }

    pub fn multiply(&self, p: &QElement, q: &QElement) -> QElement {
        self.project(&self.torus.multiply(&self.lift(p), &self.lift(q)))
    }

    pub fn invert(&self, p: &QElement) -> QElement {
        self.project(&self.torus.invert(&self.lift(p)))
    }

    pub fn pow(&self, p: &QElement, n: i64) -> QElement {
        self.project(&self.torus.pow(&self.lift(p), n))
    }

    /// Order of `p`, or `None` when it has infinite order. A power with
    /// t-exponent divisible by `jk` lands in the image of the fibre, which
    /// embeds, so one power decides.
    pub fn element_order(&self, p: &QElement) -> Option<u32> {
        let w = self.window();
        let n = w / gcd(p.residue, w);
        let q = self.pow(p, n as i64);
        if q.residue == 0 && q.fibre.is_empty() {
            (1..=n).find(|&d| n % d == 0 && self.pow(p, d as i64) == self.identity())
        } else {
            None
        }
    }

    /// Conjugacy in the quotient: conjugation preserves t-exponents, so
    /// canonical lifts are conjugate in the quotient iff they are conjugate
    /// in the torus.
    pub fn conjugate(&self, p: &QElement, q: &QElement, budget: Budget) -> TorusConjugacy {
        torus_conjugate(&self.lift(p), &self.lift(q), &self.torus, budget)
    }

    /// Enumerates all elements with fibre length at most `length_bound`,
    /// records the torsion among them and checks that none but the identity
    /// commutes with every generator.
    pub fn torsion_probe(&self, length_bound: usize) -> Result<TorsionReport> {
        let gens = self.generators();
        let id = self.identity();
        let mut report = TorsionReport {
            examined: 0,
            torsion: Vec::new(),
        };
        for r in 0..self.window() {
            for len in 0..=length_bound {
                for f in reduced_words(self.torus.alphabet(), len) {
                    let p = QElement { residue: r, fibre: f };
                    report.examined += 1;
                    if p == id {
                        continue;
                    }
                    if let Some(n) = self.element_order(&p) {
                        report.torsion.push((p.clone(), n));
                    }
                    if gens.iter().all(|g| self.multiply(&p, g) == self.multiply(g, &p)) {
                        return Err(Error::Falsified(format!("{p} is central")));
                    }
                }
            }
        }
        Ok(report)
    }
}

/// The probe on `Q = T/⟨x⟩`; rejects `k = 1`.
pub fn q_torsion_probe(torus: &MappingTorus, length_bound: usize) -> Result<TorsionReport> {
    CentralQuotient::new(torus.clone())?.torsion_probe(length_bound)
}

fn gcd(a: u32, b: u32) -> u32 {
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
    fn projection_examples() {
        let t = torus(&["b", "a"]);
        let q = CentralQuotient::new(t.clone()).unwrap();
        assert_eq!(q.project(&t.center().unwrap()), q.identity());
        assert_eq!(q.project(&t.parse_element("a").unwrap()).to_string(), "[t^0 a]");
        assert_eq!(q.project(&t.parse_element("t^3 a").unwrap()).to_string(), "[t^1 a]");
    }

    #[test]
    fn multiply_examples() {
        let t = torus(&["b", "a"]);
        let q = CentralQuotient::new(t.clone()).unwrap();
        let tb = q.project(&t.t());
        assert_eq!(q.multiply(&q.identity(), &tb), tb);
        assert_eq!(q.multiply(&tb, &tb), q.identity());
        let ta = q.project(&t.parse_element("t^1 a").unwrap());
        assert_eq!(q.multiply(&ta, &tb).to_string(), "[t^0 b]");
    }

    #[test]
    fn nontrivial_f0_window() {
        let t = torus(&["a", "Aba"]);
        let q = CentralQuotient::with_power(t.clone(), 3).unwrap();
        let x = t.center_element();
        assert_eq!(q.project(&t.pow(&x, 3)), q.identity());
        let xb = q.project(&x);
        assert_ne!(xb, q.identity());
        assert_eq!(q.element_order(&xb), Some(3));
        assert!(CentralQuotient::new(t).is_err());
    }

    #[test]
    fn torsion_examples() {
        let swap = q_torsion_probe(&torus(&["b", "a"]), 4).unwrap();
        let t = QElement {
            residue: 1,
            fibre: Alphabet::new(2).unwrap().identity(),
        };
        assert!(swap.torsion.contains(&(t.clone(), 2)));
        let rot = q_torsion_probe(&torus(&["b", "A"]), 2).unwrap();
        assert!(rot.torsion.contains(&(t, 4)));
        assert!(q_torsion_probe(&torus(&["a", "b"]), 2).is_err());
    }
}
