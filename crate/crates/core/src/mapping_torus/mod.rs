//! Mapping tori `T = F_m ⋊_φ ⟨t⟩` of automorphisms with finite outer order.
//!
//! Elements are pairs `(l, f)` standing for `tˡ·f`, with `t⁻¹·x·t = φ(x)`,
//! so `(a, f)·(b, g) = (a + b, φᵇ(f)·g)`. Writing `φᵏ = ad_{f₀⁻¹}`, the
//! element `x = tᵏ·f₀` is central and powers of `φ` reduce as
//! `φ^{qk+r}(w) = f₀^q·φʳ(w)·f₀^{−q}`.

mod conjugacy;
mod iso;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::automorphism::{outer_order, FreeAutomorphism, OrderSearch, OuterOrderCertificate};
use crate::congruence::QuotientFamily;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

pub use conjugacy::{torus_conjugate, torus_conjugate_with, NotConjugate, TorusConjugacy};
pub use iso::{fo_isomorphic, is_aut_conjugator, FoIsomorphism};

/// Default bound on the outer order searched when building a torus.
pub const DEFAULT_ORDER_BOUND: u32 = 1024;

/// Default cap on quotient orders used by conjugacy searches.
pub const DEFAULT_QUOTIENT_ORDER: usize = 96;

#[derive(Clone)]
pub struct MappingTorus {
    phi: FreeAutomorphism,
    cert: OuterOrderCertificate,
    /// `φ⁰ … φ^{k−1}`.
    powers: Vec<FreeAutomorphism>,
    quotients: Arc<OnceLock<Arc<QuotientFamily>>>,
}

impl fmt::Debug for MappingTorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MappingTorus")
            .field("phi", &self.phi)
            .field("cert", &self.cert)
            .finish()
    }
}

impl PartialEq for MappingTorus {
    fn eq(&self, other: &Self) -> bool {
        self.phi == other.phi
    }
}

impl Eq for MappingTorus {}

impl MappingTorus {
    pub fn new(phi: FreeAutomorphism) -> Result<Self> {
        Self::with_bound(phi, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(phi: FreeAutomorphism, bound: u32) -> Result<Self> {
        match outer_order(&phi, bound) {
            OrderSearch::Found(cert) => Self::with_certificate(phi, cert),
            OrderSearch::Absent { bound } => Err(Error::NotFiniteOrder(bound)),
            OrderSearch::Exceeded { power } => Err(Error::NotFiniteOrder(power)),
        }
    }

    pub fn with_certificate(phi: FreeAutomorphism, cert: OuterOrderCertificate) -> Result<Self> {
        cert.verify(&phi)?;
        if phi.apply(&cert.f0) != cert.f0 {
            return Err(Error::Falsified("φ(f₀) ≠ f₀".into()));
        }
        let mut powers = vec![FreeAutomorphism::identity(phi.alphabet())];
        for _ in 1..cert.order {
            let next = phi.compose(powers.last().expect("nonempty"));
            powers.push(next);
        }
        Ok(MappingTorus {
            phi,
            cert,
            powers,
            quotients: Arc::new(OnceLock::new()),
        })
    }

    pub fn monodromy(&self) -> &FreeAutomorphism {
        &self.phi
    }

    pub fn certificate(&self) -> &OuterOrderCertificate {
        &self.cert
    }

    /// The outer order `k`.
    pub fn order(&self) -> u32 {
        self.cert.order
    }

    pub fn f0(&self) -> &Word {
        &self.cert.f0
    }

    pub fn alphabet(&self) -> Alphabet {
        self.phi.alphabet()
    }

    pub fn rank(&self) -> usize {
        self.phi.rank()
    }

    /// `φⁿ(w)` for any integer `n`.
    pub fn phi_pow(&self, n: i64, w: &Word) -> Word {
        let k = self.cert.order as i64;
        let (q, r) = (n.div_euclid(k), n.rem_euclid(k));
        let inner = self.powers[r as usize].apply(w);
        if q == 0 {
            return inner;
        }
        let f = self.cert.f0.pow(q);
        f.mul(&inner).mul(&f.inverse())
    }

    pub fn identity(&self) -> TorusElement {
        TorusElement::new(0, self.alphabet().identity())
    }

    pub fn t(&self) -> TorusElement {
        TorusElement::new(1, self.alphabet().identity())
    }

    /// The fibre generator `xᵢ` (1-based).
    pub fn generator(&self, i: u32) -> TorusElement {
        TorusElement::new(0, self.alphabet().generator(i))
    }

    /// All generators: the fibre generators followed by `t`.
    pub fn generators(&self) -> Vec<TorusElement> {
        let mut out: Vec<TorusElement> = (1..=self.rank() as u32).map(|i| self.generator(i)).collect();
        out.push(self.t());
        out
    }

    pub fn multiply(&self, x: &TorusElement, y: &TorusElement) -> TorusElement {
        TorusElement::new(x.t_exp + y.t_exp, self.phi_pow(y.t_exp, &x.fibre).mul(&y.fibre))
    }

    pub fn invert(&self, x: &TorusElement) -> TorusElement {
        TorusElement::new(-x.t_exp, self.phi_pow(-x.t_exp, &x.fibre.inverse()))
    }

    pub fn pow(&self, x: &TorusElement, n: i64) -> TorusElement {
        let base = if n < 0 { self.invert(x) } else { x.clone() };
        let mut out = self.identity();
        for _ in 0..n.unsigned_abs() {
            out = self.multiply(&out, &base);
        }
        out
    }

    /// `w⁻¹·x·w`.
    pub fn conjugate(&self, x: &TorusElement, w: &TorusElement) -> TorusElement {
        self.multiply(&self.multiply(&self.invert(w), x), w)
    }

    pub fn commutes(&self, x: &TorusElement, y: &TorusElement) -> bool {
        self.multiply(x, y) == self.multiply(y, x)
    }

    /// The generator `x = tᵏ·f₀` of the center, checked against every
    /// generator. Rank 1 tori are abelian or have trivial center and are
    /// handled separately.
    pub fn center(&self) -> Result<TorusElement> {
        if self.rank() < 2 {
            return Err(Error::Invalid("center formula needs rank at least 2".into()));
        }
        let x = self.center_element();
        for g in self.generators() {
            if !self.commutes(&x, &g) {
                return Err(Error::Falsified(format!("{x} does not commute with {g}")));
            }
        }
        Ok(x)
    }

    /// `tᵏ·f₀`, without the centrality check.
    pub fn center_element(&self) -> TorusElement {
        TorusElement::new(self.cert.order as i64, self.cert.f0.clone())
    }

    /// The conjugacy-separating quotient family, built on first use.
    pub fn quotients(&self) -> Arc<QuotientFamily> {
        self.quotients
            .get_or_init(|| Arc::new(QuotientFamily::build(self, DEFAULT_QUOTIENT_ORDER)))
            .clone()
    }

    pub fn parse_element(&self, s: &str) -> Result<TorusElement> {
        TorusElement::parse(s, self.alphabet())
    }
}

/// `t^{t_exp}·fibre`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusElement {
    pub t_exp: i64,
    pub fibre: Word,
}

impl TorusElement {
    pub fn new(t_exp: i64, fibre: Word) -> Self {
        TorusElement { t_exp, fibre }
    }

    /// Parses `t^<int> <word>`; the `t^` part may be omitted (exponent 0)
    /// and so may the word (identity fibre).
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let trimmed = s.trim_start();
        let lead = s.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("t^") {
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            let exp: i64 = rest[..end]
                .parse()
                .map_err(|_| Error::parse(1, lead + 3, format!("bad t-exponent {:?}", &rest[..end])))?;
            let tail = &rest[end..];
            let word = tail.trim();
            let col = lead + 2 + end + (tail.len() - tail.trim_start().len());
            let fibre = if word.is_empty() {
                alphabet.identity()
            } else {
                Word::parse(word, alphabet).map_err(|e| e.at_line(1, col))?
            };
            Ok(TorusElement::new(exp, fibre))
        } else {
            let word = trimmed.trim_end();
            let fibre = Word::parse(word, alphabet).map_err(|e| e.at_line(1, lead))?;
            Ok(TorusElement::new(0, fibre))
        }
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{} {}", self.t_exp, self.fibre)
    }
}

/// Data of the sub-mapping-torus generated by `H` and `tˡ·a⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubTorusSpec {
    pub l: u32,
    pub a: Word,
    /// `ad_{a⁻¹} ∘ φˡ`.
    pub induced_monodromy: FreeAutomorphism,
    /// `b` with `ψ^{k/l} = ad_b ∘ φᵏ`.
    pub b: Word,
}

/// `ψ = ad_{a⁻¹} ∘ φˡ` and `b = φ^{(n−1)l}(a⁻¹)···φˡ(a⁻¹)·a⁻¹` with
/// `n = k/l`, so that `ψⁿ = ad_b ∘ φᵏ`; the identity is checked on every
/// generator. `l` is trusted to be the relevant period of `H`.
pub fn sub_torus_monodromy(t: &MappingTorus, l: u32, a: &Word) -> Result<SubTorusSpec> {
    let k = t.order();
    if l == 0 || k % l != 0 {
        return Err(Error::NotADivisor { l, k });
    }
    if a.alphabet() != t.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: t.alphabet().rank(),
            right: a.alphabet().rank(),
        });
    }
    let a_inv = a.inverse();
    let phi_l = t.monodromy().pow(l as i64);
    let psi = FreeAutomorphism::inner(&a_inv).compose(&phi_l);
    let n = k / l;
    let mut b = t.alphabet().identity();
    for j in 0..n {
        b = t.phi_pow((j * l) as i64, &a_inv).mul(&b);
    }
    let lhs = psi.pow(n as i64);
    let rhs = FreeAutomorphism::inner(&b).compose(&t.monodromy().pow(k as i64));
    if lhs.images() != rhs.images() {
        return Err(Error::Falsified("sub-torus identity fails".into()));
    }
    Ok(SubTorusSpec {
        l,
        a: a.clone(),
        induced_monodromy: psi,
        b,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precheck {
    Pass,
    Fail(String),
}

/// Necessary condition for a fibre- and orientation-preserving isomorphism
/// carrying one tuple of tuples to the other: equal shapes and equal
/// t-exponents entry by entry.
pub fn mwh_precheck(p: &[Vec<TorusElement>], q: &[Vec<TorusElement>]) -> Precheck {
    let shape = |x: &[Vec<TorusElement>]| x.iter().map(Vec::len).collect::<Vec<_>>();
    if shape(p) != shape(q) {
        return Precheck::Fail("arity".into());
    }
    for (i, (a, b)) in p.iter().zip(q).enumerate() {
        for (j, (x, y)) in a.iter().zip(b).enumerate() {
            if x.t_exp != y.t_exp {
                return Precheck::Fail(format!(
                    "exponent at {}.{}: {} vs {}",
                    i + 1,
                    j + 1,
                    x.t_exp,
                    y.t_exp
                ));
            }
        }
    }
    Precheck::Pass
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn torus(images: &[&str]) -> MappingTorus {
        let a = Alphabet::new(images.len() as u32).unwrap();
        MappingTorus::new(FreeAutomorphism::parse_images(images, a).unwrap()).unwrap()
    }

    fn el(t: &MappingTorus, s: &str) -> TorusElement {
        t.parse_element(s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let t = torus(&["b", "a"]);
        assert_eq!(t.multiply(&el(&t, "a"), &el(&t, "t^1")), el(&t, "t^1 b"));
        assert_eq!(t.multiply(&el(&t, "t^1"), &el(&t, "a")), el(&t, "t^1 a"));
        assert_eq!(t.multiply(&el(&t, "t^1 a"), &el(&t, "t^-1")), el(&t, "b"));
    }

    #[test]
    fn invert_examples() {
        let t = torus(&["b", "a"]);
        assert_eq!(t.invert(&el(&t, "a")), el(&t, "A"));
        assert_eq!(t.invert(&el(&t, "t^1")), el(&t, "t^-1"));
        let x = el(&t, "t^1 a");
        assert_eq!(t.invert(&x), el(&t, "t^-1 B"));
        assert_eq!(t.multiply(&x, &t.invert(&x)), t.identity());
    }

    #[test]
    fn center_examples() {
        assert_eq!(torus(&["b", "a"]).center().unwrap().to_string(), "t^2 1");
        assert_eq!(torus(&["b", "A"]).center().unwrap().to_string(), "t^4 1");
        assert_eq!(torus(&["a", "Aba"]).center().unwrap().to_string(), "t^1 A");
        assert!(torus(&["A"]).center().is_err());
    }

    #[test]
    fn phi_pow_matches_iteration() {
        let t = torus(&["a", "Aba"]);
        let w = Word::parse("abbA", f2()).unwrap();
        let mut expect = w.clone();
        for n in 1..6 {
            expect = t.monodromy().apply(&expect);
            assert_eq!(t.phi_pow(n, &w), expect);
        }
        let back = t.monodromy().inverse().pow(3).apply(&w);
        assert_eq!(t.phi_pow(-3, &w), back);
    }

    #[test]
    fn element_grammar() {
        let a = f2();
        assert_eq!(TorusElement::parse("t^-2 abA", a).unwrap().to_string(), "t^-2 abA");
        assert_eq!(TorusElement::parse("ab", a).unwrap(), TorusElement::new(0, Word::parse("ab", a).unwrap()));
        assert_eq!(TorusElement::parse("t^3", a).unwrap(), TorusElement::new(3, a.identity()));
        assert_eq!(TorusElement::parse("t^0 1", a).unwrap(), TorusElement::new(0, a.identity()));
        let err = TorusElement::parse("t^1 abq", a).unwrap_err();
        assert!(matches!(err, Error::Parse { column: 7, .. }), "{err}");
        assert!(TorusElement::parse("t^x a", a).is_err());
    }

    #[test]
    fn sub_torus_examples() {
        let rot = torus(&["b", "A"]);
        let a = f2();
        let spec = sub_torus_monodromy(&rot, 2, &a.identity()).unwrap();
        assert_eq!(spec.induced_monodromy, rot.monodromy().pow(2));
        assert!(spec.b.is_empty());
        let swap = torus(&["b", "a"]);
        let spec = sub_torus_monodromy(&swap, 2, &a.identity()).unwrap();
        assert!(spec.induced_monodromy.is_identity());
        let spec = sub_torus_monodromy(&rot, 2, &Word::parse("a", a).unwrap()).unwrap();
        assert!(spec.b.is_empty());
        assert!(matches!(
            sub_torus_monodromy(&rot, 3, &a.identity()),
            Err(Error::NotADivisor { l: 3, k: 4 })
        ));
    }

    #[test]
    fn precheck_examples() {
        let t = torus(&["b", "a"]);
        let p = |items: &[&str]| vec![items.iter().map(|s| el(&t, s)).collect::<Vec<_>>()];
        assert_eq!(mwh_precheck(&p(&["t^1 a"]), &p(&["t^1 b"])), Precheck::Pass);
        assert!(matches!(mwh_precheck(&p(&["t^1 a"]), &p(&["t^2 a"])), Precheck::Fail(r) if r.starts_with("exponent")));
        assert_eq!(mwh_precheck(&p(&["a", "t^1 b"]), &p(&["a"])), Precheck::Fail("arity".into()));
    }
}
