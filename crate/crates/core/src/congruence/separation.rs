//! Automorphisms of mapping tori and their images in finite quotients.

use std::fmt;

use super::FiniteQuotient;
use crate::automorphism::parse_generator;
use crate::central_quotient::{CentralQuotient, QElement};
use crate::error::{Error, Result};
use crate::finite_group::FiniteGroupTable;
use crate::mapping_torus::{MappingTorus, TorusElement};
use crate::words::{solve_inner, Word};

/// An endomorphism of a mapping torus given by the images of the fibre
/// generators and of `t`, checked against the defining relations.
/// Bijectivity is not checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAutomorphism {
    torus: MappingTorus,
    /// Fibre generators first, then `t`.
    images: Vec<TorusElement>,
}

impl TorusAutomorphism {
    pub fn new(torus: &MappingTorus, images: Vec<TorusElement>) -> Result<Self> {
        let m = torus.rank();
        if images.len() != m + 1 {
            return Err(Error::WrongImageCount {
                expected: m + 1,
                got: images.len(),
            });
        }
        if let Some(x) = images.iter().find(|x| x.fibre.alphabet() != torus.alphabet()) {
            return Err(Error::AlphabetMismatch {
                left: torus.alphabet().rank(),
                right: x.fibre.alphabet().rank(),
            });
        }
        let psi = TorusAutomorphism {
            torus: torus.clone(),
            images,
        };
        let t = &psi.images[m];
        for (i, w) in torus.monodromy().images().iter().enumerate() {
            let lhs = torus.conjugate(&psi.images[i], t);
            if lhs != psi.apply_word(w) {
                return Err(Error::NotAnAutomorphism(format!(
                    "relation t⁻¹·{}·t = φ({}) is not preserved",
                    torus.alphabet().generator(i as u32 + 1),
                    torus.alphabet().generator(i as u32 + 1)
                )));
            }
        }
        Ok(psi)
    }

    pub fn identity(torus: &MappingTorus) -> Self {
        TorusAutomorphism {
            torus: torus.clone(),
            images: torus.generators(),
        }
    }

    /// Conjugation `y ↦ g⁻¹·y·g`.
    pub fn inner(torus: &MappingTorus, g: &TorusElement) -> Self {
        TorusAutomorphism {
            torus: torus.clone(),
            images: torus.generators().iter().map(|y| torus.conjugate(y, g)).collect(),
        }
    }

    pub fn torus(&self) -> &MappingTorus {
        &self.torus
    }

    pub fn images(&self) -> &[TorusElement] {
        &self.images
    }

    fn apply_word(&self, w: &Word) -> TorusElement {
        let t = &self.torus;
        w.letters().iter().fold(t.identity(), |acc, l| {
            let img = &self.images[l.index()];
            let img = if l.is_inverse() { t.invert(img) } else { img.clone() };
            t.multiply(&acc, &img)
        })
    }

    pub fn apply(&self, x: &TorusElement) -> TorusElement {
        let t = &self.torus;
        let tl = t.pow(&self.images[t.rank()], x.t_exp);
        t.multiply(&tl, &self.apply_word(&x.fibre))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        TorusAutomorphism {
            torus: self.torus.clone(),
            images: other.images.iter().map(|y| self.apply(y)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(&self.torus), |acc, _| self.compose(&acc))
    }

    /// Some `g` with `self = (y ↦ g⁻¹·y·g)`. Conjugators are taken modulo
    /// the central `tᵏ·f₀`, so `g = tˢ·h` with `0 ≤ s < k`.
    pub fn is_inner(&self) -> Option<TorusElement> {
        let t = &self.torus;
        let m = t.rank();
        if self.images[..m].iter().any(|x| x.t_exp != 0) {
            return None;
        }
        for s in 0..t.order() as i64 {
            for h in self.inner_candidates(s) {
                let g = TorusElement::new(s, h);
                if *self == Self::inner(t, &g) {
                    return Some(g);
                }
            }
        }
        None
    }

    /// Fibre parts `h` of possible conjugators `tˢ·h`: unique in rank at
    /// least 2, read off the image of `t` in rank 1.
    fn inner_candidates(&self, s: i64) -> Vec<Word> {
        let t = &self.torus;
        let alphabet = t.alphabet();
        if t.rank() >= 2 {
            let u: Vec<Word> = alphabet
                .generators()
                .iter()
                .map(|x| self.apply(&TorusElement::new(0, t.phi_pow(-s, x))).fibre)
                .collect();
            return solve_inner(&u).ok().flatten().into_iter().collect();
        }
        // g⁻¹·t·g = t·φ(h)⁻¹·h: trivial when φ = id, h² when φ inverts
        let e = self.images[1].fibre.exponent_sums()[0];
        if t.monodromy().is_identity() {
            vec![alphabet.identity()]
        } else if e % 2 == 0 {
            vec![alphabet.generator(1).pow(e / 2)]
        } else {
            Vec::new()
        }
    }

    /// Least `n ≤ bound` with `selfⁿ` inner.
    pub fn outer_order(&self, bound: u32) -> Option<(u32, TorusElement)> {
        let mut power = self.clone();
        for n in 1..=bound {
            if let Some(g) = power.is_inner() {
                return Some((n, g));
            }
            power = self.compose(&power);
        }
        None
    }

    /// Generator images in `q` of the induced map, when it is well defined
    /// and bijective.
    pub fn induced(&self, q: &FiniteQuotient) -> Option<Vec<u32>> {
        let target = q.target();
        let src = q.images();
        let dst: Vec<u32> = self.images.iter().map(|y| q.eval(y)).collect();
        if !target.generates(&dst) {
            return None;
        }
        let pairs: Vec<(u32, u32)> = src.into_iter().zip(dst.iter().copied()).collect();
        let mul = |a: &(u32, u32), b: &(u32, u32)| (target.mul(a.0, b.0), target.mul(a.1, b.1));
        let e = (target.identity(), target.identity());
        FiniteGroupTable::from_closure(e, &pairs, mul, target.order()).map(|_| dst)
    }

    /// Parses `a -> t^0 a` rules for the fibre generators in order followed
    /// by one `t -> ...` rule.
    pub fn parse_text(text: &str, torus: &MappingTorus) -> Result<Self> {
        let m = torus.rank();
        let mut images = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(arrow) = content.find("->") else {
                return Err(Error::parse(line_no, 1, "expected `<generator> -> <element>`"));
            };
            let lhs = content[..arrow].trim();
            let expected = images.len();
            let ok = if expected < m {
                parse_generator(lhs) == Some(expected + 1)
            } else {
                lhs == "t"
            };
            if !ok || expected > m {
                let want = if expected < m {
                    torus.alphabet().generator(expected as u32 + 1).to_string()
                } else {
                    "t".to_string()
                };
                let msg = if expected > m {
                    "too many rules".to_string()
                } else {
                    format!("expected a rule for {want}, found {lhs:?}")
                };
                return Err(Error::parse(line_no, 1, msg));
            }
            let x = TorusElement::parse(&content[arrow + 2..], torus.alphabet())
                .map_err(|e| e.at_line(line_no, arrow + 2))?;
            images.push(x);
        }
        if images.len() != m + 1 {
            return Err(Error::WrongImageCount {
                expected: m + 1,
                got: images.len(),
            });
        }
        Self::new(torus, images)
    }

    pub fn to_text(&self) -> String {
        let m = self.torus.rank();
        let mut out = String::new();
        for (i, x) in self.images.iter().enumerate() {
            let name = if i < m {
                self.torus.alphabet().generator(i as u32 + 1).to_string()
            } else {
                "t".to_string()
            };
            out.push_str(&format!("{name} -> {x}\n"));
        }
        out
    }
}

impl fmt::Display for TorusAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CenterAction {
    Fixing,
    Inverting,
}

/// How `ψ` acts on the central element `x = tᵏ·f₀`.
pub fn detect_center_inverting(psi: &TorusAutomorphism) -> Result<CenterAction> {
    let t = psi.torus();
    let x = t.center_element();
    let image = psi.apply(&x);
    if image == x {
        Ok(CenterAction::Fixing)
    } else if image == t.invert(&x) {
        Ok(CenterAction::Inverting)
    } else {
        Err(Error::Falsified(format!("ψ({x}) = {image} is neither x nor x⁻¹")))
    }
}

/// Whether the map `gens ↦ images` of a finite group agrees with some inner
/// automorphism.
fn is_inner_on(target: &FiniteGroupTable, gens: &[u32], images: &[u32]) -> bool {
    (0..target.order() as u32).any(|g| gens.iter().zip(images).all(|(&y, &z)| target.conj(y, g) == z))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationOutcome {
    /// The induced outer automorphism of the witness quotient is nontrivial;
    /// carries the induced generator images.
    Separated { images: Vec<u32> },
    /// Inner in the torus, hence trivial in Out.
    Trivial { conjugator: TorusElement },
    /// No power up to the bound is inner.
    NotApplicable { bound: u32 },
    /// Not separated by the witness quotient; one reason per quotient tried.
    Unseparated { reasons: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationEntry {
    pub id: String,
    pub automorphism: TorusAutomorphism,
    pub outcome: SeparationOutcome,
}

/// A finite quotient together with per-automorphism evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceWitness {
    pub torus: MappingTorus,
    /// `None` when no supplied automorphism needed separating.
    pub quotient: Option<FiniteQuotient>,
    pub entries: Vec<SeparationEntry>,
}

impl CongruenceWitness {
    pub fn all_separated(&self) -> bool {
        self.entries
            .iter()
            .all(|e| !matches!(e.outcome, SeparationOutcome::Unseparated { .. }))
    }

    pub fn outcome(&self, id: &str) -> Option<&SeparationOutcome> {
        self.entries.iter().find(|e| e.id == id).map(|e| &e.outcome)
    }

    /// Re-checks the quotient and every `Separated` and `Trivial` claim.
    pub fn verify(&self) -> Result<()> {
        if let Some(q) = &self.quotient {
            q.verify(Some(&self.torus))?;
        }
        for e in &self.entries {
            match &e.outcome {
                SeparationOutcome::Separated { images } => {
                    let q = self
                        .quotient
                        .as_ref()
                        .ok_or_else(|| Error::Falsified("separation claimed without a quotient".into()))?;
                    if e.automorphism.induced(q).as_ref() != Some(images) {
                        return Err(Error::Falsified(format!("{}: induced map mismatch", e.id)));
                    }
                    if is_inner_on(q.target(), &q.images(), images) {
                        return Err(Error::Falsified(format!("{}: induced map is inner", e.id)));
                    }
                }
                SeparationOutcome::Trivial { conjugator } => {
                    if e.automorphism != TorusAutomorphism::inner(&self.torus, conjugator) {
                        return Err(Error::Falsified(format!("{}: not the claimed inner map", e.id)));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Looks for one quotient on which every supplied automorphism of finite
/// outer order is still non-inner. Quotients are tried in a canonical order
/// so the result does not depend on the order of `quotients`; when no single
/// quotient separates everything, the first one separating the most is
/// reported.
pub fn verify_separation(
    torus: &MappingTorus,
    quotients: &[FiniteQuotient],
    autos: &[(String, TorusAutomorphism)],
    order_bound: u32,
) -> Result<CongruenceWitness> {
    for q in quotients {
        q.verify(Some(torus))?;
    }
    let mut sorted: Vec<&FiniteQuotient> = quotients.iter().collect();
    sorted.sort_by(|a, b| {
        (a.order(), a.label(), a.images(), a.target().product_table())
            .cmp(&(b.order(), b.label(), b.images(), b.target().product_table()))
    });

    let mut entries = Vec::new();
    let mut pending = Vec::new();
    for (id, psi) in autos {
        if psi.torus() != torus {
            return Err(Error::Invalid(format!("{id}: automorphism of a different torus")));
        }
        let outcome = match psi.outer_order(order_bound) {
            Some((1, g)) => SeparationOutcome::Trivial { conjugator: g },
            Some(_) => {
                pending.push(entries.len());
                SeparationOutcome::Unseparated { reasons: Vec::new() }
            }
            None => SeparationOutcome::NotApplicable { bound: order_bound },
        };
        entries.push(SeparationEntry {
            id: id.clone(),
            automorphism: psi.clone(),
            outcome,
        });
    }
    if pending.is_empty() {
        return Ok(CongruenceWitness {
            torus: torus.clone(),
            quotient: None,
            entries,
        });
    }

    let mut reasons: Vec<Vec<String>> = vec![Vec::new(); entries.len()];
    let mut best: Option<(usize, Vec<Option<Vec<u32>>>)> = None;
    for (qi, q) in sorted.iter().enumerate() {
        let mut hits = vec![None; entries.len()];
        for &i in &pending {
            match entries[i].automorphism.induced(q) {
                None => reasons[i].push(format!("{}: kernel not preserved", q.label())),
                Some(images) if is_inner_on(q.target(), &q.images(), &images) => {
                    reasons[i].push(format!("{}: induced map is inner", q.label()))
                }
                Some(images) => hits[i] = Some(images),
            }
        }
        let count = hits.iter().flatten().count();
        if best.as_ref().map_or(count > 0, |(_, b)| count > b.iter().flatten().count()) {
            best = Some((qi, hits));
            if count == pending.len() {
                break;
            }
        }
    }
    let quotient = best.as_ref().map(|(qi, _)| sorted[*qi].clone());
    for &i in &pending {
        entries[i].outcome = match best.as_ref().and_then(|(_, hits)| hits[i].clone()) {
            Some(images) => SeparationOutcome::Separated { images },
            None => SeparationOutcome::Unseparated {
                reasons: std::mem::take(&mut reasons[i]),
            },
        };
    }
    Ok(CongruenceWitness {
        torus: torus.clone(),
        quotient,
        entries,
    })
}

/// Exact arithmetic in `T/⟨x³⟩`.
#[derive(Clone, Debug)]
pub struct CenterCubedQuotient {
    quotient: CentralQuotient,
}

impl CenterCubedQuotient {
    pub fn arithmetic(&self) -> &CentralQuotient {
        &self.quotient
    }

    pub fn x_bar(&self) -> QElement {
        let t = self.quotient.torus();
        self.quotient.project(&t.center_element())
    }

    /// Image of `q` under the map induced by `psi`; well defined because
    /// `ψ(x³) = x^{±3}`.
    pub fn induced(&self, psi: &TorusAutomorphism, q: &QElement) -> QElement {
        self.quotient.project(&psi.apply(&self.quotient.lift(q)))
    }

    /// Whether `psi` induces the identity on the generators.
    pub fn induces_identity(&self, psi: &TorusAutomorphism) -> bool {
        self.quotient
            .generators()
            .iter()
            .all(|g| self.induced(psi, g) == *g)
    }
}

pub fn center_cubed_quotient(torus: &MappingTorus) -> Result<CenterCubedQuotient> {
    if torus.rank() < 2 {
        return Err(Error::Invalid("needs rank at least 2".into()));
    }
    Ok(CenterCubedQuotient {
        quotient: CentralQuotient::with_power(torus.clone(), 3)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::FreeAutomorphism;
    use crate::congruence::enumerate_finite_quotients;
    use crate::words::Alphabet;

    fn torus(images: &[&str]) -> MappingTorus {
        let a = Alphabet::new(images.len() as u32).unwrap();
        MappingTorus::new(FreeAutomorphism::parse_images(images, a).unwrap()).unwrap()
    }

    fn inverting(t: &MappingTorus) -> TorusAutomorphism {
        TorusAutomorphism::parse_text("a -> a\nb -> b\nt -> t^-1\n", t).unwrap()
    }

    #[test]
    fn center_actions() {
        let t = torus(&["b", "a"]);
        assert_eq!(detect_center_inverting(&inverting(&t)).unwrap(), CenterAction::Inverting);
        assert_eq!(
            detect_center_inverting(&TorusAutomorphism::identity(&t)).unwrap(),
            CenterAction::Fixing
        );
        let ad_t = TorusAutomorphism::inner(&t, &t.t());
        assert_eq!(detect_center_inverting(&ad_t).unwrap(), CenterAction::Fixing);
        assert_eq!(ad_t.is_inner(), Some(t.t()));
        assert!(TorusAutomorphism::parse_text("a -> b\nb -> b\nt -> t^1\n", &t).is_err());
    }

    #[test]
    fn inner_detection() {
        let t = torus(&["b", "A"]);
        for g in ["t^3 ab", "t^-1 B", "t^0 aab", "t^5 1"] {
            let g = t.parse_element(g).unwrap();
            let psi = TorusAutomorphism::inner(&t, &g);
            let h = psi.is_inner().unwrap();
            assert_eq!(TorusAutomorphism::inner(&t, &h), psi);
        }
        assert!(inverting(&torus(&["b", "a"])).is_inner().is_none());
    }

    #[test]
    fn separation_of_the_inverting_map() {
        let t = torus(&["b", "a"]);
        let qs = enumerate_finite_quotients(&t, 48);
        let autos = vec![
            ("psi".to_string(), inverting(&t)),
            ("id".to_string(), TorusAutomorphism::identity(&t)),
        ];
        let w = verify_separation(&t, &qs, &autos, 12).unwrap();
        w.verify().unwrap();
        assert!(matches!(w.outcome("psi"), Some(SeparationOutcome::Separated { .. })));
        assert!(matches!(w.outcome("id"), Some(SeparationOutcome::Trivial { .. })));
        assert!(w.quotient.as_ref().unwrap().order() <= 48);
        let mut reversed = qs.clone();
        reversed.reverse();
        assert_eq!(verify_separation(&t, &reversed, &autos, 12).unwrap(), w);
    }

    #[test]
    fn center_cubed_examples() {
        let t = torus(&["b", "a"]);
        let c = center_cubed_quotient(&t).unwrap();
        let x = c.x_bar();
        assert_eq!(c.arithmetic().element_order(&x), Some(3));
        assert_eq!(x, c.arithmetic().pow(&c.arithmetic().project(&t.t()), 2));
        assert!(c.induces_identity(&TorusAutomorphism::identity(&t)));
        let psi = inverting(&t);
        assert_eq!(c.induced(&psi, &x), c.arithmetic().invert(&x));
        assert_ne!(c.induced(&psi, &x), x);
    }
}
