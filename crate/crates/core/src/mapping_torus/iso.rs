//! Fibre- and orientation-preserving isomorphisms of mapping tori.

use super::MappingTorus;
use crate::automorphism::{out_conjugate, FreeAutomorphism, OutConjugacy};
use crate::budget::Budget;
use crate::whitehead::{orbit_equivalent, OrbitVerdict, TupleClass};
use crate::words::reduced_words;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoIsomorphism {
    /// `θ` with `θ∘α₁∘θ⁻¹ = α₂` exactly.
    Isomorphic(FreeAutomorphism),
    Distinguished(String),
    Unresolved,
}

/// Exact check of `θ∘α₁∘θ⁻¹ = α₂`.
pub fn is_aut_conjugator(a1: &FreeAutomorphism, a2: &FreeAutomorphism, theta: &FreeAutomorphism) -> bool {
    a1.conjugated_by(theta).images() == a2.images()
}

/// Looks for `θ ∈ Aut(F_m)` with `θ∘α₁∘θ⁻¹ = α₂`.
///
/// Necessary conditions first: equal ranks, equal outer orders, and since
/// such a `θ` carries `f₀` of the first torus to `f₀` of the second, equal
/// triviality and equal automorphism orbits of the two `f₀` classes. Then
/// an outer conjugator `θ` is refined: `θ∘α₁∘θ⁻¹ = ad_g∘α₂` and any `h` with
/// `α₂(h)·h⁻¹ = g` makes `ad_h∘θ` exact. `h` is searched by length within
/// the budget; failure is `Unresolved`.
pub fn fo_isomorphic(t1: &MappingTorus, t2: &MappingTorus, budget: Budget) -> FoIsomorphism {
    let (a1, a2) = (t1.monodromy(), t2.monodromy());
    if t1.rank() != t2.rank() {
        return FoIsomorphism::Distinguished(format!("rank: {} vs {}", t1.rank(), t2.rank()));
    }
    if t1.order() != t2.order() {
        return FoIsomorphism::Distinguished(format!("order: {} vs {}", t1.order(), t2.order()));
    }
    let (f1, f2) = (t1.f0(), t2.f0());
    if f1.is_empty() != f2.is_empty() {
        return FoIsomorphism::Distinguished(format!("f0: {f1} vs {f2}"));
    }
    if !f1.is_empty() {
        let (c1, c2) = (
            TupleClass::from_words(vec![f1.clone()]).expect("one word"),
            TupleClass::from_words(vec![f2.clone()]).expect("one word"),
        );
        if let Ok(OrbitVerdict::Inequivalent) = orbit_equivalent(&c1, &c2, budget) {
            return FoIsomorphism::Distinguished(format!("f0 orbit: {f1} vs {f2}"));
        }
    }
    let theta = match out_conjugate(a1, a2, budget) {
        Ok(OutConjugacy::Conjugate(theta)) => theta,
        Ok(OutConjugacy::Distinguished(field)) => return FoIsomorphism::Distinguished(field),
        Ok(OutConjugacy::Unresolved) | Err(_) => return FoIsomorphism::Unresolved,
    };
    if is_aut_conjugator(a1, a2, &theta) {
        return FoIsomorphism::Isomorphic(theta);
    }
    if t1.rank() < 2 {
        // no inner automorphisms to absorb
        return FoIsomorphism::Unresolved;
    }
    let Some(g) = a1.conjugated_by(&theta).compose(&a2.inverse()).is_inner() else {
        return FoIsomorphism::Unresolved;
    };
    let mut meter = budget.meter();
    for len in 0.. {
        for h in reduced_words(t1.alphabet(), len) {
            if !meter.tick() {
                return FoIsomorphism::Unresolved;
            }
            if a2.apply(&h).mul(&h.inverse()) == g {
                let refined = FreeAutomorphism::inner(&h).compose(&theta);
                if is_aut_conjugator(a1, a2, &refined) {
                    return FoIsomorphism::Isomorphic(refined);
                }
            }
        }
    }
    FoIsomorphism::Unresolved
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Alphabet, Word};

    fn torus(images: &[&str]) -> MappingTorus {
        let a = Alphabet::new(images.len() as u32).unwrap();
        MappingTorus::new(FreeAutomorphism::parse_images(images, a).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        let swap = torus(&["b", "a"]);
        let budget = Budget::default();
        assert_eq!(
            fo_isomorphic(&swap, &swap, budget),
            FoIsomorphism::Isomorphic(FreeAutomorphism::identity(swap.alphabet()))
        );
        match fo_isomorphic(&swap, &torus(&["a", "b"]), budget) {
            FoIsomorphism::Distinguished(f) => assert!(f.starts_with("order"), "{f}"),
            other => panic!("{other:?}"),
        }
        let g = Word::parse("ab", swap.alphabet()).unwrap();
        let ad = FreeAutomorphism::inner(&g);
        let other = MappingTorus::new(swap.monodromy().conjugated_by(&ad)).unwrap();
        match fo_isomorphic(&swap, &other, budget) {
            FoIsomorphism::Isomorphic(theta) => {
                assert!(is_aut_conjugator(swap.monodromy(), other.monodromy(), &theta))
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn refinement_absorbs_inner_parts() {
        let rot = torus(&["b", "A"]);
        let theta = FreeAutomorphism::parse_images(&["ab", "b"], rot.alphabet()).unwrap();
        let other = MappingTorus::new(rot.monodromy().conjugated_by(&theta)).unwrap();
        match fo_isomorphic(&rot, &other, Budget::default()) {
            FoIsomorphism::Isomorphic(found) => {
                assert!(is_aut_conjugator(rot.monodromy(), other.monodromy(), &found))
            }
            v => panic!("{v:?}"),
        }
    }
}
