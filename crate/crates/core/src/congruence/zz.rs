//! The rank 1 torus `ℤ ⋊ ℤ = ⟨f, t | t⁻¹ft = f⁻¹⟩` and its quotient by
//! `⟨f, t⁴⟩`.

use super::separation::{verify_separation, CongruenceWitness, TorusAutomorphism};
use super::FiniteQuotient;
use crate::automorphism::FreeAutomorphism;
use crate::finite_group::FiniteGroupTable;
use crate::mapping_torus::MappingTorus;
use crate::words::Alphabet;

/// Named automorphisms of `ℤ ⋊ ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZzAutomorphism {
    Identity,
    /// `f ↦ f, t ↦ t⁻¹`.
    Alpha,
    /// `f ↦ f, t ↦ tf`.
    Beta,
}

/// The pieces of the `ℤ ⋊ ℤ` construction.
#[derive(Clone, Debug)]
pub struct ZzVerdict {
    pub torus: MappingTorus,
    /// `ℤ ⋊ ℤ → ℤ/4`, `f ↦ 0`, `t ↦ 1`.
    pub quotient: FiniteQuotient,
}

impl ZzVerdict {
    pub fn new() -> Self {
        let a = Alphabet::new(1).expect("rank 1");
        let inversion = FreeAutomorphism::parse_images(&["A"], a).expect("inversion");
        let torus = MappingTorus::new(inversion).expect("inversion has order 2");
        let quotient = FiniteQuotient::new(FiniteGroupTable::cyclic(4), vec![0], Some(1), "Z4".into());
        ZzVerdict { torus, quotient }
    }

    pub fn automorphism(&self, which: ZzAutomorphism) -> TorusAutomorphism {
        let rules = match which {
            ZzAutomorphism::Identity => "a -> a\nt -> t^1\n",
            ZzAutomorphism::Alpha => "a -> a\nt -> t^-1\n",
            ZzAutomorphism::Beta => "a -> a\nt -> t^1 a\n",
        };
        TorusAutomorphism::parse_text(rules, &self.torus).expect("relations hold")
    }

    /// Runs the separation check for `autos` on the `ℤ/4` quotient alone.
    pub fn check(&self, autos: &[ZzAutomorphism]) -> CongruenceWitness {
        let named: Vec<(String, TorusAutomorphism)> = autos
            .iter()
            .map(|&w| (format!("{w:?}").to_lowercase(), self.automorphism(w)))
            .collect();
        verify_separation(&self.torus, std::slice::from_ref(&self.quotient), &named, 8)
            .expect("the quotient satisfies the relations")
    }
}

impl Default for ZzVerdict {
    fn default() -> Self {
        Self::new()
    }
}

/// The `ℤ/4` quotient with the evidence that `α` stays nontrivial on it.
pub fn z_rtimes_z_congruence() -> CongruenceWitness {
    ZzVerdict::new().check(&[ZzAutomorphism::Alpha])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::SeparationOutcome;

    #[test]
    fn alpha_inverts_z4() {
        let w = z_rtimes_z_congruence();
        w.verify().unwrap();
        assert_eq!(w.quotient.as_ref().unwrap().order(), 4);
        match w.outcome("alpha") {
            Some(SeparationOutcome::Separated { images }) => assert_eq!(images, &vec![0, 3]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_and_beta() {
        let zz = ZzVerdict::new();
        let w = zz.check(&[ZzAutomorphism::Identity, ZzAutomorphism::Beta]);
        assert!(matches!(w.outcome("identity"), Some(SeparationOutcome::Trivial { .. })));
        // β² is conjugation by f, and β acts trivially on ℤ/4
        let beta = zz.automorphism(ZzAutomorphism::Beta);
        assert_eq!(beta.outer_order(8).map(|(n, _)| n), Some(2));
        assert!(matches!(w.outcome("beta"), Some(SeparationOutcome::Unseparated { .. })));
    }
}
