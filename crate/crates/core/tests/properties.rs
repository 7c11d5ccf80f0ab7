use fincyc::central_quotient::CentralQuotient;
use fincyc::congruence::QuotientFamily;
use fincyc::mapping_torus::{sub_torus_monodromy, torus_conjugate, TorusConjugacy};
use fincyc::realization::{enumerate_graph_isometries, induced_automorphism, induced_outer_automorphism, FiniteGraph, Marking};
use fincyc::witness::Witness;
use fincyc::{Alphabet, Budget, FreeAutomorphism, MappingTorus, TorusElement, Word};
use proptest::prelude::*;

fn f2() -> Alphabet {
    Alphabet::new(2).unwrap()
}

fn monodromy(which: usize) -> FreeAutomorphism {
    let images: &[&str] = [&["b", "a"][..], &["b", "A"], &["bA", "A"], &["a", "Aba"]][which % 4];
    FreeAutomorphism::parse_images(images, f2()).unwrap()
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop_oneof![Just(1i32), Just(-1), Just(2), Just(-2)], 0..=max_len)
        .prop_map(|raw| fincyc::words::reduce(&raw, f2()).unwrap())
}

fn element_strategy() -> impl Strategy<Value = TorusElement> {
    (-5i64..=5, word_strategy(6)).prop_map(|(l, w)| TorusElement::new(l, w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn torus_normal_form_is_associative(m in 0usize..4, x in element_strategy(), y in element_strategy(), z in element_strategy()) {
        let t = MappingTorus::new(monodromy(m)).unwrap();
        prop_assert_eq!(t.multiply(&t.multiply(&x, &y), &z), t.multiply(&x, &t.multiply(&y, &z)));
        prop_assert_eq!(t.multiply(&x, &t.invert(&x)), t.identity());
    }

    #[test]
    fn center_commutes_with_everything(m in 0usize..4, x in element_strategy()) {
        let t = MappingTorus::new(monodromy(m)).unwrap();
        prop_assert!(t.commutes(&t.center().unwrap(), &x));
    }

    #[test]
    fn projection_is_a_homomorphism(m in 0usize..3, j in 1u32..4, x in element_strategy(), y in element_strategy()) {
        let q = CentralQuotient::with_power(MappingTorus::new(monodromy(m)).unwrap(), j).unwrap();
        let t = q.torus().clone();
        prop_assert_eq!(q.project(&t.multiply(&x, &y)), q.multiply(&q.project(&x), &q.project(&y)));
        prop_assert_eq!(q.project(&q.lift(&q.project(&x))), q.project(&x));
    }

    #[test]
    fn sub_torus_identity_holds(a in word_strategy(8), l in prop::sample::select(vec![1u32, 2, 4])) {
        let t = MappingTorus::new(monodromy(1)).unwrap();
        let spec = sub_torus_monodromy(&t, l, &a).unwrap();
        let n = (t.order() / l) as i64;
        let lhs = spec.induced_monodromy.pow(n);
        let rhs = FreeAutomorphism::inner(&spec.b).compose(&t.monodromy().pow(t.order() as i64));
        prop_assert_eq!(lhs.images(), rhs.images());
    }

    #[test]
    fn conjugacy_verdicts_are_symmetric(x in element_strategy(), w in element_strategy(), z in element_strategy()) {
        let t = MappingTorus::new(monodromy(0)).unwrap();
        let y = t.conjugate(&x, &w);
        match torus_conjugate(&x, &y, &t, Budget::default()) {
            TorusConjugacy::Conjugate(c) => prop_assert_eq!(t.conjugate(&x, &c), y.clone()),
            other => prop_assert!(false, "{other:?}"),
        }
        let forward = torus_conjugate(&x, &z, &t, Budget::default());
        let backward = torus_conjugate(&z, &x, &t, Budget::default());
        prop_assert_eq!(
            matches!(forward, TorusConjugacy::Conjugate(_)),
            matches!(backward, TorusConjugacy::Conjugate(_))
        );
        if let TorusConjugacy::NotConjugate(c) = forward {
            prop_assert!(c.verify(&x, &z, &t));
        }
    }

    #[test]
    fn witnesses_round_trip(x in element_strategy(), w in element_strategy()) {
        let phi = monodromy(0);
        let t = MappingTorus::new(phi.clone()).unwrap();
        let y = t.conjugate(&x, &w);
        if let TorusConjugacy::Conjugate(conjugator) = torus_conjugate(&x, &y, &t, Budget::default()) {
            let text = Witness::TorusConjugate { phi, x, y, conjugator }.to_text();
            let back = Witness::parse(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
            prop_assert!(back.verify().is_ok());
        }
    }

    #[test]
    fn path_choice_changes_only_the_inner_part(steps in prop::collection::vec(0u32..6, 0..8)) {
        let g = FiniteGraph::parse("V 2\nE 0: 0 1\nE 1: 0 1\nE 2: 0 1\n").unwrap();
        let marking = Marking::canonical(&g);
        for sigma in enumerate_graph_isometries(&g) {
            // a random walk from the basepoint, then the tree path home
            let mut path = Vec::new();
            let mut at = marking.basepoint();
            for &s in &steps {
                let out: Vec<u32> = (0..g.half_edge_count() as u32).filter(|&h| g.origin(h) == at).collect();
                let h = out[s as usize % out.len()];
                path.push(h);
                at = g.terminus(h);
            }
            let target = sigma.vertex_perm[marking.basepoint() as usize];
            // walk back to the basepoint along the tree, then out to σ(v₀)
            let back: Vec<u32> = marking.tree_path(at).iter().rev().map(|&h| h ^ 1).collect();
            path.extend(back);
            path.extend_from_slice(marking.tree_path(target));
            let phi_c = induced_outer_automorphism(&marking, &sigma, &path).unwrap();
            let reference = induced_automorphism(&marking, &sigma).unwrap();
            prop_assert!(phi_c.compose(&reference.inverse()).is_inner().is_some());
        }
    }
}

#[test]
fn same_kernel_is_symmetric() {
    for m in 0..3 {
        let t = MappingTorus::new(monodromy(m)).unwrap();
        let family = QuotientFamily::build(&t, 24);
        let qs = family.quotients();
        for a in qs {
            for b in qs {
                assert_eq!(a.same_kernel(b), b.same_kernel(a));
            }
        }
        // the family is deduplicated by kernel
        for (i, a) in qs.iter().enumerate() {
            assert!(qs[i + 1..].iter().all(|b| !a.same_kernel(b)), "{}", a.label());
        }
    }
}
