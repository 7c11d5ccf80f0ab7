//! Conjugacy of outer automorphism classes.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::fingerprint::{fingerprint, FingerprintConfig};
use super::FreeAutomorphism;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::words::{least_rotation, Alphabet, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutConjugacy {
    /// `θ` with `[θ∘φ∘θ⁻¹] = [ψ]`, verified.
    Conjugate(FreeAutomorphism),
    /// A fingerprint field on which the classes differ.
    Distinguished(String),
    Unresolved,
}

/// Whitehead's elementary Nielsen automorphisms in a fixed order:
/// multiplications `xᵢ ↦ xᵢx_j^±`, `xᵢ ↦ x_j^±xᵢ`, inversions, transpositions.
pub fn elementary_nielsen(alphabet: Alphabet) -> Vec<FreeAutomorphism> {
    let m = alphabet.rank();
    let gens = alphabet.generators();
    let letter = |g: u32, inv: bool| Word::from_letters(alphabet, [Letter::new(g, inv)]);
    let with = |i: u32, img: Word, inv_img: Word| {
        let mut images = gens.clone();
        let mut inverse = gens.clone();
        images[i as usize - 1] = img;
        inverse[i as usize - 1] = inv_img;
        FreeAutomorphism::from_pair(images, inverse)
    };
    let mut out = Vec::new();
    for i in 1..=m {
        for j in (1..=m).filter(|&j| j != i) {
            for inv in [false, true] {
                let xi = letter(i, false);
                out.push(with(i, xi.mul(&letter(j, inv)), xi.mul(&letter(j, !inv))));
                out.push(with(i, letter(j, inv).mul(&xi), letter(j, !inv).mul(&xi)));
            }
        }
    }
    for i in 1..=m {
        out.push(with(i, letter(i, true), letter(i, true)));
    }
    for i in 1..=m {
        for j in i + 1..=m {
            let mut images = gens.clone();
            images.swap(i as usize - 1, j as usize - 1);
            out.push(FreeAutomorphism::from_pair(images.clone(), images));
        }
    }
    out
}

/// A canonical representative `ad_g∘φ` of the outer class of `φ`: the first
/// image is the least rotation of its cyclic core, and the remaining freedom
/// (powers of the root of that core) is spent minimising the other images
/// in shortlex order.
pub fn outer_normal_form(phi: &FreeAutomorphism) -> FreeAutomorphism {
    if phi.rank() == 1 {
        return phi.clone();
    }
    let (core, c) = phi.images()[0].cyclic_reduce();
    let offset = least_rotation(&core);
    let g0 = c.mul(&core.prefix(offset));
    let root = core.rotate(offset).primitive_root();
    let base: Vec<Word> = phi.images()[1..].iter().map(|w| w.conjugate_by(&g0)).collect();
    let span = base.iter().map(Word::len).max().unwrap_or(0);
    let window = (span / root.len() + 2) as i64;
    let mut best: Option<(Vec<Word>, i64)> = None;
    for n in -window..=window {
        let r = root.pow(n);
        let cand: Vec<Word> = base.iter().map(|w| w.conjugate_by(&r)).collect();
        if best.as_ref().map_or(true, |(b, _)| cand < *b) {
            best = Some((cand, n));
        }
    }
    let (_, n) = best.expect("window is nonempty");
    let g = g0.mul(&root.pow(n));
    FreeAutomorphism::inner(&g).compose(phi)
}

/// Exact check of `[θ∘φ∘θ⁻¹] = [ψ]`.
pub fn is_out_conjugator(phi: &FreeAutomorphism, psi: &FreeAutomorphism, theta: &FreeAutomorphism) -> bool {
    phi.conjugated_by(theta)
        .compose(&psi.inverse())
        .is_inner()
        .is_some()
}

struct Node {
    side: u8,
    /// `θ` with `current = [θ∘start∘θ⁻¹]`.
    conjugator: FreeAutomorphism,
    current: FreeAutomorphism,
}

/// Decides whether `[φ]` and `[ψ]` are conjugate in Out(F_m).
///
/// Fingerprints give the negative answer. The positive side is a
/// bidirectional best-first search over conjugation by elementary Nielsen
/// automorphisms, keyed by [`outer_normal_form`] and ordered by total image
/// length; each expansion costs one budget step.
pub fn out_conjugate(
    phi: &FreeAutomorphism,
    psi: &FreeAutomorphism,
    budget: Budget,
) -> Result<OutConjugacy> {
    if phi.alphabet() != psi.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: phi.alphabet().rank(),
            right: psi.alphabet().rank(),
        });
    }
    let config = FingerprintConfig::default();
    if let Some(field) = fingerprint(phi, &config).distinguishing_field(&fingerprint(psi, &config)) {
        return Ok(OutConjugacy::Distinguished(field));
    }
    let alphabet = phi.alphabet();
    let id = FreeAutomorphism::identity(alphabet);
    if is_out_conjugator(phi, psi, &id) {
        return Ok(OutConjugacy::Conjugate(id));
    }

    let moves = elementary_nielsen(alphabet);
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<Vec<Word>, usize> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for (side, start) in [(0u8, phi), (1u8, psi)] {
        let current = outer_normal_form(start);
        if let Some(&other) = index.get(current.images()) {
            // only possible when the two normal forms coincide
            let theta = nodes[other].conjugator.clone();
            if is_out_conjugator(phi, psi, &theta) {
                return Ok(OutConjugacy::Conjugate(theta));
            }
            continue;
        }
        index.insert(current.images().to_vec(), nodes.len());
        heap.push(Reverse((current.size(), nodes.len())));
        nodes.push(Node {
            side,
            conjugator: id.clone(),
            current,
        });
    }

    let mut meter = budget.meter();
    while let Some(Reverse((_, at))) = heap.pop() {
        if !meter.tick() {
            break;
        }
        for n in &moves {
            let next = outer_normal_form(&nodes[at].current.conjugated_by(n));
            match index.get(next.images()) {
                Some(&seen) if nodes[seen].side == nodes[at].side => {}
                Some(&seen) => {
                    let here = n.compose(&nodes[at].conjugator);
                    let (theta, rho) = if nodes[at].side == 0 {
                        (here, nodes[seen].conjugator.clone())
                    } else {
                        (nodes[seen].conjugator.clone(), here)
                    };
                    let candidate = rho.inverse().compose(&theta);
                    if is_out_conjugator(phi, psi, &candidate) {
                        return Ok(OutConjugacy::Conjugate(candidate));
                    }
                }
                None => {
                    let conjugator = n.compose(&nodes[at].conjugator);
                    index.insert(next.images().to_vec(), nodes.len());
                    heap.push(Reverse((next.size(), nodes.len())));
                    nodes.push(Node {
                        side: nodes[at].side,
                        conjugator,
                        current: next,
                    });
                }
            }
        }
    }
    Ok(OutConjugacy::Unresolved)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn auto(images: &[&str]) -> FreeAutomorphism {
        FreeAutomorphism::parse_images(images, Alphabet::new(images.len() as u32).unwrap()).unwrap()
    }

    #[test]
    fn nielsen_moves_are_automorphisms() {
        for m in 1..=3 {
            let a = Alphabet::new(m).unwrap();
            let moves = elementary_nielsen(a);
            let m = m as usize;
            assert_eq!(moves.len(), 4 * m * (m - 1) + m + m * (m - 1) / 2);
            for n in moves {
                let checked = FreeAutomorphism::new(n.images().to_vec()).unwrap();
                assert_eq!(checked.inverse_images(), n.inverse_images());
            }
        }
    }

    #[test]
    fn normal_form_is_class_invariant() {
        let phi = auto(&["bA", "A"]);
        let nf = outer_normal_form(&phi);
        for g in ["ab", "BaaB", "b", "AbabA"] {
            let g = Word::parse(g, f2()).unwrap();
            let twisted = FreeAutomorphism::inner(&g).compose(&phi);
            assert_eq!(outer_normal_form(&twisted), nf);
        }
        assert!(nf.compose(&phi.inverse()).is_inner().is_some());
    }

    #[test]
    fn spec_examples() {
        let swap = auto(&["b", "a"]);
        let id = auto(&["a", "b"]);
        let budget = Budget::default();
        assert_eq!(
            out_conjugate(&swap, &swap, budget).unwrap(),
            OutConjugacy::Conjugate(id.clone())
        );
        match out_conjugate(&swap, &id, budget).unwrap() {
            OutConjugacy::Distinguished(field) => assert!(field.starts_with("finite_order"), "{field}"),
            other => panic!("{other:?}"),
        }
        let g = Word::parse("ab", f2()).unwrap();
        let ad = FreeAutomorphism::inner(&g);
        let psi = swap.conjugated_by(&ad);
        match out_conjugate(&swap, &psi, budget).unwrap() {
            OutConjugacy::Conjugate(theta) => assert!(is_out_conjugator(&swap, &psi, &theta)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn finds_nontrivial_conjugators() {
        let budget = Budget::default();
        let phi = auto(&["bA", "A"]);
        let moves = elementary_nielsen(f2());
        for t in [&[0usize][..], &[0, 5], &[2, 9, 3], &[1, 1, 8, 6]] {
            let theta = t.iter().fold(auto(&["a", "b"]), |acc, &i| moves[i].compose(&acc));
            let psi = phi.conjugated_by(&theta);
            match out_conjugate(&phi, &psi, budget).unwrap() {
                OutConjugacy::Conjugate(found) => assert!(is_out_conjugator(&phi, &psi, &found)),
                other => panic!("{t:?}: {other:?}"),
            }
        }
    }
}
