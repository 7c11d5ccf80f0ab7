//! Whitehead's algorithm for tuples of conjugacy classes.
//!
//! A tuple is a list of entries; an entry is usually one word, but may group
//! several words that must be conjugated simultaneously (written `u,v`).
//! Minimisation and the level-set search work on the flattened list of
//! cyclic words; grouped entries are re-checked on the final witness.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::automorphism::FreeAutomorphism;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::words::{simultaneous_conjugator, Alphabet, CyclicWord, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WhiteheadMove {
    /// Generator `i` maps to the letter with signed index `images[i]`.
    Permutation { images: Vec<i32> },
    /// `x ↦ (a⁻¹ if x⁻¹ ∈ A)·x·(a if x ∈ A)`, with `A` a set of letters
    /// stored as a bitmask over [`Letter::key`].
    TypeII { multiplier: Letter, set: u64 },
}

impl WhiteheadMove {
    /// `(kind, signed multiplier index, bitmask)`.
    fn sort_key(&self) -> (u8, i32, u64, Vec<i32>) {
        match self {
            WhiteheadMove::Permutation { images } => (0, 0, 0, images.clone()),
            WhiteheadMove::TypeII { multiplier, set } => (1, multiplier.signed(), *set, Vec::new()),
        }
    }

    pub fn automorphism(&self, alphabet: Alphabet) -> FreeAutomorphism {
        match self {
            WhiteheadMove::Permutation { images } => {
                let imgs: Vec<Word> = images
                    .iter()
                    .map(|&s| Word::from_letters(alphabet, [Letter::from_signed(s)]))
                    .collect();
                let mut inv = vec![alphabet.identity(); imgs.len()];
                for (i, &s) in images.iter().enumerate() {
                    let back = Letter::new(i as u32 + 1, s < 0);
                    inv[s.unsigned_abs() as usize - 1] = Word::from_letters(alphabet, [back]);
                }
                FreeAutomorphism::from_pair(imgs, inv)
            }
            WhiteheadMove::TypeII { multiplier, set } => {
                let a = *multiplier;
                let inverse_set = (set & !(1 << a.key())) | (1 << a.inv().key());
                FreeAutomorphism::from_pair(
                    type_ii_images(alphabet, a, *set),
                    type_ii_images(alphabet, a.inv(), inverse_set),
                )
            }
        }
    }
}

fn type_ii_images(alphabet: Alphabet, a: Letter, set: u64) -> Vec<Word> {
    let contains = |l: Letter| set & (1 << l.key()) != 0;
    let aw = Word::from_letters(alphabet, [a]);
    (1..=alphabet.rank())
        .map(|g| {
            let x = Letter::new(g, false);
            let mut w = Word::from_letters(alphabet, [x]);
            if g == a.gen() {
                return w;
            }
            if contains(x.inv()) {
                w = aw.inverse().mul(&w);
            }
            if contains(x) {
                w = w.mul(&aw);
            }
            w
        })
        .collect()
}

impl fmt::Display for WhiteheadMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WhiteheadMove::Permutation { images } => write!(f, "perm{images:?}"),
            WhiteheadMove::TypeII { multiplier, set } => {
                write!(f, "({}; {{", multiplier.signed())?;
                let members: Vec<String> = (0..64)
                    .filter(|k| set & (1 << k) != 0)
                    .map(|k| Letter::from_key(k).signed().to_string())
                    .collect();
                write!(f, "{}}})", members.join(","))
            }
        }
    }
}

/// All non-trivial Whitehead moves, in tie-breaking order.
pub fn whitehead_moves(alphabet: Alphabet) -> Vec<WhiteheadMove> {
    let m = alphabet.rank() as usize;
    let mut out = Vec::new();
    for perm in permutations(m) {
        for signs in 0u32..(1 << m) {
            let images: Vec<i32> = perm
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let g = p as i32 + 1;
                    if signs & (1 << i) != 0 {
                        -g
                    } else {
                        g
                    }
                })
                .collect();
            if images.iter().enumerate().all(|(i, &s)| s == i as i32 + 1) {
                continue;
            }
            out.push(WhiteheadMove::Permutation { images });
        }
    }
    let letters = 2 * m as u32;
    for a in alphabet.letters() {
        let others: Vec<u32> = (0..letters).filter(|&k| k != a.key() && k != a.inv().key()).collect();
        for choice in 0u64..(1 << others.len()) {
            if choice == 0 {
                continue;
            }
            let mut set = 1u64 << a.key();
            for (bit, &k) in others.iter().enumerate() {
                if choice & (1 << bit) != 0 {
                    set |= 1 << k;
                }
            }
            out.push(WhiteheadMove::TypeII { multiplier: a, set });
        }
    }
    out.sort_by_key(WhiteheadMove::sort_key);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// A tuple of conjugacy classes, possibly with grouped entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TupleClass {
    alphabet: Alphabet,
    groups: Vec<Vec<Word>>,
}

impl TupleClass {
    pub fn new(alphabet: Alphabet, groups: Vec<Vec<Word>>) -> Result<Self> {
        if groups.iter().any(Vec::is_empty) {
            return Err(Error::Invalid("empty tuple entry".into()));
        }
        if let Some(w) = groups.iter().flatten().find(|w| w.alphabet() != alphabet) {
            return Err(Error::AlphabetMismatch {
                left: alphabet.rank(),
                right: w.alphabet().rank(),
            });
        }
        Ok(TupleClass { alphabet, groups })
    }

    /// One word per entry.
    pub fn from_words(words: Vec<Word>) -> Result<Self> {
        let alphabet = words
            .first()
            .map(Word::alphabet)
            .ok_or_else(|| Error::Invalid("empty tuple".into()))?;
        Self::new(alphabet, words.into_iter().map(|w| vec![w]).collect())
    }

    /// Parses `u;v;w` with `,` grouping words inside an entry.
    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Self> {
        let mut groups = Vec::new();
        let mut col = 1;
        for entry in s.split(';') {
            let mut group = Vec::new();
            for word in entry.split(',') {
                group.push(
                    Word::parse(word.trim(), alphabet)
                        .map_err(|e| e.at_line(1, col - 1 + (word.len() - word.trim_start().len())))?,
                );
                col += word.len() + 1;
            }
            groups.push(group);
        }
        Self::new(alphabet, groups)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn groups(&self) -> &[Vec<Word>] {
        &self.groups
    }

    /// Group sizes; two tuples are comparable when these agree.
    pub fn shape(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// The flattened list of conjugacy classes.
    pub fn classes(&self) -> Vec<CyclicWord> {
        self.groups.iter().flatten().map(CyclicWord::new).collect()
    }

    pub fn total_length(&self) -> usize {
        self.classes().iter().map(CyclicWord::len).sum()
    }

    pub fn apply(&self, alpha: &FreeAutomorphism) -> TupleClass {
        TupleClass {
            alphabet: self.alphabet,
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|w| alpha.apply(w)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for TupleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            for (j, w) in g.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                if g.len() == 1 {
                    write!(f, "{}", CyclicWord::new(w).representative())?;
                } else {
                    write!(f, "{w}")?;
                }
            }
        }
        Ok(())
    }
}

fn apply_classes(alpha: &FreeAutomorphism, classes: &[CyclicWord]) -> Vec<CyclicWord> {
    classes
        .iter()
        .map(|c| CyclicWord::new(&alpha.apply(c.representative())))
        .collect()
}

fn total(classes: &[CyclicWord]) -> usize {
    classes.iter().map(CyclicWord::len).sum()
}

/// Result of [`whitehead_minimize`].
#[derive(Clone, Debug)]
pub struct Minimized {
    /// The image of the input under `witness`.
    pub tuple: TupleClass,
    pub moves: Vec<WhiteheadMove>,
    /// `m_n ∘ … ∘ m_1`.
    pub witness: FreeAutomorphism,
}

/// Applies length-reducing Whitehead moves until none reduces. Each step
/// takes the largest reduction; ties go to the least move in
/// [`whitehead_moves`] order.
pub fn whitehead_minimize(t: &TupleClass) -> Minimized {
    let alphabet = t.alphabet;
    let moves: Vec<(WhiteheadMove, FreeAutomorphism)> = whitehead_moves(alphabet)
        .into_iter()
        .map(|m| {
            let a = m.automorphism(alphabet);
            (m, a)
        })
        .collect();
    let mut classes = t.classes();
    let mut applied = Vec::new();
    let mut witness = FreeAutomorphism::identity(alphabet);
    loop {
        let current = total(&classes);
        let mut best: Option<(usize, usize, Vec<CyclicWord>)> = None;
        for (i, (_, a)) in moves.iter().enumerate() {
            let next = apply_classes(a, &classes);
            let len = total(&next);
            if len < current && best.as_ref().map_or(true, |(l, _, _)| len < *l) {
                best = Some((len, i, next));
            }
        }
        let Some((_, i, next)) = best else { break };
        classes = next;
        witness = moves[i].1.compose(&witness);
        applied.push(moves[i].0.clone());
    }
    Minimized {
        tuple: t.apply(&witness),
        moves: applied,
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    /// `α` carrying each class of the first tuple to the matching class of
    /// the second, verified.
    Equivalent(FreeAutomorphism),
    Inequivalent,
    Unresolved,
}

/// Checks that `alpha` maps `t1` onto `t2` entry by entry, with grouped
/// entries conjugated simultaneously.
pub fn verify_orbit_witness(t1: &TupleClass, t2: &TupleClass, alpha: &FreeAutomorphism) -> bool {
    t1.shape() == t2.shape()
        && t1.groups.iter().zip(&t2.groups).all(|(g1, g2)| {
            let images: Vec<Word> = g1.iter().map(|w| alpha.apply(w)).collect();
            if images.len() == 1 {
                CyclicWord::new(&images[0]) == CyclicWord::new(&g2[0])
            } else {
                simultaneous_conjugator(&images, g2).is_some()
            }
        })
}

/// Decides whether some automorphism carries `t1` to `t2`.
///
/// Both tuples are minimised; then the level set of the first minimum is
/// searched breadth-first under all Whitehead moves that keep the length.
/// Each expanded tuple costs one budget step. With grouped entries the
/// class-level search can only propose a witness, so a failed simultaneous
/// check gives `Unresolved`.
pub fn orbit_equivalent(t1: &TupleClass, t2: &TupleClass, budget: Budget) -> Result<OrbitVerdict> {
    if t1.shape() != t2.shape() {
        return Err(Error::ArityMismatch {
            left: t1.groups.len(),
            right: t2.groups.len(),
        });
    }
    if t1.alphabet != t2.alphabet {
        return Err(Error::AlphabetMismatch {
            left: t1.alphabet.rank(),
            right: t2.alphabet.rank(),
        });
    }
    let grouped = t1.groups.iter().any(|g| g.len() > 1);
    let identity = FreeAutomorphism::identity(t1.alphabet);
    if verify_orbit_witness(t1, t2, &identity) {
        return Ok(OrbitVerdict::Equivalent(identity));
    }
    let m1 = whitehead_minimize(t1);
    let m2 = whitehead_minimize(t2);
    let (c1, c2) = (m1.tuple.classes(), m2.tuple.classes());
    if total(&c1) != total(&c2) {
        return Ok(OrbitVerdict::Inequivalent);
    }
    let level = total(&c1);
    let alphabet = t1.alphabet;
    let moves: Vec<FreeAutomorphism> = whitehead_moves(alphabet)
        .iter()
        .map(|m| m.automorphism(alphabet))
        .collect();
    let finish = |beta: &FreeAutomorphism| -> OrbitVerdict {
        let alpha = m2.witness.inverse().compose(beta).compose(&m1.witness);
        if verify_orbit_witness(t1, t2, &alpha) {
            OrbitVerdict::Equivalent(alpha)
        } else {
            debug_assert!(grouped, "class-level witness must verify");
            OrbitVerdict::Unresolved
        }
    };
    if c1 == c2 {
        return Ok(finish(&identity));
    }
    let mut seen: HashMap<Vec<CyclicWord>, ()> = HashMap::new();
    seen.insert(c1.clone(), ());
    let mut queue = VecDeque::from([(c1, identity)]);
    let mut meter = budget.meter();
    while let Some((classes, beta)) = queue.pop_front() {
        if !meter.tick() {
            return Ok(OrbitVerdict::Unresolved);
        }
        for a in &moves {
            let next = apply_classes(a, &classes);
            if total(&next) != level || seen.contains_key(&next) {
                continue;
            }
            let next_beta = a.compose(&beta);
            if next == c2 {
                return Ok(finish(&next_beta));
            }
            seen.insert(next.clone(), ());
            queue.push_back((next, next_beta));
        }
    }
    Ok(OrbitVerdict::Inequivalent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn tuple(s: &str) -> TupleClass {
        TupleClass::parse(s, f2()).unwrap()
    }

    #[test]
    fn move_counts() {
        // signed permutations minus identity, plus type II moves
        assert_eq!(whitehead_moves(f2()).len(), 7 + 12);
        let f3 = Alphabet::new(3).unwrap();
        assert_eq!(whitehead_moves(f3).len(), 47 + 90);
        for m in whitehead_moves(f3) {
            let a = m.automorphism(f3);
            let checked = FreeAutomorphism::new(a.images().to_vec()).unwrap();
            assert_eq!(checked.inverse_images(), a.inverse_images(), "{m}");
        }
    }

    #[test]
    fn minimize_examples() {
        let m = whitehead_minimize(&tuple("ab"));
        assert_eq!(m.tuple.total_length(), 1);
        assert_eq!(m.tuple.classes(), tuple("a").classes());
        assert_eq!(tuple("ab").apply(&m.witness).classes(), m.tuple.classes());
        let m = whitehead_minimize(&tuple("a"));
        assert!(m.moves.is_empty());
        let m = whitehead_minimize(&tuple("abAB"));
        assert_eq!(m.tuple.total_length(), 4);
        assert!(m.moves.is_empty());
    }

    #[test]
    fn orbit_examples() {
        let b = Budget::default();
        match orbit_equivalent(&tuple("ab"), &tuple("a"), b).unwrap() {
            OrbitVerdict::Equivalent(alpha) => {
                assert!(verify_orbit_witness(&tuple("ab"), &tuple("a"), &alpha))
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(
            orbit_equivalent(&tuple("abAB"), &tuple("a"), b).unwrap(),
            OrbitVerdict::Inequivalent
        );
        assert_eq!(
            orbit_equivalent(&tuple("a;b"), &tuple("a;b"), b).unwrap(),
            OrbitVerdict::Equivalent(FreeAutomorphism::identity(f2()))
        );
        assert!(matches!(
            orbit_equivalent(&tuple("a;b"), &tuple("a"), b),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn level_set_search_needed() {
        // both minimal of length 4, related by an automorphism
        let b = Budget::default();
        match orbit_equivalent(&tuple("aabb"), &tuple("aaBB"), b).unwrap() {
            OrbitVerdict::Equivalent(alpha) => {
                assert!(verify_orbit_witness(&tuple("aabb"), &tuple("aaBB"), &alpha))
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(
            orbit_equivalent(&tuple("aabb"), &tuple("abAB"), b).unwrap(),
            OrbitVerdict::Inequivalent
        );
    }

    #[test]
    fn grouped_entries() {
        let b = Budget::default();
        let t1 = tuple("a,b");
        let t2 = tuple("b,a");
        match orbit_equivalent(&t1, &t2, b).unwrap() {
            OrbitVerdict::Equivalent(alpha) => assert!(verify_orbit_witness(&t1, &t2, &alpha)),
            v => panic!("{v:?}"),
        }
        assert_eq!(t1.to_string(), "a,b");
        assert_eq!(tuple("Aba;ab").to_string(), "b;ab");
    }
}
