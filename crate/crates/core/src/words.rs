//! Reduced words in a free group of finite rank.
//!
//! Generators are numbered `1..=rank`. A [`Letter`] is a signed generator
//! index, and a [`Word`] is always kept freely reduced. Letters are ordered
//! `a < A < b < B < ...`, which fixes the canonical rotation of
//! [`CyclicWord`] and the shortlex order on words.
//!
//! Inner automorphisms follow the convention `ad_g(w) = g⁻¹·w·g`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// The rank of a free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    rank: u32,
}

impl Alphabet {
    pub fn new(rank: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Invalid("rank must be at least 1".into()));
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    pub fn generator(self, gen: u32) -> Word {
        debug_assert!(gen >= 1 && gen <= self.rank);
        Word {
            alphabet: self,
            letters: vec![Letter::new(gen, false)],
        }
    }

    pub fn generators(self) -> Vec<Word> {
        (1..=self.rank).map(|g| self.generator(g)).collect()
    }

    /// All `2·rank` letters in canonical order.
    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..2 * self.rank).map(Letter::from_key)
    }

    pub fn identity(self) -> Word {
        Word {
            alphabet: self,
            letters: Vec::new(),
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        debug_assert!(gen >= 1);
        if inverse {
            Letter(-(gen as i32))
        } else {
            Letter(gen as i32)
        }
    }

    pub fn from_signed(index: i32) -> Self {
        debug_assert!(index != 0);
        Letter(index)
    }

    /// Inverse of [`Letter::key`].
    pub fn from_key(key: u32) -> Self {
        Letter::new(key / 2 + 1, key % 2 == 1)
    }

    /// 1-based generator number.
    pub fn gen(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// 0-based generator index.
    pub fn index(self) -> usize {
        self.gen() as usize - 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inv(self) -> Self {
        Letter(-self.0)
    }

    /// Position in the order `a, A, b, B, ...`; also the bit index used by
    /// letter-set bitmasks.
    pub fn key(self) -> u32 {
        2 * (self.gen() - 1) + self.is_inverse() as u32
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    /// Builds the reduced form of a sequence of letters that are already known
    /// to lie in the alphabet.
    pub fn from_letters(alphabet: Alphabet, letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            debug_assert!(l.gen() <= alphabet.rank);
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word {
            alphabet,
            letters: out,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Product `self · other`.
    ///
    /// # Panics
    /// If the two words live over different alphabets; use [`multiply`] for a
    /// checked product.
    pub fn mul(&self, other: &Word) -> Word {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let a = &self.letters;
        let b = &other.letters;
        let mut k = 0;
        while k < a.len() && k < b.len() && a[a.len() - 1 - k] == b[k].inv() {
            k += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * k);
        letters.extend_from_slice(&a[..a.len() - k]);
        letters.extend_from_slice(&b[k..]);
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    pub fn mul_letter(&self, l: Letter) -> Word {
        let mut out = self.clone();
        out.push(l);
        out
    }

    pub(crate) fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inv()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub(crate) fn extend(&mut self, other: &Word) {
        for &l in &other.letters {
            self.push(l);
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = self.alphabet.identity();
        for _ in 0..n.unsigned_abs() {
            out.extend(&base);
        }
        out
    }

    /// `g⁻¹ · self · g`, i.e. `ad_g(self)`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.inverse().mul(self).mul(g)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(f), Some(l)) => self.len() == 1 || f != l.inv(),
            _ => true,
        }
    }

    /// Returns `(core, conjugator)` with `self = conjugator · core · conjugator⁻¹`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.letters[i] == self.letters[n - 1 - i].inv() {
            i += 1;
        }
        let conj = Word {
            alphabet: self.alphabet,
            letters: self.letters[..i].to_vec(),
        };
        let core = Word {
            alphabet: self.alphabet,
            letters: self.letters[i..n - i].to_vec(),
        };
        (core, conj)
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters[..k].to_vec(),
        }
    }

    /// Shortest `r` with `self = r^e` for some `e ≥ 1`; the word itself when
    /// it is not a proper power. Meaningful for cyclically reduced words.
    pub fn primitive_root(&self) -> Word {
        let n = self.len();
        for d in 1..n {
            if n % d == 0 && (d..n).all(|i| self.letters[i] == self.letters[i - d]) {
                return self.prefix(d);
            }
        }
        self.clone()
    }

    /// Exponent sum of each generator (abelianization image).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.alphabet.rank as usize];
        for l in &self.letters {
            sums[l.index()] += if l.is_inverse() { -1 } else { 1 };
        }
        sums
    }

    pub fn parse(s: &str, alphabet: Alphabet) -> Result<Word> {
        let chars: Vec<char> = s.chars().collect();
        if chars.is_empty() {
            return Err(Error::parse(1, 1, "empty word (write `1` for the identity)"));
        }
        if s == "1" {
            return Ok(alphabet.identity());
        }
        let mut raw = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let (gen, inverse) = if (c == 'x' || c == 'X')
                && i + 1 < chars.len()
                && chars[i + 1].is_ascii_digit()
            {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i + 1..j].iter().collect();
                let gen: u64 = digits
                    .parse()
                    .map_err(|_| Error::parse(1, col, "generator number too large"))?;
                i = j;
                (gen, c == 'X')
            } else if c.is_ascii_lowercase() {
                i += 1;
                ((c as u8 - b'a') as u64 + 1, false)
            } else if c.is_ascii_uppercase() {
                i += 1;
                ((c as u8 - b'A') as u64 + 1, true)
            } else {
                return Err(Error::parse(1, col, format!("unexpected character {c:?}")));
            };
            if gen == 0 || gen > alphabet.rank as u64 {
                return Err(Error::parse(
                    1,
                    col,
                    format!("generator {gen} out of range for rank {}", alphabet.rank),
                ));
            }
            raw.push(Letter::new(gen as u32, inverse));
        }
        Ok(Word::from_letters(alphabet, raw))
    }
}

impl Ord for Word {
    /// Shortlex order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet
            .cmp(&other.alphabet)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_letter(l: Letter, rank: u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if rank <= 26 {
        let base = if l.is_inverse() { b'A' } else { b'a' };
        write!(f, "{}", (base + (l.gen() - 1) as u8) as char)
    } else if l.is_inverse() {
        write!(f, "X{}", l.gen())
    } else {
        write!(f, "x{}", l.gen())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            fmt_letter(l, self.alphabet.rank, f)?;
        }
        Ok(())
    }
}

/// Conjugacy class of a word, stored as its canonical representative: the
/// cyclic core rotated to the least rotation (earliest offset on ties).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    rep: Word,
}

impl CyclicWord {
    pub fn new(w: &Word) -> Self {
        let (core, _) = w.cyclic_reduce();
        let offset = least_rotation(&core);
        CyclicWord {
            rep: core.rotate(offset),
        }
    }

    pub fn representative(&self) -> &Word {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rep.is_empty()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

pub(crate) fn least_rotation(w: &Word) -> usize {
    let l = w.letters();
    let n = l.len();
    let mut best = 0;
    for k in 1..n {
        let ord = (0..n)
            .map(|i| l[(k + i) % n].cmp(&l[(best + i) % n]))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal);
        if ord == Ordering::Less {
            best = k;
        }
    }
    best
}

/// Free reduction of a raw sequence of signed generator indices.
pub fn reduce(raw: &[i32], alphabet: Alphabet) -> Result<Word> {
    let mut letters = Vec::with_capacity(raw.len());
    for &x in raw {
        if x == 0 || x.unsigned_abs() > alphabet.rank {
            return Err(Error::IndexOutOfRange {
                index: x as i64,
                rank: alphabet.rank,
            });
        }
        letters.push(Letter::from_signed(x));
    }
    Ok(Word::from_letters(alphabet, letters))
}

pub fn multiply(u: &Word, v: &Word) -> Result<Word> {
    if u.alphabet != v.alphabet {
        return Err(Error::AlphabetMismatch {
            left: u.alphabet.rank,
            right: v.alphabet.rank,
        });
    }
    Ok(u.mul(v))
}

pub fn invert(u: &Word) -> Word {
    u.inverse()
}

/// `(core, conjugator)` with `u = conjugator · core · conjugator⁻¹`.
pub fn cyclic_reduce(u: &Word) -> (Word, Word) {
    u.cyclic_reduce()
}

/// Some `g` with `g⁻¹·u·g = v`, or `None` when `u` and `v` are not conjugate.
///
/// The conjugator uses the least rotation offset that carries the core of `u`
/// onto the core of `v`.
pub fn conjugate_in_free(u: &Word, v: &Word) -> Option<Word> {
    if u.alphabet != v.alphabet {
        return None;
    }
    let (cu, pu) = u.cyclic_reduce();
    let (cv, pv) = v.cyclic_reduce();
    if cu.len() != cv.len() {
        return None;
    }
    let n = cu.len();
    let offset = if n == 0 {
        0
    } else {
        (0..n).find(|&i| {
            (0..n).all(|j| cu.letters[(i + j) % n] == cv.letters[j])
        })?
    };
    // cv = p⁻¹·cu·p with p the first `offset` letters of cu
    let p = cu.prefix(offset);
    Some(pu.mul(&p).mul(&pv.inverse()))
}

/// Finds `g` with `images[i] = g⁻¹·xᵢ·g` for every generator, if one exists.
pub fn solve_inner(images: &[Word]) -> Result<Option<Word>> {
    let alphabet = match images.first() {
        Some(w) => w.alphabet,
        None => return Err(Error::WrongImageCount { expected: 1, got: 0 }),
    };
    let m = alphabet.rank as usize;
    if images.len() != m {
        return Err(Error::WrongImageCount {
            expected: m,
            got: images.len(),
        });
    }
    if let Some(w) = images.iter().find(|w| w.alphabet != alphabet) {
        return Err(Error::AlphabetMismatch {
            left: alphabet.rank,
            right: w.alphabet.rank,
        });
    }
    if m == 1 {
        // F₁ is abelian: the only inner automorphism is the identity
        return Ok((images[0] == alphabet.generator(1)).then(|| alphabet.identity()));
    }
    let x1 = Letter::new(1, false);
    let (core, c) = images[0].cyclic_reduce();
    if core.letters() != [x1] {
        return Ok(None);
    }
    // images[0] = c·x1·c⁻¹ forces g = x1⁻ⁿ·c⁻¹; read n off the second image
    let z = images[1].conjugate_by(&c);
    let lead = |l: Letter| z.letters().iter().take_while(|&&y| y == l).count() as i64;
    let n = lead(x1) - lead(x1.inv());
    let g = alphabet.generator(1).pow(-n).mul(&c.inverse());
    let ok = images
        .iter()
        .enumerate()
        .all(|(i, img)| alphabet.generator(i as u32 + 1).conjugate_by(&g) == *img);
    Ok(ok.then_some(g))
}

/// Some `g` with `g⁻¹·us[i]·g = vs[i]` for all `i` simultaneously.
pub fn simultaneous_conjugator(us: &[Word], vs: &[Word]) -> Option<Word> {
    if us.len() != vs.len() {
        return None;
    }
    let Some(pivot) = us.iter().position(|u| !u.is_empty()) else {
        let first = vs.first()?;
        return vs.iter().all(Word::is_empty).then(|| first.alphabet.identity());
    };
    let g0 = conjugate_in_free(&us[pivot], &vs[pivot])?;
    // every conjugator is g0·rⁿ with r the root of vs[pivot]
    let (vcore, vconj) = vs[pivot].cyclic_reduce();
    let root = vcore.primitive_root();
    let r = vconj.mul(&root).mul(&vconj.inverse());
    let check = |g: &Word| us.iter().zip(vs).all(|(u, v)| u.conjugate_by(g) == *v);
    if check(&g0) {
        return Some(g0);
    }
    let span: usize = us.iter().chain(vs).map(Word::len).sum();
    let window = (span / root.len().max(1) + 2) as i64;
    (1..=window)
        .flat_map(|n| [n, -n])
        .map(|n| g0.mul(&r.pow(n)))
        .find(|g| check(g))
}

/// All reduced words of exactly `len` letters, in shortlex order.
pub fn reduced_words(alphabet: Alphabet, len: usize) -> Vec<Word> {
    let mut layer = vec![alphabet.identity()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * 2 * alphabet.rank as usize);
        for w in &layer {
            for l in alphabet.letters() {
                if w.last() != Some(l.inv()) {
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    next.push(Word { alphabet, letters });
                }
            }
        }
        layer = next;
    }
    layer
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn w(s: &str, rank: u32) -> Word {
        Word::parse(s, Alphabet::new(rank).unwrap()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&[1, -1], f2()).unwrap().is_empty());
        let a3 = Alphabet::new(3).unwrap();
        assert_eq!(reduce(&[1, 2, -2, 3], a3).unwrap().to_string(), "ac");
        assert_eq!(reduce(&[1, 2, -1, -2], f2()).unwrap().to_string(), "abAB");
        assert!(matches!(
            reduce(&[3], f2()),
            Err(Error::IndexOutOfRange { index: 3, rank: 2 })
        ));
        assert!(reduce(&[0], f2()).is_err());
    }

    #[test]
    fn multiply_examples() {
        assert!(multiply(&w("ab", 2), &w("BA", 2)).unwrap().is_empty());
        assert_eq!(multiply(&w("ab", 2), &w("ba", 2)).unwrap().to_string(), "abba");
        assert!(multiply(&w("abA", 2), &w("aBA", 2)).unwrap().is_empty());
        assert!(matches!(
            multiply(&w("a", 2), &w("a", 3)),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert(&w("ab", 2)).to_string(), "BA");
        assert_eq!(invert(&w("1", 2)).to_string(), "1");
        assert_eq!(invert(&w("aBc", 3)).to_string(), "CbA");
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, c) = cyclic_reduce(&w("Aba", 2));
        assert_eq!((core.to_string(), c.to_string()), ("b".into(), "A".into()));
        let (core, c) = cyclic_reduce(&w("ab", 2));
        assert_eq!((core.to_string(), c.to_string()), ("ab".into(), "1".into()));
        let u = w("BAbab", 2);
        let (core, c) = cyclic_reduce(&u);
        assert_eq!(core.to_string(), "b");
        assert_eq!(c.mul(&core).mul(&c.inverse()), u);
        // a single letter is its own core
        assert_eq!(cyclic_reduce(&w("a", 2)).0.to_string(), "a");
    }

    #[test]
    fn conjugate_in_free_examples() {
        assert_eq!(conjugate_in_free(&w("ab", 2), &w("ba", 2)).unwrap().to_string(), "a");
        assert_eq!(conjugate_in_free(&w("a", 2), &w("b", 2)), None);
        let (u, v) = (w("abAB", 2), w("bABa", 2));
        let g = conjugate_in_free(&u, &v).unwrap();
        assert_eq!(u.conjugate_by(&g), v);
        assert_eq!(conjugate_in_free(&w("1", 2), &w("1", 2)).unwrap().to_string(), "1");
    }

    #[test]
    fn solve_inner_examples() {
        assert_eq!(solve_inner(&[w("a", 2), w("b", 2)]).unwrap().unwrap().to_string(), "1");
        assert_eq!(solve_inner(&[w("Bab", 2), w("b", 2)]).unwrap().unwrap().to_string(), "b");
        assert_eq!(solve_inner(&[w("b", 2), w("a", 2)]).unwrap(), None);
        assert!(matches!(
            solve_inner(&[w("a", 2)]),
            Err(Error::WrongImageCount { expected: 2, got: 1 })
        ));
        // rank one: identity only
        assert_eq!(solve_inner(&[w("a", 1)]).unwrap().unwrap().to_string(), "1");
        assert_eq!(solve_inner(&[w("A", 1)]).unwrap(), None);
    }

    #[test]
    fn text_grammar() {
        let a = Alphabet::new(30).unwrap();
        let u = Word::parse("x3X30x1", a).unwrap();
        assert_eq!(u.to_string(), "x3X30x1");
        // lowercase x without digits is generator 24
        assert_eq!(w("x", 26).letters()[0].gen(), 24);
        assert_eq!(w("x2", 26).letters()[0].gen(), 2);
        assert!(Word::parse("a b", f2()).is_err());
        assert!(Word::parse("", f2()).is_err());
        assert!(Word::parse("c", f2()).is_err());
        assert!(Word::parse("x0", f2()).is_err());
        match Word::parse("ab?", f2()) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_word_canonical_rotation() {
        let c = CyclicWord::new(&w("BAba", 2));
        assert_eq!(c.representative().to_string(), "aBAb");
        assert_eq!(CyclicWord::new(&w("bA", 2)), CyclicWord::new(&w("Ab", 2)));
        assert_eq!(CyclicWord::new(&w("Aba", 2)).representative().to_string(), "b");
    }

    #[test]
    fn simultaneous_conjugation() {
        let g = w("abA", 2);
        let us = [w("ab", 2), w("b", 2)];
        let vs: Vec<Word> = us.iter().map(|u| u.conjugate_by(&g)).collect();
        let h = simultaneous_conjugator(&us, &vs).unwrap();
        assert!(us.iter().zip(&vs).all(|(u, v)| u.conjugate_by(&h) == *v));
        // individually conjugate but not simultaneously
        assert_eq!(simultaneous_conjugator(&[w("a", 2), w("b", 2)], &[w("a", 2), w("BAbab", 2)]), None);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(w("abab", 2).primitive_root().to_string(), "ab");
        assert_eq!(w("aba", 2).primitive_root().to_string(), "aba");
        assert_eq!(w("aaa", 2).primitive_root().to_string(), "a");
    }

    #[test]
    fn reduced_word_counts() {
        let counts: Vec<usize> = (0..5).map(|n| reduced_words(f2(), n).len()).collect();
        assert_eq!(counts, vec![1, 4, 12, 36, 108]);
    }
}
