//! Automorphisms of a free group.
//!
//! Composition acts on the left: `φ.compose(ψ)` applies `ψ` first, so
//! `apply(φ∘ψ, w) = φ(ψ(w))`. With `ad_g(w) = g⁻¹wg` this gives
//! `ad_g ∘ ad_h = ad_{hg}`.

mod conjugacy;
mod fingerprint;
mod fold;

use std::fmt;

use crate::error::{Error, Result};
use crate::words::{solve_inner, Alphabet, Letter, Word};

pub use conjugacy::{
    elementary_nielsen, is_out_conjugator, out_conjugate, outer_normal_form, OutConjugacy,
};
pub use fingerprint::{fingerprint, FingerprintConfig, OrderStatus, OutInvariantFingerprint};

/// Default per-image length at which [`outer_order`] abandons a power.
pub const DEFAULT_CEILING: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeAutomorphism {
    alphabet: Alphabet,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl FreeAutomorphism {
    /// Verifies that `images` form a basis and caches the inverse.
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let alphabet = check_images(&images)?;
        let inverse_images = fold::invert_images(alphabet, &images)?;
        Ok(FreeAutomorphism {
            alphabet,
            images,
            inverse_images,
        })
    }

    /// Builds from images whose inverse is already known. The pair is checked
    /// in debug builds only.
    pub(crate) fn from_pair(images: Vec<Word>, inverse_images: Vec<Word>) -> Self {
        let alphabet = images[0].alphabet();
        let out = FreeAutomorphism {
            alphabet,
            images,
            inverse_images,
        };
        debug_assert!(out.inverse().compose(&out).is_identity());
        out
    }

    pub fn parse_images(images: &[&str], alphabet: Alphabet) -> Result<Self> {
        let words = images
            .iter()
            .map(|s| Word::parse(s, alphabet))
            .collect::<Result<Vec<_>>>()?;
        Self::new(words)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let gens = alphabet.generators();
        FreeAutomorphism {
            alphabet,
            images: gens.clone(),
            inverse_images: gens,
        }
    }

    /// `ad_g : w ↦ g⁻¹wg`.
    pub fn inner(g: &Word) -> Self {
        let alphabet = g.alphabet();
        let gi = g.inverse();
        FreeAutomorphism {
            alphabet,
            images: alphabet.generators().iter().map(|x| x.conjugate_by(g)).collect(),
            inverse_images: alphabet.generators().iter().map(|x| x.conjugate_by(&gi)).collect(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank() as usize
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    /// Sum of image lengths.
    pub fn size(&self) -> usize {
        self.images.iter().map(Word::len).sum()
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    /// # Panics
    /// On alphabet mismatch; see [`FreeAutomorphism::try_apply`].
    pub fn apply(&self, w: &Word) -> Word {
        assert_eq!(w.alphabet(), self.alphabet, "alphabet mismatch");
        substitute(&self.images, w)
    }

    pub fn try_apply(&self, w: &Word) -> Result<Word> {
        if w.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.rank(),
                right: w.alphabet().rank(),
            });
        }
        Ok(substitute(&self.images, w))
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        substitute(&self.inverse_images, w)
    }

    pub fn inverse(&self) -> Self {
        FreeAutomorphism {
            alphabet: self.alphabet,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        FreeAutomorphism {
            alphabet: self.alphabet,
            images: other.images.iter().map(|w| substitute(&self.images, w)).collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| substitute(&other.inverse_images, w))
                .collect(),
        }
    }

    pub fn try_compose(&self, other: &Self) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.rank(),
                right: other.alphabet.rank(),
            });
        }
        Ok(self.compose(other))
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeAutomorphism::identity(self.alphabet);
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                out = out.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq);
            }
        }
        out
    }

    /// `θ ∘ self ∘ θ⁻¹`.
    pub fn conjugated_by(&self, theta: &Self) -> Self {
        theta.compose(self).compose(&theta.inverse())
    }

    /// The `g` with `self = ad_g`, if the automorphism is inner.
    pub fn is_inner(&self) -> Option<Word> {
        solve_inner(&self.images).expect("images are well formed")
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::new(i as u32 + 1, false)])
    }

    /// Integer matrix of the action on the abelianization; column `i` holds
    /// the exponent sums of the image of generator `i`.
    pub fn abelianization(&self) -> Vec<Vec<i64>> {
        let m = self.rank();
        let cols: Vec<Vec<i64>> = self.images.iter().map(Word::exponent_sums).collect();
        (0..m).map(|r| (0..m).map(|c| cols[c][r]).collect()).collect()
    }

    /// Parses the one-line-per-generator text format (`a -> ab`). Blank lines
    /// and `#` comments are ignored; the rank is the number of rules.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rules: Vec<(usize, usize, &str, usize)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            let Some(arrow) = content.find("->") else {
                return Err(Error::parse(line_no, 1, "expected `<generator> -> <word>`"));
            };
            let lhs = content[..arrow].trim();
            let lead = content.len() - content.trim_start().len();
            let rhs_start = arrow + 2;
            let rhs_raw = &content[rhs_start..];
            let rhs = rhs_raw.trim();
            let rhs_col = rhs_start + (rhs_raw.len() - rhs_raw.trim_start().len()) + 1;
            let gen = parse_generator(lhs).ok_or_else(|| {
                Error::parse(line_no, lead + 1, format!("expected a generator, found {lhs:?}"))
            })?;
            rules.push((line_no, gen, rhs, rhs_col));
        }
        if rules.is_empty() {
            return Err(Error::parse(1, 1, "no generator rules"));
        }
        let alphabet = Alphabet::new(rules.len() as u32)?;
        let mut images: Vec<Option<Word>> = vec![None; rules.len()];
        for (expected, &(line_no, gen, rhs, col)) in rules.iter().enumerate() {
            if gen == 0 || gen > rules.len() {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("generator {gen} out of range for rank {}", rules.len()),
                ));
            }
            if images[gen - 1].is_some() {
                return Err(Error::parse(line_no, 1, format!("duplicate rule for generator {gen}")));
            }
            if gen != expected + 1 {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("rules must follow the alphabet: expected generator {}", expected + 1),
                ));
            }
            let w = Word::parse(rhs, alphabet).map_err(|e| e.at_line(line_no, col - 1))?;
            images[gen - 1] = Some(w);
        }
        Self::new(images.into_iter().map(|w| w.expect("all rules present")).collect())
    }

    /// Inverse of [`FreeAutomorphism::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.images.iter().enumerate() {
            out.push_str(&format!("{} -> {}\n", self.alphabet.generator(i as u32 + 1), w));
        }
        out
    }
}

impl fmt::Display for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn parse_generator(s: &str) -> Option<usize> {
    let mut chars = s.chars();
    let c = chars.next()?;
    let rest = chars.as_str();
    if rest.is_empty() && c.is_ascii_lowercase() {
        return Some((c as u8 - b'a') as usize + 1);
    }
    if c == 'x' && !rest.is_empty() && rest.chars().all(|d| d.is_ascii_digit()) {
        return rest.parse().ok();
    }
    None
}

fn check_images(images: &[Word]) -> Result<Alphabet> {
    let alphabet = images
        .first()
        .map(Word::alphabet)
        .ok_or(Error::WrongImageCount { expected: 1, got: 0 })?;
    if images.len() != alphabet.rank() as usize {
        return Err(Error::WrongImageCount {
            expected: alphabet.rank() as usize,
            got: images.len(),
        });
    }
    if let Some(w) = images.iter().find(|w| w.alphabet() != alphabet) {
        return Err(Error::AlphabetMismatch {
            left: alphabet.rank(),
            right: w.alphabet().rank(),
        });
    }
    Ok(alphabet)
}

/// Image of `w` under the endomorphism `xᵢ ↦ images[i]`.
pub(crate) fn substitute(images: &[Word], w: &Word) -> Word {
    let mut out = w.alphabet().identity();
    for l in w.letters() {
        let img = &images[l.index()];
        if l.is_inverse() {
            out.extend(&img.inverse());
        } else {
            out.extend(img);
        }
    }
    out
}

/// Least `k` with `φᵏ` inner, and `f₀` with `φᵏ = ad_{f₀⁻¹}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OuterOrderCertificate {
    pub order: u32,
    pub f0: Word,
}

impl OuterOrderCertificate {
    /// Re-checks `φᵏ = ad_{f₀⁻¹}` and that no smaller power is inner.
    pub fn verify(&self, phi: &FreeAutomorphism) -> Result<()> {
        if self.order == 0 {
            return Err(Error::Falsified("order must be positive".into()));
        }
        let mut images = phi.alphabet.generators();
        for j in 1..=self.order {
            images = images.iter().map(|w| substitute(&phi.images, w)).collect();
            let inner = solve_inner(&images)?;
            if j < self.order && inner.is_some() {
                return Err(Error::Falsified(format!("power {j} is already inner")));
            }
            if j == self.order && inner != Some(self.f0.inverse()) {
                return Err(Error::Falsified(format!("power {j} is not ad of f0⁻¹")));
            }
        }
        Ok(())
    }
}

/// Outcome of [`outer_order`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSearch {
    Found(OuterOrderCertificate),
    /// Some image of `φ^power` outgrew the length ceiling before an inner
    /// power was found.
    Exceeded { power: u32 },
    /// No power up to `bound` is inner.
    Absent { bound: u32 },
}

impl OrderSearch {
    pub fn certificate(&self) -> Option<&OuterOrderCertificate> {
        match self {
            OrderSearch::Found(c) => Some(c),
            _ => None,
        }
    }
}

pub fn outer_order(phi: &FreeAutomorphism, bound: u32) -> OrderSearch {
    outer_order_with_ceiling(phi, bound, DEFAULT_CEILING)
}

pub fn outer_order_with_ceiling(phi: &FreeAutomorphism, bound: u32, ceiling: usize) -> OrderSearch {
    let mut images = phi.alphabet.generators();
    for j in 1..=bound {
        images = images.iter().map(|w| substitute(&phi.images, w)).collect();
        if let Some(g) = solve_inner(&images).expect("images are well formed") {
            return OrderSearch::Found(OuterOrderCertificate {
                order: j,
                f0: g.inverse(),
            });
        }
        if images.iter().any(|w| w.len() > ceiling) {
            return OrderSearch::Exceeded { power: j };
        }
    }
    OrderSearch::Absent { bound }
}
