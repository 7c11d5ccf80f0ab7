//! Finite quotients of mapping tori and the torsion-separation checker.
//!
//! Quotients are built from an epimorphism `h : F_m → G₀` onto a small
//! library group. Its orbit `h, h∘φ, h∘φ², …` (up to kernel) gives a
//! `φ`-invariant kernel with image `Ḡ ⊂ G₀ᴸ` and an induced automorphism
//! `φ̄`. Whenever `φ̄ⁿ = ad_{c⁻¹}` with `φ̄(c) = c`, the element `(n, c)` is
//! central in `Ḡ ⋊ ℤ` and `T → (Ḡ ⋊ ℤ)/⟨(n, c)⟩` is a finite quotient of
//! order `n·|Ḡ|`, with `t ↦ (1, 1)`.

mod separation;
mod zz;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::finite_group::{FiniteGroupTable, SmallGroup};
use crate::mapping_torus::{MappingTorus, TorusElement};
use crate::words::Word;

pub use separation::{
    center_cubed_quotient, detect_center_inverting, verify_separation, CenterAction,
    CenterCubedQuotient, CongruenceWitness, SeparationEntry, SeparationOutcome, TorusAutomorphism,
};
pub use zz::{z_rtimes_z_congruence, ZzAutomorphism, ZzVerdict};

/// Library groups used as quotient seeds, in enumeration order.
pub const LIBRARY: [SmallGroup; 12] = [
    SmallGroup::Cyclic(1),
    SmallGroup::Cyclic(2),
    SmallGroup::Cyclic(3),
    SmallGroup::Cyclic(4),
    SmallGroup::Cyclic(5),
    SmallGroup::Cyclic(6),
    SmallGroup::Symmetric(3),
    SmallGroup::Cyclic(7),
    SmallGroup::Dihedral(4),
    SmallGroup::Dihedral(5),
    SmallGroup::Alternating4,
    SmallGroup::Symmetric(4),
];

/// A surjection from a free group or a mapping torus onto a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuotient {
    target: FiniteGroupTable,
    generator_images: Vec<u32>,
    t_image: Option<u32>,
    label: String,
    classes: Vec<u32>,
    t_order: usize,
}

impl FiniteQuotient {
    pub fn new(
        target: FiniteGroupTable,
        generator_images: Vec<u32>,
        t_image: Option<u32>,
        label: String,
    ) -> Self {
        let mut gens = generator_images.clone();
        gens.extend(t_image);
        let classes = target.conjugacy_classes(&gens);
        let t_order = t_image.map_or(1, |t| target.element_order(t));
        FiniteQuotient {
            target,
            generator_images,
            t_image,
            label,
            classes,
            t_order,
        }
    }

    pub fn target(&self) -> &FiniteGroupTable {
        &self.target
    }

    pub fn order(&self) -> usize {
        self.target.order()
    }

    pub fn generator_images(&self) -> &[u32] {
        &self.generator_images
    }

    pub fn t_image(&self) -> Option<u32> {
        self.t_image
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Images of the fibre generators followed by the image of `t`.
    pub fn images(&self) -> Vec<u32> {
        let mut out = self.generator_images.clone();
        out.extend(self.t_image);
        out
    }

    pub fn eval_word(&self, w: &Word) -> u32 {
        self.target.eval_word(w, &self.generator_images)
    }

    pub fn eval(&self, x: &TorusElement) -> u32 {
        let t = self.t_image.unwrap_or(self.target.identity());
        let tl = self.target.pow(t, x.t_exp.rem_euclid(self.t_order as i64));
        self.target.mul(tl, self.eval_word(&x.fibre))
    }

    /// Label of the conjugacy class of a target element.
    pub fn class_of(&self, g: u32) -> u32 {
        self.classes[g as usize]
    }

    /// Checks the table, surjectivity, and for torus sources the relations
    /// `t⁻¹·xᵢ·t = φ(xᵢ)`.
    pub fn verify(&self, torus: Option<&MappingTorus>) -> Result<()> {
        self.target.verify_axioms()?;
        if !self.target.generates(&self.images()) {
            return Err(Error::Falsified(format!("{}: images do not generate", self.label)));
        }
        if let Some(t) = torus {
            let ti = self.t_image.ok_or_else(|| Error::Invalid("missing image of t".into()))?;
            for (i, w) in t.monodromy().images().iter().enumerate() {
                let lhs = self.target.conj(self.generator_images[i], ti);
                if lhs != self.eval_word(w) {
                    return Err(Error::Falsified(format!(
                        "{}: relation for generator {} fails",
                        self.label,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether two quotients of the same source have the same kernel: the
    /// diagonal image is then the graph of an isomorphism.
    pub fn same_kernel(&self, other: &FiniteQuotient) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let pairs: Vec<(u32, u32)> = self.images().into_iter().zip(other.images()).collect();
        let mul = |x: &(u32, u32), y: &(u32, u32)| {
            (self.target.mul(x.0, y.0), other.target.mul(x.1, y.1))
        };
        let e = (self.target.identity(), other.target.identity());
        FiniteGroupTable::from_closure(e, &pairs, mul, self.order()).is_some()
    }
}

/// The quotients of a torus produced by the construction above, sorted by
/// order (discovery order within an order) with duplicate kernels removed.
#[derive(Clone, Debug)]
pub struct QuotientFamily {
    quotients: Vec<FiniteQuotient>,
    max_order: usize,
}

impl QuotientFamily {
    pub fn build(torus: &MappingTorus, max_order: usize) -> Self {
        QuotientFamily {
            quotients: enumerate_finite_quotients(torus, max_order),
            max_order,
        }
    }

    pub fn quotients(&self) -> &[FiniteQuotient] {
        &self.quotients
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Index of the first quotient in which the images of `x` and `y` lie
    /// in different conjugacy classes.
    pub fn separating(&self, x: &TorusElement, y: &TorusElement, range: std::ops::Range<usize>) -> Option<usize> {
        range.into_iter().find(|&i| {
            let q = &self.quotients[i];
            q.class_of(q.eval(x)) != q.class_of(q.eval(y))
        })
    }
}

/// Deterministic list of quotients of `torus` of order at most `max_order`;
/// the trivial quotient comes first.
pub fn enumerate_finite_quotients(torus: &MappingTorus, max_order: usize) -> Vec<FiniteQuotient> {
    let mut found: Vec<FiniteQuotient> = Vec::new();
    for seed in LIBRARY {
        if seed.order() > max_order {
            continue;
        }
        let g0 = seed.table();
        for h in kernel_representatives(&g0, torus.rank()) {
            extensions_from_seed(torus, seed, &g0, &h, max_order, &mut found);
        }
    }
    found.sort_by_key(FiniteQuotient::order);
    let mut kept: Vec<FiniteQuotient> = Vec::new();
    for q in found {
        if !kept.iter().any(|k| k.same_kernel(&q)) {
            kept.push(q);
        }
    }
    kept
}

/// One epimorphism `F_m → G` per kernel, as generator image tuples.
pub(crate) fn kernel_representatives(g: &FiniteGroupTable, rank: usize) -> Vec<Vec<u32>> {
    let auts = g.automorphisms();
    let n = g.order() as u32;
    let mut keys = BTreeSet::new();
    let mut t = vec![0u32; rank];
    loop {
        if g.generates(&t) {
            let key = auts
                .iter()
                .map(|a| t.iter().map(|&x| a[x as usize]).collect::<Vec<u32>>())
                .min()
                .expect("identity automorphism");
            keys.insert(key);
        }
        let mut j = rank;
        loop {
            if j == 0 {
                return keys.into_iter().collect();
            }
            j -= 1;
            t[j] += 1;
            if t[j] < n {
                break;
            }
            t[j] = 0;
        }
    }
}

fn extensions_from_seed(
    torus: &MappingTorus,
    seed: SmallGroup,
    g0: &FiniteGroupTable,
    h: &[u32],
    max_order: usize,
    out: &mut Vec<FiniteQuotient>,
) {
    let phi = torus.monodromy();
    let pull = |h: &[u32]| -> Vec<u32> { phi.images().iter().map(|w| g0.eval_word(w, h)).collect() };
    let same_kernel = |a: &[u32], b: &[u32]| g0.extend_hom(a, g0, b).is_some();
    // the φ-orbit of the kernel of h
    let mut orbit = vec![h.to_vec()];
    loop {
        let next = pull(orbit.last().expect("nonempty"));
        if same_kernel(h, &next) || orbit.len() > torus.order() as usize {
            break;
        }
        orbit.push(next);
    }
    let len = orbit.len();
    let gens: Vec<Vec<u32>> = (0..torus.rank())
        .map(|i| orbit.iter().map(|o| o[i]).collect())
        .collect();
    let mul = |x: &Vec<u32>, y: &Vec<u32>| x.iter().zip(y).map(|(&a, &b)| g0.mul(a, b)).collect::<Vec<u32>>();
    let Some(bar) = FiniteGroupTable::from_closure(vec![g0.identity(); len], &gens, mul, max_order) else {
        return;
    };
    let gbar = &bar.table;
    let size = gbar.order();
    let phi_images: Vec<u32> = phi.images().iter().map(|w| gbar.eval_word(w, &bar.gens)).collect();
    let Some(phibar) = gbar.extend_hom(&bar.gens, gbar, &phi_images) else {
        return;
    };
    let inner: Vec<Vec<u32>> = (0..size as u32)
        .map(|c| (0..size as u32).map(|y| gbar.conj(y, c)).collect())
        .collect();
    let compose = |p: &[u32], q: &[u32]| q.iter().map(|&y| p[y as usize]).collect::<Vec<u32>>();
    // powers φ̄⁰, φ̄¹, … up to the largest admissible n
    let max_n = max_order / size;
    let mut powers = vec![(0..size as u32).collect::<Vec<u32>>()];
    for _ in 0..max_n {
        let next = compose(&phibar, powers.last().expect("nonempty"));
        powers.push(next);
    }
    let label_base = if len == 1 {
        seed.name()
    } else {
        format!("{}^{}", seed.name(), len)
    };
    for n in 1..=max_n {
        // φ̄ⁿ = ad_{c⁻¹}, i.e. φ̄ⁿ(y) = c·y·c⁻¹
        for c in 0..size as u32 {
            if phibar[c as usize] != c || inner[gbar.inv(c) as usize] != powers[n] {
                continue;
            }
            let table = extension_table(gbar, &powers[..n], n, c);
            let gen_images = bar.gens.clone();
            let label = format!("{label_base} x| Z/{n} c={c}");
            // t ↦ (1, 1), which is (0, c⁻¹) when n = 1
            let t_image = if n == 1 { gbar.inv(c) } else { size as u32 };
            out.push(FiniteQuotient::new(table, gen_images, Some(t_image), label));
        }
    }
}

/// `(Ḡ ⋊ ℤ)/⟨(n, c)⟩` with element `r·|Ḡ| + g` standing for `(r, g)`.
fn extension_table(gbar: &FiniteGroupTable, powers: &[Vec<u32>], n: usize, c: u32) -> FiniteGroupTable {
    let size = gbar.order();
    let order = n * size;
    let c_inv = gbar.inv(c);
    let mut product = vec![0u32; order * order];
    for x in 0..order {
        let (a, f) = (x / size, (x % size) as u32);
        for y in 0..order {
            let (b, g) = (y / size, (y % size) as u32);
            let mut w = gbar.mul(powers[b][f as usize], g);
            let mut s = a + b;
            if s >= n {
                s -= n;
                w = gbar.mul(c_inv, w);
            }
            product[x * order + y] = (s * size) as u32 + w;
        }
    }
    FiniteGroupTable::from_product_unchecked(order, product, 0).expect("extension table")
}
