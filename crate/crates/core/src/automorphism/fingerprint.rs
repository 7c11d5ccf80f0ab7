//! Invariants of outer automorphism classes under conjugation in Out(F_m).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{outer_order_with_ceiling, FreeAutomorphism, OrderSearch, DEFAULT_CEILING};
use crate::finite_group::{FiniteGroupTable, SmallGroup};

#[derive(Clone, Debug)]
pub struct FingerprintConfig {
    pub order_bound: u32,
    pub ceiling: usize,
    pub targets: Vec<SmallGroup>,
    /// Skip a target when `|G|^m` exceeds this.
    pub max_homs: usize,
}

impl Default for FingerprintConfig {
    fn default() -> Self {
        FingerprintConfig {
            order_bound: 64,
            ceiling: DEFAULT_CEILING,
            targets: vec![
                SmallGroup::Cyclic(2),
                SmallGroup::Cyclic(3),
                SmallGroup::Cyclic(4),
                SmallGroup::Symmetric(3),
            ],
            max_homs: 60_000,
        }
    }
}

/// What is known about the order of `[φ]` in Out(F_m).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderStatus {
    Finite(u32),
    /// No power up to the bound is inner.
    NoneUpTo(u32),
    /// No power below `below` is inner; the search stopped on the ceiling.
    Undetermined { below: u32 },
}

impl OrderStatus {
    /// Largest `j` such that powers `1..=j` are known to be non-inner.
    fn non_inner_through(self) -> u32 {
        match self {
            OrderStatus::Finite(k) => k - 1,
            OrderStatus::NoneUpTo(b) => b,
            OrderStatus::Undetermined { below } => below - 1,
        }
    }

    fn contradicts(self, other: OrderStatus) -> bool {
        match (self, other) {
            (OrderStatus::Finite(a), OrderStatus::Finite(b)) => a != b,
            (OrderStatus::Finite(a), o) | (o, OrderStatus::Finite(a)) => a <= o.non_inner_through(),
            _ => false,
        }
    }
}

impl fmt::Display for OrderStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderStatus::Finite(k) => write!(f, "{k}"),
            OrderStatus::NoneUpTo(b) => write!(f, "none up to {b}"),
            OrderStatus::Undetermined { below } => write!(f, "none below {below}"),
        }
    }
}

/// Action of `φ` on the kernels of epimorphisms `F_m → G`: one entry
/// `(cycle length c, order in Out(G) of the automorphism induced by φᶜ)` per
/// cycle, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientSignature {
    pub target: String,
    pub cycles: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutInvariantFingerprint {
    /// Coefficients of `det(x·I − M)` from `xᵐ` down to the constant term.
    pub abelianization_char_poly: Vec<i64>,
    pub finite_order: OrderStatus,
    pub quotient_action_signatures: Vec<QuotientSignature>,
    /// Number of `⟨φ⟩`-orbits on `Hom(F_m, G)/Inn(G)` per target.
    pub short_orbit_counts: Vec<(String, usize)>,
}

impl OutInvariantFingerprint {
    /// A field on which the two fingerprints provably differ, rendered as
    /// `name: left vs right`.
    pub fn distinguishing_field(&self, other: &Self) -> Option<String> {
        if self.finite_order.contradicts(other.finite_order) {
            return Some(format!(
                "finite_order: {} vs {}",
                self.finite_order, other.finite_order
            ));
        }
        if self.abelianization_char_poly != other.abelianization_char_poly {
            return Some(format!(
                "abelianization_char_poly: {} vs {}",
                format_poly(&self.abelianization_char_poly),
                format_poly(&other.abelianization_char_poly)
            ));
        }
        for a in &self.quotient_action_signatures {
            if let Some(b) = other.quotient_action_signatures.iter().find(|b| b.target == a.target) {
                if a.cycles != b.cycles {
                    return Some(format!(
                        "quotient_action_signatures({}): {:?} vs {:?}",
                        a.target, a.cycles, b.cycles
                    ));
                }
            }
        }
        for (name, a) in &self.short_orbit_counts {
            if let Some((_, b)) = other.short_orbit_counts.iter().find(|(n, _)| n == name) {
                if a != b {
                    return Some(format!("short_orbit_counts({name}): {a} vs {b}"));
                }
            }
        }
        None
    }
}

pub fn format_poly(coeffs: &[i64]) -> String {
    let deg = coeffs.len() - 1;
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        let p = deg - i;
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let mono = match p {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{p}"),
        };
        if mag != 1 || p == 0 {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Characteristic polynomial by Faddeev–LeVerrier, exact over the integers.
pub(crate) fn char_poly(a: &[Vec<i64>]) -> Vec<i64> {
    let n = a.len();
    let a: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[0] = 1;
    let mut mk = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{k−1}·I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * mk[l][j]).sum();
            }
            next[i][i] += coeffs[k - 1];
        }
        mk = next;
        let trace: i128 = (0..n)
            .map(|i| (0..n).map(|l| a[i][l] * mk[l][i]).sum::<i128>())
            .sum();
        coeffs[k] = -trace / k as i128;
    }
    coeffs.into_iter().map(|c| c as i64).collect()
}

pub fn fingerprint(phi: &FreeAutomorphism, config: &FingerprintConfig) -> OutInvariantFingerprint {
    let finite_order = match outer_order_with_ceiling(phi, config.order_bound, config.ceiling) {
        OrderSearch::Found(c) => OrderStatus::Finite(c.order),
        OrderSearch::Absent { bound } => OrderStatus::NoneUpTo(bound),
        OrderSearch::Exceeded { power } => OrderStatus::Undetermined { below: power },
    };
    let mut signatures = Vec::new();
    let mut orbit_counts = Vec::new();
    for &target in &config.targets {
        let homs = (target.order() as u128).pow(phi.rank() as u32);
        if homs > config.max_homs as u128 {
            continue;
        }
        let action = HomAction::new(target.table(), phi);
        signatures.push(QuotientSignature {
            target: target.name(),
            cycles: action.kernel_signature(),
        });
        orbit_counts.push((target.name(), action.inner_class_orbits()));
    }
    OutInvariantFingerprint {
        abelianization_char_poly: char_poly(&phi.abelianization()),
        finite_order,
        quotient_action_signatures: signatures,
        short_orbit_counts: orbit_counts,
    }
}

/// Precomputed action of an automorphism on `Hom(F_m, G)` by `h ↦ h∘φ`.
struct HomAction<'a> {
    group: FiniteGroupTable,
    phi: &'a FreeAutomorphism,
    automorphisms: Vec<Vec<u32>>,
    inner: BTreeSet<Vec<u32>>,
}

impl<'a> HomAction<'a> {
    fn new(group: FiniteGroupTable, phi: &'a FreeAutomorphism) -> Self {
        let automorphisms = group.automorphisms();
        let n = group.order() as u32;
        let inner = (0..n)
            .map(|g| (0..n).map(|y| group.conj(y, g)).collect())
            .collect();
        HomAction {
            group,
            phi,
            automorphisms,
            inner,
        }
    }

    fn tuples(&self) -> Vec<Vec<u32>> {
        let m = self.phi.rank();
        let n = self.group.order() as u32;
        let mut out = Vec::new();
        let mut t = vec![0u32; m];
        loop {
            out.push(t.clone());
            let mut j = m;
            loop {
                if j == 0 {
                    return out;
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

    fn pull_back(&self, h: &[u32]) -> Vec<u32> {
        self.phi
            .images()
            .iter()
            .map(|w| self.group.eval_word(w, h))
            .collect()
    }

    fn min_under<'b>(h: &[u32], perms: impl Iterator<Item = &'b Vec<u32>>) -> Vec<u32> {
        perms
            .map(|p| h.iter().map(|&x| p[x as usize]).collect::<Vec<u32>>())
            .min()
            .expect("nonempty group")
    }

    fn kernel_key(&self, h: &[u32]) -> Vec<u32> {
        Self::min_under(h, self.automorphisms.iter())
    }

    fn class_key(&self, h: &[u32]) -> Vec<u32> {
        Self::min_under(h, self.inner.iter())
    }

    fn out_order(&self, alpha: &[u32]) -> usize {
        let mut power = alpha.to_vec();
        let mut n = 1;
        while !self.inner.contains(&power) {
            power = power.iter().map(|&x| alpha[x as usize]).collect();
            n += 1;
        }
        n
    }

    fn kernel_signature(&self) -> Vec<(usize, usize)> {
        let kernels: BTreeSet<Vec<u32>> = self
            .tuples()
            .into_iter()
            .filter(|h| self.group.generates(h))
            .map(|h| self.kernel_key(&h))
            .collect();
        let mut done = BTreeSet::new();
        let mut cycles = Vec::new();
        for k in &kernels {
            if done.contains(k) {
                continue;
            }
            let mut h = k.clone();
            let mut len = 0;
            loop {
                h = self.pull_back(&h);
                len += 1;
                let key = self.kernel_key(&h);
                done.insert(key.clone());
                if key == *k {
                    break;
                }
            }
            // h = k∘φ^len has the kernel of k, so h = α∘k
            let alpha = self
                .group
                .extend_hom(k, &self.group, &h)
                .expect("same kernel gives an automorphism");
            cycles.push((len, self.out_order(&alpha)));
        }
        cycles.sort_unstable();
        cycles
    }

    fn inner_class_orbits(&self) -> usize {
        let classes: BTreeMap<Vec<u32>, ()> =
            self.tuples().iter().map(|h| (self.class_key(h), ())).collect();
        let mut done = BTreeSet::new();
        let mut orbits = 0;
        for c in classes.keys() {
            if done.contains(c) {
                continue;
            }
            orbits += 1;
            let mut h = c.clone();
            loop {
                done.insert(self.class_key(&h));
                h = self.class_key(&self.pull_back(&h));
                if h == *c {
                    break;
                }
            }
        }
        orbits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Alphabet, Word};

    fn auto(images: &[&str]) -> FreeAutomorphism {
        FreeAutomorphism::parse_images(images, Alphabet::new(images.len() as u32).unwrap()).unwrap()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&[vec![0, 1], vec![1, 0]]), vec![1, 0, -1]);
        assert_eq!(format_poly(&[1, 0, -1]), "x^2 - 1");
        assert_eq!(char_poly(&[vec![1, 0], vec![0, 1]]), vec![1, -2, 1]);
        assert_eq!(format_poly(&[1, -3, 3, -1]), "x^3 - 3x^2 + 3x - 1");
        // companion matrix of x³ − 2x + 5
        let c = vec![vec![0, 0, -5], vec![1, 0, 2], vec![0, 1, 0]];
        assert_eq!(char_poly(&c), vec![1, 0, -2, 5]);
    }

    #[test]
    fn spec_examples() {
        let cfg = FingerprintConfig::default();
        let swap = fingerprint(&auto(&["b", "a"]), &cfg);
        assert_eq!(swap.abelianization_char_poly, vec![1, 0, -1]);
        assert_eq!(swap.finite_order, OrderStatus::Finite(2));
        let id = fingerprint(&auto(&["a", "b"]), &cfg);
        assert_eq!(id.abelianization_char_poly, vec![1, -2, 1]);
        assert_eq!(id.finite_order, OrderStatus::Finite(1));
        let g = Word::parse("abA", Alphabet::new(2).unwrap()).unwrap();
        assert_eq!(fingerprint(&FreeAutomorphism::inner(&g), &cfg), id);
        assert!(swap.distinguishing_field(&id).is_some());
        assert_eq!(swap.distinguishing_field(&swap), None);
    }

    #[test]
    fn order_status_comparison() {
        use OrderStatus::*;
        assert!(Finite(2).contradicts(Finite(3)));
        assert!(Finite(2).contradicts(NoneUpTo(2)));
        assert!(!Finite(3).contradicts(NoneUpTo(2)));
        assert!(Finite(2).contradicts(Undetermined { below: 3 }));
        assert!(!Finite(3).contradicts(Undetermined { below: 3 }));
        assert!(!NoneUpTo(5).contradicts(Undetermined { below: 2 }));
    }

    #[test]
    fn identity_signature_counts_kernels() {
        let cfg = FingerprintConfig::default();
        let id = fingerprint(&auto(&["a", "b"]), &cfg);
        // F₂ has 3 kernels onto Z2 and 4 onto Z3, all fixed with trivial holonomy
        assert_eq!(id.quotient_action_signatures[0].cycles, vec![(1, 1); 3]);
        assert_eq!(id.quotient_action_signatures[1].cycles, vec![(1, 1); 4]);
        // Hom(F₂, Z2) has 4 elements and Z2 is abelian
        assert_eq!(id.short_orbit_counts[0], ("Z2".to_string(), 4));
    }
}
