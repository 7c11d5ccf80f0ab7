//! Finite groups given by full multiplication tables.

use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroupTable {
    order: usize,
    /// Row-major: `product[a * order + b] = a·b`.
    product: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
}

impl FiniteGroupTable {
    /// Builds a table from a row-major product table, checking the group axioms.
    pub fn from_product(order: usize, product: Vec<u32>, identity: u32) -> Result<Self> {
        let table = Self::from_product_unchecked(order, product, identity)?;
        table.verify_axioms()?;
        Ok(table)
    }

    /// Builds a table whose associativity is guaranteed by construction;
    /// only identity and inverses are checked.
    pub(crate) fn from_product_unchecked(
        order: usize,
        product: Vec<u32>,
        identity: u32,
    ) -> Result<Self> {
        if order == 0 || product.len() != order * order || identity as usize >= order {
            return Err(Error::Invalid("malformed group table".into()));
        }
        if product.iter().any(|&p| p as usize >= order) {
            return Err(Error::Invalid("table entry out of range".into()));
        }
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if product[a * order + b] == identity {
                    inverse[a] = b as u32;
                    break;
                }
            }
            if inverse[a] == u32::MAX {
                return Err(Error::Invalid(format!("element {a} has no inverse")));
            }
        }
        Ok(FiniteGroupTable {
            order,
            product,
            inverse,
            identity,
        })
    }

    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.order;
        let e = self.identity;
        for a in 0..n as u32 {
            if self.mul(e, a) != a || self.mul(a, e) != a {
                return Err(Error::Invalid(format!("identity fails on {a}")));
            }
            let ai = self.inv(a);
            if self.mul(a, ai) != e || self.mul(ai, a) != e {
                return Err(Error::Invalid(format!("inverse fails on {a}")));
            }
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                let ab = self.mul(a, b);
                for c in 0..n as u32 {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::Invalid(format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn product_table(&self) -> &[u32] {
        &self.product
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.product[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut out = self.identity;
        for _ in 0..e.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// `g⁻¹·a·g`.
    pub fn conj(&self, a: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// Image of a free-group word under the homomorphism sending generator
    /// `i` to `images[i]`.
    pub fn eval_word(&self, w: &Word, images: &[u32]) -> u32 {
        w.letters().iter().fold(self.identity, |acc, l| {
            let g = images[l.index()];
            self.mul(acc, if l.is_inverse() { self.inv(g) } else { g })
        })
    }

    /// Elements of the subgroup generated by `gens`, in discovery order.
    pub fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        let mut out = vec![self.identity];
        seen[self.identity as usize] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    pub fn generates(&self, gens: &[u32]) -> bool {
        self.closure(gens).len() == self.order
    }

    /// Conjugacy class label of each element (the least element of its class).
    /// `gens` must generate the group.
    pub fn conjugacy_classes(&self, gens: &[u32]) -> Vec<u32> {
        let mut label = vec![u32::MAX; self.order];
        for start in 0..self.order as u32 {
            if label[start as usize] != u32::MAX {
                continue;
            }
            label[start as usize] = start;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &g in gens {
                    let y = self.conj(x, g);
                    if label[y as usize] == u32::MAX {
                        label[y as usize] = start;
                        stack.push(y);
                    }
                }
            }
        }
        label
    }

    /// Extends `gens[i] ↦ images[i]` to a homomorphism into `target`,
    /// returning the full element map, or `None` if the assignment does not
    /// extend. `gens` must generate this group.
    pub fn extend_hom(
        &self,
        gens: &[u32],
        target: &FiniteGroupTable,
        images: &[u32],
    ) -> Option<Vec<u32>> {
        let mut map = vec![u32::MAX; self.order];
        map[self.identity as usize] = target.identity;
        let mut queue = vec![self.identity];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for (&g, &img) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let fy = target.mul(map[x as usize], img);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = fy;
                    queue.push(y);
                } else if map[y as usize] != fy {
                    return None;
                }
            }
            i += 1;
        }
        (queue.len() == self.order).then_some(map)
    }

    /// All automorphisms, each as a full permutation of the elements.
    pub fn automorphisms(&self) -> Vec<Vec<u32>> {
        let gens = self.small_generating_set();
        let mut out = Vec::new();
        let mut choice = vec![0u32; gens.len()];
        loop {
            if let Some(map) = self.extend_hom(&gens, self, &choice) {
                let mut hit = vec![false; self.order];
                map.iter().for_each(|&y| hit[y as usize] = true);
                if hit.iter().all(|&h| h) {
                    out.push(map);
                }
            }
            // odometer over all image tuples
            let mut j = 0;
            loop {
                if j == choice.len() {
                    return out;
                }
                choice[j] += 1;
                if (choice[j] as usize) < self.order {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
        }
    }

    /// A greedy generating set: repeatedly adds the least element outside the
    /// current subgroup.
    pub fn small_generating_set(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[self.identity as usize] = true;
        for a in 0..self.order as u32 {
            if !inside[a as usize] {
                gens.push(a);
                for x in self.closure(&gens) {
                    inside[x as usize] = true;
                }
            }
        }
        gens
    }

    pub fn cyclic(n: usize) -> Self {
        let product = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        Self::from_product_unchecked(n, product, 0).expect("cyclic table")
    }

    /// Dihedral group of order `2n`; element `i + n·j` is `rⁱ sʲ`.
    pub fn dihedral(n: usize) -> Self {
        let order = 2 * n;
        let mut product = vec![0u32; order * order];
        for x in 0..order {
            let (i, j) = (x % n, x / n);
            for y in 0..order {
                let (k, l) = (y % n, y / n);
                let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
                product[x * order + y] = (rot + n * ((j + l) % 2)) as u32;
            }
        }
        Self::from_product_unchecked(order, product, 0).expect("dihedral table")
    }

    /// Symmetric group on `n` points; elements are permutations in
    /// lexicographic order, composed as `(p·q)(i) = q(p(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index: HashMap<&Vec<usize>, u32> =
            perms.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
        let order = perms.len();
        let mut product = vec![0u32; order * order];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let r: Vec<usize> = (0..n).map(|i| q[p[i]]).collect();
                product[a * order + b] = index[&r];
            }
        }
        Self::from_product_unchecked(order, product, 0).expect("symmetric table")
    }

    /// Closes `gens` under a multiplication on arbitrary values, returning
    /// the table, the elements in index order and the generator indices.
    /// Gives up once more than `cap` elements appear.
    pub fn from_closure<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Option<Closure<T>>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut index: HashMap<T, u32> = HashMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0);
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let y = mul(&elements[i], g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return None;
                    }
                    index.insert(y.clone(), elements.len() as u32);
                    elements.push(y);
                }
            }
            i += 1;
        }
        let order = elements.len();
        let mut product = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                product[a * order + b] = index[&mul(&elements[a], &elements[b])];
            }
        }
        let gen_indices = gens.iter().map(|g| index[g]).collect();
        let table = Self::from_product_unchecked(order, product, 0).ok()?;
        Some(Closure {
            table,
            elements,
            gens: gen_indices,
        })
    }
}

/// Result of [`FiniteGroupTable::from_closure`].
pub struct Closure<T> {
    pub table: FiniteGroupTable,
    pub elements: Vec<T>,
    pub gens: Vec<u32>,
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

/// Named small groups used as quotient targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SmallGroup {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    /// The alternating group on 4 points.
    Alternating4,
}

impl SmallGroup {
    pub fn table(self) -> FiniteGroupTable {
        match self {
            SmallGroup::Cyclic(n) => FiniteGroupTable::cyclic(n),
            SmallGroup::Dihedral(n) => FiniteGroupTable::dihedral(n),
            SmallGroup::Symmetric(n) => FiniteGroupTable::symmetric(n),
            SmallGroup::Alternating4 => {
                let mul = |p: &[usize; 4], q: &[usize; 4]| [q[p[0]], q[p[1]], q[p[2]], q[p[3]]];
                FiniteGroupTable::from_closure([0, 1, 2, 3], &[[1, 2, 0, 3], [0, 2, 3, 1]], mul, 12)
                    .expect("A4 has 12 elements")
                    .table
            }
        }
    }

    pub fn order(self) -> usize {
        match self {
            SmallGroup::Cyclic(n) => n,
            SmallGroup::Dihedral(n) => 2 * n,
            SmallGroup::Symmetric(n) => (1..=n).product(),
            SmallGroup::Alternating4 => 12,
        }
    }

    pub fn name(self) -> String {
        match self {
            SmallGroup::Cyclic(n) => format!("Z{n}"),
            SmallGroup::Dihedral(n) => format!("D{}", 2 * n),
            SmallGroup::Symmetric(n) => format!("S{n}"),
            SmallGroup::Alternating4 => "A4".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_tables_satisfy_axioms() {
        for g in [
            SmallGroup::Cyclic(1),
            SmallGroup::Cyclic(5),
            SmallGroup::Dihedral(3),
            SmallGroup::Dihedral(4),
            SmallGroup::Symmetric(3),
            SmallGroup::Symmetric(4),
            SmallGroup::Alternating4,
        ] {
            let t = g.table();
            assert_eq!(t.order(), g.order());
            t.verify_axioms().unwrap();
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(FiniteGroupTable::cyclic(4).automorphisms().len(), 2);
        assert_eq!(FiniteGroupTable::cyclic(5).automorphisms().len(), 4);
        assert_eq!(FiniteGroupTable::symmetric(3).automorphisms().len(), 6);
        assert_eq!(FiniteGroupTable::dihedral(4).automorphisms().len(), 8);
        assert_eq!(FiniteGroupTable::symmetric(4).automorphisms().len(), 24);
    }

    #[test]
    fn class_counts() {
        let s4 = FiniteGroupTable::symmetric(4);
        let gens = s4.small_generating_set();
        let mut labels = s4.conjugacy_classes(&gens);
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 5);
        let d4 = FiniteGroupTable::dihedral(4);
        let mut labels = d4.conjugacy_classes(&d4.small_generating_set());
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 5);
    }

    #[test]
    fn broken_table_rejected() {
        // a "group" of order 2 where 1·1 = 1
        assert!(FiniteGroupTable::from_product(2, vec![0, 1, 1, 1], 0).is_err());
        // non-associative loop of order 3 with identity 0
        let bad = vec![0, 1, 2, 1, 0, 0, 2, 0, 0];
        assert!(FiniteGroupTable::from_product(3, bad, 0).is_err());
    }

    #[test]
    fn closure_builds_subgroup() {
        // <(1 2 3)> inside S3 as permutation vectors
        let mul = |p: &Vec<u8>, q: &Vec<u8>| p.iter().map(|&i| q[i as usize]).collect::<Vec<u8>>();
        let c = FiniteGroupTable::from_closure(vec![0u8, 1, 2], &[vec![1, 2, 0]], mul, 10).unwrap();
        assert_eq!(c.table.order(), 3);
        c.table.verify_axioms().unwrap();
        assert!(FiniteGroupTable::from_closure(vec![0u8, 1, 2], &[vec![1, 2, 0]], mul, 2).is_none());
    }
}
