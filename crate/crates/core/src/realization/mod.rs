//! Finite graphs, their isometries and the outer automorphisms they induce
//! on a marked fundamental group.
//!
//! Edge `i` has half-edges `2i` (from `u` to `v`) and `2i + 1` (reversed).

mod catalog;

use std::collections::VecDeque;
use std::fmt;

use crate::automorphism::FreeAutomorphism;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

pub use catalog::{finite_order_catalog, realize_search, Catalog, CatalogBounds, CatalogEntry, Realization};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteGraph {
    vertex_count: usize,
    edges: Vec<(u32, u32)>,
}

impl FiniteGraph {
    /// Checks connectivity, absence of isolated vertices and `b₁ ≥ 1`.
    pub fn new(vertex_count: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Invalid("graph has no vertices".into()));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u.max(v) as usize >= vertex_count) {
            return Err(Error::Invalid(format!("edge {u} {v} leaves the vertex range")));
        }
        let g = FiniteGraph { vertex_count, edges };
        if (0..vertex_count as u32).any(|v| g.valence(v) == 0) {
            return Err(Error::Invalid("isolated vertex".into()));
        }
        if g.bfs_order().len() != vertex_count {
            return Err(Error::Invalid("graph is not connected".into()));
        }
        if g.betti() < 1 {
            return Err(Error::Invalid("graph is a tree".into()));
        }
        Ok(g)
    }

    /// The rose with `m` petals.
    pub fn rose(m: usize) -> Self {
        FiniteGraph::new(1, vec![(0, 0); m]).expect("rose")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn half_edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn origin(&self, h: u32) -> u32 {
        let (u, v) = self.edges[(h / 2) as usize];
        if h % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn terminus(&self, h: u32) -> u32 {
        self.origin(h ^ 1)
    }

    pub fn valence(&self, v: u32) -> usize {
        (0..self.half_edge_count() as u32).filter(|&h| self.origin(h) == v).count()
    }

    /// `|E| − |V| + 1`.
    pub fn betti(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertex_count)
    }

    /// Subdivides every edge once; new vertex `n + i` sits on edge `i`.
    pub fn subdivide(&self) -> Self {
        let n = self.vertex_count as u32;
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            edges.push((u, n + i as u32));
            edges.push((n + i as u32, v));
        }
        FiniteGraph::new(self.vertex_count + self.edges.len(), edges).expect("subdivision")
    }

    fn bfs_order(&self) -> Vec<u32> {
        let mut seen = vec![false; self.vertex_count];
        let mut order = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for h in 0..self.half_edge_count() as u32 {
                if self.origin(h) == x && !seen[self.terminus(h) as usize] {
                    seen[self.terminus(h) as usize] = true;
                    order.push(self.terminus(h));
                }
            }
            i += 1;
        }
        order
    }

    /// Parses `V n` followed by `E i: u v` lines with `i = 0, 1, …` in order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut vertex_count = None;
        let mut edges = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::parse(line_no, 1, msg.to_string());
            if let Some(rest) = line.strip_prefix("V ") {
                if vertex_count.is_some() {
                    return Err(bad("duplicate `V` line"));
                }
                vertex_count = Some(rest.trim().parse::<usize>().map_err(|_| bad("bad vertex count"))?);
            } else if let Some(rest) = line.strip_prefix("E ") {
                if vertex_count.is_none() {
                    return Err(bad("`E` before `V`"));
                }
                let (idx, ends) = rest.split_once(':').ok_or_else(|| bad("expected `E i: u v`"))?;
                let idx: usize = idx.trim().parse().map_err(|_| bad("bad edge index"))?;
                if idx != edges.len() {
                    return Err(bad(&format!("expected edge index {}", edges.len())));
                }
                let ends: Vec<u32> = ends
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("bad endpoint"))?;
                if ends.len() != 2 {
                    return Err(bad("an edge has two endpoints"));
                }
                edges.push((ends[0], ends[1]));
            } else {
                return Err(bad("expected `V n` or `E i: u v`"));
            }
        }
        let vertex_count = vertex_count.ok_or_else(|| Error::parse(1, 1, "missing `V` line"))?;
        FiniteGraph::new(vertex_count, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("V {}\n", self.vertex_count);
        for (i, (u, v)) in self.edges.iter().enumerate() {
            out.push_str(&format!("E {i}: {u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V{}", self.vertex_count)?;
        for (u, v) in &self.edges {
            write!(f, " {u}-{v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphIsometry {
    pub vertex_perm: Vec<u32>,
    pub half_edge_perm: Vec<u32>,
}

impl GraphIsometry {
    pub fn identity(g: &FiniteGraph) -> Self {
        GraphIsometry {
            vertex_perm: (0..g.vertex_count as u32).collect(),
            half_edge_perm: (0..g.half_edge_count() as u32).collect(),
        }
    }

    /// Checks bijectivity and compatibility with reversal and endpoints.
    pub fn validate(&self, g: &FiniteGraph) -> Result<()> {
        let bijective = |p: &[u32], n: usize| {
            let mut hit = vec![false; n];
            p.len() == n && p.iter().all(|&x| (x as usize) < n && !std::mem::replace(&mut hit[x as usize], true))
        };
        if !bijective(&self.vertex_perm, g.vertex_count) || !bijective(&self.half_edge_perm, g.half_edge_count()) {
            return Err(Error::Invalid("isometry is not a bijection".into()));
        }
        for h in 0..g.half_edge_count() as u32 {
            let s = self.half_edge_perm[h as usize];
            if self.half_edge_perm[(h ^ 1) as usize] != s ^ 1 {
                return Err(Error::Invalid(format!("half-edge {h}: reversal not respected")));
            }
            if g.origin(s) != self.vertex_perm[g.origin(h) as usize] {
                return Err(Error::Invalid(format!("half-edge {h}: endpoint not respected")));
            }
        }
        Ok(())
    }

    /// `self ∘ other`: `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        GraphIsometry {
            vertex_perm: other.vertex_perm.iter().map(|&v| self.vertex_perm[v as usize]).collect(),
            half_edge_perm: other.half_edge_perm.iter().map(|&h| self.half_edge_perm[h as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_perm.iter().enumerate().all(|(i, &v)| i as u32 == v)
            && self.half_edge_perm.iter().enumerate().all(|(i, &h)| i as u32 == h)
    }

    /// Two lines: the vertex permutation, then the half-edge permutation.
    pub fn to_text(&self) -> String {
        let line = |p: &[u32]| p.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        format!("{}\n{}\n", line(&self.vertex_perm), line(&self.half_edge_perm))
    }

    pub fn parse(text: &str, g: &FiniteGraph) -> Result<Self> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.len() != 2 {
            return Err(Error::parse(1, 1, "an isometry is two permutation lines"));
        }
        let perm = |i: usize| -> Result<Vec<u32>> {
            lines[i]
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| Error::parse(i + 1, 1, format!("bad entry {s:?}"))))
                .collect()
        };
        let iso = GraphIsometry {
            vertex_perm: perm(0)?,
            half_edge_perm: perm(1)?,
        };
        iso.validate(g)?;
        Ok(iso)
    }
}

/// All isometries of `g`, in lexicographic order of half-edge images.
pub fn enumerate_graph_isometries(g: &FiniteGraph) -> Vec<GraphIsometry> {
    let mut out = Vec::new();
    let mut vmap = vec![u32::MAX; g.vertex_count];
    let mut hmap = vec![u32::MAX; g.half_edge_count()];
    let mut used = vec![false; g.edges.len()];
    extend_isometry(g, 0, &mut vmap, &mut hmap, &mut used, &mut out);
    out
}

fn extend_isometry(
    g: &FiniteGraph,
    edge: usize,
    vmap: &mut Vec<u32>,
    hmap: &mut Vec<u32>,
    used: &mut Vec<bool>,
    out: &mut Vec<GraphIsometry>,
) {
    if edge == g.edges.len() {
        let mut hit = vec![false; g.vertex_count];
        vmap.iter().for_each(|&v| hit[v as usize] = true);
        if hit.iter().all(|&x| x) {
            out.push(GraphIsometry {
                vertex_perm: vmap.clone(),
                half_edge_perm: hmap.clone(),
            });
        }
        return;
    }
    let (u, v) = g.edges[edge];
    for target in 0..g.half_edge_count() as u32 {
        if used[(target / 2) as usize] {
            continue;
        }
        let (tu, tv) = (g.origin(target), g.terminus(target));
        let saved = (vmap[u as usize], vmap[v as usize]);
        let fits = |x: u32, tx: u32, vmap: &[u32]| {
            vmap[x as usize] == tx
                || (vmap[x as usize] == u32::MAX && !vmap.contains(&tx))
        };
        if !fits(u, tu, vmap) {
            continue;
        }
        vmap[u as usize] = tu;
        if !fits(v, tv, vmap) {
            vmap[u as usize] = saved.0;
            continue;
        }
        vmap[v as usize] = tv;
        hmap[2 * edge] = target;
        hmap[2 * edge + 1] = target ^ 1;
        used[(target / 2) as usize] = true;
        extend_isometry(g, edge + 1, vmap, hmap, used, out);
        used[(target / 2) as usize] = false;
        vmap[u as usize] = saved.0;
        vmap[v as usize] = saved.1;
    }
}

/// A marked graph: BFS spanning tree from vertex 0, basis loops indexed by
/// the non-tree edges in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    graph: FiniteGraph,
    basepoint: u32,
    tree: Vec<bool>,
    basis: Vec<u32>,
    /// Tree path (half-edges) from the basepoint to each vertex.
    paths: Vec<Vec<u32>>,
}

impl Marking {
    pub fn canonical(graph: &FiniteGraph) -> Self {
        let n = graph.vertex_count;
        let mut tree = vec![false; graph.edges.len()];
        let mut paths: Vec<Option<Vec<u32>>> = vec![None; n];
        paths[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            for h in 0..graph.half_edge_count() as u32 {
                let y = graph.terminus(h);
                if graph.origin(h) == x && paths[y as usize].is_none() {
                    tree[(h / 2) as usize] = true;
                    let mut p = paths[x as usize].clone().expect("visited");
                    p.push(h);
                    paths[y as usize] = Some(p);
                    queue.push_back(y);
                }
            }
        }
        let basis = (0..graph.edges.len() as u32).filter(|&e| !tree[e as usize]).collect();
        Marking {
            graph: graph.clone(),
            basepoint: 0,
            tree,
            basis,
            paths: paths.into_iter().map(|p| p.expect("connected")).collect(),
        }
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    pub fn tree_edges(&self) -> Vec<u32> {
        (0..self.tree.len() as u32).filter(|&e| self.tree[e as usize]).collect()
    }

    /// Non-tree edges; edge `basis[j]` gives generator `j + 1`.
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::new(self.basis.len() as u32).expect("positive rank")
    }

    pub fn tree_path(&self, v: u32) -> &[u32] {
        &self.paths[v as usize]
    }

    /// The word read along an edge path: tree edges are invisible.
    pub fn read(&self, path: &[u32]) -> Word {
        let letters = path.iter().filter_map(|&h| {
            let e = h / 2;
            self.basis
                .iter()
                .position(|&b| b == e)
                .map(|j| Letter::new(j as u32 + 1, h % 2 == 1))
        });
        Word::from_letters(self.alphabet(), letters)
    }

    /// The basis loop of generator `j` (1-based) as an edge path.
    pub fn basis_loop(&self, j: u32) -> Vec<u32> {
        let e = self.basis[j as usize - 1];
        let (u, v) = self.graph.edges[e as usize];
        let mut p = self.paths[u as usize].clone();
        p.push(2 * e);
        p.extend(self.paths[v as usize].iter().rev().map(|&h| h ^ 1));
        p
    }

    /// Checks that `path` is an edge path from `from` to `to`.
    pub fn check_path(&self, path: &[u32], from: u32, to: u32) -> Result<()> {
        let mut at = from;
        for &h in path {
            if h as usize >= self.graph.half_edge_count() || self.graph.origin(h) != at {
                return Err(Error::Invalid(format!("half-edge {h} does not continue the path")));
            }
            at = self.graph.terminus(h);
        }
        if at != to {
            return Err(Error::Invalid(format!("path ends at {at}, not {to}")));
        }
        Ok(())
    }
}

/// `φ_c = α_c ∘ σ_*`: each basis loop `γ` goes to `c·σ(γ)·c̄`.
pub fn induced_outer_automorphism(
    marking: &Marking,
    sigma: &GraphIsometry,
    c: &[u32],
) -> Result<FreeAutomorphism> {
    let g = marking.graph();
    sigma.validate(g)?;
    let base = marking.basepoint();
    marking.check_path(c, base, sigma.vertex_perm[base as usize])?;
    let cw = marking.read(c);
    let images = (1..=marking.basis().len() as u32)
        .map(|j| {
            let image: Vec<u32> = marking
                .basis_loop(j)
                .iter()
                .map(|&h| sigma.half_edge_perm[h as usize])
                .collect();
            cw.mul(&marking.read(&image)).mul(&cw.inverse())
        })
        .collect();
    FreeAutomorphism::new(images)
}

/// [`induced_outer_automorphism`] with `c` the tree path to `σ(v₀)`.
pub fn induced_automorphism(marking: &Marking, sigma: &GraphIsometry) -> Result<FreeAutomorphism> {
    let target = sigma.vertex_perm[marking.basepoint() as usize];
    let c = marking.tree_path(target).to_vec();
    induced_outer_automorphism(marking, sigma, &c)
}

/// Whether `[φ_{σ∘τ}] = [φ_σ]∘[φ_τ]`.
pub fn omega_homomorphism_check(marking: &Marking, sigma: &GraphIsometry, tau: &GraphIsometry) -> Result<bool> {
    let st = induced_automorphism(marking, &sigma.compose(tau))?;
    let s = induced_automorphism(marking, sigma)?;
    let t = induced_automorphism(marking, tau)?;
    Ok(st.compose(&s.compose(&t).inverse()).is_inner().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::outer_order;

    fn theta() -> FiniteGraph {
        FiniteGraph::parse("V 2\nE 0: 0 1\nE 1: 0 1\nE 2: 0 1\n").unwrap()
    }

    #[test]
    fn isometry_counts() {
        assert_eq!(enumerate_graph_isometries(&FiniteGraph::rose(2)).len(), 8);
        assert_eq!(enumerate_graph_isometries(&FiniteGraph::rose(1)).len(), 2);
        assert_eq!(enumerate_graph_isometries(&theta()).len(), 12);
        let barbell = FiniteGraph::new(2, vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(enumerate_graph_isometries(&barbell).len(), 8);
        for g in [FiniteGraph::rose(2), theta(), barbell.subdivide()] {
            for s in enumerate_graph_isometries(&g) {
                s.validate(&g).unwrap();
            }
        }
    }

    #[test]
    fn rose_examples() {
        let rose = FiniteGraph::rose(2);
        let m = Marking::canonical(&rose);
        let id = GraphIsometry::identity(&rose);
        assert!(induced_outer_automorphism(&m, &id, &[]).unwrap().is_identity());
        let swap = GraphIsometry {
            vertex_perm: vec![0],
            half_edge_perm: vec![2, 3, 0, 1],
        };
        let phi = induced_outer_automorphism(&m, &swap, &[]).unwrap();
        assert_eq!(phi.to_string(), "(b, a)");
        assert!(omega_homomorphism_check(&m, &swap, &swap).unwrap());
    }

    #[test]
    fn theta_rotation() {
        let g = theta();
        let m = Marking::canonical(&g);
        assert_eq!(m.tree_edges(), vec![0]);
        let rot = GraphIsometry {
            vertex_perm: vec![0, 1],
            half_edge_perm: vec![2, 3, 4, 5, 0, 1],
        };
        rot.validate(&g).unwrap();
        let phi = induced_automorphism(&m, &rot).unwrap();
        assert_eq!(phi.to_string(), "(bA, A)");
        assert_eq!(outer_order(&phi, 12).certificate().unwrap().order, 3);
        assert!(omega_homomorphism_check(&m, &rot, &rot.compose(&rot)).unwrap());
        // a path leaving and returning gives the same outer class
        let phi2 = induced_outer_automorphism(&m, &rot, &[2, 1]).unwrap();
        assert!(phi2.compose(&phi.inverse()).is_inner().is_some());
        assert!(induced_outer_automorphism(&m, &rot, &[2]).is_err());
    }

    #[test]
    fn graph_text_round_trip() {
        let g = theta();
        assert_eq!(FiniteGraph::parse(&g.to_text()).unwrap(), g);
        assert!(FiniteGraph::parse("V 2\nE 0: 0 0\n").is_err());
        assert!(FiniteGraph::parse("V 1\nE 1: 0 0\n").is_err());
        let s = &enumerate_graph_isometries(&g)[5];
        assert_eq!(&GraphIsometry::parse(&s.to_text(), &g).unwrap(), s);
    }
}
