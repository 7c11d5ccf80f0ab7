//! Finite-order outer classes realized by isometries of small graphs.

use std::collections::BTreeSet;

use super::{enumerate_graph_isometries, induced_automorphism, FiniteGraph, GraphIsometry, Marking};
use crate::automorphism::{
    fingerprint, out_conjugate, outer_order, FingerprintConfig, FreeAutomorphism, OrderSearch,
    OutConjugacy, OutInvariantFingerprint,
};
use crate::budget::Budget;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Also run every graph through one barycentric subdivision.
    pub subdivide: bool,
}

impl CatalogBounds {
    /// `2m − 2` vertices and `3m − 3` edges, with one subdivision pass.
    pub fn for_rank(m: usize) -> Self {
        CatalogBounds {
            max_vertices: (2 * m).saturating_sub(2).max(1),
            max_edges: (3 * m).saturating_sub(3).max(m),
            subdivide: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub graph: FiniteGraph,
    pub isometry: GraphIsometry,
    pub automorphism: FreeAutomorphism,
    pub order: u32,
    pub fingerprint: OutInvariantFingerprint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub rank: usize,
    pub bounds: CatalogBounds,
    pub entries: Vec<CatalogEntry>,
    /// Pairs of entries the dedup search could not decide; both are kept.
    pub unresolved_pairs: usize,
}

impl Catalog {
    pub fn orders(&self) -> BTreeSet<u32> {
        self.entries.iter().map(|e| e.order).collect()
    }

    /// Versioned text artifact.
    pub fn to_text(&self) -> String {
        let b = &self.bounds;
        let orders: Vec<String> = self.orders().iter().map(ToString::to_string).collect();
        let mut out = format!(
            "fincyc-catalog v1\nrank {}\nbounds vertices {} edges {} subdivide {}\norders {}\nunresolved {}\n",
            self.rank,
            b.max_vertices,
            b.max_edges,
            u8::from(b.subdivide),
            orders.join(" "),
            self.unresolved_pairs
        );
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!("entry {i} order {}\n", e.order));
            out.push_str(&format!("graph {}\n", e.graph));
            let line = |p: &[u32]| p.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            out.push_str(&format!("vertices {}\n", line(&e.isometry.vertex_perm)));
            out.push_str(&format!("half-edges {}\n", line(&e.isometry.half_edge_perm)));
            out.push_str(&format!("automorphism {}\n", e.automorphism));
        }
        out
    }
}

/// Connected graphs with `b₁ = m`, every valence at least 3, within the
/// bounds, one per isomorphism class, in canonical order. For `m = 1` the
/// single loop is the only reduced graph.
pub fn reduced_graphs(m: usize, bounds: &CatalogBounds) -> Vec<FiniteGraph> {
    if m == 1 {
        return vec![FiniteGraph::rose(1)];
    }
    let mut found = BTreeSet::new();
    for v in 1..=bounds.max_vertices {
        let e = v + m - 1;
        if e > bounds.max_edges {
            break;
        }
        let pairs: Vec<(u32, u32)> = (0..v as u32)
            .flat_map(|a| (a..v as u32).map(move |b| (a, b)))
            .collect();
        let mut choice = vec![0usize; e];
        loop {
            let edges: Vec<(u32, u32)> = choice.iter().map(|&i| pairs[i]).collect();
            if let Ok(g) = FiniteGraph::new(v, edges) {
                if (0..v as u32).all(|x| g.valence(x) >= 3) {
                    found.insert(canonical_form(&g));
                }
            }
            // next non-decreasing index sequence
            let Some(j) = (0..e).rev().find(|&j| choice[j] + 1 < pairs.len()) else {
                break;
            };
            let next = choice[j] + 1;
            choice[j..].iter_mut().for_each(|c| *c = next);
        }
    }
    found.into_iter().collect()
}

fn canonical_form(g: &FiniteGraph) -> FiniteGraph {
    let n = g.vertex_count();
    let mut best: Option<Vec<(u32, u32)>> = None;
    for perm in permutations(n) {
        let mut edges: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u as usize], perm[v as usize]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort();
        if best.as_ref().map_or(true, |b| edges < *b) {
            best = Some(edges);
        }
    }
    FiniteGraph::new(n, best.expect("at least one permutation")).expect("relabelled graph")
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n as u32 - 1);
            out.push(q);
        }
    }
    out
}

/// Outer classes induced by isometries of the graphs within `bounds`,
/// deduplicated up to conjugacy in Out(F_m). Classes the conjugacy search
/// cannot separate or identify within `budget` are both kept.
pub fn finite_order_catalog(m: usize, bounds: CatalogBounds, budget: Budget) -> Result<Catalog> {
    if m == 0 {
        return Err(Error::Invalid("rank must be positive".into()));
    }
    let mut graphs = reduced_graphs(m, &bounds);
    if bounds.subdivide {
        let subdivided: Vec<FiniteGraph> = graphs.iter().map(FiniteGraph::subdivide).collect();
        graphs.extend(subdivided);
    }
    let config = FingerprintConfig::default();
    let mut catalog = Catalog {
        rank: m,
        bounds,
        entries: Vec::new(),
        unresolved_pairs: 0,
    };
    for g in &graphs {
        let marking = Marking::canonical(g);
        let isometries = enumerate_graph_isometries(g);
        for sigma in &isometries {
            let phi = induced_automorphism(&marking, sigma)?;
            let order = match outer_order(&phi, isometries.len() as u32) {
                OrderSearch::Found(cert) => cert.order,
                other => {
                    return Err(Error::Falsified(format!(
                        "isometry of {g} induces {phi} without finite order: {other:?}"
                    )))
                }
            };
            let fp = fingerprint(&phi, &config);
            let mut duplicate = false;
            for e in catalog.entries.iter().filter(|e| e.order == order && e.fingerprint == fp) {
                match out_conjugate(&phi, &e.automorphism, budget)? {
                    OutConjugacy::Conjugate(_) => {
                        duplicate = true;
                        break;
                    }
                    OutConjugacy::Distinguished(_) => {}
                    OutConjugacy::Unresolved => catalog.unresolved_pairs += 1,
                }
            }
            if !duplicate {
                catalog.entries.push(CatalogEntry {
                    graph: g.clone(),
                    isometry: sigma.clone(),
                    automorphism: phi,
                    order,
                    fingerprint: fp,
                });
            }
        }
    }
    Ok(catalog)
}

/// A graph isometry realizing `[θ∘φ∘θ⁻¹]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub entry: usize,
    pub graph: FiniteGraph,
    pub isometry: GraphIsometry,
    /// `θ` with `[θ∘φ∘θ⁻¹]` the class induced by the isometry.
    pub conjugator: FreeAutomorphism,
}

/// Matches `φ` against the catalog entries of the same outer order.
pub fn realize_search(phi: &FreeAutomorphism, catalog: &Catalog, budget: Budget) -> Result<Option<Realization>> {
    if phi.rank() != catalog.rank {
        return Err(Error::AlphabetMismatch {
            left: phi.rank() as u32,
            right: catalog.rank as u32,
        });
    }
    let bound = catalog.entries.iter().map(|e| e.order).max().unwrap_or(1);
    let Some(cert) = outer_order(phi, bound).certificate().cloned() else {
        return Ok(None);
    };
    for (i, e) in catalog.entries.iter().enumerate().filter(|(_, e)| e.order == cert.order) {
        if let OutConjugacy::Conjugate(theta) = out_conjugate(phi, &e.automorphism, budget)? {
            return Ok(Some(Realization {
                entry: i,
                graph: e.graph.clone(),
                isometry: e.isometry.clone(),
                conjugator: theta,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_graphs() {
        let gs = reduced_graphs(2, &CatalogBounds::for_rank(2));
        let shown: Vec<String> = gs.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["V1 0-0 0-0", "V2 0-0 0-1 1-1", "V2 0-1 0-1 0-1"]);
    }

    #[test]
    fn rank_one_catalog() {
        let c = finite_order_catalog(1, CatalogBounds::for_rank(1), Budget::default()).unwrap();
        assert_eq!(c.orders(), BTreeSet::from([1, 2]));
        assert_eq!(c.entries.len(), 2);
    }
}
