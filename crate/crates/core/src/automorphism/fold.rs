//! Stallings folding with basis tracking.
//!
//! The images `w₁..w_m` are wired as loops at a base vertex. Each edge
//! carries a tag in an auxiliary free group on `y₁..y_m` (the first edge of
//! loop `j` is tagged `y_j`), with the invariant that every closed path at
//! the base reading `u` has tag `T` with `T(w₁..w_m) = u`. Folding keeps
//! the invariant; when the result is the standard rose, the tag of the loop
//! labelled `x_i` is the preimage of `x_i`.

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

struct Edge {
    from: usize,
    to: usize,
    /// Positive generator number read when traversing `from → to`.
    gen: u32,
    /// Tag of the `from → to` traversal.
    tag: Word,
    alive: bool,
}

struct Graph {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    alive: Vec<bool>,
}

/// A traversal of an edge starting at a given vertex.
#[derive(Clone, Copy)]
struct Step {
    edge: usize,
    signed: i32,
    target: usize,
}

impl Graph {
    fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.adj.len() - 1
    }

    fn add_edge(&mut self, from: usize, to: usize, signed: i32, tag: Word) {
        let id = self.edges.len();
        let (from, to, tag) = if signed > 0 {
            (from, to, tag)
        } else {
            (to, from, tag.inverse())
        };
        self.edges.push(Edge {
            from,
            to,
            gen: signed.unsigned_abs(),
            tag,
            alive: true,
        });
        self.adj[from].push(id);
        if to != from {
            self.adj[to].push(id);
        }
    }

    fn steps_from(&self, v: usize) -> Vec<Step> {
        let mut out = Vec::new();
        for &e in &self.adj[v] {
            let edge = &self.edges[e];
            if !edge.alive {
                continue;
            }
            if edge.from == v {
                out.push(Step {
                    edge: e,
                    signed: edge.gen as i32,
                    target: edge.to,
                });
            }
            if edge.to == v {
                out.push(Step {
                    edge: e,
                    signed: -(edge.gen as i32),
                    target: edge.from,
                });
            }
        }
        out
    }

    fn traversal_tag(&self, step: Step) -> Word {
        let e = &self.edges[step.edge];
        if step.signed > 0 {
            e.tag.clone()
        } else {
            e.tag.inverse()
        }
    }

    /// Re-bases the tags at vertex `z` by `g`: a `from → to` tag `τ` becomes
    /// `h(from)·τ·h(to)⁻¹` with `h(z) = g` and `h = 1` elsewhere.
    fn gauge(&mut self, z: usize, g: &Word) {
        let gi = g.inverse();
        for &e in &self.adj[z] {
            let edge = &mut self.edges[e];
            if !edge.alive {
                continue;
            }
            if edge.from == z {
                edge.tag = g.mul(&edge.tag);
            }
            if edge.to == z {
                edge.tag = edge.tag.mul(&gi);
            }
        }
    }

    fn merge(&mut self, gone: usize, keep: usize) {
        let moved = std::mem::take(&mut self.adj[gone]);
        for &e in &moved {
            let edge = &mut self.edges[e];
            if edge.from == gone {
                edge.from = keep;
            }
            if edge.to == gone {
                edge.to = keep;
            }
        }
        for e in moved {
            if !self.adj[keep].contains(&e) {
                self.adj[keep].push(e);
            }
        }
        self.alive[gone] = false;
    }

    /// Identifies two traversals from `v` reading the same letter. Returns the
    /// surviving vertex that needs to be re-examined.
    fn fold(&mut self, v: usize, s1: Step, s2: Step) -> Result<usize> {
        const BASE: usize = 0;
        let (w1, w2) = (s1.target, s2.target);
        if w1 == w2 {
            return Err(Error::NotAnAutomorphism(
                "images satisfy a relation (rank drops while folding)".into(),
            ));
        }
        let sigma1 = self.traversal_tag(s1);
        let sigma2 = self.traversal_tag(s2);
        let keep = if w2 != BASE && w2 != v {
            self.gauge(w2, &sigma1.inverse().mul(&sigma2));
            self.merge(w2, w1);
            w1
        } else if w1 != BASE && w1 != v {
            self.gauge(w1, &sigma2.inverse().mul(&sigma1));
            self.merge(w1, w2);
            w2
        } else {
            // {w1, w2} = {base, v}: one traversal is a loop at v
            let (sa, sb) = if w1 == BASE {
                (sigma1, sigma2)
            } else {
                (sigma2, sigma1)
            };
            self.gauge(v, &sa.inverse().mul(&sb));
            self.merge(v, BASE);
            BASE
        };
        self.edges[s2.edge].alive = false;
        Ok(keep)
    }
}

/// Preimages of the generators under the endomorphism `xᵢ ↦ images[i]`, or
/// an error when the images do not form a basis.
pub(crate) fn invert_images(alphabet: Alphabet, images: &[Word]) -> Result<Vec<Word>> {
    let m = alphabet.rank() as usize;
    let mut g = Graph {
        edges: Vec::new(),
        adj: Vec::new(),
        alive: Vec::new(),
    };
    let base = g.add_vertex();
    for (j, w) in images.iter().enumerate() {
        if w.is_empty() {
            return Err(Error::NotAnAutomorphism(format!(
                "generator {} maps to the identity",
                j + 1
            )));
        }
        let letters = w.letters();
        let mut prev = base;
        for (i, l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                base
            } else {
                g.add_vertex()
            };
            let tag = if i == 0 {
                alphabet.generator(j as u32 + 1)
            } else {
                alphabet.identity()
            };
            g.add_edge(prev, next, l.signed(), tag);
            prev = next;
        }
    }

    let mut work: Vec<usize> = (0..g.adj.len()).rev().collect();
    while let Some(v) = work.pop() {
        if !g.alive[v] {
            continue;
        }
        let steps = g.steps_from(v);
        let mut seen: Vec<Option<Step>> = vec![None; 2 * m + 1];
        let slot = |s: i32| (s + m as i32) as usize;
        for s in steps {
            match seen[slot(s.signed)] {
                Some(prev) if prev.edge != s.edge => {
                    let keep = g.fold(v, prev, s)?;
                    work.push(keep);
                    if g.alive[v] && v != keep {
                        work.push(v);
                    }
                    break;
                }
                _ => seen[slot(s.signed)] = Some(s),
            }
        }
    }

    let vertices = g.alive.iter().filter(|&&a| a).count();
    let loops: Vec<&Edge> = g.edges.iter().filter(|e| e.alive).collect();
    if vertices != 1 || loops.len() != m {
        return Err(Error::NotAnAutomorphism(
            "images generate a proper subgroup".into(),
        ));
    }
    let mut out = vec![alphabet.identity(); m];
    for e in loops {
        out[e.gen as usize - 1] = e.tag.clone();
    }
    Ok(out)
}
