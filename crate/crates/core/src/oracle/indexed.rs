//! Graphs and (partial) homomorphisms over dense indices.
//!
//! A second, independent enumerator used by the oracles: nodes and edges
//! are numbered in id order and maps are plain vectors, which keeps the
//! per-cocone cost low enough for exhaustive enumeration.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use crate::graph::{EdgeId, Graph, NodeId};
use crate::morphism::{EdgeMap, NodeMap, PartialMorphism, TotalMorphism};

#[derive(Debug, Clone)]
pub struct IxGraph {
    pub nodes: Vec<NodeId>,
    pub edge_ids: Vec<EdgeId>,
    pub ends: Vec<(usize, usize)>,
    by_ends: Vec<Vec<usize>>,
    node_ix: BTreeMap<NodeId, usize>,
    edge_ix: BTreeMap<EdgeId, usize>,
}

impl IxGraph {
    pub fn new(g: &Graph) -> Self {
        let nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
        let node_ix: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edge_ids: Vec<EdgeId> = g.edges().keys().cloned().collect();
        let edge_ix = edge_ids.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let ends: Vec<(usize, usize)> = g.edges().values().map(|e| (node_ix[&e.src], node_ix[&e.tgt])).collect();
        let n = nodes.len();
        let mut by_ends = vec![Vec::new(); n * n];
        for (i, (s, t)) in ends.iter().enumerate() {
            by_ends[s * n + t].push(i);
        }
        IxGraph {
            nodes,
            edge_ids,
            ends,
            by_ends,
            node_ix,
            edge_ix,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn node(&self, n: &NodeId) -> usize {
        self.node_ix[n]
    }

    pub fn edge(&self, e: &EdgeId) -> usize {
        self.edge_ix[e]
    }

    fn parallel(&self, s: usize, t: usize) -> &[usize] {
        &self.by_ends[s * self.nodes.len() + t]
    }

    /// Index form of a total morphism between the two indexed graphs.
    pub fn total(&self, m: &TotalMorphism, tgt: &IxGraph) -> (Vec<usize>, Vec<usize>) {
        (
            self.nodes.iter().map(|n| tgt.node(m.node(n))).collect(),
            self.edge_ids.iter().map(|e| tgt.edge(m.edge(e))).collect(),
        )
    }

    /// Index form of a partial morphism.
    pub fn partial(&self, m: &PartialMorphism, tgt: &IxGraph) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        (
            self.nodes.iter().map(|n| m.node(n).map(|v| tgt.node(v))).collect(),
            self.edge_ids.iter().map(|e| m.edge(e).map(|v| tgt.edge(v))).collect(),
        )
    }

    pub fn node_map(&self, tgt: &IxGraph, m: &[Option<usize>]) -> NodeMap {
        m.iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (self.nodes[i].clone(), tgt.nodes[v].clone())))
            .collect()
    }

    pub fn edge_map(&self, tgt: &IxGraph, m: &[Option<usize>]) -> EdgeMap {
        m.iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (self.edge_ids[i].clone(), tgt.edge_ids[v].clone())))
            .collect()
    }
}

/// Constraint on one item of the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fix {
    Free,
    Undef,
    Val(usize),
}

impl Fix {
    /// Adds a requirement, or `None` on conflict.
    pub fn meet(self, other: Fix) -> Option<Fix> {
        match (self, other) {
            (Fix::Free, x) | (x, Fix::Free) => Some(x),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn of(v: Option<usize>) -> Fix {
        v.map_or(Fix::Undef, Fix::Val)
    }
}

/// Collects constraints; `None` if two of them clash.
pub fn constraints(len: usize, reqs: impl IntoIterator<Item = (usize, Fix)>) -> Option<Vec<Fix>> {
    let mut out = vec![Fix::Free; len];
    for (i, f) in reqs {
        out[i] = out[i].meet(f)?;
    }
    Some(out)
}

struct Search<'a> {
    src: &'a IxGraph,
    tgt: &'a IxGraph,
    total: bool,
    fixed_n: &'a [Fix],
    fixed_e: &'a [Fix],
    /// Edges whose later endpoint is node `i`.
    closing: Vec<Vec<usize>>,
    hn: Vec<Option<usize>>,
    he: Vec<Option<usize>>,
    /// When set, how often each target edge is in use; free edges then only
    /// take used values or the first unused edge of their bundle.
    used: Option<Vec<u32>>,
}

impl Search<'_> {
    fn node_ok(&self, i: usize) -> bool {
        self.closing[i].iter().all(|&e| {
            let (s, t) = self.src.ends[e];
            match (self.hn[s], self.hn[t], self.fixed_e[e]) {
                (Some(a), Some(b), Fix::Val(v)) => self.tgt.ends[v] == (a, b),
                (Some(a), Some(b), Fix::Free) => !self.total || !self.tgt.parallel(a, b).is_empty(),
                (Some(_), Some(_), Fix::Undef) => !self.total,
                (_, _, Fix::Val(_)) => false,
                _ => true,
            }
        })
    }

    fn nodes(&mut self, i: usize, visit: &mut dyn FnMut(&[Option<usize>], &[Option<usize>]) -> ControlFlow<()>) -> ControlFlow<()> {
        if i == self.src.node_count() {
            return self.edges(0, visit);
        }
        let choices: Vec<Option<usize>> = match self.fixed_n[i] {
            Fix::Val(v) => vec![Some(v)],
            Fix::Undef if self.total => return ControlFlow::Continue(()),
            Fix::Undef => vec![None],
            Fix::Free => {
                let mut c: Vec<Option<usize>> = (0..self.tgt.node_count()).map(Some).collect();
                if !self.total {
                    c.insert(0, None);
                }
                c
            }
        };
        for c in choices {
            self.hn[i] = c;
            if self.node_ok(i) {
                self.nodes(i + 1, visit)?;
            }
        }
        self.hn[i] = None;
        ControlFlow::Continue(())
    }

    fn edges(&mut self, j: usize, visit: &mut dyn FnMut(&[Option<usize>], &[Option<usize>]) -> ControlFlow<()>) -> ControlFlow<()> {
        if j == self.src.edge_count() {
            return visit(&self.hn, &self.he);
        }
        let (s, t) = self.src.ends[j];
        let ends = match (self.hn[s], self.hn[t]) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        let choices: Vec<Option<usize>> = match (self.fixed_e[j], ends) {
            (Fix::Val(v), Some(ab)) if self.tgt.ends[v] == ab => vec![Some(v)],
            (Fix::Val(_), _) => return ControlFlow::Continue(()),
            (Fix::Undef, _) if self.total => return ControlFlow::Continue(()),
            (Fix::Undef, _) | (Fix::Free, None) => vec![None],
            (Fix::Free, Some((a, b))) => {
                let bundle = self.tgt.parallel(a, b);
                let mut c: Vec<Option<usize>> = match &self.used {
                    None => bundle.iter().map(|&v| Some(v)).collect(),
                    Some(used) => {
                        let fresh = bundle.iter().copied().find(|&v| used[v] == 0);
                        bundle.iter().copied().filter(|&v| used[v] > 0).chain(fresh).map(Some).collect()
                    }
                };
                if !self.total {
                    c.insert(0, None);
                }
                c
            }
        };
        for c in choices {
            self.he[j] = c;
            if let (Some(used), Some(v)) = (self.used.as_mut(), c) {
                used[v] += 1;
            }
            let flow = self.edges(j + 1, visit);
            if let (Some(used), Some(v)) = (self.used.as_mut(), c) {
                used[v] -= 1;
            }
            flow?;
        }
        self.he[j] = None;
        ControlFlow::Continue(())
    }
}

/// Enumerates total (`total`) or partial homomorphisms `src → tgt` that
/// respect the constraints. Partial maps are undefined on an edge whenever
/// they are undefined on one of its endpoints.
pub fn for_each_ix_hom(
    src: &IxGraph,
    tgt: &IxGraph,
    total: bool,
    fixed_n: &[Fix],
    fixed_e: &[Fix],
    visit: &mut dyn FnMut(&[Option<usize>], &[Option<usize>]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    search(src, tgt, total, fixed_n, fixed_e, None, visit)
}

/// As [`for_each_ix_hom`], but only one representative per orbit under
/// permutations of parallel target edges that fix the edges in `seen`.
/// Free edges take an already used edge or the first unused one of their
/// bundle; fixed values count as used.
pub fn for_each_ix_hom_up_to_parallel(
    src: &IxGraph,
    tgt: &IxGraph,
    total: bool,
    fixed_n: &[Fix],
    fixed_e: &[Fix],
    seen: &[Option<usize>],
    visit: &mut dyn FnMut(&[Option<usize>], &[Option<usize>]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut used = vec![0u32; tgt.edge_count()];
    for v in seen.iter().flatten() {
        used[*v] += 1;
    }
    for f in fixed_e {
        if let Fix::Val(v) = f {
            used[*v] += 1;
        }
    }
    search(src, tgt, total, fixed_n, fixed_e, Some(used), visit)
}

fn search(
    src: &IxGraph,
    tgt: &IxGraph,
    total: bool,
    fixed_n: &[Fix],
    fixed_e: &[Fix],
    used: Option<Vec<u32>>,
    visit: &mut dyn FnMut(&[Option<usize>], &[Option<usize>]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut closing = vec![Vec::new(); src.node_count()];
    for (e, (s, t)) in src.ends.iter().enumerate() {
        closing[(*s).max(*t)].push(e);
    }
    let mut search = Search {
        src,
        tgt,
        total,
        fixed_n,
        fixed_e,
        closing,
        hn: vec![None; src.node_count()],
        he: vec![None; src.edge_count()],
        used,
    };
    search.nodes(0, visit)
}

/// Counts homomorphisms under constraints, stopping at `stop_at`.
pub fn count_ix_homs(src: &IxGraph, tgt: &IxGraph, total: bool, fixed_n: &[Fix], fixed_e: &[Fix], stop_at: usize) -> usize {
    let mut count = 0;
    let _ = for_each_ix_hom(src, tgt, total, fixed_n, fixed_e, &mut |_, _| {
        count += 1;
        if count >= stop_at {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    count
}
