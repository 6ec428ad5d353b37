//! Backtracking enumeration of graph homomorphisms.
//!
//! Exhaustive and exponential; intended for the small graphs used by the
//! universal-property oracles.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::morphism::{EdgeMap, NodeMap, TotalMorphism};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomKind {
    Any,
    Mono,
    Iso,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomLimits {
    pub max_nodes: usize,
    pub max_edges: usize,
}

impl Default for HomLimits {
    fn default() -> Self {
        HomLimits {
            max_nodes: 6,
            max_edges: 8,
        }
    }
}

impl HomLimits {
    fn check(&self, g: &Graph) -> Result<()> {
        if g.node_count() > self.max_nodes || g.edge_count() > self.max_edges {
            return Err(RewriteError::CapExceeded(format!(
                "graph with {} nodes / {} edges exceeds {} / {}",
                g.node_count(),
                g.edge_count(),
                self.max_nodes,
                self.max_edges
            )));
        }
        Ok(())
    }
}

/// All homomorphisms `g → h` of the given kind, under the default size cap.
pub fn enumerate_homs(g: &Arc<Graph>, h: &Arc<Graph>, kind: HomKind) -> Result<Vec<TotalMorphism>> {
    enumerate_homs_with(g, h, kind, HomLimits::default())
}

pub fn enumerate_homs_with(
    g: &Arc<Graph>,
    h: &Arc<Graph>,
    kind: HomKind,
    limits: HomLimits,
) -> Result<Vec<TotalMorphism>> {
    limits.check(g)?;
    limits.check(h)?;
    let mut out = Vec::new();
    for_each_hom(g, h, kind, &NodeMap::new(), &EdgeMap::new(), |n, e| {
        out.push(TotalMorphism::new_unchecked(g.clone(), h.clone(), n.clone(), e.clone()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// An isomorphism `g → h` if one exists. Deterministic: the first one in
/// search order.
pub fn iso_check(g: &Arc<Graph>, h: &Arc<Graph>) -> Option<TotalMorphism> {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    if degree_profile(g) != degree_profile(h) {
        return None;
    }
    let mut found = None;
    for_each_hom(g, h, HomKind::Iso, &NodeMap::new(), &EdgeMap::new(), |n, e| {
        found = Some(TotalMorphism::new_unchecked(g.clone(), h.clone(), n.clone(), e.clone()));
        ControlFlow::Break(())
    });
    found
}

pub fn is_isomorphic(g: &Arc<Graph>, h: &Arc<Graph>) -> bool {
    iso_check(g, h).is_some()
}

fn degree_profile(g: &Graph) -> Vec<(usize, usize, usize)> {
    let mut deg: BTreeMap<&NodeId, (usize, usize, usize)> = g.nodes().iter().map(|n| (n, (0, 0, 0))).collect();
    for e in g.edges().values() {
        deg.get_mut(&e.src).expect("endpoint").0 += 1;
        deg.get_mut(&e.tgt).expect("endpoint").1 += 1;
        if e.src == e.tgt {
            deg.get_mut(&e.src).expect("endpoint").2 += 1;
        }
    }
    let mut v: Vec<_> = deg.into_values().collect();
    v.sort_unstable();
    v
}

/// Counts homomorphisms extending the given partial assignment, stopping
/// once `stop_at` have been seen.
pub fn count_homs_extending(
    g: &Arc<Graph>,
    h: &Arc<Graph>,
    kind: HomKind,
    fixed_nodes: &NodeMap,
    fixed_edges: &EdgeMap,
    stop_at: usize,
) -> usize {
    let mut count = 0;
    for_each_hom(g, h, kind, fixed_nodes, fixed_edges, |_, _| {
        count += 1;
        if count >= stop_at {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    count
}

/// Calls `visit` on every homomorphism `g → h` of the given kind that
/// agrees with `fixed_nodes` / `fixed_edges`.
pub fn for_each_hom<F>(
    g: &Graph,
    h: &Graph,
    kind: HomKind,
    fixed_nodes: &NodeMap,
    fixed_edges: &EdgeMap,
    mut visit: F,
) where
    F: FnMut(&NodeMap, &EdgeMap) -> ControlFlow<()>,
{
    if kind == HomKind::Iso && (g.node_count() != h.node_count() || g.edge_count() != h.edge_count()) {
        return;
    }
    if kind != HomKind::Any && (g.node_count() > h.node_count() || g.edge_count() > h.edge_count()) {
        return;
    }
    // Fixed assignments must be consistent with the target.
    if fixed_nodes.values().any(|n| !h.has_node(n)) || fixed_edges.values().any(|e| !h.has_edge(e)) {
        return;
    }
    let mut by_ends: BTreeMap<(&NodeId, &NodeId), Vec<&EdgeId>> = BTreeMap::new();
    for (id, e) in h.edges() {
        by_ends.entry((&e.src, &e.tgt)).or_default().push(id);
    }
    // Fixed nodes first, then the rest in id order.
    let mut order: Vec<&NodeId> = g.nodes().iter().filter(|n| fixed_nodes.contains_key(*n)).collect();
    order.extend(g.nodes().iter().filter(|n| !fixed_nodes.contains_key(*n)));
    let edges: Vec<(&EdgeId, &crate::graph::Edge)> = g.edges().iter().collect();

    let search = Search {
        g,
        h,
        kind,
        fixed_nodes,
        fixed_edges,
        by_ends,
        order,
        edges,
    };
    let mut nodes = NodeMap::new();
    let mut used = BTreeSet::new();
    let _ = search.assign_node(0, &mut nodes, &mut used, &mut visit);
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    kind: HomKind,
    fixed_nodes: &'a NodeMap,
    fixed_edges: &'a EdgeMap,
    by_ends: BTreeMap<(&'a NodeId, &'a NodeId), Vec<&'a EdgeId>>,
    order: Vec<&'a NodeId>,
    edges: Vec<(&'a EdgeId, &'a crate::graph::Edge)>,
}

impl<'a> Search<'a> {
    fn candidates(&self, n: &NodeId) -> Vec<&'a NodeId> {
        match self.fixed_nodes.get(n) {
            Some(t) => self.h.nodes().get(t).into_iter().collect(),
            None => self.h.nodes().iter().collect(),
        }
    }

    fn edges_feasible(&self, nodes: &NodeMap, just: &NodeId) -> bool {
        self.g.edges().values().all(|e| {
            if &e.src != just && &e.tgt != just {
                return true;
            }
            match (nodes.get(&e.src), nodes.get(&e.tgt)) {
                (Some(s), Some(t)) => self.by_ends.contains_key(&(s, t)),
                _ => true,
            }
        })
    }

    fn assign_node<F>(
        &self,
        i: usize,
        nodes: &mut NodeMap,
        used: &mut BTreeSet<NodeId>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&NodeMap, &EdgeMap) -> ControlFlow<()>,
    {
        if i == self.order.len() {
            let mut edges = EdgeMap::new();
            let mut used_e = BTreeSet::new();
            return self.assign_edge(0, nodes, &mut edges, &mut used_e, visit);
        }
        let n = self.order[i];
        let injective = self.kind != HomKind::Any;
        for cand in self.candidates(n) {
            if injective && used.contains(cand) {
                continue;
            }
            nodes.insert(n.clone(), cand.clone());
            if self.edges_feasible(nodes, n) {
                if injective {
                    used.insert(cand.clone());
                }
                let flow = self.assign_node(i + 1, nodes, used, visit);
                if injective {
                    used.remove(cand);
                }
                if flow.is_break() {
                    nodes.remove(n);
                    return flow;
                }
            }
            nodes.remove(n);
        }
        ControlFlow::Continue(())
    }

    fn assign_edge<F>(
        &self,
        i: usize,
        nodes: &NodeMap,
        edges: &mut EdgeMap,
        used: &mut BTreeSet<EdgeId>,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&NodeMap, &EdgeMap) -> ControlFlow<()>,
    {
        if i == self.edges.len() {
            return visit(nodes, edges);
        }
        let (id, e) = self.edges[i];
        let key = (&nodes[&e.src], &nodes[&e.tgt]);
        let Some(cands) = self.by_ends.get(&key) else {
            return ControlFlow::Continue(());
        };
        let injective = self.kind != HomKind::Any;
        for cand in cands {
            if let Some(fixed) = self.fixed_edges.get(id) {
                if fixed != *cand {
                    continue;
                }
            }
            if injective && used.contains(*cand) {
                continue;
            }
            edges.insert(id.clone(), (*cand).clone());
            if injective {
                used.insert((*cand).clone());
            }
            let flow = self.assign_edge(i + 1, nodes, edges, used, visit);
            if injective {
                used.remove(*cand);
            }
            edges.remove(id);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// All isomorphisms `x → y` sending each `a` to its paired `b` in the
/// given node and edge pairs. Conflicting pairs yield nothing.
pub fn isos_fixing(
    x: &Arc<Graph>,
    y: &Arc<Graph>,
    node_pairs: impl IntoIterator<Item = (NodeId, NodeId)>,
    edge_pairs: impl IntoIterator<Item = (EdgeId, EdgeId)>,
) -> Vec<TotalMorphism> {
    let Some(fixed_nodes) = consistent_map(node_pairs) else {
        return Vec::new();
    };
    let Some(fixed_edges) = consistent_map(edge_pairs) else {
        return Vec::new();
    };
    if fixed_nodes.keys().any(|n| !x.has_node(n)) || fixed_edges.keys().any(|e| !x.has_edge(e)) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for_each_hom(x, y, HomKind::Iso, &fixed_nodes, &fixed_edges, |n, e| {
        out.push(TotalMorphism::new_unchecked(x.clone(), y.clone(), n.clone(), e.clone()));
        ControlFlow::Continue(())
    });
    out
}

/// Builds a map from pairs, or `None` if a key is paired twice with
/// different values.
pub fn consistent_map<K: Ord, V: PartialEq>(pairs: impl IntoIterator<Item = (K, V)>) -> Option<BTreeMap<K, V>> {
    let mut map = BTreeMap::new();
    for (k, v) in pairs {
        match map.get(&k) {
            Some(old) if *old != v => return None,
            Some(_) => {}
            None => {
                map.insert(k, v);
            }
        }
    }
    Some(map)
}
