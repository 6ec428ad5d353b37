//! Difference, quotient and disjoint union of graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::error::{Result, RewriteError};
use crate::graph::{Edge, EdgeId, FreshNames, Graph, NodeId, PartialGraph};
use crate::morphism::{EdgeMap, NodeMap, TotalMorphism};

/// `g − h`: the items of `g` not in `h`, keeping the original endpoints
/// (which may now be missing).
pub fn graph_difference(g: &Graph, h: &Graph) -> Result<PartialGraph> {
    if !h.is_subgraph_of(g) {
        return Err(RewriteError::NotSubgraph(format!("{h} ⊄ {g}")));
    }
    Ok(remove_items(g, h.nodes(), &h.edges().keys().cloned().collect()))
}

/// Removes the given items from `g` without touching incident edges.
pub fn remove_items(g: &Graph, nodes: &BTreeSet<NodeId>, edges: &BTreeSet<EdgeId>) -> PartialGraph {
    PartialGraph {
        nodes: g.nodes().difference(nodes).cloned().collect(),
        edges: g
            .edges()
            .iter()
            .filter(|(id, _)| !edges.contains(*id))
            .map(|(id, e)| (id.clone(), e.clone()))
            .collect(),
    }
}

/// The quotient of `g` by the congruence generated by the given node and
/// edge identifications, with its projection.
///
/// Identifying two edges identifies their sources and their targets. Each
/// class is named after its least member.
pub fn quotient(
    g: &Arc<Graph>,
    node_pairs: &[(NodeId, NodeId)],
    edge_pairs: &[(EdgeId, EdgeId)],
) -> Result<(Arc<Graph>, TotalMorphism)> {
    quotient_preferring(g, node_pairs, edge_pairs, &BTreeSet::new(), &BTreeSet::new())
}

/// As [`quotient`], but a class containing preferred items is named after
/// its least preferred member.
pub(crate) fn quotient_preferring(
    g: &Arc<Graph>,
    node_pairs: &[(NodeId, NodeId)],
    edge_pairs: &[(EdgeId, EdgeId)],
    prefer_nodes: &BTreeSet<NodeId>,
    prefer_edges: &BTreeSet<EdgeId>,
) -> Result<(Arc<Graph>, TotalMorphism)> {
    let nodes: Vec<&NodeId> = g.nodes().iter().collect();
    let edges: Vec<(&EdgeId, &Edge)> = g.edges().iter().collect();
    let nidx: BTreeMap<&NodeId, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let eidx: BTreeMap<&EdgeId, usize> = edges.iter().enumerate().map(|(i, (e, _))| (*e, i)).collect();
    let node_index = |n: &NodeId| nidx.get(n).copied().ok_or_else(|| RewriteError::UnknownNode(n.0.clone()));
    let edge_index = |e: &EdgeId| eidx.get(e).copied().ok_or_else(|| RewriteError::UnknownEdge(e.0.clone()));

    let mut nuf = UnionFind::<usize>::new(nodes.len());
    let mut euf = UnionFind::<usize>::new(edges.len());
    for (a, b) in node_pairs {
        nuf.union(node_index(a)?, node_index(b)?);
    }
    for (a, b) in edge_pairs {
        euf.union(edge_index(a)?, edge_index(b)?);
    }
    // Edge classes force their endpoints together; node unions never
    // force edge unions, so one pass suffices.
    for (i, (_, e)) in edges.iter().enumerate() {
        let (_, r) = edges[euf.find(i)];
        nuf.union(nidx[&e.src], nidx[&r.src]);
        nuf.union(nidx[&e.tgt], nidx[&r.tgt]);
    }

    let mut node_rep: BTreeMap<usize, &NodeId> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        let root = nuf.find(i);
        let better = match node_rep.get(&root) {
            None => true,
            Some(cur) => {
                let (cp, np) = (prefer_nodes.contains(*cur), prefer_nodes.contains(*n));
                (np && !cp) || (np == cp && *n < *cur)
            }
        };
        if better {
            node_rep.insert(root, n);
        }
    }
    let mut edge_rep: BTreeMap<usize, &EdgeId> = BTreeMap::new();
    for (i, (e, _)) in edges.iter().enumerate() {
        let root = euf.find(i);
        let better = match edge_rep.get(&root) {
            None => true,
            Some(cur) => {
                let (cp, np) = (prefer_edges.contains(*cur), prefer_edges.contains(*e));
                (np && !cp) || (np == cp && *e < *cur)
            }
        };
        if better {
            edge_rep.insert(root, e);
        }
    }

    let nmap: NodeMap = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| ((*n).clone(), node_rep[&nuf.find(i)].clone()))
        .collect();
    let emap: EdgeMap = edges
        .iter()
        .enumerate()
        .map(|(i, (e, _))| ((*e).clone(), edge_rep[&euf.find(i)].clone()))
        .collect();
    let qnodes: BTreeSet<NodeId> = nmap.values().cloned().collect();
    let qedges: BTreeMap<EdgeId, Edge> = edges
        .iter()
        .map(|(e, edge)| {
            (
                emap[*e].clone(),
                Edge {
                    src: nmap[&edge.src].clone(),
                    tgt: nmap[&edge.tgt].clone(),
                },
            )
        })
        .collect();
    let q = Arc::new(Graph::from_parts_unchecked(qnodes, qedges));
    let proj = TotalMorphism::new_unchecked(g.clone(), q.clone(), nmap, emap);
    Ok((q, proj))
}

/// Coproduct `g ⊎ h`. Items of `g` keep their ids; items of `h` keep
/// theirs unless taken, in which case they get a `#n` suffix.
pub fn disjoint_union(g: &Arc<Graph>, h: &Arc<Graph>) -> (Arc<Graph>, TotalMorphism, TotalMorphism) {
    let mut node_names = FreshNames::new();
    let mut edge_names = FreshNames::new();
    for n in g.nodes() {
        node_names.reserve(n.as_str());
    }
    for e in g.edges().keys() {
        edge_names.reserve(e.as_str());
    }
    let hn: NodeMap = h
        .nodes()
        .iter()
        .map(|n| (n.clone(), NodeId(node_names.fresh(n.as_str()))))
        .collect();
    let he: EdgeMap = h
        .edges()
        .keys()
        .map(|e| (e.clone(), EdgeId(edge_names.fresh(e.as_str()))))
        .collect();

    let mut nodes = g.nodes().clone();
    nodes.extend(hn.values().cloned());
    let mut edges = g.edges().clone();
    for (id, e) in h.edges() {
        edges.insert(
            he[id].clone(),
            Edge {
                src: hn[&e.src].clone(),
                tgt: hn[&e.tgt].clone(),
            },
        );
    }
    let u = Arc::new(Graph::from_parts_unchecked(nodes, edges));
    let inl = TotalMorphism::inclusion(g.clone(), u.clone()).expect("left summand is a subgraph");
    let inr = TotalMorphism::new_unchecked(h.clone(), u.clone(), hn, he);
    (u, inl, inr)
}
