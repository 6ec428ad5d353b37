//! Final pullback complements in the two regimes where they are known to
//! exist: monic rules with conflict-free matches, and arbitrary rules with
//! monic matches (which clone).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::dpo::{inverse_total_system_common, require_mono};
use crate::error::{Result, RewriteError};
use crate::graph::{Edge, EdgeId, FreshNames, Graph, NodeId};
use crate::morphism::{EdgeMap, NodeMap, TotalMorphism};
use crate::pushout::{check_source, same_graph, TotalSquare};
use crate::system::{RewriteSquare, RewriteSystem, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackComplement {
    pub object: Arc<Graph>,
    /// `K1 → L1`
    pub l1: TotalMorphism,
    /// `K → K1`
    pub g: TotalMorphism,
}

fn check_inputs(l: &TotalMorphism, f: &TotalMorphism) -> Result<()> {
    if !same_graph(l.target(), f.source()) {
        return Err(RewriteError::EndpointMismatch("match source is not the rule's left-hand side".into()));
    }
    Ok(())
}

/// No item of `l(K)` is identified by `f` with an item outside `l(K)`.
pub fn conflict_free_sqpo(l: &TotalMorphism, f: &TotalMorphism) -> Result<bool> {
    check_inputs(l, f)?;
    let lg = l.target();
    let (kn, ke) = (l.image_nodes(), l.image_edges());
    let in_nodes: BTreeSet<&NodeId> = kn.iter().map(|x| f.node(x)).collect();
    let in_edges: BTreeSet<&EdgeId> = ke.iter().map(|x| f.edge(x)).collect();
    let node_clash = lg
        .nodes()
        .iter()
        .filter(|x| !kn.contains(*x))
        .any(|x| in_nodes.contains(f.node(x)));
    let edge_clash = lg
        .edges()
        .keys()
        .filter(|x| !ke.contains(*x))
        .any(|x| in_edges.contains(f.edge(x)));
    Ok(!node_clash && !edge_clash)
}

/// The final pullback complement for a mono `l` and a match conflict-free
/// with respect to `l`: `L1` minus `f(L − l(K))` and the edges this leaves
/// dangling. `None` when `f` is not conflict-free.
pub fn fpbc_left_linear(l: &TotalMorphism, f: &TotalMorphism) -> Result<Option<PullbackComplement>> {
    require_mono(l)?;
    if !conflict_free_sqpo(l, f)? {
        return Ok(None);
    }
    let lg = l.target();
    let l1 = f.target();
    let (kn, ke) = (l.image_nodes(), l.image_edges());
    let del_nodes: BTreeSet<NodeId> = lg
        .nodes()
        .iter()
        .filter(|x| !kn.contains(*x))
        .map(|x| f.node(x).clone())
        .collect();
    let del_edges: BTreeSet<EdgeId> = lg
        .edges()
        .keys()
        .filter(|x| !ke.contains(*x))
        .map(|x| f.edge(x).clone())
        .collect();
    let nodes: BTreeSet<NodeId> = l1.nodes().difference(&del_nodes).cloned().collect();
    let edges: BTreeSet<EdgeId> = l1
        .edges()
        .iter()
        .filter(|(id, e)| !del_edges.contains(*id) && nodes.contains(&e.src) && nodes.contains(&e.tgt))
        .map(|(id, _)| id.clone())
        .collect();
    let object = Arc::new(l1.subgraph(&nodes, &edges)?);
    let k = l.source();
    let g = TotalMorphism::new(
        k.clone(),
        object.clone(),
        k.nodes().iter().map(|x| (x.clone(), f.node(l.node(x)).clone())).collect(),
        k.edges().keys().map(|x| (x.clone(), f.edge(l.edge(x)).clone())).collect(),
    )?;
    let incl = TotalMorphism::inclusion(object.clone(), l1.clone())?;
    Ok(Some(PullbackComplement { object, l1: incl, g }))
}

/// The final pullback complement for an arbitrary `l` and a mono `f`:
/// `K` together with the context `L1 − f(L)`, where every context edge is
/// replicated once per choice of preimages of its endpoints.
pub fn fpbc_monic_match(l: &TotalMorphism, f: &TotalMorphism) -> Result<PullbackComplement> {
    check_inputs(l, f)?;
    if !f.is_mono() {
        return Err(RewriteError::InadmissibleMatch(format!("match {f} is not a mono")));
    }
    let k = l.source();
    let l1 = f.target();
    let image_nodes = f.image_nodes();
    let image_edges = f.image_edges();

    let mut node_names = FreshNames::new();
    let mut edge_names = FreshNames::new();
    for n in k.nodes() {
        node_names.reserve(n.as_str());
    }
    for e in k.edges().keys() {
        edge_names.reserve(e.as_str());
    }

    let mut nodes: BTreeSet<NodeId> = k.nodes().clone();
    let mut edges: BTreeMap<EdgeId, Edge> = k.edges().clone();
    let mut l1_nodes: NodeMap = k.nodes().iter().map(|x| (x.clone(), f.node(l.node(x)).clone())).collect();
    let mut l1_edges: EdgeMap = k.edges().keys().map(|x| (x.clone(), f.edge(l.edge(x)).clone())).collect();

    // Preimages in K1 of each node of L1.
    let mut pre: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for x in k.nodes() {
        pre.entry(f.node(l.node(x)).clone()).or_default().push(x.clone());
    }
    for v in l1.nodes().iter().filter(|v| !image_nodes.contains(*v)) {
        let name = NodeId(node_names.fresh(v.as_str()));
        nodes.insert(name.clone());
        l1_nodes.insert(name.clone(), v.clone());
        pre.insert(v.clone(), vec![name]);
    }
    let none = Vec::new();
    for (id, e) in l1.edges().iter().filter(|(id, _)| !image_edges.contains(*id)) {
        let srcs = pre.get(&e.src).unwrap_or(&none);
        let tgts = pre.get(&e.tgt).unwrap_or(&none);
        for s in srcs {
            for t in tgts {
                let name = EdgeId(edge_names.fresh(id.as_str()));
                edges.insert(
                    name.clone(),
                    Edge {
                        src: s.clone(),
                        tgt: t.clone(),
                    },
                );
                l1_edges.insert(name, id.clone());
            }
        }
    }
    let object = Arc::new(Graph::new(nodes, edges)?);
    let l1m = TotalMorphism::new(object.clone(), l1.clone(), l1_nodes, l1_edges)?;
    let g = TotalMorphism::new(
        k.clone(),
        object.clone(),
        k.nodes().iter().map(|x| (x.clone(), x.clone())).collect(),
        k.edges().keys().map(|x| (x.clone(), x.clone())).collect(),
    )?;
    Ok(PullbackComplement { object, l1: l1m, g })
}

fn complement_square(rule: &TotalMorphism, f: &TotalMorphism, pc: PullbackComplement) -> Step<TotalSquare> {
    Step::Defined(RewriteSquare {
        top: rule.clone(),
        bottom: pc.l1,
        left: f.clone(),
        right: pc.g,
    })
}

/// Final pullback complements for monic rules; the domain is the
/// conflict-free matches.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fpbc1System;

impl RewriteSystem for Fpbc1System {
    inverse_total_system_common!();

    fn name(&self) -> String {
        "fpbc1".into()
    }

    fn check_rule(&self, rule: &TotalMorphism) -> Result<()> {
        require_mono(rule)
    }

    fn check_match(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<()> {
        check_source(rule.target(), f)
    }

    fn apply(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<Step<TotalSquare>> {
        Ok(match fpbc_left_linear(rule, f)? {
            None => Step::Undefined("match is not conflict-free with respect to the rule".into()),
            Some(pc) => complement_square(rule, f, pc),
        })
    }
}

/// Final pullback complements along monic matches; total.
#[derive(Debug, Clone, Copy, Default)]
pub struct Fpbc2System;

impl RewriteSystem for Fpbc2System {
    inverse_total_system_common!();

    fn name(&self) -> String {
        "fpbc2".into()
    }

    fn check_rule(&self, _rule: &TotalMorphism) -> Result<()> {
        Ok(())
    }

    fn check_match(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<()> {
        check_source(rule.target(), f)?;
        if !f.is_mono() {
            return Err(RewriteError::InadmissibleMatch(format!("match {f} is not a mono")));
        }
        Ok(())
    }

    fn apply(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<Step<TotalSquare>> {
        Ok(complement_square(rule, f, fpbc_monic_match(rule, f)?))
    }
}
