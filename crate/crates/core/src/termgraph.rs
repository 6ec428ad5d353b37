//! Termgraphs: graphs whose labelled nodes carry an ordered successor list
//! of the label's arity, and their (partial) morphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{Edge, EdgeId, Graph, NodeId};
use crate::homs::HomKind;
use crate::morphism::NodeMap;

pub type Signature = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub label: String,
    pub succ: Vec<NodeId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TermGraph {
    signature: Signature,
    nodes: BTreeMap<NodeId, Option<Term>>,
}

impl TermGraph {
    pub fn new(signature: Signature, nodes: BTreeMap<NodeId, Option<Term>>) -> Result<Self> {
        for (n, t) in &nodes {
            let Some(t) = t else { continue };
            let arity = *signature
                .get(&t.label)
                .ok_or_else(|| RewriteError::UnknownLabel(t.label.clone()))?;
            if t.succ.len() != arity {
                return Err(RewriteError::ArityMismatch {
                    node: n.0.clone(),
                    label: t.label.clone(),
                    arity,
                    found: t.succ.len(),
                });
            }
            if let Some(s) = t.succ.iter().find(|s| !nodes.contains_key(*s)) {
                return Err(RewriteError::DanglingEndpoint {
                    edge: format!("{n}.{}", t.succ.iter().position(|x| x == s).unwrap_or(0)),
                    node: s.0.clone(),
                });
            }
        }
        Ok(TermGraph { signature, nodes })
    }

    /// `nodes` are `(id, Some((label, successors)))` or `(id, None)`.
    pub fn build(signature: &[(&str, usize)], nodes: &[(&str, Option<(&str, &[&str])>)]) -> Result<Self> {
        let sig = signature.iter().map(|(l, a)| ((*l).to_owned(), *a)).collect();
        let mut ns = BTreeMap::new();
        for (id, t) in nodes {
            let term = t.map(|(l, s)| Term {
                label: l.to_owned(),
                succ: s.iter().map(|x| NodeId::from(*x)).collect(),
            });
            if ns.insert(NodeId::from(*id), term).is_some() {
                return Err(RewriteError::DuplicateId((*id).to_owned()));
            }
        }
        TermGraph::new(sig, ns)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn node_set(&self) -> BTreeSet<NodeId> {
        self.nodes.keys().cloned().collect()
    }

    pub fn entries(&self) -> &BTreeMap<NodeId, Option<Term>> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn has_node(&self, n: &NodeId) -> bool {
        self.nodes.contains_key(n)
    }

    pub fn term(&self, n: &NodeId) -> Option<&Term> {
        self.nodes.get(n).and_then(Option::as_ref)
    }

    pub fn label(&self, n: &NodeId) -> Option<&str> {
        self.term(n).map(|t| t.label.as_str())
    }

    pub fn is_labeled(&self, n: &NodeId) -> bool {
        self.term(n).is_some()
    }

    pub fn labeled_nodes(&self) -> BTreeSet<NodeId> {
        self.nodes
            .iter()
            .filter(|(_, t)| t.is_some())
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn successors(&self, n: &NodeId) -> &[NodeId] {
        self.term(n).map(|t| t.succ.as_slice()).unwrap_or(&[])
    }

    /// The underlying graph; the `i`-th successor edge of `n` is `n.i`.
    pub fn underlying_graph(&self) -> Graph {
        let nodes = self.node_set();
        let mut edges = BTreeMap::new();
        for (n, t) in &self.nodes {
            if let Some(t) = t {
                for (i, s) in t.succ.iter().enumerate() {
                    edges.insert(
                        EdgeId(format!("{n}.{i}")),
                        Edge {
                            src: n.clone(),
                            tgt: s.clone(),
                        },
                    );
                }
            }
        }
        Graph::new(nodes, edges).expect("termgraph successors are nodes")
    }
}

impl fmt::Display for TermGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (n, t) in &self.nodes {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            match t {
                None => write!(f, "{n}")?,
                Some(t) => {
                    write!(f, "{n}:{}", t.label)?;
                    if !t.succ.is_empty() {
                        let s: Vec<&str> = t.succ.iter().map(NodeId::as_str).collect();
                        write!(f, "({})", s.join(","))?;
                    }
                }
            }
        }
        write!(f, "}}")
    }
}

fn same(a: &Arc<TermGraph>, b: &Arc<TermGraph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Checks that `map` sends every node of `structured` (a subset of the
/// domain, labelled in `source`) to a node with the same label and
/// positionally mapped successors.
fn check_structure(
    source: &TermGraph,
    target: &TermGraph,
    map: &NodeMap,
    structured: &BTreeSet<NodeId>,
) -> Result<()> {
    for n in structured {
        let t = source
            .term(n)
            .ok_or_else(|| RewriteError::NotStructurePreserving(format!("{n} is unlabelled")))?;
        let img = map.get(n).ok_or_else(|| RewriteError::NotTotal(n.0.clone()))?;
        let Some(ti) = target.term(img) else {
            return Err(RewriteError::NotStructurePreserving(n.0.clone()));
        };
        if ti.label != t.label || ti.succ.len() != t.succ.len() {
            return Err(RewriteError::NotStructurePreserving(n.0.clone()));
        }
        for (s, si) in t.succ.iter().zip(&ti.succ) {
            if map.get(s) != Some(si) {
                return Err(RewriteError::NotStructurePreserving(n.0.clone()));
            }
        }
    }
    Ok(())
}

/// A termgraph morphism: a node map preserving labels and successor order
/// on labelled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMorphism {
    source: Arc<TermGraph>,
    target: Arc<TermGraph>,
    map: NodeMap,
}

impl TermMorphism {
    pub fn new(source: Arc<TermGraph>, target: Arc<TermGraph>, map: NodeMap) -> Result<Self> {
        for n in source.nodes() {
            let img = map.get(n).ok_or_else(|| RewriteError::NotTotal(n.0.clone()))?;
            if !target.has_node(img) {
                return Err(RewriteError::UnknownNode(img.0.clone()));
            }
        }
        if map.len() != source.node_count() {
            let extra = map.keys().find(|n| !source.has_node(n)).expect("extra key");
            return Err(RewriteError::UnknownNode(extra.0.clone()));
        }
        check_structure(&source, &target, &map, &source.labeled_nodes())?;
        Ok(TermMorphism { source, target, map })
    }

    pub fn identity(g: Arc<TermGraph>) -> Self {
        let map = g.nodes().map(|n| (n.clone(), n.clone())).collect();
        TermMorphism {
            source: g.clone(),
            target: g,
            map,
        }
    }

    pub fn source(&self) -> &Arc<TermGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TermGraph> {
        &self.target
    }

    pub fn map(&self) -> &NodeMap {
        &self.map
    }

    pub fn node(&self, n: &NodeId) -> &NodeId {
        &self.map[n]
    }

    pub fn is_mono(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.values().all(|v| seen.insert(v))
    }

    /// Bijective, and unlabelled nodes go to unlabelled nodes (so the
    /// inverse is a morphism too).
    pub fn is_iso(&self) -> bool {
        self.is_mono()
            && self.map.len() == self.target.node_count()
            && self
                .map
                .iter()
                .all(|(a, b)| self.source.is_labeled(a) == self.target.is_labeled(b))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &TermMorphism) -> Result<TermMorphism> {
        if !same(&self.target, &next.source) {
            return Err(RewriteError::EndpointMismatch("termgraph morphism chain".into()));
        }
        let map = self.map.iter().map(|(a, b)| (a.clone(), next.map[b].clone())).collect();
        Ok(TermMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map,
        })
    }

    pub fn inverse(&self) -> Option<TermMorphism> {
        self.is_iso().then(|| TermMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map: self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        })
    }

    pub(crate) fn new_unchecked(source: Arc<TermGraph>, target: Arc<TermGraph>, map: NodeMap) -> Self {
        debug_assert!(TermMorphism::new(source.clone(), target.clone(), map.clone()).is_ok());
        TermMorphism { source, target, map }
    }
}

impl fmt::Display for TermMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|(a, b)| format!("{a}↦{b}")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A partial termgraph morphism. Its domain is a sub-termgraph of the
/// source: a set of nodes (the keys of `map`) of which those in
/// `structured` keep their label and successors; the others are seen as
/// unlabelled in the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermPartialMorphism {
    source: Arc<TermGraph>,
    target: Arc<TermGraph>,
    map: NodeMap,
    structured: BTreeSet<NodeId>,
}

impl TermPartialMorphism {
    pub fn new(
        source: Arc<TermGraph>,
        target: Arc<TermGraph>,
        map: NodeMap,
        structured: BTreeSet<NodeId>,
    ) -> Result<Self> {
        for (a, b) in &map {
            if !source.has_node(a) {
                return Err(RewriteError::UnknownNode(a.0.clone()));
            }
            if !target.has_node(b) {
                return Err(RewriteError::UnknownNode(b.0.clone()));
            }
        }
        for n in &structured {
            if !map.contains_key(n) {
                return Err(RewriteError::NotSubgraph(format!("structured node {n} outside the domain")));
            }
        }
        check_structure(&source, &target, &map, &structured)?;
        Ok(TermPartialMorphism {
            source,
            target,
            map,
            structured,
        })
    }

    /// A partial node map whose domain carries no labels.
    pub fn bare(source: Arc<TermGraph>, target: Arc<TermGraph>, map: NodeMap) -> Result<Self> {
        TermPartialMorphism::new(source, target, map, BTreeSet::new())
    }

    pub fn nowhere(source: Arc<TermGraph>, target: Arc<TermGraph>) -> Self {
        TermPartialMorphism {
            source,
            target,
            map: NodeMap::new(),
            structured: BTreeSet::new(),
        }
    }

    pub fn from_total(f: &TermMorphism) -> Self {
        TermPartialMorphism {
            source: f.source.clone(),
            target: f.target.clone(),
            map: f.map.clone(),
            structured: f.source.labeled_nodes(),
        }
    }

    pub fn source(&self) -> &Arc<TermGraph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TermGraph> {
        &self.target
    }

    pub fn map(&self) -> &NodeMap {
        &self.map
    }

    pub fn structured(&self) -> &BTreeSet<NodeId> {
        &self.structured
    }

    pub fn node(&self, n: &NodeId) -> Option<&NodeId> {
        self.map.get(n)
    }

    pub fn is_total_on_nodes(&self) -> bool {
        self.map.len() == self.source.node_count()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.map.values().all(|v| seen.insert(v))
    }

    /// `next ∘ self`: defined on nodes landing in the domain of `next`;
    /// structure survives where both factors keep it.
    pub fn then(&self, next: &TermPartialMorphism) -> Result<TermPartialMorphism> {
        if !same(&self.target, &next.source) {
            return Err(RewriteError::EndpointMismatch("partial termgraph morphism chain".into()));
        }
        let map: NodeMap = self
            .map
            .iter()
            .filter_map(|(a, b)| next.map.get(b).map(|c| (a.clone(), c.clone())))
            .collect();
        let structured = self
            .structured
            .iter()
            .filter(|n| next.structured.contains(&self.map[*n]))
            .cloned()
            .collect();
        Ok(TermPartialMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map,
            structured,
        })
    }

    /// Precomposition with a total morphism: `self ∘ f`.
    pub fn after_total(&self, f: &TermMorphism) -> Result<TermPartialMorphism> {
        TermPartialMorphism::from_total(f).then(self)
    }

    /// Postcomposition with a total morphism: `f ∘ self`.
    pub fn before_total(&self, f: &TermMorphism) -> Result<TermPartialMorphism> {
        self.then(&TermPartialMorphism::from_total(f))
    }
}

/// Calls `visit` for every node map `src → tgt` defined on `domain`,
/// preserving the structure of the `structured` nodes, of the given kind
/// (injectivity for `Mono`, bijectivity plus label reflection for `Iso`)
/// and agreeing with `fixed`.
pub fn for_each_term_hom<F>(
    src: &TermGraph,
    domain: &BTreeSet<NodeId>,
    structured: &BTreeSet<NodeId>,
    tgt: &TermGraph,
    kind: HomKind,
    fixed: &NodeMap,
    mut visit: F,
) where
    F: FnMut(&NodeMap) -> ControlFlow<()>,
{
    if kind == HomKind::Iso && domain.len() != tgt.node_count() {
        return;
    }
    let mut order: Vec<&NodeId> = domain.iter().filter(|n| fixed.contains_key(*n)).collect();
    order.extend(domain.iter().filter(|n| !fixed.contains_key(*n)));
    let mut map = NodeMap::new();
    let mut used = BTreeSet::new();
    let _ = term_assign(src, structured, tgt, kind, fixed, &order, 0, &mut map, &mut used, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn term_assign<F>(
    src: &TermGraph,
    structured: &BTreeSet<NodeId>,
    tgt: &TermGraph,
    kind: HomKind,
    fixed: &NodeMap,
    order: &[&NodeId],
    i: usize,
    map: &mut NodeMap,
    used: &mut BTreeSet<NodeId>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&NodeMap) -> ControlFlow<()>,
{
    if i == order.len() {
        return visit(map);
    }
    let n = order[i];
    let cands: Vec<&NodeId> = match fixed.get(n) {
        Some(t) => tgt.entries().get_key_value(t).map(|(k, _)| k).into_iter().collect(),
        None => tgt.nodes().collect(),
    };
    let injective = kind != HomKind::Any;
    for c in cands {
        if injective && used.contains(c) {
            continue;
        }
        if kind == HomKind::Iso && (structured.contains(n) != tgt.is_labeled(c)) {
            continue;
        }
        map.insert(n.clone(), c.clone());
        if locally_consistent(src, structured, tgt, map, n) {
            if injective {
                used.insert(c.clone());
            }
            let flow = term_assign(src, structured, tgt, kind, fixed, order, i + 1, map, used, visit);
            if injective {
                used.remove(c);
            }
            if flow.is_break() {
                map.remove(n);
                return flow;
            }
        }
        map.remove(n);
    }
    ControlFlow::Continue(())
}

fn locally_consistent(
    src: &TermGraph,
    structured: &BTreeSet<NodeId>,
    tgt: &TermGraph,
    map: &NodeMap,
    just: &NodeId,
) -> bool {
    let ok = |n: &NodeId| -> bool {
        let Some(img) = map.get(n) else { return true };
        let t = src.term(n).expect("structured nodes are labelled");
        let Some(ti) = tgt.term(img) else { return false };
        ti.label == t.label
            && t
                .succ
                .iter()
                .zip(&ti.succ)
                .all(|(s, si)| map.get(s).map_or(true, |m| m == si))
    };
    if structured.contains(just) && !ok(just) {
        return false;
    }
    structured
        .iter()
        .filter(|n| *n != just && src.successors(n).contains(just))
        .all(ok)
}

/// All termgraph morphisms `g → h` of the given kind.
pub fn enumerate_term_homs(g: &Arc<TermGraph>, h: &Arc<TermGraph>, kind: HomKind) -> Vec<TermMorphism> {
    let mut out = Vec::new();
    for_each_term_hom(
        g,
        &g.node_set(),
        &g.labeled_nodes(),
        h,
        kind,
        &NodeMap::new(),
        |m| {
            out.push(TermMorphism::new_unchecked(g.clone(), h.clone(), m.clone()));
            ControlFlow::Continue(())
        },
    );
    out
}

/// A termgraph isomorphism `g → h`, if any.
pub fn term_iso_check(g: &Arc<TermGraph>, h: &Arc<TermGraph>) -> Option<TermMorphism> {
    if g.node_count() != h.node_count() || g.labeled_nodes().len() != h.labeled_nodes().len() {
        return None;
    }
    let mut found = None;
    for_each_term_hom(
        g,
        &g.node_set(),
        &g.labeled_nodes(),
        h,
        HomKind::Iso,
        &NodeMap::new(),
        |m| {
            found = Some(TermMorphism::new_unchecked(g.clone(), h.clone(), m.clone()));
            ControlFlow::Break(())
        },
    );
    found
}
