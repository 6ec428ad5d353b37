//! Total and partial graph morphisms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{EdgeId, Graph, NodeId};

pub type NodeMap = BTreeMap<NodeId, NodeId>;
pub type EdgeMap = BTreeMap<EdgeId, EdgeId>;

fn same_object(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn injective<K, V: Ord>(m: &BTreeMap<K, V>) -> bool {
    let mut seen = BTreeSet::new();
    m.values().all(|v| seen.insert(v))
}

fn check_maps(dom: &Graph, target: &Graph, nodes: &NodeMap, edges: &EdgeMap) -> Result<()> {
    for n in dom.nodes() {
        let img = nodes
            .get(n)
            .ok_or_else(|| RewriteError::NotTotal(n.0.clone()))?;
        if !target.has_node(img) {
            return Err(RewriteError::UnknownNode(img.0.clone()));
        }
    }
    if nodes.len() != dom.node_count() {
        let extra = nodes.keys().find(|n| !dom.has_node(n)).expect("extra key");
        return Err(RewriteError::UnknownNode(extra.0.clone()));
    }
    for (id, e) in dom.edges() {
        let img = edges
            .get(id)
            .ok_or_else(|| RewriteError::NotTotal(id.0.clone()))?;
        let te = target
            .edge(img)
            .ok_or_else(|| RewriteError::UnknownEdge(img.0.clone()))?;
        if nodes[&e.src] != te.src || nodes[&e.tgt] != te.tgt {
            return Err(RewriteError::NotStructurePreserving(id.0.clone()));
        }
    }
    if edges.len() != dom.edge_count() {
        let extra = edges.keys().find(|e| !dom.has_edge(e)).expect("extra key");
        return Err(RewriteError::UnknownEdge(extra.0.clone()));
    }
    Ok(())
}

/// A graph morphism, defined on every node and edge of its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalMorphism {
    source: Arc<Graph>,
    target: Arc<Graph>,
    nodes: NodeMap,
    edges: EdgeMap,
}

impl TotalMorphism {
    pub fn new(source: Arc<Graph>, target: Arc<Graph>, nodes: NodeMap, edges: EdgeMap) -> Result<Self> {
        check_maps(&source, &target, &nodes, &edges)?;
        Ok(TotalMorphism {
            source,
            target,
            nodes,
            edges,
        })
    }

    pub(crate) fn new_unchecked(source: Arc<Graph>, target: Arc<Graph>, nodes: NodeMap, edges: EdgeMap) -> Self {
        debug_assert!(check_maps(&source, &target, &nodes, &edges).is_ok());
        TotalMorphism {
            source,
            target,
            nodes,
            edges,
        }
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let nodes = g.nodes().iter().map(|n| (n.clone(), n.clone())).collect();
        let edges = g.edges().keys().map(|e| (e.clone(), e.clone())).collect();
        TotalMorphism {
            source: g.clone(),
            target: g,
            nodes,
            edges,
        }
    }

    /// The id-preserving inclusion of `sub` into `sup`.
    pub fn inclusion(sub: Arc<Graph>, sup: Arc<Graph>) -> Result<Self> {
        if !sub.is_subgraph_of(&sup) {
            return Err(RewriteError::NotSubgraph(format!("{sub} is not contained in {sup}")));
        }
        let nodes = sub.nodes().iter().map(|n| (n.clone(), n.clone())).collect();
        let edges = sub.edges().keys().map(|e| (e.clone(), e.clone())).collect();
        Ok(TotalMorphism {
            source: sub,
            target: sup,
            nodes,
            edges,
        })
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn node_map(&self) -> &NodeMap {
        &self.nodes
    }

    pub fn edge_map(&self) -> &EdgeMap {
        &self.edges
    }

    pub fn node(&self, n: &NodeId) -> &NodeId {
        &self.nodes[n]
    }

    pub fn edge(&self, e: &EdgeId) -> &EdgeId {
        &self.edges[e]
    }

    pub fn is_mono(&self) -> bool {
        injective(&self.nodes) && injective(&self.edges)
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono()
            && self.nodes.len() == self.target.node_count()
            && self.edges.len() == self.target.edge_count()
    }

    pub fn is_inclusion(&self) -> bool {
        self.nodes.iter().all(|(a, b)| a == b) && self.edges.iter().all(|(a, b)| a == b)
    }

    pub fn image_nodes(&self) -> BTreeSet<NodeId> {
        self.nodes.values().cloned().collect()
    }

    pub fn image_edges(&self) -> BTreeSet<EdgeId> {
        self.edges.values().cloned().collect()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &TotalMorphism) -> Result<TotalMorphism> {
        if !same_object(&self.target, &next.source) {
            return Err(RewriteError::EndpointMismatch(format!(
                "target {} differs from source {}",
                self.target, next.source
            )));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|(a, b)| (a.clone(), next.nodes[b].clone()))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|(a, b)| (a.clone(), next.edges[b].clone()))
            .collect();
        Ok(TotalMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            nodes,
            edges,
        })
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Option<TotalMorphism> {
        if !self.is_iso() {
            return None;
        }
        Some(TotalMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            nodes: self.nodes.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            edges: self.edges.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        })
    }

    /// The same maps viewed with a different (structurally equal) source or target.
    pub fn with_target(&self, target: Arc<Graph>) -> Result<TotalMorphism> {
        TotalMorphism::new(self.source.clone(), target, self.nodes.clone(), self.edges.clone())
    }

    /// Restriction to a subgraph of the source.
    pub fn restrict(&self, sub: Arc<Graph>) -> Result<TotalMorphism> {
        if !sub.is_subgraph_of(&self.source) {
            return Err(RewriteError::NotSubgraph("restriction domain".into()));
        }
        let nodes = sub.nodes().iter().map(|n| (n.clone(), self.nodes[n].clone())).collect();
        let edges = sub.edges().keys().map(|e| (e.clone(), self.edges[e].clone())).collect();
        Ok(TotalMorphism::new_unchecked(sub, self.target.clone(), nodes, edges))
    }
}

impl fmt::Display for TotalMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut first = true;
        for (a, b) in &self.nodes {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{a}↦{b}")?;
        }
        for (a, b) in &self.edges {
            write!(f, ", {a}↦{b}")?;
        }
        write!(f, "]")
    }
}

/// `g ∘ f`.
pub fn compose_total(f: &TotalMorphism, g: &TotalMorphism) -> Result<TotalMorphism> {
    f.then(g)
}

/// A morphism defined on a subgraph (its domain) of the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMorphism {
    source: Arc<Graph>,
    target: Arc<Graph>,
    domain: Arc<Graph>,
    nodes: NodeMap,
    edges: EdgeMap,
}

impl PartialMorphism {
    pub fn new(
        source: Arc<Graph>,
        target: Arc<Graph>,
        domain: Arc<Graph>,
        nodes: NodeMap,
        edges: EdgeMap,
    ) -> Result<Self> {
        if !domain.is_subgraph_of(&source) {
            return Err(RewriteError::NotSubgraph("partial morphism domain".into()));
        }
        check_maps(&domain, &target, &nodes, &edges)?;
        Ok(PartialMorphism {
            source,
            target,
            domain,
            nodes,
            edges,
        })
    }

    /// Builds a partial morphism whose domain is read off the maps.
    pub fn from_maps(source: Arc<Graph>, target: Arc<Graph>, nodes: NodeMap, edges: EdgeMap) -> Result<Self> {
        let dn: BTreeSet<NodeId> = nodes.keys().cloned().collect();
        let de: BTreeSet<EdgeId> = edges.keys().cloned().collect();
        let domain = Arc::new(source.subgraph(&dn, &de)?);
        PartialMorphism::new(source, target, domain, nodes, edges)
    }

    /// The nowhere-defined morphism ω.
    pub fn nowhere(source: Arc<Graph>, target: Arc<Graph>) -> Self {
        PartialMorphism {
            source,
            target,
            domain: Arc::new(Graph::empty()),
            nodes: NodeMap::new(),
            edges: EdgeMap::new(),
        }
    }

    pub fn from_total(f: &TotalMorphism) -> Self {
        PartialMorphism {
            source: f.source.clone(),
            target: f.target.clone(),
            domain: f.source.clone(),
            nodes: f.nodes.clone(),
            edges: f.edges.clone(),
        }
    }

    pub fn source(&self) -> &Arc<Graph> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Graph> {
        &self.target
    }

    pub fn domain(&self) -> &Arc<Graph> {
        &self.domain
    }

    pub fn node_map(&self) -> &NodeMap {
        &self.nodes
    }

    pub fn edge_map(&self) -> &EdgeMap {
        &self.edges
    }

    pub fn node(&self, n: &NodeId) -> Option<&NodeId> {
        self.nodes.get(n)
    }

    pub fn edge(&self, e: &EdgeId) -> Option<&EdgeId> {
        self.edges.get(e)
    }

    pub fn is_total(&self) -> bool {
        self.domain.node_count() == self.source.node_count()
            && self.domain.edge_count() == self.source.edge_count()
    }

    /// The underlying total morphism from the domain.
    pub fn carrier(&self) -> TotalMorphism {
        TotalMorphism::new_unchecked(self.domain.clone(), self.target.clone(), self.nodes.clone(), self.edges.clone())
    }

    pub fn to_total(&self) -> Option<TotalMorphism> {
        self.is_total().then(|| {
            TotalMorphism::new_unchecked(self.source.clone(), self.target.clone(), self.nodes.clone(), self.edges.clone())
        })
    }

    pub fn is_partial_mono(&self) -> bool {
        injective(&self.nodes) && injective(&self.edges)
    }

    /// `next ∘ self`, defined where `self` is defined and lands in the domain of `next`.
    pub fn then(&self, next: &PartialMorphism) -> Result<PartialMorphism> {
        if !same_object(&self.target, &next.source) {
            return Err(RewriteError::EndpointMismatch(format!(
                "target {} differs from source {}",
                self.target, next.source
            )));
        }
        let nodes: NodeMap = self
            .nodes
            .iter()
            .filter_map(|(a, b)| next.nodes.get(b).map(|c| (a.clone(), c.clone())))
            .collect();
        let edges: EdgeMap = self
            .edges
            .iter()
            .filter_map(|(a, b)| next.edges.get(b).map(|c| (a.clone(), c.clone())))
            .collect();
        let dn = nodes.keys().cloned().collect();
        let de = edges.keys().cloned().collect();
        let domain = Arc::new(self.source.subgraph(&dn, &de)?);
        Ok(PartialMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            domain,
            nodes,
            edges,
        })
    }
}

/// `g ∘ f` in the category of graphs with partial morphisms.
pub fn compose_partial(f: &PartialMorphism, g: &PartialMorphism) -> Result<PartialMorphism> {
    f.then(g)
}

pub fn is_mono(f: &TotalMorphism) -> bool {
    f.is_mono()
}

pub fn is_partial_mono(f: &PartialMorphism) -> bool {
    f.is_partial_mono()
}

/// An inclusion `sub ⊆ sup`; identity on ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inclusion {
    sub: Arc<Graph>,
    sup: Arc<Graph>,
}

impl Inclusion {
    pub fn new(sub: Arc<Graph>, sup: Arc<Graph>) -> Result<Self> {
        if !sub.is_subgraph_of(&sup) {
            return Err(RewriteError::NotSubgraph(format!("{sub} ⊄ {sup}")));
        }
        Ok(Inclusion { sub, sup })
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        Inclusion { sub: g.clone(), sup: g }
    }

    pub fn from_morphism(f: &TotalMorphism) -> Result<Self> {
        if !f.is_inclusion() {
            return Err(RewriteError::InadmissibleMatch(format!("{f} is not an inclusion")));
        }
        Ok(Inclusion {
            sub: f.source.clone(),
            sup: f.target.clone(),
        })
    }

    pub fn sub(&self) -> &Arc<Graph> {
        &self.sub
    }

    pub fn sup(&self) -> &Arc<Graph> {
        &self.sup
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Inclusion) -> Result<Inclusion> {
        if !same_object(&self.sup, &next.sub) {
            return Err(RewriteError::EndpointMismatch("inclusion chain".into()));
        }
        Ok(Inclusion {
            sub: self.sub.clone(),
            sup: next.sup.clone(),
        })
    }

    pub fn to_morphism(&self) -> TotalMorphism {
        TotalMorphism::inclusion(self.sub.clone(), self.sup.clone()).expect("checked on construction")
    }
}
