//! Finite directed multigraphs with explicit, opaque node and edge ids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RewriteError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

macro_rules! id_conversions {
    ($ty:ident) => {
        impl From<&str> for $ty {
            fn from(s: &str) -> Self {
                $ty(s.to_owned())
            }
        }
        impl From<String> for $ty {
            fn from(s: String) -> Self {
                $ty(s)
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl AsRef<str> for $ty {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
        impl $ty {
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
    };
}

id_conversions!(NodeId);
id_conversions!(EdgeId);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: NodeId,
    pub tgt: NodeId,
}

/// A finite graph. Every edge endpoint is a node of the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<EdgeId, Edge>,
}

impl Graph {
    pub fn new(nodes: BTreeSet<NodeId>, edges: BTreeMap<EdgeId, Edge>) -> Result<Self> {
        for (id, e) in &edges {
            for n in [&e.src, &e.tgt] {
                if !nodes.contains(n) {
                    return Err(RewriteError::DanglingEndpoint {
                        edge: id.0.clone(),
                        node: n.0.clone(),
                    });
                }
            }
        }
        Ok(Graph { nodes, edges })
    }

    pub fn empty() -> Self {
        Graph::default()
    }

    /// Builds a graph from string ids; edges are `(id, src, tgt)`.
    pub fn build(nodes: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let mut ns = BTreeSet::new();
        for n in nodes {
            if !ns.insert(NodeId::from(*n)) {
                return Err(RewriteError::DuplicateId((*n).to_owned()));
            }
        }
        let mut es = BTreeMap::new();
        for (id, s, t) in edges {
            let prev = es.insert(
                EdgeId::from(*id),
                Edge {
                    src: NodeId::from(*s),
                    tgt: NodeId::from(*t),
                },
            );
            if prev.is_some() {
                return Err(RewriteError::DuplicateId((*id).to_owned()));
            }
        }
        Graph::new(ns, es)
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<EdgeId, Edge> {
        &self.edges
    }

    pub fn edge(&self, e: &EdgeId) -> Option<&Edge> {
        self.edges.get(e)
    }

    pub fn has_node(&self, n: &NodeId) -> bool {
        self.nodes.contains(n)
    }

    pub fn has_edge(&self, e: &EdgeId) -> bool {
        self.edges.contains_key(e)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn size(&self) -> usize {
        self.node_count() + self.edge_count()
    }

    /// Targets of the out-edges of `n`, in edge-id order.
    pub fn successors<'a>(&'a self, n: &'a NodeId) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.edges
            .values()
            .filter(move |e| &e.src == n)
            .map(|e| &e.tgt)
    }

    /// Componentwise id inclusion with agreeing endpoints.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.nodes.is_subset(&other.nodes)
            && self
                .edges
                .iter()
                .all(|(id, e)| other.edges.get(id) == Some(e))
    }

    /// The subgraph generated by `keep`: those nodes plus every edge with
    /// both endpoints among them.
    pub fn induced(&self, keep: &BTreeSet<NodeId>) -> Graph {
        let nodes: BTreeSet<NodeId> = self.nodes.intersection(keep).cloned().collect();
        let edges = self
            .edges
            .iter()
            .filter(|(_, e)| nodes.contains(&e.src) && nodes.contains(&e.tgt))
            .map(|(id, e)| (id.clone(), e.clone()))
            .collect();
        Graph { nodes, edges }
    }

    /// Subgraph from explicit node and edge sets; fails if an edge would dangle.
    pub fn subgraph(&self, nodes: &BTreeSet<NodeId>, edges: &BTreeSet<EdgeId>) -> Result<Graph> {
        let mut es = BTreeMap::new();
        for id in edges {
            let e = self
                .edges
                .get(id)
                .ok_or_else(|| RewriteError::UnknownEdge(id.0.clone()))?;
            es.insert(id.clone(), e.clone());
        }
        for n in nodes {
            if !self.nodes.contains(n) {
                return Err(RewriteError::UnknownNode(n.0.clone()));
            }
        }
        Graph::new(nodes.clone(), es)
    }

    pub fn to_partial(&self) -> PartialGraph {
        PartialGraph {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        }
    }

    pub(crate) fn from_parts_unchecked(nodes: BTreeSet<NodeId>, edges: BTreeMap<EdgeId, Edge>) -> Self {
        debug_assert!(edges
            .values()
            .all(|e| nodes.contains(&e.src) && nodes.contains(&e.tgt)));
        Graph { nodes, edges }
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for n in &self.nodes {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{n}")?;
        }
        for (id, e) in &self.edges {
            write!(f, "; {id}:{}->{}", e.src, e.tgt)?;
        }
        write!(f, "}}")
    }
}

/// Like [`Graph`] but edges may reference absent nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialGraph {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeMap<EdgeId, Edge>,
}

impl PartialGraph {
    pub fn is_graph(&self) -> bool {
        self.edges
            .values()
            .all(|e| self.nodes.contains(&e.src) && self.nodes.contains(&e.tgt))
    }

    /// Edges with at least one endpoint missing.
    pub fn dangling_edges(&self) -> BTreeSet<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, e)| !self.nodes.contains(&e.src) || !self.nodes.contains(&e.tgt))
            .map(|(id, _)| id.clone())
            .collect()
    }

    pub fn into_graph(self) -> Result<Graph> {
        Graph::new(self.nodes, self.edges)
    }
}

/// Deterministic fresh-name supply: `base` if unused, else `base#n` with
/// the least unused `n >= 1`.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    used: BTreeSet<String>,
}

impl FreshNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_owned());
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let name = if self.used.contains(base) {
            (1..)
                .map(|n| format!("{base}#{n}"))
                .find(|c| !self.used.contains(c))
                .expect("unbounded counter")
        } else {
            base.to_owned()
        };
        self.used.insert(name.clone());
        name
    }
}
