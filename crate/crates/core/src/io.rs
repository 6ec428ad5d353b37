//! Structured-text (JSON) documents for graphs, termgraphs, morphisms and
//! rules.
//!
//! A graph is `{"nodes": [{"id"}], "edges": [{"id", "src", "tgt"}]}`; a
//! termgraph adds a `signature` block and per-node `label` and ordered
//! `successors`. A morphism names its `source` and `target` (a path relative
//! to the document, or an inline graph) and carries `node_map`, `edge_map`
//! and, when partial, an explicit `domain`. Span rules are
//! `{"left": K→L, "right": K→R}`; HPO rules are `{"tau", "sigma"}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::RewriteError;
use crate::graph::{Edge, EdgeId, Graph, NodeId};
use crate::hpo::{HeteroMorphism, HpoRule};
use crate::morphism::{EdgeMap, Inclusion, NodeMap, PartialMorphism, TotalMorphism};
use crate::span::Span;
use crate::termgraph::{Term, TermGraph, TermMorphism, TermPartialMorphism};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct LoadError {
    pub file: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.file)?;
        if let Some(l) = self.line {
            write!(f, ":{l}")?;
            if let Some(c) = self.column {
                write!(f, ":{c}")?;
            }
        }
        write!(f, ": {}", self.message)
    }
}

pub type LoadResult<T> = std::result::Result<T, LoadError>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNode {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub successors: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEdge {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGraph {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<BTreeMap<String, usize>>,
    pub nodes: Vec<RawNode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObjectRef {
    Path(String),
    Inline(RawGraph),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDomain {
    pub nodes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<String>,
    /// Termgraph morphisms only: domain nodes whose structure is kept.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structured: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMorphism {
    pub source: ObjectRef,
    pub target: ObjectRef,
    pub node_map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edge_map: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<RawDomain>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpan {
    pub left: RawMorphism,
    pub right: RawMorphism,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHpoRule {
    pub tau: RawMorphism,
    pub sigma: RawMorphism,
}

/// First line (1-based) containing every needle.
fn locate(text: &str, needles: &[&str]) -> Option<usize> {
    text.lines().position(|l| needles.iter().all(|n| l.contains(n))).map(|i| i + 1)
}

fn quoted(s: &str) -> String {
    format!("\"{s}\"")
}

/// Where a semantic error about an id most likely comes from.
fn error_line(text: &str, err: &RewriteError) -> Option<usize> {
    let id = match err {
        RewriteError::DanglingEndpoint { node, .. } => node,
        RewriteError::DuplicateId(id) | RewriteError::UnknownNode(id) | RewriteError::UnknownEdge(id) => id,
        RewriteError::NotTotal(id) | RewriteError::NotStructurePreserving(id) => id,
        RewriteError::UnlabelledWithSuccessors(id) => id,
        RewriteError::ArityMismatch { node, .. } => node,
        RewriteError::UnknownLabel(l) => return locate(text, &["\"label\"", &quoted(l)]),
        _ => return None,
    };
    locate(text, &[&quoted(id)])
}

/// A parsed document together with its source text, for diagnostics.
#[derive(Debug, Clone)]
pub struct Document<T> {
    pub file: String,
    pub text: String,
    pub raw: T,
}

impl<T> Document<T> {
    pub fn error(&self, err: RewriteError) -> LoadError {
        LoadError {
            file: self.file.clone(),
            line: error_line(&self.text, &err),
            column: None,
            message: err.to_string(),
        }
    }

    pub fn fail(&self, message: impl Into<String>, needles: &[&str]) -> LoadError {
        LoadError {
            file: self.file.clone(),
            line: locate(&self.text, needles),
            column: None,
            message: message.into(),
        }
    }
}

pub fn parse_document<T: for<'de> Deserialize<'de>>(text: &str, file: &str) -> LoadResult<Document<T>> {
    let raw = serde_json::from_str(text).map_err(|e| {
        // the position is reported separately
        let message = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        LoadError {
            file: file.to_owned(),
            line: Some(e.line()),
            column: Some(e.column()),
            message: message.strip_suffix(&suffix).unwrap_or(&message).to_owned(),
        }
    })?;
    Ok(Document {
        file: file.to_owned(),
        text: text.to_owned(),
        raw,
    })
}

fn duplicates<'a>(ids: impl Iterator<Item = &'a String>) -> Option<&'a String> {
    let mut seen = BTreeSet::new();
    ids.into_iter().find(|id| !seen.insert(*id))
}

/// Builds a graph; termgraph fields are rejected.
pub fn graph_from_raw(raw: &RawGraph) -> crate::Result<Graph> {
    if raw.signature.is_some() {
        return Err(RewriteError::Other("a graph has no signature; this is a termgraph document".into()));
    }
    if let Some(n) = raw.nodes.iter().find(|n| n.label.is_some() || !n.successors.is_empty()) {
        return Err(RewriteError::Other(format!(
            "node `{}` has a label or successors; graphs use `edges`",
            n.id
        )));
    }
    if let Some(d) = duplicates(raw.nodes.iter().map(|n| &n.id)) {
        return Err(RewriteError::DuplicateId(d.clone()));
    }
    if let Some(d) = duplicates(raw.edges.iter().map(|e| &e.id)) {
        return Err(RewriteError::DuplicateId(d.clone()));
    }
    let nodes = raw.nodes.iter().map(|n| NodeId::from(n.id.as_str())).collect();
    let edges = raw
        .edges
        .iter()
        .map(|e| {
            (
                EdgeId::from(e.id.as_str()),
                Edge {
                    src: NodeId::from(e.src.as_str()),
                    tgt: NodeId::from(e.tgt.as_str()),
                },
            )
        })
        .collect();
    Graph::new(nodes, edges)
}

pub fn termgraph_from_raw(raw: &RawGraph) -> crate::Result<TermGraph> {
    let Some(sig) = &raw.signature else {
        return Err(RewriteError::Other("a termgraph document needs a `signature` block".into()));
    };
    if !raw.edges.is_empty() {
        return Err(RewriteError::Other("termgraphs have no `edges`; use ordered `successors`".into()));
    }
    let mut nodes = BTreeMap::new();
    for n in &raw.nodes {
        let term = match &n.label {
            Some(l) => Some(Term {
                label: l.clone(),
                succ: n.successors.iter().map(|s| NodeId::from(s.as_str())).collect(),
            }),
            None if !n.successors.is_empty() => return Err(RewriteError::UnlabelledWithSuccessors(n.id.clone())),
            None => None,
        };
        if nodes.insert(NodeId::from(n.id.as_str()), term).is_some() {
            return Err(RewriteError::DuplicateId(n.id.clone()));
        }
    }
    TermGraph::new(sig.clone(), nodes)
}

pub fn graph_to_raw(g: &Graph) -> RawGraph {
    RawGraph {
        signature: None,
        nodes: g
            .nodes()
            .iter()
            .map(|n| RawNode {
                id: n.0.clone(),
                ..RawNode::default()
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|(id, e)| RawEdge {
                id: id.0.clone(),
                src: e.src.0.clone(),
                tgt: e.tgt.0.clone(),
            })
            .collect(),
    }
}

pub fn termgraph_to_raw(t: &TermGraph) -> RawGraph {
    RawGraph {
        signature: Some(t.signature().clone()),
        nodes: t
            .entries()
            .iter()
            .map(|(id, term)| RawNode {
                id: id.0.clone(),
                label: term.as_ref().map(|t| t.label.clone()),
                successors: term.iter().flat_map(|t| t.succ.iter().map(|s| s.0.clone())).collect(),
            })
            .collect(),
        edges: Vec::new(),
    }
}

fn to_pretty<T: Serialize>(raw: &T) -> String {
    let mut s = serde_json::to_string_pretty(raw).expect("documents serialize");
    s.push('\n');
    s
}

pub fn graph_to_json(g: &Graph) -> String {
    to_pretty(&graph_to_raw(g))
}

pub fn termgraph_to_json(t: &TermGraph) -> String {
    to_pretty(&termgraph_to_raw(t))
}

fn string_map<K: AsRef<str>, V: AsRef<str>>(m: &BTreeMap<K, V>) -> BTreeMap<String, String> {
    m.iter().map(|(k, v)| (k.as_ref().to_owned(), v.as_ref().to_owned())).collect()
}

fn raw_total(m: &TotalMorphism) -> RawMorphism {
    RawMorphism {
        source: ObjectRef::Inline(graph_to_raw(m.source())),
        target: ObjectRef::Inline(graph_to_raw(m.target())),
        node_map: string_map(m.node_map()),
        edge_map: string_map(m.edge_map()),
        domain: None,
    }
}

fn raw_partial(m: &PartialMorphism) -> RawMorphism {
    let d = m.domain();
    RawMorphism {
        source: ObjectRef::Inline(graph_to_raw(m.source())),
        target: ObjectRef::Inline(graph_to_raw(m.target())),
        node_map: string_map(m.node_map()),
        edge_map: string_map(m.edge_map()),
        domain: Some(RawDomain {
            nodes: d.nodes().iter().map(|n| n.0.clone()).collect(),
            edges: d.edges().keys().map(|e| e.0.clone()).collect(),
            structured: Vec::new(),
        }),
    }
}

fn raw_term_partial(m: &TermPartialMorphism) -> RawMorphism {
    RawMorphism {
        source: ObjectRef::Inline(termgraph_to_raw(m.source())),
        target: ObjectRef::Inline(termgraph_to_raw(m.target())),
        node_map: string_map(m.map()),
        edge_map: BTreeMap::new(),
        domain: Some(RawDomain {
            nodes: m.map().keys().map(|n| n.0.clone()).collect(),
            edges: Vec::new(),
            structured: m.structured().iter().map(|n| n.0.clone()).collect(),
        }),
    }
}

/// A total morphism with both ends inline.
pub fn total_to_json(m: &TotalMorphism) -> String {
    to_pretty(&raw_total(m))
}

/// A partial morphism with explicit domain and both ends inline.
pub fn partial_to_json(m: &PartialMorphism) -> String {
    to_pretty(&raw_partial(m))
}

pub fn term_morphism_to_json(m: &TermMorphism) -> String {
    to_pretty(&RawMorphism {
        source: ObjectRef::Inline(termgraph_to_raw(m.source())),
        target: ObjectRef::Inline(termgraph_to_raw(m.target())),
        node_map: string_map(m.map()),
        edge_map: BTreeMap::new(),
        domain: None,
    })
}

pub fn span_to_json(s: &Span) -> String {
    to_pretty(&RawSpan {
        left: raw_total(&s.l),
        right: raw_total(&s.r),
    })
}

pub fn hpo_rule_to_json(r: &HpoRule) -> String {
    to_pretty(&RawHpoRule {
        tau: raw_term_partial(r.tau()),
        sigma: raw_term_partial(r.sigma()),
    })
}

#[derive(Debug, Clone)]
enum Loaded {
    Graph(Arc<Graph>),
    Term(Arc<TermGraph>),
}

/// Loads documents from disk. Objects referenced by path are parsed once
/// and shared, so a rule and a match naming the same file agree on it.
#[derive(Debug, Default)]
pub struct Loader {
    cache: BTreeMap<PathBuf, Loaded>,
}

fn read(path: &Path) -> LoadResult<String> {
    fs::read_to_string(path).map_err(|e| LoadError {
        file: path.display().to_string(),
        line: None,
        column: None,
        message: e.to_string(),
    })
}

fn ids<T: From<String> + Ord>(xs: &[String]) -> BTreeSet<T> {
    xs.iter().cloned().map(T::from).collect()
}

impl Loader {
    pub fn new() -> Self {
        Loader::default()
    }

    fn document<T: for<'de> Deserialize<'de>>(&self, path: &Path) -> LoadResult<Document<T>> {
        parse_document(&read(path)?, &path.display().to_string())
    }

    fn object(&mut self, path: &Path, term: bool) -> LoadResult<Loaded> {
        let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
        if let Some(o) = self.cache.get(&key) {
            return Ok(o.clone());
        }
        let doc: Document<RawGraph> = self.document(path)?;
        let o = if term {
            Loaded::Term(Arc::new(termgraph_from_raw(&doc.raw).map_err(|e| doc.error(e))?))
        } else {
            Loaded::Graph(Arc::new(graph_from_raw(&doc.raw).map_err(|e| doc.error(e))?))
        };
        self.cache.insert(key, o.clone());
        Ok(o)
    }

    pub fn graph(&mut self, path: &Path) -> LoadResult<Arc<Graph>> {
        match self.object(path, false)? {
            Loaded::Graph(g) => Ok(g),
            Loaded::Term(_) => Err(LoadError {
                file: path.display().to_string(),
                line: None,
                column: None,
                message: "expected a graph, found a termgraph".into(),
            }),
        }
    }

    pub fn termgraph(&mut self, path: &Path) -> LoadResult<Arc<TermGraph>> {
        match self.object(path, true)? {
            Loaded::Term(t) => Ok(t),
            Loaded::Graph(_) => Err(LoadError {
                file: path.display().to_string(),
                line: None,
                column: None,
                message: "expected a termgraph, found a graph".into(),
            }),
        }
    }

    fn resolve_graph<T>(&mut self, doc: &Document<T>, base: &Path, r: &ObjectRef) -> LoadResult<Arc<Graph>> {
        match r {
            ObjectRef::Path(p) => self.graph(&base.join(p)),
            ObjectRef::Inline(raw) => graph_from_raw(raw).map(Arc::new).map_err(|e| doc.error(e)),
        }
    }

    fn resolve_term<T>(&mut self, doc: &Document<T>, base: &Path, r: &ObjectRef) -> LoadResult<Arc<TermGraph>> {
        match r {
            ObjectRef::Path(p) => self.termgraph(&base.join(p)),
            ObjectRef::Inline(raw) => termgraph_from_raw(raw).map(Arc::new).map_err(|e| doc.error(e)),
        }
    }

    fn graph_ends<T>(&mut self, doc: &Document<T>, base: &Path, m: &RawMorphism) -> LoadResult<(Arc<Graph>, Arc<Graph>)> {
        Ok((self.resolve_graph(doc, base, &m.source)?, self.resolve_graph(doc, base, &m.target)?))
    }

    fn build_total<T>(&mut self, doc: &Document<T>, base: &Path, m: &RawMorphism) -> LoadResult<TotalMorphism> {
        if m.domain.is_some() {
            return Err(doc.fail("a total morphism has no `domain`", &["\"domain\""]));
        }
        let (s, t) = self.graph_ends(doc, base, m)?;
        TotalMorphism::new(s, t, map_ids(&m.node_map), map_ids(&m.edge_map)).map_err(|e| doc.error(e))
    }

    fn build_partial<T>(&mut self, doc: &Document<T>, base: &Path, m: &RawMorphism) -> LoadResult<PartialMorphism> {
        let (s, t) = self.graph_ends(doc, base, m)?;
        let (nodes, edges): (NodeMap, EdgeMap) = (map_ids(&m.node_map), map_ids(&m.edge_map));
        let Some(d) = &m.domain else {
            // no domain: the morphism is total
            return TotalMorphism::new(s, t, nodes, edges)
                .map(|f| PartialMorphism::from_total(&f))
                .map_err(|e| doc.error(e));
        };
        let (dn, de): (BTreeSet<NodeId>, BTreeSet<EdgeId>) = (ids(&d.nodes), ids(&d.edges));
        if let Some(n) = nodes.keys().find(|n| !dn.contains(*n)) {
            return Err(doc.fail(format!("`{n}` is mapped but outside the domain"), &[&quoted(&n.0)]));
        }
        if let Some(e) = edges.keys().find(|e| !de.contains(*e)) {
            return Err(doc.fail(format!("`{e}` is mapped but outside the domain"), &[&quoted(&e.0)]));
        }
        let domain = s.subgraph(&dn, &de).map_err(|e| doc.error(e))?;
        PartialMorphism::new(s, t, Arc::new(domain), nodes, edges).map_err(|e| doc.error(e))
    }

    fn build_term_partial<T>(&mut self, doc: &Document<T>, base: &Path, m: &RawMorphism, what: &str) -> LoadResult<TermPartialMorphism> {
        if !m.edge_map.is_empty() {
            return Err(doc.fail("termgraph morphisms have no `edge_map`", &["\"edge_map\""]));
        }
        let Some(d) = &m.domain else {
            return Err(doc.fail(format!("`{what}` needs an explicit `domain`"), &[&quoted(what)]));
        };
        let s = self.resolve_term(doc, base, &m.source)?;
        let t = self.resolve_term(doc, base, &m.target)?;
        let map: NodeMap = map_ids(&m.node_map);
        let dn: BTreeSet<NodeId> = ids(&d.nodes);
        if map.keys().cloned().collect::<BTreeSet<_>>() != dn {
            return Err(doc.fail(format!("`{what}`: domain nodes and node_map keys differ"), &["\"nodes\""]));
        }
        TermPartialMorphism::new(s, t, map, ids(&d.structured)).map_err(|e| doc.error(e))
    }

    pub fn total(&mut self, path: &Path) -> LoadResult<TotalMorphism> {
        let doc: Document<RawMorphism> = self.document(path)?;
        let base = parent(path);
        let raw = doc.raw.clone();
        self.build_total(&doc, &base, &raw)
    }

    pub fn partial(&mut self, path: &Path) -> LoadResult<PartialMorphism> {
        let doc: Document<RawMorphism> = self.document(path)?;
        let base = parent(path);
        let raw = doc.raw.clone();
        self.build_partial(&doc, &base, &raw)
    }

    pub fn inclusion(&mut self, path: &Path) -> LoadResult<Inclusion> {
        let doc: Document<RawMorphism> = self.document(path)?;
        let base = parent(path);
        let raw = doc.raw.clone();
        let f = self.build_total(&doc, &base, &raw)?;
        Inclusion::from_morphism(&f).map_err(|e| doc.error(e))
    }

    pub fn term_morphism(&mut self, path: &Path) -> LoadResult<TermMorphism> {
        let doc: Document<RawMorphism> = self.document(path)?;
        let base = parent(path);
        if doc.raw.domain.is_some() || !doc.raw.edge_map.is_empty() {
            return Err(doc.fail("a termgraph match has only `node_map`", &["\"domain\""]));
        }
        let s = self.resolve_term(&doc, &base, &doc.raw.source)?;
        let t = self.resolve_term(&doc, &base, &doc.raw.target)?;
        TermMorphism::new(s, t, map_ids(&doc.raw.node_map)).map_err(|e| doc.error(e))
    }

    pub fn span(&mut self, path: &Path) -> LoadResult<Span> {
        let doc: Document<RawSpan> = self.document(path)?;
        let base = parent(path);
        let raw = doc.raw.clone();
        let l = self.build_total(&doc, &base, &raw.left)?;
        let r = self.build_total(&doc, &base, &raw.right)?;
        Span::new(l, r).map_err(|e| doc.error(e))
    }

    pub fn hpo_rule(&mut self, path: &Path) -> LoadResult<HpoRule> {
        let doc: Document<RawHpoRule> = self.document(path)?;
        let base = parent(path);
        let raw = doc.raw.clone();
        let tau = self.build_term_partial(&doc, &base, &raw.tau, "tau")?;
        let sigma = self.build_term_partial(&doc, &base, &raw.sigma, "sigma")?;
        let rho = HeteroMorphism::new(tau, sigma).map_err(|e| doc.error(e))?;
        HpoRule::new(rho).map_err(|e| doc.error(e))
    }
}

fn parent(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn map_ids<K: From<String> + Ord, V: From<String>>(m: &BTreeMap<String, String>) -> BTreeMap<K, V> {
    m.iter().map(|(k, v)| (K::from(k.clone()), V::from(v.clone()))).collect()
}
