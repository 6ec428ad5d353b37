//! Random small instances for the property suites and the CLI.
//!
//! Graphs stay within 4 nodes and 5 edges, termgraphs within 4 nodes over
//! two labels of arity at most 2. Matches are built by extending their
//! source, so every generated morphism is valid by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Edge, EdgeId, Graph, NodeId};
use crate::hpo::{HeteroMorphism, HpoRule};
use crate::morphism::{EdgeMap, NodeMap, PartialMorphism, TotalMorphism};
use crate::span::Span;
use crate::termgraph::{Signature, Term, TermGraph, TermMorphism, TermPartialMorphism};

pub const MAX_NODES: usize = 4;
pub const MAX_EDGES: usize = 5;

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub nodes: usize,
    pub edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            nodes: MAX_NODES,
            edges: MAX_EDGES,
        }
    }
}

/// A random graph with node ids `{prefix}0, {prefix}1, ...`.
pub fn random_graph(rng: &mut StdRng, prefix: &str, max_nodes: usize, max_edges: usize) -> Graph {
    let n = rng.gen_range(0..=max_nodes);
    let nodes: Vec<NodeId> = (0..n).map(|i| NodeId(format!("{prefix}{i}"))).collect();
    let mut edges = BTreeMap::new();
    if n > 0 {
        let m = rng.gen_range(0..=max_edges);
        for i in 0..m {
            let src = nodes.choose(rng).expect("nonempty").clone();
            let tgt = nodes.choose(rng).expect("nonempty").clone();
            edges.insert(EdgeId(format!("{prefix}e{i}")), Edge { src, tgt });
        }
    }
    Graph::new(nodes.into_iter().collect(), edges).expect("random graph")
}

/// A random morphism out of `src` into a fresh graph built around its
/// image. Non-mono extensions identify items with probability 1/4.
pub fn random_extension(rng: &mut StdRng, src: &Arc<Graph>, mono: bool, prefix: &str, lim: Limits) -> TotalMorphism {
    let mut nodes: Vec<NodeId> = Vec::new();
    let mut nmap = NodeMap::new();
    for x in src.nodes() {
        let target = if !mono && !nodes.is_empty() && rng.gen_bool(0.25) {
            nodes.choose(rng).expect("nonempty").clone()
        } else {
            let id = NodeId(format!("{prefix}{}", nodes.len()));
            nodes.push(id.clone());
            id
        };
        nmap.insert(x.clone(), target);
    }
    let extra = lim.nodes.saturating_sub(nodes.len());
    for _ in 0..rng.gen_range(0..=extra) {
        nodes.push(NodeId(format!("{prefix}{}", nodes.len())));
    }
    let mut edges: BTreeMap<EdgeId, Edge> = BTreeMap::new();
    let mut emap = EdgeMap::new();
    for (id, e) in src.edges() {
        let want = Edge {
            src: nmap[&e.src].clone(),
            tgt: nmap[&e.tgt].clone(),
        };
        let parallel: Vec<&EdgeId> = edges.iter().filter(|(_, d)| **d == want).map(|(i, _)| i).collect();
        let target = if !mono && !parallel.is_empty() && rng.gen_bool(0.25) {
            (*parallel.choose(rng).expect("nonempty")).clone()
        } else {
            let eid = EdgeId(format!("{prefix}e{}", edges.len()));
            edges.insert(eid.clone(), want);
            eid
        };
        emap.insert(id.clone(), target);
    }
    if !nodes.is_empty() {
        let extra = lim.edges.saturating_sub(edges.len());
        for _ in 0..rng.gen_range(0..=extra) {
            let e = Edge {
                src: nodes.choose(rng).expect("nonempty").clone(),
                tgt: nodes.choose(rng).expect("nonempty").clone(),
            };
            edges.insert(EdgeId(format!("{prefix}e{}", edges.len())), e);
        }
    }
    let tgt = Arc::new(Graph::new(nodes.into_iter().collect(), edges).expect("extension"));
    TotalMorphism::new(src.clone(), tgt, nmap, emap).expect("extension morphism")
}

/// A random subgraph of `g`.
pub fn random_subgraph(rng: &mut StdRng, g: &Graph) -> Graph {
    let nodes: BTreeSet<NodeId> = g.nodes().iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
    let edges: BTreeSet<EdgeId> = g
        .edges()
        .iter()
        .filter(|(_, e)| nodes.contains(&e.src) && nodes.contains(&e.tgt))
        .filter(|_| rng.gen_bool(0.6))
        .map(|(id, _)| id.clone())
        .collect();
    g.subgraph(&nodes, &edges).expect("subgraph")
}

/// A supergraph of `g` keeping its ids, within the limits.
pub fn random_supergraph(rng: &mut StdRng, g: &Graph, prefix: &str, lim: Limits) -> Graph {
    let mut nodes = g.nodes().clone();
    let extra = lim.nodes.saturating_sub(nodes.len());
    for i in 0..rng.gen_range(0..=extra) {
        nodes.insert(NodeId(format!("{prefix}{i}")));
    }
    let mut edges = g.edges().clone();
    let all: Vec<NodeId> = nodes.iter().cloned().collect();
    if !all.is_empty() {
        let extra = lim.edges.saturating_sub(edges.len());
        for i in 0..rng.gen_range(0..=extra) {
            let e = Edge {
                src: all.choose(rng).expect("nonempty").clone(),
                tgt: all.choose(rng).expect("nonempty").clone(),
            };
            edges.insert(EdgeId(format!("{prefix}e{i}")), e);
        }
    }
    Graph::new(nodes, edges).expect("supergraph")
}

/// A total rule `L → R` (mono if asked).
pub fn random_total_rule(rng: &mut StdRng, mono: bool) -> TotalMorphism {
    let l = Arc::new(random_graph(rng, "l", 3, 3));
    random_extension(rng, &l, mono, "r", Limits::default())
}

/// A partially monic rule `L ⇀ R`.
pub fn random_partial_rule(rng: &mut StdRng) -> PartialMorphism {
    let l = Arc::new(random_graph(rng, "l", 3, 3));
    let d = Arc::new(random_subgraph(rng, &l));
    let r = random_extension(rng, &d, true, "r", Limits::default());
    PartialMorphism::new(l, r.target().clone(), d, r.node_map().clone(), r.edge_map().clone())
        .expect("partial rule")
}

/// A span `L ← K → R`; the left leg is mono if asked.
pub fn random_span(rng: &mut StdRng, mono_left: bool) -> Span {
    let k = Arc::new(random_graph(rng, "k", 2, 2));
    let l = random_extension(rng, &k, mono_left, "l", Limits { nodes: 3, edges: 3 });
    let r = random_extension(rng, &k, false, "r", Limits { nodes: 3, edges: 3 });
    Span::new(l, r).expect("span")
}

/// An inclusion rule `R ⊆ L`.
pub fn random_inclusion_rule(rng: &mut StdRng) -> (Arc<Graph>, Arc<Graph>) {
    let l = random_graph(rng, "l", 3, 3);
    let r = random_subgraph(rng, &l);
    (Arc::new(r), Arc::new(l))
}

/// A pair of composable matches `f1: L → L1`, `f2: L1 → L2`.
pub fn random_match_pair(rng: &mut StdRng, l: &Arc<Graph>, mono: bool) -> (TotalMorphism, TotalMorphism) {
    let f1 = random_extension(rng, l, mono, "g", Limits::default());
    let f2 = random_extension(rng, f1.target(), mono, "h", Limits::default());
    (f1, f2)
}

// ---------------------------------------------------------------------
// Termgraphs.

pub fn signature() -> Signature {
    [("f".to_string(), 2), ("a".to_string(), 0)].into_iter().collect()
}

fn random_term(rng: &mut StdRng, sig: &Signature, nodes: &[NodeId]) -> Option<Term> {
    let labels: Vec<(&String, &usize)> = sig.iter().collect();
    let (label, arity) = labels.choose(rng).expect("nonempty signature");
    if **arity > 0 && nodes.is_empty() {
        return None;
    }
    Some(Term {
        label: (*label).clone(),
        succ: (0..**arity).map(|_| nodes.choose(rng).expect("nonempty").clone()).collect(),
    })
}

/// A random termgraph with at most `max_nodes` nodes.
pub fn random_termgraph(rng: &mut StdRng, prefix: &str, max_nodes: usize) -> TermGraph {
    let sig = signature();
    let n = rng.gen_range(1..=max_nodes.max(1));
    let names: Vec<NodeId> = (0..n).map(|i| NodeId(format!("{prefix}{i}"))).collect();
    let nodes = names
        .iter()
        .map(|id| {
            let t = if rng.gen_bool(0.5) { random_term(rng, &sig, &names) } else { None };
            (id.clone(), t)
        })
        .collect();
    TermGraph::new(sig, nodes).expect("random termgraph")
}

/// A random mono termgraph morphism out of `src`: a copy of `src` where
/// unlabelled nodes may gain labels, plus extra nodes.
pub fn random_term_extension(rng: &mut StdRng, src: &Arc<TermGraph>, prefix: &str, max_nodes: usize) -> TermMorphism {
    let sig = src.signature().clone();
    let mut names: Vec<NodeId> = Vec::new();
    let mut map = NodeMap::new();
    for (i, x) in src.nodes().enumerate() {
        let id = NodeId(format!("{prefix}{i}"));
        map.insert(x.clone(), id.clone());
        names.push(id);
    }
    let extra = max_nodes.saturating_sub(names.len());
    for _ in 0..rng.gen_range(0..=extra) {
        names.push(NodeId(format!("{prefix}{}", names.len())));
    }
    let mut nodes: BTreeMap<NodeId, Option<Term>> = BTreeMap::new();
    for (x, id) in &map {
        let t = match src.term(x) {
            Some(t) => Some(Term {
                label: t.label.clone(),
                succ: t.succ.iter().map(|s| map[s].clone()).collect(),
            }),
            None if rng.gen_bool(0.5) => random_term(rng, &sig, &names),
            None => None,
        };
        nodes.insert(id.clone(), t);
    }
    for id in &names {
        if !nodes.contains_key(id) {
            let t = if rng.gen_bool(0.5) { random_term(rng, &sig, &names) } else { None };
            nodes.insert(id.clone(), t);
        }
    }
    let tgt = Arc::new(TermGraph::new(sig, nodes).expect("termgraph extension"));
    TermMorphism::new(src.clone(), tgt, map).expect("extension morphism")
}

/// A random well-defined HPO rule with `|L| ≤ 3`, `|R| ≤ 4`.
///
/// Variables go to distinct unlabelled nodes; each labelled node keeps its
/// label or has it dropped (its image is then fresh or merged with a kept
/// image); clones of nodes are added while room remains.
pub fn random_hpo_rule(rng: &mut StdRng) -> HpoRule {
    loop {
        if let Some(rule) = try_hpo_rule(rng) {
            return rule;
        }
    }
}

fn try_hpo_rule(rng: &mut StdRng) -> Option<HpoRule> {
    let sig = signature();
    let l = Arc::new(random_termgraph(rng, "l", 3));
    let mut tau = NodeMap::new();
    let mut kept = BTreeSet::new();
    let mut r_nodes: Vec<NodeId> = Vec::new();
    let fresh = |r_nodes: &mut Vec<NodeId>| {
        let id = NodeId(format!("r{}", r_nodes.len()));
        r_nodes.push(id.clone());
        id
    };
    for x in l.nodes() {
        let img = fresh(&mut r_nodes);
        tau.insert(x.clone(), img);
        if l.is_labeled(x) && rng.gen_bool(0.6) {
            kept.insert(x.clone());
        }
    }
    // Merge some dropped labelled nodes onto other non-variable images.
    let dropped: Vec<NodeId> = l.labeled_nodes().into_iter().filter(|x| !kept.contains(x)).collect();
    let labelled_images: Vec<NodeId> = l.labeled_nodes().iter().map(|x| tau[x].clone()).collect();
    for x in &dropped {
        if rng.gen_bool(0.2) {
            let target = labelled_images.choose(rng).expect("nonempty").clone();
            tau.insert(x.clone(), target);
        }
    }
    let used: BTreeSet<NodeId> = tau.values().cloned().collect();
    r_nodes.retain(|n| used.contains(n));

    let mut sigma = NodeMap::new();
    let mut clone_of: Vec<(NodeId, NodeId)> = Vec::new();
    for q in l.nodes() {
        if r_nodes.len() < 4 && rng.gen_bool(0.3) {
            let p = NodeId(format!("c{}", clone_of.len()));
            r_nodes.push(p.clone());
            clone_of.push((p.clone(), q.clone()));
            sigma.insert(p, q.clone());
        }
    }
    if r_nodes.len() < 4 && rng.gen_bool(0.3) {
        r_nodes.push(NodeId("rx".into()));
    }

    let mut terms: BTreeMap<NodeId, Option<Term>> = r_nodes.iter().map(|n| (n.clone(), None)).collect();
    let transport = |t: &Term| Term {
        label: t.label.clone(),
        succ: t.succ.iter().map(|s| tau[s].clone()).collect(),
    };
    for x in &kept {
        terms.insert(tau[x].clone(), Some(transport(l.term(x).expect("labelled"))));
    }
    let variable_images: BTreeSet<NodeId> = l.nodes().filter(|x| !l.is_labeled(x)).map(|x| tau[x].clone()).collect();
    for (p, q) in &clone_of {
        if let Some(t) = l.term(q) {
            if rng.gen_bool(0.5) {
                terms.insert(p.clone(), Some(transport(t)));
            }
        }
    }
    // Free structure on images of dropped nodes and the extra node.
    for n in &r_nodes {
        let is_dropped_image = dropped.iter().any(|x| tau[x] == *n) && !kept.iter().any(|x| tau[x] == *n);
        if (is_dropped_image || n.as_str() == "rx") && !variable_images.contains(n) && rng.gen_bool(0.5) {
            terms.insert(n.clone(), random_term(rng, &sig, &r_nodes));
        }
    }
    // σ on images of kept nodes and of variables.
    for x in l.nodes() {
        let img = &tau[x];
        let ok = kept.contains(x) || !l.is_labeled(x);
        if ok && rng.gen_bool(0.2) && !sigma.contains_key(img) {
            sigma.insert(img.clone(), x.clone());
        }
    }
    let r = Arc::new(TermGraph::new(sig, terms).ok()?);
    let tau = TermPartialMorphism::new(l.clone(), r.clone(), tau, kept).ok()?;
    let sigma = TermPartialMorphism::bare(r, l, sigma).ok()?;
    HpoRule::new(HeteroMorphism::new(tau, sigma).ok()?).ok()
}

/// Composable mono matches for an HPO rule.
pub fn random_term_match_pair(rng: &mut StdRng, l: &Arc<TermGraph>) -> (TermMorphism, TermMorphism) {
    let f1 = random_term_extension(rng, l, "g", 4);
    let f2 = random_term_extension(rng, f1.target(), "h", 4);
    (f1, f2)
}

pub type Triple<R, M> = (R, M, M);

/// A total rule with composable matches.
pub fn po_triple(rng: &mut StdRng) -> Triple<TotalMorphism, TotalMorphism> {
    let rule = random_total_rule(rng, false);
    let (f1, f2) = random_match_pair(rng, rule.source(), false);
    (rule, f1, f2)
}

pub fn spo_triple(rng: &mut StdRng) -> Triple<PartialMorphism, TotalMorphism> {
    let rule = random_partial_rule(rng);
    let (f1, f2) = random_match_pair(rng, rule.source(), false);
    (rule, f1, f2)
}

/// A rule `l: K → L` and matches out of `L`.
pub fn inverse_triple(rng: &mut StdRng, mono_rule: bool, mono_match: bool) -> Triple<TotalMorphism, TotalMorphism> {
    let k = Arc::new(random_graph(rng, "k", 3, 3));
    let rule = random_extension(rng, &k, mono_rule, "l", Limits { nodes: 3, edges: 4 });
    let (f1, f2) = random_match_pair(rng, rule.target(), mono_match);
    (rule, f1, f2)
}

/// Left-linear spans for DPO and the first SqPO regime, arbitrary spans
/// with monic matches for the second.
pub fn span_triple(rng: &mut StdRng, kind: crate::span::SpanKind) -> Triple<Span, TotalMorphism> {
    use crate::span::SpanKind;
    let span = random_span(rng, kind != SpanKind::Sqpo2);
    let (f1, f2) = random_match_pair(rng, span.lhs(), kind == SpanKind::Sqpo2);
    (span, f1, f2)
}

pub fn hpo_triple(rng: &mut StdRng) -> Triple<HpoRule, TermMorphism> {
    let rule = random_hpo_rule(rng);
    let (f1, f2) = random_term_match_pair(rng, rule.lhs());
    (rule, f1, f2)
}

/// `R ⊆ L ⊆ L1 ⊆ L2`.
pub fn gc_triple(rng: &mut StdRng) -> Triple<crate::morphism::Inclusion, crate::morphism::Inclusion> {
    use crate::morphism::Inclusion;
    let (rs, ls) = random_inclusion_rule(rng);
    let l1 = Arc::new(random_supergraph(rng, &ls, "g", Limits::default()));
    let l2 = Arc::new(random_supergraph(rng, &l1, "h", Limits::default()));
    (
        Inclusion::new(rs, ls.clone()).expect("a subgraph is included"),
        Inclusion::new(ls, l1.clone()).expect("a subgraph is included"),
        Inclusion::new(l1, l2).expect("a subgraph is included"),
    )
}
