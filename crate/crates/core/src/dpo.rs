//! Pushout complements for monic rules `l: K → L` under the gluing
//! condition, and the pushout-complement rewriting system.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::morphism::{EdgeMap, NodeMap, TotalMorphism};
use crate::pushout::{check_source, same_graph, TotalSquare};
use crate::system::{RewriteSquare, RewriteSystem, Step};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Item {
    Node(NodeId),
    Edge(EdgeId),
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Node(n) => write!(f, "node {n}"),
            Item::Edge(e) => write!(f, "edge {e}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GluingReport {
    /// Edges of `L1` outside `f(L)` incident to a node of `f(L − l(K))`.
    pub dangling: Vec<EdgeId>,
    /// Distinct items of `L` identified by `f`, not both in `l(K)`.
    pub identification: Vec<(Item, Item)>,
}

impl GluingReport {
    pub fn dangling_ok(&self) -> bool {
        self.dangling.is_empty()
    }

    pub fn identification_ok(&self) -> bool {
        self.identification.is_empty()
    }

    pub fn ok(&self) -> bool {
        self.dangling_ok() && self.identification_ok()
    }
}

impl fmt::Display for GluingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "gluing condition holds");
        }
        let mut parts = Vec::new();
        if !self.dangling.is_empty() {
            let es: Vec<&str> = self.dangling.iter().map(EdgeId::as_str).collect();
            parts.push(format!("dangling edges {}", es.join(", ")));
        }
        for (x, y) in &self.identification {
            parts.push(format!("{x} and {y} identified"));
        }
        write!(f, "{}", parts.join("; "))
    }
}

pub(crate) fn require_mono(l: &TotalMorphism) -> Result<()> {
    if !l.is_mono() {
        return Err(RewriteError::InvalidRule(format!("rule {l} is not a mono")));
    }
    Ok(())
}

fn check_square_inputs(l: &TotalMorphism, f: &TotalMorphism) -> Result<()> {
    if !same_graph(l.target(), f.source()) {
        return Err(RewriteError::EndpointMismatch("match source is not the rule's left-hand side".into()));
    }
    Ok(())
}

pub fn gluing_check(l: &TotalMorphism, f: &TotalMorphism) -> Result<GluingReport> {
    require_mono(l)?;
    check_square_inputs(l, f)?;
    let lg = l.target();
    let kept_nodes = l.image_nodes();
    let kept_edges = l.image_edges();
    let deleted: BTreeSet<&NodeId> = lg
        .nodes()
        .iter()
        .filter(|x| !kept_nodes.contains(*x))
        .map(|x| f.node(x))
        .collect();
    let matched = f.image_edges();
    let dangling = f
        .target()
        .edges()
        .iter()
        .filter(|(id, e)| !matched.contains(*id) && (deleted.contains(&e.src) || deleted.contains(&e.tgt)))
        .map(|(id, _)| id.clone())
        .collect();

    let mut identification = Vec::new();
    let nodes: Vec<&NodeId> = lg.nodes().iter().collect();
    for (i, x) in nodes.iter().enumerate() {
        for y in &nodes[i + 1..] {
            if f.node(x) == f.node(y) && !(kept_nodes.contains(*x) && kept_nodes.contains(*y)) {
                identification.push((Item::Node((*x).clone()), Item::Node((*y).clone())));
            }
        }
    }
    let edges: Vec<&EdgeId> = lg.edges().keys().collect();
    for (i, x) in edges.iter().enumerate() {
        for y in &edges[i + 1..] {
            if f.edge(x) == f.edge(y) && !(kept_edges.contains(*x) && kept_edges.contains(*y)) {
                identification.push((Item::Edge((*x).clone()), Item::Edge((*y).clone())));
            }
        }
    }
    Ok(GluingReport {
        dangling,
        identification,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutComplement {
    pub object: Arc<Graph>,
    /// Inclusion `K1 ⊆ L1`.
    pub l1: TotalMorphism,
    /// `K → K1`, `x ↦ f(l(x))`.
    pub g: TotalMorphism,
}

/// `K1 = L1 − f(L − l(K))`, or `None` when the gluing condition fails.
pub fn pushout_complement(l: &TotalMorphism, f: &TotalMorphism) -> Result<Option<PushoutComplement>> {
    if !gluing_check(l, f)?.ok() {
        return Ok(None);
    }
    let lg = l.target();
    let l1 = f.target();
    let kept_nodes = l.image_nodes();
    let kept_edges = l.image_edges();
    let del_nodes: BTreeSet<NodeId> = lg
        .nodes()
        .iter()
        .filter(|x| !kept_nodes.contains(*x))
        .map(|x| f.node(x).clone())
        .collect();
    let del_edges: BTreeSet<EdgeId> = lg
        .edges()
        .keys()
        .filter(|x| !kept_edges.contains(*x))
        .map(|x| f.edge(x).clone())
        .collect();
    let nodes: BTreeSet<NodeId> = l1.nodes().difference(&del_nodes).cloned().collect();
    let edges: BTreeSet<EdgeId> = l1.edges().keys().filter(|e| !del_edges.contains(*e)).cloned().collect();
    let object = Arc::new(l1.subgraph(&nodes, &edges)?);
    let k = l.source();
    let g_nodes: NodeMap = k.nodes().iter().map(|x| (x.clone(), f.node(l.node(x)).clone())).collect();
    let g_edges: EdgeMap = k.edges().keys().map(|x| (x.clone(), f.edge(l.edge(x)).clone())).collect();
    let g = TotalMorphism::new(k.clone(), object.clone(), g_nodes, g_edges)?;
    let incl = TotalMorphism::inclusion(object.clone(), l1.clone())?;
    Ok(Some(PushoutComplement { object, l1: incl, g }))
}

/// Square-building shared by the inverse-rule systems.
pub(crate) fn inverse_identity_square(rule: &TotalMorphism) -> TotalSquare {
    RewriteSquare {
        top: rule.clone(),
        bottom: rule.clone(),
        left: TotalMorphism::identity(rule.target().clone()),
        right: TotalMorphism::identity(rule.source().clone()),
    }
}

/// Rewriting by pushout complement: rules are monos `l: K → L` (left-hand
/// side `L`, right-hand side `K`); the domain is the matches satisfying
/// the gluing condition.
#[derive(Debug, Clone, Copy, Default)]
pub struct PocSystem;

macro_rules! inverse_total_system_common {
    () => {
        type LObject = Arc<Graph>;
        type RObject = Arc<Graph>;
        type Rule = TotalMorphism;
        type Match = TotalMorphism;
        type RMatch = TotalMorphism;
        type Square = TotalSquare;

        fn lhs(&self, rule: &TotalMorphism) -> Arc<Graph> {
            rule.target().clone()
        }

        fn rhs(&self, rule: &TotalMorphism) -> Arc<Graph> {
            rule.source().clone()
        }

        fn top(&self, sq: &TotalSquare) -> TotalMorphism {
            sq.top.clone()
        }

        fn bottom(&self, sq: &TotalSquare) -> TotalMorphism {
            sq.bottom.clone()
        }

        fn left(&self, sq: &TotalSquare) -> TotalMorphism {
            sq.left.clone()
        }

        fn right(&self, sq: &TotalSquare) -> TotalMorphism {
            sq.right.clone()
        }

        fn rule_eq(&self, a: &TotalMorphism, b: &TotalMorphism) -> bool {
            a == b
        }

        fn match_eq(&self, a: &TotalMorphism, b: &TotalMorphism) -> bool {
            a == b
        }

        fn identity_match(&self, rule: &TotalMorphism) -> TotalMorphism {
            TotalMorphism::identity(rule.target().clone())
        }

        fn compose_matches(&self, f1: &TotalMorphism, f2: &TotalMorphism) -> Result<TotalMorphism> {
            f1.then(f2)
        }

        fn identity_square(&self, rule: &TotalMorphism) -> TotalSquare {
            $crate::dpo::inverse_identity_square(rule)
        }

        fn paste(&self, upper: &TotalSquare, lower: &TotalSquare) -> Result<TotalSquare> {
            upper.paste(lower)
        }

        fn square_commutes(&self, sq: &TotalSquare) -> bool {
            $crate::pushout::inverse_commutes(sq)
        }

        fn bottom_lhs_identity(&self, sq: &TotalSquare) -> TotalMorphism {
            TotalMorphism::identity(sq.bottom.target().clone())
        }

        fn square_isos(&self, a: &TotalSquare, b: &TotalSquare, iso: &TotalMorphism) -> Vec<TotalMorphism> {
            $crate::pushout::inverse_isos(a, b, iso)
        }
    };
}
pub(crate) use inverse_total_system_common;

impl RewriteSystem for PocSystem {
    inverse_total_system_common!();

    fn name(&self) -> String {
        "poc".into()
    }

    fn check_rule(&self, rule: &TotalMorphism) -> Result<()> {
        require_mono(rule)
    }

    fn check_match(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<()> {
        check_source(rule.target(), f)
    }

    fn apply(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<Step<TotalSquare>> {
        let report = gluing_check(rule, f)?;
        if !report.ok() {
            return Ok(Step::Undefined(report.to_string()));
        }
        let pc = pushout_complement(rule, f)?.expect("gluing condition holds");
        Ok(Step::Defined(RewriteSquare {
            top: rule.clone(),
            bottom: pc.l1,
            left: f.clone(),
            right: pc.g,
        }))
    }
}
