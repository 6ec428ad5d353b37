//! Single-pushout rewriting: pushouts in the category of graphs with
//! partial morphisms, for partially monic rules and conflict-free matches.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{EdgeId, Graph, NodeId};
use crate::homs::isos_fixing;
use crate::morphism::{PartialMorphism, TotalMorphism};
use crate::pushout::{check_source, pushout_total, same_graph};
use crate::system::{RewriteSquare, RewriteSystem, Step};

pub type SpoSquare = RewriteSquare<PartialMorphism, TotalMorphism, TotalMorphism>;

/// No item of `dom(r)` is identified by `f` with an item outside it.
pub fn conflict_free_spo(r: &PartialMorphism, f: &TotalMorphism) -> Result<bool> {
    if !same_graph(r.source(), f.source()) {
        return Err(RewriteError::EndpointMismatch("rule and match have different sources".into()));
    }
    let dom = r.domain();
    let l = r.source();
    let in_nodes: BTreeSet<&NodeId> = dom.nodes().iter().map(|x| f.node(x)).collect();
    let out_nodes = l.nodes().iter().filter(|y| !dom.has_node(y)).map(|y| f.node(y));
    let in_edges: BTreeSet<&EdgeId> = dom.edges().keys().map(|x| f.edge(x)).collect();
    let mut out_edges = l.edges().keys().filter(|y| !dom.has_edge(y)).map(|y| f.edge(y));
    Ok(!out_nodes.clone().any(|n| in_nodes.contains(n)) && !out_edges.any(|e| in_edges.contains(e)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpoResult {
    pub object: Arc<Graph>,
    /// `L1 ⇀ R1`, partially monic.
    pub r1: PartialMorphism,
    /// `R → R1`, total.
    pub g: TotalMorphism,
}

/// The SPO pushout of `r` and `f`, or `None` if `f` is not conflict-free.
///
/// Deletes `f(L − dom r)` and the edges left dangling, then glues the rest
/// with `R` along `r` and `f` restricted to `dom r`.
pub fn spo_pushout(r: &PartialMorphism, f: &TotalMorphism) -> Result<Option<SpoResult>> {
    if !r.is_partial_mono() {
        return Err(RewriteError::InvalidRule("SPO rule is not a partial mono".into()));
    }
    if !conflict_free_spo(r, f)? {
        return Ok(None);
    }
    let l = r.source();
    let dom = r.domain();
    let l1 = f.target();
    let del_nodes: BTreeSet<NodeId> = l
        .nodes()
        .iter()
        .filter(|x| !dom.has_node(x))
        .map(|x| f.node(x).clone())
        .collect();
    let del_edges: BTreeSet<EdgeId> = l
        .edges()
        .keys()
        .filter(|x| !dom.has_edge(x))
        .map(|x| f.edge(x).clone())
        .collect();
    let keep_nodes: BTreeSet<NodeId> = l1.nodes().difference(&del_nodes).cloned().collect();
    let keep_edges: BTreeSet<EdgeId> = l1
        .edges()
        .iter()
        .filter(|(id, e)| !del_edges.contains(*id) && keep_nodes.contains(&e.src) && keep_nodes.contains(&e.tgt))
        .map(|(id, _)| id.clone())
        .collect();
    let d = Arc::new(l1.subgraph(&keep_nodes, &keep_edges)?);
    let f_dom = TotalMorphism::new(
        dom.clone(),
        d.clone(),
        dom.nodes().iter().map(|x| (x.clone(), f.node(x).clone())).collect(),
        dom.edges().keys().map(|x| (x.clone(), f.edge(x).clone())).collect(),
    )?;
    let po = pushout_total(&r.carrier(), &f_dom)?;
    let r1 = PartialMorphism::new(
        l1.clone(),
        po.object.clone(),
        d,
        po.rho1.node_map().clone(),
        po.rho1.edge_map().clone(),
    )?;
    Ok(Some(SpoResult {
        object: po.object,
        r1,
        g: po.g,
    }))
}

/// The SPO rewrite step as a square, or `Undefined` for a conflicting match.
pub fn spo_step(r: &PartialMorphism, f: &TotalMorphism) -> Result<Step<SpoSquare>> {
    Ok(match spo_pushout(r, f)? {
        None => Step::Undefined("match is not conflict-free".into()),
        Some(res) => Step::Defined(RewriteSquare {
            top: r.clone(),
            bottom: res.r1,
            left: f.clone(),
            right: res.g,
        }),
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SpoSystem;

impl RewriteSystem for SpoSystem {
    type LObject = Arc<Graph>;
    type RObject = Arc<Graph>;
    type Rule = PartialMorphism;
    type Match = TotalMorphism;
    type RMatch = TotalMorphism;
    type Square = SpoSquare;

    fn name(&self) -> String {
        "spo".into()
    }

    fn lhs(&self, rule: &PartialMorphism) -> Arc<Graph> {
        rule.source().clone()
    }

    fn rhs(&self, rule: &PartialMorphism) -> Arc<Graph> {
        rule.target().clone()
    }

    fn check_rule(&self, rule: &PartialMorphism) -> Result<()> {
        if !rule.is_partial_mono() {
            return Err(RewriteError::InvalidRule("SPO rule is not a partial mono".into()));
        }
        Ok(())
    }

    fn check_match(&self, rule: &PartialMorphism, f: &TotalMorphism) -> Result<()> {
        check_source(rule.source(), f)
    }

    fn apply(&self, rule: &PartialMorphism, f: &TotalMorphism) -> Result<Step<SpoSquare>> {
        spo_step(rule, f)
    }

    fn top(&self, sq: &SpoSquare) -> PartialMorphism {
        sq.top.clone()
    }

    fn bottom(&self, sq: &SpoSquare) -> PartialMorphism {
        sq.bottom.clone()
    }

    fn left(&self, sq: &SpoSquare) -> TotalMorphism {
        sq.left.clone()
    }

    fn right(&self, sq: &SpoSquare) -> TotalMorphism {
        sq.right.clone()
    }

    fn rule_eq(&self, a: &PartialMorphism, b: &PartialMorphism) -> bool {
        a == b
    }

    fn match_eq(&self, a: &TotalMorphism, b: &TotalMorphism) -> bool {
        a == b
    }

    fn identity_match(&self, rule: &PartialMorphism) -> TotalMorphism {
        TotalMorphism::identity(rule.source().clone())
    }

    fn compose_matches(&self, f1: &TotalMorphism, f2: &TotalMorphism) -> Result<TotalMorphism> {
        f1.then(f2)
    }

    fn identity_square(&self, rule: &PartialMorphism) -> SpoSquare {
        RewriteSquare {
            top: rule.clone(),
            bottom: rule.clone(),
            left: TotalMorphism::identity(rule.source().clone()),
            right: TotalMorphism::identity(rule.target().clone()),
        }
    }

    fn paste(&self, upper: &SpoSquare, lower: &SpoSquare) -> Result<SpoSquare> {
        Ok(RewriteSquare {
            top: upper.top.clone(),
            bottom: lower.bottom.clone(),
            left: upper.left.then(&lower.left)?,
            right: upper.right.then(&lower.right)?,
        })
    }

    fn square_commutes(&self, sq: &SpoSquare) -> bool {
        let a = sq.top.then(&PartialMorphism::from_total(&sq.right));
        let b = PartialMorphism::from_total(&sq.left).then(&sq.bottom);
        matches!((a, b), (Ok(a), Ok(b)) if a == b)
    }

    fn bottom_lhs_identity(&self, sq: &SpoSquare) -> TotalMorphism {
        TotalMorphism::identity(sq.bottom.source().clone())
    }

    fn square_isos(&self, a: &SpoSquare, b: &SpoSquare, iso: &TotalMorphism) -> Vec<TotalMorphism> {
        let da = a.bottom.domain();
        let db = b.bottom.domain();
        // iso must carry dom(r1_a) onto dom(r1_b)
        let carried = da.node_count() == db.node_count()
            && da.edge_count() == db.edge_count()
            && da.nodes().iter().all(|y| db.has_node(iso.node(y)))
            && da.edges().keys().all(|y| db.has_edge(iso.edge(y)));
        if !carried {
            return Vec::new();
        }
        let r = a.right.source();
        let node_pairs = r
            .nodes()
            .iter()
            .map(|x| (a.right.node(x).clone(), b.right.node(x).clone()))
            .chain(da.nodes().iter().map(|y| {
                (
                    a.bottom.node(y).expect("in domain").clone(),
                    b.bottom.node(iso.node(y)).expect("in domain").clone(),
                )
            }));
        let edge_pairs = r
            .edges()
            .keys()
            .map(|x| (a.right.edge(x).clone(), b.right.edge(x).clone()))
            .chain(da.edges().keys().map(|y| {
                (
                    a.bottom.edge(y).expect("in domain").clone(),
                    b.bottom.edge(iso.edge(y)).expect("in domain").clone(),
                )
            }));
        isos_fixing(a.right.target(), b.right.target(), node_pairs, edge_pairs)
    }
}
