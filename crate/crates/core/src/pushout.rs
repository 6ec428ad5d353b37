//! Pushouts of total graph morphisms and the pushout rewriting system.

use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::Graph;
use crate::homs::isos_fixing;
use crate::morphism::TotalMorphism;
use crate::ops::{disjoint_union, quotient_preferring};
use crate::system::{RewriteSquare, RewriteSystem, Step};

pub type TotalSquare = RewriteSquare<TotalMorphism, TotalMorphism, TotalMorphism>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pushout {
    pub object: Arc<Graph>,
    /// `L1 → R1`
    pub rho1: TotalMorphism,
    /// `R → R1`
    pub g: TotalMorphism,
}

pub(crate) fn same_graph(a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// The pushout of `rho: L → R` and `f: L → L1`, built as `(L1 ⊎ R)/≈`.
/// Items of `L1` keep their ids; the class of a glued item is named after
/// its least `L1` member.
pub fn pushout_total(rho: &TotalMorphism, f: &TotalMorphism) -> Result<Pushout> {
    if !same_graph(rho.source(), f.source()) {
        return Err(RewriteError::EndpointMismatch("pushout legs have different sources".into()));
    }
    let (u, inl, inr) = disjoint_union(f.target(), rho.target());
    let l = rho.source();
    let node_pairs: Vec<_> = l
        .nodes()
        .iter()
        .map(|x| (inl.node(f.node(x)).clone(), inr.node(rho.node(x)).clone()))
        .collect();
    let edge_pairs: Vec<_> = l
        .edges()
        .keys()
        .map(|x| (inl.edge(f.edge(x)).clone(), inr.edge(rho.edge(x)).clone()))
        .collect();
    let prefer_nodes = inl.image_nodes();
    let prefer_edges = inl.image_edges();
    let (object, proj) = quotient_preferring(&u, &node_pairs, &edge_pairs, &prefer_nodes, &prefer_edges)?;
    Ok(Pushout {
        object,
        rho1: inl.then(&proj)?,
        g: inr.then(&proj)?,
    })
}

/// Isomorphisms `h` between the bottom right-hand sides of two squares
/// over direct total rules, with `h∘g_a = g_b` and `h∘ρ1_a = ρ1_b∘iso`.
pub(crate) fn direct_isos(a: &TotalSquare, b: &TotalSquare, iso: &TotalMorphism) -> Vec<TotalMorphism> {
    let r = a.right.source();
    let l1 = a.bottom.source();
    let node_pairs = r
        .nodes()
        .iter()
        .map(|x| (a.right.node(x).clone(), b.right.node(x).clone()))
        .chain(
            l1.nodes()
                .iter()
                .map(|y| (a.bottom.node(y).clone(), b.bottom.node(iso.node(y)).clone())),
        );
    let edge_pairs = r
        .edges()
        .keys()
        .map(|x| (a.right.edge(x).clone(), b.right.edge(x).clone()))
        .chain(
            l1.edges()
                .keys()
                .map(|y| (a.bottom.edge(y).clone(), b.bottom.edge(iso.edge(y)).clone())),
        );
    isos_fixing(a.right.target(), b.right.target(), node_pairs, edge_pairs)
}

/// Isomorphisms `h` between the bottom right-hand sides of two squares
/// over inverse total rules `l: K → L`, with `h∘g_a = g_b` and
/// `l1_b∘h = iso∘l1_a`.
pub(crate) fn inverse_isos(a: &TotalSquare, b: &TotalSquare, iso: &TotalMorphism) -> Vec<TotalMorphism> {
    let k = a.right.source();
    let mut node_pairs: Vec<_> = k
        .nodes()
        .iter()
        .map(|x| (a.right.node(x).clone(), b.right.node(x).clone()))
        .collect();
    let mut edge_pairs: Vec<_> = k
        .edges()
        .keys()
        .map(|x| (a.right.edge(x).clone(), b.right.edge(x).clone()))
        .collect();
    if let Some(inv) = b.bottom.is_mono().then(|| invert(&b.bottom)) {
        let k1 = a.bottom.source();
        for n in k1.nodes() {
            match inv.0.get(iso.node(a.bottom.node(n))) {
                Some(m) => node_pairs.push((n.clone(), m.clone())),
                None => return Vec::new(),
            }
        }
        for e in k1.edges().keys() {
            match inv.1.get(iso.edge(a.bottom.edge(e))) {
                Some(m) => edge_pairs.push((e.clone(), m.clone())),
                None => return Vec::new(),
            }
        }
    }
    let lhs = match a.bottom.then(iso) {
        Ok(x) => x,
        Err(_) => return Vec::new(),
    };
    isos_fixing(a.right.target(), b.right.target(), node_pairs, edge_pairs)
        .into_iter()
        .filter(|h| h.then(&b.bottom).map_or(false, |x| x == lhs))
        .collect()
}

fn invert(f: &TotalMorphism) -> (crate::morphism::NodeMap, crate::morphism::EdgeMap) {
    (
        f.node_map().iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        f.edge_map().iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
    )
}

/// `g∘ρ = ρ1∘f` for a square over a direct rule.
pub(crate) fn direct_commutes(sq: &TotalSquare) -> bool {
    match (sq.top.then(&sq.right), sq.left.then(&sq.bottom)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

/// `l1∘g = f∘l` for a square over an inverse rule.
pub(crate) fn inverse_commutes(sq: &TotalSquare) -> bool {
    match (sq.right.then(&sq.bottom), sq.top.then(&sq.left)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

pub(crate) fn check_source(rule_side: &Arc<Graph>, f: &TotalMorphism) -> Result<()> {
    if !same_graph(rule_side, f.source()) {
        return Err(RewriteError::EndpointMismatch(format!(
            "match source {} is not the rule's left-hand side {}",
            f.source(),
            rule_side
        )));
    }
    Ok(())
}

/// Pushout rewriting over total graph morphisms: every match is in the
/// domain.
#[derive(Debug, Clone, Copy, Default)]
pub struct PushoutSystem;

impl RewriteSystem for PushoutSystem {
    type LObject = Arc<Graph>;
    type RObject = Arc<Graph>;
    type Rule = TotalMorphism;
    type Match = TotalMorphism;
    type RMatch = TotalMorphism;
    type Square = TotalSquare;

    fn name(&self) -> String {
        "po".into()
    }

    fn lhs(&self, rule: &TotalMorphism) -> Arc<Graph> {
        rule.source().clone()
    }

    fn rhs(&self, rule: &TotalMorphism) -> Arc<Graph> {
        rule.target().clone()
    }

    fn check_rule(&self, _rule: &TotalMorphism) -> Result<()> {
        Ok(())
    }

    fn check_match(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<()> {
        check_source(rule.source(), f)
    }

    fn apply(&self, rule: &TotalMorphism, f: &TotalMorphism) -> Result<Step<TotalSquare>> {
        let po = pushout_total(rule, f)?;
        Ok(Step::Defined(RewriteSquare {
            top: rule.clone(),
            bottom: po.rho1,
            left: f.clone(),
            right: po.g,
        }))
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
        TotalMorphism::identity(rule.source().clone())
    }

    fn compose_matches(&self, f1: &TotalMorphism, f2: &TotalMorphism) -> Result<TotalMorphism> {
        f1.then(f2)
    }

    fn identity_square(&self, rule: &TotalMorphism) -> TotalSquare {
        RewriteSquare {
            top: rule.clone(),
            bottom: rule.clone(),
            left: TotalMorphism::identity(rule.source().clone()),
            right: TotalMorphism::identity(rule.target().clone()),
        }
    }

    fn paste(&self, upper: &TotalSquare, lower: &TotalSquare) -> Result<TotalSquare> {
        upper.paste(lower)
    }

    fn square_commutes(&self, sq: &TotalSquare) -> bool {
        direct_commutes(sq)
    }

    fn bottom_lhs_identity(&self, sq: &TotalSquare) -> TotalMorphism {
        TotalMorphism::identity(sq.bottom.source().clone())
    }

    fn square_isos(&self, a: &TotalSquare, b: &TotalSquare, iso: &TotalMorphism) -> Vec<TotalMorphism> {
        direct_isos(a, b, iso)
    }
}

/// The system whose rules are objects (identity arrows) and whose steps
/// are identity-shaped squares `(f, f)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentitySystem;

pub type IdentitySquare = RewriteSquare<Arc<Graph>, TotalMorphism, TotalMorphism>;

impl RewriteSystem for IdentitySystem {
    type LObject = Arc<Graph>;
    type RObject = Arc<Graph>;
    type Rule = Arc<Graph>;
    type Match = TotalMorphism;
    type RMatch = TotalMorphism;
    type Square = IdentitySquare;

    fn name(&self) -> String {
        "id".into()
    }

    fn lhs(&self, rule: &Arc<Graph>) -> Arc<Graph> {
        rule.clone()
    }

    fn rhs(&self, rule: &Arc<Graph>) -> Arc<Graph> {
        rule.clone()
    }

    fn check_rule(&self, _rule: &Arc<Graph>) -> Result<()> {
        Ok(())
    }

    fn check_match(&self, rule: &Arc<Graph>, f: &TotalMorphism) -> Result<()> {
        check_source(rule, f)
    }

    fn apply(&self, rule: &Arc<Graph>, f: &TotalMorphism) -> Result<Step<IdentitySquare>> {
        Ok(Step::Defined(RewriteSquare {
            top: rule.clone(),
            bottom: f.target().clone(),
            left: f.clone(),
            right: f.clone(),
        }))
    }

    fn top(&self, sq: &IdentitySquare) -> Arc<Graph> {
        sq.top.clone()
    }

    fn bottom(&self, sq: &IdentitySquare) -> Arc<Graph> {
        sq.bottom.clone()
    }

    fn left(&self, sq: &IdentitySquare) -> TotalMorphism {
        sq.left.clone()
    }

    fn right(&self, sq: &IdentitySquare) -> TotalMorphism {
        sq.right.clone()
    }

    fn rule_eq(&self, a: &Arc<Graph>, b: &Arc<Graph>) -> bool {
        a == b
    }

    fn match_eq(&self, a: &TotalMorphism, b: &TotalMorphism) -> bool {
        a == b
    }

    fn identity_match(&self, rule: &Arc<Graph>) -> TotalMorphism {
        TotalMorphism::identity(rule.clone())
    }

    fn compose_matches(&self, f1: &TotalMorphism, f2: &TotalMorphism) -> Result<TotalMorphism> {
        f1.then(f2)
    }

    fn identity_square(&self, rule: &Arc<Graph>) -> IdentitySquare {
        let id = TotalMorphism::identity(rule.clone());
        RewriteSquare {
            top: rule.clone(),
            bottom: rule.clone(),
            left: id.clone(),
            right: id,
        }
    }

    fn paste(&self, upper: &IdentitySquare, lower: &IdentitySquare) -> Result<IdentitySquare> {
        upper.paste(lower)
    }

    fn square_commutes(&self, sq: &IdentitySquare) -> bool {
        sq.left == sq.right
    }

    fn bottom_lhs_identity(&self, sq: &IdentitySquare) -> TotalMorphism {
        TotalMorphism::identity(sq.bottom.clone())
    }

    fn square_isos(&self, a: &IdentitySquare, b: &IdentitySquare, iso: &TotalMorphism) -> Vec<TotalMorphism> {
        match a.right.then(iso) {
            Ok(x) if x == b.right => vec![iso.clone()],
            _ => Vec::new(),
        }
    }
}
