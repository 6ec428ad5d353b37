//! Termgraph rewriting by heterogeneous pushouts.
//!
//! A rule is a pair `(τ, σ)` of partial termgraph morphisms `τ: L ⇀ R`,
//! `σ: R ⇀ L`. `τ` is defined on every node; a labelled node of `L` whose
//! label `τ` does not keep has its structure rewritten. `σ` designates
//! clones: `σ(p) = q` makes `p` a copy of `q`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{FreshNames, NodeId};
use crate::homs::{consistent_map, HomKind};
use crate::morphism::NodeMap;
use crate::termgraph::{for_each_term_hom, Term, TermGraph, TermMorphism, TermPartialMorphism};
use crate::system::{RewriteSquare, RewriteSystem, Step};

/// A morphism of the heterogeneous category: a forward leg `τ: L ⇀ R` and
/// a backward leg `σ: R ⇀ L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeteroMorphism {
    pub tau: TermPartialMorphism,
    pub sigma: TermPartialMorphism,
}

fn same_tg(a: &Arc<TermGraph>, b: &Arc<TermGraph>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl HeteroMorphism {
    pub fn new(tau: TermPartialMorphism, sigma: TermPartialMorphism) -> Result<Self> {
        if !same_tg(tau.source(), sigma.target()) || !same_tg(tau.target(), sigma.source()) {
            return Err(RewriteError::EndpointMismatch("legs of a heterogeneous morphism are not opposite".into()));
        }
        Ok(HeteroMorphism { tau, sigma })
    }

    /// A total morphism `f` seen as `(f, ω)`.
    pub fn embed(f: &TermMorphism) -> Self {
        HeteroMorphism {
            tau: TermPartialMorphism::from_total(f),
            sigma: TermPartialMorphism::nowhere(f.target().clone(), f.source().clone()),
        }
    }

    pub fn source(&self) -> &Arc<TermGraph> {
        self.tau.source()
    }

    pub fn target(&self) -> &Arc<TermGraph> {
        self.tau.target()
    }
}

/// `v ∘ u`, leg-wise: `(τ_v ∘ τ_u, σ_u ∘ σ_v)`.
pub fn hetero_compose(u: &HeteroMorphism, v: &HeteroMorphism) -> Result<HeteroMorphism> {
    if !same_tg(u.target(), v.source()) {
        return Err(RewriteError::EndpointMismatch("heterogeneous morphisms do not chain".into()));
    }
    Ok(HeteroMorphism {
        tau: u.tau.then(&v.tau)?,
        sigma: v.sigma.then(&u.sigma)?,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleReport {
    /// Violations of the rule conditions proper.
    pub violations: Vec<String>,
    /// Violations of the extra conditions under which the step is
    /// well defined: variables go injectively to unlabelled nodes, and a
    /// clone of a variable is not the image of another variable.
    pub ill_defined: Vec<String>,
}

impl RuleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_well_defined(&self) -> bool {
        self.violations.is_empty() && self.ill_defined.is_empty()
    }
}

impl fmt::Display for RuleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<&String> = self.violations.iter().chain(&self.ill_defined).collect();
        if all.is_empty() {
            return write!(f, "valid rule");
        }
        let parts: Vec<&str> = all.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub fn validate_hpo_rule(rho: &HeteroMorphism) -> RuleReport {
    let mut rep = RuleReport::default();
    let (l, r) = (rho.source(), rho.target());
    let (tau, sigma) = (&rho.tau, &rho.sigma);
    for x in l.nodes() {
        if tau.node(x).is_none() {
            rep.violations.push(format!("τ undefined on node {x}"));
        }
    }
    for (p, q) in sigma.map() {
        let Some(tp) = r.term(p) else { continue };
        match l.term(q) {
            Some(tq) if tq.label == tp.label => {
                let images: Option<Vec<&NodeId>> = tq.succ.iter().map(|s| tau.node(s)).collect();
                if images.map_or(true, |im| im.into_iter().ne(tp.succ.iter())) {
                    rep.violations.push(format!(
                        "successors of {p} are not the τ-images of the successors of σ({p}) = {q}"
                    ));
                }
            }
            _ => rep.violations.push(format!("{p} is labelled and σ({p}) = {q} does not share its label")),
        }
    }
    if !rep.violations.is_empty() {
        return rep;
    }

    let mut var_images: BTreeMap<&NodeId, &NodeId> = BTreeMap::new();
    for x in l.nodes().filter(|x| !l.is_labeled(x)) {
        let img = tau.node(x).expect("τ is total");
        if r.is_labeled(img) {
            rep.ill_defined.push(format!("variable {x} is sent to labelled node {img}"));
        }
        if let Some(other) = var_images.insert(img, x) {
            rep.ill_defined.push(format!("variables {other} and {x} are both sent to {img}"));
        }
    }
    for (p, q) in sigma.map() {
        if r.is_labeled(p) {
            continue;
        }
        if let Some(x) = var_images.get(p) {
            if *x != q {
                rep.ill_defined.push(format!("clone {p} of {q} is also the image of variable {x}"));
            }
        }
    }
    rep
}

/// A heterogeneous morphism satisfying the rule conditions and the
/// well-definedness conditions of [`RuleReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpoRule(HeteroMorphism);

impl HpoRule {
    pub fn new(rho: HeteroMorphism) -> Result<Self> {
        let rep = validate_hpo_rule(&rho);
        if !rep.is_well_defined() {
            return Err(RewriteError::InvalidRule(rep.to_string()));
        }
        Ok(HpoRule(rho))
    }

    pub fn morphism(&self) -> &HeteroMorphism {
        &self.0
    }

    pub fn tau(&self) -> &TermPartialMorphism {
        &self.0.tau
    }

    pub fn sigma(&self) -> &TermPartialMorphism {
        &self.0.sigma
    }

    pub fn lhs(&self) -> &Arc<TermGraph> {
        self.0.source()
    }

    pub fn rhs(&self) -> &Arc<TermGraph> {
        self.0.target()
    }

    /// `(id, ω)`.
    pub fn identity(g: Arc<TermGraph>) -> Self {
        HpoRule(HeteroMorphism::embed(&TermMorphism::identity(g)))
    }
}

/// Labelled nodes of `L1` whose structure a derived rule keeps: all but
/// the images of labelled nodes whose label `τ` drops.
pub fn canonical_structured(rule: &HpoRule, f: &TermMorphism) -> BTreeSet<NodeId> {
    let l = rule.lhs();
    let dropped: BTreeSet<&NodeId> = l
        .labeled_nodes()
        .iter()
        .filter(|x| !rule.tau().structured().contains(*x))
        .map(|x| f.node(x))
        .collect();
    f.target()
        .labeled_nodes()
        .into_iter()
        .filter(|n| !dropped.contains(n))
        .collect()
}

fn check_match(rule: &HpoRule, f: &TermMorphism) -> Result<()> {
    if !same_tg(rule.lhs(), f.source()) {
        return Err(RewriteError::EndpointMismatch("match source is not the rule's left-hand side".into()));
    }
    if !f.is_mono() {
        return Err(RewriteError::InadmissibleMatch(format!("match {f} is not a mono")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpoResult {
    pub object: Arc<TermGraph>,
    pub rho1: HpoRule,
    pub g: TermMorphism,
}

/// The heterogeneous pushout of `rule` and the mono `f: L → L1`.
///
/// Nodes are those of `R` plus the context `L1 − f(L)`, each `f(x)` being
/// glued onto `τ(x)`. A node of `R` takes its label from `R`, else from
/// the matched image of a variable sent to it, else (for a clone of a
/// variable) from the matched image of that variable. Context nodes keep
/// their labels, with successors transported.
pub fn hpo_pushout(rule: &HpoRule, f: &TermMorphism) -> Result<HpoResult> {
    check_match(rule, f)?;
    let (l, r, l1) = (rule.lhs(), rule.rhs(), f.target());
    let (tau, sigma) = (rule.tau(), rule.sigma());

    let mut names = FreshNames::new();
    for p in r.nodes() {
        names.reserve(p.as_str());
    }
    let matched: BTreeSet<&NodeId> = l.nodes().map(|x| f.node(x)).collect();
    let mut tau1 = NodeMap::new();
    for x in l.nodes() {
        tau1.insert(f.node(x).clone(), tau.node(x).expect("τ is total").clone());
    }
    let context: Vec<&NodeId> = l1.nodes().filter(|n| !matched.contains(n)).collect();
    for c in &context {
        tau1.insert((*c).clone(), NodeId(names.fresh(c.as_str())));
    }
    let transport = |t: &Term| Term {
        label: t.label.clone(),
        succ: t.succ.iter().map(|s| tau1[s].clone()).collect(),
    };

    let variable_of: BTreeMap<&NodeId, &NodeId> = l
        .nodes()
        .filter(|x| !l.is_labeled(x))
        .map(|x| (tau.node(x).expect("τ is total"), x))
        .collect();
    let mut nodes: BTreeMap<NodeId, Option<Term>> = BTreeMap::new();
    for p in r.nodes() {
        let term = if let Some(t) = r.term(p) {
            Some(t.clone())
        } else if let Some(x) = variable_of.get(p) {
            l1.term(f.node(x)).map(transport)
        } else {
            match sigma.node(p) {
                Some(q) if !l.is_labeled(q) => l1.term(f.node(q)).map(transport),
                _ => None,
            }
        };
        nodes.insert(p.clone(), term);
    }
    for c in &context {
        nodes.insert(tau1[*c].clone(), l1.term(c).map(transport));
    }
    let mut signature = l1.signature().clone();
    signature.extend(r.signature().iter().map(|(k, v)| (k.clone(), *v)));
    let object = Arc::new(TermGraph::new(signature, nodes)?);

    let g = TermMorphism::new(r.clone(), object.clone(), r.nodes().map(|p| (p.clone(), p.clone())).collect())?;
    let tau1 = TermPartialMorphism::new(l1.clone(), object.clone(), tau1, canonical_structured(rule, f))?;
    let sigma1 = TermPartialMorphism::bare(
        object.clone(),
        l1.clone(),
        sigma.map().iter().map(|(p, q)| (p.clone(), f.node(q).clone())).collect(),
    )?;
    let rho1 = HpoRule::new(HeteroMorphism::new(tau1, sigma1)?)?;
    Ok(HpoResult { object, rho1, g })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CoconeReport {
    /// `ρ1 ∘ f = g ∘ ρ` leg-wise in the heterogeneous category.
    pub commutes: bool,
    /// `σ1 ∘ g = f ∘ σ` as partial node maps.
    pub backward_transport: bool,
    /// Clones of variables carry the transported structure of the
    /// matched variable.
    pub clone_copy: bool,
    /// `τ1` keeps exactly the canonical labelled nodes.
    pub canonical: bool,
    pub rule_valid: bool,
    pub g_mono: bool,
}

impl CoconeReport {
    pub fn ok(&self) -> bool {
        self.commutes && self.backward_transport && self.clone_copy && self.canonical && self.rule_valid && self.g_mono
    }
}

impl fmt::Display for CoconeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags = [
            ("commutes", self.commutes),
            ("backward transport", self.backward_transport),
            ("clone copy", self.clone_copy),
            ("canonical domain", self.canonical),
            ("valid rule", self.rule_valid),
            ("g mono", self.g_mono),
        ];
        let failed: Vec<&str> = flags.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        if failed.is_empty() {
            write!(f, "heterogeneous cocone")
        } else {
            write!(f, "not a heterogeneous cocone: {}", failed.join(", "))
        }
    }
}

pub fn check_hetero_cocone(
    rule: &HpoRule,
    f: &TermMorphism,
    rho1: &HeteroMorphism,
    g: &TermMorphism,
) -> Result<CoconeReport> {
    if !same_tg(rule.lhs(), f.source())
        || !same_tg(f.target(), rho1.source())
        || !same_tg(rule.rhs(), g.source())
        || !same_tg(g.target(), rho1.target())
    {
        return Err(RewriteError::EndpointMismatch("cocone corners do not form a square".into()));
    }
    let left = hetero_compose(&HeteroMorphism::embed(f), rho1)?;
    let right = hetero_compose(rule.morphism(), &HeteroMorphism::embed(g))?;
    let commutes = left == right;

    let via_g: NodeMap = g
        .map()
        .iter()
        .filter_map(|(p, gp)| rho1.sigma.node(gp).map(|q| (p.clone(), q.clone())))
        .collect();
    let via_f: NodeMap = rule
        .sigma()
        .map()
        .iter()
        .map(|(p, q)| (p.clone(), f.node(q).clone()))
        .collect();
    let backward_transport = via_g == via_f;

    let (l, r, l1, r1) = (rule.lhs(), rule.rhs(), f.target(), g.target());
    let clone_copy = rule.sigma().map().iter().all(|(p, q)| {
        if r.is_labeled(p) || l.is_labeled(q) {
            return true;
        }
        match l1.term(f.node(q)) {
            None => true,
            Some(t) => {
                let expected: Option<Vec<&NodeId>> = t.succ.iter().map(|s| rho1.tau.node(s)).collect();
                match (r1.term(g.node(p)), expected) {
                    (Some(h), Some(e)) => h.label == t.label && h.succ.iter().eq(e),
                    _ => false,
                }
            }
        }
    });
    let canonical = *rho1.tau.structured() == canonical_structured(rule, f);
    Ok(CoconeReport {
        commutes,
        backward_transport,
        clone_copy,
        canonical,
        rule_valid: validate_hpo_rule(rho1).is_well_defined(),
        g_mono: g.is_mono(),
    })
}

pub type HpoSquare = RewriteSquare<HpoRule, TermMorphism, TermMorphism>;

/// The HPO rewrite step; total on mono matches.
pub fn hpo_step(rule: &HpoRule, f: &TermMorphism) -> Result<HpoSquare> {
    let res = hpo_pushout(rule, f)?;
    Ok(RewriteSquare {
        top: rule.clone(),
        bottom: res.rho1,
        left: f.clone(),
        right: res.g,
    })
}

/// Cocone morphisms `h: R1 → X` from `(ρ1, g)` to `(ρ1', g')`: termgraph
/// morphisms with `h∘g = g'`, `h∘τ1 = τ1'` and `σ1 ⊑ σ1'∘h`, counted up
/// to `stop_at`.
pub fn count_cocone_morphisms(
    rho1: &HeteroMorphism,
    g: &TermMorphism,
    rho1x: &HeteroMorphism,
    gx: &TermMorphism,
    kind: HomKind,
    stop_at: usize,
) -> usize {
    let h_src = g.target();
    let x = gx.target();
    let pairs = g
        .map()
        .iter()
        .map(|(p, gp)| (gp.clone(), gx.node(p).clone()))
        .chain(rho1.tau.map().iter().filter_map(|(y, t)| rho1x.tau.node(y).map(|tx| (t.clone(), tx.clone()))));
    let Some(fixed) = consistent_map(pairs) else { return 0 };
    if rho1.tau.map().keys().any(|y| rho1x.tau.node(y).is_none()) {
        return 0;
    }
    let mut count = 0;
    for_each_term_hom(h_src, &h_src.node_set(), &h_src.labeled_nodes(), x, kind, &fixed, |h| {
        let tau_ok = rho1.tau.structured().iter().all(|y| rho1x.tau.structured().contains(y))
            && rho1x.tau.structured().iter().all(|y| rho1.tau.structured().contains(y));
        let sigma_ok = rho1
            .sigma
            .map()
            .iter()
            .all(|(p, q)| rho1x.sigma.node(&h[p]) == Some(q));
        if tau_ok && sigma_ok {
            count += 1;
            if count >= stop_at {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    count
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HpoSystem;

impl RewriteSystem for HpoSystem {
    type LObject = Arc<TermGraph>;
    type RObject = Arc<TermGraph>;
    type Rule = HpoRule;
    type Match = TermMorphism;
    type RMatch = TermMorphism;
    type Square = HpoSquare;

    fn name(&self) -> String {
        "hpo".into()
    }

    fn lhs(&self, rule: &HpoRule) -> Arc<TermGraph> {
        rule.lhs().clone()
    }

    fn rhs(&self, rule: &HpoRule) -> Arc<TermGraph> {
        rule.rhs().clone()
    }

    fn check_rule(&self, rule: &HpoRule) -> Result<()> {
        let rep = validate_hpo_rule(rule.morphism());
        if !rep.is_well_defined() {
            return Err(RewriteError::InvalidRule(rep.to_string()));
        }
        Ok(())
    }

    fn check_match(&self, rule: &HpoRule, f: &TermMorphism) -> Result<()> {
        check_match(rule, f)
    }

    fn apply(&self, rule: &HpoRule, f: &TermMorphism) -> Result<Step<HpoSquare>> {
        Ok(Step::Defined(hpo_step(rule, f)?))
    }

    fn top(&self, sq: &HpoSquare) -> HpoRule {
        sq.top.clone()
    }

    fn bottom(&self, sq: &HpoSquare) -> HpoRule {
        sq.bottom.clone()
    }

    fn left(&self, sq: &HpoSquare) -> TermMorphism {
        sq.left.clone()
    }

    fn right(&self, sq: &HpoSquare) -> TermMorphism {
        sq.right.clone()
    }

    fn rule_eq(&self, a: &HpoRule, b: &HpoRule) -> bool {
        a == b
    }

    fn match_eq(&self, a: &TermMorphism, b: &TermMorphism) -> bool {
        a == b
    }

    fn identity_match(&self, rule: &HpoRule) -> TermMorphism {
        TermMorphism::identity(rule.lhs().clone())
    }

    fn compose_matches(&self, f1: &TermMorphism, f2: &TermMorphism) -> Result<TermMorphism> {
        f1.then(f2)
    }

    fn identity_square(&self, rule: &HpoRule) -> HpoSquare {
        RewriteSquare {
            top: rule.clone(),
            bottom: rule.clone(),
            left: TermMorphism::identity(rule.lhs().clone()),
            right: TermMorphism::identity(rule.rhs().clone()),
        }
    }

    fn paste(&self, upper: &HpoSquare, lower: &HpoSquare) -> Result<HpoSquare> {
        upper.paste(lower)
    }

    fn square_commutes(&self, sq: &HpoSquare) -> bool {
        check_hetero_cocone(&sq.top, &sq.left, sq.bottom.morphism(), &sq.right).map_or(false, |r| r.ok())
    }

    fn bottom_lhs_identity(&self, sq: &HpoSquare) -> TermMorphism {
        TermMorphism::identity(sq.bottom.lhs().clone())
    }

    fn square_isos(&self, a: &HpoSquare, b: &HpoSquare, iso: &TermMorphism) -> Vec<TermMorphism> {
        let (ta, tb) = (a.bottom.tau(), b.bottom.tau());
        let (sa, sb) = (a.bottom.sigma(), b.bottom.sigma());
        let carried: BTreeSet<NodeId> = ta.structured().iter().map(|y| iso.node(y).clone()).collect();
        if carried != *tb.structured() {
            return Vec::new();
        }
        let pairs = a
            .right
            .map()
            .iter()
            .map(|(p, gp)| (gp.clone(), b.right.node(p).clone()))
            .chain(ta.map().iter().filter_map(|(y, t)| tb.node(iso.node(y)).map(|u| (t.clone(), u.clone()))));
        let Some(fixed) = consistent_map(pairs) else { return Vec::new() };
        let (ha, hb) = (a.right.target(), b.right.target());
        let mut out = Vec::new();
        for_each_term_hom(ha, &ha.node_set(), &ha.labeled_nodes(), hb, HomKind::Iso, &fixed, |h| {
            let sigma_ok = sa.map().len() == sb.map().len()
                && sa.map().iter().all(|(p, q)| sb.node(&h[p]) == Some(iso.node(q)));
            if sigma_ok {
                out.push(TermMorphism::new(ha.clone(), hb.clone(), h.clone()).expect("enumerated morphism"));
            }
            ControlFlow::Continue(())
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{check_functoriality_composition, check_functoriality_identity};

    const SIG: &[(&str, usize)] = &[("f", 2), ("g", 1), ("a", 0)];

    fn tg(nodes: &[(&str, Option<(&str, &[&str])>)]) -> Arc<TermGraph> {
        Arc::new(TermGraph::build(SIG, nodes).unwrap())
    }

    fn nm(pairs: &[(&str, &str)]) -> NodeMap {
        pairs.iter().map(|(a, b)| (NodeId::from(*a), NodeId::from(*b))).collect()
    }

    fn set(xs: &[&str]) -> BTreeSet<NodeId> {
        xs.iter().map(|x| NodeId::from(*x)).collect()
    }

    fn rule(
        l: &Arc<TermGraph>,
        r: &Arc<TermGraph>,
        tau: &[(&str, &str)],
        kept: &[&str],
        sigma: &[(&str, &str)],
    ) -> HeteroMorphism {
        HeteroMorphism::new(
            TermPartialMorphism::new(l.clone(), r.clone(), nm(tau), set(kept)).unwrap(),
            TermPartialMorphism::bare(r.clone(), l.clone(), nm(sigma)).unwrap(),
        )
        .unwrap()
    }

    fn mat(l: &Arc<TermGraph>, g: &Arc<TermGraph>, pairs: &[(&str, &str)]) -> TermMorphism {
        TermMorphism::new(l.clone(), g.clone(), nm(pairs)).unwrap()
    }

    /// `f(x, y) → g(y)` at the root, copying nothing.
    fn rewrite_root() -> HpoRule {
        let l = tg(&[("n", Some(("f", &["x", "y"]))), ("x", None), ("y", None)]);
        let r = tg(&[("n", Some(("g", &["y"]))), ("x", None), ("y", None)]);
        HpoRule::new(rule(&l, &r, &[("n", "n"), ("x", "x"), ("y", "y")], &[], &[])).unwrap()
    }

    /// `x ↦ (x, x')` with `x'` a clone of `x`.
    fn clone_rule() -> HpoRule {
        let l = tg(&[("x", None)]);
        let r = tg(&[("x", None), ("x2", None)]);
        HpoRule::new(rule(&l, &r, &[("x", "x")], &[], &[("x2", "x")])).unwrap()
    }

    #[test]
    fn identity_rule_with_empty_sigma_is_valid() {
        let l = tg(&[("n", Some(("g", &["m"]))), ("m", None)]);
        let rep = validate_hpo_rule(&HeteroMorphism::embed(&TermMorphism::identity(l)));
        assert!(rep.is_well_defined(), "{rep}");
    }

    #[test]
    fn sigma_label_mismatch_is_reported() {
        let l = tg(&[("q", Some(("a", &[])))]);
        let r = tg(&[("q", Some(("a", &[]))), ("p", Some(("g", &["q"])))]);
        let rep = validate_hpo_rule(&rule(&l, &r, &[("q", "q")], &["q"], &[("p", "q")]));
        assert!(!rep.is_valid());
        assert!(rep.violations[0].contains('p'), "{rep}");
    }

    #[test]
    fn unlabelled_clone_may_copy_anything() {
        let l = tg(&[("q", Some(("a", &[])))]);
        let r = tg(&[("q", Some(("a", &[]))), ("p", None)]);
        assert!(validate_hpo_rule(&rule(&l, &r, &[("q", "q")], &["q"], &[("p", "q")])).is_valid());
    }

    #[test]
    fn merging_variables_is_ill_defined() {
        let l = tg(&[("x", None), ("y", None)]);
        let r = tg(&[("z", None)]);
        let rep = validate_hpo_rule(&rule(&l, &r, &[("x", "z"), ("y", "z")], &[], &[]));
        assert!(rep.is_valid() && !rep.is_well_defined());
        assert!(HpoRule::new(rule(&l, &r, &[("x", "z"), ("y", "z")], &[], &[])).is_err());
    }

    #[test]
    fn root_rewrite_keeps_context() {
        let rho = rewrite_root();
        let g = tg(&[
            ("top", Some(("g", &["r"]))),
            ("r", Some(("f", &["c", "c"]))),
            ("c", Some(("a", &[]))),
        ]);
        let f = mat(rho.lhs(), &g, &[("n", "r"), ("x", "c"), ("y", "c")]);
        // x and y both map to c: not mono.
        assert!(hpo_step(&rho, &f).is_err());

        let g = tg(&[
            ("top", Some(("g", &["r"]))),
            ("r", Some(("f", &["c", "d"]))),
            ("c", Some(("a", &[]))),
            ("d", None),
        ]);
        let f = mat(rho.lhs(), &g, &[("n", "r"), ("x", "c"), ("y", "d")]);
        let res = hpo_pushout(&rho, &f).unwrap();
        let h = &res.object;
        assert_eq!(h.node_count(), 4);
        assert_eq!(h.label(&NodeId::from("n")), Some("g"));
        assert_eq!(h.successors(&NodeId::from("n")), &[NodeId::from("y")]);
        assert_eq!(h.label(&NodeId::from("x")), Some("a"));
        assert!(!h.is_labeled(&NodeId::from("y")));
        assert_eq!(h.successors(&NodeId::from("top")), &[NodeId::from("n")]);
        let rep = check_hetero_cocone(&rho, &f, res.rho1.morphism(), &res.g).unwrap();
        assert!(rep.ok(), "{rep}");
    }

    #[test]
    fn clone_copies_matched_structure() {
        let rho = clone_rule();
        let g = tg(&[("u", Some(("g", &["v"]))), ("v", Some(("a", &[])))]);
        let f = mat(rho.lhs(), &g, &[("x", "u")]);
        let res = hpo_pushout(&rho, &f).unwrap();
        let h = &res.object;
        assert_eq!(h.node_count(), 3);
        for p in ["x", "x2"] {
            assert_eq!(h.label(&NodeId::from(p)), Some("g"));
            assert_eq!(h.successors(&NodeId::from(p)), &[NodeId::from("v")]);
        }
        assert_eq!(res.rho1.sigma().node(&NodeId::from("x2")), Some(&NodeId::from("u")));
        assert!(check_hetero_cocone(&rho, &f, res.rho1.morphism(), &res.g).unwrap().ok());
    }

    #[test]
    fn non_cocones_are_rejected() {
        let rho = clone_rule();
        let g = tg(&[("u", Some(("a", &[])))]);
        let f = mat(rho.lhs(), &g, &[("x", "u")]);
        let res = hpo_pushout(&rho, &f).unwrap();
        // Forget the clone's label.
        let bare = tg(&[("x", Some(("a", &[]))), ("x2", None)]);
        let g2 = mat(rho.rhs(), &bare, &[("x", "x"), ("x2", "x2")]);
        let tau1 = TermPartialMorphism::new(g.clone(), bare.clone(), nm(&[("u", "x")]), set(&["u"])).unwrap();
        let sigma1 = TermPartialMorphism::bare(bare.clone(), g.clone(), nm(&[("x2", "u")])).unwrap();
        let rep = check_hetero_cocone(&rho, &f, &HeteroMorphism::new(tau1, sigma1).unwrap(), &g2).unwrap();
        assert!(!rep.clone_copy && !rep.ok());
        assert!(check_hetero_cocone(&rho, &f, res.rho1.morphism(), &res.g).unwrap().ok());
    }

    #[test]
    fn functoriality() {
        for rho in [rewrite_root(), clone_rule()] {
            assert!(check_functoriality_identity(&HpoSystem, &rho));
        }
        let rho = clone_rule();
        let g1 = tg(&[("u", None), ("w", None)]);
        let g2 = tg(&[("s", Some(("f", &["t", "s"]))), ("t", Some(("a", &[]))), ("w2", None)]);
        let f1 = mat(rho.lhs(), &g1, &[("x", "u")]);
        let f2 = mat(&g1, &g2, &[("u", "s"), ("w", "t")]);
        let v = check_functoriality_composition(&HpoSystem, &rho, &f1, &f2).unwrap();
        assert!(v.holds(), "{}", v.label());
    }
}
