//! Garbage removal: the subgraph reachable from a set of roots, and the
//! two rewriting systems over graphs with inclusions built from it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{Graph, NodeId};
use crate::morphism::Inclusion;
use crate::system::{check_functoriality_composition, CompositionVerdict, RewriteSquare, RewriteSystem, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityResult {
    pub alive: BTreeSet<NodeId>,
    pub gr: Arc<Graph>,
    /// Nodes in the order they were visited.
    pub witness_order: Vec<NodeId>,
}

/// `gr(A, L1)`: the subgraph of `L1` generated by the nodes reachable
/// from the nodes of `A` along out-edges.
pub fn reachable_subgraph(a: &Graph, l1: &Graph) -> Result<ReachabilityResult> {
    if !a.is_subgraph_of(l1) {
        return Err(RewriteError::NotSubgraph(format!("{a} ⊄ {l1}")));
    }
    let mut alive = BTreeSet::new();
    let mut pending: BTreeSet<NodeId> = a.nodes().clone();
    let mut witness_order = Vec::new();
    while let Some(n) = pending.pop_first() {
        if !alive.insert(n.clone()) {
            continue;
        }
        for s in l1.successors(&n) {
            if !alive.contains(s) {
                pending.insert(s.clone());
            }
        }
        witness_order.push(n);
    }
    let gr = Arc::new(l1.induced(&alive));
    Ok(ReachabilityResult {
        alive,
        gr,
        witness_order,
    })
}

pub fn gr(a: &Graph, l1: &Graph) -> Result<Arc<Graph>> {
    Ok(reachable_subgraph(a, l1)?.gr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Roots {
    /// The left-hand side is alive.
    Lhs,
    /// The right-hand side is alive.
    Rhs,
}

pub type GcSquare = RewriteSquare<Inclusion, Inclusion, Inclusion>;

/// Garbage removal over inclusions: a rule is `ρ: R ⊆ L`, a match
/// `L ⊆ L1`; the derived rule is `gr(A, L1) ⊆ L1` with `A` the side
/// given by `roots`.
#[derive(Debug, Clone, Copy)]
pub struct GcSystem {
    pub roots: Roots,
}

pub const LGR: GcSystem = GcSystem { roots: Roots::Lhs };
pub const RGR: GcSystem = GcSystem { roots: Roots::Rhs };

fn gc_square(roots: Roots, rule: &Inclusion, f: &Inclusion) -> Result<GcSquare> {
    let alive = match roots {
        Roots::Lhs => rule.sup(),
        Roots::Rhs => rule.sub(),
    };
    let r1 = gr(alive, f.sup())?;
    Ok(RewriteSquare {
        top: rule.clone(),
        bottom: Inclusion::new(r1.clone(), f.sup().clone())?,
        left: f.clone(),
        right: Inclusion::new(rule.sub().clone(), r1)?,
    })
}

pub fn lgr_step(rule: &Inclusion, f: &Inclusion) -> Result<GcSquare> {
    LGR.check_match(rule, f)?;
    gc_square(Roots::Lhs, rule, f)
}

pub fn rgr_step(rule: &Inclusion, f: &Inclusion) -> Result<GcSquare> {
    RGR.check_match(rule, f)?;
    gc_square(Roots::Rhs, rule, f)
}

impl RewriteSystem for GcSystem {
    type LObject = Arc<Graph>;
    type RObject = Arc<Graph>;
    type Rule = Inclusion;
    type Match = Inclusion;
    type RMatch = Inclusion;
    type Square = GcSquare;

    fn name(&self) -> String {
        match self.roots {
            Roots::Lhs => "lgr".into(),
            Roots::Rhs => "rgr".into(),
        }
    }

    fn lhs(&self, rule: &Inclusion) -> Arc<Graph> {
        rule.sup().clone()
    }

    fn rhs(&self, rule: &Inclusion) -> Arc<Graph> {
        rule.sub().clone()
    }

    fn check_rule(&self, _rule: &Inclusion) -> Result<()> {
        Ok(())
    }

    fn check_match(&self, rule: &Inclusion, f: &Inclusion) -> Result<()> {
        if rule.sup() != f.sub() {
            return Err(RewriteError::EndpointMismatch(format!(
                "match source {} is not the rule's left-hand side {}",
                f.sub(),
                rule.sup()
            )));
        }
        Ok(())
    }

    fn apply(&self, rule: &Inclusion, f: &Inclusion) -> Result<Step<GcSquare>> {
        Ok(Step::Defined(gc_square(self.roots, rule, f)?))
    }

    fn top(&self, sq: &GcSquare) -> Inclusion {
        sq.top.clone()
    }

    fn bottom(&self, sq: &GcSquare) -> Inclusion {
        sq.bottom.clone()
    }

    fn left(&self, sq: &GcSquare) -> Inclusion {
        sq.left.clone()
    }

    fn right(&self, sq: &GcSquare) -> Inclusion {
        sq.right.clone()
    }

    fn rule_eq(&self, a: &Inclusion, b: &Inclusion) -> bool {
        a == b
    }

    fn match_eq(&self, a: &Inclusion, b: &Inclusion) -> bool {
        a == b
    }

    fn identity_match(&self, rule: &Inclusion) -> Inclusion {
        Inclusion::identity(rule.sup().clone())
    }

    fn compose_matches(&self, f1: &Inclusion, f2: &Inclusion) -> Result<Inclusion> {
        f1.then(f2)
    }

    fn identity_square(&self, rule: &Inclusion) -> GcSquare {
        RewriteSquare {
            top: rule.clone(),
            bottom: rule.clone(),
            left: Inclusion::identity(rule.sup().clone()),
            right: Inclusion::identity(rule.sub().clone()),
        }
    }

    fn paste(&self, upper: &GcSquare, lower: &GcSquare) -> Result<GcSquare> {
        upper.paste(lower)
    }

    fn square_commutes(&self, sq: &GcSquare) -> bool {
        // a preorder: commutation is just agreement of the corners
        sq.top.sub() == sq.right.sub()
            && sq.top.sup() == sq.left.sub()
            && sq.bottom.sup() == sq.left.sup()
            && sq.bottom.sub() == sq.right.sup()
    }

    fn bottom_lhs_identity(&self, sq: &GcSquare) -> Inclusion {
        Inclusion::identity(sq.bottom.sup().clone())
    }

    fn square_isos(&self, a: &GcSquare, b: &GcSquare, iso: &Inclusion) -> Vec<Inclusion> {
        // isomorphisms in a preorder of inclusions are identities
        if iso.sub() == iso.sup() && a.bottom == b.bottom && a.right == b.right {
            vec![Inclusion::identity(a.bottom.sub().clone())]
        } else {
            Vec::new()
        }
    }
}

fn fixture(nodes: &[&str], edges: &[(&str, &str, &str)]) -> Arc<Graph> {
    Arc::new(Graph::build(nodes, edges).expect("fixture graphs are well formed"))
}

/// `A = L = R = {a}`.
pub fn g_a() -> Arc<Graph> {
    fixture(&["a"], &[])
}

/// `{a, b, c; a→c}`.
pub fn g_l1() -> Arc<Graph> {
    fixture(&["a", "b", "c"], &[("ac", "a", "c")])
}

/// `{a, b, c, d, e; a→c, a→d, b→e}`.
pub fn g_l2() -> Arc<Graph> {
    fixture(
        &["a", "b", "c", "d", "e"],
        &[("ac", "a", "c"), ("ad", "a", "d"), ("be", "b", "e")],
    )
}

/// `{a, c; a→c}`.
pub fn g_ac() -> Arc<Graph> {
    fixture(&["a", "c"], &[("ac", "a", "c")])
}

/// `{a, c, d; a→c, a→d}`.
pub fn g_acd() -> Arc<Graph> {
    fixture(&["a", "c", "d"], &[("ac", "a", "c"), ("ad", "a", "d")])
}

#[derive(Debug, Clone)]
pub struct SystemReport {
    pub system: String,
    pub verdict: &'static str,
    pub two_step: Arc<Graph>,
    pub one_step: Option<Arc<Graph>>,
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub gr_a_l1: Arc<Graph>,
    pub gr_a_l2: Arc<Graph>,
    pub lgr: SystemReport,
    pub rgr: SystemReport,
}

impl CounterexampleReport {
    /// LGR fails and RGR holds, with the expected witnesses.
    pub fn as_expected(&self) -> bool {
        self.lgr.verdict == "fails"
            && self.rgr.verdict == "holds"
            && *self.lgr.two_step == *g_l2()
            && self.lgr.one_step.as_deref() == Some(&*g_acd())
            && *self.rgr.two_step == *g_acd()
            && self.rgr.one_step.as_deref() == Some(&*g_acd())
    }
}

fn system_report(sys: GcSystem, rho: &Inclusion, f1: &Inclusion, f2: &Inclusion) -> Result<SystemReport> {
    let verdict = check_functoriality_composition(&sys, rho, f1, f2)?;
    let (two_step, one_step) = match &verdict {
        CompositionVerdict::Holds { two_step, one_step } => (two_step.bottom.sub().clone(), Some(one_step.bottom.sub().clone())),
        CompositionVerdict::Fails { two_step, one_step, .. } => {
            (two_step.bottom.sub().clone(), one_step.as_ref().map(|s| s.bottom.sub().clone()))
        }
        CompositionVerdict::Inapplicable(why) => {
            return Err(RewriteError::Other(format!("garbage removal is total, yet: {why}")))
        }
    };
    Ok(SystemReport {
        system: sys.name(),
        verdict: verdict.label(),
        two_step,
        one_step,
    })
}

/// Runs the composition law for both systems on `R = L = {a} ⊆ L1 ⊆ L2`.
pub fn reproduce_counterexample() -> Result<CounterexampleReport> {
    let (a, l1, l2) = (g_a(), g_l1(), g_l2());
    let rho = Inclusion::identity(a.clone());
    let f1 = Inclusion::new(a.clone(), l1.clone())?;
    let f2 = Inclusion::new(l1.clone(), l2.clone())?;
    Ok(CounterexampleReport {
        gr_a_l1: gr(&a, &l1)?,
        gr_a_l2: gr(&a, &l2)?,
        lgr: system_report(LGR, &rho, &f1, &f2)?,
        rgr: system_report(RGR, &rho, &f1, &f2)?,
    })
}

impl fmt::Display for SystemReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: composition law {}; two-step {} ({} nodes)", self.system, self.verdict, self.two_step, self.two_step.node_count())?;
        match &self.one_step {
            Some(g) => write!(f, ", one-step {} ({} nodes)", g, g.node_count()),
            None => write!(f, ", one-step undefined"),
        }
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gr(A, L1) = {}", self.gr_a_l1)?;
        writeln!(f, "gr(A, L2) = {}", self.gr_a_l2)?;
        writeln!(f, "{}", self.lgr)?;
        writeln!(f, "{}", self.rgr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::check_functoriality_identity;

    #[test]
    fn single_root_examples() {
        assert_eq!(gr(&g_a(), &g_l1()).unwrap(), g_ac());
        assert_eq!(gr(&g_a(), &g_l2()).unwrap(), g_acd());
        assert_eq!(gr(&g_l1(), &g_l2()).unwrap(), g_l2());
    }

    #[test]
    fn root_edges_are_irrelevant() {
        let a = Graph::build(&["a", "c"], &[]).unwrap();
        assert_eq!(gr(&a, &g_l1()).unwrap(), gr(&g_ac(), &g_l1()).unwrap());
    }

    #[test]
    fn visitation_is_sorted_worklist() {
        let r = reachable_subgraph(&g_a(), &g_l2()).unwrap();
        let order: Vec<&str> = r.witness_order.iter().map(NodeId::as_str).collect();
        assert_eq!(order, ["a", "c", "d"]);
    }

    #[test]
    fn roots_outside_host_rejected() {
        let x = Graph::build(&["x"], &[]).unwrap();
        assert!(matches!(reachable_subgraph(&x, &g_l1()), Err(RewriteError::NotSubgraph(_))));
    }

    #[test]
    fn lgr_and_rgr_steps() {
        let rho = Inclusion::identity(g_a());
        let f = Inclusion::new(g_a(), g_l1()).unwrap();
        assert_eq!(*lgr_step(&rho, &f).unwrap().bottom.sub(), g_ac());
        assert_eq!(*rgr_step(&rho, &f).unwrap().bottom.sub(), g_ac());
        let f2 = Inclusion::new(g_a(), g_l2()).unwrap();
        assert_eq!(*lgr_step(&rho, &f2).unwrap().bottom.sub(), g_acd());
    }

    #[test]
    fn counterexample() {
        let rep = reproduce_counterexample().unwrap();
        assert!(rep.as_expected(), "{rep}");
        assert_eq!(rep.lgr.two_step.node_count(), 5);
        assert_eq!(rep.lgr.two_step.edge_count(), 3);
        assert_eq!(rep.lgr.one_step.as_ref().unwrap().node_count(), 3);
        assert_eq!(rep.lgr.one_step.as_ref().unwrap().edge_count(), 2);
    }

    #[test]
    fn identity_laws() {
        let rho = Inclusion::identity(g_a());
        assert!(check_functoriality_identity(&LGR, &rho));
        assert!(check_functoriality_identity(&RGR, &rho));
        // R = {a} is not successor-closed in {a, c; a→c}
        let open = Inclusion::new(g_a(), g_ac()).unwrap();
        assert!(!check_functoriality_identity(&RGR, &open));
        let closed = Inclusion::new(Arc::new(Graph::build(&["c"], &[]).unwrap()), g_ac()).unwrap();
        assert!(check_functoriality_identity(&RGR, &closed));
    }
}
