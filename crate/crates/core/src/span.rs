//! Span rules `L ← K → R` rewritten in two stages: a complement of
//! `l` along the match, then a pushout along `r`. Double pushout and the
//! two sesqui-pushout variants.

use std::fmt;
use std::sync::Arc;

use crate::dpo::{pushout_complement, require_mono};
use crate::error::{Result, RewriteError};
use crate::graph::Graph;
use crate::morphism::TotalMorphism;
use crate::pushout::{
    check_source, direct_commutes, direct_isos, inverse_commutes, inverse_isos, pushout_total, same_graph,
    TotalSquare,
};
use crate::sqpo::{fpbc_left_linear, fpbc_monic_match};
use crate::system::{rewrite_step, ComposedSquare, RewriteSquare, RewriteSystem, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    /// `K → L`
    pub l: TotalMorphism,
    /// `K → R`
    pub r: TotalMorphism,
}

impl Span {
    pub fn new(l: TotalMorphism, r: TotalMorphism) -> Result<Self> {
        if !same_graph(l.source(), r.source()) {
            return Err(RewriteError::InvalidRule("span legs have different sources".into()));
        }
        Ok(Span { l, r })
    }

    pub fn identity(g: Arc<Graph>) -> Self {
        let id = TotalMorphism::identity(g);
        Span { l: id.clone(), r: id }
    }

    pub fn interface(&self) -> &Arc<Graph> {
        self.l.source()
    }

    pub fn lhs(&self) -> &Arc<Graph> {
        self.l.target()
    }

    pub fn rhs(&self) -> &Arc<Graph> {
        self.r.target()
    }
}

/// A morphism of spans: legs between left-hand sides, interfaces and
/// right-hand sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanSquare {
    pub top: Span,
    pub bottom: Span,
    pub left: TotalMorphism,
    pub middle: TotalMorphism,
    pub right: TotalMorphism,
}

impl SpanSquare {
    /// The complement stage: `l → l1` with legs `left`, `middle`.
    pub fn first_stage(&self) -> TotalSquare {
        RewriteSquare {
            top: self.top.l.clone(),
            bottom: self.bottom.l.clone(),
            left: self.left.clone(),
            right: self.middle.clone(),
        }
    }

    /// The pushout stage: `r → r1` with legs `middle`, `right`.
    pub fn second_stage(&self) -> TotalSquare {
        RewriteSquare {
            top: self.top.r.clone(),
            bottom: self.bottom.r.clone(),
            left: self.middle.clone(),
            right: self.right.clone(),
        }
    }

    pub fn from_stages(first: &TotalSquare, second: &TotalSquare) -> Result<Self> {
        if first.right != second.left {
            return Err(RewriteError::EndpointMismatch("stages do not share the interface leg".into()));
        }
        Ok(SpanSquare {
            top: Span::new(first.top.clone(), second.top.clone())?,
            bottom: Span::new(first.bottom.clone(), second.bottom.clone())?,
            left: first.left.clone(),
            middle: first.right.clone(),
            right: second.right.clone(),
        })
    }

    pub fn from_composed(sq: &ComposedSquare<TotalSquare, TotalSquare>) -> Result<Self> {
        SpanSquare::from_stages(&sq.first, &sq.second)
    }

    /// The derived graph.
    pub fn derived(&self) -> &Arc<Graph> {
        self.bottom.rhs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpanKind {
    Dpo,
    Sqpo1,
    Sqpo2,
}

impl fmt::Display for SpanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpanKind::Dpo => "dpo",
            SpanKind::Sqpo1 => "sqpo1",
            SpanKind::Sqpo2 => "sqpo2",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpanSystem {
    pub kind: SpanKind,
}

impl SpanSystem {
    pub fn new(kind: SpanKind) -> Self {
        SpanSystem { kind }
    }
}

impl RewriteSystem for SpanSystem {
    type LObject = Arc<Graph>;
    type RObject = Arc<Graph>;
    type Rule = Span;
    type Match = TotalMorphism;
    type RMatch = TotalMorphism;
    type Square = SpanSquare;

    fn name(&self) -> String {
        self.kind.to_string()
    }

    fn lhs(&self, rule: &Span) -> Arc<Graph> {
        rule.lhs().clone()
    }

    fn rhs(&self, rule: &Span) -> Arc<Graph> {
        rule.rhs().clone()
    }

    fn check_rule(&self, rule: &Span) -> Result<()> {
        if !same_graph(rule.l.source(), rule.r.source()) {
            return Err(RewriteError::InvalidRule("span legs have different sources".into()));
        }
        match self.kind {
            SpanKind::Dpo | SpanKind::Sqpo1 => require_mono(&rule.l),
            SpanKind::Sqpo2 => Ok(()),
        }
    }

    fn check_match(&self, rule: &Span, f: &TotalMorphism) -> Result<()> {
        check_source(rule.lhs(), f)?;
        if self.kind == SpanKind::Sqpo2 && !f.is_mono() {
            return Err(RewriteError::InadmissibleMatch(format!("match {f} is not a mono")));
        }
        Ok(())
    }

    fn apply(&self, rule: &Span, f: &TotalMorphism) -> Result<Step<SpanSquare>> {
        let (k1, l1, g) = match self.kind {
            SpanKind::Dpo => match pushout_complement(&rule.l, f)? {
                None => return Ok(Step::Undefined("gluing condition fails".into())),
                Some(pc) => (pc.object, pc.l1, pc.g),
            },
            SpanKind::Sqpo1 => match fpbc_left_linear(&rule.l, f)? {
                None => return Ok(Step::Undefined("match is not conflict-free with respect to the rule".into())),
                Some(pc) => (pc.object, pc.l1, pc.g),
            },
            SpanKind::Sqpo2 => {
                let pc = fpbc_monic_match(&rule.l, f)?;
                (pc.object, pc.l1, pc.g)
            }
        };
        debug_assert!(same_graph(&k1, g.target()));
        let po = pushout_total(&rule.r, &g)?;
        Ok(Step::Defined(SpanSquare {
            top: rule.clone(),
            bottom: Span { l: l1, r: po.rho1 },
            left: f.clone(),
            middle: g,
            right: po.g,
        }))
    }

    fn top(&self, sq: &SpanSquare) -> Span {
        sq.top.clone()
    }

    fn bottom(&self, sq: &SpanSquare) -> Span {
        sq.bottom.clone()
    }

    fn left(&self, sq: &SpanSquare) -> TotalMorphism {
        sq.left.clone()
    }

    fn right(&self, sq: &SpanSquare) -> TotalMorphism {
        sq.right.clone()
    }

    fn rule_eq(&self, a: &Span, b: &Span) -> bool {
        a == b
    }

    fn match_eq(&self, a: &TotalMorphism, b: &TotalMorphism) -> bool {
        a == b
    }

    fn identity_match(&self, rule: &Span) -> TotalMorphism {
        TotalMorphism::identity(rule.lhs().clone())
    }

    fn compose_matches(&self, f1: &TotalMorphism, f2: &TotalMorphism) -> Result<TotalMorphism> {
        f1.then(f2)
    }

    fn identity_square(&self, rule: &Span) -> SpanSquare {
        SpanSquare {
            top: rule.clone(),
            bottom: rule.clone(),
            left: TotalMorphism::identity(rule.lhs().clone()),
            middle: TotalMorphism::identity(rule.interface().clone()),
            right: TotalMorphism::identity(rule.rhs().clone()),
        }
    }

    fn paste(&self, upper: &SpanSquare, lower: &SpanSquare) -> Result<SpanSquare> {
        Ok(SpanSquare {
            top: upper.top.clone(),
            bottom: lower.bottom.clone(),
            left: upper.left.then(&lower.left)?,
            middle: upper.middle.then(&lower.middle)?,
            right: upper.right.then(&lower.right)?,
        })
    }

    fn square_commutes(&self, sq: &SpanSquare) -> bool {
        inverse_commutes(&sq.first_stage()) && direct_commutes(&sq.second_stage())
    }

    fn bottom_lhs_identity(&self, sq: &SpanSquare) -> TotalMorphism {
        TotalMorphism::identity(sq.bottom.lhs().clone())
    }

    fn square_isos(&self, a: &SpanSquare, b: &SpanSquare, iso: &TotalMorphism) -> Vec<TotalMorphism> {
        let (a1, b1) = (a.first_stage(), b.first_stage());
        let (a2, b2) = (a.second_stage(), b.second_stage());
        inverse_isos(&a1, &b1, iso)
            .iter()
            .flat_map(|m| direct_isos(&a2, &b2, m))
            .collect()
    }
}

pub fn dpo_step(span: &Span, f: &TotalMorphism) -> Result<Step<SpanSquare>> {
    rewrite_step(&SpanSystem::new(SpanKind::Dpo), span, f)
}

/// `variant` is 1 (monic rule, conflict-free match) or 2 (monic match).
pub fn sqpo_step(variant: u8, span: &Span, f: &TotalMorphism) -> Result<Step<SpanSquare>> {
    let kind = match variant {
        1 => SpanKind::Sqpo1,
        2 => SpanKind::Sqpo2,
        v => return Err(RewriteError::Other(format!("unknown sesqui-pushout variant {v}"))),
    };
    rewrite_step(&SpanSystem::new(kind), span, f)
}
