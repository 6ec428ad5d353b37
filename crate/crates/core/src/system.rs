//! Rewriting systems: a span of categories given extensionally by its
//! rules, matches and squares, together with a partial rewriting process
//! per rule.

use std::fmt;

use crate::error::{Result, RewriteError};

/// Outcome of a rewriting process on a well-formed match. `Undefined`
/// means the match lies outside the domain of the process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<S> {
    Defined(S),
    Undefined(String),
}

impl<S> Step<S> {
    pub fn is_defined(&self) -> bool {
        matches!(self, Step::Defined(_))
    }

    pub fn defined(&self) -> Option<&S> {
        match self {
            Step::Defined(s) => Some(s),
            Step::Undefined(_) => None,
        }
    }

    pub fn into_option(self) -> Option<S> {
        match self {
            Step::Defined(s) => Some(s),
            Step::Undefined(_) => None,
        }
    }
}

/// A morphism of rules: `top → bottom` with legs `left` (between the
/// left-hand sides) and `right` (between the right-hand sides).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSquare<R, M, N> {
    pub top: R,
    pub bottom: R,
    pub left: M,
    pub right: N,
}

/// Morphisms that compose diagrammatically.
pub trait Arrow: Sized {
    /// `next ∘ self`.
    fn then(&self, next: &Self) -> Result<Self>;
}

impl Arrow for crate::morphism::TotalMorphism {
    fn then(&self, next: &Self) -> Result<Self> {
        crate::morphism::TotalMorphism::then(self, next)
    }
}

impl Arrow for crate::morphism::Inclusion {
    fn then(&self, next: &Self) -> Result<Self> {
        crate::morphism::Inclusion::then(self, next)
    }
}

impl Arrow for crate::termgraph::TermMorphism {
    fn then(&self, next: &Self) -> Result<Self> {
        crate::termgraph::TermMorphism::then(self, next)
    }
}

impl<R: Clone, M: Arrow, N: Arrow> RewriteSquare<R, M, N> {
    /// Vertical pasting: `self` on top of `lower`.
    pub fn paste(&self, lower: &Self) -> Result<Self> {
        Ok(RewriteSquare {
            top: self.top.clone(),
            bottom: lower.bottom.clone(),
            left: self.left.then(&lower.left)?,
            right: self.right.then(&lower.right)?,
        })
    }
}

pub trait RewriteSystem {
    type LObject: Clone + PartialEq + fmt::Debug;
    type RObject: Clone + PartialEq + fmt::Debug;
    type Rule: Clone + fmt::Debug;
    type Match: Clone + fmt::Debug;
    type RMatch: Clone + fmt::Debug;
    type Square: Clone + fmt::Debug;

    fn name(&self) -> String;

    fn lhs(&self, rule: &Self::Rule) -> Self::LObject;
    fn rhs(&self, rule: &Self::Rule) -> Self::RObject;

    /// Rule-class validity (partial mono, mono, inclusion, ...).
    fn check_rule(&self, rule: &Self::Rule) -> Result<()>;

    /// The match starts at the left-hand side and is admissible.
    fn check_match(&self, rule: &Self::Rule, f: &Self::Match) -> Result<()>;

    /// The rewriting process, on an already checked rule and match.
    fn apply(&self, rule: &Self::Rule, f: &Self::Match) -> Result<Step<Self::Square>>;

    fn top(&self, sq: &Self::Square) -> Self::Rule;
    fn bottom(&self, sq: &Self::Square) -> Self::Rule;
    fn left(&self, sq: &Self::Square) -> Self::Match;
    fn right(&self, sq: &Self::Square) -> Self::RMatch;

    fn rule_eq(&self, a: &Self::Rule, b: &Self::Rule) -> bool;
    fn match_eq(&self, a: &Self::Match, b: &Self::Match) -> bool;

    fn identity_match(&self, rule: &Self::Rule) -> Self::Match;
    /// `f2 ∘ f1`.
    fn compose_matches(&self, f1: &Self::Match, f2: &Self::Match) -> Result<Self::Match>;

    fn identity_square(&self, rule: &Self::Rule) -> Self::Square;
    /// Vertical pasting of `upper` then `lower`.
    fn paste(&self, upper: &Self::Square, lower: &Self::Square) -> Result<Self::Square>;
    fn square_commutes(&self, sq: &Self::Square) -> bool;

    /// The identity on the left-hand side of the bottom rule.
    fn bottom_lhs_identity(&self, sq: &Self::Square) -> Self::Match;

    /// Given an isomorphism `iso` between the left-hand sides of the
    /// bottom rules of `a` and `b`, all isomorphisms between their
    /// right-hand sides that turn `a` into `b`.
    fn square_isos(&self, a: &Self::Square, b: &Self::Square, iso: &Self::Match) -> Vec<Self::RMatch>;

    /// Same top rule, same left leg, and bottoms related by an
    /// isomorphism fixing the left-hand side.
    fn squares_equivalent(&self, a: &Self::Square, b: &Self::Square) -> bool {
        self.rule_eq(&self.top(a), &self.top(b))
            && self.match_eq(&self.left(a), &self.left(b))
            && !self.square_isos(a, b, &self.bottom_lhs_identity(a)).is_empty()
    }
}

/// Applies `rule` at `f`, validating inputs and the section law.
pub fn rewrite_step<S: RewriteSystem>(sys: &S, rule: &S::Rule, f: &S::Match) -> Result<Step<S::Square>> {
    sys.check_rule(rule)?;
    sys.check_match(rule, f)?;
    let step = sys.apply(rule, f)?;
    if let Step::Defined(sq) = &step {
        if !sys.rule_eq(&sys.top(sq), rule) || !sys.match_eq(&sys.left(sq), f) {
            return Err(RewriteError::Other(format!("{}: section law violated", sys.name())));
        }
    }
    Ok(step)
}

/// `S_ρ(id_L)` is defined and equivalent to the identity square on `ρ`.
pub fn check_functoriality_identity<S: RewriteSystem>(sys: &S, rule: &S::Rule) -> bool {
    let id = sys.identity_match(rule);
    match rewrite_step(sys, rule, &id) {
        Ok(Step::Defined(sq)) => sys.squares_equivalent(&sq, &sys.identity_square(rule)),
        _ => false,
    }
}

#[derive(Debug, Clone)]
pub enum CompositionVerdict<Sq> {
    Holds { two_step: Sq, one_step: Sq },
    /// `f1` or `f2` lies outside the relevant domain.
    Inapplicable(String),
    /// `one_step` is `None` when `f2 ∘ f1` is outside the domain although
    /// both factors are inside (`domain_violation`).
    Fails {
        two_step: Sq,
        one_step: Option<Sq>,
        domain_violation: bool,
    },
}

impl<Sq> CompositionVerdict<Sq> {
    pub fn holds(&self) -> bool {
        matches!(self, CompositionVerdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, CompositionVerdict::Fails { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            CompositionVerdict::Holds { .. } => "holds",
            CompositionVerdict::Inapplicable(_) => "inapplicable",
            CompositionVerdict::Fails { .. } => "fails",
        }
    }
}

/// Compares `S_{ρ1}(f2) ∘ S_ρ(f1)` with `S_ρ(f2 ∘ f1)`.
pub fn check_functoriality_composition<S: RewriteSystem>(
    sys: &S,
    rule: &S::Rule,
    f1: &S::Match,
    f2: &S::Match,
) -> Result<CompositionVerdict<S::Square>> {
    let upper = match rewrite_step(sys, rule, f1)? {
        Step::Defined(sq) => sq,
        Step::Undefined(why) => return Ok(CompositionVerdict::Inapplicable(format!("first match: {why}"))),
    };
    let rule1 = sys.bottom(&upper);
    let lower = match rewrite_step(sys, &rule1, f2)? {
        Step::Defined(sq) => sq,
        Step::Undefined(why) => return Ok(CompositionVerdict::Inapplicable(format!("second match: {why}"))),
    };
    let two_step = sys.paste(&upper, &lower)?;
    let f21 = sys.compose_matches(f1, f2)?;
    Ok(match rewrite_step(sys, rule, &f21)? {
        Step::Undefined(_) => CompositionVerdict::Fails {
            two_step,
            one_step: None,
            domain_violation: true,
        },
        Step::Defined(one_step) => {
            if sys.squares_equivalent(&two_step, &one_step) {
                CompositionVerdict::Holds { two_step, one_step }
            } else {
                CompositionVerdict::Fails {
                    two_step,
                    one_step: Some(one_step),
                    domain_violation: false,
                }
            }
        }
    })
}

/// A pair of rules sharing the interface object `rhs(first) = lhs(second)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedRule<A, B> {
    pub first: A,
    pub second: B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedSquare<A, B> {
    pub first: A,
    pub second: B,
}

/// Horizontal composition `second ∘ first`: the right legs of `first`
/// are the matches of `second`.
#[derive(Debug, Clone)]
pub struct Composed<A, B> {
    pub first: A,
    pub second: B,
}

pub fn compose_systems<A, B>(first: A, second: B) -> Composed<A, B>
where
    A: RewriteSystem,
    B: RewriteSystem<Match = A::RMatch, LObject = A::RObject>,
{
    Composed { first, second }
}

impl<A, B> RewriteSystem for Composed<A, B>
where
    A: RewriteSystem,
    B: RewriteSystem<Match = A::RMatch, LObject = A::RObject>,
{
    type LObject = A::LObject;
    type RObject = B::RObject;
    type Rule = ComposedRule<A::Rule, B::Rule>;
    type Match = A::Match;
    type RMatch = B::RMatch;
    type Square = ComposedSquare<A::Square, B::Square>;

    fn name(&self) -> String {
        format!("{}∘{}", self.second.name(), self.first.name())
    }

    fn lhs(&self, rule: &Self::Rule) -> Self::LObject {
        self.first.lhs(&rule.first)
    }

    fn rhs(&self, rule: &Self::Rule) -> Self::RObject {
        self.second.rhs(&rule.second)
    }

    fn check_rule(&self, rule: &Self::Rule) -> Result<()> {
        self.first.check_rule(&rule.first)?;
        self.second.check_rule(&rule.second)?;
        if self.first.rhs(&rule.first) != self.second.lhs(&rule.second) {
            return Err(RewriteError::InvalidRule("interface objects of the composed rule differ".into()));
        }
        Ok(())
    }

    fn check_match(&self, rule: &Self::Rule, f: &Self::Match) -> Result<()> {
        self.first.check_match(&rule.first, f)
    }

    fn apply(&self, rule: &Self::Rule, f: &Self::Match) -> Result<Step<Self::Square>> {
        let a = match rewrite_step(&self.first, &rule.first, f)? {
            Step::Defined(a) => a,
            Step::Undefined(why) => return Ok(Step::Undefined(format!("{}: {why}", self.first.name()))),
        };
        let f1 = self.first.right(&a);
        let b = match rewrite_step(&self.second, &rule.second, &f1)? {
            Step::Defined(b) => b,
            Step::Undefined(why) => return Ok(Step::Undefined(format!("{}: {why}", self.second.name()))),
        };
        Ok(Step::Defined(ComposedSquare { first: a, second: b }))
    }

    fn top(&self, sq: &Self::Square) -> Self::Rule {
        ComposedRule {
            first: self.first.top(&sq.first),
            second: self.second.top(&sq.second),
        }
    }

    fn bottom(&self, sq: &Self::Square) -> Self::Rule {
        ComposedRule {
            first: self.first.bottom(&sq.first),
            second: self.second.bottom(&sq.second),
        }
    }

    fn left(&self, sq: &Self::Square) -> Self::Match {
        self.first.left(&sq.first)
    }

    fn right(&self, sq: &Self::Square) -> Self::RMatch {
        self.second.right(&sq.second)
    }

    fn rule_eq(&self, a: &Self::Rule, b: &Self::Rule) -> bool {
        self.first.rule_eq(&a.first, &b.first) && self.second.rule_eq(&a.second, &b.second)
    }

    fn match_eq(&self, a: &Self::Match, b: &Self::Match) -> bool {
        self.first.match_eq(a, b)
    }

    fn identity_match(&self, rule: &Self::Rule) -> Self::Match {
        self.first.identity_match(&rule.first)
    }

    fn compose_matches(&self, f1: &Self::Match, f2: &Self::Match) -> Result<Self::Match> {
        self.first.compose_matches(f1, f2)
    }

    fn identity_square(&self, rule: &Self::Rule) -> Self::Square {
        ComposedSquare {
            first: self.first.identity_square(&rule.first),
            second: self.second.identity_square(&rule.second),
        }
    }

    fn paste(&self, upper: &Self::Square, lower: &Self::Square) -> Result<Self::Square> {
        Ok(ComposedSquare {
            first: self.first.paste(&upper.first, &lower.first)?,
            second: self.second.paste(&upper.second, &lower.second)?,
        })
    }

    fn square_commutes(&self, sq: &Self::Square) -> bool {
        self.first.square_commutes(&sq.first)
            && self.second.square_commutes(&sq.second)
            && self.second.match_eq(&self.first.right(&sq.first), &self.second.left(&sq.second))
    }

    fn bottom_lhs_identity(&self, sq: &Self::Square) -> Self::Match {
        self.first.bottom_lhs_identity(&sq.first)
    }

    fn square_isos(&self, a: &Self::Square, b: &Self::Square, iso: &Self::Match) -> Vec<Self::RMatch> {
        self.first
            .square_isos(&a.first, &b.first, iso)
            .iter()
            .flat_map(|m| self.second.square_isos(&a.second, &b.second, m))
            .collect()
    }

    fn squares_equivalent(&self, a: &Self::Square, b: &Self::Square) -> bool {
        self.rule_eq(&self.top(a), &self.top(b))
            && self.match_eq(&self.left(a), &self.left(b))
            && self
                .first
                .square_isos(&a.first, &b.first, &self.bottom_lhs_identity(a))
                .iter()
                .any(|m| !self.second.square_isos(&a.second, &b.second, m).is_empty())
    }
}
