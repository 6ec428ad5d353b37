#![allow(dead_code)]

use std::sync::Arc;

use catrw::gc::{gr, GcSystem};
use catrw::graph::Graph;
use catrw::hpo::{HpoRule, HpoSystem};
use catrw::morphism::{Inclusion, PartialMorphism, TotalMorphism};
use catrw::sample;
use catrw::span::{Span, SpanKind, SpanSystem};
use catrw::system::{check_functoriality_composition, check_functoriality_identity, CompositionVerdict, RewriteSystem};
use catrw::termgraph::TermMorphism;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

#[derive(Debug, Default, Clone)]
pub struct Tally {
    pub identity_checked: usize,
    pub identity_failed: usize,
    pub holds: usize,
    pub inapplicable: usize,
    pub fails: usize,
    pub domain_violations: usize,
    pub errors: Vec<String>,
}

impl Tally {
    pub fn clean(&self) -> bool {
        self.identity_failed == 0 && self.fails == 0 && self.errors.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "identity {}/{} ok, composition {} hold / {} fail ({} domain) / {} inapplicable, {} errors{}",
            self.identity_checked - self.identity_failed,
            self.identity_checked,
            self.holds,
            self.fails,
            self.domain_violations,
            self.inapplicable,
            self.errors.len(),
            self.errors.first().map(|e| format!(" (first: {e})")).unwrap_or_default()
        )
    }
}

/// Runs both laws until `n` composition instances were applicable (and
/// `n` identity checks were made), or `20 n` attempts.
pub fn run_laws<S: RewriteSystem>(
    sys: &S,
    n: usize,
    seed: u64,
    mut gen: impl FnMut(&mut StdRng) -> (S::Rule, S::Match, S::Match),
    identity_applies: impl Fn(&S::Rule) -> bool,
) -> Tally {
    let mut r = rng(seed);
    let mut t = Tally::default();
    let mut attempts = 0;
    while (t.holds + t.fails < n || t.identity_checked < n) && attempts < 20 * n {
        attempts += 1;
        let (rule, f1, f2) = gen(&mut r);
        if t.identity_checked < n && identity_applies(&rule) {
            t.identity_checked += 1;
            if !check_functoriality_identity(sys, &rule) {
                t.identity_failed += 1;
            }
        }
        if t.holds + t.fails >= n {
            continue;
        }
        match check_functoriality_composition(sys, &rule, &f1, &f2) {
            Ok(CompositionVerdict::Holds { .. }) => t.holds += 1,
            Ok(CompositionVerdict::Inapplicable(_)) => t.inapplicable += 1,
            Ok(CompositionVerdict::Fails { domain_violation, .. }) => {
                t.fails += 1;
                if domain_violation {
                    t.domain_violations += 1;
                }
            }
            Err(e) => t.errors.push(e.to_string()),
        }
    }
    t
}

pub type TotalTriple = (TotalMorphism, TotalMorphism, TotalMorphism);

pub fn po_instance(r: &mut StdRng) -> TotalTriple {
    sample::po_triple(r)
}

pub fn spo_instance(r: &mut StdRng) -> (PartialMorphism, TotalMorphism, TotalMorphism) {
    sample::spo_triple(r)
}

/// A rule `l: K → L` and matches out of `L`.
pub fn inverse_instance(r: &mut StdRng, mono_rule: bool, mono_match: bool) -> TotalTriple {
    sample::inverse_triple(r, mono_rule, mono_match)
}

pub fn span_instance(r: &mut StdRng, kind: SpanKind) -> (Span, TotalMorphism, TotalMorphism) {
    sample::span_triple(r, kind)
}

pub fn hpo_instance(r: &mut StdRng) -> (HpoRule, TermMorphism, TermMorphism) {
    sample::hpo_triple(r)
}

pub fn gc_instance(r: &mut StdRng) -> (Inclusion, Inclusion, Inclusion) {
    sample::gc_triple(r)
}

/// `R ⊆ L` is closed under successors in `L`.
pub fn successor_closed(rule: &Inclusion) -> bool {
    let closed: Arc<Graph> = gr(rule.sub(), rule.sup()).unwrap();
    closed.as_ref() == rule.sub().as_ref()
}

pub fn always<T>(_: &T) -> bool {
    true
}

pub fn span_system(kind: SpanKind) -> SpanSystem {
    SpanSystem::new(kind)
}

pub fn hpo_system() -> HpoSystem {
    HpoSystem
}

pub fn gc_system(s: GcSystem) -> GcSystem {
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaOutcome {
    /// A hypothesis fails; the lemma says nothing.
    NoClaim,
    Holds,
    Violated,
}

fn conclude(ok: bool) -> LemmaOutcome {
    if ok {
        LemmaOutcome::Holds
    } else {
        LemmaOutcome::Violated
    }
}

/// Conflict-free `f1` w.r.t. `r` and `f2` w.r.t. the derived `r1` give a
/// conflict-free `f2 ∘ f1`.
pub fn spo_lemma(r: &PartialMorphism, f1: &TotalMorphism, f2: &TotalMorphism) -> LemmaOutcome {
    use catrw::spo::{conflict_free_spo, spo_pushout};
    let Some(res) = spo_pushout(r, f1).unwrap() else { return LemmaOutcome::NoClaim };
    if !conflict_free_spo(&res.r1, f2).unwrap() {
        return LemmaOutcome::NoClaim;
    }
    conclude(conflict_free_spo(r, &f1.then(f2).unwrap()).unwrap())
}

/// Gluing for `f1` w.r.t. `l` and for `f2` w.r.t. the derived `l1` give
/// gluing for `f2 ∘ f1`.
pub fn dpo_lemma(l: &TotalMorphism, f1: &TotalMorphism, f2: &TotalMorphism) -> LemmaOutcome {
    use catrw::dpo::{gluing_check, pushout_complement};
    let Some(pc) = pushout_complement(l, f1).unwrap() else { return LemmaOutcome::NoClaim };
    if !gluing_check(&pc.l1, f2).unwrap().ok() {
        return LemmaOutcome::NoClaim;
    }
    conclude(gluing_check(l, &f1.then(f2).unwrap()).unwrap().ok())
}

/// Conflict-freeness for left-linear sesqui-pushout rules.
pub fn sqpo_lemma(l: &TotalMorphism, f1: &TotalMorphism, f2: &TotalMorphism) -> LemmaOutcome {
    use catrw::sqpo::{conflict_free_sqpo, fpbc_left_linear};
    let Some(pc) = fpbc_left_linear(l, f1).unwrap() else { return LemmaOutcome::NoClaim };
    if !conflict_free_sqpo(&pc.l1, f2).unwrap() {
        return LemmaOutcome::NoClaim;
    }
    conclude(conflict_free_sqpo(l, &f1.then(f2).unwrap()).unwrap())
}

#[derive(Debug, Default, Clone, Copy)]
pub struct LemmaTally {
    pub claimed: usize,
    pub violated: usize,
    pub no_claim: usize,
}

/// Samples until `n` instances satisfy the hypotheses (or `50 n` tries).
pub fn run_lemma(n: usize, seed: u64, mut instance: impl FnMut(&mut StdRng) -> LemmaOutcome) -> LemmaTally {
    let mut r = rng(seed);
    let mut t = LemmaTally::default();
    let mut tries = 0;
    while t.claimed < n && tries < 50 * n {
        tries += 1;
        match instance(&mut r) {
            LemmaOutcome::NoClaim => t.no_claim += 1,
            LemmaOutcome::Holds => t.claimed += 1,
            LemmaOutcome::Violated => {
                t.claimed += 1;
                t.violated += 1;
            }
        }
    }
    t
}

pub fn spo_lemma_random(r: &mut StdRng) -> LemmaOutcome {
    let (rule, f1, f2) = spo_instance(r);
    spo_lemma(&rule, &f1, &f2)
}

pub fn dpo_lemma_random(r: &mut StdRng) -> LemmaOutcome {
    let (l, f1, f2) = inverse_instance(r, true, false);
    dpo_lemma(&l, &f1, &f2)
}

pub fn sqpo_lemma_random(r: &mut StdRng) -> LemmaOutcome {
    let (l, f1, f2) = inverse_instance(r, true, false);
    sqpo_lemma(&l, &f1, &f2)
}

pub fn graph(nodes: &[&str], edges: &[(&str, &str, &str)]) -> Arc<Graph> {
    Arc::new(Graph::build(nodes, edges).unwrap())
}

pub fn hom(a: &Arc<Graph>, b: &Arc<Graph>, nodes: &[(&str, &str)], edges: &[(&str, &str)]) -> TotalMorphism {
    use catrw::graph::{EdgeId, NodeId};
    TotalMorphism::new(
        a.clone(),
        b.clone(),
        nodes.iter().map(|(x, y)| (NodeId::from(*x), NodeId::from(*y))).collect(),
        edges.iter().map(|(x, y)| (EdgeId::from(*x), EdgeId::from(*y))).collect(),
    )
    .unwrap()
}

/// `K = {a} ⊆ L = {a, b}`, the identity match, and a second match
/// identifying `a` with `b`.
pub fn negative_instance() -> (TotalMorphism, TotalMorphism, TotalMorphism) {
    let k = graph(&["a"], &[]);
    let l = graph(&["a", "b"], &[]);
    let incl = TotalMorphism::inclusion(k, l.clone()).unwrap();
    let id = TotalMorphism::identity(l.clone());
    let merge = hom(&l, &graph(&["m"], &[]), &[("a", "m"), ("b", "m")], &[]);
    (incl, id, merge)
}

/// Negative instances per lemma: (first hypothesis fails, second
/// hypothesis fails); each must give no claim, and in the second the
/// conclusion is indeed false.
pub fn lemma_negatives() -> Vec<(&'static str, LemmaOutcome, bool)> {
    use catrw::dpo::gluing_check;
    use catrw::spo::conflict_free_spo;
    use catrw::sqpo::conflict_free_sqpo;
    let (incl, id, merge) = negative_instance();
    let r = PartialMorphism::new(
        incl.target().clone(),
        incl.source().clone(),
        incl.source().clone(),
        incl.node_map().clone(),
        incl.edge_map().clone(),
    )
    .unwrap();
    let merged_id = TotalMorphism::identity(merge.target().clone());
    vec![
        ("spo: f1 conflicting", spo_lemma(&r, &merge, &merged_id), !conflict_free_spo(&r, &merge).unwrap()),
        ("spo: f2 conflicting", spo_lemma(&r, &id, &merge), !conflict_free_spo(&r, &id.then(&merge).unwrap()).unwrap()),
        ("dpo: f1 fails gluing", dpo_lemma(&incl, &merge, &merged_id), !gluing_check(&incl, &merge).unwrap().ok()),
        ("dpo: f2 fails gluing", dpo_lemma(&incl, &id, &merge), !gluing_check(&incl, &id.then(&merge).unwrap()).unwrap().ok()),
        ("sqpo: f1 conflicting", sqpo_lemma(&incl, &merge, &merged_id), !conflict_free_sqpo(&incl, &merge).unwrap()),
        ("sqpo: f2 conflicting", sqpo_lemma(&incl, &id, &merge), !conflict_free_sqpo(&incl, &id.then(&merge).unwrap()).unwrap()),
    ]
}

#[derive(Debug, Default, Clone)]
pub struct OracleTally {
    pub verified: usize,
    pub undefined: usize,
    pub failures: Vec<String>,
}

impl OracleTally {
    pub fn record(&mut self, v: catrw::Result<catrw::oracle::VerificationVerdict>, what: impl FnOnce() -> String) {
        match v {
            Ok(v) if v.ok => self.verified += 1,
            Ok(v) => self.failures.push(format!("{}: {v}", what())),
            Err(e) => self.failures.push(format!("{}: error {e}", what())),
        }
    }
}

/// Runs `body` on fresh instances until `n` constructions were verified
/// (or `20 n` tries). `body` returns `None` when the construction is
/// undefined on the instance.
pub fn run_oracle(
    n: usize,
    seed: u64,
    mut body: impl FnMut(&mut StdRng) -> Option<(catrw::Result<catrw::oracle::VerificationVerdict>, String)>,
) -> OracleTally {
    let mut r = rng(seed);
    let mut t = OracleTally::default();
    let mut tries = 0;
    while t.verified + t.failures.len() < n && tries < 20 * n {
        tries += 1;
        match body(&mut r) {
            None => t.undefined += 1,
            Some((v, what)) => t.record(v, || what),
        }
    }
    t
}

pub mod oracle_suites {
    use super::*;
    use catrw::dpo::pushout_complement;
    use catrw::hpo::hpo_pushout;
    use catrw::oracle::{
        verify_fpbc_bounded, verify_initial_cocone_bounded, verify_partial_pushout_bounded, verify_poc_bounded,
        verify_pushout_bounded, OracleOptions,
    };
    use catrw::pushout::pushout_total;
    use catrw::spo::spo_pushout;
    use catrw::sqpo::{fpbc_left_linear, fpbc_monic_match};

    pub fn pushout(n: usize, seed: u64) -> OracleTally {
        run_oracle(n, seed, |r| {
            let (rule, f, _) = po_instance(r);
            let po = pushout_total(&rule, &f).unwrap();
            Some((verify_pushout_bounded(&rule, &f, &po, OracleOptions::default()), format!("po {rule} / {f}")))
        })
    }

    pub fn spo(n: usize, seed: u64) -> OracleTally {
        run_oracle(n, seed, |r| {
            let (rule, f, _) = spo_instance(r);
            let res = spo_pushout(&rule, &f).unwrap()?;
            Some((
                verify_partial_pushout_bounded(&rule, &f, &res, OracleOptions::default()),
                format!("spo {f}"),
            ))
        })
    }

    pub fn poc(n: usize, seed: u64) -> OracleTally {
        run_oracle(n, seed, |r| {
            let (l, f, _) = inverse_instance(r, true, false);
            let pc = pushout_complement(&l, &f).unwrap()?;
            Some((verify_poc_bounded(&l, &f, &pc.l1, &pc.g, OracleOptions::default()), format!("poc {l} / {f}")))
        })
    }

    pub fn fpbc1(n: usize, seed: u64) -> OracleTally {
        run_oracle(n, seed, |r| {
            let (l, f, _) = inverse_instance(r, true, false);
            let pc = fpbc_left_linear(&l, &f).unwrap()?;
            Some((verify_fpbc_bounded(&l, &f, &pc.l1, &pc.g, OracleOptions::default()), format!("fpbc1 {l} / {f}")))
        })
    }

    pub fn fpbc2(n: usize, seed: u64) -> OracleTally {
        run_oracle(n, seed, |r| {
            let (l, f, _) = inverse_instance(r, false, true);
            let pc = fpbc_monic_match(&l, &f).unwrap();
            Some((verify_fpbc_bounded(&l, &f, &pc.l1, &pc.g, OracleOptions::default()), format!("fpbc2 {l} / {f}")))
        })
    }

    pub fn hpo(n: usize, seed: u64) -> OracleTally {
        run_oracle(n, seed, |r| {
            let (rule, f, _) = hpo_instance(r);
            let res = hpo_pushout(&rule, &f).unwrap();
            Some((
                verify_initial_cocone_bounded(&rule, &f, res.rho1.morphism(), &res.g, OracleOptions::default()),
                format!("hpo {} / {}", rule.lhs(), f.target()),
            ))
        })
    }
}

// ---------------------------------------------------------------------
// Two routes: a span system against its composition of two stages.

#[derive(Debug, Default)]
pub struct RouteTally {
    pub both_defined: usize,
    pub both_undefined: usize,
    pub disagreements: Vec<String>,
}

impl RouteTally {
    pub fn total(&self) -> usize {
        self.both_defined + self.both_undefined + self.disagreements.len()
    }
}

/// Runs `S_ρ(f)` directly and through the composite of the complement
/// system and the pushout system, on `n` random instances. Agreement means
/// both undefined, or both defined with equivalent squares and the second
/// stage matched along the right leg of the first.
pub fn two_routes(kind: SpanKind, n: usize, seed: u64) -> RouteTally {
    use catrw::dpo::PocSystem;
    use catrw::pushout::PushoutSystem;
    use catrw::span::SpanSquare;
    use catrw::sqpo::{Fpbc1System, Fpbc2System};
    use catrw::system::{compose_systems, rewrite_step, ComposedRule, Step};

    fn composite<A>(first: A, span: &Span, f: &TotalMorphism) -> catrw::Result<Step<SpanSquare>>
    where
        A: RewriteSystem<
            Rule = TotalMorphism,
            Match = TotalMorphism,
            RMatch = TotalMorphism,
            LObject = Arc<Graph>,
            RObject = Arc<Graph>,
            Square = catrw::pushout::TotalSquare,
        >,
    {
        let sys = compose_systems(first, PushoutSystem);
        let rule = ComposedRule {
            first: span.l.clone(),
            second: span.r.clone(),
        };
        Ok(match rewrite_step(&sys, &rule, f)? {
            Step::Defined(sq) => {
                if sq.second.left != sq.first.right {
                    return Err(catrw::RewriteError::Other("second stage not matched along the first's right leg".into()));
                }
                Step::Defined(SpanSquare::from_composed(&sq)?)
            }
            Step::Undefined(why) => Step::Undefined(why),
        })
    }

    let direct_sys = span_system(kind);
    let mut r = rng(seed);
    let mut tally = RouteTally::default();
    while tally.total() < n {
        let (span, f, _) = span_instance(&mut r, kind);
        let direct = rewrite_step(&direct_sys, &span, &f).unwrap();
        let composed = match kind {
            SpanKind::Dpo => composite(PocSystem, &span, &f),
            SpanKind::Sqpo1 => composite(Fpbc1System, &span, &f),
            SpanKind::Sqpo2 => composite(Fpbc2System, &span, &f),
        }
        .unwrap();
        match (direct, composed) {
            (Step::Undefined(_), Step::Undefined(_)) => tally.both_undefined += 1,
            (Step::Defined(a), Step::Defined(b)) if direct_sys.squares_equivalent(&a, &b) => tally.both_defined += 1,
            (a, b) => tally.disagreements.push(format!(
                "{kind} at {f}: direct {}, composed {}",
                if a.is_defined() { "defined" } else { "undefined" },
                if b.is_defined() { "defined" } else { "undefined" }
            )),
        }
    }
    tally
}

// ---------------------------------------------------------------------
// Structural postconditions.

#[derive(Debug, Default)]
pub struct PostTally {
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<String>,
}

/// Every defined SPO step has a total right leg and a partially monic
/// bottom rule.
pub fn spo_postconditions(n: usize, seed: u64) -> PostTally {
    use catrw::spo::spo_step;
    use catrw::system::Step;
    let mut r = rng(seed);
    let mut t = PostTally::default();
    while t.checked < n {
        let (rule, f, _) = spo_instance(&mut r);
        let Step::Defined(sq) = spo_step(&rule, &f).unwrap() else {
            t.skipped += 1;
            continue;
        };
        t.checked += 1;
        let g = &sq.right;
        let total = g.source().nodes().iter().all(|x| g.node_map().contains_key(x))
            && g.source().edges().keys().all(|x| g.edge_map().contains_key(x))
            && g.source().as_ref() == rule.target().as_ref();
        if !total {
            t.violations.push(format!("right leg not total at {f}"));
        }
        if !sq.bottom.is_partial_mono() {
            t.violations.push(format!("bottom rule not a partial mono at {f}"));
        }
    }
    t
}

/// Every pushout complement is `L1 − f(L − l(K))` item for item, and the
/// pushout of `l` and the complement leg gives `L1` back up to iso.
pub fn poc_postconditions(n: usize, seed: u64) -> PostTally {
    use catrw::dpo::pushout_complement;
    use catrw::homs::is_isomorphic;
    use catrw::pushout::pushout_total;
    use std::collections::BTreeSet;
    let mut r = rng(seed);
    let mut t = PostTally::default();
    while t.checked < n {
        let (l, f, _) = inverse_instance(&mut r, true, false);
        let Some(pc) = pushout_complement(&l, &f).unwrap() else {
            t.skipped += 1;
            continue;
        };
        t.checked += 1;
        let (lk_n, lk_e) = (l.image_nodes(), l.image_edges());
        let gone_n: BTreeSet<_> = l.target().nodes().iter().filter(|x| !lk_n.contains(*x)).map(|x| f.node(x).clone()).collect();
        let gone_e: BTreeSet<_> = l.target().edges().keys().filter(|x| !lk_e.contains(*x)).map(|x| f.edge(x).clone()).collect();
        let l1 = f.target();
        let want_n: BTreeSet<_> = l1.nodes().iter().filter(|x| !gone_n.contains(*x)).cloned().collect();
        let want_e: BTreeSet<_> = l1.edges().keys().filter(|x| !gone_e.contains(*x)).cloned().collect();
        let got_n: BTreeSet<_> = pc.object.nodes().iter().cloned().collect();
        let got_e: BTreeSet<_> = pc.object.edges().keys().cloned().collect();
        if got_n != want_n || got_e != want_e {
            t.violations.push(format!("K1 = {} differs from L1 − f(L − l(K)) at {f}", pc.object));
        }
        if !pc.l1.is_inclusion() || pc.l1.target().as_ref() != l1.as_ref() {
            t.violations.push(format!("K1 → L1 is not the inclusion at {f}"));
        }
        let back = pushout_total(&l, &pc.g).unwrap();
        if !is_isomorphic(&back.object, l1) {
            t.violations.push(format!("pushout of l and g is {} rather than L1 at {f}", back.object));
        }
    }
    t
}

// ---------------------------------------------------------------------
// Mutants: each construction with one junk item added. None of them may
// pass its oracle.

pub mod mutants {
    use std::collections::BTreeMap;

    use super::*;
    use catrw::graph::NodeId;
    use catrw::hpo::{HeteroMorphism, HpoResult};
    use catrw::oracle::OracleOptions;
    use catrw::pushout::Pushout;
    use catrw::spo::SpoResult;
    use catrw::termgraph::{TermGraph, TermPartialMorphism};

    const JUNK: &str = "junk#";

    fn with_junk(g: &Graph) -> Arc<Graph> {
        let mut nodes = g.nodes().clone();
        nodes.insert(NodeId::from(JUNK));
        Arc::new(Graph::new(nodes, g.edges().clone()).unwrap())
    }

    pub fn pushout(po: &Pushout) -> Pushout {
        let object = with_junk(&po.object);
        Pushout {
            rho1: po.rho1.with_target(object.clone()).unwrap(),
            g: po.g.with_target(object.clone()).unwrap(),
            object,
        }
    }

    pub fn spo(res: &SpoResult) -> SpoResult {
        let object = with_junk(&res.object);
        SpoResult {
            r1: PartialMorphism::new(
                res.r1.source().clone(),
                object.clone(),
                res.r1.domain().clone(),
                res.r1.node_map().clone(),
                res.r1.edge_map().clone(),
            )
            .unwrap(),
            g: res.g.with_target(object.clone()).unwrap(),
            object,
        }
    }

    /// A junk node of `K1` over the first node of `L1`; `None` when `L1`
    /// has no nodes.
    pub fn complement(l1: &TotalMorphism, g: &TotalMorphism) -> Option<(TotalMorphism, TotalMorphism)> {
        let v = l1.target().nodes().iter().next()?.clone();
        let object = with_junk(l1.source());
        let mut nodes = l1.node_map().clone();
        nodes.insert(NodeId::from(JUNK), v);
        Some((
            TotalMorphism::new(object.clone(), l1.target().clone(), nodes, l1.edge_map().clone()).unwrap(),
            g.with_target(object).unwrap(),
        ))
    }

    pub fn hpo(res: &HpoResult) -> (HeteroMorphism, TermMorphism) {
        let mut entries: BTreeMap<_, _> = res.object.entries().clone();
        entries.insert(NodeId::from(JUNK), None);
        let h = Arc::new(TermGraph::new(res.object.signature().clone(), entries).unwrap());
        let (tau, sigma) = (res.rho1.tau(), res.rho1.sigma());
        let tau = TermPartialMorphism::new(tau.source().clone(), h.clone(), tau.map().clone(), tau.structured().clone()).unwrap();
        let sigma = TermPartialMorphism::bare(h.clone(), sigma.target().clone(), sigma.map().clone()).unwrap();
        let g = TermMorphism::new(res.g.source().clone(), h, res.g.map().clone()).unwrap();
        (HeteroMorphism::new(tau, sigma).unwrap(), g)
    }

    #[derive(Debug, Default, Clone)]
    pub struct MutantTally {
        pub rejected: usize,
        pub accepted: Vec<String>,
    }

    impl MutantTally {
        fn record(&mut self, v: catrw::Result<catrw::oracle::VerificationVerdict>, what: impl FnOnce() -> String) {
            match v {
                Ok(v) if !v.ok => self.rejected += 1,
                Ok(_) => self.accepted.push(what()),
                Err(e) => self.accepted.push(format!("{}: error {e}", what())),
            }
        }
    }

    /// Mutates `n` random constructions of each kind and runs the oracle.
    pub fn run(n: usize, seed: u64) -> BTreeMap<&'static str, MutantTally> {
        use catrw::dpo::pushout_complement;
        use catrw::hpo::hpo_pushout;
        use catrw::oracle::{
            verify_fpbc_bounded, verify_initial_cocone_bounded, verify_partial_pushout_bounded, verify_poc_bounded,
            verify_pushout_bounded,
        };
        use catrw::pushout::pushout_total;
        use catrw::spo::spo_pushout;
        use catrw::sqpo::{fpbc_left_linear, fpbc_monic_match};

        // The junk node must leave the candidate within the oracle's cap.
        let room = |nodes: usize| nodes < catrw::oracle::CAP_NODES;
        let opts = OracleOptions::default();
        let mut r = rng(seed);
        let mut out: BTreeMap<&'static str, MutantTally> = BTreeMap::new();
        let done = |out: &BTreeMap<&'static str, MutantTally>, k: &str| {
            out.get(k).map_or(0, |t| t.rejected + t.accepted.len()) >= n
        };
        let mut tries = 0;
        while ["po", "spo", "poc", "fpbc1", "fpbc2", "hpo"].iter().any(|k| !done(&out, k)) && tries < 50 * n {
            tries += 1;
            if !done(&out, "po") {
                let (rule, f, _) = po_instance(&mut r);
                let base = pushout_total(&rule, &f).unwrap();
                if room(base.object.node_count()) {
                    let m = pushout(&base);
                    out.entry("po").or_default().record(verify_pushout_bounded(&rule, &f, &m, opts), || format!("po {rule} / {f}"));
                }
            }
            if !done(&out, "spo") {
                let (rule, f, _) = spo_instance(&mut r);
                if let Some(res) = spo_pushout(&rule, &f).unwrap().filter(|res| room(res.object.node_count())) {
                    let m = spo(&res);
                    out.entry("spo").or_default().record(verify_partial_pushout_bounded(&rule, &f, &m, opts), || format!("spo {f}"));
                }
            }
            if !done(&out, "poc") {
                let (l, f, _) = inverse_instance(&mut r, true, false);
                if let Some((l1, g)) = pushout_complement(&l, &f).unwrap().filter(|pc| room(pc.l1.source().node_count())).and_then(|pc| complement(&pc.l1, &pc.g)) {
                    out.entry("poc").or_default().record(verify_poc_bounded(&l, &f, &l1, &g, opts), || format!("poc {l} / {f}"));
                }
            }
            if !done(&out, "fpbc1") {
                let (l, f, _) = inverse_instance(&mut r, true, false);
                if let Some((l1, g)) = fpbc_left_linear(&l, &f).unwrap().filter(|pc| room(pc.l1.source().node_count())).and_then(|pc| complement(&pc.l1, &pc.g)) {
                    out.entry("fpbc1").or_default().record(verify_fpbc_bounded(&l, &f, &l1, &g, opts), || format!("fpbc1 {l} / {f}"));
                }
            }
            if !done(&out, "fpbc2") {
                let (l, f, _) = inverse_instance(&mut r, false, true);
                let pc = fpbc_monic_match(&l, &f).unwrap();
                if let Some((l1, g)) = Some(pc).filter(|pc| room(pc.l1.source().node_count())).and_then(|pc| complement(&pc.l1, &pc.g)) {
                    out.entry("fpbc2").or_default().record(verify_fpbc_bounded(&l, &f, &l1, &g, opts), || format!("fpbc2 {l} / {f}"));
                }
            }
            if !done(&out, "hpo") {
                let (rule, f, _) = hpo_instance(&mut r);
                let base = hpo_pushout(&rule, &f).unwrap();
                if room(base.object.node_count()) {
                    let (rho1, g) = hpo(&base);
                    out.entry("hpo").or_default().record(verify_initial_cocone_bounded(&rule, &f, &rho1, &g, opts), || {
                        format!("hpo {} / {}", rule.lhs(), f.target())
                    });
                }
            }
        }
        out
    }
}
