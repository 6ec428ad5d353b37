//! Command-line front end.
//!
//! Exit status: 0 when every checked property holds (or the step is
//! defined), 1 when something fails or is undefined, 2 on errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Deserialize;

use crate::dot::{graph_to_dot, termgraph_to_dot};
use crate::dpo::{pushout_complement, PocSystem};
use crate::error::RewriteError;
use crate::gc::{reproduce_counterexample, GcSystem, LGR, RGR};
use crate::graph::Graph;
use crate::hpo::{hpo_pushout, HpoSystem};
use crate::io::{self, LoadError, Loader};
use crate::oracle::{
    verify_fpbc_bounded, verify_initial_cocone_bounded, verify_partial_pushout_bounded, verify_poc_bounded,
    verify_pushout_bounded, OracleOptions, VerificationVerdict,
};
use crate::pushout::{pushout_total, Pushout, PushoutSystem};
use crate::sample::{self, Triple};
use crate::span::{SpanKind, SpanSquare, SpanSystem};
use crate::spo::{spo_pushout, SpoResult, SpoSystem};
use crate::sqpo::{fpbc_left_linear, fpbc_monic_match, Fpbc1System, Fpbc2System, PullbackComplement};
use crate::system::{
    check_functoriality_composition, check_functoriality_identity, compose_systems, rewrite_step, ComposedRule,
    CompositionVerdict, RewriteSystem, Step,
};
use crate::termgraph::TermGraph;

/// Environment variable holding the default oracle bound.
pub const BOUND_ENV: &str = "CATRW_BOUND";

#[derive(Debug, Parser)]
#[command(name = "catrw", version, about = "Categorical rewriting of graphs and termgraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Oracle cap: largest alternative object considered.
    #[arg(long, global = true, env = BOUND_ENV)]
    pub bound: Option<usize>,
    /// Seed for sampled suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Oracles also range over every small graph up to the bound.
    #[arg(long, global = true)]
    pub exhaustive: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemName {
    Spo,
    Dpo,
    Sqpo1,
    Sqpo2,
    Hpo,
    Po,
    Poc,
    Fpbc1,
    Fpbc2,
    Lgr,
    Rgr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FirstStage {
    Poc,
    Fpbc1,
    Fpbc2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SecondStage {
    Po,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a rule at a match.
    Step {
        #[arg(long, value_enum)]
        system: SystemName,
        #[arg(long)]
        rule: PathBuf,
        #[arg(long = "match")]
        matching: PathBuf,
        /// Write the derived object to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Run a derivation script.
    Derive {
        script: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check the identity and composition laws, on sampled instances or on
    /// a given rule with two composable matches.
    Functoriality {
        #[arg(long, value_enum)]
        system: SystemName,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, requires_all = ["first", "second"])]
        rule: Option<PathBuf>,
        #[arg(long, requires = "rule")]
        first: Option<PathBuf>,
        #[arg(long, requires = "rule")]
        second: Option<PathBuf>,
    },
    /// Check the universal property of a construction with the oracle.
    Verify {
        #[arg(long, value_enum)]
        system: SystemName,
        #[arg(long)]
        rule: PathBuf,
        #[arg(long = "match")]
        matching: PathBuf,
        /// Candidate leg out of the match target (po: L1 → X, spo: L1 ⇀ X,
        /// poc/fpbc: K1 → L1). Computed when omitted.
        #[arg(long, requires = "leg2")]
        leg1: Option<PathBuf>,
        /// Candidate leg out of the rule (po/spo: R → X, poc/fpbc: K → K1).
        #[arg(long, requires = "leg1")]
        leg2: Option<PathBuf>,
    },
    /// Garbage removal.
    Gc {
        #[command(subcommand)]
        command: GcCommand,
    },
    /// Run a span rule through a complement system followed by the
    /// pushout system, and cross-check against the direct route.
    Compose {
        #[arg(long, value_enum)]
        first: FirstStage,
        #[arg(long, value_enum, default_value_t = SecondStage::Po)]
        second: SecondStage,
        #[arg(long)]
        rule: PathBuf,
        #[arg(long = "match")]
        matching: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum GcCommand {
    /// The composition law on `{a} ⊆ L1 ⊆ L2` for both systems.
    Counterexample,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Load(#[from] LoadError),
    #[error("{context}: {source}")]
    Rewrite { context: String, source: RewriteError },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn rewrite(context: impl Into<String>) -> impl FnOnce(RewriteError) -> CliError {
        let context = context.into();
        move |source| CliError::Rewrite { context, source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Output of a command: text for stdout and whether everything held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub output: String,
    pub ok: bool,
}

// ---------------------------------------------------------------------
// Per-system plumbing.

trait Object {
    fn json(&self) -> String;
    fn dot(&self, name: &str) -> String;
    fn summary(&self) -> String;
}

impl Object for Arc<Graph> {
    fn json(&self) -> String {
        io::graph_to_json(self)
    }

    fn dot(&self, name: &str) -> String {
        graph_to_dot(self, name)
    }

    fn summary(&self) -> String {
        format!("{self} ({} nodes, {} edges)", self.node_count(), self.edge_count())
    }
}

impl Object for Arc<TermGraph> {
    fn json(&self) -> String {
        io::termgraph_to_json(self)
    }

    fn dot(&self, name: &str) -> String {
        termgraph_to_dot(self, name)
    }

    fn summary(&self) -> String {
        format!("{self} ({} nodes)", self.node_count())
    }
}

trait CliSystem: RewriteSystem {
    type Obj: Object;

    fn load_rule(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Self::Rule>;
    fn load_match(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Self::Match>;
    fn load_object(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Self::Obj>;
    fn match_target(&self, f: &Self::Match) -> Self::Obj;
    fn derived(&self, sq: &Self::Square) -> Self::Obj;
    fn sample(&self, rng: &mut StdRng) -> Triple<Self::Rule, Self::Match>;
}

macro_rules! graph_system {
    ($ty:ty, $rule:ident, $matching:ident, $sample:expr) => {
        impl CliSystem for $ty {
            type Obj = Arc<Graph>;

            fn load_rule(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Self::Rule> {
                loader.$rule(path)
            }

            fn load_match(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Self::Match> {
                loader.$matching(path)
            }

            fn load_object(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Arc<Graph>> {
                loader.graph(path)
            }

            fn match_target(&self, f: &Self::Match) -> Arc<Graph> {
                graph_system!(@target f, $matching)
            }

            fn derived(&self, sq: &Self::Square) -> Arc<Graph> {
                self.rhs(&self.bottom(sq))
            }

            fn sample(&self, rng: &mut StdRng) -> Triple<Self::Rule, Self::Match> {
                let sample: fn(&Self, &mut StdRng) -> Triple<Self::Rule, Self::Match> = $sample;
                sample(self, rng)
            }
        }
    };
    (@target $f:ident, total) => { $f.target().clone() };
    (@target $f:ident, inclusion) => { $f.sup().clone() };
}

graph_system!(PushoutSystem, total, total, |_s, r| sample::po_triple(r));
graph_system!(SpoSystem, partial, total, |_s, r| sample::spo_triple(r));
graph_system!(PocSystem, total, total, |_s, r| sample::inverse_triple(r, true, false));
graph_system!(Fpbc1System, total, total, |_s, r| sample::inverse_triple(r, true, false));
graph_system!(Fpbc2System, total, total, |_s, r| sample::inverse_triple(r, false, true));
graph_system!(GcSystem, inclusion, inclusion, |_s, r| sample::gc_triple(r));
graph_system!(SpanSystem, span, total, |s, r| sample::span_triple(r, s.kind));

impl CliSystem for HpoSystem {
    type Obj = Arc<TermGraph>;

    fn load_rule(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Self::Rule> {
        loader.hpo_rule(path)
    }

    fn load_match(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Self::Match> {
        loader.term_morphism(path)
    }

    fn load_object(&self, loader: &mut Loader, path: &Path) -> io::LoadResult<Arc<TermGraph>> {
        loader.termgraph(path)
    }

    fn match_target(&self, f: &Self::Match) -> Arc<TermGraph> {
        f.target().clone()
    }

    fn derived(&self, sq: &Self::Square) -> Arc<TermGraph> {
        self.rhs(&self.bottom(sq))
    }

    fn sample(&self, rng: &mut StdRng) -> Triple<Self::Rule, Self::Match> {
        sample::hpo_triple(rng)
    }
}

/// A command generic over the selected system.
trait Visitor {
    fn visit<S: CliSystem>(self, sys: &S) -> CliResult<RunReport>;
}

fn dispatch(name: SystemName, v: impl Visitor) -> CliResult<RunReport> {
    match name {
        SystemName::Spo => v.visit(&SpoSystem),
        SystemName::Dpo => v.visit(&SpanSystem::new(SpanKind::Dpo)),
        SystemName::Sqpo1 => v.visit(&SpanSystem::new(SpanKind::Sqpo1)),
        SystemName::Sqpo2 => v.visit(&SpanSystem::new(SpanKind::Sqpo2)),
        SystemName::Hpo => v.visit(&HpoSystem),
        SystemName::Po => v.visit(&PushoutSystem),
        SystemName::Poc => v.visit(&PocSystem),
        SystemName::Fpbc1 => v.visit(&Fpbc1System),
        SystemName::Fpbc2 => v.visit(&Fpbc2System),
        SystemName::Lgr => v.visit(&LGR),
        SystemName::Rgr => v.visit(&RGR),
    }
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", show(p))))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------
// step

struct StepCmd<'a> {
    rule: &'a Path,
    matching: &'a Path,
    emit: Option<&'a Path>,
    format: Format,
}

impl Visitor for StepCmd<'_> {
    fn visit<S: CliSystem>(self, sys: &S) -> CliResult<RunReport> {
        let mut loader = Loader::new();
        let rule = sys.load_rule(&mut loader, self.rule)?;
        let f = sys.load_match(&mut loader, self.matching)?;
        let context = format!("{} at {}", show(self.rule), show(self.matching));
        let step = rewrite_step(sys, &rule, &f).map_err(CliError::rewrite(context))?;
        let mut out = String::new();
        match step {
            Step::Undefined(why) => {
                let _ = writeln!(out, "{}: undefined: {why}", sys.name());
                Ok(RunReport { output: out, ok: false })
            }
            Step::Defined(sq) => {
                let d = sys.derived(&sq);
                emit(self.emit, &d.json())?;
                match self.format {
                    Format::Dot => out.push_str(&d.dot("derived")),
                    Format::Text => {
                        let _ = writeln!(out, "{}: defined", sys.name());
                        let _ = writeln!(out, "derived: {}", d.summary());
                        out.push_str(&d.json());
                    }
                }
                Ok(RunReport { output: out, ok: true })
            }
        }
    }
}

// ---------------------------------------------------------------------
// derive

/// A derivation: the system, the input object and the steps in order.
/// Each match must land on the object produced by the previous step.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationScript {
    pub system: String,
    pub input: String,
    pub steps: Vec<ScriptStep>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptStep {
    pub rule: String,
    #[serde(rename = "match")]
    pub matching: String,
}

struct DeriveCmd<'a> {
    script: &'a Path,
    doc: DerivationScript,
    emit: Option<&'a Path>,
    format: Format,
}

impl Visitor for DeriveCmd<'_> {
    fn visit<S: CliSystem>(self, sys: &S) -> CliResult<RunReport> {
        let base = self.script.parent().map(Path::to_path_buf).unwrap_or_default();
        let mut loader = Loader::new();
        let mut current = sys.load_object(&mut loader, &base.join(&self.doc.input))?;
        let mut out = String::new();
        for (i, s) in self.doc.steps.iter().enumerate() {
            let (rp, mp) = (base.join(&s.rule), base.join(&s.matching));
            let rule = sys.load_rule(&mut loader, &rp)?;
            let f = sys.load_match(&mut loader, &mp)?;
            if sys.match_target(&f).json() != current.json() {
                return Err(CliError::Usage(format!(
                    "{}: step {}: the match does not land on the current object {}",
                    show(&mp),
                    i + 1,
                    current.summary()
                )));
            }
            let context = format!("{}: step {}", show(self.script), i + 1);
            match rewrite_step(sys, &rule, &f).map_err(CliError::rewrite(context))? {
                Step::Undefined(why) => {
                    let _ = writeln!(out, "step {}: undefined: {why}", i + 1);
                    return Ok(RunReport { output: out, ok: false });
                }
                Step::Defined(sq) => {
                    current = sys.derived(&sq);
                    let _ = writeln!(out, "step {}: {}", i + 1, current.summary());
                }
            }
        }
        emit(self.emit, &current.json())?;
        match self.format {
            Format::Dot => out = current.dot("derived"),
            Format::Text => out.push_str(&current.json()),
        }
        Ok(RunReport { output: out, ok: true })
    }
}

fn parse_system(name: &str) -> Option<SystemName> {
    SystemName::from_str(name, true).ok()
}

// ---------------------------------------------------------------------
// functoriality

struct FunctorialityCmd<'a> {
    count: usize,
    seed: u64,
    replay: Option<(&'a Path, &'a Path, &'a Path)>,
    format: Format,
}

fn verdict_line<S: CliSystem>(sys: &S, v: &CompositionVerdict<S::Square>, format: Format) -> String {
    match v {
        CompositionVerdict::Holds { two_step, .. } => {
            format!("composition: holds; derived {}\n", sys.derived(two_step).summary())
        }
        CompositionVerdict::Inapplicable(why) => format!("composition: inapplicable: {why}\n"),
        CompositionVerdict::Fails { two_step, one_step, domain_violation } => {
            let mut s = String::from("composition: fails");
            if *domain_violation {
                s.push_str(" (composite match outside the domain)");
            }
            let two = sys.derived(two_step);
            let _ = write!(s, "\ntwo-step: {}\n", two.summary());
            match one_step {
                Some(sq) => {
                    let one = sys.derived(sq);
                    let _ = writeln!(s, "one-step: {}", one.summary());
                    if format == Format::Dot {
                        s.push_str(&two.dot("two_step"));
                        s.push_str(&one.dot("one_step"));
                    }
                }
                None => s.push_str("one-step: undefined\n"),
            }
            s
        }
    }
}

impl Visitor for FunctorialityCmd<'_> {
    fn visit<S: CliSystem>(self, sys: &S) -> CliResult<RunReport> {
        let mut out = String::new();
        if let Some((rp, p1, p2)) = self.replay {
            let mut loader = Loader::new();
            let rule = sys.load_rule(&mut loader, rp)?;
            let f1 = sys.load_match(&mut loader, p1)?;
            let f2 = sys.load_match(&mut loader, p2)?;
            let identity = check_functoriality_identity(sys, &rule);
            let context = format!("{} with {} then {}", show(rp), show(p1), show(p2));
            let v = check_functoriality_composition(sys, &rule, &f1, &f2).map_err(CliError::rewrite(context))?;
            let _ = writeln!(out, "{}: identity: {}", sys.name(), if identity { "holds" } else { "fails" });
            out.push_str(&verdict_line(sys, &v, self.format));
            return Ok(RunReport { output: out, ok: identity && !v.fails() });
        }
        let mut rng = StdRng::seed_from_u64(self.seed);
        let (mut id_fail, mut holds, mut inapplicable, mut fails, mut domain) = (0, 0, 0, 0, 0);
        let mut first_failure = None;
        for i in 0..self.count {
            let (rule, f1, f2) = sys.sample(&mut rng);
            if !check_functoriality_identity(sys, &rule) {
                id_fail += 1;
            }
            let v = check_functoriality_composition(sys, &rule, &f1, &f2)
                .map_err(CliError::rewrite(format!("sampled instance {}", i + 1)))?;
            match &v {
                CompositionVerdict::Holds { .. } => holds += 1,
                CompositionVerdict::Inapplicable(_) => inapplicable += 1,
                CompositionVerdict::Fails { domain_violation, .. } => {
                    fails += 1;
                    if *domain_violation {
                        domain += 1;
                    }
                    if first_failure.is_none() {
                        first_failure = Some(format!("instance {}: {}", i + 1, verdict_line(sys, &v, Format::Text)));
                    }
                }
            }
        }
        let _ = writeln!(out, "{}: {} sampled instances, seed {}", sys.name(), self.count, self.seed);
        let _ = writeln!(out, "identity: {} hold, {id_fail} fail", self.count - id_fail);
        let _ = writeln!(
            out,
            "composition: {holds} hold, {inapplicable} inapplicable, {fails} fail ({domain} outside the domain)"
        );
        if let Some(f) = first_failure {
            let _ = write!(out, "first failure: {f}");
        }
        Ok(RunReport { output: out, ok: id_fail == 0 && fails == 0 })
    }
}

// ---------------------------------------------------------------------
// verify

fn verdict_report(name: &str, stages: &[(&str, VerificationVerdict)]) -> RunReport {
    let mut out = String::new();
    for (stage, v) in stages {
        let _ = writeln!(out, "{name} {stage}: {v}");
    }
    RunReport { output: out, ok: stages.iter().all(|(_, v)| v.ok) }
}

fn undefined(name: &str, why: impl std::fmt::Display) -> RunReport {
    RunReport { output: format!("{name}: undefined: {why}\n"), ok: false }
}

struct VerifyArgs<'a> {
    system: SystemName,
    rule: &'a Path,
    matching: &'a Path,
    legs: Option<(&'a Path, &'a Path)>,
    opts: OracleOptions,
}

fn run_verify(a: VerifyArgs) -> CliResult<RunReport> {
    let mut loader = Loader::new();
    let ctx = format!("{} at {}", show(a.rule), show(a.matching));
    let err = |c: &str| CliError::rewrite(c.to_owned());
    let opts = a.opts;
    match a.system {
        SystemName::Po => {
            let rule = loader.total(a.rule)?;
            let f = loader.total(a.matching)?;
            let po = match a.legs {
                Some((p1, p2)) => {
                    let (rho1, g) = (loader.total(p1)?, loader.total(p2)?);
                    Pushout { object: rho1.target().clone(), rho1, g }
                }
                None => pushout_total(&rule, &f).map_err(err(&ctx))?,
            };
            Ok(verdict_report("po", &[("pushout", verify_pushout_bounded(&rule, &f, &po, opts).map_err(err(&ctx))?)]))
        }
        SystemName::Spo => {
            let rule = loader.partial(a.rule)?;
            let f = loader.total(a.matching)?;
            let res = match a.legs {
                Some((p1, p2)) => {
                    let (r1, g) = (loader.partial(p1)?, loader.total(p2)?);
                    SpoResult { object: r1.target().clone(), r1, g }
                }
                None => match spo_pushout(&rule, &f).map_err(err(&ctx))? {
                    Some(res) => res,
                    None => return Ok(undefined("spo", "the match is not conflict-free")),
                },
            };
            let v = verify_partial_pushout_bounded(&rule, &f, &res, opts).map_err(err(&ctx))?;
            Ok(verdict_report("spo", &[("pushout", v)]))
        }
        SystemName::Poc | SystemName::Fpbc1 | SystemName::Fpbc2 => {
            let l = loader.total(a.rule)?;
            let f = loader.total(a.matching)?;
            let pc = match a.legs {
                Some((p1, p2)) => {
                    let (l1, g) = (loader.total(p1)?, loader.total(p2)?);
                    PullbackComplement { object: l1.source().clone(), l1, g }
                }
                None => {
                    let found = match a.system {
                        SystemName::Poc => pushout_complement(&l, &f)
                            .map_err(err(&ctx))?
                            .map(|p| PullbackComplement { object: p.object, l1: p.l1, g: p.g }),
                        SystemName::Fpbc1 => fpbc_left_linear(&l, &f).map_err(err(&ctx))?,
                        _ => Some(fpbc_monic_match(&l, &f).map_err(err(&ctx))?),
                    };
                    match found {
                        Some(pc) => pc,
                        None => return Ok(undefined(&format!("{:?}", a.system).to_lowercase(), "no complement")),
                    }
                }
            };
            let (name, v) = if a.system == SystemName::Poc {
                ("poc", verify_poc_bounded(&l, &f, &pc.l1, &pc.g, opts))
            } else {
                let name = if a.system == SystemName::Fpbc1 { "fpbc1" } else { "fpbc2" };
                (name, verify_fpbc_bounded(&l, &f, &pc.l1, &pc.g, opts))
            };
            Ok(verdict_report(name, &[("complement", v.map_err(err(&ctx))?)]))
        }
        SystemName::Dpo | SystemName::Sqpo1 | SystemName::Sqpo2 => {
            if a.legs.is_some() {
                return Err(CliError::Usage("span systems take no candidate legs; verify each stage instead".into()));
            }
            let kind = match a.system {
                SystemName::Dpo => SpanKind::Dpo,
                SystemName::Sqpo1 => SpanKind::Sqpo1,
                _ => SpanKind::Sqpo2,
            };
            let span = loader.span(a.rule)?;
            let f = loader.total(a.matching)?;
            let sys = SpanSystem::new(kind);
            let sq = match rewrite_step(&sys, &span, &f).map_err(err(&ctx))? {
                Step::Defined(sq) => sq,
                Step::Undefined(why) => return Ok(undefined(&kind.to_string(), why)),
            };
            let first = if kind == SpanKind::Dpo {
                verify_poc_bounded(&span.l, &f, &sq.bottom.l, &sq.middle, opts)
            } else {
                verify_fpbc_bounded(&span.l, &f, &sq.bottom.l, &sq.middle, opts)
            }
            .map_err(err(&ctx))?;
            let po = Pushout { object: sq.derived().clone(), rho1: sq.bottom.r.clone(), g: sq.right.clone() };
            let second = verify_pushout_bounded(&span.r, &sq.middle, &po, opts).map_err(err(&ctx))?;
            Ok(verdict_report(&kind.to_string(), &[("complement", first), ("pushout", second)]))
        }
        SystemName::Hpo => {
            if a.legs.is_some() {
                return Err(CliError::Usage("hpo candidates are computed; omit --leg1/--leg2".into()));
            }
            let rule = loader.hpo_rule(a.rule)?;
            let f = loader.term_morphism(a.matching)?;
            let res = hpo_pushout(&rule, &f).map_err(err(&ctx))?;
            let v = verify_initial_cocone_bounded(&rule, &f, res.rho1.morphism(), &res.g, opts).map_err(err(&ctx))?;
            Ok(verdict_report("hpo", &[("initial cocone", v)]))
        }
        SystemName::Lgr | SystemName::Rgr => {
            Err(CliError::Usage("garbage removal is not a universal construction; there is no oracle for it".into()))
        }
    }
}

// ---------------------------------------------------------------------
// compose

fn run_compose(first: FirstStage, rule: &Path, matching: &Path, format: Format) -> CliResult<RunReport> {
    let mut loader = Loader::new();
    let span = loader.span(rule)?;
    let f = loader.total(matching)?;
    let ctx = format!("{} at {}", show(rule), show(matching));
    let composed_rule = ComposedRule { first: span.l.clone(), second: span.r.clone() };
    let (kind, composed) = match first {
        FirstStage::Poc => (SpanKind::Dpo, run_composed(PocSystem, &composed_rule, &f)),
        FirstStage::Fpbc1 => (SpanKind::Sqpo1, run_composed(Fpbc1System, &composed_rule, &f)),
        FirstStage::Fpbc2 => (SpanKind::Sqpo2, run_composed(Fpbc2System, &composed_rule, &f)),
    };
    let (name, composed) = composed.map_err(CliError::rewrite(ctx.clone()))?;
    let direct_sys = SpanSystem::new(kind);
    let direct = rewrite_step(&direct_sys, &span, &f).map_err(CliError::rewrite(ctx))?;
    let mut out = String::new();
    let line = |out: &mut String, who: &str, s: &Step<SpanSquare>| match s {
        Step::Defined(sq) => {
            let _ = writeln!(out, "{who}: defined; derived {}", sq.derived().summary());
        }
        Step::Undefined(why) => {
            let _ = writeln!(out, "{who}: undefined: {why}");
        }
    };
    line(&mut out, &name, &composed);
    line(&mut out, &kind.to_string(), &direct);
    let agree = match (&composed, &direct) {
        (Step::Defined(a), Step::Defined(b)) => direct_sys.squares_equivalent(a, b),
        (Step::Undefined(_), Step::Undefined(_)) => true,
        _ => false,
    };
    let _ = writeln!(out, "routes agree: {}", if agree { "yes" } else { "no" });
    if let (Format::Dot, Step::Defined(sq)) = (format, &composed) {
        out.push_str(&sq.derived().dot("derived"));
    }
    Ok(RunReport { output: out, ok: agree })
}

fn run_composed<A>(first: A, rule: &ComposedRule<A::Rule, crate::morphism::TotalMorphism>, f: &crate::morphism::TotalMorphism) -> crate::Result<(String, Step<SpanSquare>)>
where
    A: RewriteSystem<
        LObject = Arc<Graph>,
        RObject = Arc<Graph>,
        Rule = crate::morphism::TotalMorphism,
        Match = crate::morphism::TotalMorphism,
        RMatch = crate::morphism::TotalMorphism,
        Square = crate::pushout::TotalSquare,
    >,
{
    let sys = compose_systems(first, PushoutSystem);
    let step = match rewrite_step(&sys, rule, f)? {
        Step::Defined(sq) => Step::Defined(SpanSquare::from_composed(&sq)?),
        Step::Undefined(why) => Step::Undefined(why),
    };
    Ok((sys.name(), step))
}

// ---------------------------------------------------------------------

pub fn run(cli: &Cli) -> CliResult<RunReport> {
    let g = &cli.global;
    let opts = OracleOptions { bound: g.bound, exhaustive: g.exhaustive, ..OracleOptions::default() };
    match &cli.command {
        Command::Step { system, rule, matching, emit } => dispatch(
            *system,
            StepCmd { rule, matching, emit: emit.as_deref(), format: g.format },
        ),
        Command::Derive { script, emit } => {
            let text = fs::read_to_string(script).map_err(|e| CliError::Usage(format!("{}: {e}", show(script))))?;
            let doc: io::Document<DerivationScript> = io::parse_document(&text, &show(script))?;
            let system = parse_system(&doc.raw.system)
                .ok_or_else(|| doc.fail(format!("unknown system `{}`", doc.raw.system), &["\"system\""]))?;
            dispatch(system, DeriveCmd { script, doc: doc.raw, emit: emit.as_deref(), format: g.format })
        }
        Command::Functoriality { system, count, rule, first, second } => {
            let replay = match (rule, first, second) {
                (Some(r), Some(a), Some(b)) => Some((r.as_path(), a.as_path(), b.as_path())),
                _ => None,
            };
            dispatch(*system, FunctorialityCmd { count: *count, seed: g.seed, replay, format: g.format })
        }
        Command::Verify { system, rule, matching, leg1, leg2 } => run_verify(VerifyArgs {
            system: *system,
            rule,
            matching,
            legs: leg1.as_deref().zip(leg2.as_deref()),
            opts,
        }),
        Command::Gc { command: GcCommand::Counterexample } => {
            let report = reproduce_counterexample().map_err(CliError::rewrite("gc counterexample"))?;
            let mut out = report.to_string();
            if g.format == Format::Dot {
                out = [&report.gr_a_l1, &report.gr_a_l2, &report.lgr.two_step]
                    .iter()
                    .zip(["gr_a_l1", "gr_a_l2", "lgr_two_step"])
                    .map(|(x, n)| graph_to_dot(x, n))
                    .collect();
            }
            Ok(RunReport { output: out, ok: report.as_expected() })
        }
        Command::Compose { first, second: SecondStage::Po, rule, matching } => {
            run_compose(*first, rule, matching, g.format)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with(cli: &Cli) -> u8 {
    let start = Instant::now();
    let result = run(cli);
    if cli.global.timings {
        eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    }
    match result {
        Ok(report) => {
            print!("{}", report.output);
            if report.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
