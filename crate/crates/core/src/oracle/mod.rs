//! Brute-force checks of universal properties on small instances.
//!
//! The checks enumerate cocones (or complements) into a bounded family of
//! targets and count mediating morphisms. Nothing here reuses the
//! constructions being checked: colimits needed as targets are computed by
//! a separate breadth-first closure.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Result, RewriteError};
use crate::graph::{Edge, EdgeId, Graph, NodeId};
use crate::homs::{consistent_map, for_each_hom, HomKind};
use crate::morphism::{EdgeMap, NodeMap, PartialMorphism, TotalMorphism};
use crate::pushout::Pushout;
use crate::termgraph::{Term, TermGraph};

mod indexed;
pub use indexed::{constraints, count_ix_homs, for_each_ix_hom, for_each_ix_hom_up_to_parallel, Fix, IxGraph};

/// Largest candidate the oracles accept.
pub const CAP_NODES: usize = 8;
pub const CAP_EDGES: usize = 12;
/// Largest universe of exhaustively generated targets.
pub const CAP_UNIVERSE: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub description: String,
    /// Mediating morphisms found (0: existence fails, ≥ 2: uniqueness).
    pub mediators: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationVerdict {
    pub ok: bool,
    pub counterexample: Option<Counterexample>,
}

impl VerificationVerdict {
    pub fn pass() -> Self {
        VerificationVerdict { ok: true, counterexample: None }
    }

    pub fn fail(description: impl Into<String>, mediators: usize) -> Self {
        VerificationVerdict {
            ok: false,
            counterexample: Some(Counterexample {
                description: description.into(),
                mediators,
            }),
        }
    }
}

impl fmt::Display for VerificationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "ok"),
            Some(c) => write!(f, "FAILED: {} ({} mediating morphisms)", c.description, c.mediators),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Largest target in nodes; `None` means derived size + 2.
    pub bound: Option<usize>,
    /// Also use every graph up to the bound as a target.
    pub exhaustive: bool,
    /// Edge cap for exhaustively generated targets.
    pub exhaustive_edges: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            bound: None,
            exhaustive: false,
            exhaustive_edges: 3,
        }
    }
}

impl OracleOptions {
    pub fn with_bound(bound: usize) -> Self {
        OracleOptions {
            bound: Some(bound),
            ..Default::default()
        }
    }

    pub fn bound_for(&self, derived_nodes: usize) -> usize {
        self.bound.unwrap_or(derived_nodes + 2)
    }
}

fn check_cap(g: &Graph) -> Result<()> {
    if g.node_count() > CAP_NODES || g.edge_count() > CAP_EDGES {
        return Err(RewriteError::CapExceeded(format!(
            "oracle input with {} nodes / {} edges exceeds {CAP_NODES} / {CAP_EDGES}",
            g.node_count(),
            g.edge_count()
        )));
    }
    Ok(())
}

fn arc_eq<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Equality of two total morphisms as maps.
fn same_maps(a: &TotalMorphism, b: &TotalMorphism) -> bool {
    a.node_map() == b.node_map() && a.edge_map() == b.edge_map()
}

// ---------------------------------------------------------------------
// Independent pushout by breadth-first closure.

/// The pushout of `a: K → A` and `b: K → B` computed as connected
/// components of the relation graph on `A ⊎ B`. Classes are named by
/// their sorted tagged members.
pub struct NaivePushout {
    pub object: Arc<Graph>,
    pub from_a: TotalMorphism,
    pub from_b: TotalMorphism,
}

fn components<T: Ord + Clone>(items: &[T], links: &[(T, T)]) -> BTreeMap<T, String>
where
    T: fmt::Display,
{
    let mut adj: BTreeMap<&T, Vec<&T>> = items.iter().map(|i| (i, Vec::new())).collect();
    for (x, y) in links {
        adj.get_mut(x).expect("linked item").push(y);
        adj.get_mut(y).expect("linked item").push(x);
    }
    let mut class: BTreeMap<T, String> = BTreeMap::new();
    for start in items {
        if class.contains_key(start) {
            continue;
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for y in &adj[x] {
                if seen.insert(*y) {
                    queue.push_back(*y);
                }
            }
        }
        let name = seen.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("=");
        for s in seen {
            class.insert(s.clone(), name.clone());
        }
    }
    class
}

pub fn naive_pushout(a: &TotalMorphism, b: &TotalMorphism) -> Result<NaivePushout> {
    if !arc_eq(a.source(), b.source()) {
        return Err(RewriteError::EndpointMismatch("pushout legs have different sources".into()));
    }
    let (ga, gb) = (a.target(), b.target());
    let tag = |side: char, s: &str| format!("{side}:{s}");
    let nodes: Vec<String> = ga
        .nodes()
        .iter()
        .map(|n| tag('a', n.as_str()))
        .chain(gb.nodes().iter().map(|n| tag('b', n.as_str())))
        .collect();
    let edges: Vec<String> = ga
        .edges()
        .keys()
        .map(|e| tag('a', e.as_str()))
        .chain(gb.edges().keys().map(|e| tag('b', e.as_str())))
        .collect();
    let k = a.source();
    let node_links: Vec<(String, String)> = k
        .nodes()
        .iter()
        .map(|x| (tag('a', a.node(x).as_str()), tag('b', b.node(x).as_str())))
        .collect();
    let edge_links: Vec<(String, String)> = k
        .edges()
        .keys()
        .map(|x| (tag('a', a.edge(x).as_str()), tag('b', b.edge(x).as_str())))
        .collect();
    let ncls = components(&nodes, &node_links);
    let ecls = components(&edges, &edge_links);

    let mut out_edges: BTreeMap<EdgeId, Edge> = BTreeMap::new();
    for (side, g) in [('a', ga), ('b', gb)] {
        for (id, e) in g.edges() {
            let edge = Edge {
                src: NodeId(ncls[&tag(side, e.src.as_str())].clone()),
                tgt: NodeId(ncls[&tag(side, e.tgt.as_str())].clone()),
            };
            let cid = EdgeId(ecls[&tag(side, id.as_str())].clone());
            if let Some(old) = out_edges.insert(cid, edge.clone()) {
                debug_assert_eq!(old, edge);
            }
        }
    }
    let out_nodes: BTreeSet<NodeId> = ncls.values().map(|c| NodeId(c.clone())).collect();
    let object = Arc::new(Graph::new(out_nodes, out_edges)?);
    let leg = |side: char, g: &Arc<Graph>| {
        TotalMorphism::new(
            g.clone(),
            object.clone(),
            g.nodes().iter().map(|n| (n.clone(), NodeId(ncls[&tag(side, n.as_str())].clone()))).collect(),
            g.edges().keys().map(|e| (e.clone(), EdgeId(ecls[&tag(side, e.as_str())].clone()))).collect(),
        )
    };
    Ok(NaivePushout {
        from_a: leg('a', ga)?,
        from_b: leg('b', gb)?,
        object,
    })
}

// ---------------------------------------------------------------------
// Target families.

/// Identifies node `b` with node `a`.
pub fn merge_nodes(g: &Graph, a: &NodeId, b: &NodeId) -> Graph {
    let ren = |n: &NodeId| if n == b { a.clone() } else { n.clone() };
    let nodes = g.nodes().iter().filter(|n| *n != b).cloned().collect();
    let edges = g
        .edges()
        .iter()
        .map(|(id, e)| (id.clone(), Edge { src: ren(&e.src), tgt: ren(&e.tgt) }))
        .collect();
    Graph::from_parts_unchecked(nodes, edges)
}

/// Identifies edge `b` with edge `a`, together with their endpoints.
pub fn merge_edges(g: &Graph, a: &EdgeId, b: &EdgeId) -> Graph {
    let (ea, eb) = (g.edge(a).expect("edge").clone(), g.edge(b).expect("edge").clone());
    let mut h = g.clone();
    let mut renamed: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let resolve = |renamed: &BTreeMap<NodeId, NodeId>, n: &NodeId| {
        let mut n = n.clone();
        while let Some(m) = renamed.get(&n) {
            n = m.clone();
        }
        n
    };
    for (x, y) in [(&ea.src, &eb.src), (&ea.tgt, &eb.tgt)] {
        let (x, y) = (resolve(&renamed, x), resolve(&renamed, y));
        if x != y {
            h = merge_nodes(&h, &x, &y);
            renamed.insert(y, x);
        }
    }
    let nodes = h.nodes().clone();
    let edges = h.edges().iter().filter(|(id, _)| *id != b).map(|(i, e)| (i.clone(), e.clone())).collect();
    Graph::from_parts_unchecked(nodes, edges)
}

fn fresh_node(g: &Graph) -> NodeId {
    (0..)
        .map(|i| NodeId(format!("x{i}")))
        .find(|n| !g.has_node(n))
        .expect("unbounded")
}

fn with_isolated_node(g: &Graph) -> Graph {
    let mut nodes = g.nodes().clone();
    nodes.insert(fresh_node(g));
    Graph::from_parts_unchecked(nodes, g.edges().clone())
}

fn single_loop() -> Graph {
    Graph::build(&["o"], &[("l", "o", "o")]).expect("loop graph")
}

/// Single-pair node and edge quotients of `g`.
pub fn elementary_quotients(g: &Graph) -> Vec<Graph> {
    let nodes: Vec<&NodeId> = g.nodes().iter().collect();
    let edges: Vec<&EdgeId> = g.edges().keys().collect();
    let mut out = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            out.push(merge_nodes(g, a, b));
        }
    }
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            out.push(merge_edges(g, a, b));
        }
    }
    out
}

/// Every graph with at most `max_nodes` nodes and `max_edges` edges, one
/// per multiset of endpoint pairs (not reduced up to isomorphism).
pub fn small_graphs(max_nodes: usize, max_edges: usize) -> Result<Vec<Graph>> {
    let mut total = 0usize;
    for n in 0..=max_nodes {
        let pairs = n * n;
        for e in 0..=max_edges {
            total = total.saturating_add(multisets(pairs, e));
        }
    }
    if total > CAP_UNIVERSE {
        return Err(RewriteError::CapExceeded(format!(
            "{total} exhaustive targets exceed {CAP_UNIVERSE}"
        )));
    }
    let mut out = Vec::with_capacity(total);
    for n in 0..=max_nodes {
        let names: Vec<NodeId> = (0..n).map(|i| NodeId(format!("v{i}"))).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (0..n).map(move |t| (s, t))).collect();
        let mut chosen: Vec<usize> = Vec::new();
        collect_multisets(&pairs, max_edges, 0, &mut chosen, &mut |sel| {
            let edges = sel
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let (s, t) = pairs[*p];
                    (EdgeId(format!("e{i}")), Edge { src: names[s].clone(), tgt: names[t].clone() })
                })
                .collect();
            out.push(Graph::from_parts_unchecked(names.iter().cloned().collect(), edges));
        });
    }
    Ok(out)
}

fn multisets(kinds: usize, size: usize) -> usize {
    if size == 0 {
        return 1;
    }
    if kinds == 0 {
        return 0;
    }
    // C(kinds + size - 1, size)
    let mut acc: usize = 1;
    for i in 0..size {
        acc = acc.saturating_mul(kinds + i) / (i + 1);
    }
    acc
}

fn collect_multisets(
    pairs: &[(usize, usize)],
    left: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    emit(chosen);
    if left == 0 {
        return;
    }
    for p in from..pairs.len() {
        chosen.push(p);
        collect_multisets(pairs, left - 1, p, chosen, emit);
        chosen.pop();
    }
}

fn show_map<K: fmt::Display, V: fmt::Display>(m: &BTreeMap<K, V>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}↦{v}")).collect();
    format!("[{}]", parts.join(", "))
}

// ---------------------------------------------------------------------
// Pushouts of total morphisms.

/// A square `rho: L ⇀ R`, `f: L → L1`, `rho1: L1 ⇀ R1`, `g: R → R1` over
/// indexed graphs. Total squares simply have every value defined.
struct IxSquare {
    r: IxGraph,
    l1: IxGraph,
    r1: IxGraph,
    /// `f(rho⁻¹)`: for each item `y` of L, `(f(y), rho(y))`.
    along_n: Vec<(usize, Option<usize>)>,
    along_e: Vec<(usize, Option<usize>)>,
    rho1_n: Vec<Option<usize>>,
    rho1_e: Vec<Option<usize>>,
    g_n: Vec<usize>,
    g_e: Vec<usize>,
    /// `rho1` and `g` jointly reach every item of R1, so a mediator is
    /// forced everywhere.
    covered: bool,
    /// Partial cocones only: items of R and L1 whose value cannot affect
    /// the verdict and may be taken undefined (see [`IxSquare::idle`]).
    idle_r: (Vec<bool>, Vec<bool>),
    idle_l1: (Vec<bool>, Vec<bool>),
}

impl IxSquare {
    fn new(
        l: &Graph,
        rho: (Vec<Option<usize>>, Vec<Option<usize>>),
        f: &TotalMorphism,
        rho1: &PartialMorphism,
        g: &TotalMorphism,
    ) -> Self {
        let (l_ix, r, l1, r1) = (IxGraph::new(l), IxGraph::new(g.source()), IxGraph::new(f.target()), IxGraph::new(g.target()));
        let (fn_, fe) = l_ix.total(f, &l1);
        let (rho1_n, rho1_e) = l1.partial(rho1, &r1);
        let (g_n, g_e) = r.total(g, &r1);
        let reached = |len: usize, a: &[Option<usize>], b: &[usize]| {
            let mut hit = vec![false; len];
            a.iter().flatten().chain(b).for_each(|&v| hit[v] = true);
            hit.into_iter().all(|h| h)
        };
        let covered = reached(r1.node_count(), &rho1_n, &g_n) && reached(r1.edge_count(), &rho1_e, &g_e);
        let (idle_r, idle_l1) = IxSquare::idle(&r, &l1, &r1, (&rho1_n, &rho1_e), (&g_n, &g_e), covered);
        IxSquare {
            covered,
            idle_r,
            idle_l1,
            along_n: fn_.into_iter().zip(rho.0).collect(),
            along_e: fe.into_iter().zip(rho.1).collect(),
            r,
            l1,
            r1,
            rho1_n,
            rho1_e,
            g_n,
            g_e,
        }
    }

    /// With the mediator forced everywhere, a cocone has a mediator iff the
    /// values sent to each item of R1 agree (the homomorphism condition then
    /// follows from the cocone's), and no item outside dom `rho1` is
    /// defined. Items alone on their R1 item and inside dom `rho1` take part
    /// in neither test. Such an item, if a node, also needs idle incident
    /// edges. Making idle items undefined keeps a partial cocone a cocone
    /// and does not change its verdict, so partial cocones need only vary
    /// the others.
    #[allow(clippy::type_complexity)]
    fn idle(
        r: &IxGraph,
        l1: &IxGraph,
        r1: &IxGraph,
        rho1: (&[Option<usize>], &[Option<usize>]),
        g: (&[usize], &[usize]),
        covered: bool,
    ) -> ((Vec<bool>, Vec<bool>), (Vec<bool>, Vec<bool>)) {
        if !covered {
            return (
                (vec![false; r.node_count()], vec![false; r.edge_count()]),
                (vec![false; l1.node_count()], vec![false; l1.edge_count()]),
            );
        }
        let mut hits_n = vec![0usize; r1.node_count()];
        let mut hits_e = vec![0usize; r1.edge_count()];
        rho1.0.iter().flatten().chain(g.0).for_each(|&v| hits_n[v] += 1);
        rho1.1.iter().flatten().chain(g.1).for_each(|&v| hits_e[v] += 1);
        let alone = |slot: Option<usize>, hits: &[usize]| slot.is_some_and(|v| hits[v] == 1);
        let close = |gr: &IxGraph, edges: Vec<bool>, nodes: Vec<bool>| {
            let mut nodes = nodes;
            for (e, &(s, t)) in gr.ends.iter().enumerate() {
                if !edges[e] {
                    nodes[s] = false;
                    nodes[t] = false;
                }
            }
            (nodes, edges)
        };
        let r_e = g.1.iter().map(|&v| alone(Some(v), &hits_e)).collect();
        let r_n = g.0.iter().map(|&v| alone(Some(v), &hits_n)).collect();
        let l_e = rho1.1.iter().map(|&v| alone(v, &hits_e)).collect();
        let l_n = rho1.0.iter().map(|&v| alone(v, &hits_n)).collect();
        (close(r, r_e, r_n), close(l1, l_e, l_n))
    }

    /// Constraints on `c1: L1 ⇀ X` making `c1∘f = c2∘rho`.
    fn c1_constraints(&self, c2n: &[Option<usize>], c2e: &[Option<usize>]) -> Option<(Vec<Fix>, Vec<Fix>)> {
        let at = |c: &[Option<usize>], v: Option<usize>| Fix::of(v.and_then(|v| c[v]));
        Some((
            constraints(self.l1.node_count(), self.along_n.iter().map(|&(y, v)| (y, at(c2n, v))))?,
            constraints(self.l1.edge_count(), self.along_e.iter().map(|&(y, v)| (y, at(c2e, v))))?,
        ))
    }

    /// Constraints on a mediator `h: R1 ⇀ X` with `h∘rho1 = c1` and
    /// `h∘g = c2`.
    fn mediator_constraints(
        &self,
        c1: (&[Option<usize>], &[Option<usize>]),
        c2: (&[Option<usize>], &[Option<usize>]),
    ) -> Option<(Vec<Fix>, Vec<Fix>)> {
        // outside dom rho1 the composite is undefined
        let outside = |leg: &[Option<usize>], c: &[Option<usize>]| leg.iter().zip(c).any(|(v, c)| v.is_none() && c.is_some());
        if outside(&self.rho1_n, c1.0) || outside(&self.rho1_e, c1.1) {
            return None;
        }
        let reqs = |leg: &[Option<usize>], c1: &[Option<usize>], g: &[usize], c2: &[Option<usize>]| {
            let mut out: Vec<(usize, Fix)> = leg.iter().zip(c1).filter_map(|(v, c)| v.map(|v| (v, Fix::of(*c)))).collect();
            out.extend(g.iter().zip(c2).map(|(&v, c)| (v, Fix::of(*c))));
            out
        };
        Some((
            constraints(self.r1.node_count(), reqs(&self.rho1_n, c1.0, &self.g_n, c2.0))?,
            constraints(self.r1.edge_count(), reqs(&self.rho1_e, c1.1, &self.g_e, c2.1))?,
        ))
    }

    /// Number of mediators (0 or 1) when every item is forced: the forced
    /// values must agree and form a (partial) homomorphism.
    fn forced_mediator(
        &self,
        c1: (&[Option<usize>], &[Option<usize>]),
        c2: (&[Option<usize>], &[Option<usize>]),
        x: &IxGraph,
        scratch: &mut (Vec<Option<Option<usize>>>, Vec<Option<Option<usize>>>),
    ) -> usize {
        fn force(slot: &mut [Option<Option<usize>>], leg: impl Iterator<Item = (Option<usize>, Option<usize>)>) -> bool {
            for (v, c) in leg {
                if let Some(v) = v {
                    match slot[v] {
                        None => slot[v] = Some(c),
                        Some(old) if old != c => return false,
                        _ => {}
                    }
                } else if c.is_some() {
                    return false;
                }
            }
            true
        }
        let (hn, he) = scratch;
        hn.iter_mut().for_each(|v| *v = None);
        he.iter_mut().for_each(|v| *v = None);
        let consistent = force(hn, self.rho1_n.iter().copied().zip(c1.0.iter().copied()))
            && force(hn, self.g_n.iter().map(|&v| Some(v)).zip(c2.0.iter().copied()))
            && force(he, self.rho1_e.iter().copied().zip(c1.1.iter().copied()))
            && force(he, self.g_e.iter().map(|&v| Some(v)).zip(c2.1.iter().copied()));
        if !consistent {
            return 0;
        }
        let hom = self.r1.ends.iter().zip(he.iter()).all(|(&(s, t), e)| match e.flatten() {
            Some(e) => hn[s].flatten().zip(hn[t].flatten()) == Some(x.ends[e]),
            None => true,
        });
        usize::from(hom)
    }

    /// Every cocone into `x` (total or partial, per `total`) must have
    /// exactly one mediator of the same kind.
    fn check_target(&self, x: &Graph, total: bool) -> Option<VerificationVerdict> {
        let xi = IxGraph::new(x);
        let idle = |flags: &[bool], total: bool| -> Vec<Fix> {
            flags.iter().map(|&i| if i && !total { Fix::Undef } else { Fix::Free }).collect()
        };
        let no_n = idle(&self.idle_r.0, total);
        let no_e = idle(&self.idle_r.1, total);
        let (idle_n, idle_e) = (idle(&self.idle_l1.0, total), idle(&self.idle_l1.1, total));
        let mut verdict = None;
        let mut scratch = (vec![None; self.r1.node_count()], vec![None; self.r1.edge_count()]);
        // the mediator count is invariant under automorphisms of x, so
        // cocones are taken up to permutations of parallel edges
        let _ = for_each_ix_hom_up_to_parallel(&self.r, &xi, total, &no_n, &no_e, &[], &mut |c2n, c2e| {
            let Some((mut fix_n, mut fix_e)) = self.c1_constraints(c2n, c2e) else {
                return ControlFlow::Continue(());
            };
            for (fix, idle) in fix_n.iter_mut().zip(&idle_n).chain(fix_e.iter_mut().zip(&idle_e)) {
                if *fix == Fix::Free {
                    *fix = *idle;
                }
            }
            for_each_ix_hom_up_to_parallel(&self.l1, &xi, total, &fix_n, &fix_e, c2e, &mut |c1n, c1e| {
                let count = if self.covered {
                    self.forced_mediator((c1n, c1e), (c2n, c2e), &xi, &mut scratch)
                } else {
                    match self.mediator_constraints((c1n, c1e), (c2n, c2e)) {
                    Some((mn, me)) => count_ix_homs(&self.r1, &xi, total, &mn, &me, 2),
                        None => 0,
                    }
                };
                if count == 1 {
                    return ControlFlow::Continue(());
                }
                verdict = Some(VerificationVerdict::fail(
                    format!(
                        "{}cocone into {x} with c1 = {}, c2 = {}",
                        if total { "" } else { "partial " },
                        show_map(&self.l1.node_map(&xi, c1n)),
                        show_map(&self.r.node_map(&xi, c2n))
                    ),
                    count,
                ));
                ControlFlow::Break(())
            })
        });
        verdict
    }
}

/// The reference object is always a target; the generated families are
/// cut at `bound` nodes.
fn pushout_targets(candidate: &Graph, reference: &Graph, bound: usize, opts: &OracleOptions) -> Result<Vec<Graph>> {
    let mut targets = vec![candidate.clone()];
    targets.extend([single_loop(), Graph::empty()]);
    targets.extend(elementary_quotients(candidate));
    targets.push(with_isolated_node(candidate));
    if opts.exhaustive {
        targets.extend(small_graphs(bound, opts.exhaustive_edges)?);
    }
    targets.retain(|t| t.node_count() <= bound);
    targets.push(reference.clone());
    Ok(targets)
}

/// Checks that `candidate` is a pushout of `rho` and `f`: the square
/// commutes and every cocone into a target admits exactly one mediator.
/// Targets: the candidate, its single-pair quotients, the candidate plus an
/// isolated node, the one-loop graph, the empty graph, (exhaustive mode)
/// all graphs up to the bound, and always an independently computed
/// pushout. The default bound is the larger of the two objects plus two.
pub fn verify_pushout_bounded(
    rho: &TotalMorphism,
    f: &TotalMorphism,
    candidate: &Pushout,
    opts: OracleOptions,
) -> Result<VerificationVerdict> {
    if !arc_eq(rho.source(), f.source())
        || !arc_eq(candidate.rho1.source(), f.target())
        || !arc_eq(candidate.g.source(), rho.target())
        || !arc_eq(candidate.rho1.target(), candidate.g.target())
    {
        return Err(RewriteError::EndpointMismatch("pushout square is not well formed".into()));
    }
    check_cap(&candidate.object)?;
    check_cap(f.target())?;
    if !same_maps(&f.then(&candidate.rho1)?, &rho.then(&candidate.g)?) {
        return Ok(VerificationVerdict::fail("square does not commute", 0));
    }
    let naive = naive_pushout(rho, f)?;
    let l = IxGraph::new(rho.source());
    let (rn, re) = l.total(rho, &IxGraph::new(rho.target()));
    let square = IxSquare::new(
        rho.source(),
        (rn.into_iter().map(Some).collect(), re.into_iter().map(Some).collect()),
        f,
        &PartialMorphism::from_total(&candidate.rho1),
        &candidate.g,
    );
    let bound = opts.bound_for(candidate.object.node_count().max(naive.object.node_count()));
    for x in pushout_targets(candidate.rho1.target(), &naive.object, bound, &opts)? {
        if let Some(v) = square.check_target(&x, true) {
            return Ok(v);
        }
    }
    Ok(VerificationVerdict::pass())
}

// ---------------------------------------------------------------------
// Pushouts of partial morphisms.

/// Reference object for a partial pushout: the total pushout over the
/// domain of `r`, without the classes that meet `f(L − dom r)` and without
/// the edges this leaves dangling.
fn naive_spo_object(r: &PartialMorphism, f: &TotalMorphism) -> Result<Graph> {
    let po = naive_pushout(&r.carrier(), &f.restrict(r.domain().clone())?)?;
    let l = r.source();
    let gone_n: BTreeSet<&NodeId> =
        l.nodes().iter().filter(|x| r.node(x).is_none()).map(|x| po.from_b.node(f.node(x))).collect();
    let gone_e: BTreeSet<&EdgeId> =
        l.edges().keys().filter(|x| r.edge(x).is_none()).map(|x| po.from_b.edge(f.edge(x))).collect();
    let nodes: BTreeSet<NodeId> = po.object.nodes().iter().filter(|n| !gone_n.contains(n)).cloned().collect();
    let edges: BTreeMap<EdgeId, Edge> = po
        .object
        .edges()
        .iter()
        .filter(|(id, e)| !gone_e.contains(id) && nodes.contains(&e.src) && nodes.contains(&e.tgt))
        .map(|(id, e)| (id.clone(), e.clone()))
        .collect();
    Graph::new(nodes, edges)
}

/// Checks that `candidate` is a pushout of the partial rule `r` and the
/// total match `f` in the category of graphs and partial morphisms.
/// Targets as in [`verify_pushout_bounded`], with an independently built
/// partial pushout object in place of the total one; cocones and mediators
/// range over partial morphisms.
pub fn verify_partial_pushout_bounded(
    r: &PartialMorphism,
    f: &TotalMorphism,
    candidate: &crate::spo::SpoResult,
    opts: OracleOptions,
) -> Result<VerificationVerdict> {
    let (r1, g) = (&candidate.r1, &candidate.g);
    if !arc_eq(r.source(), f.source())
        || !arc_eq(r1.source(), f.target())
        || !arc_eq(g.source(), r.target())
        || !arc_eq(r1.target(), g.target())
    {
        return Err(RewriteError::EndpointMismatch("partial pushout square is not well formed".into()));
    }
    check_cap(&candidate.object)?;
    check_cap(f.target())?;
    let l = r.source();
    let commutes = l.nodes().iter().all(|x| r1.node(f.node(x)) == r.node(x).map(|v| g.node(v)))
        && l.edges().keys().all(|x| r1.edge(f.edge(x)) == r.edge(x).map(|v| g.edge(v)));
    if !commutes {
        return Ok(VerificationVerdict::fail("square does not commute", 0));
    }
    let l_ix = IxGraph::new(l);
    let square = IxSquare::new(l, l_ix.partial(r, &IxGraph::new(r.target())), f, r1, g);
    let reference = naive_spo_object(r, f)?;
    let bound = opts.bound_for(candidate.object.node_count().max(reference.node_count()));
    for x in pushout_targets(&candidate.object, &reference, bound, &opts)? {
        if let Some(v) = square.check_target(&x, false) {
            return Ok(v);
        }
    }
    Ok(VerificationVerdict::pass())
}

// ---------------------------------------------------------------------
// Pullbacks and complements.

fn check_complement_shape(l: &TotalMorphism, f: &TotalMorphism, l1: &TotalMorphism, g: &TotalMorphism) -> Result<()> {
    if !arc_eq(l.target(), f.source())
        || !arc_eq(g.source(), l.source())
        || !arc_eq(l1.target(), f.target())
        || !arc_eq(g.target(), l1.source())
    {
        return Err(RewriteError::EndpointMismatch("complement square is not well formed".into()));
    }
    Ok(())
}

/// Exact check that `K` (with `l: K → L`, `g: K → K1`) is a pullback of
/// `f: L → L1` and `l1: K1 → L1`: the canonical comparison from `K` to
/// `{(x, y) ∈ L × K1 : f(x) = l1(y)}` is bijective on nodes and edges.
pub fn verify_pullback(
    l: &TotalMorphism,
    f: &TotalMorphism,
    l1: &TotalMorphism,
    g: &TotalMorphism,
) -> Result<VerificationVerdict> {
    check_complement_shape(l, f, l1, g)?;
    if !same_maps(&l.then(f)?, &g.then(l1)?) {
        return Ok(VerificationVerdict::fail("square does not commute", 0));
    }
    let (lg, k1, k) = (l.target(), l1.source(), l.source());
    let node_pairs: BTreeSet<(&NodeId, &NodeId)> = lg
        .nodes()
        .iter()
        .flat_map(|x| k1.nodes().iter().map(move |y| (x, y)))
        .filter(|(x, y)| f.node(x) == l1.node(y))
        .collect();
    let edge_pairs: BTreeSet<(&EdgeId, &EdgeId)> = lg
        .edges()
        .keys()
        .flat_map(|x| k1.edges().keys().map(move |y| (x, y)))
        .filter(|(x, y)| f.edge(x) == l1.edge(y))
        .collect();
    let hit_n: BTreeSet<(&NodeId, &NodeId)> = k.nodes().iter().map(|z| (l.node(z), g.node(z))).collect();
    let hit_e: BTreeSet<(&EdgeId, &EdgeId)> = k.edges().keys().map(|z| (l.edge(z), g.edge(z))).collect();
    if hit_n.len() != k.node_count() || hit_e.len() != k.edge_count() {
        return Ok(VerificationVerdict::fail("comparison to the pullback is not injective", 0));
    }
    if let Some((x, y)) = node_pairs.difference(&hit_n).next() {
        return Ok(VerificationVerdict::fail(format!("pullback node ({x}, {y}) is missing"), 0));
    }
    if let Some((x, y)) = edge_pairs.difference(&hit_e).next() {
        return Ok(VerificationVerdict::fail(format!("pullback edge ({x}, {y}) is missing"), 0));
    }
    Ok(VerificationVerdict::pass())
}

/// Exact check that `P` (legs `ca: A → P`, `cb: B → P`) is a pushout of
/// `a: K → A` and `b: K → B`, by comparison with [`naive_pushout`].
pub fn is_pushout_square(a: &TotalMorphism, b: &TotalMorphism, ca: &TotalMorphism, cb: &TotalMorphism) -> Result<bool> {
    if !same_maps(&a.then(ca)?, &b.then(cb)?) {
        return Ok(false);
    }
    let np = naive_pushout(a, b)?;
    let nodes = consistent_map(
        np.from_a
            .node_map()
            .iter()
            .map(|(x, c)| (c.clone(), ca.node(x).clone()))
            .chain(np.from_b.node_map().iter().map(|(y, c)| (c.clone(), cb.node(y).clone()))),
    );
    let edges = consistent_map(
        np.from_a
            .edge_map()
            .iter()
            .map(|(x, c)| (c.clone(), ca.edge(x).clone()))
            .chain(np.from_b.edge_map().iter().map(|(y, c)| (c.clone(), cb.edge(y).clone()))),
    );
    let (Some(nodes), Some(edges)) = (nodes, edges) else { return Ok(false) };
    let p = ca.target();
    let bij_n = nodes.values().collect::<BTreeSet<_>>().len() == nodes.len() && nodes.len() == p.node_count();
    let bij_e = edges.values().collect::<BTreeSet<_>>().len() == edges.len() && edges.len() == p.edge_count();
    Ok(bij_n && bij_e)
}

/// An alternative complement `(K1', l1': K1' → L1, g': K → K1')`.
#[derive(Debug, Clone)]
pub struct Alternative {
    pub object: Arc<Graph>,
    pub l1: TotalMorphism,
    pub g: TotalMorphism,
}

/// All set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, 0, &mut Vec::new(), &mut out);
    out
}

/// Cartesian product of per-fibre partitions: a block label per item.
fn fibre_partitions<T: Ord + Clone>(fibres: &[Vec<T>], whole: bool) -> Vec<BTreeMap<T, (usize, usize)>> {
    let mut acc: Vec<BTreeMap<T, (usize, usize)>> = vec![BTreeMap::new()];
    for (fi, fibre) in fibres.iter().enumerate() {
        let parts = if whole { vec![vec![0; fibre.len()]] } else { set_partitions(fibre.len()) };
        let mut next = Vec::new();
        for base in &acc {
            for p in &parts {
                let mut m = base.clone();
                for (item, b) in fibre.iter().zip(p) {
                    m.insert(item.clone(), (fi, *b));
                }
                next.push(m);
            }
        }
        acc = next;
    }
    acc
}

fn subsets_up_to<T: Clone>(items: &[T], max: usize, emit: &mut dyn FnMut(&[T]) -> ControlFlow<()>) -> ControlFlow<()> {
    fn go<T: Clone>(
        items: &[T],
        from: usize,
        max: usize,
        cur: &mut Vec<T>,
        emit: &mut dyn FnMut(&[T]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        emit(cur)?;
        if cur.len() == max {
            return ControlFlow::Continue(());
        }
        for i in from..items.len() {
            cur.push(items[i].clone());
            go(items, i + 1, max, cur, emit)?;
            cur.pop();
        }
        ControlFlow::Continue(())
    }
    go(items, 0, max, &mut Vec::new(), emit)
}

/// Enumerates candidate complements of `f: L → L1` along `l: K → L` with
/// at most `max_items` nodes plus edges. Over `f(l(K))` the complement is a
/// quotient of `K` identifying only items with the same image; over
/// `f(L) − f(l(K))` it is empty; over the rest of `L1` it is arbitrary.
/// With `single` every fibre has at most one item. At most `max_context`
/// items lie over the rest of `L1`.
pub fn for_each_alternative(
    l: &TotalMorphism,
    f: &TotalMorphism,
    max_items: usize,
    max_context: usize,
    single: bool,
    visit: &mut dyn FnMut(&Alternative) -> ControlFlow<()>,
) -> Result<()> {
    let (k, l1) = (l.source(), f.target());
    let fl = l.then(f)?;
    let mut node_fibres: BTreeMap<&NodeId, Vec<NodeId>> = BTreeMap::new();
    for z in k.nodes() {
        node_fibres.entry(fl.node(z)).or_default().push(z.clone());
    }
    let mut edge_fibres: BTreeMap<&EdgeId, Vec<EdgeId>> = BTreeMap::new();
    for z in k.edges().keys() {
        edge_fibres.entry(fl.edge(z)).or_default().push(z.clone());
    }
    let node_fibres: Vec<Vec<NodeId>> = node_fibres.into_values().collect();
    let edge_fibres: Vec<Vec<EdgeId>> = edge_fibres.into_values().collect();
    let matched_nodes = f.image_nodes();
    let matched_edges = f.image_edges();
    let context_nodes: Vec<&NodeId> = l1.nodes().iter().filter(|v| !matched_nodes.contains(*v)).collect();
    let context_edges: Vec<(&EdgeId, &Edge)> = l1.edges().iter().filter(|(e, _)| !matched_edges.contains(*e)).collect();

    for np in fibre_partitions(&node_fibres, single) {
        let block_name = |z: &NodeId| {
            let b = np[z];
            let least = k.nodes().iter().find(|w| np[*w] == b).expect("block member");
            NodeId(format!("k:{least}"))
        };
        let q_nodes: BTreeMap<NodeId, NodeId> = k.nodes().iter().map(|z| (z.clone(), block_name(z))).collect();
        'edges: for ep in fibre_partitions(&edge_fibres, single) {
            let mut q_edges: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
            let mut body: BTreeMap<EdgeId, Edge> = BTreeMap::new();
            for (z, e) in k.edges() {
                let b = ep[z];
                let least = k.edges().keys().find(|w| ep[*w] == b).expect("block member");
                let name = EdgeId(format!("k:{least}"));
                let edge = Edge { src: q_nodes[&e.src].clone(), tgt: q_nodes[&e.tgt].clone() };
                if let Some(old) = body.insert(name.clone(), edge.clone()) {
                    if old != edge {
                        continue 'edges;
                    }
                }
                q_edges.insert(z.clone(), name);
            }
            let image_nodes: BTreeSet<NodeId> = q_nodes.values().cloned().collect();
            let used = image_nodes.len() + body.len();
            if used > max_items {
                continue;
            }
            let over_n: NodeMap = k.nodes().iter().map(|z| (q_nodes[z].clone(), fl.node(z).clone())).collect();
            let over_e: EdgeMap = k.edges().keys().map(|z| (q_edges[z].clone(), fl.edge(z).clone())).collect();

            // Context node fibre sizes.
            let cap = if single { 1 } else { max_items - used };
            let mut sizes = vec![0usize; context_nodes.len()];
            loop {
                let extra: usize = sizes.iter().sum();
                if used + extra <= max_items && extra <= max_context {
                    let mut nodes = image_nodes.clone();
                    let mut over_n2 = over_n.clone();
                    let mut fibre: BTreeMap<&NodeId, Vec<NodeId>> = BTreeMap::new();
                    for (z, q) in &q_nodes {
                        let v = fl.node(z);
                        let entry = fibre.entry(v).or_default();
                        if !entry.contains(q) {
                            entry.push(q.clone());
                        }
                    }
                    for (v, s) in context_nodes.iter().zip(&sizes) {
                        for i in 0..*s {
                            let name = NodeId(format!("c:{v}.{i}"));
                            nodes.insert(name.clone());
                            over_n2.insert(name.clone(), (*v).clone());
                            fibre.entry(v).or_default().push(name);
                        }
                    }
                    let none = Vec::new();
                    let mut options: Vec<(EdgeId, NodeId, NodeId)> = Vec::new();
                    for (e, ed) in &context_edges {
                        for s in fibre.get(&ed.src).unwrap_or(&none) {
                            for t in fibre.get(&ed.tgt).unwrap_or(&none) {
                                options.push(((*e).clone(), s.clone(), t.clone()));
                            }
                        }
                    }
                    let room = (max_items - used - extra).min(max_context - extra);
                    let flow = subsets_up_to(&options, room, &mut |chosen| {
                        if single {
                            let over: BTreeSet<&EdgeId> = chosen.iter().map(|(e, _, _)| e).collect();
                            if over.len() != chosen.len() {
                                return ControlFlow::Continue(());
                            }
                        }
                        let mut edges = body.clone();
                        let mut over_e2 = over_e.clone();
                        for (i, (e, s, t)) in chosen.iter().enumerate() {
                            let name = EdgeId(format!("c:{e}.{i}"));
                            edges.insert(name.clone(), Edge { src: s.clone(), tgt: t.clone() });
                            over_e2.insert(name, e.clone());
                        }
                        let object = Arc::new(Graph::from_parts_unchecked(nodes.clone(), edges));
                        let alt = Alternative {
                            l1: TotalMorphism::new(object.clone(), l1.clone(), over_n2.clone(), over_e2)
                                .expect("alternative leg over L1"),
                            g: TotalMorphism::new(k.clone(), object.clone(), q_nodes.clone(), q_edges.clone())
                                .expect("alternative leg from K"),
                            object,
                        };
                        visit(&alt)
                    });
                    if flow.is_break() {
                        return Ok(());
                    }
                }
                // Next size vector.
                let mut i = 0;
                loop {
                    if i == sizes.len() {
                        break;
                    }
                    if sizes[i] < cap {
                        sizes[i] += 1;
                        break;
                    }
                    sizes[i] = 0;
                    i += 1;
                }
                if i == sizes.len() {
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Items over the context of `L1` in an FPBC alternative. They do not
/// affect the pullback condition, and given the forced part over `f(L)` the
/// mediator count is a product over them, so one context edge with its two
/// endpoint copies already exposes any count other than one.
pub const FPBC_CONTEXT_ITEMS: usize = 3;

/// Checks that `(K1, l1, g)` is a final pullback complement of `l` and
/// `f`: it is a pullback, and every alternative pullback complement with
/// at most `bound` items (nodes plus edges; by default enough for every
/// alternative within the cap), at most [`FPBC_CONTEXT_ITEMS`] of them over
/// the context, has exactly one
/// morphism `h: K1' → K1` with `l1∘h = l1'` and `h∘g' = g`.
pub fn verify_fpbc_bounded(
    l: &TotalMorphism,
    f: &TotalMorphism,
    l1: &TotalMorphism,
    g: &TotalMorphism,
    opts: OracleOptions,
) -> Result<VerificationVerdict> {
    check_cap(l1.source())?;
    check_cap(f.target())?;
    let pb = verify_pullback(l, f, l1, g)?;
    if !pb.ok {
        return Ok(pb);
    }
    // every alternative within the context cap has at most |K| + cap items
    let bound = opts.bound.unwrap_or((l1.source().size() + 2).max(l.source().size() + FPBC_CONTEXT_ITEMS));
    let mut verdict = Ok(VerificationVerdict::pass());
    for_each_alternative(l, f, bound, FPBC_CONTEXT_ITEMS, false, &mut |alt| {
        match verify_pullback(l, f, &alt.l1, &alt.g) {
            Ok(v) if !v.ok => return ControlFlow::Continue(()),
            Err(e) => {
                verdict = Err(e);
                return ControlFlow::Break(());
            }
            Ok(_) => {}
        }
        let count = complement_mediators(alt, l1, g, HomKind::Any, 2);
        if count == 1 {
            return ControlFlow::Continue(());
        }
        verdict = Ok(VerificationVerdict::fail(
            format!("alternative pullback complement {} over L1 via {}", alt.object, show_map(alt.l1.node_map())),
            count,
        ));
        ControlFlow::Break(())
    })?;
    verdict
}

/// Morphisms `h: K1' → K1` with `l1∘h = l1'` and `h∘g' = g`.
fn complement_mediators(alt: &Alternative, l1: &TotalMorphism, g: &TotalMorphism, kind: HomKind, stop_at: usize) -> usize {
    let k = g.source();
    let fixed_n = consistent_map(k.nodes().iter().map(|z| (alt.g.node(z).clone(), g.node(z).clone())));
    let fixed_e = consistent_map(k.edges().keys().map(|z| (alt.g.edge(z).clone(), g.edge(z).clone())));
    let (Some(fixed_n), Some(fixed_e)) = (fixed_n, fixed_e) else { return 0 };
    let mut count = 0;
    for_each_hom(&alt.object, l1.source(), kind, &fixed_n, &fixed_e, |hn, he| {
        let over = hn.iter().all(|(y, v)| l1.node(v) == alt.l1.node(y))
            && he.iter().all(|(y, v)| l1.edge(v) == alt.l1.edge(y));
        if over {
            count += 1;
            if count >= stop_at {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    count
}

/// Checks that `(K1, l1, g)` is a pushout complement of `l` and `f` and
/// that every alternative pushout complement (by default all of them) is
/// isomorphic to it compatibly with the legs.
pub fn verify_poc_bounded(
    l: &TotalMorphism,
    f: &TotalMorphism,
    l1: &TotalMorphism,
    g: &TotalMorphism,
    opts: OracleOptions,
) -> Result<VerificationVerdict> {
    check_complement_shape(l, f, l1, g)?;
    check_cap(l1.source())?;
    check_cap(f.target())?;
    if !is_pushout_square(l, g, f, l1)? {
        return Ok(VerificationVerdict::fail("candidate square is not a pushout", 0));
    }
    // with one item per fibre no alternative exceeds |K| + |L1| items
    let bound = opts.bound.unwrap_or((l1.source().size() + 2).max(l.source().size() + f.target().size()));
    let mut verdict = Ok(VerificationVerdict::pass());
    for_each_alternative(l, f, bound, usize::MAX, true, &mut |alt| {
        match is_pushout_square(l, &alt.g, f, &alt.l1) {
            Ok(false) => return ControlFlow::Continue(()),
            Err(e) => {
                verdict = Err(e);
                return ControlFlow::Break(());
            }
            Ok(true) => {}
        }
        if complement_mediators(alt, l1, g, HomKind::Iso, 1) == 1 {
            return ControlFlow::Continue(());
        }
        verdict = Ok(VerificationVerdict::fail(
            format!("pushout complement {} is not isomorphic to the candidate", alt.object),
            0,
        ));
        ControlFlow::Break(())
    })?;
    verdict
}

// ---------------------------------------------------------------------
// Heterogeneous pushouts.

/// Identifies two nodes of a termgraph and closes under congruence: when
/// two labelled nodes meet their labels must agree and their successors
/// are identified in turn. `None` on a label clash.
pub fn merge_term_nodes(t: &TermGraph, a: &NodeId, b: &NodeId) -> Option<TermGraph> {
    let mut parent: BTreeMap<NodeId, NodeId> = t.nodes().map(|n| (n.clone(), n.clone())).collect();
    fn find(parent: &BTreeMap<NodeId, NodeId>, n: &NodeId) -> NodeId {
        let mut n = n.clone();
        while parent[&n] != n {
            n = parent[&n].clone();
        }
        n
    }
    let mut content: BTreeMap<NodeId, Option<Term>> = t.entries().clone();
    let mut work = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = work.pop() {
        let (rx, ry) = (find(&parent, &x), find(&parent, &y));
        if rx == ry {
            continue;
        }
        let (keep, drop) = if rx < ry { (rx, ry) } else { (ry, rx) };
        let merged = match (content[&keep].clone(), content[&drop].clone()) {
            (Some(s), Some(u)) => {
                if s.label != u.label || s.succ.len() != u.succ.len() {
                    return None;
                }
                work.extend(s.succ.iter().cloned().zip(u.succ.iter().cloned()));
                Some(s)
            }
            (s, u) => s.or(u),
        };
        parent.insert(drop.clone(), keep.clone());
        content.insert(keep, merged);
        content.remove(&drop);
    }
    let nodes = content
        .into_iter()
        .map(|(n, term)| {
            let term = term.map(|s| Term {
                label: s.label,
                succ: s.succ.iter().map(|x| find(&parent, x)).collect(),
            });
            (n, term)
        })
        .collect();
    TermGraph::new(t.signature().clone(), nodes).ok()
}

fn term_targets(h: &TermGraph, bound: usize, opts: &OracleOptions) -> Result<Vec<TermGraph>> {
    let mut out = vec![h.clone()];
    let nodes: Vec<&NodeId> = h.nodes().collect();
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            out.extend(merge_term_nodes(h, a, b));
        }
    }
    let fresh = (0..)
        .map(|i| NodeId(format!("x{i}")))
        .find(|n| !h.has_node(n))
        .expect("unbounded");
    let mut plus = h.entries().clone();
    plus.insert(fresh, None);
    out.push(TermGraph::new(h.signature().clone(), plus)?);
    // Give one unlabelled node a label, all successor choices.
    for u in nodes.iter().filter(|u| !h.is_labeled(u)) {
        for (label, arity) in h.signature() {
            for succ in tuples(&nodes, *arity) {
                let mut e = h.entries().clone();
                e.insert((*u).clone(), Some(Term { label: label.clone(), succ }));
                out.push(TermGraph::new(h.signature().clone(), e)?);
            }
        }
    }
    if opts.exhaustive {
        out.extend(all_termgraphs(h.signature(), bound)?);
    }
    out.retain(|t| t.node_count() <= bound);
    Ok(out)
}

fn tuples(nodes: &[&NodeId], arity: usize) -> Vec<Vec<NodeId>> {
    let mut acc: Vec<Vec<NodeId>> = vec![Vec::new()];
    for _ in 0..arity {
        acc = acc
            .into_iter()
            .flat_map(|t| {
                nodes.iter().map(move |n| {
                    let mut t = t.clone();
                    t.push((*n).clone());
                    t
                })
            })
            .collect();
    }
    acc
}

/// Every termgraph over `sig` with at most `max_nodes` nodes.
pub fn all_termgraphs(sig: &crate::termgraph::Signature, max_nodes: usize) -> Result<Vec<TermGraph>> {
    let mut out = Vec::new();
    for n in 0..=max_nodes {
        let names: Vec<NodeId> = (0..n).map(|i| NodeId(format!("v{i}"))).collect();
        let refs: Vec<&NodeId> = names.iter().collect();
        let mut choices: Vec<Option<Term>> = vec![None];
        for (label, arity) in sig {
            for succ in tuples(&refs, *arity) {
                choices.push(Some(Term { label: label.clone(), succ }));
            }
        }
        let count = choices.len().checked_pow(n as u32).unwrap_or(usize::MAX);
        if out.len().saturating_add(count) > CAP_UNIVERSE {
            return Err(RewriteError::CapExceeded(format!(
                "exhaustive termgraph universe exceeds {CAP_UNIVERSE}"
            )));
        }
        let mut idx = vec![0usize; n];
        loop {
            let nodes = names.iter().cloned().zip(idx.iter().map(|i| choices[*i].clone())).collect();
            out.push(TermGraph::new(sig.clone(), nodes)?);
            let mut i = 0;
            while i < n && idx[i] + 1 == choices.len() {
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            idx[i] += 1;
        }
    }
    Ok(out)
}

/// Checks that `(rho1, g)` is an initial heterogeneous cocone under `rule`
/// and `f`: it is a cocone, and every cocone into a target with at most
/// `bound` nodes admits exactly one cocone morphism from it. Targets: the
/// candidate, its congruence-closed single-pair quotients, the candidate
/// plus a node, the candidate with one unlabelled node labelled, and
/// (exhaustive mode) every termgraph up to the bound.
pub fn verify_initial_cocone_bounded(
    rule: &crate::hpo::HpoRule,
    f: &crate::termgraph::TermMorphism,
    rho1: &crate::hpo::HeteroMorphism,
    g: &crate::termgraph::TermMorphism,
    opts: OracleOptions,
) -> Result<VerificationVerdict> {
    use crate::hpo::{canonical_structured, check_hetero_cocone, count_cocone_morphisms, HeteroMorphism};
    use crate::termgraph::{for_each_term_hom, TermMorphism, TermPartialMorphism};

    let h = g.target();
    if h.node_count() > CAP_NODES {
        return Err(RewriteError::CapExceeded(format!("derived termgraph has {} nodes", h.node_count())));
    }
    let rep = check_hetero_cocone(rule, f, rho1, g)?;
    if !rep.ok() {
        return Ok(VerificationVerdict::fail(rep.to_string(), 0));
    }
    let (l, r, l1) = (rule.lhs(), rule.rhs(), f.target());
    let canonical = canonical_structured(rule, f);
    let bound = opts.bound_for(h.node_count());
    for x in term_targets(h, bound, &opts)? {
        let x = Arc::new(x);
        let mut verdict: Option<VerificationVerdict> = None;
        let mut failure: Option<RewriteError> = None;
        for_each_term_hom(r, &r.node_set(), &r.labeled_nodes(), &x, HomKind::Mono, &NodeMap::new(), |gx| {
            let Some(fixed) = consistent_map(l.nodes().map(|n| (f.node(n).clone(), gx[rule.tau().node(n).expect("τ total")].clone()))) else {
                return ControlFlow::Continue(());
            };
            let sigma_x: NodeMap = rule.sigma().map().iter().map(|(p, q)| (gx[p].clone(), f.node(q).clone())).collect();
            for_each_term_hom(l1, &l1.node_set(), &canonical, &x, HomKind::Any, &fixed, |tx| {
                let built = (|| -> Result<(HeteroMorphism, TermMorphism)> {
                    let tau = TermPartialMorphism::new(l1.clone(), x.clone(), tx.clone(), canonical.clone())?;
                    let sigma = TermPartialMorphism::bare(x.clone(), l1.clone(), sigma_x.clone())?;
                    Ok((HeteroMorphism::new(tau, sigma)?, TermMorphism::new(r.clone(), x.clone(), gx.clone())?))
                })();
                let (rho_x, g_x) = match built {
                    Ok(v) => v,
                    Err(e) => {
                        failure = Some(e);
                        return ControlFlow::Break(());
                    }
                };
                match check_hetero_cocone(rule, f, &rho_x, &g_x) {
                    Ok(rep) if !rep.ok() => return ControlFlow::Continue(()),
                    Err(e) => {
                        failure = Some(e);
                        return ControlFlow::Break(());
                    }
                    Ok(_) => {}
                }
                let count = count_cocone_morphisms(rho1, g, &rho_x, &g_x, HomKind::Any, 2);
                if count == 1 {
                    return ControlFlow::Continue(());
                }
                verdict = Some(VerificationVerdict::fail(
                    format!("cocone into {x} with g' = {}, τ1' = {}", show_map(gx), show_map(tx)),
                    count,
                ));
                ControlFlow::Break(())
            });
            if verdict.is_some() || failure.is_some() {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if let Some(v) = verdict {
            return Ok(v);
        }
    }
    Ok(VerificationVerdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homs::count_homs_extending;
    use crate::dpo::pushout_complement;
    use crate::hpo::{hpo_pushout, HeteroMorphism, HpoRule};
    use crate::pushout::pushout_total;
    use crate::spo::spo_pushout;
    use crate::sqpo::fpbc_monic_match;
    use crate::termgraph::{TermMorphism, TermPartialMorphism};

    fn g(nodes: &[&str], edges: &[(&str, &str, &str)]) -> Arc<Graph> {
        Arc::new(Graph::build(nodes, edges).unwrap())
    }

    fn hom(a: &Arc<Graph>, b: &Arc<Graph>, nodes: &[(&str, &str)], edges: &[(&str, &str)]) -> TotalMorphism {
        TotalMorphism::new(
            a.clone(),
            b.clone(),
            nodes.iter().map(|(x, y)| (NodeId::from(*x), NodeId::from(*y))).collect(),
            edges.iter().map(|(x, y)| (EdgeId::from(*x), EdgeId::from(*y))).collect(),
        )
        .unwrap()
    }

    fn g_ac() -> Arc<Graph> {
        g(&["a", "c"], &[("ac", "a", "c")])
    }

    /// Adds an isolated node to the candidate, retargeting both legs.
    fn with_garbage(po: &Pushout) -> Pushout {
        let object = Arc::new(with_isolated_node(&po.object));
        Pushout {
            rho1: po.rho1.with_target(object.clone()).unwrap(),
            g: po.g.with_target(object.clone()).unwrap(),
            object,
        }
    }

    #[test]
    fn identity_pushout_is_verified() {
        let l1 = g_ac();
        let id = TotalMorphism::identity(l1.clone());
        let po = pushout_total(&id, &id).unwrap();
        assert!(verify_pushout_bounded(&id, &id, &po, OracleOptions::default()).unwrap().ok);
    }

    #[test]
    fn pushout_mutants_are_rejected() {
        let l = g(&["a"], &[]);
        let r = g(&["a", "r"], &[]);
        let rho = hom(&l, &r, &[("a", "a")], &[]);
        let f = hom(&l, &g_ac(), &[("a", "a")], &[]);
        let po = pushout_total(&rho, &f).unwrap();
        assert_eq!((po.object.node_count(), po.object.edge_count()), (3, 1));
        assert!(verify_pushout_bounded(&rho, &f, &po, OracleOptions::default()).unwrap().ok);

        let v = verify_pushout_bounded(&rho, &f, &with_garbage(&po), OracleOptions::default()).unwrap();
        assert!(!v.ok && v.counterexample.unwrap().mediators >= 2);

        // Missing gluing: R and L1 side by side.
        let (u, inl, inr) = crate::ops::disjoint_union(f.target(), &r);
        let unglued = Pushout { object: u, rho1: inl, g: inr };
        let v = verify_pushout_bounded(&rho, &f, &unglued, OracleOptions::default()).unwrap();
        assert!(!v.ok);
    }

    /// Everything sent to the one-loop graph: a cocone, far smaller than
    /// the pushout.
    #[test]
    fn collapsed_candidates_are_rejected() {
        let k = g(&["x"], &[]);
        let r = g(&["x", "z"], &[("n", "x", "z")]);
        let big = g(&["p", "q", "s"], &[("pq", "p", "q"), ("ps", "p", "s"), ("qq", "q", "q")]);
        let rho = hom(&k, &r, &[("x", "x")], &[]);
        let f = hom(&k, &big, &[("x", "p")], &[]);
        let x = Arc::new(single_loop());
        let u = x.nodes().iter().next().unwrap().as_str().to_owned();
        let uu = x.edges().keys().next().unwrap().as_str().to_owned();
        let collapse = |src: &Arc<Graph>| {
            let nodes: Vec<(&str, &str)> = src.nodes().iter().map(|n| (n.as_str(), u.as_str())).collect();
            let edges: Vec<(&str, &str)> = src.edges().keys().map(|e| (e.as_str(), uu.as_str())).collect();
            hom(src, &x, &nodes, &edges)
        };
        let candidate = Pushout { object: x.clone(), rho1: collapse(&big), g: collapse(&r) };
        assert!(!verify_pushout_bounded(&rho, &f, &candidate, OracleOptions::default()).unwrap().ok);

        let partial = PartialMorphism::from_total(&rho);
        let res = spo_pushout(&partial, &f).unwrap().unwrap();
        assert!(verify_partial_pushout_bounded(&partial, &f, &res, OracleOptions::default()).unwrap().ok);
        let candidate = crate::spo::SpoResult {
            r1: PartialMorphism::from_total(&collapse(&big)),
            g: collapse(&r),
            object: x.clone(),
        };
        assert!(!verify_partial_pushout_bounded(&partial, &f, &candidate, OracleOptions::default()).unwrap().ok);
    }

    #[test]
    fn naive_spo_object_deletes_and_drops_dangling() {
        let l = g(&["a", "b"], &[]);
        let r = PartialMorphism::new(l.clone(), g(&["a"], &[]), g(&["a"], &[]), [("a".into(), "a".into())].into(), BTreeMap::new()).unwrap();
        let l1 = g(&["a", "b", "c"], &[("bc", "b", "c"), ("ac", "a", "c")]);
        let f = hom(&l, &l1, &[("a", "a"), ("b", "b")], &[]);
        let o = naive_spo_object(&r, &f).unwrap();
        assert_eq!((o.node_count(), o.edge_count()), (2, 1));
    }

    #[test]
    fn exhaustive_mode_agrees() {
        let l = g(&["a"], &[]);
        let r = g(&["a"], &[("lp", "a", "a")]);
        let rho = hom(&l, &r, &[("a", "a")], &[]);
        let f = hom(&l, &g(&["a", "b"], &[]), &[("a", "a")], &[]);
        let po = pushout_total(&rho, &f).unwrap();
        let opts = OracleOptions {
            bound: Some(3),
            exhaustive: true,
            exhaustive_edges: 2,
        };
        assert!(verify_pushout_bounded(&rho, &f, &po, opts).unwrap().ok);
        assert!(!verify_pushout_bounded(&rho, &f, &with_garbage(&po), opts).unwrap().ok);
    }

    #[test]
    fn naive_pushout_glues() {
        let k = g(&["k"], &[]);
        let a = hom(&k, &g_ac(), &[("k", "a")], &[]);
        let b = hom(&k, &g(&["z"], &[("zz", "z", "z")]), &[("k", "z")], &[]);
        let np = naive_pushout(&a, &b).unwrap();
        assert_eq!((np.object.node_count(), np.object.edge_count()), (2, 2));
    }

    #[test]
    fn partial_pushout_of_deletion() {
        let l = g(&["a"], &[]);
        let r = PartialMorphism::nowhere(l.clone(), g(&[], &[]));
        let f = hom(&l, &g_ac(), &[("a", "a")], &[]);
        let res = spo_pushout(&r, &f).unwrap().unwrap();
        assert_eq!(res.object.nodes().len(), 1);
        assert!(verify_partial_pushout_bounded(&r, &f, &res, OracleOptions::default()).unwrap().ok);

        let object = Arc::new(with_isolated_node(&res.object));
        let mutant = crate::spo::SpoResult {
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
        };
        let v = verify_partial_pushout_bounded(&r, &f, &mutant, OracleOptions::default()).unwrap();
        assert!(!v.ok && v.counterexample.unwrap().mediators >= 2);
    }

    fn cloning_instance() -> (TotalMorphism, TotalMorphism) {
        let lg = g(&["p"], &[]);
        let k = g(&["k1", "k2"], &[]);
        let l = hom(&k, &lg, &[("k1", "p"), ("k2", "p")], &[]);
        let f = hom(&lg, &g(&["p", "q"], &[("qp", "q", "p")]), &[("p", "p")], &[]);
        (l, f)
    }

    #[test]
    fn covered_partial_mutants_are_rejected() {
        // every item of R1 is reached by a leg, so only shared items vary
        let l = g(&["a"], &[]);
        let l1 = g(&["a", "b", "c"], &[]);
        let f = hom(&l, &l1, &[("a", "a")], &[]);
        let r = PartialMorphism::from_total(&TotalMorphism::identity(l.clone()));
        let res = spo_pushout(&r, &f).unwrap().unwrap();
        assert!(verify_partial_pushout_bounded(&r, &f, &res, OracleOptions::default()).unwrap().ok);
        let merged = g(&["a", "bc"], &[]);
        let mutant = crate::spo::SpoResult {
            r1: PartialMorphism::from_total(&hom(&l1, &merged, &[("a", "a"), ("b", "bc"), ("c", "bc")], &[])),
            g: hom(&l, &merged, &[("a", "a")], &[]),
            object: merged.clone(),
        };
        assert!(!verify_partial_pushout_bounded(&r, &f, &mutant, OracleOptions::default()).unwrap().ok);

        // deleting the context node c as well
        let l1 = g(&["a", "c"], &[("ac", "a", "c")]);
        let f = hom(&l, &l1, &[("a", "a")], &[]);
        let r = PartialMorphism::nowhere(l.clone(), g(&[], &[]));
        let empty = g(&[], &[]);
        let mutant = crate::spo::SpoResult {
            r1: PartialMorphism::nowhere(l1.clone(), empty.clone()),
            g: TotalMorphism::identity(empty.clone()),
            object: empty,
        };
        assert!(!verify_partial_pushout_bounded(&r, &f, &mutant, OracleOptions::default()).unwrap().ok);
    }

    #[test]
    fn fpbc_cloning_and_mutant() {
        let (l, f) = cloning_instance();
        let pc = fpbc_monic_match(&l, &f).unwrap();
        assert_eq!((pc.object.node_count(), pc.object.edge_count()), (3, 2));
        assert!(verify_pullback(&l, &f, &pc.l1, &pc.g).unwrap().ok);
        assert!(verify_fpbc_bounded(&l, &f, &pc.l1, &pc.g, OracleOptions::default()).unwrap().ok);

        // Drop one replicated edge.
        let dropped = pc.object.edges().keys().next().unwrap().clone();
        let edges: BTreeSet<EdgeId> = pc.object.edges().keys().filter(|e| **e != dropped).cloned().collect();
        let obj = Arc::new(pc.object.subgraph(pc.object.nodes(), &edges).unwrap());
        let l1 = pc.l1.restrict(obj.clone()).unwrap();
        let gm = pc.g.with_target(obj).unwrap();
        assert!(verify_pullback(&l, &f, &l1, &gm).unwrap().ok);
        assert!(!verify_fpbc_bounded(&l, &f, &l1, &gm, OracleOptions::default()).unwrap().ok);
    }

    #[test]
    fn pullback_perturbation_fails() {
        let (l, f) = cloning_instance();
        let pc = fpbc_monic_match(&l, &f).unwrap();
        // An extra node over p breaks the pullback.
        let mut nodes = pc.object.nodes().clone();
        nodes.insert(NodeId::from("extra"));
        let obj = Arc::new(Graph::new(nodes, pc.object.edges().clone()).unwrap());
        let mut nm = pc.l1.node_map().clone();
        nm.insert(NodeId::from("extra"), NodeId::from("p"));
        let l1 = TotalMorphism::new(obj.clone(), pc.l1.target().clone(), nm, pc.l1.edge_map().clone()).unwrap();
        let gm = pc.g.with_target(obj).unwrap();
        assert!(!verify_pullback(&l, &f, &l1, &gm).unwrap().ok);
    }

    #[test]
    fn identity_complement_is_final_and_unique() {
        let l1 = g_ac();
        let id = TotalMorphism::identity(l1.clone());
        assert!(verify_pullback(&id, &id, &id, &id).unwrap().ok);
        assert!(verify_fpbc_bounded(&id, &id, &id, &id, OracleOptions::default()).unwrap().ok);
        assert!(verify_poc_bounded(&id, &id, &id, &id, OracleOptions::default()).unwrap().ok);
    }

    #[test]
    fn pushout_complement_and_mutant() {
        let lg = g(&["a", "b"], &[("ab", "a", "b")]);
        let k = g(&["a"], &[]);
        let l = TotalMorphism::inclusion(k, lg.clone()).unwrap();
        let l1 = g(&["a", "b", "c"], &[("ab", "a", "b"), ("ca", "c", "a")]);
        let f = TotalMorphism::inclusion(lg, l1).unwrap();
        let pc = pushout_complement(&l, &f).unwrap().unwrap();
        assert!(verify_poc_bounded(&l, &f, &pc.l1, &pc.g, OracleOptions::default()).unwrap().ok);
        // A pushout complement is a pullback complement, mediated uniquely.
        assert!(verify_fpbc_bounded(&l, &f, &pc.l1, &pc.g, OracleOptions::default()).unwrap().ok);

        let mut nodes = pc.object.nodes().clone();
        nodes.insert(NodeId::from("b"));
        let obj = Arc::new(Graph::new(nodes, pc.object.edges().clone()).unwrap());
        let mut nm = pc.l1.node_map().clone();
        nm.insert(NodeId::from("b"), NodeId::from("b"));
        let bad_l1 = TotalMorphism::new(obj.clone(), pc.l1.target().clone(), nm, pc.l1.edge_map().clone()).unwrap();
        let bad_g = pc.g.with_target(obj).unwrap();
        assert!(!verify_poc_bounded(&l, &f, &bad_l1, &bad_g, OracleOptions::default()).unwrap().ok);
    }

    const SIG: &[(&str, usize)] = &[("f", 2), ("a", 0)];

    fn tg(nodes: &[(&str, Option<(&str, &[&str])>)]) -> Arc<TermGraph> {
        Arc::new(TermGraph::build(SIG, nodes).unwrap())
    }

    fn clone_rule() -> HpoRule {
        let l = tg(&[("x", None)]);
        let r = tg(&[("x", None), ("x2", None)]);
        let tau = TermPartialMorphism::new(
            l.clone(),
            r.clone(),
            [(NodeId::from("x"), NodeId::from("x"))].into(),
            BTreeSet::new(),
        )
        .unwrap();
        let sigma = TermPartialMorphism::bare(r, l, [(NodeId::from("x2"), NodeId::from("x"))].into()).unwrap();
        HpoRule::new(HeteroMorphism::new(tau, sigma).unwrap()).unwrap()
    }

    #[test]
    fn hpo_identity_and_cloning() {
        let l = tg(&[("n", Some(("f", &["m", "m"]))), ("m", None)]);
        let rule = HpoRule::identity(l.clone());
        let id = TermMorphism::identity(l);
        let res = hpo_pushout(&rule, &id).unwrap();
        let v = verify_initial_cocone_bounded(&rule, &id, res.rho1.morphism(), &res.g, OracleOptions::default());
        assert!(v.unwrap().ok);

        let rule = clone_rule();
        let host = tg(&[("u", Some(("f", &["v", "v"]))), ("v", Some(("a", &[])))]);
        let f = TermMorphism::new(rule.lhs().clone(), host, [(NodeId::from("x"), NodeId::from("u"))].into()).unwrap();
        let res = hpo_pushout(&rule, &f).unwrap();
        let v = verify_initial_cocone_bounded(&rule, &f, res.rho1.morphism(), &res.g, OracleOptions::default());
        assert!(v.unwrap().ok);
    }

    #[test]
    fn hpo_garbage_node_fails_uniqueness() {
        let rule = clone_rule();
        let host = tg(&[("u", None), ("w", Some(("a", &[])))]);
        let f = TermMorphism::new(rule.lhs().clone(), host.clone(), [(NodeId::from("x"), NodeId::from("u"))].into()).unwrap();
        let res = hpo_pushout(&rule, &f).unwrap();
        let mut entries = res.object.entries().clone();
        entries.insert(NodeId::from("junk"), None);
        let h = Arc::new(TermGraph::new(res.object.signature().clone(), entries).unwrap());
        let tau = TermPartialMorphism::new(
            host.clone(),
            h.clone(),
            res.rho1.tau().map().clone(),
            res.rho1.tau().structured().clone(),
        )
        .unwrap();
        let sigma = TermPartialMorphism::bare(h.clone(), host, res.rho1.sigma().map().clone()).unwrap();
        let g = TermMorphism::new(rule.rhs().clone(), h, res.g.map().clone()).unwrap();
        let rho1 = HeteroMorphism::new(tau, sigma).unwrap();
        let v = verify_initial_cocone_bounded(&rule, &f, &rho1, &g, OracleOptions::default()).unwrap();
        assert!(!v.ok && v.counterexample.as_ref().unwrap().mediators >= 2, "{v}");
    }

    #[test]
    fn term_merge_closes_under_congruence() {
        let t = tg(&[
            ("p", Some(("f", &["a1", "a1"]))),
            ("q", Some(("f", &["a2", "a2"]))),
            ("a1", None),
            ("a2", Some(("a", &[]))),
        ]);
        let m = merge_term_nodes(&t, &NodeId::from("p"), &NodeId::from("q")).unwrap();
        assert_eq!(m.node_count(), 2);
        assert!(merge_term_nodes(&t, &NodeId::from("p"), &NodeId::from("a2")).is_none());
    }

    /// Brute force: every pair of node and edge maps, filtered.
    fn brute_homs(a: &Graph, b: &Graph) -> usize {
        let an: Vec<&NodeId> = a.nodes().iter().collect();
        let bn: Vec<&NodeId> = b.nodes().iter().collect();
        let ae: Vec<(&EdgeId, &Edge)> = a.edges().iter().collect();
        let be: Vec<(&EdgeId, &Edge)> = b.edges().iter().collect();
        let mut count = 0;
        let nmaps = bn.len().pow(an.len() as u32);
        let emaps = be.len().pow(ae.len() as u32);
        for mut i in 0..nmaps {
            let mut nm = BTreeMap::new();
            for x in &an {
                nm.insert(*x, bn[i % bn.len()]);
                i /= bn.len().max(1);
            }
            for mut j in 0..emaps {
                let ok = ae.iter().all(|(_, e)| {
                    let (_, t) = be[j % be.len()];
                    j /= be.len();
                    nm[&e.src] == &t.src && nm[&e.tgt] == &t.tgt
                });
                if ok {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let graphs = small_graphs(3, 2).unwrap();
        for a in graphs.iter().step_by(7) {
            for b in graphs.iter().step_by(11) {
                let fast = count_homs_extending(
                    &Arc::new(a.clone()),
                    &Arc::new(b.clone()),
                    HomKind::Any,
                    &NodeMap::new(),
                    &EdgeMap::new(),
                    usize::MAX,
                );
                assert_eq!(fast, brute_homs(a, b), "{a} → {b}");
                let (ai, bi) = (IxGraph::new(a), IxGraph::new(b));
                let (fx_n, fx_e) = (vec![Fix::Free; ai.node_count()], vec![Fix::Free; ai.edge_count()]);
                assert_eq!(count_ix_homs(&ai, &bi, true, &fx_n, &fx_e, usize::MAX), fast, "{a} → {b}");
                assert_eq!(count_ix_homs(&ai, &bi, false, &fx_n, &fx_e, usize::MAX), brute_partial_homs(a, b), "{a} ⇀ {b}");
            }
        }
    }

    #[test]
    fn parallel_orbits_are_set_partitions() {
        let loops = |k: usize| {
            let names: Vec<String> = (0..k).map(|i| format!("e{i}")).collect();
            let edges: Vec<(&str, &str, &str)> = names.iter().map(|n| (n.as_str(), "v", "v")).collect();
            IxGraph::new(&Graph::build(&["v"], &edges).unwrap())
        };
        let count = |k: usize, m: usize, total: bool| {
            let (a, b) = (loops(k), loops(m));
            let mut n = 0;
            let _ = for_each_ix_hom_up_to_parallel(&a, &b, total, &[Fix::Free], &vec![Fix::Free; k], &[], &mut |_, _| {
                n += 1;
                ControlFlow::Continue(())
            });
            n
        };
        // partitions of 3 items into at most m blocks
        assert_eq!(count(3, 1, true), 1);
        assert_eq!(count(3, 2, true), 4);
        assert_eq!(count(3, 5, true), 5);
        // partial: the node may be undefined too, and each edge may be
        assert_eq!(count(2, 2, false), 1 + 1 + 2 + 2);
    }

    /// Partial homomorphisms: a total one from every subgraph.
    fn brute_partial_homs(a: &Graph, b: &Graph) -> usize {
        let nodes: Vec<&NodeId> = a.nodes().iter().collect();
        let mut total = 0;
        for mask in 0u32..(1 << nodes.len()) {
            let dom: BTreeSet<NodeId> = (0..nodes.len()).filter(|i| mask & (1 << i) != 0).map(|i| nodes[i].clone()).collect();
            let inner: Vec<&EdgeId> = a.edges().iter().filter(|(_, e)| dom.contains(&e.src) && dom.contains(&e.tgt)).map(|(id, _)| id).collect();
            for emask in 0u32..(1 << inner.len()) {
                let es: BTreeSet<EdgeId> = (0..inner.len()).filter(|i| emask & (1 << i) != 0).map(|i| inner[i].clone()).collect();
                total += brute_homs(&a.subgraph(&dom, &es).unwrap(), b);
            }
        }
        total
    }
}
