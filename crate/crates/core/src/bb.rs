//! Branch and bound over astral graphs for maximizing `f - cut_G`.
//!
//! Every node is an [`Astral`]; its relaxed subproblem maximizes
//! `f_u - δ̂` over the node's feasible family, which bounds `f - cut_G` on
//! that family from above. The incumbent is compared under the total order
//! (value, then smaller subset), so the search returns the order-maximal
//! maximizer even when several subsets tie.
//!
//! Closing rule. With `U` the node's upper bound (`ρ · θ̂₁`) and `(z*, Z)` the
//! incumbent, a node is closed when `U < z*`, or when `U == z*` and `Z` is no
//! larger than the smallest non-empty member of the node's family: nothing
//! below can then beat `Z` in the total order. Checked before the incumbent
//! update the node counts as pruned, after it as fathomed.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use hashbrown::HashSet;

use crate::astral::Astral;
use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::ground::{beats, SetFunction, Subset};
use crate::submax::{interval_max, ls_max, maximize_modular, Interval};

/// Choice of the upper bound `f_u` of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FuMode {
    /// `f_u(S) = sum of f({v})`; the subproblem becomes modular.
    Modular,
    /// `f_u = f`.
    Tight,
}

/// Subproblem solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Engine {
    /// O(n) rule for modular subproblems.
    ClosedForm,
    /// Exact interval search on the preservation rules.
    Interval,
    /// LS local search; nodes too small for the configured approximation
    /// factor fall back to the exact interval search.
    LocalSearch { epsilon: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BbConfig {
    /// `f_u` choice per depth; the last entry applies to all deeper nodes.
    pub fu_schedule: Vec<FuMode>,
    pub engine: Engine,
    /// `ρ >= 1`: upper bounds are `ρ · θ̂₁`. Above 1 only with local search.
    pub approx_factor: f64,
    /// Branch every node regardless of bounds (exploration tests).
    pub disable_pruning: bool,
    /// Stop after this many processed nodes.
    pub node_cap: Option<usize>,
    /// Process only nodes of depth `<= k`, leaving deeper ones open.
    pub depth_limit: Option<usize>,
}

impl BbConfig {
    pub fn exact(fu: FuMode, engine: Engine) -> Self {
        Self {
            fu_schedule: alloc::vec![fu],
            engine,
            approx_factor: 1.0,
            disable_pruning: false,
            node_cap: None,
            depth_limit: None,
        }
    }

    /// Local-search subproblems with factor-4 pruning and fathoming.
    pub fn approximate(fu: FuMode, epsilon: f64) -> Self {
        Self { approx_factor: 4.0, ..Self::exact(fu, Engine::LocalSearch { epsilon }) }
    }

    pub fn fu_at(&self, depth: usize) -> FuMode {
        let last = self.fu_schedule.len().saturating_sub(1);
        self.fu_schedule.get(depth.min(last)).copied().unwrap_or(FuMode::Modular)
    }

    pub fn validate(&self) -> Result<()> {
        if self.fu_schedule.is_empty() {
            return Err(Error::Argument("f_u schedule must not be empty"));
        }
        if !(self.approx_factor >= 1.0) || !self.approx_factor.is_finite() {
            return Err(Error::Argument("approximation factor must be a finite number >= 1"));
        }
        match self.engine {
            Engine::ClosedForm if self.fu_schedule.contains(&FuMode::Tight) => {
                Err(Error::Argument("closed-form engine requires modular f_u"))
            }
            Engine::LocalSearch { epsilon } if !(epsilon > 0.0) => Err(Error::Argument("epsilon must be positive")),
            Engine::ClosedForm | Engine::Interval if self.approx_factor != 1.0 => {
                Err(Error::Argument("approximation factor above 1 requires the local-search engine"))
            }
            _ => Ok(()),
        }
    }
}

/// Solution of one relaxed subproblem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubproblemResult {
    /// `V̂₁`: (approximate) maximizer of `f_u - δ̂` over the family.
    pub v1: Subset,
    /// `V̂₂`: maximal extension of `V̂₁` in the family.
    pub v2: Subset,
    /// `θ̂₁ = (f_u - δ̂)(V̂₁)`.
    pub theta1: f64,
    /// `θ̂₂ = max of (f - cut)(V̂ᵢ)`.
    pub theta2: f64,
    /// Whichever of `V̂₁, V̂₂` attains `θ̂₂` (total order on ties).
    pub best: Subset,
    /// Factor applied to `θ̂₁` at this node; 1 when solved exactly.
    pub rho: f64,
}

impl SubproblemResult {
    /// `ρ · θ̂₁`, an upper bound of `f - cut` on the node's family.
    pub fn upper_bound(&self) -> f64 {
        (self.rho * self.theta1).max(self.theta2)
    }

    /// Builds the result from `V̂₁` and `V̂₂`. `θ̂₁ >= θ̂₂` holds exactly since
    /// `V̂₂` is feasible; exact solves restore it when summation order
    /// differs in the last bit.
    pub(crate) fn assemble<F: SetFunction>(
        dec: &Decomposition<F>,
        v1: Subset,
        v2: Subset,
        theta1: f64,
        rho: f64,
    ) -> Self {
        let (theta2, best) = pick_best(dec, v1, v2);
        let theta1 = if rho == 1.0 { theta1.max(theta2) } else { theta1 };
        Self { v1, v2, theta1, theta2, best, rho }
    }
}

/// Whether local search at this domain size carries factor `rho`:
/// `1/3 - eps/r >= 1/rho`.
pub fn local_search_supports(rho: f64, epsilon: f64, r: usize) -> bool {
    r > 0 && rho > 1.0 && 1.0 / 3.0 - epsilon / r as f64 >= 1.0 / rho
}

pub(crate) fn pick_best<F: SetFunction>(dec: &Decomposition<F>, a: Subset, b: Subset) -> (f64, Subset) {
    let (ca, cb) = ((dec.objective(a), a), (dec.objective(b), b));
    if beats(cb, ca) {
        cb
    } else {
        ca
    }
}

/// `f_u - δ̂` restricted to the independent set of a non-complete node.
pub(crate) struct Relaxed<'a, F> {
    pub(crate) dec: &'a Decomposition<F>,
    pub(crate) node: Astral,
    pub(crate) mode: FuMode,
    pub(crate) weights: &'a [f64],
}

impl<F: SetFunction> SetFunction for Relaxed<'_, F> {
    fn ground_size(&self) -> usize {
        self.dec.n()
    }
    fn value(&self, s: Subset) -> f64 {
        match self.mode {
            FuMode::Modular => s.iter().map(|v| self.weights[v]).sum(),
            FuMode::Tight => {
                let dh: usize = s.iter().map(|v| self.node.relaxed_degree(self.dec.graph(), v)).sum();
                self.dec.f_value(s) - dh as f64
            }
        }
    }
}

/// Singleton values `f({v}) - d̂(v)` for `v` in `domain`; other entries 0.
pub(crate) fn singleton_weights<F: SetFunction>(dec: &Decomposition<F>, node: &Astral, domain: Subset) -> Vec<f64> {
    let mut w = alloc::vec![0.0; dec.n()];
    for v in domain.iter() {
        w[v] = dec.f_value(Subset::singleton(v)) - node.relaxed_degree(dec.graph(), v) as f64;
    }
    w
}

/// Best of the empty set and the singletons of `domain` under `f - cut`,
/// the exact subproblem at `K_n` (where `f_u = f` and `δ̂ = cut`).
pub(crate) fn solve_complete<F: SetFunction>(dec: &Decomposition<F>, domain: Subset) -> SubproblemResult {
    let mut best = (0.0, Subset::EMPTY);
    for v in domain.iter() {
        let s = Subset::singleton(v);
        let val = dec.f_value(s) - dec.graph().degree(v) as f64;
        if beats((val, s), best) {
            best = (val, s);
        }
    }
    let theta2 = dec.objective(best.1);
    SubproblemResult { v1: best.1, v2: best.1, theta1: best.0, theta2, best: best.1, rho: 1.0 }
}

/// Solves the relaxed subproblem at `node`.
pub fn solve_subproblem<F: SetFunction>(node: &Astral, dec: &Decomposition<F>, cfg: &BbConfig) -> Result<SubproblemResult> {
    if node.n() != dec.n() {
        return Err(Error::Argument("node and decomposition disagree on ground set size"));
    }
    if node.is_complete() {
        return Ok(solve_complete(dec, Subset::full(dec.n())));
    }
    let indep = node.indep();
    let mode = cfg.fu_at(node.depth());
    let weights = singleton_weights(dec, node, indep);
    let relaxed = Relaxed { dec, node: *node, mode, weights: &weights };
    let (v1, theta1, rho) = match cfg.engine {
        Engine::ClosedForm => {
            if mode != FuMode::Modular {
                return Err(Error::Argument("closed-form engine requires modular f_u"));
            }
            let (s, v) = maximize_modular(&weights, indep);
            (s, v, 1.0)
        }
        Engine::Interval => {
            let (s, v) = interval_max(&relaxed, Interval::below(indep));
            (s, v, 1.0)
        }
        Engine::LocalSearch { epsilon } => {
            if local_search_supports(cfg.approx_factor, epsilon, indep.len()) {
                if indep.iter().any(|v| weights[v] < 0.0) {
                    return Err(Error::Contract("local-search subproblems need non-negative singleton values"));
                }
                let r = ls_max(&relaxed, indep, epsilon)?;
                (r.best, r.value, cfg.approx_factor)
            } else {
                let (s, v) = interval_max(&relaxed, Interval::below(indep));
                (s, v, 1.0)
            }
        }
    };
    Ok(SubproblemResult::assemble(dec, v1, indep, theta1, rho))
}

/// How a processed node was closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeAction {
    Pruned,
    Fathomed,
    /// Branched; `created` children were new.
    Branched { created: usize },
}

/// A processed node, reported to observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeEvent {
    pub node: Astral,
    pub depth: usize,
    pub result: SubproblemResult,
    pub action: NodeAction,
    /// Incumbent after processing.
    pub incumbent: Subset,
    pub z_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct BbStats {
    pub nodes_visited: usize,
    pub nodes_pruned: usize,
    pub nodes_fathomed: usize,
    pub nodes_branched: usize,
    pub max_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    /// All nodes closed; the incumbent is optimal.
    Complete,
    /// Stopped early. `bound` is an upper bound on the optimum, when a fully
    /// closed depth frontier exists.
    Interrupted { bound: Option<f64> },
}

/// Result of a run, in objective (`f - cut`) units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BbOutcome {
    pub best: Subset,
    pub value: f64,
    pub stats: BbStats,
    pub status: Status,
}

impl BbOutcome {
    pub fn is_complete(&self) -> bool {
        self.status == Status::Complete
    }
}

#[derive(Debug, Clone, Copy)]
struct OpenNode {
    priority: f64,
    seq: u64,
    node: Astral,
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenNode {}

impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenNode {
    // highest parent bound first, newest first among equals
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority.total_cmp(&other.priority).then(self.seq.cmp(&other.seq))
    }
}

/// Mutable search state: open nodes, visited keys, incumbent and the
/// per-depth gap records used for the interruption bound.
#[derive(Debug, Clone)]
pub struct BbState {
    open: BinaryHeap<OpenNode>,
    deferred: Vec<Astral>,
    visited: HashSet<u64>,
    seq: u64,
    incumbent: Subset,
    z_star: f64,
    /// Smallest element allowed in any solution.
    first_allowed: Option<usize>,
    /// Depth of the root; depths below are counted from it.
    root_depth: usize,
    delta_by_depth: Vec<f64>,
    stats: BbStats,
}

impl BbState {
    /// Fresh state: incumbent `EMPTY` with value `empty_value`, `root` open.
    pub fn new(root: Astral, empty_value: f64) -> Self {
        let mut visited = HashSet::new();
        visited.insert(root.indep().bits());
        let mut open = BinaryHeap::new();
        open.push(OpenNode { priority: f64::INFINITY, seq: 0, node: root });
        Self {
            open,
            deferred: Vec::new(),
            visited,
            seq: 1,
            incumbent: Subset::EMPTY,
            z_star: empty_value,
            first_allowed: root.indep().first(),
            root_depth: root.depth(),
            delta_by_depth: Vec::new(),
            stats: BbStats::default(),
        }
    }

    pub fn incumbent(&self) -> (Subset, f64) {
        (self.incumbent, self.z_star)
    }

    pub fn stats(&self) -> BbStats {
        self.stats
    }

    /// Canonical keys of every node created so far.
    pub fn visited_keys(&self) -> impl Iterator<Item = Subset> + '_ {
        self.visited.iter().map(|&b| Subset::from_bits(b))
    }

    /// Depth of `node` counted from the root of this search.
    pub fn depth_of(&self, node: &Astral) -> usize {
        node.depth().saturating_sub(self.root_depth)
    }

    pub fn open_count(&self) -> usize {
        self.open.len() + self.deferred.len()
    }

    /// Next node to process. Nodes deeper than `depth_limit` are set aside
    /// and stay open.
    pub fn pop(&mut self, depth_limit: Option<usize>) -> Option<Astral> {
        while let Some(OpenNode { node, .. }) = self.open.pop() {
            if depth_limit.is_some_and(|k| self.depth_of(&node) > k) {
                self.deferred.push(node);
                continue;
            }
            return Some(node);
        }
        None
    }

    /// Returns a popped node to the open set unprocessed.
    pub fn reopen(&mut self, node: Astral) {
        self.deferred.push(node);
    }

    fn smallest_member(&self, node: &Astral) -> Subset {
        let first = if node.is_complete() { self.first_allowed } else { node.indep().first() };
        first.map_or(Subset::EMPTY, Subset::singleton)
    }

    fn closes(&self, bound: f64, smallest: Subset) -> bool {
        bound < self.z_star || (bound == self.z_star && self.incumbent <= smallest)
    }

    /// Offers a candidate to the incumbent; true if it took over.
    pub fn offer(&mut self, set: Subset, value: f64) -> bool {
        if beats((value, set), (self.z_star, self.incumbent)) {
            self.incumbent = set;
            self.z_star = value;
            true
        } else {
            false
        }
    }

    /// Applies pruning, the incumbent update, fathoming and branching for a
    /// solved node.
    pub fn record(&mut self, node: Astral, result: &SubproblemResult, disable_pruning: bool) -> NodeAction {
        let depth = self.depth_of(&node);
        let bound = result.upper_bound();
        self.stats.nodes_visited += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.delta_by_depth.len() <= depth {
            self.delta_by_depth.resize(depth + 1, f64::NEG_INFINITY);
        }
        let gap = bound - result.theta2;
        self.delta_by_depth[depth] = self.delta_by_depth[depth].max(gap);

        let smallest = self.smallest_member(&node);
        if !disable_pruning && self.closes(bound, smallest) {
            self.stats.nodes_pruned += 1;
            return NodeAction::Pruned;
        }
        self.offer(result.best, result.theta2);
        if !disable_pruning && self.closes(bound, smallest) {
            self.stats.nodes_fathomed += 1;
            return NodeAction::Fathomed;
        }
        let mut created = 0;
        for child in node.children() {
            if self.visited.insert(child.indep().bits()) {
                self.open.push(OpenNode { priority: bound, seq: self.seq, node: child });
                self.seq += 1;
                created += 1;
            }
        }
        self.stats.nodes_branched += 1;
        NodeAction::Branched { created }
    }

    /// `z* + Δ_max` at the deepest fully closed depth frontier: an upper
    /// bound on the optimum. Equals `z*` when no node is open, `None` while
    /// the root is still open.
    pub fn interrupt_bound(&self) -> Option<f64> {
        let min_open = self
            .open
            .iter()
            .map(|o| self.depth_of(&o.node))
            .chain(self.deferred.iter().map(|a| self.depth_of(a)))
            .min();
        match min_open {
            None => Some(self.z_star),
            Some(0) => None,
            Some(d) => {
                let delta = self.delta_by_depth.get(d - 1).copied().unwrap_or(f64::NEG_INFINITY);
                Some(self.z_star + delta.max(0.0))
            }
        }
    }

    pub fn outcome(&self) -> BbOutcome {
        let status = if self.open_count() == 0 {
            Status::Complete
        } else {
            Status::Interrupted { bound: self.interrupt_bound() }
        };
        BbOutcome { best: self.incumbent, value: self.z_star, stats: self.stats, status }
    }
}

/// Solves one node's relaxation; implemented by the unconstrained and
/// constrained searches.
pub trait Relaxation {
    fn solve(&self, node: &Astral) -> Result<SubproblemResult>;
}

/// The relaxation of [`bb_maximize`].
pub struct Unconstrained<'a, F> {
    dec: &'a Decomposition<F>,
    cfg: &'a BbConfig,
}

impl<'a, F> Unconstrained<'a, F> {
    pub fn new(dec: &'a Decomposition<F>, cfg: &'a BbConfig) -> Self {
        Self { dec, cfg }
    }
}

impl<F: SetFunction> Relaxation for Unconstrained<'_, F> {
    fn solve(&self, node: &Astral) -> Result<SubproblemResult> {
        solve_subproblem(node, self.dec, self.cfg)
    }
}

/// Runs the node loop from `state` until no processable node is left or a
/// limit is hit.
pub fn drive<R, O>(state: &mut BbState, relax: &R, cfg: &BbConfig, mut observe: O) -> Result<()>
where
    R: Relaxation + ?Sized,
    O: FnMut(&NodeEvent),
{
    loop {
        if cfg.node_cap.is_some_and(|cap| state.stats.nodes_visited >= cap) {
            return Ok(());
        }
        let Some(node) = state.pop(cfg.depth_limit) else {
            return Ok(());
        };
        let result = relax.solve(&node)?;
        let action = state.record(node, &result, cfg.disable_pruning);
        let (incumbent, z_star) = state.incumbent();
        observe(&NodeEvent { node, depth: state.depth_of(&node), result, action, incumbent, z_star });
    }
}

/// Brute force for ground sets too small to carry astral graphs.
pub(crate) fn tiny<F: SetFunction>(dec: &Decomposition<F>, domain: Subset) -> BbOutcome {
    let r = solve_complete(dec, domain);
    BbOutcome { best: r.best, value: r.theta2, stats: BbStats::default(), status: Status::Complete }
}

/// Start of an unconstrained search: either already solved or a fresh state.
#[derive(Debug, Clone)]
pub enum Prepared {
    Solved(BbOutcome),
    Search(BbState),
}

/// Validates `cfg` against `dec` and sets up the root of the search.
pub fn bb_prepare<F: SetFunction>(dec: &Decomposition<F>, cfg: &BbConfig) -> Result<Prepared> {
    cfg.validate()?;
    let n = dec.n();
    if let Engine::LocalSearch { .. } = cfg.engine {
        if (0..n).any(|v| dec.objective(Subset::singleton(v)) < 0.0) {
            return Err(Error::Contract("local-search engine needs f - cut non-negative on singletons"));
        }
    }
    if n < 2 {
        return Ok(Prepared::Solved(tiny(dec, Subset::full(n))));
    }
    Ok(Prepared::Search(BbState::new(Astral::root(n)?, dec.objective(Subset::EMPTY))))
}

/// Maximizes `f - cut_G` of `dec` by astral branch and bound.
pub fn bb_maximize<F: SetFunction>(dec: &Decomposition<F>, cfg: &BbConfig) -> Result<BbOutcome> {
    bb_maximize_observed(dec, cfg, |_| {})
}

/// As [`bb_maximize`], reporting every processed node to `observe`.
pub fn bb_maximize_observed<F, O>(dec: &Decomposition<F>, cfg: &BbConfig, observe: O) -> Result<BbOutcome>
where
    F: SetFunction,
    O: FnMut(&NodeEvent),
{
    let mut state = match bb_prepare(dec, cfg)? {
        Prepared::Solved(out) => return Ok(out),
        Prepared::Search(state) => state,
    };
    drive(&mut state, &Unconstrained { dec, cfg }, cfg, observe)?;
    Ok(state.outcome())
}
