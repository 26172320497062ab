//! Maximization over downward-closed subset systems: the membership penalty
//! `q`, the penalized reformulation, the constrained branch and bound and the
//! LSA local search.

use alloc::vec::Vec;
use core::cell::Cell;

use crate::astral::Astral;
use crate::bb::{
    drive, singleton_weights, solve_complete, tiny, BbConfig, BbOutcome, BbState, Engine, FuMode,
    NodeEvent, Relaxation, Relaxed, SubproblemResult,
};
use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ground::{beats, SetFunction, Subset, ARGMAX_CAP, MAX_ELEMENTS};
use crate::submax::local_search;

/// Largest ground set for [`SubsetSystem::is_downward_closed`].
pub const CLOSURE_CHECK_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum SystemKind {
    /// Every subset.
    All,
    /// Subsets with at most `k` elements.
    Cardinality(usize),
    /// Independent sets of a graph.
    GraphIndependence(Graph),
    /// Subsets of at least one listed maximal set (an antichain).
    ExplicitMaximal(Vec<Subset>),
}

/// A downward-closed family `S` of subsets given by a membership function
/// `p`, with `s ∈ S` iff `p(s) <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetSystem {
    n: usize,
    kind: SystemKind,
}

impl SubsetSystem {
    pub fn all(n: usize) -> Result<Self> {
        Self::checked(n, SystemKind::All)
    }

    pub fn cardinality(n: usize, k: usize) -> Result<Self> {
        Self::checked(n, SystemKind::Cardinality(k))
    }

    pub fn graph_independence(graph: Graph) -> Result<Self> {
        Self::checked(graph.vertex_count(), SystemKind::GraphIndependence(graph))
    }

    /// Family generated by `maximal`, which must be an antichain of subsets
    /// fitting `n`. An empty list gives `{EMPTY}`.
    pub fn explicit(n: usize, maximal: Vec<Subset>) -> Result<Self> {
        for (i, &a) in maximal.iter().enumerate() {
            if !a.fits(n) {
                return Err(Error::WidthMismatch { subset: a, n });
            }
            if maximal.iter().enumerate().any(|(j, &b)| i != j && a.is_subset_of(b)) {
                return Err(Error::Argument("explicit maximal sets must form an antichain"));
            }
        }
        Self::checked(n, SystemKind::ExplicitMaximal(maximal))
    }

    fn checked(n: usize, kind: SystemKind) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::OverCap { what: "subset word", n, cap: MAX_ELEMENTS });
        }
        Ok(Self { n, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &SystemKind {
        &self.kind
    }

    /// Membership function: non-positive exactly on members.
    pub fn p(&self, s: Subset) -> f64 {
        if !s.fits(self.n) {
            return 1.0;
        }
        match &self.kind {
            SystemKind::All => 0.0,
            SystemKind::Cardinality(k) => s.len() as f64 - *k as f64,
            SystemKind::GraphIndependence(g) => g.induced_edges(s) as f64,
            SystemKind::ExplicitMaximal(sets) => {
                if s.is_empty() || sets.iter().any(|&m| s.is_subset_of(m)) {
                    0.0
                } else {
                    1.0
                }
            }
        }
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.p(s) <= 0.0
    }

    /// Word operations needed to evaluate `p` once: `1` for cardinality,
    /// `n` for graph independence, `n · m` for `m` explicit maximal sets.
    pub fn eval_cost_bound(&self) -> usize {
        match &self.kind {
            SystemKind::All | SystemKind::Cardinality(_) => 1,
            SystemKind::GraphIndependence(_) => self.n.max(1),
            SystemKind::ExplicitMaximal(sets) => self.n.max(1) * sets.len().max(1),
        }
    }

    /// Brute-force check that every subset of a member is a member.
    pub fn is_downward_closed(&self) -> Result<bool> {
        if self.n > CLOSURE_CHECK_CAP {
            return Err(Error::OverCap { what: "downward-closure check", n: self.n, cap: CLOSURE_CHECK_CAP });
        }
        let full = Subset::full(self.n);
        Ok(self.contains(Subset::EMPTY)
            && full
                .submasks()
                .filter(|&s| self.contains(s))
                .all(|s| s.iter().all(|v| self.contains(s.without(v)))))
    }
}

/// `q(s) = 0` on members of `sys`, `e^{|s|}` otherwise.
pub fn q_of(sys: &SubsetSystem, s: Subset) -> f64 {
    if sys.contains(s) {
        0.0
    } else {
        libm::exp(s.len() as f64)
    }
}

/// [`q_of`] as a [`SetFunction`].
#[derive(Debug, Clone, Copy)]
pub struct Penalty<'a>(pub &'a SubsetSystem);

impl SetFunction for Penalty<'_> {
    fn ground_size(&self) -> usize {
        self.0.n()
    }
    fn value(&self, s: Subset) -> f64 {
        q_of(self.0, s)
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

/// `g - M·q`, equal to `g` on the system and far below it elsewhere.
#[derive(Debug, Clone)]
pub struct PenalizedFunction<G> {
    base: G,
    m: f64,
    system: SubsetSystem,
}

impl<G: SetFunction> PenalizedFunction<G> {
    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn system(&self) -> &SubsetSystem {
        &self.system
    }
}

impl<G: SetFunction> SetFunction for PenalizedFunction<G> {
    fn ground_size(&self) -> usize {
        self.base.ground_size()
    }
    fn value(&self, s: Subset) -> f64 {
        let q = q_of(&self.system, s);
        if q == 0.0 {
            self.base.value(s)
        } else {
            self.base.value(s) - self.m * q
        }
    }
}

/// Penalized reformulation of maximizing `theta` over `sys`. `m` must exceed
/// `max |theta|`: computed exactly up to the enumeration cap, otherwise taken
/// from `theta.bound()`.
pub fn reformulate<G: SetFunction>(theta: G, sys: SubsetSystem, m: f64) -> Result<PenalizedFunction<G>> {
    let n = theta.ground_size();
    if sys.n() != n {
        return Err(Error::Argument("system and function disagree on ground set size"));
    }
    let ok = if n <= ARGMAX_CAP {
        let max_abs = Subset::full(n).submasks().map(|s| theta.value(s).abs()).fold(0.0, f64::max);
        m > max_abs
    } else {
        m >= theta.bound()
    };
    if !ok || !m.is_finite() {
        return Err(Error::Argument("penalty constant must exceed the largest |theta|"));
    }
    Ok(PenalizedFunction { base: theta, m, system: sys })
}

/// Extends `v1` by scanning `domain` in ascending order and adding every
/// element that keeps the set in the family.
pub fn greedy_extend<P: Fn(Subset) -> bool>(v1: Subset, domain: Subset, feasible: P) -> Result<Subset> {
    if !v1.is_subset_of(domain) || !feasible(v1) {
        return Err(Error::Argument("greedy extension must start from a feasible subset of the domain"));
    }
    Ok(domain.difference(v1).iter().fold(v1, |cur, x| if feasible(cur.with(x)) { cur.with(x) } else { cur }))
}

/// `(k + 4) + eps·H(k + 2) + 8·eps`.
pub fn lsa_bound_factor(k: usize, epsilon: f64) -> f64 {
    let harmonic: f64 = (1..=k + 2).map(|i| 1.0 / i as f64).sum();
    (k + 4) as f64 + epsilon * harmonic + 8.0 * epsilon
}

/// `|domain| · max g(v)` over singletons of `domain`, an upper bound on `g`
/// over subsets of `domain` when `g` is submodular and normalized.
#[allow(non_snake_case)]
pub fn choose_M<G: SetFunction + ?Sized>(g: &G, domain: Subset) -> Result<f64> {
    let best = domain.iter().map(|v| g.value(Subset::singleton(v))).fold(f64::NEG_INFINITY, f64::max);
    if !(best > 0.0) {
        return Err(Error::Argument("choosing M needs a singleton with positive value"));
    }
    Ok(domain.len() as f64 * best)
}

/// One LS pass inside [`lsa_max`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsaIteration {
    /// `X^(i)`, the domain searched.
    pub ground: Subset,
    /// Best singleton the pass started from.
    pub seed: Subset,
    /// `X̂^(i+1)`, the locally optimal set.
    pub local: Subset,
    /// `X^(i) \ X̂^(i+1)`.
    pub complement: Subset,
    pub subiterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsaResult {
    /// `X̂_A`: best of every local set and complement seen, under `g - Mq`.
    pub best: Subset,
    pub value: f64,
    /// `k`: index of the iteration whose complement was feasible.
    pub k: usize,
    /// Iterations `0..=k`.
    pub iterations: Vec<LsaIteration>,
    /// LS pass over the final feasible complement.
    pub final_pass: Option<LsaIteration>,
}

/// LSA over the whole ground set of `g`.
pub fn lsa_max<G: SetFunction + ?Sized>(g: &G, sys: &SubsetSystem, epsilon: f64, m: f64) -> Result<LsaResult> {
    lsa_max_within(g, sys, Subset::full(g.ground_size()), epsilon, m)
}

/// Approximate maximizer of a normalized non-negative submodular `g` over
/// members of `sys` inside `domain`. Every singleton of `domain` must be a
/// member with positive value, and `m >= choose_M(g, domain)`.
pub fn lsa_max_within<G: SetFunction + ?Sized>(
    g: &G,
    sys: &SubsetSystem,
    domain: Subset,
    epsilon: f64,
    m: f64,
) -> Result<LsaResult> {
    if !(epsilon > 0.0) {
        return Err(Error::Argument("epsilon must be positive"));
    }
    if !domain.fits(g.ground_size()) || sys.n() != g.ground_size() {
        return Err(Error::Argument("domain, system and function disagree on ground set size"));
    }
    if domain.is_empty() {
        return Ok(LsaResult { best: Subset::EMPTY, value: 0.0, k: 0, iterations: Vec::new(), final_pass: None });
    }
    if g.value(Subset::EMPTY) != 0.0 {
        return Err(Error::Contract("LSA needs a normalized function"));
    }
    for v in domain.iter() {
        let s = Subset::singleton(v);
        if !sys.contains(s) {
            return Err(Error::Contract("LSA needs every singleton in the system"));
        }
        if !(g.value(s) > 0.0) {
            return Err(Error::Contract("LSA needs positive singleton values"));
        }
    }
    if !(m >= choose_M(g, domain)?) || !m.is_finite() {
        return Err(Error::Argument("M must be at least |domain| times the best singleton value"));
    }

    let negative = Cell::new(false);
    let h = |s: Subset| {
        let q = q_of(sys, s);
        let v = g.value(s);
        if q == 0.0 && v < 0.0 {
            negative.set(true);
        }
        if q == 0.0 {
            v
        } else {
            v - m * q
        }
    };
    let pass = |ground: Subset| {
        let (seed, local, subiterations) = local_search(h, ground, epsilon);
        LsaIteration { ground, seed, local, complement: ground.difference(local), subiterations }
    };

    let mut best = (h(Subset::EMPTY), Subset::EMPTY);
    let mut offer = |s: Subset| {
        let cand = (h(s), s);
        if beats(cand, best) {
            best = cand;
        }
    };
    let mut iterations = Vec::new();
    let mut ground = domain;
    let final_pass = loop {
        let it = pass(ground);
        offer(it.local);
        offer(it.complement);
        iterations.push(it);
        if sys.contains(it.complement) {
            let last = (!it.complement.is_empty()).then(|| pass(it.complement));
            if let Some(p) = last {
                offer(p.local);
                offer(p.complement);
            }
            break last;
        }
        ground = it.complement;
    };
    if negative.get() {
        return Err(Error::Contract("LSA needs a non-negative function on the system"));
    }
    Ok(LsaResult { best: best.1, value: best.0, k: iterations.len() - 1, iterations, final_pass })
}

/// Subproblem engine for [`bbc_maximize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BbcEngine {
    /// Enumerate the node's feasible family.
    Exact,
    /// LSA on `f_u - δ̂` with `M` from [`choose_M`]; nodes whose independent
    /// set has at most `exact_threshold` elements are enumerated instead.
    Lsa { epsilon: f64, exact_threshold: usize },
}

impl BbcEngine {
    pub fn lsa(epsilon: f64) -> Self {
        BbcEngine::Lsa { epsilon, exact_threshold: 12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BbcConfig {
    pub fu_schedule: Vec<FuMode>,
    pub engine: BbcEngine,
    pub disable_pruning: bool,
    pub node_cap: Option<usize>,
    pub depth_limit: Option<usize>,
}

impl BbcConfig {
    pub fn new(fu: FuMode, engine: BbcEngine) -> Self {
        Self { fu_schedule: alloc::vec![fu], engine, disable_pruning: false, node_cap: None, depth_limit: None }
    }

    fn as_bb(&self) -> BbConfig {
        BbConfig {
            fu_schedule: self.fu_schedule.clone(),
            engine: Engine::Interval,
            approx_factor: 1.0,
            disable_pruning: self.disable_pruning,
            node_cap: self.node_cap,
            depth_limit: self.depth_limit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.fu_schedule.is_empty() {
            return Err(Error::Argument("f_u schedule must not be empty"));
        }
        match self.engine {
            BbcEngine::Lsa { epsilon, .. } if !(epsilon > 0.0) => Err(Error::Argument("epsilon must be positive")),
            _ => Ok(()),
        }
    }
}

struct ConstrainedRelaxation<'a, F> {
    dec: &'a Decomposition<F>,
    sys: &'a SubsetSystem,
    cfg: &'a BbConfig,
    engine: BbcEngine,
    /// Elements whose singleton belongs to the system.
    domain: Subset,
}

impl<F: SetFunction> ConstrainedRelaxation<'_, F> {
    fn enumerate(&self, g: &Relaxed<'_, F>, indep: Subset) -> (Subset, f64) {
        indep.submasks().filter(|&s| self.sys.contains(s)).fold((Subset::EMPTY, 0.0), |best, s| {
            let cand = (s, g.value(s));
            if beats((cand.1, cand.0), (best.1, best.0)) {
                cand
            } else {
                best
            }
        })
    }
}

impl<F: SetFunction> Relaxation for ConstrainedRelaxation<'_, F> {
    fn solve(&self, node: &Astral) -> Result<SubproblemResult> {
        if node.is_complete() {
            let r = solve_complete(self.dec, self.domain);
            let v2 = greedy_extend(r.v1, self.domain, |s| s.len() <= 1)?;
            return Ok(SubproblemResult::assemble(self.dec, r.v1, v2, r.theta1, 1.0));
        }
        let indep = node.indep();
        let mode = self.cfg.fu_at(node.depth());
        let weights = singleton_weights(self.dec, node, indep);
        let g = Relaxed { dec: self.dec, node: *node, mode, weights: &weights };
        let (v1, theta1, rho) = match self.engine {
            BbcEngine::Lsa { epsilon, exact_threshold } if indep.len() > exact_threshold => {
                if indep.iter().any(|v| weights[v] < 0.0) {
                    return Err(Error::Contract("LSA subproblems need non-negative singleton values"));
                }
                let support: Subset = indep.iter().filter(|&v| weights[v] > 0.0).collect();
                if support.is_empty() {
                    (Subset::EMPTY, 0.0, 1.0)
                } else {
                    let m = choose_M(&g, support)?;
                    let r = lsa_max_within(&g, self.sys, support, epsilon, m)?;
                    (r.best, r.value, lsa_bound_factor(r.k, epsilon))
                }
            }
            _ => {
                let (s, v) = self.enumerate(&g, indep);
                (s, v, 1.0)
            }
        };
        let v2 = greedy_extend(v1, indep, |s| self.sys.contains(s))?;
        Ok(SubproblemResult::assemble(self.dec, v1, v2, theta1, rho))
    }
}

/// Maximizes `f - cut_G` of `dec` over members of `sys` by astral branch and
/// bound. Elements whose singleton is not a member are removed up front.
pub fn bbc_maximize<F: SetFunction>(dec: &Decomposition<F>, sys: &SubsetSystem, cfg: &BbcConfig) -> Result<BbOutcome> {
    bbc_maximize_observed(dec, sys, cfg, |_| {})
}

/// As [`bbc_maximize`], reporting every processed node to `observe`.
pub fn bbc_maximize_observed<F, O>(dec: &Decomposition<F>, sys: &SubsetSystem, cfg: &BbcConfig, observe: O) -> Result<BbOutcome>
where
    F: SetFunction,
    O: FnMut(&NodeEvent),
{
    cfg.validate()?;
    let n = dec.n();
    if sys.n() != n {
        return Err(Error::Argument("system and decomposition disagree on ground set size"));
    }
    if !sys.contains(Subset::EMPTY) {
        return Err(Error::Argument("subset system must contain the empty set"));
    }
    let domain: Subset = (0..n).filter(|&v| sys.contains(Subset::singleton(v))).collect();
    if domain.len() < 2 {
        return Ok(tiny(dec, domain));
    }
    let bb = cfg.as_bb();
    let relax = ConstrainedRelaxation { dec, sys, cfg: &bb, engine: cfg.engine, domain };
    let mut state = BbState::new(Astral::with_indep(n, domain)?, dec.objective(Subset::EMPTY));
    drive(&mut state, &relax, &bb, observe)?;
    Ok(state.outcome())
}
