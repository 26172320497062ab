//! Decompositions `theta / alpha = f - cut_G` with `f` submodular.
//!
//! With `G = K_n` any `theta` decomposes once `alpha` is large enough: the
//! complete graph's cut function has slack `2·|A\B|·|B\A| >= 2` on every
//! incomparable pair, which absorbs the non-submodularity of `theta / alpha`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ground::{
    brute_force_argmax, submodularity_violation, worst_pair, SetFunction, Subset, PAIRWISE_CAP,
};

/// Lower clamp for [`min_alpha`].
pub const ALPHA_FLOOR: f64 = 1e-6;

fn pairwise_table<F: SetFunction + ?Sized>(theta: &F) -> Result<alloc::vec::Vec<f64>> {
    let n = theta.ground_size();
    if n > PAIRWISE_CAP {
        return Err(Error::OverCap { what: "pairwise check", n, cap: PAIRWISE_CAP });
    }
    Ok(Subset::full(n).submasks().map(|s| theta.value(s)).collect())
}

/// `max over A, B of theta(A∪B) + theta(A∩B) - theta(A) - theta(B)`.
///
/// Never negative: `A = B` contributes exactly zero.
pub fn modularity_gap<F: SetFunction + ?Sized>(theta: &F) -> Result<f64> {
    let table = pairwise_table(theta)?;
    let worst = worst_pair(&table, theta.ground_size(), |_, _, gap| gap);
    Ok(worst.map_or(0.0, |w| w.2.max(0.0)))
}

/// Smallest `alpha` for which `theta / alpha + cut_{K_n}` is submodular,
/// clamped below at [`ALPHA_FLOOR`].
pub fn min_alpha<F: SetFunction + ?Sized>(theta: &F) -> Result<f64> {
    let table = pairwise_table(theta)?;
    let worst = worst_pair(&table, theta.ground_size(), |a, b, gap| {
        // bicut of A\B and B\A in K_n
        let slack = (a.difference(b).len() * b.difference(a).len()) as f64;
        gap / (2.0 * slack)
    });
    Ok(worst.map_or(ALPHA_FLOOR, |w| w.2.max(ALPHA_FLOOR)))
}

/// Smallest `alpha` for which `theta / alpha + cut_G` is submodular, clamped
/// below at [`ALPHA_FLOOR`]. Fails when some pair violates submodularity by
/// more than `tolerance` while `G` has no edge between its differences.
pub fn min_alpha_on<F: SetFunction + ?Sized>(theta: &F, graph: &Graph, tolerance: f64) -> Result<f64> {
    if graph.vertex_count() != theta.ground_size() {
        return Err(Error::Argument("graph and set function disagree on ground set size"));
    }
    let table = pairwise_table(theta)?;
    let worst = worst_pair(&table, theta.ground_size(), |a, b, gap| {
        let slack = graph.bicut(a.difference(b), b.difference(a)) as f64;
        if slack > 0.0 {
            gap / (2.0 * slack)
        } else if gap > tolerance {
            f64::INFINITY
        } else {
            0.0
        }
    });
    match worst {
        Some((_, _, a)) if a.is_infinite() => Err(Error::Argument("graph cannot absorb the non-submodularity of theta")),
        w => Ok(w.map_or(ALPHA_FLOOR, |w| w.2.max(ALPHA_FLOOR))),
    }
}

/// `4M`, sufficient for any `theta` strictly bounded by `M`.
pub fn default_alpha(bound: f64) -> Result<f64> {
    if !(bound > 0.0) || !bound.is_finite() {
        return Err(Error::Argument("bound M must be positive and finite"));
    }
    Ok(4.0 * bound)
}

/// `theta / alpha = f - cut_G`, housing `theta`, `alpha` and `G`.
///
/// `theta` is shifted by `theta(EMPTY)` before scaling so `f` is normalized;
/// the shift is kept so results can be reported in `theta` units.
#[derive(Debug, Clone)]
pub struct Decomposition<F> {
    theta: F,
    alpha: f64,
    shift: f64,
    graph: Graph,
    direct: bool,
}

impl<F: SetFunction> Decomposition<F> {
    /// Builds `f = (theta - theta(EMPTY)) / alpha + cut_G`. For ground sets
    /// within [`PAIRWISE_CAP`] the submodularity of `f` is verified with
    /// `tolerance`.
    pub fn new(theta: F, alpha: f64, graph: Graph, tolerance: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Argument("alpha must be positive and finite"));
        }
        if graph.vertex_count() != theta.ground_size() {
            return Err(Error::Argument("graph and set function disagree on ground set size"));
        }
        let shift = theta.value(Subset::EMPTY);
        let dec = Self { theta, alpha, shift, graph, direct: false };
        dec.validate(tolerance)?;
        Ok(dec)
    }

    /// Uses a given submodular `f` directly; the maximized function is
    /// `f - f(EMPTY) - cut_G` and `alpha = 1`.
    pub fn from_submodular(f: F, graph: Graph, tolerance: f64) -> Result<Self> {
        if graph.vertex_count() != f.ground_size() {
            return Err(Error::Argument("graph and set function disagree on ground set size"));
        }
        let shift = f.value(Subset::EMPTY);
        let dec = Self { theta: f, alpha: 1.0, shift, graph, direct: true };
        dec.validate(tolerance)?;
        Ok(dec)
    }

    fn validate(&self, tolerance: f64) -> Result<()> {
        if self.n() > PAIRWISE_CAP {
            return Ok(());
        }
        match submodularity_violation(&self.f(), tolerance)? {
            Some((a, b, violation)) => Err(Error::NotSubmodular { a, b, violation }),
            None => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        self.theta.ground_size()
    }

    pub fn theta(&self) -> &F {
        &self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Constant removed from `theta` before scaling.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `f(s)`; normalized.
    pub fn f_value(&self, s: Subset) -> f64 {
        if s.is_empty() {
            return 0.0;
        }
        if self.direct {
            self.theta.value(s) - self.shift
        } else {
            (self.theta.value(s) - self.shift) / self.alpha + self.graph.cut(s) as f64
        }
    }

    /// `(f - cut_G)(s)`, the function the branch and bound maximizes.
    pub fn objective(&self, s: Subset) -> f64 {
        self.f_value(s) - self.graph.cut(s) as f64
    }

    /// Maps an objective value back to `theta` units.
    pub fn to_theta_units(&self, objective: f64) -> f64 {
        objective * self.alpha + self.shift
    }

    /// `f` as a set function.
    pub fn f(&self) -> DecomposedF<'_, F> {
        DecomposedF(self)
    }

    /// `f - cut_G` as a set function.
    pub fn objective_fn(&self) -> Objective<'_, F> {
        Objective(self)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposedF<'a, F>(&'a Decomposition<F>);

impl<F: SetFunction> SetFunction for DecomposedF<'_, F> {
    fn ground_size(&self) -> usize {
        self.0.n()
    }
    fn value(&self, s: Subset) -> f64 {
        self.0.f_value(s)
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Objective<'a, F>(&'a Decomposition<F>);

impl<F: SetFunction> SetFunction for Objective<'_, F> {
    fn ground_size(&self) -> usize {
        self.0.n()
    }
    fn value(&self, s: Subset) -> f64 {
        self.0.objective(s)
    }
    fn is_normalized(&self) -> bool {
        true
    }
}

/// `theta` with the empty-set value raised to the best of the empty set and
/// all singletons.
#[derive(Debug, Clone)]
pub struct ThetaTilde<F>(F);

impl<F: SetFunction> SetFunction for ThetaTilde<F> {
    fn ground_size(&self) -> usize {
        self.0.ground_size()
    }
    fn value(&self, s: Subset) -> f64 {
        if !s.is_empty() {
            return self.0.value(s);
        }
        (0..self.0.ground_size()).map(|v| self.0.value(Subset::singleton(v))).fold(self.0.value(s), f64::max)
    }
    fn bound(&self) -> f64 {
        self.0.bound()
    }
}

pub fn theta_tilde<F: SetFunction>(theta: F) -> ThetaTilde<F> {
    ThetaTilde(theta)
}

/// Structural facts about the maximizer of the tilde transform of a
/// decomposition's objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationReport {
    /// Maximizer of the tilde objective under the total order.
    pub maximizer: Subset,
    /// Whether `tilde + cut_G` is itself submodular, i.e. `G` decomposes the
    /// tilde function.
    pub graph_decomposes_tilde: bool,
    /// Maximizer is empty, a singleton, or dominating in `G`.
    pub trivial_or_dominating: bool,
    /// Every element of the maximizer has a neighbor inside it.
    pub no_isolated_member: bool,
}

/// Computes the tilde maximizer of `dec`'s objective by enumeration and
/// reports its structure in `dec.graph()`.
pub fn domination_report<F: SetFunction>(dec: &Decomposition<F>, tolerance: f64) -> Result<DominationReport> {
    let tilde = theta_tilde(dec.objective_fn());
    let (maximizer, _) = brute_force_argmax(&tilde)?;
    let graph = dec.graph();
    let f_tilde = crate::ground::FnFunction::new(dec.n(), |s| tilde.value(s) + graph.cut(s) as f64);
    let graph_decomposes_tilde = if dec.n() <= PAIRWISE_CAP {
        submodularity_violation(&f_tilde, tolerance)?.is_none()
    } else {
        false
    };
    let trivial = maximizer.len() <= 1;
    Ok(DominationReport {
        maximizer,
        graph_decomposes_tilde,
        trivial_or_dominating: trivial || graph.is_dominating(maximizer),
        no_isolated_member: trivial
            || maximizer.iter().all(|v| !graph.neighbors(v).intersection(maximizer.without(v)).is_empty()),
    })
}

/// The maximizer of the tilde objective is empty, a singleton, or a
/// dominating set of `dec.graph()`.
pub fn verify_prop4<F: SetFunction>(dec: &Decomposition<F>) -> Result<bool> {
    let tilde = theta_tilde(dec.objective_fn());
    let (v, _) = brute_force_argmax(&tilde)?;
    Ok(v.len() <= 1 || dec.graph().is_dominating(v))
}
