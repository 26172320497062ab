//! Seeded property suites behind `setmax verify`.

use std::fmt;

use rand::Rng;
use setmax_core::astral::{verify_fact6, Astral, FACT6_CAP};
use setmax_core::bb::bb_maximize_observed;
use setmax_core::constrained::{choose_M, lsa_bound_factor, lsa_max, reformulate, Penalty};
use setmax_core::decompose::{domination_report, min_alpha, verify_prop4};
use setmax_core::ground::{
    brute_force_argmax, brute_force_argmax_within, is_supermodular, ARGMAX_CAP, DEFAULT_TOLERANCE, PAIRWISE_CAP,
};
use setmax_core::submax::{ls_max, ls_subiteration_bound};
use setmax_core::{BbConfig, Decomposition, Engine, FuMode, Graph, SetFunction, Subset};

use crate::gen::{self, SystemChoice};
use crate::run::RunError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Fact1,
    Fact6,
    Prop4,
    Prop4Neighbor,
    Prop9,
    Prop14,
    Cor15,
    LsRatio,
    LsaBound,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Fact1,
        Suite::Fact6,
        Suite::Prop4,
        Suite::Prop4Neighbor,
        Suite::Prop9,
        Suite::Prop14,
        Suite::Cor15,
        Suite::LsRatio,
        Suite::LsaBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fact1 => "fact1",
            Suite::Fact6 => "fact6",
            Suite::Prop4 => "prop4",
            Suite::Prop4Neighbor => "prop4-neighbor",
            Suite::Prop9 => "prop9",
            Suite::Prop14 => "prop14",
            Suite::Cor15 => "cor15",
            Suite::LsRatio => "ls-ratio",
            Suite::LsaBound => "lsa-bound",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn default_n(self) -> usize {
        match self {
            Suite::Fact1 | Suite::LsRatio | Suite::LsaBound => 10,
            _ => 8,
        }
    }

    fn cap(self) -> usize {
        match self {
            Suite::Fact1 => 64,
            Suite::Fact6 => FACT6_CAP,
            Suite::Prop4 | Suite::Prop4Neighbor | Suite::Prop14 => PAIRWISE_CAP,
            Suite::Prop9 => 12,
            Suite::Cor15 | Suite::LsRatio | Suite::LsaBound => ARGMAX_CAP.min(16),
        }
    }

    fn min_n(self) -> usize {
        match self {
            Suite::Fact1 | Suite::Prop14 | Suite::Cor15 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteParams {
    pub trials: usize,
    /// Ground set size; `None` uses the suite default.
    pub n: Option<usize>,
    pub seed: u64,
    pub epsilon: f64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self { trials: 100, n: None, seed: 0, epsilon: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub suite: Suite,
    pub trials: usize,
    pub failures: usize,
    /// Largest amount by which a checked inequality was missed; 0 when none was.
    pub max_violation: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite={} trials={} failures={} max_violation={}",
            self.suite, self.trials, self.failures, self.max_violation
        )
    }
}

#[derive(Default)]
struct Tally {
    failures: usize,
    max_violation: f64,
}

impl Tally {
    /// Records one trial; `violation > 0` or `!ok` is a failure.
    fn check(&mut self, ok: bool, violation: f64) {
        if !ok {
            self.failures += 1;
        }
        if violation > self.max_violation {
            self.max_violation = violation;
        }
    }
}

fn k_n(theta: setmax_core::ground::TableFunction) -> Result<Decomposition<setmax_core::ground::TableFunction>, RunError> {
    let n = theta.ground_size();
    let alpha = min_alpha(&theta)?;
    Ok(Decomposition::new(theta, alpha, Graph::complete(n)?, DEFAULT_TOLERANCE)?)
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<SuiteResult, RunError> {
    let n = params.n.unwrap_or(suite.default_n());
    if n < suite.min_n() || n > suite.cap() {
        return Err(RunError::Usage(format!("suite {suite} needs {} <= n <= {}", suite.min_n(), suite.cap())));
    }
    if !(params.epsilon > 0.0) {
        return Err(RunError::Usage("--epsilon must be positive".into()));
    }
    let mut rng = gen::rng(params.seed);
    let mut t = Tally::default();
    let full = Subset::full(n);
    let eps = params.epsilon;
    for _ in 0..params.trials {
        match suite {
            Suite::Fact1 => {
                let g = gen::random_graph(n, 0.5, &mut rng);
                let a = Subset::from_bits(rng.gen::<u64>() & full.bits());
                let b = Subset::from_bits(rng.gen::<u64>() & full.bits());
                let lhs = (g.cut(a) + g.cut(b)) as i64;
                let rhs = (g.cut(a.union(b)) + g.cut(a.intersection(b)) + 2 * g.bicut(a.difference(b), b.difference(a)))
                    as i64;
                t.check(lhs == rhs && g.check_fact1(a, b), (lhs - rhs).abs() as f64);
            }
            Suite::Fact6 => {
                let a = if rng.gen_bool(0.1) {
                    Astral::complete(n)?
                } else {
                    let mut indep = Subset::EMPTY;
                    while indep.len() < 2 {
                        indep = Subset::from_bits(rng.gen::<u64>() & full.bits());
                    }
                    Astral::with_indep(n, indep)?
                };
                t.check(verify_fact6(&a)?, 0.0);
            }
            Suite::Prop4 | Suite::Prop4Neighbor => {
                let f = gen::random_submodular(n, &mut rng);
                let g = gen::random_graph(n, 0.5, &mut rng);
                let dec = Decomposition::from_submodular(f, g, DEFAULT_TOLERANCE)?;
                let ok = if suite == Suite::Prop4 {
                    verify_prop4(&dec)?
                } else {
                    let rep = domination_report(&dec, DEFAULT_TOLERANCE)?;
                    !rep.graph_decomposes_tilde || rep.no_isolated_member
                };
                t.check(ok, 0.0);
            }
            Suite::Prop9 => {
                let dec = k_n(gen::random_table(n, &mut rng))?;
                let cfg = BbConfig::exact(FuMode::Tight, Engine::Interval);
                let mut worst = f64::NEG_INFINITY;
                bb_maximize_observed(&dec, &cfg, |ev| {
                    let best = if ev.node.is_complete() {
                        full.submasks().filter(|s| s.len() <= 1).map(|s| dec.objective(s)).fold(f64::NEG_INFINITY, f64::max)
                    } else {
                        ev.node.indep().submasks().map(|s| dec.objective(s)).fold(f64::NEG_INFINITY, f64::max)
                    };
                    worst = worst.max(best - ev.result.theta1);
                })?;
                t.check(worst <= 0.0, worst);
            }
            Suite::Prop14 => {
                let kind = [SystemChoice::GraphIndependence, SystemChoice::Cardinality, SystemChoice::Explicit]
                    [rng.gen_range(0..3)];
                let sys = gen::random_system(n, kind, &mut rng);
                let q = Penalty(&sys);
                let empty = q.value(Subset::EMPTY);
                let ok = sys.is_downward_closed()?
                    && empty == 0.0
                    && full.submasks().all(|s| q.value(s) >= 0.0 && (q.value(s) == 0.0) == sys.contains(s))
                    && is_supermodular(&q, DEFAULT_TOLERANCE)?;
                t.check(ok, empty.abs());
            }
            Suite::Cor15 => {
                let theta = gen::random_table(n, &mut rng);
                let kind = [SystemChoice::GraphIndependence, SystemChoice::Cardinality, SystemChoice::Explicit]
                    [rng.gen_range(0..3)];
                let sys = gen::random_system(n, kind, &mut rng);
                let expected = brute_force_argmax_within(&theta, full, |s| sys.contains(s))?;
                let pen = reformulate(&theta, sys, theta.bound())?;
                let got = brute_force_argmax(&pen)?;
                t.check(got == expected, (expected.1 - got.1).abs());
            }
            Suite::LsRatio => {
                let g = gen::random_coverage(n, &mut rng);
                let r = ls_max(&g, full, eps)?;
                let opt = brute_force_argmax(&g)?.1;
                let need = (1.0 / 3.0 - eps / n as f64) * opt;
                let work_ok = (r.subiterations as f64) <= ls_subiteration_bound(n, eps);
                t.check(r.value >= need - 1e-9 && work_ok, need - r.value);
            }
            Suite::LsaBound => {
                let g = gen::random_coverage(n, &mut rng);
                let sys = gen::random_system(n, SystemChoice::GraphIndependence, &mut rng);
                let m = choose_M(&g, full)?;
                let r = lsa_max(&g, &sys, eps, m)?;
                let opt = brute_force_argmax_within(&g, full, |s| sys.contains(s))?.1;
                let lhs = lsa_bound_factor(r.k, eps) * r.value;
                t.check(lhs > opt && r.k <= n && sys.contains(r.best), opt - lhs);
            }
        }
    }
    Ok(SuiteResult { suite, trials: params.trials, failures: t.failures, max_violation: t.max_violation })
}
