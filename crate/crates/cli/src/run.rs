//! The `maximize`, `decompose` and `bench` commands, producing reports.

use std::fmt;
use std::time::Instant;

use setmax_core::constrained::SystemKind;
use setmax_core::decompose::{default_alpha, min_alpha, min_alpha_on, modularity_gap};
use setmax_core::ground::{brute_force_argmax, brute_force_argmax_within, is_submodular, ARGMAX_CAP, PAIRWISE_CAP};
use setmax_core::{
    bb_maximize, bbc_maximize, BbConfig, BbOutcome, BbcConfig, BbcEngine, Decomposition, Engine, FuMode, Graph,
    SetFunction, Status, Subset,
};
use thiserror::Error;

use crate::gen::{self, ThetaChoice};
use crate::instance::{format_set, Instance, Theta};
use crate::parallel::parallel_bb;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] setmax_core::Error),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, RunError> {
    Err(RunError::Usage(msg.into()))
}

/// Ordered `key=value` lines and the process exit code.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub lines: Vec<(String, String)>,
    pub exit_code: i32,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.lines {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    ClosedForm,
    Interval,
    Ls,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaChoice {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximizeOptions {
    pub mode: Option<Mode>,
    pub fu: FuMode,
    pub engine: Option<EngineChoice>,
    pub epsilon: f64,
    pub alpha: AlphaChoice,
    pub max_nodes: Option<usize>,
    pub interrupt_depth: Option<usize>,
    pub tolerance: f64,
    pub verify: bool,
    pub parallel: Option<usize>,
    pub disable_pruning: bool,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            mode: None,
            fu: FuMode::Modular,
            engine: None,
            epsilon: 1.0,
            alpha: AlphaChoice::Auto,
            max_nodes: None,
            interrupt_depth: None,
            tolerance: setmax_core::ground::DEFAULT_TOLERANCE,
            verify: false,
            parallel: None,
            disable_pruning: false,
        }
    }
}

/// Picks `alpha`: the smallest valid value up to the pairwise cap, `4M`
/// beyond it (complete graph only).
pub fn choose_alpha(inst: &Instance, choice: AlphaChoice, tolerance: f64) -> Result<f64, RunError> {
    if let AlphaChoice::Fixed(a) = choice {
        return Ok(a);
    }
    let n = inst.n();
    match (&inst.graph, n <= PAIRWISE_CAP) {
        (None, true) => Ok(min_alpha(&inst.theta)?),
        (Some(g), true) => Ok(min_alpha_on(&inst.theta, g, tolerance)?),
        (None, false) => Ok(default_alpha(inst.theta.bound())?),
        (Some(_), false) => usage(format!("--alpha auto with a custom graph needs n <= {PAIRWISE_CAP}")),
    }
}

pub fn decompose_instance(inst: &Instance, alpha: AlphaChoice, tolerance: f64) -> Result<Decomposition<&Theta>, RunError> {
    let alpha = choose_alpha(inst, alpha, tolerance)?;
    let graph = match &inst.graph {
        Some(g) => g.clone(),
        None => Graph::complete(inst.n())?,
    };
    Ok(Decomposition::new(&inst.theta, alpha, graph, tolerance)?)
}

fn constrained(inst: &Instance) -> Option<&setmax_core::SubsetSystem> {
    inst.system.as_ref().filter(|s| !matches!(s.kind(), SystemKind::All))
}

fn resolve(opts: &MaximizeOptions) -> Result<(Mode, EngineChoice), RunError> {
    let engine = opts.engine.unwrap_or(match (opts.mode, opts.fu) {
        (Some(Mode::Approx), _) => EngineChoice::Ls,
        (_, FuMode::Modular) => EngineChoice::ClosedForm,
        (_, FuMode::Tight) => EngineChoice::Interval,
    });
    let mode = opts.mode.unwrap_or(if engine == EngineChoice::Ls { Mode::Approx } else { Mode::Exact });
    match (mode, engine) {
        (Mode::Approx, EngineChoice::Ls) | (Mode::Exact, EngineChoice::ClosedForm | EngineChoice::Interval) => {}
        (Mode::Approx, _) => return usage("--mode approx requires --engine ls"),
        (Mode::Exact, _) => return usage("--engine ls requires --mode approx"),
    }
    if engine == EngineChoice::ClosedForm && opts.fu == FuMode::Tight {
        return usage("--engine closed-form requires --fu modular");
    }
    if !(opts.epsilon > 0.0) {
        return usage("--epsilon must be positive");
    }
    Ok((mode, engine))
}

pub fn run_maximize(inst: &Instance, opts: &MaximizeOptions) -> Result<Report, RunError> {
    let (mode, engine) = resolve(opts)?;
    let system = constrained(inst);
    if system.is_some() && opts.parallel.is_some() {
        return usage("--parallel supports unconstrained instances only");
    }
    if opts.verify && inst.n() > ARGMAX_CAP {
        return usage(format!("--verify needs n <= {ARGMAX_CAP}"));
    }
    let dec = decompose_instance(inst, opts.alpha, opts.tolerance)?;
    let start = Instant::now();
    let out: BbOutcome = match system {
        Some(sys) => {
            let engine = match mode {
                Mode::Exact => BbcEngine::Exact,
                Mode::Approx => BbcEngine::lsa(opts.epsilon),
            };
            let mut cfg = BbcConfig::new(opts.fu, engine);
            cfg.disable_pruning = opts.disable_pruning;
            cfg.node_cap = opts.max_nodes;
            cfg.depth_limit = opts.interrupt_depth;
            bbc_maximize(&dec, sys, &cfg)?
        }
        None => {
            let mut cfg = match engine {
                EngineChoice::ClosedForm => BbConfig::exact(opts.fu, Engine::ClosedForm),
                EngineChoice::Interval => BbConfig::exact(opts.fu, Engine::Interval),
                EngineChoice::Ls => BbConfig::approximate(opts.fu, opts.epsilon),
            };
            cfg.disable_pruning = opts.disable_pruning;
            cfg.node_cap = opts.max_nodes;
            cfg.depth_limit = opts.interrupt_depth;
            match opts.parallel {
                Some(t) if t > 1 => parallel_bb(&dec, &cfg, t)?,
                _ => bb_maximize(&dec, &cfg)?,
            }
        }
    };
    let elapsed = start.elapsed();

    let mut r = Report::default();
    r.push("best_set", format_set(out.best));
    r.push("best_value", inst.theta.value(out.best));
    r.push("alpha", dec.alpha());
    r.push("nodes_visited", out.stats.nodes_visited);
    r.push("nodes_pruned", out.stats.nodes_pruned);
    r.push("nodes_fathomed", out.stats.nodes_fathomed);
    if let Status::Interrupted { bound } = out.status {
        match bound {
            Some(b) => r.push("gap_bound", dec.to_theta_units(b)),
            None => r.push("gap_bound", "inf"),
        }
    }
    if opts.verify {
        let full = Subset::full(inst.n());
        let oracle = match inst.system.as_ref() {
            Some(sys) => brute_force_argmax_within(&inst.theta, full, |s| sys.contains(s))?.0,
            None => brute_force_argmax(&inst.theta)?.0,
        };
        r.push("oracle_match", oracle == out.best);
    }
    r.push("wall_time_ms", elapsed.as_millis());
    r.exit_code = if out.is_complete() { 0 } else { 3 };
    Ok(r)
}

pub fn run_decompose(inst: &Instance, alpha: AlphaChoice, tolerance: f64) -> Result<Report, RunError> {
    let dec = decompose_instance(inst, alpha, tolerance)?;
    let n = inst.n();
    let mut r = Report::default();
    r.push("n", n);
    r.push("theta", inst.theta.kind());
    r.push("alpha", dec.alpha());
    r.push("shift", dec.shift());
    r.push("graph", if inst.graph.is_some() { "custom" } else { "complete" });
    r.push("graph_edges", dec.graph().edge_count());
    if n <= PAIRWISE_CAP {
        r.push("modularity_gap", modularity_gap(&inst.theta)?);
        r.push("f_submodular", is_submodular(&dec.f(), tolerance)?);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchOptions {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub kind: ThetaChoice,
}

/// Runs every exact configuration over seeded instances and compares with
/// brute force.
pub fn run_bench(opts: &BenchOptions) -> Result<Report, RunError> {
    if opts.n == 0 || opts.n > ARGMAX_CAP.min(PAIRWISE_CAP) {
        return usage(format!("bench needs 1 <= n <= {}", ARGMAX_CAP.min(PAIRWISE_CAP)));
    }
    let configs = [
        ("modular/closed-form", BbConfig::exact(FuMode::Modular, Engine::ClosedForm)),
        ("modular/interval", BbConfig::exact(FuMode::Modular, Engine::Interval)),
        ("tight/interval", BbConfig::exact(FuMode::Tight, Engine::Interval)),
    ];
    let instances: Vec<Instance> =
        (0..opts.trials).map(|i| gen::random_instance(opts.n, opts.kind, None, opts.seed.wrapping_add(i as u64))).collect();
    let mut decs = Vec::new();
    let mut oracles = Vec::new();
    for inst in &instances {
        decs.push(decompose_instance(inst, AlphaChoice::Auto, setmax_core::ground::DEFAULT_TOLERANCE)?);
        oracles.push(brute_force_argmax(&inst.theta)?.0);
    }
    let mut r = Report::default();
    for (name, cfg) in configs {
        let start = Instant::now();
        let (mut total, mut max, mut mismatches) = (0usize, 0usize, 0usize);
        for (dec, oracle) in decs.iter().zip(&oracles) {
            let out = bb_maximize(dec, &cfg)?;
            total += out.stats.nodes_visited;
            max = max.max(out.stats.nodes_visited);
            mismatches += usize::from(out.best != *oracle);
        }
        let mean = if opts.trials == 0 { 0.0 } else { total as f64 / opts.trials as f64 };
        r.push(
            "config",
            format!(
                "{name} trials={} mismatches={mismatches} mean_nodes={mean} max_nodes={max} wall_time_ms={}",
                opts.trials,
                start.elapsed().as_millis()
            ),
        );
        if mismatches > 0 {
            r.exit_code = 1;
        }
    }
    Ok(r)
}
