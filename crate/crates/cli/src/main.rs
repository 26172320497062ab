use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use setmax::gen::{self, SystemChoice, ThetaChoice};
use setmax::instance::{parse_instance, serialize_instance, Instance};
use setmax::run::{self, AlphaChoice, BenchOptions, EngineChoice, MaximizeOptions, Mode, Report, RunError};
use setmax::verify::{run_suite, Suite, SuiteParams};
use setmax_core::ground::DEFAULT_TOLERANCE;
use setmax_core::FuMode;

#[derive(Parser)]
#[command(name = "setmax", version, about = "Exact and approximate set function maximization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the instance's function, subject to its system if any.
    Maximize {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value = "modular")]
        fu: FuArg,
        #[arg(long, value_enum)]
        engine: Option<EngineArg>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value = "auto", value_parser = parse_alpha)]
        alpha: AlphaChoice,
        /// Accepted for symmetry with the other commands; the search is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_nodes: Option<usize>,
        #[arg(long)]
        interrupt_depth: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Compare with brute force.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_name = "THREADS")]
        parallel: Option<usize>,
        #[arg(long)]
        disable_pruning: bool,
    },
    /// Print the decomposition chosen for the instance.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value = "auto", value_parser = parse_alpha)]
        alpha: AlphaChoice,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
    },
    /// Time the exact configurations on generated instances.
    Bench {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        theta: ThetaArg,
    },
    /// Print a generated instance.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "table")]
        theta: ThetaArg,
        #[arg(long, value_enum, default_value = "none")]
        system: SystemArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum FuArg {
    Modular,
    Tight,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    ClosedForm,
    Interval,
    Ls,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaArg {
    Table,
    Cut,
    Coverage,
    Modular,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    None,
    Cardinality,
    GraphIndependence,
    Explicit,
}

#[derive(Clone, Copy)]
enum SuiteArg {
    All,
    One(Suite),
}

fn parse_alpha(s: &str) -> Result<AlphaChoice, String> {
    if s == "auto" {
        return Ok(AlphaChoice::Auto);
    }
    match s.parse::<f64>() {
        Ok(a) if a > 0.0 && a.is_finite() => Ok(AlphaChoice::Fixed(a)),
        _ => Err(format!("expected a positive number or 'auto', got '{s}'")),
    }
}

fn parse_suite(s: &str) -> Result<SuiteArg, String> {
    if s == "all" {
        return Ok(SuiteArg::All);
    }
    Suite::from_name(s).map(SuiteArg::One).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite '{s}'; expected one of: all, {}", names.join(", "))
    })
}

fn theta_choice(t: ThetaArg) -> ThetaChoice {
    match t {
        ThetaArg::Table => ThetaChoice::Table,
        ThetaArg::Cut => ThetaChoice::Cut,
        ThetaArg::Coverage => ThetaChoice::Coverage,
        ThetaArg::Modular => ThetaChoice::Modular,
    }
}

fn load(path: &PathBuf) -> Result<Instance, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(1)
    })?;
    parse_instance(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn emit(result: Result<Report, RunError>) -> ExitCode {
    match result {
        Ok(r) => {
            print!("{r}");
            ExitCode::from(r.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Maximize {
            file,
            mode,
            fu,
            engine,
            epsilon,
            alpha,
            seed: _,
            max_nodes,
            interrupt_depth,
            tolerance,
            verify,
            parallel,
            disable_pruning,
        } => {
            let inst = match load(&file) {
                Ok(i) => i,
                Err(code) => return code,
            };
            let opts = MaximizeOptions {
                mode: mode.map(|m| match m {
                    ModeArg::Exact => Mode::Exact,
                    ModeArg::Approx => Mode::Approx,
                }),
                fu: match fu {
                    FuArg::Modular => FuMode::Modular,
                    FuArg::Tight => FuMode::Tight,
                },
                engine: engine.map(|e| match e {
                    EngineArg::ClosedForm => EngineChoice::ClosedForm,
                    EngineArg::Interval => EngineChoice::Interval,
                    EngineArg::Ls => EngineChoice::Ls,
                }),
                epsilon,
                alpha,
                max_nodes,
                interrupt_depth,
                tolerance,
                verify,
                parallel,
                disable_pruning,
            };
            emit(run::run_maximize(&inst, &opts))
        }
        Command::Decompose { file, alpha, tolerance } => match load(&file) {
            Ok(inst) => emit(run::run_decompose(&inst, alpha, tolerance)),
            Err(code) => code,
        },
        Command::Verify { suite, trials, n, seed, epsilon } => {
            let suites = match suite {
                SuiteArg::All => Suite::ALL.to_vec(),
                SuiteArg::One(s) => vec![s],
            };
            let mut failed = false;
            for s in suites {
                let params = SuiteParams { trials, n, seed, epsilon };
                match run_suite(s, &params) {
                    Ok(r) => {
                        println!("{r}");
                        failed |= !r.passed();
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::from(u8::from(failed))
        }
        Command::Bench { n, trials, seed, theta } => {
            emit(run::run_bench(&BenchOptions { n, trials, seed, kind: theta_choice(theta) }))
        }
        Command::Generate { n, theta, system, seed } => {
            if n == 0 || n > setmax_core::ground::TABLE_CAP {
                eprintln!("error: --n must be in 1..={}", setmax_core::ground::TABLE_CAP);
                return ExitCode::from(2);
            }
            let system = match system {
                SystemArg::None => None,
                SystemArg::Cardinality => Some(SystemChoice::Cardinality),
                SystemArg::GraphIndependence => Some(SystemChoice::GraphIndependence),
                SystemArg::Explicit => Some(SystemChoice::Explicit),
            };
            let inst = gen::random_instance(n, theta_choice(theta), system, seed);
            print!("{}", serialize_instance(&inst));
            ExitCode::SUCCESS
        }
    }
}
