//! Command line front end.
//!
//! Exit codes: 0 converged or completed, 1 runtime failure (divergence,
//! eigen solver), 2 iteration budget exhausted, 3 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use linfeas::analysis::{
    certify_gskm, convexity_bounds, gskm_rate, paskm_preset, paskm_rate, spectral_summary, PaskmPreset,
};
use linfeas::harness::{default_start, outcome_label, ExperimentPlan};
use linfeas::problems::{gen_random, load_problem, read_vector, save_problem, write_vector, GenKind, GenSpec};
use linfeas::solvers::{run_solver, MonitorMode, Outcome, SolverConfig, StoppingRule, Variant, DEFAULT_ZETA_FALLBACK};
use linfeas::{Error, Problem};

#[derive(Parser)]
#[command(name = "linfeas", version, about = "Sampling Kaczmarz-Motzkin solvers for Ax <= b")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random feasible instance.
    Generate(GenerateArgs),
    /// Run one solver on a problem.
    Solve(SolveArgs),
    /// Run an experiment plan (JSON).
    Sweep {
        #[arg(long)]
        plan: PathBuf,
    },
    /// Rate constants and preconditions as JSON.
    Analyze(AnalyzeArgs),
    /// Feasibility certificate bounds for GSKM as JSON.
    Certify(CertifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Gaussian,
    Correlated,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    kind: KindArg,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    mix: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; the manifest is written as `<dir>/<name>.json`.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    name: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Skm,
    Gskm,
    Paskm,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Param1,
    Param2,
    Zeta,
}

#[derive(Clone, Copy, ValueEnum)]
enum StopArg {
    Residual,
    RelMax,
    Iterations,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonitorArg {
    Auto,
    Exact,
    Tracked,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1)]
    beta: usize,
    #[arg(long, allow_hyphen_values = true)]
    xi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, value_enum)]
    preset: Option<PresetArg>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "skm")]
    variant: VariantArg,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "residual")]
    stop: StopArg,
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Initial point file; defaults to r * ones with r doubled from 10 until infeasible.
    #[arg(long)]
    x0: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    trace_every: Option<usize>,
    /// Write the final iterate here.
    #[arg(long)]
    out_x: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    monitor: MonitorArg,
    /// Record solver time in the trace.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "gskm")]
    variant: VariantArg,
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1)]
    beta: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    xi: f64,
    #[arg(long)]
    k: usize,
}

enum Failure {
    Input(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Diverged { .. } | Error::EigenNoConvergence { .. } => Failure::Runtime(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(3) } else { ExitCode::SUCCESS };
        }
    };
    let res = match cli.cmd {
        Cmd::Generate(a) => generate(a),
        Cmd::Solve(a) => solve(a),
        Cmd::Sweep { plan } => sweep(&plan),
        Cmd::Analyze(a) => analyze(a),
        Cmd::Certify(a) => certify(a),
    };
    match res {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::Runtime(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn generate(a: GenerateArgs) -> CliResult {
    let kind = match a.kind {
        KindArg::Gaussian => GenKind::Gaussian,
        KindArg::Correlated => GenKind::Correlated,
    };
    let spec = GenSpec {
        kind,
        ..GenSpec::gaussian(a.m, a.n, a.mix, a.seed)
    };
    let g = gen_random(&spec)?;
    let kind_name = match a.kind {
        KindArg::Gaussian => "gaussian",
        KindArg::Correlated => "correlated",
    };
    let name = a.name.unwrap_or_else(|| format!("{kind_name}_{}x{}_s{}", a.m, a.n, a.seed));
    let manifest = save_problem(&g.problem, &a.out, &name, kind_name, Some(&g.witness))?;
    println!("{}", manifest.display());
    Ok(ExitCode::SUCCESS)
}

fn load(path: &Path) -> Result<Problem, Failure> {
    Ok(load_problem(path)?.problem)
}

/// Builds the variant from the flags; PASKM presets need the spectrum.
fn variant_of(problem: &Problem, which: VariantArg, p: &ParamArgs) -> Result<Variant, Failure> {
    match which {
        VariantArg::Skm => Ok(Variant::Skm),
        VariantArg::Gskm => {
            let xi = p
                .xi
                .ok_or_else(|| Failure::Input("--variant gskm needs --xi".into()))?;
            Ok(Variant::gskm(xi))
        }
        VariantArg::Paskm => {
            if let Some(preset) = p.preset {
                let spectral = spectral_summary(problem)?;
                let bounds = convexity_bounds(&spectral, problem.m(), p.beta, p.delta)?;
                let which = match preset {
                    PresetArg::Param1 => PaskmPreset::Param1,
                    PresetArg::Param2 => PaskmPreset::Param2,
                    PresetArg::Zeta => PaskmPreset::Zeta {
                        fallback: DEFAULT_ZETA_FALLBACK,
                    },
                };
                let (alpha, omega, gamma) = paskm_preset(p.delta, &bounds, which)?;
                return Ok(Variant::Paskm { alpha, omega, gamma });
            }
            match (p.alpha, p.omega, p.gamma) {
                (Some(alpha), Some(omega), Some(gamma)) => Ok(Variant::Paskm { alpha, omega, gamma }),
                _ => Err(Failure::Input(
                    "--variant paskm needs --preset or all of --alpha --omega --gamma".into(),
                )),
            }
        }
    }
}

fn solve(a: SolveArgs) -> CliResult {
    let problem = load(&a.problem)?;
    let variant = variant_of(&problem, a.variant, &a.params)?;
    let stopping = match a.stop {
        StopArg::Residual => StoppingRule::residual(a.eps),
        StopArg::RelMax => StoppingRule::relative_max_violation(a.eps),
        StopArg::Iterations => StoppingRule::iterations(),
    };
    let monitor = match a.monitor {
        MonitorArg::Auto => MonitorMode::Auto,
        MonitorArg::Exact => MonitorMode::Exact,
        MonitorArg::Tracked => MonitorMode::Tracked,
    };
    let mut cfg = SolverConfig::new(variant, a.params.delta, a.params.beta)
        .with_stopping(stopping)
        .with_max_iters(a.max_iters)
        .with_seed(a.seed)
        .with_monitor(monitor)
        .with_timing(a.timing);
    if let Some(every) = a.trace_every {
        cfg = cfg.with_trace_every(every);
    }
    let x0 = match &a.x0 {
        Some(path) => read_vector(path)?,
        None => default_start(&problem, 10.0),
    };
    let run = run_solver(&problem, &cfg, &x0)?;
    if let Some(path) = &a.trace {
        let mut w = csv::Writer::from_path(path).map_err(|e| Failure::Input(e.to_string()))?;
        for r in &run.trace {
            w.serialize(r).map_err(|e| Failure::Input(e.to_string()))?;
        }
        w.flush().map_err(|e| Failure::Input(e.to_string()))?;
    }
    if let Some(path) = &a.out_x {
        write_vector(&run.state.x, path)?;
    }
    print_json(&json!({
        "variant": variant,
        "delta": a.params.delta,
        "beta": a.params.beta,
        "seed": a.seed,
        "outcome": outcome_label(run.outcome),
        "iterations": run.iterations(),
        "residual": run.residual,
        "theta": run.theta,
        "fsc": run.fsc,
        "elapsed_s": a.timing.then(|| run.elapsed.as_secs_f64()),
    }))?;
    Ok(match run.outcome {
        Outcome::BudgetExhausted => ExitCode::from(2),
        Outcome::Converged | Outcome::Completed => ExitCode::SUCCESS,
    })
}

fn sweep(path: &Path) -> CliResult {
    let plan = ExperimentPlan::load(path)?;
    let result = linfeas::harness::run_experiment(&plan)?;
    let written = result.write_outputs(&plan.output_dir, &plan.emit)?;
    let failed = result.cells.iter().filter(|c| c.error.is_some()).count();
    for p in written {
        println!("{}", p.display());
    }
    if failed > 0 {
        log::warn!("{failed} of {} cells failed; see cells.csv", result.cells.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze(a: AnalyzeArgs) -> CliResult {
    let problem = load(&a.problem)?;
    let p = &a.params;
    let spectral = spectral_summary(&problem)?;
    let bounds = convexity_bounds(&spectral, problem.m(), p.beta, p.delta)?;
    let report = match variant_of(&problem, a.variant, p)? {
        Variant::Skm => gskm_rate(0.0, p.delta, &bounds)?,
        Variant::Gskm { xi, .. } => gskm_rate(xi, p.delta, &bounds)?,
        Variant::Paskm { alpha, omega, gamma } => paskm_rate(alpha, omega, gamma, p.delta, &bounds)?,
    };
    print_json(&json!({ "spectral": spectral, "bounds": bounds, "report": report }))?;
    Ok(ExitCode::SUCCESS)
}

fn certify(a: CertifyArgs) -> CliResult {
    let problem = load(&a.problem)?;
    let report = certify_gskm(&problem, a.delta, a.beta, a.xi, a.k)?;
    print_json(&report)?;
    Ok(ExitCode::SUCCESS)
}
