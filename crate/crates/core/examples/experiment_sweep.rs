//! A small sweep over presets and sample sizes, written as tidy CSV.
//! The same plan can be run from a JSON file with `linfeas sweep --plan`.
//!
//! ```bash
//! cargo run --release --example experiment_sweep
//! ```

use linfeas::harness::{run_experiment, ExperimentPlan, ProblemSource, TraceKind};
use linfeas::problems::GenSpec;
use linfeas::solvers::{MonitorMode, Preset, StoppingRule};

fn main() -> linfeas::Result<()> {
    let out = std::env::temp_dir().join("linfeas-sweep-example");
    let plan = ExperimentPlan {
        problem: ProblemSource::Generate(GenSpec::gaussian(500, 100, 0.5, 1)),
        presets: vec![Preset::Skm, Preset::Gskm1, Preset::Paskm1],
        beta_grid: vec![1, 10, 100],
        delta_grid: vec![1.0],
        trials: 3,
        seed: 0,
        stopping: StoppingRule::residual(1e-5),
        max_iters: 200_000,
        start_scale: 10.0,
        trace_every: None,
        fsc_tol: 0.0,
        monitor: MonitorMode::Auto,
        timing: false,
        output_dir: out.clone(),
        emit: vec![TraceKind::ResidualVsIter, TraceKind::TimeVsBeta],
    };
    println!("{}\n", serde_json::to_string_pretty(&plan)?);
    let result = run_experiment(&plan)?;
    for a in result.aggregates() {
        println!(
            "{:<8} beta={:<4} converged {}/{}  mean iterations {:.0}",
            a.preset,
            a.beta,
            a.converged,
            a.trials,
            a.mean_iterations.unwrap_or(f64::NAN)
        );
    }
    for p in result.write_outputs(&out, &plan.emit)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
