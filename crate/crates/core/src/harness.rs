//! Parameter sweeps over presets, sample sizes and projection parameters,
//! with tidy CSV output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::analysis::{convexity_bounds, q_membership, spectral_summary, QRegion, SpectralInfo};
use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::problems::{gen_random, load_problem, write_vector, GenSpec};
use crate::solvers::{run_solver, MonitorMode, Outcome, Preset, SolverConfig, StoppingRule, TraceRecord, Variant};

/// Header of every trace CSV.
pub const TRACE_HEADER: [&str; 9] = ["preset", "beta", "delta", "trial", "k", "time_s", "residual", "theta", "fsc"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemSource {
    /// Path to a problem manifest.
    Manifest(PathBuf),
    /// Generate a random instance.
    Generate(GenSpec),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    ResidualVsIter,
    ResidualVsTime,
    FscVsIter,
    FscVsTime,
    /// One aggregate row per (preset, beta, delta).
    TimeVsBeta,
}

impl TraceKind {
    pub fn file_name(&self) -> &'static str {
        match self {
            TraceKind::ResidualVsIter => "residual_vs_iter.csv",
            TraceKind::ResidualVsTime => "residual_vs_time.csv",
            TraceKind::FscVsIter => "fsc_vs_iter.csv",
            TraceKind::FscVsTime => "fsc_vs_time.csv",
            TraceKind::TimeVsBeta => "time_vs_beta.csv",
        }
    }

    fn needs_time(&self) -> bool {
        matches!(self, TraceKind::ResidualVsTime | TraceKind::FscVsTime)
    }
}

fn default_start_scale() -> f64 {
    10.0
}

fn default_emit() -> Vec<TraceKind> {
    vec![TraceKind::ResidualVsIter, TraceKind::TimeVsBeta]
}

fn default_max_iters() -> usize {
    100_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub problem: ProblemSource,
    pub presets: Vec<Preset>,
    pub beta_grid: Vec<usize>,
    pub delta_grid: Vec<f64>,
    pub trials: usize,
    /// Trial `t` runs every preset with seed `seed + t`.
    #[serde(default)]
    pub seed: u64,
    pub stopping: StoppingRule,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    /// Initial point `r * (1, ..., 1)`, starting from this `r` and doubling
    /// until the point violates some constraint.
    #[serde(default = "default_start_scale")]
    pub start_scale: f64,
    #[serde(default)]
    pub trace_every: Option<usize>,
    #[serde(default)]
    pub fsc_tol: f64,
    #[serde(default)]
    pub monitor: MonitorMode,
    /// Record solver time. Timed outputs are not reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
    pub output_dir: PathBuf,
    #[serde(default = "default_emit")]
    pub emit: Vec<TraceKind>,
}

impl ExperimentPlan {
    /// Reads a plan; relative paths inside it are taken relative to the
    /// plan file.
    pub fn load(path: &Path) -> Result<Self> {
        let mut plan: ExperimentPlan = serde_json::from_str(&fs::read_to_string(path)?)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        if let ProblemSource::Manifest(p) = &mut plan.problem {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if plan.output_dir.is_relative() {
            plan.output_dir = base.join(&plan.output_dir);
        }
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("plan needs at least one trial".into()));
        }
        if self.presets.is_empty() || self.beta_grid.is_empty() || self.delta_grid.is_empty() {
            return Err(Error::InvalidParameter("plan grids must be nonempty".into()));
        }
        if !(self.start_scale.is_finite() && self.start_scale != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "start_scale must be finite and nonzero, got {}",
                self.start_scale
            )));
        }
        self.stopping.validate()
    }
}

/// Outcome of one (preset, beta, delta, trial) run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub preset: String,
    pub beta: usize,
    pub delta: f64,
    pub trial: usize,
    pub seed: u64,
    pub variant: Option<Variant>,
    pub outcome: Option<Outcome>,
    pub error: Option<String>,
    pub iterations: usize,
    pub residual: f64,
    pub theta: f64,
    pub fsc: f64,
    /// Wall time of the solver loop; `None` unless timing is enabled.
    pub wall_s: Option<f64>,
    #[serde(skip)]
    pub trace: Vec<TraceRecord>,
    #[serde(skip)]
    pub final_x: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub problem_name: String,
    pub m: usize,
    pub n: usize,
    pub x0: Vec<f64>,
    pub timing: bool,
    pub cells: Vec<CellResult>,
}

/// Mean and median over the successful trials of one (preset, beta, delta).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub preset: String,
    pub beta: usize,
    pub delta: f64,
    pub trials: usize,
    pub converged: usize,
    pub mean_iterations: Option<f64>,
    pub median_iterations: Option<f64>,
    pub mean_residual: Option<f64>,
    pub mean_theta: Option<f64>,
    pub mean_fsc: Option<f64>,
    pub mean_wall_s: Option<f64>,
}

/// `r * (1, ..., 1)` with `r` doubled from `start` until the point is
/// infeasible (at most 64 doublings).
pub fn default_start(problem: &Problem, start: f64) -> Vec<f64> {
    let n = problem.n();
    let mut r = start;
    let mut out = vec![r; n];
    for _ in 0..64 {
        if problem.max_violation(&out) > 0.0 {
            break;
        }
        r *= 2.0;
        out = vec![r; n];
    }
    out
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn load_source(source: &ProblemSource) -> Result<(String, Problem)> {
    match source {
        ProblemSource::Manifest(path) => {
            let loaded = load_problem(path)?;
            Ok((loaded.manifest.name, loaded.problem))
        }
        ProblemSource::Generate(spec) => {
            let g = gen_random(spec)?;
            let name = format!("{:?}_{}x{}_seed{}", spec.kind, spec.m, spec.n, spec.seed).to_lowercase();
            Ok((name, g.problem))
        }
    }
}

/// Runs every cell of `plan` on an already loaded problem.
pub fn run_experiment_on(plan: &ExperimentPlan, name: &str, problem: &Problem) -> Result<ExperimentResult> {
    plan.validate()?;
    let x0 = default_start(problem, plan.start_scale);
    let cache: OnceLock<std::result::Result<SpectralInfo, String>> = OnceLock::new();
    let spectral = || cache.get_or_init(|| spectral_summary(problem).map_err(|e| e.to_string()));
    let mut cells = Vec::new();
    for &delta in &plan.delta_grid {
        for &beta in &plan.beta_grid {
            for preset in &plan.presets {
                let variant = resolve_preset(preset, problem.m(), beta, delta, &spectral);
                if let Ok(Variant::Gskm { xi, .. }) = &variant {
                    if *xi < 0.0 {
                        if let Ok(s) = spectral() {
                            warn_outside_q(preset, *xi, s, problem.m(), beta, delta);
                        }
                    }
                }
                for trial in 0..plan.trials {
                    let seed = plan.seed.wrapping_add(trial as u64);
                    let cell = CellKey {
                        preset: preset.to_string(),
                        beta,
                        delta,
                        trial,
                        seed,
                    };
                    cells.push(run_cell(plan, problem, &x0, cell, &variant));
                }
            }
        }
    }
    Ok(ExperimentResult {
        problem_name: name.to_string(),
        m: problem.m(),
        n: problem.n(),
        x0,
        timing: plan.timing,
        cells,
    })
}

/// Loads the plan's problem and runs every cell.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    plan.validate()?;
    let (name, problem) = load_source(&plan.problem)?;
    run_experiment_on(plan, &name, &problem)
}

fn resolve_preset<'a>(
    preset: &Preset,
    m: usize,
    beta: usize,
    delta: f64,
    spectral: &dyn Fn() -> &'a std::result::Result<SpectralInfo, String>,
) -> std::result::Result<Variant, String> {
    if !preset.needs_bounds() {
        return preset.resolve(delta, None).map_err(|e| e.to_string());
    }
    let s = spectral().as_ref().map_err(Clone::clone)?;
    let bounds = convexity_bounds(s, m, beta, delta).map_err(|e| e.to_string())?;
    preset.resolve(delta, Some(&bounds)).map_err(|e| e.to_string())
}

fn warn_outside_q(preset: &Preset, xi: f64, spectral: &SpectralInfo, m: usize, beta: usize, delta: f64) {
    let Ok(bounds) = convexity_bounds(spectral, m, beta, delta) else {
        return;
    };
    match q_membership(xi, delta, &bounds) {
        Ok(q) if q.region == QRegion::Outside => log::warn!(
            "{preset} (xi = {xi}) at beta = {beta}, delta = {delta} lies outside the region with a rate guarantee"
        ),
        _ => {}
    }
}

struct CellKey {
    preset: String,
    beta: usize,
    delta: f64,
    trial: usize,
    seed: u64,
}

fn run_cell(
    plan: &ExperimentPlan,
    problem: &Problem,
    x0: &[f64],
    key: CellKey,
    variant: &std::result::Result<Variant, String>,
) -> CellResult {
    let mut cell = CellResult {
        preset: key.preset,
        beta: key.beta,
        delta: key.delta,
        trial: key.trial,
        seed: key.seed,
        variant: variant.as_ref().ok().copied(),
        outcome: None,
        error: None,
        iterations: 0,
        residual: f64::NAN,
        theta: f64::NAN,
        fsc: f64::NAN,
        wall_s: None,
        trace: Vec::new(),
        final_x: Vec::new(),
    };
    let variant = match variant {
        Ok(v) => *v,
        Err(e) => {
            cell.error = Some(e.clone());
            return cell;
        }
    };
    let mut cfg = SolverConfig::new(variant, key.delta, key.beta)
        .with_stopping(plan.stopping)
        .with_max_iters(plan.max_iters)
        .with_seed(key.seed)
        .with_monitor(plan.monitor)
        .with_timing(plan.timing);
    cfg.fsc_tol = plan.fsc_tol;
    if let Some(every) = plan.trace_every {
        cfg = cfg.with_trace_every(every);
    }
    match run_solver(problem, &cfg, x0) {
        Ok(run) => {
            cell.outcome = Some(run.outcome);
            cell.iterations = run.iterations();
            cell.residual = run.residual;
            cell.theta = run.theta;
            cell.fsc = run.fsc;
            cell.wall_s = plan.timing.then(|| run.elapsed.as_secs_f64());
            cell.trace = run.trace;
            cell.final_x = run.state.x;
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

impl ExperimentResult {
    /// One aggregate per (preset, beta, delta), in first-seen order.
    /// Failed cells count towards `trials` but not towards the means.
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut order: Vec<(String, usize, u64)> = Vec::new();
        let mut groups: BTreeMap<(String, usize, u64), Vec<&CellResult>> = BTreeMap::new();
        for c in &self.cells {
            let key = (c.preset.clone(), c.beta, c.delta.to_bits());
            groups
                .entry(key.clone())
                .or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                })
                .push(c);
        }
        order
            .into_iter()
            .map(|key| {
                let cells = &groups[&key];
                let ok: Vec<&&CellResult> = cells.iter().filter(|c| c.error.is_none()).collect();
                let mut iters: Vec<f64> = ok.iter().map(|c| c.iterations as f64).collect();
                Aggregate {
                    preset: key.0.clone(),
                    beta: key.1,
                    delta: f64::from_bits(key.2),
                    trials: cells.len(),
                    converged: cells.iter().filter(|c| c.outcome == Some(Outcome::Converged)).count(),
                    mean_iterations: mean(iters.iter().copied()),
                    median_iterations: median(&mut iters),
                    mean_residual: mean(ok.iter().map(|c| c.residual)),
                    mean_theta: mean(ok.iter().map(|c| c.theta)),
                    mean_fsc: mean(ok.iter().map(|c| c.fsc)),
                    mean_wall_s: if self.timing {
                        mean(ok.iter().filter_map(|c| c.wall_s))
                    } else {
                        None
                    },
                }
            })
            .collect()
    }

    /// Writes the trace CSV of the given kind.
    pub fn emit_traces(&self, kind: TraceKind, path: &Path) -> Result<()> {
        if kind.needs_time() && !self.timing {
            return Err(Error::MissingSeries(format!(
                "{} needs solver timing; rerun with timing enabled",
                kind.file_name()
            )));
        }
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(TRACE_HEADER)?;
        if kind == TraceKind::TimeVsBeta {
            for a in self.aggregates() {
                w.write_record([
                    a.preset.clone(),
                    a.beta.to_string(),
                    num(a.delta),
                    "mean".to_string(),
                    opt(a.mean_iterations),
                    opt(a.mean_wall_s),
                    opt(a.mean_residual),
                    opt(a.mean_theta),
                    opt(a.mean_fsc),
                ])?;
            }
        } else {
            for c in &self.cells {
                for r in &c.trace {
                    w.write_record([
                        c.preset.clone(),
                        c.beta.to_string(),
                        num(c.delta),
                        c.trial.to_string(),
                        r.k.to_string(),
                        opt(r.time_s),
                        num(r.residual),
                        num(r.theta),
                        num(r.fsc),
                    ])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `cells.csv`, `aggregate.csv`, `x0.txt`, the final iterate of
    /// every successful cell under `iterates/` and the requested traces.
    pub fn write_outputs(&self, dir: &Path, emit: &[TraceKind]) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir.join("iterates"))?;
        let mut written = Vec::new();

        let cells_path = dir.join("cells.csv");
        let mut w = csv::Writer::from_path(&cells_path)?;
        w.write_record([
            "preset", "beta", "delta", "trial", "seed", "outcome", "iterations", "residual", "theta", "fsc", "wall_s",
            "iterate", "error",
        ])?;
        for c in &self.cells {
            let iterate = if c.final_x.is_empty() {
                String::new()
            } else {
                let rel = format!("iterates/{}.txt", cell_file_stem(c));
                write_vector(&c.final_x, &dir.join(&rel))?;
                rel
            };
            w.write_record([
                c.preset.clone(),
                c.beta.to_string(),
                num(c.delta),
                c.trial.to_string(),
                c.seed.to_string(),
                c.outcome.map(outcome_label).unwrap_or("error").to_string(),
                c.iterations.to_string(),
                num(c.residual),
                num(c.theta),
                num(c.fsc),
                opt(c.wall_s),
                iterate,
                c.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        written.push(cells_path);

        let agg_path = dir.join("aggregate.csv");
        let mut w = csv::Writer::from_path(&agg_path)?;
        w.write_record([
            "preset",
            "beta",
            "delta",
            "trials",
            "converged",
            "mean_iterations",
            "median_iterations",
            "mean_residual",
            "mean_theta",
            "mean_fsc",
            "mean_wall_s",
        ])?;
        for a in self.aggregates() {
            w.write_record([
                a.preset.clone(),
                a.beta.to_string(),
                num(a.delta),
                a.trials.to_string(),
                a.converged.to_string(),
                opt(a.mean_iterations),
                opt(a.median_iterations),
                opt(a.mean_residual),
                opt(a.mean_theta),
                opt(a.mean_fsc),
                opt(a.mean_wall_s),
            ])?;
        }
        w.flush()?;
        written.push(agg_path);

        let x0_path = dir.join("x0.txt");
        write_vector(&self.x0, &x0_path)?;
        written.push(x0_path);

        for kind in emit {
            let path = dir.join(kind.file_name());
            self.emit_traces(*kind, &path)?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn outcome_label(o: Outcome) -> &'static str {
    match o {
        Outcome::Converged => "converged",
        Outcome::BudgetExhausted => "budget_exhausted",
        Outcome::Completed => "completed",
    }
}

fn cell_file_stem(c: &CellResult) -> String {
    let preset: String = c
        .preset
        .chars()
        .map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' || ch == '.' { ch } else { '_' })
        .collect();
    format!("{preset}_b{}_d{}_t{}", c.beta, num(c.delta), c.trial)
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::GenSpec;

    fn plan(dir: &Path) -> ExperimentPlan {
        ExperimentPlan {
            problem: ProblemSource::Generate(GenSpec::gaussian(40, 6, 0.5, 3)),
            presets: vec![Preset::Skm, Preset::Gskm1, Preset::Paskm1],
            beta_grid: vec![1, 5, 40],
            delta_grid: vec![1.0],
            trials: 2,
            seed: 7,
            stopping: StoppingRule::residual(1e-6),
            max_iters: 20_000,
            start_scale: 10.0,
            trace_every: Some(10),
            fsc_tol: 0.0,
            monitor: MonitorMode::Exact,
            timing: false,
            output_dir: dir.to_path_buf(),
            emit: vec![TraceKind::ResidualVsIter, TraceKind::TimeVsBeta],
        }
    }

    #[test]
    fn every_cell_runs_and_aggregates_match() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_experiment(&plan(dir.path())).unwrap();
        assert_eq!(res.cells.len(), 3 * 3 * 2);
        assert!(res.cells.iter().all(|c| c.error.is_none()), "{:?}", res.cells);
        let aggs = res.aggregates();
        assert_eq!(aggs.len(), 9);
        for a in &aggs {
            assert_eq!(a.trials, 2);
            let its: Vec<f64> = res
                .cells
                .iter()
                .filter(|c| c.preset == a.preset && c.beta == a.beta)
                .map(|c| c.iterations as f64)
                .collect();
            assert_eq!(a.mean_iterations, Some((its[0] + its[1]) / 2.0));
        }
    }

    #[test]
    fn outputs_are_reproducible_without_timing() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let p = plan(d1.path());
        let a = run_experiment(&p).unwrap().write_outputs(d1.path(), &p.emit).unwrap();
        let b = run_experiment(&p).unwrap().write_outputs(d2.path(), &p.emit).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
        }
        let header = fs::read_to_string(d1.path().join("residual_vs_iter.csv")).unwrap();
        assert!(header.starts_with("preset,beta,delta,trial,k,time_s,residual,theta,fsc\n"));
    }

    #[test]
    fn timed_series_need_timing() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_experiment(&plan(dir.path())).unwrap();
        let err = res.emit_traces(TraceKind::ResidualVsTime, &dir.path().join("t.csv")).unwrap_err();
        assert!(matches!(err, Error::MissingSeries(_)));
    }

    #[test]
    fn bad_cells_are_recorded_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let mut p = plan(dir.path());
        p.beta_grid = vec![5, 41];
        let res = run_experiment(&p).unwrap();
        assert!(res.cells.iter().filter(|c| c.beta == 41).all(|c| c.error.is_some()));
        assert!(res.cells.iter().filter(|c| c.beta == 5).all(|c| c.error.is_none()));
    }

    #[test]
    fn start_point_is_infeasible() {
        let g = gen_random(&GenSpec::gaussian(30, 4, 0.5, 1)).unwrap();
        let x0 = default_start(&g.problem, 10.0);
        assert!(g.problem.max_violation(&x0) > 0.0);
    }
}
