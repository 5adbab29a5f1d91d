use std::collections::BTreeMap;
use std::path::Path;

use linfeas::harness::{run_experiment, ExperimentPlan, ProblemSource, TraceKind};
use linfeas::problems::{read_vector, GenSpec};
use linfeas::solvers::{MonitorMode, Preset, StoppingRule};
use linfeas::{positive_residual, Error};

fn plan(out: &Path) -> ExperimentPlan {
    ExperimentPlan {
        problem: ProblemSource::Generate(GenSpec::correlated(150, 20, 0.5, 6)),
        presets: vec![Preset::Skm, Preset::Gskm2, Preset::Paskm2],
        beta_grid: vec![1, 15],
        delta_grid: vec![0.5, 1.0],
        trials: 3,
        seed: 100,
        stopping: StoppingRule::residual(1e-4),
        max_iters: 50_000,
        start_scale: 10.0,
        trace_every: Some(25),
        fsc_tol: 0.0,
        monitor: MonitorMode::Auto,
        timing: false,
        output_dir: out.to_path_buf(),
        emit: vec![TraceKind::ResidualVsIter, TraceKind::FscVsIter, TraceKind::TimeVsBeta],
    }
}

fn read_csv(path: &Path) -> Vec<BTreeMap<String, String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| headers.iter().zip(rec.unwrap().iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect())
        .collect()
}

#[test]
fn aggregates_recompute_from_cells() {
    let dir = tempfile::tempdir().unwrap();
    let p = plan(dir.path());
    run_experiment(&p).unwrap().write_outputs(dir.path(), &p.emit).unwrap();
    let cells = read_csv(&dir.path().join("cells.csv"));
    let aggs = read_csv(&dir.path().join("aggregate.csv"));
    assert_eq!(cells.len(), 3 * 2 * 2 * 3);
    assert_eq!(aggs.len(), 12);
    for a in &aggs {
        let its: Vec<f64> = cells
            .iter()
            .filter(|c| c["preset"] == a["preset"] && c["beta"] == a["beta"] && c["delta"] == a["delta"])
            .map(|c| c["iterations"].parse().unwrap())
            .collect();
        assert_eq!(its.len(), 3);
        let mean = its.iter().sum::<f64>() / 3.0;
        assert_eq!(a["mean_iterations"].parse::<f64>().unwrap(), mean);
    }
    let tvb = read_csv(&dir.path().join("time_vs_beta.csv"));
    assert_eq!(tvb.len(), 12);
    assert!(tvb.iter().all(|r| r["trial"] == "mean" && r["time_s"].is_empty()));
}

#[test]
fn recorded_convergence_is_reverifiable() {
    let dir = tempfile::tempdir().unwrap();
    let p = plan(dir.path());
    let result = run_experiment(&p).unwrap();
    result.write_outputs(dir.path(), &p.emit).unwrap();
    let problem = linfeas::problems::gen_random(&GenSpec::correlated(150, 20, 0.5, 6)).unwrap().problem;
    let mut converged = 0;
    for c in read_csv(&dir.path().join("cells.csv")) {
        let x = read_vector(&dir.path().join(&c["iterate"])).unwrap();
        let r = positive_residual(&problem, &x, 0.0).unwrap();
        assert_eq!(r.norm2, c["residual"].parse::<f64>().unwrap());
        if c["outcome"] == "converged" {
            converged += 1;
            assert!(r.norm2 <= 1e-4);
        }
    }
    assert!(converged > 0);
}

#[test]
fn timed_kinds_require_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut p = plan(dir.path());
    p.emit = vec![TraceKind::FscVsTime];
    let result = run_experiment(&p).unwrap();
    assert!(matches!(
        result.write_outputs(dir.path(), &p.emit).unwrap_err(),
        Error::MissingSeries(_)
    ));
    p.timing = true;
    let result = run_experiment(&p).unwrap();
    result.write_outputs(dir.path(), &p.emit).unwrap();
    let rows = read_csv(&dir.path().join("fsc_vs_time.csv"));
    assert!(rows.iter().all(|r| r["time_s"].parse::<f64>().is_ok()));
}

#[test]
fn plan_json_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let json = serde_json::json!({
        "problem": { "generate": { "kind": "gaussian", "m": 30, "n": 4, "mix": 0.5, "seed": 1 } },
        "presets": ["SKM", "gskm:-0.2", "paskm:0.5,0.2,1.0"],
        "beta_grid": [3],
        "delta_grid": [1.0],
        "trials": 1,
        "stopping": { "kind": "relative_max_violation", "epsilon": 1e-6 },
        "output_dir": "out"
    });
    let path = dir.path().join("plan.json");
    std::fs::write(&path, json.to_string()).unwrap();
    let p = ExperimentPlan::load(&path).unwrap();
    assert_eq!(p.output_dir, dir.path().join("out"));
    assert_eq!(p.presets[1], Preset::Gskm(-0.2));
    let r = run_experiment(&p).unwrap();
    assert!(r.cells.iter().all(|c| c.error.is_none()));
}
