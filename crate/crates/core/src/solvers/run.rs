use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::Problem;

use super::config::{SolverConfig, StopKind};
use super::monitor::{Monitor, Snapshot};
use super::state::{SolverState, Solver};

/// One trace row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub k: usize,
    /// Solver time so far; present only when timing is enabled.
    pub time_s: Option<f64>,
    pub residual: f64,
    pub theta: f64,
    pub fsc: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The stopping rule was met.
    Converged,
    /// A residual-based rule ran out of iterations.
    BudgetExhausted,
    /// An iteration-count rule finished its iterations.
    Completed,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub state: SolverState,
    pub trace: Vec<TraceRecord>,
    pub outcome: Outcome,
    /// Positive residual norm of the final iterate (exact).
    pub residual: f64,
    pub theta: f64,
    pub fsc: f64,
    /// Wall time spent in solver steps, always measured.
    pub elapsed: Duration,
}

impl RunResult {
    pub fn iterations(&self) -> usize {
        self.state.k
    }
}

/// Default trace cadence for an `m x n` problem.
pub fn default_trace_every(m: usize, n: usize) -> usize {
    if (m as f64) * (n as f64) <= 1e6 {
        1
    } else {
        10
    }
}

struct Stop {
    kind: StopKind,
    threshold: f64,
}

impl Stop {
    fn new(cfg: &SolverConfig, problem: &Problem, x0: &[f64]) -> Self {
        let rule = cfg.stopping;
        let threshold = match rule.kind {
            StopKind::Iterations => f64::NAN,
            StopKind::PositiveResidualNorm => rule.epsilon * rule.reference.unwrap_or(1.0),
            StopKind::RelativeMaxViolation => {
                let reference = rule.reference.unwrap_or_else(|| {
                    (0..problem.m())
                        .map(|i| problem.row_residual(i, x0))
                        .fold(f64::NEG_INFINITY, f64::max)
                });
                // a nonpositive baseline means x0 is already feasible
                rule.epsilon * reference.max(0.0)
            }
        };
        Self {
            kind: rule.kind,
            threshold,
        }
    }

    fn met(&self, s: &Snapshot) -> bool {
        match self.kind {
            StopKind::Iterations => false,
            StopKind::PositiveResidualNorm => s.residual <= self.threshold,
            StopKind::RelativeMaxViolation => s.theta <= self.threshold,
        }
    }
}

/// Runs the configured solver from `x0` until the stopping rule holds or
/// `max_iters` steps have been taken.
///
/// The residual summary is evaluated and recorded at `k = 0`, every
/// `trace_every` steps, and at the final iterate; the stopping rule is
/// checked at the same checkpoints.
pub fn run_solver(problem: &Problem, cfg: &SolverConfig, x0: &[f64]) -> Result<RunResult> {
    let mut solver = Solver::new(problem, cfg.clone(), x0)?;
    let every = cfg
        .trace_every
        .unwrap_or_else(|| default_trace_every(problem.m(), problem.n()));
    let stop = Stop::new(cfg, problem, x0);
    let mut monitor = Monitor::new(problem, solver.state(), cfg.monitor, cfg.fsc_tol);
    let mut trace = Vec::new();
    let mut elapsed = Duration::ZERO;
    let record = |k: usize, s: &Snapshot, elapsed: Duration| TraceRecord {
        k,
        time_s: cfg.timing.then(|| elapsed.as_secs_f64()),
        residual: s.residual,
        theta: s.theta,
        fsc: s.fsc,
    };

    let mut snap = monitor.exact_snapshot(problem, solver.state());
    if !snap.residual.is_finite() {
        return Err(Error::Diverged {
            iteration: 0,
            last_residual: snap.residual,
        });
    }
    let mut last_finite = snap.residual;
    trace.push(record(0, &snap, elapsed));
    let mut converged = stop.met(&snap);

    while !converged && solver.state().k < cfg.max_iters {
        let t = Instant::now();
        let info = solver.step()?;
        monitor.after_step(problem, solver.state(), &cfg.variant, cfg.delta, info);
        elapsed += t.elapsed();
        let k = solver.state().k;
        if k % every != 0 && k != cfg.max_iters {
            continue;
        }
        snap = monitor.snapshot(problem, solver.state());
        if snap.residual.is_finite() && (stop.met(&snap) || k == cfg.max_iters) {
            snap = monitor.exact_snapshot(problem, solver.state());
        }
        if !snap.residual.is_finite() {
            return Err(Error::Diverged {
                iteration: k,
                last_residual: last_finite,
            });
        }
        last_finite = snap.residual;
        converged = stop.met(&snap);
        trace.push(record(k, &snap, elapsed));
    }

    let outcome = if converged {
        Outcome::Converged
    } else if cfg.stopping.kind == StopKind::Iterations {
        Outcome::Completed
    } else {
        Outcome::BudgetExhausted
    };
    Ok(RunResult {
        state: solver.into_state(),
        trace,
        outcome,
        residual: snap.residual,
        theta: snap.theta,
        fsc: snap.fsc,
        elapsed,
    })
}

/// Running mean of the averaged sequence: `x` for SKM and GSKM, `y` for
/// PASKM.
pub fn cesaro_average(state: &SolverState) -> Result<Vec<f64>> {
    if state.k == 0 {
        return Err(Error::InvalidParameter(
            "Cesaro average needs at least one iteration".into(),
        ));
    }
    let k = state.k as f64;
    Ok(state.cesaro_sum.iter().map(|s| s / k).collect())
}
