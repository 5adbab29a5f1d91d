//! Residual bookkeeping between solver checkpoints.

use std::sync::Arc;

use crate::problem::{summarize_signed, Problem};

use super::config::{MonitorMode, Variant};
use super::state::{SolverState, StepInfo};

/// Tracked residuals are recomputed from scratch this often.
const RESYNC_EVERY: usize = 1024;

/// Residual summary at a checkpoint: `(||(Ax-b)^+||, theta, fsc)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Snapshot {
    pub residual: f64,
    pub theta: f64,
    pub fsc: f64,
}

struct Tracker {
    gram: Arc<[f64]>,
    m: usize,
    rx: Vec<f64>,
    rz_prev: Option<Vec<f64>>,
    rv: Option<Vec<f64>>,
    ry: Option<Vec<f64>>,
    since_sync: usize,
}

pub(crate) struct Monitor {
    tracker: Option<Tracker>,
    scratch: Vec<f64>,
    fsc_tol: f64,
}

pub(crate) fn resolve_mode(problem: &Problem, mode: MonitorMode) -> MonitorMode {
    match mode {
        MonitorMode::Auto => {
            if problem.matrix().is_dense() && problem.n() >= 32 && problem.m() <= 2048 {
                MonitorMode::Tracked
            } else {
                MonitorMode::Exact
            }
        }
        MonitorMode::Tracked if !problem.matrix().is_dense() => MonitorMode::Exact,
        other => other,
    }
}

fn signed(problem: &Problem, x: &[f64]) -> Vec<f64> {
    let mut r = vec![0.0; problem.m()];
    problem.residual_into(x, &mut r);
    r
}

impl Monitor {
    pub fn new(problem: &Problem, state: &SolverState, mode: MonitorMode, fsc_tol: f64) -> Self {
        let tracker = (resolve_mode(problem, mode) == MonitorMode::Tracked).then(|| {
            let mut t = Tracker {
                gram: problem.row_gram(),
                m: problem.m(),
                rx: Vec::new(),
                rz_prev: None,
                rv: None,
                ry: None,
                since_sync: 0,
            };
            t.resync(problem, state);
            t
        });
        Self {
            tracker,
            scratch: vec![0.0; problem.m()],
            fsc_tol,
        }
    }

    pub fn after_step(&mut self, problem: &Problem, state: &SolverState, variant: &Variant, delta: f64, info: StepInfo) {
        if let Some(t) = self.tracker.as_mut() {
            t.since_sync += 1;
            if t.since_sync >= RESYNC_EVERY {
                t.resync(problem, state);
            } else {
                t.update(variant, delta, info);
            }
        }
    }

    /// Summary of `state.x`; tracked when available.
    pub fn snapshot(&mut self, problem: &Problem, state: &SolverState) -> Snapshot {
        let r = match &self.tracker {
            Some(t) => &t.rx,
            None => {
                problem.residual_into(&state.x, &mut self.scratch);
                &self.scratch
            }
        };
        let (residual, theta, satisfied) = summarize_signed(r, self.fsc_tol);
        Snapshot {
            residual,
            theta,
            fsc: satisfied as f64 / r.len() as f64,
        }
    }

    /// Exact summary of `state.x`; also resynchronises tracked residuals.
    pub fn exact_snapshot(&mut self, problem: &Problem, state: &SolverState) -> Snapshot {
        if let Some(t) = self.tracker.as_mut() {
            t.resync(problem, state);
        }
        self.snapshot(problem, state)
    }
}

impl Tracker {
    fn resync(&mut self, problem: &Problem, state: &SolverState) {
        self.rx = signed(problem, &state.x);
        self.rz_prev = state.z_prev.as_deref().map(|z| signed(problem, z));
        self.rv = state.v.as_deref().map(|v| signed(problem, v));
        self.ry = state.y.as_deref().map(|y| signed(problem, y));
        self.since_sync = 0;
    }

    fn update(&mut self, variant: &Variant, delta: f64, info: StepInfo) {
        let s = info.scaled_violation;
        let gram = self.gram.clone();
        let col = info.chosen.map(|i| &gram[i * self.m..(i + 1) * self.m]);
        match *variant {
            Variant::Skm => {
                if let Some(c) = col {
                    axpy(-delta * s, c, &mut self.rx);
                }
            }
            Variant::Gskm { xi, .. } => {
                if let Some(c) = col {
                    axpy(-delta * s, c, &mut self.rx);
                }
                match self.rz_prev.as_mut() {
                    None => self.rz_prev = Some(self.rx.clone()),
                    Some(rp) => {
                        for (x, p) in self.rx.iter_mut().zip(rp.iter_mut()) {
                            let z = *x;
                            *x = z + xi * (*p - z);
                            *p = z;
                        }
                    }
                }
            }
            Variant::Paskm { alpha, omega, gamma } => {
                let (Some(rv), Some(ry)) = (self.rv.as_mut(), self.ry.as_mut()) else {
                    return;
                };
                self.rx.copy_from_slice(ry);
                for (v, &y) in rv.iter_mut().zip(ry.iter()) {
                    *v = y + omega * (*v - y);
                }
                if let Some(c) = col {
                    axpy(-delta * s, c, &mut self.rx);
                    axpy(-gamma * s, c, rv);
                }
                for ((y, &x), &v) in ry.iter_mut().zip(&self.rx).zip(rv.iter()) {
                    *y = x + alpha * (v - x);
                }
            }
        }
    }
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
