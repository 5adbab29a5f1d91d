use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How GSKM defines `z_{-1}` for its first affine combination.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GskmStart {
    /// `z_{-1} := z_0`, so the first step is a plain SKM step.
    #[default]
    RepeatFirstStep,
    /// `z_{-1} := x_0`. Under this start GSKM with `xi <= 0` coincides with
    /// a PASKM y-sequence.
    FromInitialPoint,
}

/// Algorithm and its variant-specific parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    Skm,
    Gskm {
        xi: f64,
        #[serde(default)]
        start: GskmStart,
    },
    Paskm {
        alpha: f64,
        omega: f64,
        gamma: f64,
    },
}

impl Variant {
    pub fn gskm(xi: f64) -> Self {
        Variant::Gskm {
            xi,
            start: GskmStart::RepeatFirstStep,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Skm => "skm",
            Variant::Gskm { .. } => "gskm",
            Variant::Paskm { .. } => "paskm",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopKind {
    /// `||(Ax - b)^+|| <= epsilon`, or `<= epsilon * reference` when a
    /// reference is given.
    PositiveResidualNorm,
    /// `theta(x) / reference <= epsilon`. Without a reference the baseline
    /// is `max(Ax_0 - b)`.
    RelativeMaxViolation,
    /// Run exactly `max_iters` iterations.
    Iterations,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub kind: StopKind,
    pub epsilon: f64,
    #[serde(default)]
    pub reference: Option<f64>,
}

impl StoppingRule {
    pub fn residual(epsilon: f64) -> Self {
        Self {
            kind: StopKind::PositiveResidualNorm,
            epsilon,
            reference: None,
        }
    }

    pub fn relative_max_violation(epsilon: f64) -> Self {
        Self {
            kind: StopKind::RelativeMaxViolation,
            epsilon,
            reference: None,
        }
    }

    pub fn iterations() -> Self {
        Self {
            kind: StopKind::Iterations,
            epsilon: 0.0,
            reference: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind != StopKind::Iterations && !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "stopping tolerance must be positive, got {}",
                self.epsilon
            )));
        }
        if let Some(r) = self.reference {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "stopping reference must be positive, got {r}"
                )));
            }
        }
        Ok(())
    }
}

/// How residual summaries are computed while the solver runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonitorMode {
    /// `Tracked` for moderately sized dense problems, `Exact` otherwise.
    #[default]
    Auto,
    /// Recompute `Ax - b` at every checkpoint.
    Exact,
    /// Update `Ax - b` incrementally through the row Gram matrix. Dense
    /// problems only. Checkpoints that would stop the run are confirmed
    /// with an exact evaluation.
    Tracked,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub variant: Variant,
    pub delta: f64,
    pub beta: usize,
    pub stopping: StoppingRule,
    pub max_iters: usize,
    pub seed: u64,
    #[serde(default)]
    pub fsc_tol: f64,
    /// Trace every this many iterations; `None` picks 1 when `m * n <= 1e6`
    /// and 10 otherwise. Stopping is checked at the same cadence.
    #[serde(default)]
    pub trace_every: Option<usize>,
    #[serde(default)]
    pub monitor: MonitorMode,
    /// Record elapsed time in traces. Off by default so that traces are
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
}

impl SolverConfig {
    pub fn new(variant: Variant, delta: f64, beta: usize) -> Self {
        Self {
            variant,
            delta,
            beta,
            stopping: StoppingRule::residual(1e-5),
            max_iters: 100_000,
            seed: 0,
            fsc_tol: 0.0,
            trace_every: None,
            monitor: MonitorMode::Auto,
            timing: false,
        }
    }

    pub fn with_stopping(mut self, stopping: StoppingRule) -> Self {
        self.stopping = stopping;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trace_every(mut self, every: usize) -> Self {
        self.trace_every = Some(every);
        self
    }

    pub fn with_monitor(mut self, monitor: MonitorMode) -> Self {
        self.monitor = monitor;
        self
    }

    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    /// Checks parameter ranges against a problem with `m` rows.
    pub fn validate(&self, m: usize) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "projection parameter delta must lie in (0, 2], got {}",
                self.delta
            )));
        }
        if self.beta == 0 || self.beta > m {
            return Err(Error::InvalidParameter(format!(
                "sample size beta must satisfy 1 <= beta <= m = {m}, got {}",
                self.beta
            )));
        }
        if self.trace_every == Some(0) {
            return Err(Error::InvalidParameter("trace cadence must be at least 1".into()));
        }
        if !(self.fsc_tol.is_finite() && self.fsc_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "satisfaction tolerance must be nonnegative, got {}",
                self.fsc_tol
            )));
        }
        self.stopping.validate()?;
        match self.variant {
            Variant::Skm => {}
            Variant::Gskm { xi, .. } => {
                if !(xi > -1.0 && xi <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "GSKM xi must lie in (-1, 1], got {xi}"
                    )));
                }
            }
            Variant::Paskm { alpha, omega, gamma } => {
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(Error::InvalidParameter(format!(
                        "PASKM alpha must lie in [0, 1], got {alpha}"
                    )));
                }
                if !(0.0..=1.0).contains(&omega) {
                    return Err(Error::InvalidParameter(format!(
                        "PASKM omega must lie in [0, 1], got {omega}"
                    )));
                }
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "PASKM gamma must be nonnegative, got {gamma}"
                    )));
                }
            }
        }
        Ok(())
    }
}
