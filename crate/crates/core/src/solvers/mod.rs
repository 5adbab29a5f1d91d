//! SKM, GSKM and PASKM iterations, the run loop and Cesaro averaging.
//!
//! Randomized Kaczmarz is SKM with `beta = 1` (uniform rows) and the
//! Motzkin relaxation method is SKM with `beta = m`.

mod config;
mod monitor;
mod presets;
mod run;
mod state;

pub use config::{GskmStart, MonitorMode, SolverConfig, StopKind, StoppingRule, Variant};
pub use presets::{Preset, DEFAULT_ZETA_FALLBACK};
pub use run::{cesaro_average, default_trace_every, run_solver, Outcome, RunResult, TraceRecord};
pub use state::{gskm_step, paskm_step, skm_step, solver_rng, step, Solver, SolverRng, SolverState, StepInfo};
