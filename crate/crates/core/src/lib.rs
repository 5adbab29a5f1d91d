//! Sampling Kaczmarz-Motzkin solvers for linear feasibility `Ax <= b`.
//!
//! The crate provides:
//! * [`Problem`] and the residual/projection primitives,
//! * the beta-subset sampling distribution and exact expectations
//!   ([`sampling`]),
//! * SKM, GSKM and PASKM iterations with stopping rules and traces
//!   ([`solvers`]),
//! * rate constants, Cesaro bounds and certificate bounds ([`analysis`]),
//! * generators, SVM/LP transforms and file formats ([`problems`]),
//! * parameter sweeps with CSV output ([`harness`]).
//!
//! ```
//! use linfeas::problems::{gen_random, GenSpec};
//! use linfeas::solvers::{run_solver, Outcome, SolverConfig, StoppingRule, Variant};
//!
//! let g = gen_random(&GenSpec::gaussian(60, 10, 0.5, 1)).unwrap();
//! let cfg = SolverConfig::new(Variant::Skm, 1.0, 10)
//!     .with_stopping(StoppingRule::residual(1e-6))
//!     .with_max_iters(100_000);
//! let run = run_solver(&g.problem, &cfg, &[5.0; 10]).unwrap();
//! assert_eq!(run.outcome, Outcome::Converged);
//! ```

pub mod analysis;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod problem;
pub mod problems;
pub mod sampling;
pub mod solvers;

pub use error::{Error, Result};
pub use matrix::{CsrMatrix, DenseMatrix, Matrix, Row};
pub use problem::{distance_to_box, positive_residual, project_step, Problem, ResidualSummary};
