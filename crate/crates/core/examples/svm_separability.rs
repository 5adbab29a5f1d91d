//! Linear separability as a feasibility problem: labelled points become
//! the homogeneous system -y_i x_i^T w <= 0.
//!
//! ```bash
//! cargo run --release --example svm_separability
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linfeas::problems::svm_to_feasibility;
use linfeas::solvers::{run_solver, SolverConfig, StoppingRule, Variant};
use linfeas::{DenseMatrix, Matrix};

fn main() -> linfeas::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let normal = [1.0, -2.0, 0.5];
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    while rows.len() < 300 {
        let p: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s: f64 = p.iter().zip(&normal).map(|(a, b)| a * b).sum();
        if s.abs() < 0.05 {
            continue; // keep a margin
        }
        labels.push(s.signum());
        rows.push(p);
    }
    let features = Matrix::from(DenseMatrix::from_rows(&rows)?);
    let problem = svm_to_feasibility(&features, &labels)?;

    let cfg = SolverConfig::new(Variant::gskm(-0.1), 1.0, 30)
        .with_stopping(StoppingRule::residual(1e-10))
        .with_max_iters(200_000)
        .with_seed(3);
    let run = run_solver(&problem, &cfg, &[1.0, 1.0, 1.0])?;
    let w = &run.state.x;
    let errors = rows
        .iter()
        .zip(&labels)
        .filter(|(p, y)| **y * p.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() <= 0.0)
        .count();
    println!("{:?} after {} iterations; w = {w:.4?}; misclassified {errors} of {}", run.outcome, run.iterations(), rows.len());
    Ok(())
}
