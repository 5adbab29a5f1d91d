//! Running averages of the iterates and the O(1/k) bound on the expected
//! loss at the average, on a box constraint where the distance to the
//! feasible set is known exactly.
//!
//! ```bash
//! cargo run --release --example cesaro_average
//! ```

use linfeas::analysis::{cesaro_bounds, spectral_summary, convexity_bounds, CesaroParams};
use linfeas::problems::box_problem;
use linfeas::sampling::expected_loss_exact;
use linfeas::solvers::{SolverConfig, Solver, Variant};
use linfeas::distance_to_box;

fn main() -> linfeas::Result<()> {
    let n = 20;
    let (lower, upper) = (vec![-1.0; n], vec![1.0; n]);
    let problem = box_problem(&lower, &upper)?;
    let beta = 5;
    let delta = 1.0;
    let x0: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 4.0 } else { -3.0 }).collect();
    let d0_sq = distance_to_box(&lower, &upper, &x0)?.powi(2);
    let f0 = expected_loss_exact(&problem, &x0, beta)?;
    let bounds = convexity_bounds(&spectral_summary(&problem)?, problem.m(), beta, delta)?;

    let trials = 200;
    let checkpoints = [1usize, 5, 10, 25, 50, 100];
    let mut means = vec![0.0; checkpoints.len()];
    for seed in 0..trials {
        let cfg = SolverConfig::new(Variant::Skm, delta, beta).with_seed(seed);
        let mut solver = Solver::new(&problem, cfg, &x0)?;
        let mut next = 0;
        for k in 1..=*checkpoints.last().unwrap() {
            solver.step()?;
            if k == checkpoints[next] {
                means[next] += expected_loss_exact(&problem, solver.state().averaged_iterate(), beta)? / trials as f64;
                next += 1;
            }
        }
    }
    for (k, mean) in checkpoints.iter().zip(&means) {
        let bound = cesaro_bounds(CesaroParams::Gskm { xi: 0.0, delta, mu2: bounds.mu2 }, d0_sq, f0, *k)?;
        println!("k={k:<4} mean f(average) {mean:.5e}   bound {bound:.5e}");
    }
    Ok(())
}
