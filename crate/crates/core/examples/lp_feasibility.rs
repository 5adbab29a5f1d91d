//! A small LP turned into a feasibility problem: equality constraints,
//! bounds and the objective cut c^T x <= p* are stacked into one system.
//!
//! ```bash
//! cargo run --release --example lp_feasibility
//! ```

use linfeas::problems::{lp_to_feasibility, LpInstance};
use linfeas::solvers::{run_solver, SolverConfig, StoppingRule, Variant};
use linfeas::DenseMatrix;

fn main() -> linfeas::Result<()> {
    // min -x1 - 2 x2  s.t.  x1 + x2 + s = 4,  0 <= x1, x2, s <= 3.  Optimum -7 at (1, 3, 0).
    let lp = LpInstance {
        c: vec![-1.0, -2.0, 0.0],
        a_eq: DenseMatrix::from_rows(&[vec![1.0, 1.0, 1.0]])?.into(),
        b_eq: vec![4.0],
        lower: vec![0.0; 3],
        upper: vec![3.0; 3],
        p_star: Some(-7.0 + 1e-6),
    };
    let (problem, layout) = lp_to_feasibility(&lp)?;
    println!("stacked system {} x {}: {layout:?}", problem.m(), problem.n());

    let cfg = SolverConfig::new(Variant::Skm, 1.0, problem.m())
        .with_stopping(StoppingRule::residual(1e-7))
        .with_max_iters(1_000_000)
        .with_seed(0);
    let run = run_solver(&problem, &cfg, &[0.0; 3])?;
    let x = &run.state.x;
    let obj: f64 = lp.c.iter().zip(x).map(|(c, x)| c * x).sum();
    println!("{:?} after {} iterations: x = {x:.5?}, objective {obj:.5}", run.outcome, run.iterations());
    Ok(())
}
