//! Generate a random feasible system and solve it with SKM, then with the
//! two classical limits: randomized Kaczmarz (beta = 1) and Motzkin (beta = m).
//!
//! ```bash
//! cargo run --release --example solve_gaussian
//! ```

use linfeas::harness::default_start;
use linfeas::problems::{gen_random, GenSpec};
use linfeas::solvers::{run_solver, SolverConfig, StoppingRule, Variant};

fn main() -> linfeas::Result<()> {
    let g = gen_random(&GenSpec::gaussian(500, 100, 0.5, 42))?;
    let problem = &g.problem;
    let x0 = default_start(problem, 10.0);
    println!("{} x {} system, witness violation {:e}", problem.m(), problem.n(), problem.max_violation(&g.witness));

    for (label, beta) in [("randomized Kaczmarz", 1), ("SKM beta=50", 50), ("Motzkin", problem.m())] {
        let cfg = SolverConfig::new(Variant::Skm, 1.0, beta)
            .with_stopping(StoppingRule::residual(1e-6))
            .with_max_iters(200_000)
            .with_seed(7);
        let run = run_solver(problem, &cfg, &x0)?;
        println!(
            "{label:<20} {:?} after {:>6} iterations, residual {:.3e}, fsc {:.3}",
            run.outcome,
            run.iterations(),
            run.residual,
            run.fsc
        );
    }
    Ok(())
}
