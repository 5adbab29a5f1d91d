//! Compare SKM with the momentum variants GSKM and PASKM on one instance,
//! using the named presets and paired seeds.
//!
//! ```bash
//! cargo run --release --example accelerated_variants
//! ```

use linfeas::analysis::{convexity_bounds, spectral_summary};
use linfeas::harness::default_start;
use linfeas::problems::{gen_random, GenSpec};
use linfeas::solvers::{run_solver, Preset, SolverConfig, StoppingRule};

fn main() -> linfeas::Result<()> {
    let g = gen_random(&GenSpec::gaussian(1000, 200, 0.5, 3))?;
    let problem = &g.problem;
    let (delta, beta) = (0.5, 50);
    let spectral = spectral_summary(problem)?;
    let bounds = convexity_bounds(&spectral, problem.m(), beta, delta)?;
    println!("mu1 = {:.3e}, mu2 = {:.3e}, h(delta) = {:.6}", bounds.mu1, bounds.mu2, bounds.h_delta);

    let x0 = default_start(problem, 10.0);
    for preset in [Preset::Skm, Preset::Gskm1, Preset::Gskm2, Preset::Paskm1, Preset::Paskm2, Preset::PaskmZeta] {
        let variant = preset.resolve(delta, Some(&bounds))?;
        let mut iters = Vec::new();
        for seed in 0..5 {
            let cfg = SolverConfig::new(variant, delta, beta)
                .with_stopping(StoppingRule::residual(1e-5))
                .with_max_iters(500_000)
                .with_seed(seed);
            iters.push(run_solver(problem, &cfg, &x0)?.iterations());
        }
        iters.sort_unstable();
        println!("{:<11} median iterations {:>7}   {:?}", preset.to_string(), iters[2], variant);
    }
    Ok(())
}
