//! Spectral surrogates and the convergence-rate calculators for GSKM and
//! PASKM, printed as JSON.
//!
//! ```bash
//! cargo run --release --example rate_analysis
//! ```

use linfeas::analysis::{
    convexity_bounds, gskm_rate, paskm_preset, paskm_rate, q_membership, spectral_summary, PaskmPreset,
};
use linfeas::problems::{gen_random, GenSpec};

fn main() -> linfeas::Result<()> {
    let g = gen_random(&GenSpec::gaussian(400, 50, 0.5, 5))?;
    let spectral = spectral_summary(&g.problem)?;
    println!("spectral: {}", serde_json::to_string(&spectral)?);

    for beta in [1, 20, 400] {
        let bounds = convexity_bounds(&spectral, g.problem.m(), beta, 1.0)?;
        println!("beta={beta:<4} mu1={:.4e} mu2={:.4e} clamped={}", bounds.mu1, bounds.mu2, bounds.mu1_clamped);
    }

    let bounds = convexity_bounds(&spectral, g.problem.m(), 20, 1.0)?;
    for xi in [0.0, 0.5, -0.1, -0.9] {
        let q = q_membership(xi, 1.0, &bounds)?;
        let r = gskm_rate(xi, 1.0, &bounds)?;
        println!("xi={xi:<5} region {:?}  rate {:?}  ok={}", q.region, r.rate(), r.preconditions_ok);
    }

    let (alpha, omega, gamma) = paskm_preset(1.0, &bounds, PaskmPreset::Param1)?;
    let report = paskm_rate(alpha, omega, gamma, 1.0, &bounds)?;
    println!("\nPASKM-1 report:\n{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
