//! Regression values recorded from the current implementation. A change
//! here means the random stream, the generator or an iteration changed.

use linfeas::analysis::{convexity_bounds, gskm_rate, spectral_summary};
use linfeas::harness::default_start;
use linfeas::problems::{gen_random, GenSpec};
use linfeas::sampling::expected_loss_exact;
use linfeas::solvers::{run_solver, SolverConfig, StoppingRule, Variant};

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

#[test]
fn frozen_values() {
    let g = gen_random(&GenSpec::gaussian(80, 12, 0.5, 2024)).unwrap();
    let p = &g.problem;
    let x0 = default_start(p, 10.0);
    let mut out = Vec::new();
    for v in [Variant::Skm, Variant::gskm(-0.1), Variant::Paskm { alpha: 0.3, omega: 0.2, gamma: 0.9 }] {
        let cfg = SolverConfig::new(v, 1.0, 8).with_stopping(StoppingRule::residual(1e-6)).with_seed(5);
        out.push(run_solver(p, &cfg, &x0).unwrap().iterations() as f64);
    }
    let s = spectral_summary(p).unwrap();
    let b = convexity_bounds(&s, p.m(), 8, 1.0).unwrap();
    out.push(s.lambda_max);
    out.push(b.mu1);
    out.push(gskm_rate(0.5, 1.0, &b).unwrap().rate().unwrap());
    out.push(expected_loss_exact(p, &x0, 8).unwrap());
    let expected: [f64; 7] = [
        410.0,
        377.0,
        464.0,
        146.0487630824854,
        0.3520051527258974,
        0.753810342549042,
        1478.7366438750892,
    ];
    for (i, (a, e)) in out.iter().zip(expected).enumerate() {
        assert!(close(*a, e), "value {i}: got {a:?}, frozen {e:?}");
    }
}

#[test]
fn paskm_with_gamma_equal_delta_is_skm() {
    let g = gen_random(&GenSpec::gaussian(80, 12, 0.5, 2024)).unwrap();
    let x0 = default_start(&g.problem, 10.0);
    let run = |v| {
        let cfg = SolverConfig::new(v, 0.7, 8).with_stopping(StoppingRule::residual(1e-6)).with_seed(1);
        run_solver(&g.problem, &cfg, &x0).unwrap()
    };
    let a = run(Variant::Skm);
    let b = run(Variant::Paskm { alpha: 0.4, omega: 0.3, gamma: 0.7 });
    assert_eq!(a.iterations(), b.iterations());
    for (u, v) in a.state.x.iter().zip(&b.state.x) {
        assert!((u - v).abs() <= 1e-9);
    }
}
