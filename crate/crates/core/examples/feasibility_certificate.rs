//! Certificates of feasibility: the encoding length of a rational system,
//! the iteration count after which a small maximum violation proves
//! feasibility, and an infeasible system that never gets below the
//! threshold.
//!
//! ```bash
//! cargo run --example feasibility_certificate
//! ```

use linfeas::analysis::{certificate_bounds, certify_gskm, encoding_length, theta_threshold};
use linfeas::{DenseMatrix, Problem};

fn main() -> linfeas::Result<()> {
    let r = certificate_bounds(10.0, 4, 0.0, 0.7, 100, 1.0)?;
    println!("sigma=10 n=4 rho_bar=0.7: k_min={} p_bound(k=100)={:.3e}", r.k_min, r.p_bound);

    // x <= 0 and -x <= -1 has no solution.
    let infeasible = Problem::new(DenseMatrix::from_rows(&[vec![1.0], vec![-1.0]])?, vec![0.0, -1.0])?;
    let sigma = encoding_length(&infeasible);
    let threshold = theta_threshold(sigma);
    let min_theta = (-20..=20)
        .map(|i| infeasible.max_violation(&[i as f64 / 10.0]))
        .fold(f64::INFINITY, f64::min);
    println!("infeasible system: sigma={sigma:.4}, threshold={threshold:.4}, smallest violation seen={min_theta:.4}");

    // A feasible box-like system: 0 <= x_i <= 1.
    let rows: Vec<Vec<f64>> = (0..3)
        .flat_map(|i| {
            let mut up = vec![0.0; 3];
            up[i] = 1.0;
            let mut lo = vec![0.0; 3];
            lo[i] = -1.0;
            [up, lo]
        })
        .collect();
    let feasible = Problem::new(DenseMatrix::from_rows(&rows)?, vec![1.0, 0.0, 1.0, 0.0, 1.0, 0.0])?;
    let report = certify_gskm(&feasible, 1.0, 1, 0.0, 200)?;
    println!("\nbox system, GSKM xi=0, k=200:\n{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
