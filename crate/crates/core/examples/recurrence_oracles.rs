//! The two linear recurrences behind the rate statements: a scalar
//! two-term recurrence and a coupled 2x2 system, each simulated with
//! equality and compared with its closed-form bound.
//!
//! ```bash
//! cargo run --example recurrence_oracles
//! ```

use linfeas::analysis::{matrix_oracle, scalar_oracle};

fn main() -> linfeas::Result<()> {
    println!("scalar: G_(k+1) = phi1 G_k + phi2 G_(k-1), phi1=0.5 phi2=0.3");
    for k in [1, 5, 10, 20, 40] {
        let o = scalar_oracle(0.5, 0.3, 1.0, k)?;
        println!(
            "  k={k:<3} simulated {:.6e}  bound {:.6e}  rho={:.4}",
            o.simulated_next, o.geometric_bound, o.constants.rho
        );
    }

    let pi = [0.4, 0.1, 0.2, 0.3];
    println!("\nmatrix: [H; F]_(k+1) = [[pi1, pi2], [pi3, pi4]] [H; F]_k, pi={pi:?}");
    for k in [1, 5, 10, 20] {
        let o = matrix_oracle(pi, 1.0, 0.5, k)?;
        println!("  k={k:<3} powered {:?}  closed form {:?}", o.simulated, o.closed_form);
    }
    Ok(())
}
