//! The beta-subset sampling distribution: order-statistic weights and the
//! expected loss f(x), computed in closed form and by enumeration.
//!
//! ```bash
//! cargo run --example sampling_expectation
//! ```

use linfeas::problems::{gen_random, GenSpec};
use linfeas::sampling::{expected_gradient_exact, expected_loss_bruteforce, expected_loss_exact, sampling_weights};

fn main() -> linfeas::Result<()> {
    for beta in [1, 2, 4, 6] {
        let w = sampling_weights(6, beta)?;
        let shown: Vec<String> = w.weights.iter().map(|v| format!("{v:.4}")).collect();
        println!("m=6 beta={beta}: weights on the {} largest residuals (ascending) [{}]", w.weights.len(), shown.join(", "));
    }

    let g = gen_random(&GenSpec::gaussian(8, 3, 0.5, 11))?;
    let x = [3.0, -2.0, 1.5];
    println!();
    for beta in 1..=8 {
        let exact = expected_loss_exact(&g.problem, &x, beta)?;
        let brute = expected_loss_bruteforce(&g.problem, &x, beta)?;
        println!("beta={beta}  f exact {exact:.12}  enumerated {brute:.12}  diff {:.1e}", (exact - brute).abs());
    }
    let grad = expected_gradient_exact(&g.problem, &x, 3)?;
    println!("\ngradient of f at x for beta=3: {grad:?}");
    Ok(())
}
