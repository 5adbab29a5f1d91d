use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, Matrix};
use crate::problem::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    /// Entries of `A` drawn from N(0, 1).
    Gaussian,
    /// Entries of `A` drawn uniformly from `[low, high]`.
    Correlated,
}

fn default_low() -> f64 {
    0.9
}

fn default_high() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub m: usize,
    pub n: usize,
    /// Weight of `A x1` in `b = mix A x1 + (1 - mix) A x2`.
    pub mix: f64,
    pub seed: u64,
    #[serde(default = "default_low")]
    pub low: f64,
    #[serde(default = "default_high")]
    pub high: f64,
}

impl GenSpec {
    pub fn gaussian(m: usize, n: usize, mix: f64, seed: u64) -> Self {
        Self {
            kind: GenKind::Gaussian,
            m,
            n,
            mix,
            seed,
            low: default_low(),
            high: default_high(),
        }
    }

    pub fn correlated(m: usize, n: usize, mix: f64, seed: u64) -> Self {
        Self {
            kind: GenKind::Correlated,
            ..Self::gaussian(m, n, mix, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidParameter(format!(
                "generated problems need m, n >= 1 (got {}x{})",
                self.m, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.mix) {
            return Err(Error::InvalidParameter(format!("mix must lie in [0, 1], got {}", self.mix)));
        }
        if self.kind == GenKind::Correlated && !(self.low < self.high && self.low.is_finite() && self.high.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "entry range needs low < high, got [{}, {}]",
                self.low, self.high
            )));
        }
        Ok(())
    }
}

/// A generated instance with the vectors used to build it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub problem: Problem,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    /// `mix x1 + (1 - mix) x2`, which satisfies `A w = b` up to rounding.
    pub witness: Vec<f64>,
}

/// Draws `A` row-major, then `x1`, then `x2` (both N(0, 1)) from one
/// ChaCha8 stream seeded with `spec.seed`, and sets
/// `b = mix A x1 + (1 - mix) A x2`.
pub fn gen_random(spec: &GenSpec) -> Result<Generated> {
    spec.validate()?;
    let (m, n) = (spec.m, spec.n);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let data: Vec<f64> = match spec.kind {
        GenKind::Gaussian => (0..m * n).map(|_| rng.sample(StandardNormal)).collect(),
        GenKind::Correlated => (0..m * n).map(|_| rng.random_range(spec.low..=spec.high)).collect(),
    };
    let x1: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let x2: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let a = Matrix::Dense(DenseMatrix::new(m, n, data)?);
    let (mut ax1, mut ax2) = (vec![0.0; m], vec![0.0; m]);
    a.mul_vec(&x1, &mut ax1);
    a.mul_vec(&x2, &mut ax2);
    let b = ax1
        .iter()
        .zip(&ax2)
        .map(|(u, v)| spec.mix * u + (1.0 - spec.mix) * v)
        .collect();
    let witness = x1
        .iter()
        .zip(&x2)
        .map(|(u, v)| spec.mix * u + (1.0 - spec.mix) * v)
        .collect();
    Ok(Generated {
        problem: Problem::new(a, b)?,
        x1,
        x2,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::positive_residual;

    #[test]
    fn witness_is_consistent() {
        let g = gen_random(&GenSpec::gaussian(200, 50, 0.5, 7)).unwrap();
        assert_eq!((g.problem.m(), g.problem.n()), (200, 50));
        let mut r = vec![0.0; 200];
        g.problem.residual_into(&g.witness, &mut r);
        assert!(r.iter().all(|v| v.abs() < 1e-10));
        assert!(positive_residual(&g.problem, &g.witness, 0.0).unwrap().norm2 < 1e-10);
    }

    #[test]
    fn mix_one_uses_first_witness() {
        let g = gen_random(&GenSpec::gaussian(20, 5, 1.0, 3)).unwrap();
        let mut ax = vec![0.0; 20];
        g.problem.matrix().mul_vec(&g.x1, &mut ax);
        assert_eq!(ax, g.problem.rhs());
    }

    #[test]
    fn correlated_range() {
        let g = gen_random(&GenSpec::correlated(30, 10, 0.3, 1)).unwrap();
        let mut ok = true;
        g.problem.matrix().for_each_entry(|_, _, v| ok &= (0.9..=1.0).contains(&v));
        assert!(ok);
    }

    #[test]
    fn seed_determinism_and_validation() {
        let a = gen_random(&GenSpec::gaussian(10, 4, 0.5, 11)).unwrap();
        let b = gen_random(&GenSpec::gaussian(10, 4, 0.5, 11)).unwrap();
        assert_eq!(a.problem.matrix(), b.problem.matrix());
        assert_eq!(a.problem.rhs(), b.problem.rhs());
        assert!(gen_random(&GenSpec::gaussian(10, 4, 1.5, 0)).is_err());
        assert!(gen_random(&GenSpec::gaussian(0, 4, 0.5, 0)).is_err());
    }

    #[test]
    fn fixed_stream_prefix() {
        // guards the fill order: first entry of A, then x1[0] right after A
        let g = gen_random(&GenSpec::gaussian(2, 2, 0.5, 0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let first: Vec<f64> = (0..6).map(|_| rng.sample(StandardNormal)).collect();
        if let Matrix::Dense(d) = g.problem.matrix() {
            assert_eq!(d.data(), &first[..4]);
        }
        assert_eq!(g.x1, first[4..6].to_vec());
    }
}
