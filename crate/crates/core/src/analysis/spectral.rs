//! Extremal eigenvalues of `A^T A` and the strong-convexity surrogates
//! derived from them.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::problem::Problem;

/// Eigenvalues below this fraction of the largest are treated as zero.
pub const ZERO_EIGEN_RTOL: f64 = 1e-10;

/// Largest Gram dimension handled by a dense eigendecomposition.
pub const DENSE_EIGEN_LIMIT: usize = 2048;

const POWER_MAX_ITERS: usize = 20_000;
const POWER_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Dense,
    PowerIteration,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralInfo {
    /// Smallest nonzero eigenvalue of `A^T A`.
    pub lambda_min_plus: f64,
    pub lambda_max: f64,
    pub frobenius_sq: f64,
    /// `1 / lambda_min_plus`, the squared Hoffman constant of a consistent
    /// equality system. Used as a surrogate for inequality systems.
    pub hoffman_sq_surrogate: f64,
    pub method: EigenMethod,
}

/// Spectral summary of the constraint matrix of `problem`.
pub fn spectral_summary(problem: &Problem) -> Result<SpectralInfo> {
    spectral_of(problem.matrix())
}

/// Spectral summary of an arbitrary matrix (zero rows allowed).
///
/// The nonzero spectrum of `A^T A` equals that of `A A^T`, so the smaller
/// Gram matrix is decomposed. Above [`DENSE_EIGEN_LIMIT`] the extremes are
/// estimated by power iteration, which cannot see past a zero eigenvalue:
/// rank-deficient matrices of that size are reported as a precondition
/// failure.
pub fn spectral_of(a: &Matrix) -> Result<SpectralInfo> {
    let frobenius_sq = a.frobenius_sq();
    if !(frobenius_sq > 0.0) {
        return Err(Error::Precondition("matrix has no nonzero entries".into()));
    }
    let dim = a.rows().min(a.cols());
    let (lambda_min_plus, lambda_max, method) = if dim <= DENSE_EIGEN_LIMIT {
        let (lo, hi) = dense_extremes(a);
        (lo, hi, EigenMethod::Dense)
    } else {
        let (lo, hi) = power_extremes(a)?;
        (lo, hi, EigenMethod::PowerIteration)
    };
    Ok(SpectralInfo {
        lambda_min_plus,
        lambda_max,
        frobenius_sq,
        hoffman_sq_surrogate: 1.0 / lambda_min_plus,
        method,
    })
}

fn smaller_gram(a: &Matrix) -> DMatrix<f64> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        let g = a.row_gram();
        DMatrix::from_row_slice(m, m, &g)
    } else {
        let mut g = DMatrix::<f64>::zeros(n, n);
        for i in 0..m {
            let row = a.row(i);
            row.for_each(|j, v| {
                row.for_each(|l, w| {
                    if l >= j {
                        g[(j, l)] += v * w;
                    }
                })
            });
        }
        g.fill_lower_triangle_with_upper_triangle();
        g
    }
}

fn dense_extremes(a: &Matrix) -> (f64, f64) {
    let eig = SymmetricEigen::new(smaller_gram(a));
    let hi = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = eig
        .eigenvalues
        .iter()
        .cloned()
        .filter(|&l| l > ZERO_EIGEN_RTOL * hi)
        .fold(f64::INFINITY, f64::min);
    (lo, hi)
}

/// `out = A^T A v`.
fn gram_apply(a: &Matrix, v: &[f64], tmp: &mut [f64], out: &mut [f64]) {
    a.mul_vec(v, tmp);
    a.tr_mul_vec(tmp, out);
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Power iteration on `shift * I - sign * A^T A`; returns the Rayleigh
/// quotient of `A^T A` at the converged vector.
fn power(a: &Matrix, shift: f64, sign: f64) -> Result<f64> {
    let n = a.cols();
    let mut v: Vec<f64> = (0..n).map(|j| 1.0 + (j % 7) as f64 * 0.1).collect();
    normalize(&mut v);
    let mut tmp = vec![0.0; a.rows()];
    let mut av = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..POWER_MAX_ITERS {
        gram_apply(a, &v, &mut tmp, &mut av);
        let lambda: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
        residual = v
            .iter()
            .zip(&av)
            .map(|(x, y)| (y - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt()
            / lambda.abs().max(f64::MIN_POSITIVE);
        if residual < POWER_TOL {
            return Ok(lambda);
        }
        for (x, y) in v.iter_mut().zip(&av) {
            *x = shift * *x - sign * y;
        }
        if normalize(&mut v) == 0.0 {
            return Ok(lambda);
        }
    }
    Err(Error::EigenNoConvergence {
        iterations: POWER_MAX_ITERS,
        residual,
    })
}

fn power_extremes(a: &Matrix) -> Result<(f64, f64)> {
    let hi = power(a, 0.0, -1.0)?;
    let lo = power(a, hi, 1.0)?;
    if lo <= ZERO_EIGEN_RTOL * hi {
        return Err(Error::Precondition(
            "smallest nonzero eigenvalue of a large rank-deficient matrix is not available".into(),
        ));
    }
    Ok((lo, hi))
}

/// Strong convexity and smoothness constants of the expected loss and the
/// per-step contraction factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvexityBounds {
    pub mu1: f64,
    pub mu2: f64,
    /// `2 delta - delta^2`.
    pub eta: f64,
    /// `1 - eta mu1`.
    pub h_delta: f64,
    /// `lambda_min_plus / m` exceeded `mu2` and was lowered to it.
    pub mu1_clamped: bool,
}

/// `mu1 = lambda_min_plus / m`, `mu2 = min(1, beta / m * lambda_max)`.
pub fn convexity_bounds(spectral: &SpectralInfo, m: usize, beta: usize, delta: f64) -> Result<ConvexityBounds> {
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "projection parameter delta must lie in (0, 2], got {delta}"
        )));
    }
    if beta == 0 || beta > m {
        return Err(Error::InvalidParameter(format!(
            "sample size beta must satisfy 1 <= beta <= m = {m}, got {beta}"
        )));
    }
    let mu2 = (beta as f64 / m as f64 * spectral.lambda_max).min(1.0);
    let raw = spectral.lambda_min_plus / m as f64;
    let mu1 = raw.min(mu2);
    Ok(with_mu(mu1, mu2, delta, raw > mu2))
}

/// Bounds from explicitly given `mu1`, `mu2`.
pub fn bounds_from_mu(mu1: f64, mu2: f64, delta: f64) -> Result<ConvexityBounds> {
    if !(mu1 > 0.0 && mu1 <= mu2 && mu2 <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < mu1 <= mu2 <= 1, got mu1 = {mu1}, mu2 = {mu2}"
        )));
    }
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "projection parameter delta must lie in (0, 2], got {delta}"
        )));
    }
    Ok(with_mu(mu1, mu2, delta, false))
}

fn with_mu(mu1: f64, mu2: f64, delta: f64, mu1_clamped: bool) -> ConvexityBounds {
    let eta = 2.0 * delta - delta * delta;
    ConvexityBounds {
        mu1,
        mu2,
        eta,
        h_delta: 1.0 - eta * mu1,
        mu1_clamped,
    }
}
