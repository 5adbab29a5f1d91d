//! Encoding length and the certificate-of-feasibility bounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::Problem;

/// `sigma = sum ln(|a_ij| + 1) + sum ln(|b_i| + 1) + ln(m n) + 2`
/// (natural logarithms; zero entries contribute nothing).
pub fn encoding_length(problem: &Problem) -> f64 {
    encoding_length_with(problem, f64::ln_1p, f64::ln)
}

/// The same expression with base-2 logarithms.
pub fn encoding_length_log2(problem: &Problem) -> f64 {
    encoding_length_with(problem, |v| (v + 1.0).log2(), f64::log2)
}

fn encoding_length_with(problem: &Problem, entry: impl Fn(f64) -> f64, log: impl Fn(f64) -> f64) -> f64 {
    let mut sigma = 0.0;
    problem.matrix().for_each_entry(|_, _, v| sigma += entry(v.abs()));
    sigma += problem.rhs().iter().map(|v| entry(v.abs())).sum::<f64>();
    sigma + log((problem.m() * problem.n()) as f64) + 2.0
}

/// `max_i ||a_i||`.
pub fn max_row_norm(problem: &Problem) -> f64 {
    problem.row_norms_sq().iter().cloned().fold(0.0, f64::max).sqrt()
}

/// `theta(x)` threshold below which an iterate certifies feasibility.
pub fn theta_threshold(sigma: f64) -> f64 {
    (1.0 - sigma).exp2()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CertificateReport {
    pub sigma: f64,
    /// `2^(1 - sigma)`.
    pub theta_threshold: f64,
    /// Smallest k satisfying the strict iteration lower bound.
    pub k_min: usize,
    pub k: usize,
    /// `min(1, H)` with `H = sqrt((1 + phi)/n) 2^(2 sigma - 2) psi rho_bar^(k/2)`.
    pub p_bound: f64,
    /// `log2 H`, finite even when `H` overflows.
    pub log2_h: f64,
    /// Maximum row norm; 1 for normalised systems.
    pub psi: f64,
    pub phi: f64,
    pub rho_bar: f64,
    pub n: usize,
}

/// Certificate quantities with base-2 logarithms throughout:
/// `k > (4 sigma - 4 - log2 n + log2(1 + phi) + 2 log2 psi) / log2(1 / rho_bar)`.
/// Pass `psi = 1` for row-normalised systems.
pub fn certificate_bounds(sigma: f64, n: usize, phi: f64, rho_bar: f64, k: usize, psi: f64) -> Result<CertificateReport> {
    if !(rho_bar < 1.0) {
        return Err(Error::Precondition(format!(
            "rho_bar = {rho_bar} must be below 1 for a certificate bound"
        )));
    }
    if !(rho_bar > 0.0) {
        return Err(Error::InvalidParameter(format!("rho_bar = {rho_bar} must be positive")));
    }
    if n == 0 || !(psi > 0.0) || !(phi >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1, psi > 0, phi >= 0 and finite sigma (n = {n}, psi = {psi}, phi = {phi}, sigma = {sigma})"
        )));
    }
    let nf = n as f64;
    let numerator = 4.0 * sigma - 4.0 - nf.log2() + (1.0 + phi).log2() + 2.0 * psi.log2();
    let ratio = numerator / (1.0 / rho_bar).log2();
    let k_min = if ratio < 0.0 { 0 } else { ratio.floor() as usize + 1 };
    let log2_h = 0.5 * ((1.0 + phi) / nf).log2() + 2.0 * sigma - 2.0 + psi.log2() + 0.5 * k as f64 * rho_bar.log2();
    Ok(CertificateReport {
        sigma,
        theta_threshold: theta_threshold(sigma),
        k_min,
        k,
        p_bound: log2_h.exp2().min(1.0),
        log2_h,
        psi,
        phi,
        rho_bar,
        n,
    })
}
