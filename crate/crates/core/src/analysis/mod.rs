//! Spectral surrogates, rate constants, Cesaro bounds, recurrence oracles
//! and certificate bounds.

mod certificate;
mod rates;
mod recurrence;
mod spectral;

pub use certificate::{
    certificate_bounds, encoding_length, encoding_length_log2, max_row_norm, theta_threshold, CertificateReport,
};
pub use rates::{
    alpha_of, cesaro_bounds, gskm_rate, paskm_preset, paskm_rate, q_membership, CesaroConstants, CesaroParams,
    PaskmPreset, QMembership, QRegion, RateReport, Regime, ZetaCheck,
};
pub use recurrence::{
    matrix_condition_violations, matrix_constants, matrix_oracle, scalar_constants, scalar_oracle, MatrixConstants,
    MatrixOracle, ScalarConstants, ScalarOracle,
};
pub use spectral::{
    bounds_from_mu, convexity_bounds, spectral_of, spectral_summary, ConvexityBounds, EigenMethod, SpectralInfo,
    DENSE_EIGEN_LIMIT, ZERO_EIGEN_RTOL,
};

use crate::error::{Error, Result};
use crate::problem::Problem;

/// Certificate report for GSKM with parameter `xi` on `problem`.
///
/// `rho_bar` is `rho` of the scalar recurrence for `xi >= 0` and `rho2^2`
/// of the matrix recurrence for `xi < 0`; `phi` is taken from the scalar
/// recurrence and is 0 in the second case. The encoding length uses
/// natural logarithms and `psi` is the largest row norm.
pub fn certify_gskm(problem: &Problem, delta: f64, beta: usize, xi: f64, k: usize) -> Result<CertificateReport> {
    let spectral = spectral_summary(problem)?;
    let bounds = convexity_bounds(&spectral, problem.m(), beta, delta)?;
    let report = gskm_rate(xi, delta, &bounds)?;
    if !report.preconditions_ok {
        return Err(Error::Precondition(report.violated.join("; ")));
    }
    let (phi, rho_bar) = match (report.scalar, report.matrix) {
        (Some(s), _) => (s.phi, s.rho),
        (None, Some(m)) => (0.0, m.rho2 * m.rho2),
        _ => unreachable!("gskm_rate always fills one recurrence"),
    };
    certificate_bounds(encoding_length(problem), problem.n(), phi, rho_bar, k, max_row_norm(problem))
}
