//! Parameter regions, rate constants and presets for GSKM and PASKM.

use serde::Serialize;

use crate::error::{Error, Result};

use super::recurrence::{matrix_condition_violations, matrix_constants, scalar_constants, MatrixConstants, ScalarConstants};
use super::spectral::ConvexityBounds;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QRegion {
    Q1,
    Q2,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QMembership {
    pub region: QRegion,
    /// `1 - [(1 + xi) sqrt(h) - xi (1 + delta sqrt(mu2))]` for
    /// `-1 < xi <= 0`; positive inside Q2.
    pub q2_slack: Option<f64>,
}

/// Classifies `xi`: Q1 is `0 <= xi <= 1`, Q2 is `-1 < xi <= 0` with
/// `(1 + xi) sqrt(h) - xi (1 + delta sqrt(mu2)) < 1`. `xi = 0` is reported
/// as Q1.
pub fn q_membership(xi: f64, delta: f64, bounds: &ConvexityBounds) -> Result<QMembership> {
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "Q membership needs delta in (0, 2), got {delta}"
        )));
    }
    let q2_slack = (xi > -1.0 && xi <= 0.0).then(|| {
        1.0 - ((1.0 + xi) * bounds.h_delta.sqrt() - xi * (1.0 + delta * bounds.mu2.sqrt()))
    });
    let region = if (0.0..=1.0).contains(&xi) {
        QRegion::Q1
    } else if q2_slack.is_some_and(|s| s > 0.0) {
        QRegion::Q2
    } else {
        QRegion::Outside
    };
    Ok(QMembership { region, q2_slack })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    GskmQ1,
    GskmQ2,
    Paskm,
}

/// Cesaro constants of the Q1 regime: `E d(x~_k, P)^2 <= distance * d0^2 / k`
/// and `E f(x~_k) <= loss * d0^2 / k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CesaroConstants {
    pub distance: f64,
    pub loss: f64,
}

/// Accelerated-rate parameterisation check for a PASKM triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaCheck {
    /// `gamma^2 / (eta mu1)`.
    pub zeta: f64,
    /// Exclusive upper limit `4 eta mu1 / (1 - mu1)^2` (infinite at mu1 = 1).
    pub zeta_max: f64,
    /// Whether alpha and omega equal the values implied by zeta.
    pub matches: bool,
    pub ok: bool,
    /// Linear rate, equal to omega.
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub regime: Regime,
    pub delta: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub h_delta: f64,
    pub xi: Option<f64>,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    /// `phi1, phi2, phi, rho, R1..R4` of the scalar recurrence.
    pub scalar: Option<ScalarConstants>,
    /// `Pi1..Pi4, Gamma1..Gamma3, rho1, rho2` of the matrix recurrence.
    pub matrix: Option<MatrixConstants>,
    pub cesaro: Option<CesaroConstants>,
    pub zeta_check: Option<ZetaCheck>,
    pub preconditions_ok: bool,
    pub violated: Vec<String>,
}

impl RateReport {
    /// Linear rate of the regime: `rho` for the scalar recurrence, `rho2`
    /// for the matrix recurrence.
    pub fn rate(&self) -> Option<f64> {
        match (&self.scalar, &self.matrix) {
            (Some(s), _) => Some(s.rho),
            (None, Some(m)) => Some(m.rho2),
            _ => None,
        }
    }

    /// `(1 + phi) rho^k d0^2`, the Q1 bound on `E d(x_{k+1}, P)^2`.
    pub fn q1_distance_bound(&self, d0_sq: f64, k: usize) -> Option<f64> {
        self.scalar.map(|s| s.geometric_bound(k) * d0_sq)
    }

    /// Q2 bound on `E d(x_{k+1}, P)` with `F_1 = 0`.
    pub fn q2_distance_bound(&self, d0: f64, k: usize) -> Option<f64> {
        self.matrix.and_then(|m| m.closed_form(d0, 0.0, k)).map(|v| v[0])
    }
}

fn check_delta_open(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "rate analysis needs delta in (0, 2), got {delta}"
        )));
    }
    Ok(())
}

/// GSKM constants for the regime containing `xi`: the scalar recurrence
/// with `phi1 = (1 - xi) h`, `phi2 = xi h` for `xi >= 0`, the matrix
/// recurrence with `Pi = (sqrt h, |xi|, delta sqrt(mu2 h), |xi| (1 + delta
/// sqrt(mu2)))` for `xi < 0`.
pub fn gskm_rate(xi: f64, delta: f64, bounds: &ConvexityBounds) -> Result<RateReport> {
    check_delta_open(delta)?;
    let q = q_membership(xi, delta, bounds)?;
    let h = bounds.h_delta;
    let mut violated = Vec::new();
    let mut report = RateReport {
        regime: Regime::GskmQ1,
        delta,
        mu1: bounds.mu1,
        mu2: bounds.mu2,
        h_delta: h,
        xi: Some(xi),
        alpha: None,
        omega: None,
        gamma: None,
        scalar: None,
        matrix: None,
        cesaro: None,
        zeta_check: None,
        preconditions_ok: false,
        violated: Vec::new(),
    };
    if xi >= 0.0 {
        if xi > 1.0 {
            violated.push(format!("xi = {xi} exceeds 1"));
        }
        let s = scalar_constants((1.0 - xi) * h, xi * h);
        if !(s.rho < 1.0) {
            violated.push(format!("rho = {} is not below 1", s.rho));
        }
        report.cesaro = Some(CesaroConstants {
            distance: (1.0 + s.phi) / (1.0 - s.rho),
            loss: (1.0 + xi) / (2.0 * delta * (2.0 - delta)),
        });
        report.scalar = Some(s);
    } else {
        report.regime = Regime::GskmQ2;
        if q.region != QRegion::Q2 {
            violated.push(format!(
                "xi = {xi} is outside Q2 (slack {})",
                q.q2_slack.map_or(f64::NAN, |s| s)
            ));
        }
        let a = xi.abs();
        let pi = [
            h.sqrt(),
            a,
            delta * (bounds.mu2 * h).sqrt(),
            a * (1.0 + delta * bounds.mu2.sqrt()),
        ];
        violated.extend(matrix_condition_violations(pi));
        report.matrix = Some(matrix_constants(pi));
    }
    report.preconditions_ok = violated.is_empty();
    report.violated = violated;
    Ok(report)
}

/// PASKM constants with `Pi1 = omega (1 + gamma)`,
/// `Pi2 = (1 - omega) + gamma mu1 (gamma + 3 omega - 2)`,
/// `Pi3 = alpha omega (1 + gamma)`,
/// `Pi4 = (1 - alpha) h + alpha (1 - omega) + alpha gamma mu1 (gamma + 3 omega - 2)`,
/// together with the linear-rate conditions and the zeta check.
pub fn paskm_rate(alpha: f64, omega: f64, gamma: f64, delta: f64, bounds: &ConvexityBounds) -> Result<RateReport> {
    check_delta_open(delta)?;
    let (mu1, h) = (bounds.mu1, bounds.h_delta);
    let mut violated = Vec::new();
    if !(0.0..=1.0).contains(&alpha) {
        violated.push(format!("alpha = {alpha} outside [0, 1]"));
    }
    if !(0.0..=1.0).contains(&omega) {
        violated.push(format!("omega = {omega} outside [0, 1]"));
    }
    if !(gamma >= 0.0) {
        violated.push(format!("gamma = {gamma} is negative"));
    }
    let c = gamma + 3.0 * omega - 2.0;
    if !(c <= 0.0) {
        violated.push(format!("gamma + 3 omega - 2 = {c} must be <= 0"));
    }
    let cross = omega * h * (1.0 - alpha) * (1.0 + gamma);
    if !(cross < 1.0) {
        violated.push(format!("omega h (1 - alpha)(1 + gamma) = {cross} must be < 1"));
    }
    let cond = omega * (1.0 + gamma) + h * (1.0 - alpha) + alpha * (1.0 - omega) + alpha * gamma * mu1 * c - cross;
    if !(cond < 1.0) {
        violated.push(format!("rate condition value {cond} must be < 1"));
    }
    let pi = [
        omega * (1.0 + gamma),
        (1.0 - omega) + gamma * mu1 * c,
        alpha * omega * (1.0 + gamma),
        (1.0 - alpha) * h + alpha * (1.0 - omega) + alpha * gamma * mu1 * c,
    ];
    violated.extend(matrix_condition_violations(pi));
    let matrix = matrix_constants(pi);
    if violated.is_empty() && !(matrix.rho2 < 1.0) {
        violated.push(format!("rho2 = {} is not below 1", matrix.rho2));
    }
    Ok(RateReport {
        regime: Regime::Paskm,
        delta,
        mu1,
        mu2: bounds.mu2,
        h_delta: h,
        xi: None,
        alpha: Some(alpha),
        omega: Some(omega),
        gamma: Some(gamma),
        scalar: None,
        matrix: Some(matrix),
        cesaro: None,
        zeta_check: Some(zeta_check(alpha, omega, gamma, bounds)),
        preconditions_ok: violated.is_empty(),
        violated,
    })
}

fn zeta_triple(zeta: f64, bounds: &ConvexityBounds) -> (f64, f64, f64) {
    let (mu1, eta) = (bounds.mu1, bounds.eta);
    let gamma = (zeta * eta * mu1).sqrt();
    let alpha = eta / (eta + gamma);
    let omega = 1.0 - (zeta * mu1 * mu1 + 2.0 * gamma * mu1 - zeta * mu1) / (1.0 + zeta * mu1 * mu1);
    (alpha, omega, gamma)
}

fn zeta_max(bounds: &ConvexityBounds) -> f64 {
    if bounds.mu1 >= 1.0 {
        f64::INFINITY
    } else {
        4.0 * bounds.eta * bounds.mu1 / (1.0 - bounds.mu1).powi(2)
    }
}

fn zeta_check(alpha: f64, omega: f64, gamma: f64, bounds: &ConvexityBounds) -> ZetaCheck {
    let zeta = gamma * gamma / (bounds.eta * bounds.mu1);
    let (a, o, _) = zeta_triple(zeta, bounds);
    let close = |u: f64, v: f64| (u - v).abs() <= 1e-9 * u.abs().max(v.abs()).max(1.0);
    let matches = close(a, alpha) && close(o, omega);
    let zmax = zeta_max(bounds);
    ZetaCheck {
        zeta,
        zeta_max: zmax,
        matches,
        ok: matches && zeta > 0.0 && zeta < zmax,
        rate: omega,
    }
}

/// PASKM parameter choices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PaskmPreset {
    /// `gamma = 1.5 sqrt(eta)`, `omega = (2 - gamma) / 3`,
    /// `alpha = 0.99 alpha(gamma, delta, 0)`.
    Param1,
    /// As `Param1` with `gamma = 2 sqrt(eta)`.
    Param2,
    /// `zeta = 3.99 eta mu1 / (1 - mu1)^2`, `gamma = sqrt(zeta eta mu1)`,
    /// `alpha = eta / (eta + gamma)`, omega from zeta. When `mu1 = 1` the
    /// limit is unbounded and `fallback` is used as zeta.
    Zeta { fallback: f64 },
    Custom { alpha: f64, omega: f64, gamma: f64 },
}

/// `alpha(gamma, delta, p)`.
pub fn alpha_of(gamma: f64, p: f64, bounds: &ConvexityBounds) -> f64 {
    let h = bounds.h_delta;
    let num = (1.0 + p - gamma + gamma * gamma) * (1.0 - h);
    let den = 1.0 - h + p + gamma + (gamma - p) * h - gamma * gamma * h + bounds.mu1 * p * gamma * (gamma - 2.0);
    num / den
}

/// Resolves a preset to `(alpha, omega, gamma)`.
pub fn paskm_preset(delta: f64, bounds: &ConvexityBounds, preset: PaskmPreset) -> Result<(f64, f64, f64)> {
    check_delta_open(delta)?;
    let eta = bounds.eta;
    let from_gamma = |gamma: f64| {
        let omega = (2.0 - gamma) / 3.0;
        (0.99 * alpha_of(gamma, 0.0, bounds), omega, gamma)
    };
    Ok(match preset {
        PaskmPreset::Param1 => from_gamma(1.5 * eta.sqrt()),
        PaskmPreset::Param2 => from_gamma(2.0 * eta.sqrt()),
        PaskmPreset::Zeta { fallback } => {
            let zeta = if bounds.mu1 >= 1.0 {
                fallback
            } else {
                3.99 * eta * bounds.mu1 / (1.0 - bounds.mu1).powi(2)
            };
            zeta_triple(zeta, bounds)
        }
        PaskmPreset::Custom { alpha, omega, gamma } => (alpha, omega, gamma),
    })
}

/// Parameters of a Cesaro-average bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CesaroParams {
    Gskm { xi: f64, delta: f64, mu2: f64 },
    Paskm { alpha: f64, omega: f64, gamma: f64, delta: f64 },
}

/// Bound on `E f(x~_k)` (GSKM) or `E f(y~_k)` (PASKM) given
/// `d0_sq = d(x_0, P)^2` and `f0 = f(x_0)`.
///
/// GSKM with `-1 < xi <= 0` and `0 < delta < 2(1 + xi)/(1 - 2 xi)`:
/// `[(1+xi)(1+xi-2 delta xi mu2) d0^2 + 2 xi delta (delta xi - delta - 1) f0]
///  / [2 delta k (2 + 2 xi + 2 delta xi - delta)]`.
/// GSKM with `0 < xi <= 1`: `(1 + xi) d0^2 / (2 delta k (2 - delta))`.
/// PASKM with `0 < alpha <= 1`, `0 <= omega < 1`,
/// `delta < 2(1 - omega + alpha omega)/(1 + 2 omega - 2 alpha omega)` and
/// `alpha gamma = alpha delta + omega delta (1 - alpha)`:
/// `[(1-omega+alpha omega)^2 d0^2 + 2 delta (delta - 2 + 3 omega - 3 alpha omega
///  + delta omega - delta alpha omega) f0] / [2 delta k (2 - 2 omega + 2 alpha omega
///  - 2 delta omega + 2 delta alpha omega - delta)]`.
pub fn cesaro_bounds(params: CesaroParams, d0_sq: f64, f0: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("Cesaro bounds need k >= 1".into()));
    }
    let kf = k as f64;
    match params {
        CesaroParams::Gskm { xi, delta, mu2 } => {
            if !(xi > -1.0 && xi <= 1.0) {
                return Err(Error::Precondition(format!("xi = {xi} must lie in (-1, 1]")));
            }
            if xi <= 0.0 {
                let limit = 2.0 * (1.0 + xi) / (1.0 - 2.0 * xi);
                if !(delta > 0.0 && delta < limit) {
                    return Err(Error::Precondition(format!(
                        "delta = {delta} must lie in (0, 2(1 + xi)/(1 - 2 xi)) = (0, {limit})"
                    )));
                }
                let num = (1.0 + xi) * (1.0 + xi - 2.0 * delta * xi * mu2) * d0_sq
                    + 2.0 * xi * delta * (delta * xi - delta - 1.0) * f0;
                let den = 2.0 * delta * kf * (2.0 + 2.0 * xi + 2.0 * delta * xi - delta);
                Ok(num / den)
            } else {
                if !(delta > 0.0 && delta < 2.0) {
                    return Err(Error::Precondition(format!("delta = {delta} must lie in (0, 2)")));
                }
                Ok((1.0 + xi) * d0_sq / (2.0 * delta * kf * (2.0 - delta)))
            }
        }
        CesaroParams::Paskm { alpha, omega, gamma, delta } => {
            if !(alpha > 0.0 && alpha <= 1.0) {
                return Err(Error::Precondition(format!("alpha = {alpha} must lie in (0, 1]")));
            }
            if !(0.0..1.0).contains(&omega) {
                return Err(Error::Precondition(format!("omega = {omega} must lie in [0, 1)")));
            }
            let aw = alpha * omega;
            let limit = 2.0 * (1.0 - omega + aw) / (1.0 + 2.0 * omega - 2.0 * aw);
            if !(delta > 0.0 && delta < limit) {
                return Err(Error::Precondition(format!(
                    "delta = {delta} must lie in (0, {limit})"
                )));
            }
            let coupled = alpha * delta + omega * delta * (1.0 - alpha);
            if (alpha * gamma - coupled).abs() > 1e-9 * coupled.abs().max(1.0) {
                return Err(Error::Precondition(format!(
                    "alpha gamma = {} must equal alpha delta + omega delta (1 - alpha) = {coupled}",
                    alpha * gamma
                )));
            }
            let num = (1.0 - omega + aw).powi(2) * d0_sq
                + 2.0 * delta * (delta - 2.0 + 3.0 * omega - 3.0 * aw + delta * omega - delta * aw) * f0;
            let den = 2.0 * delta * kf * (2.0 - 2.0 * omega + 2.0 * aw - 2.0 * delta * omega + 2.0 * delta * aw - delta);
            Ok(num / den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::spectral::bounds_from_mu;
    use crate::analysis::recurrence::scalar_oracle;

    fn b03() -> ConvexityBounds {
        bounds_from_mu(0.3, 1.0, 1.0).unwrap()
    }

    #[test]
    fn membership_examples() {
        let b = b03();
        assert_eq!(q_membership(0.5, 1.0, &b).unwrap().region, QRegion::Q1);
        let zero = q_membership(0.0, 1.0, &b).unwrap();
        assert_eq!(zero.region, QRegion::Q1);
        assert!(zero.q2_slack.unwrap() > 0.0);
        let neg = q_membership(-0.2, 1.0, &b).unwrap();
        assert_eq!(neg.region, QRegion::Outside);
        let lhs = 0.8 * 0.7f64.sqrt() + 0.2 * 2.0;
        assert!((neg.q2_slack.unwrap() - (1.0 - lhs)).abs() < 1e-12);
        assert!((lhs - 1.0693).abs() < 1e-4);
    }

    #[test]
    fn skm_rate_recovered() {
        let r = gskm_rate(0.0, 1.0, &b03()).unwrap();
        let s = r.scalar.unwrap();
        assert_eq!(s.phi, 0.0);
        assert!((s.rho - 0.7).abs() < 1e-15);
        assert!(r.preconditions_ok);
        assert!((r.q1_distance_bound(1.0, 3).unwrap() - 0.343).abs() < 1e-12);
    }

    #[test]
    fn q1_example_against_oracle() {
        let r = gskm_rate(0.5, 1.0, &b03()).unwrap();
        let s = r.scalar.unwrap();
        assert!((s.phi1 - 0.35).abs() < 1e-15 && (s.phi2 - 0.35).abs() < 1e-15);
        let phi = (-0.35 + (0.1225f64 + 1.4).sqrt()) / 2.0;
        assert!((s.phi - phi).abs() < 1e-15);
        assert!(s.rho < 1.0);
        assert!(s.rho >= (1.0 - 0.5) * 0.7);
        for k in 0..50 {
            let o = scalar_oracle(s.phi1, s.phi2, 1.0, k).unwrap();
            assert!(o.simulated_next <= o.geometric_bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn table_limits() {
        // beta = 1, delta = 1 on normalized rows: mu1 = lambda_min / m,
        // which equals lambda_min / ||A||_F^2
        let (lmin, m) = (2.0, 10.0);
        let b = bounds_from_mu(lmin / m, 0.5, 1.0).unwrap();
        let r = gskm_rate(0.0, 1.0, &b).unwrap();
        assert!((r.rate().unwrap() - (1.0 - lmin / m)).abs() < 1e-15);
    }

    #[test]
    fn q2_regime() {
        let b = bounds_from_mu(0.3, 0.3, 0.5).unwrap();
        let r = gskm_rate(-0.05, 0.5, &b).unwrap();
        assert_eq!(r.regime, Regime::GskmQ2);
        let m = r.matrix.unwrap();
        assert!(m.rho1 <= m.rho2);
        if r.preconditions_ok {
            assert!(m.rho2 < 1.0);
        }
        let bad = gskm_rate(-0.2, 1.0, &b03()).unwrap();
        assert!(!bad.preconditions_ok);
    }

    #[test]
    fn presets_match_hand_arithmetic() {
        let b = b03();
        let (a, o, g) = paskm_preset(1.0, &b, PaskmPreset::Param1).unwrap();
        assert!((g - 1.5).abs() < 1e-15);
        assert!((o - 1.0 / 6.0).abs() < 1e-15);
        assert!((alpha_of(1.5, 0.0, &b) - 0.411_764_705_882_352_9).abs() < 1e-12);
        assert!((a - 0.99 * 0.525 / 1.275).abs() < 1e-12);
        let (_, o2, g2) = paskm_preset(1.0, &b, PaskmPreset::Param2).unwrap();
        assert_eq!((g2, o2), (2.0, 0.0));
        let (a3, _, g3) = paskm_preset(1.0, &b, PaskmPreset::Zeta { fallback: 1.0 }).unwrap();
        let zeta = 3.99 * 0.3 / 0.49;
        assert!((g3 - (zeta * 0.3f64).sqrt()).abs() < 1e-12);
        assert!((g3 - 0.85607).abs() < 1e-5);
        assert!((a3 - 1.0 / (1.0 + g3)).abs() < 1e-12);
        assert!(paskm_preset(2.0, &b, PaskmPreset::Param1).is_err());
    }

    #[test]
    fn zeta_edge_at_mu1_one() {
        let b = bounds_from_mu(1.0, 1.0, 1.0).unwrap();
        let (_, o, g) = paskm_preset(1.0, &b, PaskmPreset::Zeta { fallback: 2.0 }).unwrap();
        assert!((o - (1.0 - 2.0 * g / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn zeta_preset_passes_its_own_check() {
        let b = b03();
        let (a, o, g) = paskm_preset(1.0, &b, PaskmPreset::Zeta { fallback: 1.0 }).unwrap();
        let r = paskm_rate(a, o, g, 1.0, &b).unwrap();
        let z = r.zeta_check.unwrap();
        assert!(z.matches && z.ok);
        assert_eq!(z.rate, o);
    }

    #[test]
    fn rate_conditions_imply_contraction() {
        let b = bounds_from_mu(0.2, 0.6, 0.8).unwrap();
        let mut checked = 0;
        for ia in 0..=10 {
            for io in 0..=10 {
                for ig in 0..=10 {
                    let (a, o, g) = (ia as f64 / 10.0, io as f64 / 10.0, ig as f64 / 5.0);
                    let r = paskm_rate(a, o, g, 0.8, &b).unwrap();
                    if r.preconditions_ok {
                        let m = r.matrix.unwrap();
                        assert!(m.rho1 <= m.rho2 && m.rho2 < 1.0);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn cesaro_examples() {
        let skm = CesaroParams::Gskm { xi: 0.0, delta: 1.0, mu2: 1.0 };
        assert!((cesaro_bounds(skm, 4.0, 123.0, 10).unwrap() - 0.2).abs() < 1e-15);
        let pos = CesaroParams::Gskm { xi: 1e-300, delta: 1.0, mu2: 1.0 };
        assert!((cesaro_bounds(pos, 4.0, 0.0, 10).unwrap() - 0.2).abs() < 1e-15);
        let mut last = f64::INFINITY;
        for k in 1..100 {
            let v = cesaro_bounds(skm, 4.0, 1.0, k).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(cesaro_bounds(skm, 4.0, 1.0, 0).is_err());
        let out = CesaroParams::Gskm { xi: -0.4, delta: 1.0, mu2: 1.0 };
        assert!(matches!(cesaro_bounds(out, 1.0, 1.0, 1), Err(Error::Precondition(_))));
        let (alpha, omega, delta) = (0.5, 0.2, 0.5);
        let gamma = delta + omega * delta * (1.0 - alpha) / alpha;
        let p = CesaroParams::Paskm { alpha, omega, gamma, delta };
        assert!(cesaro_bounds(p, 1.0, 0.1, 5).unwrap() > 0.0);
        let uncoupled = CesaroParams::Paskm { alpha, omega, gamma: gamma + 0.1, delta };
        assert!(cesaro_bounds(uncoupled, 1.0, 0.1, 5).is_err());
    }

    #[test]
    fn paskm_cesaro_reduces_to_skm() {
        // omega = 0 and alpha = 1 make PASKM an SKM run on y
        let p = CesaroParams::Paskm { alpha: 1.0, omega: 0.0, gamma: 1.0, delta: 1.0 };
        let v = cesaro_bounds(p, 4.0, 0.0, 10).unwrap();
        assert!((v - 0.2).abs() < 1e-15);
    }
}
