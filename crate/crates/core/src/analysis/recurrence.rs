//! Closed forms for the scalar and 2x2 linear recurrences behind the rate
//! bounds, with direct simulation as an oracle.

use serde::Serialize;

use crate::error::{Error, Result};

/// Constants of `G_{k+1} = phi1 G_k + phi2 G_{k-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarConstants {
    pub phi1: f64,
    pub phi2: f64,
    /// Largest root of `phi^2 + phi1 phi - phi2 = 0`.
    pub phi: f64,
    /// `phi + phi1`.
    pub rho: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
}

/// `phi`, `rho` and `R1..R4` for given `phi1`, `phi2` (no range checks).
pub fn scalar_constants(phi1: f64, phi2: f64) -> ScalarConstants {
    let phi = (-phi1 + (phi1 * phi1 + 4.0 * phi2).sqrt()) / 2.0;
    let rho = phi + phi1;
    let d = phi + rho;
    ScalarConstants {
        phi1,
        phi2,
        phi,
        rho,
        r1: (1.0 + phi) / d,
        r2: (1.0 - rho) / d,
        r3: (rho + phi2) / d,
        r4: (phi - phi2) / d,
    }
}

impl ScalarConstants {
    /// `(1 + phi) rho^k`, the bound on `G_{k+1} / G_0`.
    pub fn geometric_bound(&self, k: usize) -> f64 {
        (1.0 + self.phi) * self.rho.powi(k as i32)
    }

    /// Bounds on `(G_{k+1}, G_k) / G_0` split by the parity of `k`.
    pub fn parity_bounds(&self, k: usize) -> [f64; 2] {
        let (rho, phi) = (self.rho, self.phi);
        let p = |base: f64, e: usize| base.powi(e as i32);
        if k % 2 == 0 {
            [
                self.r1 * p(rho, k + 1) + self.r2 * p(phi, k + 1),
                self.r1 * p(rho, k) - self.r2 * p(phi, k),
            ]
        } else {
            [
                self.r3 * p(rho, k) - self.r4 * p(phi, k),
                self.r3 * p(rho, k - 1) + self.r4 * p(phi, k - 1),
            ]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScalarOracle {
    pub k: usize,
    /// `G_{k+1}` from the equality recurrence started at `G_0 = G_1`.
    pub simulated_next: f64,
    /// `G_k` from the same simulation.
    pub simulated: f64,
    /// `(1 + phi) rho^k G_0`.
    pub geometric_bound: f64,
    /// Parity bounds on `(G_{k+1}, G_k)`.
    pub parity_bounds: [f64; 2],
    pub constants: ScalarConstants,
}

/// Simulates `G_{j+1} = phi1 G_j + phi2 G_{j-1}` from `G_0 = G_1 = g0` and
/// evaluates every closed-form bound at step `k`.
pub fn scalar_oracle(phi1: f64, phi2: f64, g0: f64, k: usize) -> Result<ScalarOracle> {
    if !(phi1 >= 0.0 && phi2 >= 0.0 && phi1 + phi2 < 1.0) {
        return Err(Error::Precondition(format!(
            "scalar recurrence needs phi1, phi2 >= 0 and phi1 + phi2 < 1 (got {phi1}, {phi2})"
        )));
    }
    if !(g0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("G0 must be nonnegative, got {g0}")));
    }
    let (mut prev, mut cur) = (g0, g0);
    for _ in 0..k {
        let next = phi1 * cur + phi2 * prev;
        prev = cur;
        cur = next;
    }
    // cur = G_{k+1}, prev = G_k
    let constants = scalar_constants(phi1, phi2);
    let parity = constants.parity_bounds(k);
    Ok(ScalarOracle {
        k,
        simulated_next: cur,
        simulated: prev,
        geometric_bound: constants.geometric_bound(k) * g0,
        parity_bounds: [parity[0] * g0, parity[1] * g0],
        constants,
    })
}

/// Eigen-data of `M = [[pi1, pi2], [pi3, pi4]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MatrixConstants {
    pub pi: [f64; 4],
    /// `None` when `pi3 = 0`.
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    /// `None` when the two eigenvalues coincide.
    pub gamma3: Option<f64>,
    /// Smaller eigenvalue.
    pub rho1: f64,
    /// Larger eigenvalue.
    pub rho2: f64,
}

pub fn matrix_constants(pi: [f64; 4]) -> MatrixConstants {
    let [p1, p2, p3, p4] = pi;
    let s = ((p1 - p4).powi(2) + 4.0 * p2 * p3).sqrt();
    let (gamma1, gamma2) = if p3 != 0.0 {
        (Some((p1 - p4 + s) / (2.0 * p3)), Some((p1 - p4 - s) / (2.0 * p3)))
    } else {
        (None, None)
    };
    MatrixConstants {
        pi,
        gamma1,
        gamma2,
        gamma3: (s > 0.0).then(|| p3 / s),
        rho1: (p1 + p4 - s) / 2.0,
        rho2: (p1 + p4 + s) / 2.0,
    }
}

/// Violated conditions among: entries nonnegative,
/// `pi1 pi4 - pi2 pi3 >= 0`, `pi1 + pi4 < 1 + min(1, pi1 pi4 - pi2 pi3)`.
pub fn matrix_condition_violations(pi: [f64; 4]) -> Vec<String> {
    let [p1, p2, p3, p4] = pi;
    let mut v = Vec::new();
    if pi.iter().any(|p| !(*p >= 0.0)) {
        v.push(format!("matrix entries must be nonnegative (got {pi:?})"));
    }
    let det = p1 * p4 - p2 * p3;
    if !(det >= 0.0) {
        v.push(format!("pi1 pi4 - pi2 pi3 = {det} must be nonnegative"));
    }
    if !(p1 + p4 < 1.0 + det.min(1.0)) {
        v.push(format!(
            "pi1 + pi4 = {} must be below 1 + min(1, pi1 pi4 - pi2 pi3) = {}",
            p1 + p4,
            1.0 + det.min(1.0)
        ));
    }
    v
}

impl MatrixConstants {
    /// `M^k [h1; f1]` in closed form:
    /// `Gamma3 [(Gamma1 rho2^k - Gamma2 rho1^k) h1 + Gamma1 Gamma2 (rho1^k - rho2^k) f1;
    ///          (rho2^k - rho1^k) h1 + (Gamma1 rho1^k - Gamma2 rho2^k) f1]`.
    pub fn closed_form(&self, h1: f64, f1: f64, k: usize) -> Option<[f64; 2]> {
        let (g1, g2, g3) = (self.gamma1?, self.gamma2?, self.gamma3?);
        let a = self.rho1.powi(k as i32);
        let b = self.rho2.powi(k as i32);
        Some([
            g3 * ((g1 * b - g2 * a) * h1 + g1 * g2 * (a - b) * f1),
            g3 * ((b - a) * h1 + (g1 * a - g2 * b) * f1),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MatrixOracle {
    pub k: usize,
    /// `[H_{k+1}, F_{k+1}]` by repeated multiplication from `[H_1, F_1]`.
    pub simulated: [f64; 2],
    pub closed_form: [f64; 2],
    pub constants: MatrixConstants,
}

/// Powers `M` directly and through the closed form.
pub fn matrix_oracle(pi: [f64; 4], h1: f64, f1: f64, k: usize) -> Result<MatrixOracle> {
    let violations = matrix_condition_violations(pi);
    if !violations.is_empty() {
        return Err(Error::Precondition(violations.join("; ")));
    }
    let constants = matrix_constants(pi);
    let closed_form = constants.closed_form(h1, f1, k).ok_or_else(|| {
        Error::Precondition("closed form needs pi3 > 0 and distinct eigenvalues".into())
    })?;
    let [p1, p2, p3, p4] = pi;
    let mut v = [h1, f1];
    for _ in 0..k {
        v = [p1 * v[0] + p2 * v[1], p3 * v[0] + p4 * v[1]];
    }
    Ok(MatrixOracle {
        k,
        simulated: v,
        closed_form,
        constants,
    })
}
