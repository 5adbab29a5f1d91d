use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{CsrMatrix, DenseMatrix, Matrix};
use crate::problem::Problem;

/// Homogeneous separability system: row `i` is `-labels[i] * features[i]`
/// and `b = 0`, so `A w <= 0` means `w` separates the classes through the
/// origin.
pub fn svm_to_feasibility(features: &Matrix, labels: &[f64]) -> Result<Problem> {
    if labels.len() != features.rows() {
        return Err(Error::DimensionMismatch {
            what: "labels",
            expected: features.rows(),
            got: labels.len(),
        });
    }
    if let Some(i) = labels.iter().position(|&y| y != 1.0 && y != -1.0) {
        return Err(Error::InvalidParameter(format!(
            "label {i} is {}, expected -1 or +1",
            labels[i]
        )));
    }
    let a: Matrix = match features {
        Matrix::Dense(d) => {
            let n = d.cols();
            let mut data = d.data().to_vec();
            for (row, &y) in data.chunks_exact_mut(n).zip(labels) {
                for v in row {
                    *v *= -y;
                }
            }
            DenseMatrix::new(d.rows(), n, data)?.into()
        }
        Matrix::Csr(_) => {
            let mut trip = Vec::with_capacity(features.nnz());
            features.for_each_entry(|i, j, v| trip.push((i, j, -labels[i] * v)));
            CsrMatrix::from_triplets(features.rows(), features.cols(), &trip)?.into()
        }
    };
    Problem::new(a, vec![0.0; labels.len()])
}

/// `min c^T x` subject to `A x = b`, `l <= x <= u`, with known optimum.
#[derive(Clone, Debug, PartialEq)]
pub struct LpInstance {
    pub c: Vec<f64>,
    pub a_eq: Matrix,
    pub b_eq: Vec<f64>,
    /// `-inf` entries mean no lower bound.
    pub lower: Vec<f64>,
    /// `+inf` entries mean no upper bound.
    pub upper: Vec<f64>,
    pub p_star: Option<f64>,
}

/// Row counts of the stacked feasibility system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LpLayout {
    pub equality_rows: usize,
    pub upper_rows: usize,
    pub lower_rows: usize,
}

/// Stacks `[A; -A; I_u; -I_l; c^T] x <= [b; -b; u; -l; p*]`, where `I_u`
/// and `I_l` keep only the rows of finite bounds.
pub fn lp_to_feasibility(lp: &LpInstance) -> Result<(Problem, LpLayout)> {
    let p_star = lp
        .p_star
        .ok_or_else(|| Error::InvalidParameter("LP transform needs the optimal value p_star".into()))?;
    let (m, n) = (lp.a_eq.rows(), lp.a_eq.cols());
    for (what, len, want) in [
        ("objective", lp.c.len(), n),
        ("equality right-hand side", lp.b_eq.len(), m),
        ("lower bounds", lp.lower.len(), n),
        ("upper bounds", lp.upper.len(), n),
    ] {
        if len != want {
            return Err(Error::DimensionMismatch {
                what,
                expected: want,
                got: len,
            });
        }
    }
    for j in 0..n {
        let (l, u) = (lp.lower[j], lp.upper[j]);
        if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY {
            return Err(Error::InvalidParameter(format!("invalid bounds [{l}, {u}] for variable {j}")));
        }
        if l.is_finite() && u.is_finite() && l > u {
            return Err(Error::InvalidParameter(format!("lower bound {l} exceeds upper bound {u} for variable {j}")));
        }
    }
    let uppers: Vec<usize> = (0..n).filter(|&j| lp.upper[j].is_finite()).collect();
    let lowers: Vec<usize> = (0..n).filter(|&j| lp.lower[j].is_finite()).collect();
    let rows = 2 * m + uppers.len() + lowers.len() + 1;

    let mut b = Vec::with_capacity(rows);
    b.extend_from_slice(&lp.b_eq);
    b.extend(lp.b_eq.iter().map(|v| -v));
    b.extend(uppers.iter().map(|&j| lp.upper[j]));
    b.extend(lowers.iter().map(|&j| -lp.lower[j]));
    b.push(p_star);

    let mut trip = Vec::with_capacity(2 * lp.a_eq.nnz() + uppers.len() + lowers.len() + n);
    lp.a_eq.for_each_entry(|i, j, v| trip.push((i, j, v)));
    lp.a_eq.for_each_entry(|i, j, v| trip.push((m + i, j, -v)));
    let mut r = 2 * m;
    for &j in &uppers {
        trip.push((r, j, 1.0));
        r += 1;
    }
    for &j in &lowers {
        trip.push((r, j, -1.0));
        r += 1;
    }
    for (j, &cj) in lp.c.iter().enumerate() {
        if cj != 0.0 {
            trip.push((r, j, cj));
        }
    }
    let csr = CsrMatrix::from_triplets(rows, n, &trip)?;
    let a: Matrix = if lp.a_eq.is_dense() {
        Matrix::Csr(csr).to_dense().into()
    } else {
        csr.into()
    };
    let layout = LpLayout {
        equality_rows: m,
        upper_rows: uppers.len(),
        lower_rows: lowers.len(),
    };
    Ok((Problem::new(a, b)?, layout))
}

/// `[I; -I] x <= [upper; -lower]`, whose feasible set is the box.
pub fn box_problem(lower: &[f64], upper: &[f64]) -> Result<Problem> {
    if lower.len() != upper.len() {
        return Err(Error::DimensionMismatch {
            what: "box bounds",
            expected: lower.len(),
            got: upper.len(),
        });
    }
    let n = lower.len();
    if lower.iter().zip(upper).any(|(l, u)| !(l <= u) || !l.is_finite() || !u.is_finite()) {
        return Err(Error::InvalidParameter("box bounds must be finite with lower <= upper".into()));
    }
    let mut data = vec![0.0; 2 * n * n];
    for j in 0..n {
        data[j * n + j] = 1.0;
        data[(n + j) * n + j] = -1.0;
    }
    let b = upper.iter().cloned().chain(lower.iter().map(|l| -l)).collect();
    Problem::new(DenseMatrix::new(2 * n, n, data)?, b)
}
