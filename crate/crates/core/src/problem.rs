//! Feasibility instances `Ax <= b` and the residual/projection primitives
//! shared by every solver.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Row};

/// Squared row norms below this are treated as zero rows.
pub const ZERO_ROW_THRESHOLD: f64 = 1e-300;

/// A linear feasibility instance `Ax <= b`.
///
/// Rows are stored as given (not normalised); updates divide by the cached
/// squared row norms instead. The instance is immutable once built.
#[derive(Clone, Debug)]
pub struct Problem {
    a: Matrix,
    b: Vec<f64>,
    row_norms_sq: Vec<f64>,
    gram: OnceLock<Arc<[f64]>>,
}

impl Problem {
    pub fn new(a: impl Into<Matrix>, b: Vec<f64>) -> Result<Self> {
        let a = a.into();
        let (m, n) = (a.rows(), a.cols());
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "problem must have at least one row and column (got {m}x{n})"
            )));
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch {
                what: "right-hand side",
                expected: m,
                got: b.len(),
            });
        }
        if let Some(index) = b.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "right-hand side",
                index,
            });
        }
        let mut bad = None;
        a.for_each_entry(|i, j, v| {
            if bad.is_none() && !v.is_finite() {
                bad = Some(i * n + j);
            }
        });
        if let Some(index) = bad {
            return Err(Error::NonFinite {
                what: "constraint matrix",
                index,
            });
        }
        let mut row_norms_sq = Vec::with_capacity(m);
        for i in 0..m {
            let norm_sq = a.row(i).norm_sq();
            if norm_sq < ZERO_ROW_THRESHOLD {
                return Err(Error::ZeroRow { row: i, norm_sq });
            }
            row_norms_sq.push(norm_sq);
        }
        Ok(Self {
            a,
            b,
            row_norms_sq,
            gram: OnceLock::new(),
        })
    }

    /// Number of constraints.
    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn row_norms_sq(&self) -> &[f64] {
        &self.row_norms_sq
    }

    #[inline]
    pub fn row(&self, i: usize) -> Row<'_> {
        self.a.row(i)
    }

    /// Signed residual `a_i^T x - b_i` of one row.
    #[inline]
    pub fn row_residual(&self, i: usize, x: &[f64]) -> f64 {
        self.a.row(i).dot(x) - self.b[i]
    }

    /// Signed residual vector `Ax - b` written into `out`.
    pub fn residual_into(&self, x: &[f64], out: &mut [f64]) {
        self.a.mul_vec(x, out);
        for (o, bi) in out.iter_mut().zip(&self.b) {
            *o -= bi;
        }
    }

    pub fn check_iterate(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what: "iterate",
                expected: self.n(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Cached row Gram matrix `A A^T` (row-major, m x m).
    pub fn row_gram(&self) -> Arc<[f64]> {
        self.gram
            .get_or_init(|| Arc::from(self.a.row_gram()))
            .clone()
    }

    /// Maximum violation `theta(x) = [max_i (a_i^T x - b_i)]^+`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        (0..self.m())
            .map(|i| self.row_residual(i, x))
            .fold(0.0, f64::max)
    }
}

/// Positive residual `(Ax - b)^+` with its derived summaries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualSummary {
    pub positive_residual: Vec<f64>,
    pub norm2: f64,
    /// Maximum violation; 0 when every constraint holds.
    pub theta: f64,
    /// Fraction of constraints with `a_i^T x - b_i <= tol`.
    pub fsc: f64,
}

impl ResidualSummary {
    /// Builds the summary from a signed residual vector `Ax - b`.
    pub fn from_signed(signed: &[f64], fsc_tol: f64) -> Self {
        let positive_residual: Vec<f64> = signed.iter().map(|&r| r.max(0.0)).collect();
        let (norm2, theta, satisfied) = summarize_signed(signed, fsc_tol);
        Self {
            positive_residual,
            norm2,
            theta,
            fsc: satisfied as f64 / signed.len() as f64,
        }
    }
}

/// `(||(r)^+||, theta, #satisfied)` without allocating.
pub(crate) fn summarize_signed(signed: &[f64], fsc_tol: f64) -> (f64, f64, usize) {
    let mut sq = 0.0;
    let mut theta = 0.0f64;
    let mut satisfied = 0usize;
    for &r in signed {
        if r > 0.0 {
            sq += r * r;
            theta = theta.max(r);
        }
        if r <= fsc_tol {
            satisfied += 1;
        }
    }
    (sq.sqrt(), theta, satisfied)
}

/// Positive residual of `x`, its norm, maximum violation and fraction of
/// satisfied constraints (satisfaction tolerance `fsc_tol`).
pub fn positive_residual(problem: &Problem, x: &[f64], fsc_tol: f64) -> Result<ResidualSummary> {
    problem.check_iterate(x)?;
    let mut signed = vec![0.0; problem.m()];
    problem.residual_into(x, &mut signed);
    Ok(ResidualSummary::from_signed(&signed, fsc_tol))
}

/// Relaxed projection of `x` onto the half-space of `row`:
/// `x - delta * (a_i^T x - b_i)^+ / ||a_i||^2 * a_i`.
pub fn project_step(problem: &Problem, x: &[f64], row: usize, delta: f64) -> Result<Vec<f64>> {
    problem.check_iterate(x)?;
    if row >= problem.m() {
        return Err(Error::IndexOutOfRange {
            index: row,
            len: problem.m(),
        });
    }
    if !(delta > 0.0 && delta <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "projection parameter delta must lie in (0, 2], got {delta}"
        )));
    }
    let mut out = x.to_vec();
    let r = problem.row_residual(row, x);
    if r > 0.0 {
        problem
            .row(row)
            .axpy(-delta * r / problem.row_norms_sq()[row], &mut out);
    }
    Ok(out)
}

/// Euclidean distance from `x` to the box `[lower, upper]`.
pub fn distance_to_box(lower: &[f64], upper: &[f64], x: &[f64]) -> Result<f64> {
    if lower.len() != x.len() || upper.len() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "box bounds",
            expected: x.len(),
            got: lower.len().min(upper.len()),
        });
    }
    let mut sq = 0.0;
    for ((&l, &u), &xi) in lower.iter().zip(upper).zip(x) {
        if l > u {
            return Err(Error::InvalidParameter(format!(
                "inconsistent box bounds: lower {l} > upper {u}"
            )));
        }
        let d = xi - xi.clamp(l, u);
        sq += d * d;
    }
    Ok(sq.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{CsrMatrix, DenseMatrix};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn eye2(b: Vec<f64>) -> Problem {
        Problem::new(DenseMatrix::identity(2), b).unwrap()
    }

    #[test]
    fn residual_of_feasible_point() {
        let s = positive_residual(&eye2(vec![1.0, 1.0]), &[0.0, 0.0], 0.0).unwrap();
        assert_eq!(s.positive_residual, vec![0.0, 0.0]);
        assert_eq!(s.theta, 0.0);
        assert_eq!(s.fsc, 1.0);
    }

    #[test]
    fn residual_positive_part() {
        let s = positive_residual(&eye2(vec![0.0, 0.0]), &[2.0, -3.0], 0.0).unwrap();
        assert_eq!(s.positive_residual, vec![2.0, 0.0]);
        assert_eq!(s.theta, 2.0);
        assert_eq!(s.norm2, 2.0);
        assert_eq!(s.fsc, 0.5);
    }

    #[test]
    fn residual_matches_elementwise_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let b: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let p = Problem::new(DenseMatrix::from_rows(&rows).unwrap(), b.clone()).unwrap();
        let s = positive_residual(&p, &x, 0.0).unwrap();
        for i in 0..5 {
            let mut ax = 0.0;
            for j in 0..3 {
                ax += rows[i][j] * x[j];
            }
            assert!((s.positive_residual[i] - (ax - b[i]).max(0.0)).abs() < 1e-14);
        }
        let sq: f64 = s.positive_residual.iter().map(|r| r * r).sum();
        assert!((s.norm2 * s.norm2 - sq).abs() <= 1e-10 * sq.max(1e-300));
    }

    #[test]
    fn residual_dimension_mismatch() {
        assert!(matches!(
            positive_residual(&eye2(vec![0.0, 0.0]), &[1.0], 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn project_lands_reflects_and_relaxes() {
        let p = Problem::new(DenseMatrix::from_rows(&[vec![1.0, 0.0]]).unwrap(), vec![1.0]).unwrap();
        let x = [3.0, 0.0];
        let exact = project_step(&p, &x, 0, 1.0).unwrap();
        assert_eq!(exact, vec![1.0, 0.0]);
        assert_eq!(p.row_residual(0, &exact), 0.0);
        assert_eq!(project_step(&p, &x, 0, 2.0).unwrap(), vec![-1.0, 0.0]);
        assert_eq!(project_step(&p, &x, 0, 0.5).unwrap(), vec![2.0, 0.0]);
        assert!(project_step(&p, &x, 1, 1.0).is_err());
        assert!(project_step(&p, &x, 0, 0.0).is_err());
        assert!(project_step(&p, &x, 0, 2.5).is_err());
    }

    #[test]
    fn zero_rows_rejected() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            Problem::new(a, vec![0.0, 0.0]),
            Err(Error::ZeroRow { row: 1, .. })
        ));
        let s = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0)]).unwrap();
        assert!(matches!(Problem::new(s, vec![0.0, 0.0]), Err(Error::ZeroRow { row: 1, .. })));
        assert!(Problem::new(DenseMatrix::identity(2), vec![0.0]).is_err());
    }

    #[test]
    fn box_distances() {
        let (l, u) = ([0.0, 0.0], [1.0, 1.0]);
        assert_eq!(distance_to_box(&l, &u, &[0.5, 0.5]).unwrap(), 0.0);
        assert_eq!(distance_to_box(&l, &u, &[2.0, 0.5]).unwrap(), 1.0);
        assert!((distance_to_box(&l, &u, &[2.0, -1.0]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(distance_to_box(&[1.0], &[0.0], &[0.5]).is_err());
    }

    #[test]
    fn row_norms_are_exact() {
        let p = Problem::new(
            DenseMatrix::from_rows(&[vec![3.0, 4.0], vec![1e-3, 2e-3]]).unwrap(),
            vec![0.0, 0.0],
        )
        .unwrap();
        assert_eq!(p.row_norms_sq()[0], 25.0);
        assert!((p.row_norms_sq()[1] - 5e-6).abs() <= 1e-12 * 5e-6);
    }

    fn small_problem() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
        (1usize..6, 1usize..4).prop_flat_map(|(m, n)| {
            (
                proptest::collection::vec(
                    proptest::collection::vec(0.1f64..2.0, n).prop_map(|mut r| {
                        r[0] = r[0].max(0.5);
                        r
                    }),
                    m,
                ),
                proptest::collection::vec(-3.0f64..3.0, m),
                proptest::collection::vec(-3.0f64..3.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn exact_projection_satisfies_row((rows, b, x) in small_problem(), pick in 0usize..100) {
            let p = Problem::new(DenseMatrix::from_rows(&rows).unwrap(), b).unwrap();
            let i = pick % p.m();
            let y = project_step(&p, &x, i, 1.0).unwrap();
            prop_assert!(p.row_residual(i, &y).max(0.0) <= 1e-10);
            if p.row_residual(i, &x) <= 0.0 {
                prop_assert_eq!(y, x);
            }
        }

        #[test]
        fn fsc_invariant_under_row_scaling((rows, b, x) in small_problem(), c in 0.01f64..100.0) {
            let p = Problem::new(DenseMatrix::from_rows(&rows).unwrap(), b.clone()).unwrap();
            let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * c).collect()).collect();
            let q = Problem::new(
                DenseMatrix::from_rows(&scaled).unwrap(),
                b.iter().map(|v| v * c).collect(),
            ).unwrap();
            let sp = positive_residual(&p, &x, 0.0).unwrap();
            let sq = positive_residual(&q, &x, 0.0).unwrap();
            // exact zeros may move by rounding; only compare clear-cut signs
            let clear = (0..p.m()).all(|i| p.row_residual(i, &x).abs() > 1e-9);
            if clear {
                prop_assert_eq!(sp.fsc, sq.fsc);
            }
        }

        #[test]
        fn convex_combination_of_witnesses_is_feasible(
            (rows, _b, w1) in small_problem(), t in 0.0f64..1.0, seed in 0u64..1000,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w2: Vec<f64> = w1.iter().map(|_| rng.random_range(-3.0..3.0)).collect();
            let a = DenseMatrix::from_rows(&rows).unwrap();
            let m = Matrix::Dense(a.clone());
            // b >= A w1 and b >= A w2 makes every convex combination feasible
            let (mut a1, mut a2) = (vec![0.0; rows.len()], vec![0.0; rows.len()]);
            m.mul_vec(&w1, &mut a1);
            m.mul_vec(&w2, &mut a2);
            let b: Vec<f64> = a1.iter().zip(&a2).map(|(u, v)| u.max(*v) + 1e-9).collect();
            let p = Problem::new(a, b).unwrap();
            let x: Vec<f64> = w1.iter().zip(&w2).map(|(u, v)| t * u + (1.0 - t) * v).collect();
            let s = positive_residual(&p, &x, 0.0).unwrap();
            prop_assert!(s.positive_residual.iter().all(|&r| r == 0.0));
        }
    }
}
