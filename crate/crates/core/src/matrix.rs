//! Row-oriented matrix storage.
//!
//! Every solver in this crate touches one row per inner step, so both
//! layouts are optimised for row extraction: dense matrices are stored
//! row-major and sparse matrices in compressed sparse row (CSR) form.

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "dense matrix data",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "dense matrix row",
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Compressed sparse row matrix. Column indices within a row are strictly
/// increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        indptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if indptr.len() != rows + 1 {
            return Err(Error::DimensionMismatch {
                what: "CSR indptr",
                expected: rows + 1,
                got: indptr.len(),
            });
        }
        if indices.len() != values.len() {
            return Err(Error::DimensionMismatch {
                what: "CSR values",
                expected: indices.len(),
                got: values.len(),
            });
        }
        if indptr[0] != 0 || indptr[rows] != indices.len() {
            return Err(Error::InvalidParameter(
                "CSR indptr must start at 0 and end at nnz".into(),
            ));
        }
        for i in 0..rows {
            if indptr[i] > indptr[i + 1] {
                return Err(Error::InvalidParameter(format!(
                    "CSR indptr decreases at row {i}"
                )));
            }
            let idx = &indices[indptr[i]..indptr[i + 1]];
            for (p, &j) in idx.iter().enumerate() {
                if j >= cols {
                    return Err(Error::IndexOutOfRange {
                        index: j,
                        len: cols,
                    });
                }
                if p > 0 && idx[p - 1] >= j {
                    return Err(Error::InvalidParameter(format!(
                        "CSR column indices in row {i} are not strictly increasing"
                    )));
                }
            }
        }
        Ok(Self {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    /// Builds a CSR matrix from `(row, col, value)` triplets. Duplicate
    /// entries are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= rows {
                return Err(Error::IndexOutOfRange { index: i, len: rows });
            }
            if j >= cols {
                return Err(Error::IndexOutOfRange { index: j, len: cols });
            }
        }
        sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            indices.push(j);
            values.push(v);
            indptr[i + 1] += 1;
            last = Some((i, j));
        }
        for i in 0..rows {
            indptr[i + 1] += indptr[i];
        }
        Self::new(rows, cols, indptr, indices, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[span.clone()], &self.values[span])
    }
}

/// Constraint matrix in either storage layout.
#[derive(Clone, Debug, PartialEq)]
pub enum Matrix {
    Dense(DenseMatrix),
    Csr(CsrMatrix),
}

/// Borrowed view of one matrix row.
#[derive(Clone, Copy, Debug)]
pub enum Row<'a> {
    Dense(&'a [f64]),
    Sparse {
        indices: &'a [usize],
        values: &'a [f64],
    },
}

impl<'a> Row<'a> {
    #[inline]
    pub fn dot(&self, x: &[f64]) -> f64 {
        match *self {
            Row::Dense(r) => dot(r, x),
            Row::Sparse { indices, values } => indices
                .iter()
                .zip(values)
                .map(|(&j, &v)| v * x[j])
                .sum(),
        }
    }

    /// `y += alpha * row`
    #[inline]
    pub fn axpy(&self, alpha: f64, y: &mut [f64]) {
        match *self {
            Row::Dense(r) => {
                for (yi, ri) in y.iter_mut().zip(r) {
                    *yi += alpha * ri;
                }
            }
            Row::Sparse { indices, values } => {
                for (&j, &v) in indices.iter().zip(values) {
                    y[j] += alpha * v;
                }
            }
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match *self {
            Row::Dense(r) => dot(r, r),
            Row::Sparse { values, .. } => dot(values, values),
        }
    }

    /// Calls `f(col, value)` for every stored entry.
    pub fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        match *self {
            Row::Dense(r) => r.iter().enumerate().for_each(|(j, &v)| f(j, v)),
            Row::Sparse { indices, values } => indices
                .iter()
                .zip(values)
                .for_each(|(&j, &v)| f(j, v)),
        }
    }
}

impl Matrix {
    pub fn rows(&self) -> usize {
        match self {
            Matrix::Dense(d) => d.rows(),
            Matrix::Csr(s) => s.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            Matrix::Dense(d) => d.cols(),
            Matrix::Csr(s) => s.cols(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Matrix::Dense(_))
    }

    #[inline]
    pub fn row(&self, i: usize) -> Row<'_> {
        match self {
            Matrix::Dense(d) => Row::Dense(d.row(i)),
            Matrix::Csr(s) => {
                let (indices, values) = s.row(i);
                Row::Sparse { indices, values }
            }
        }
    }

    /// Number of explicitly stored entries.
    pub fn nnz(&self) -> usize {
        match self {
            Matrix::Dense(d) => d.rows() * d.cols(),
            Matrix::Csr(s) => s.nnz(),
        }
    }

    /// `out = A x`
    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).dot(x);
        }
    }

    /// `out = A^T y`
    pub fn tr_mul_vec(&self, y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (i, &yi) in y.iter().enumerate() {
            if yi != 0.0 {
                self.row(i).axpy(yi, out);
            }
        }
    }

    /// Calls `f(row, col, value)` for every stored entry in row-major order.
    pub fn for_each_entry(&self, mut f: impl FnMut(usize, usize, f64)) {
        for i in 0..self.rows() {
            self.row(i).for_each(|j, v| f(i, j, v));
        }
    }

    pub fn frobenius_sq(&self) -> f64 {
        (0..self.rows()).map(|i| self.row(i).norm_sq()).sum()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Matrix::Dense(d) => d.clone(),
            Matrix::Csr(s) => {
                let mut data = vec![0.0; s.rows() * s.cols()];
                let cols = s.cols();
                self.for_each_entry(|i, j, v| data[i * cols + j] = v);
                DenseMatrix {
                    rows: s.rows(),
                    cols,
                    data,
                }
            }
        }
    }

    /// Row-major `A A^T` (m x m). Only sensible for moderate `m`.
    pub fn row_gram(&self) -> Vec<f64> {
        let m = self.rows();
        let mut g = vec![0.0; m * m];
        match self {
            Matrix::Dense(d) => {
                for i in 0..m {
                    let ri = d.row(i);
                    for j in 0..=i {
                        let v = dot(ri, d.row(j));
                        g[i * m + j] = v;
                        g[j * m + i] = v;
                    }
                }
            }
            Matrix::Csr(_) => {
                let mut scratch = vec![0.0; self.cols()];
                for i in 0..m {
                    let ri = self.row(i);
                    ri.for_each(|j, v| scratch[j] = v);
                    for j in 0..=i {
                        let v = self.row(j).dot(&scratch);
                        g[i * m + j] = v;
                        g[j * m + i] = v;
                    }
                    ri.for_each(|j, _| scratch[j] = 0.0);
                }
            }
        }
        g
    }
}

impl From<DenseMatrix> for Matrix {
    fn from(d: DenseMatrix) -> Self {
        Matrix::Dense(d)
    }
}

impl From<CsrMatrix> for Matrix {
    fn from(s: CsrMatrix) -> Self {
        Matrix::Csr(s)
    }
}

/// Dot product with four independent accumulators so the loop vectorises.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_sort() {
        let s = CsrMatrix::from_triplets(2, 3, &[(1, 2, 1.0), (0, 1, 2.0), (1, 2, 0.5), (1, 0, 3.0)])
            .unwrap();
        assert_eq!(s.row(0), (&[1usize][..], &[2.0][..]));
        assert_eq!(s.row(1), (&[0usize, 2][..], &[3.0, 1.5][..]));
    }

    #[test]
    fn dense_and_sparse_agree() {
        let d = DenseMatrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, -1.0, 0.5]]).unwrap();
        let s = CsrMatrix::from_triplets(2, 3, &[(0, 0, 1.0), (0, 2, 2.0), (1, 1, -1.0), (1, 2, 0.5)])
            .unwrap();
        let (d, s) = (Matrix::from(d), Matrix::from(s));
        let x = [0.3, -1.2, 4.0];
        let (mut yd, mut ys) = (vec![0.0; 2], vec![0.0; 2]);
        d.mul_vec(&x, &mut yd);
        s.mul_vec(&x, &mut ys);
        assert_eq!(yd, ys);
        let (mut td, mut ts) = (vec![0.0; 3], vec![0.0; 3]);
        d.tr_mul_vec(&[1.0, 2.0], &mut td);
        s.tr_mul_vec(&[1.0, 2.0], &mut ts);
        assert_eq!(td, ts);
        assert_eq!(d.row_gram(), s.row_gram());
        assert_eq!(s.to_dense(), d.to_dense());
    }

    #[test]
    fn rejects_bad_csr() {
        assert!(CsrMatrix::new(1, 2, vec![0, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::new(1, 2, vec![0, 1], vec![2], vec![1.0]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn dot_handles_tails() {
        let a: Vec<f64> = (0..7).map(f64::from).collect();
        assert_eq!(dot(&a, &a), 91.0);
    }
}
