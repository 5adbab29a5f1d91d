//! The beta-subset / max-violation sampling distribution.
//!
//! A sample is a uniformly random subset of `beta` rows; the selected row is
//! the most violated one in the subset. Under this distribution the row
//! holding the `(beta - 1 + j)`-th smallest positive residual is selected
//! with probability `C(beta - 1 + j, beta - 1) / C(m, beta)`, which gives
//! closed forms for the expected loss and its gradient.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::Problem;

/// Upper limit on `C(m, beta)` for [`expected_loss_bruteforce`].
pub const BRUTEFORCE_LIMIT: u64 = 1_000_000;

fn check_beta(m: usize, beta: usize) -> Result<()> {
    if beta == 0 || beta > m {
        return Err(Error::InvalidParameter(format!(
            "sample size beta must satisfy 1 <= beta <= m = {m}, got {beta}"
        )));
    }
    Ok(())
}

/// Reusable uniform subset sampler.
///
/// Keeps a permutation of `0..m` between draws and runs `beta` steps of a
/// Fisher-Yates shuffle on it, so one draw costs O(beta) and eight bytes of
/// rng output per drawn index. Shuffling any fixed arrangement this way
/// yields a uniformly random ordered selection, so reuse does not bias the
/// distribution. With `beta == m` the full index set is returned and the
/// rng is left untouched.
#[derive(Clone, Debug)]
pub struct Sampler {
    pool: Vec<usize>,
    beta: usize,
}

impl Sampler {
    pub fn new(m: usize, beta: usize) -> Result<Self> {
        check_beta(m, beta)?;
        Ok(Self {
            pool: (0..m).collect(),
            beta,
        })
    }

    pub fn m(&self) -> usize {
        self.pool.len()
    }

    pub fn beta(&self) -> usize {
        self.beta
    }

    /// Draws the next subset. The returned slice is valid until the next draw.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[usize] {
        let m = self.pool.len() as u64;
        if self.beta < self.pool.len() {
            for i in 0..self.beta {
                let j = rng.random_range(i as u64..m) as usize;
                self.pool.swap(i, j);
            }
        }
        &self.pool[..self.beta]
    }
}

/// Draws `beta` distinct indices from `0..m`, each subset equally likely.
pub fn sample_subset<R: Rng + ?Sized>(m: usize, beta: usize, rng: &mut R) -> Result<Vec<usize>> {
    let mut sampler = Sampler::new(m, beta)?;
    Ok(sampler.draw(rng).to_vec())
}

/// Outcome of selecting the most violated row of a sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSelection {
    pub subset: Vec<usize>,
    /// `None` when every sampled constraint is satisfied.
    pub chosen: Option<usize>,
    pub violation: f64,
}

/// Most violated row in `subset`; ties go to the smallest row index.
#[inline]
pub(crate) fn argmax_violated(problem: &Problem, x: &[f64], subset: &[usize]) -> (Option<usize>, f64) {
    let mut chosen = None;
    let mut best = 0.0;
    for &i in subset {
        let r = problem.row_residual(i, x);
        if r > best || (r == best && r > 0.0 && chosen.is_some_and(|c| i < c)) {
            best = r;
            chosen = Some(i);
        }
    }
    (chosen, best)
}

/// Picks `i* = argmax_{i in subset} (a_i^T x - b_i)^+`.
pub fn select_max_violated(problem: &Problem, x: &[f64], subset: &[usize]) -> Result<SampleSelection> {
    problem.check_iterate(x)?;
    if let Some(&index) = subset.iter().find(|&&i| i >= problem.m()) {
        return Err(Error::IndexOutOfRange {
            index,
            len: problem.m(),
        });
    }
    let (chosen, violation) = argmax_violated(problem, x, subset);
    Ok(SampleSelection {
        subset: subset.to_vec(),
        chosen,
        violation,
    })
}

/// Selection probabilities of the sorted residual positions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplingWeights {
    pub beta: usize,
    pub m: usize,
    /// `weights[j]` belongs to the `(beta + j)`-th smallest residual
    /// (1-based), `j = 0..=m-beta`.
    pub weights: Vec<f64>,
}

/// Weights `C(beta-1+j, beta-1) / C(m, beta)` for `j = 0..=m-beta`.
///
/// Evaluated from the largest weight `beta/m` downwards with the ratio
/// `w_{j-1} / w_j = j / (beta - 1 + j)`, so no factorial or binomial is
/// ever formed and nothing overflows; tiny leading weights may underflow
/// to zero, which is harmless. The result is renormalised to sum to one.
pub fn sampling_weights(m: usize, beta: usize) -> Result<SamplingWeights> {
    check_beta(m, beta)?;
    let len = m - beta + 1;
    let mut weights = vec![0.0; len];
    weights[len - 1] = beta as f64 / m as f64;
    for j in (1..len).rev() {
        weights[j - 1] = weights[j] * j as f64 / (beta - 1 + j) as f64;
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(SamplingWeights { beta, m, weights })
}

/// Row order for the sorted-residual formulas: ascending positive residual,
/// ties by row index.
fn sorted_positive(signed: &[f64]) -> Vec<(f64, usize)> {
    let mut s: Vec<(f64, usize)> = signed.iter().map(|&r| r.max(0.0)).zip(0..).collect();
    s.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    s
}

/// Expected loss from a precomputed signed residual vector `Ax - b`.
pub fn expected_loss_from_residuals(signed: &[f64], beta: usize) -> Result<f64> {
    let w = sampling_weights(signed.len(), beta)?;
    let sorted = sorted_positive(signed);
    let tail = &sorted[beta - 1..];
    Ok(0.5 * w.weights.iter().zip(tail).map(|(w, (s, _))| w * s * s).sum::<f64>())
}

/// `f(x) = E[1/2 ((a_{i*}^T x - b_{i*})^+)^2]` under the beta-subset
/// distribution, evaluated exactly.
pub fn expected_loss_exact(problem: &Problem, x: &[f64], beta: usize) -> Result<f64> {
    problem.check_iterate(x)?;
    let mut signed = vec![0.0; problem.m()];
    problem.residual_into(x, &mut signed);
    expected_loss_from_residuals(&signed, beta)
}

/// `grad f(x) = E[(a_{i*}^T x - b_{i*})^+ a_{i*}]`, evaluated exactly.
pub fn expected_gradient_exact(problem: &Problem, x: &[f64], beta: usize) -> Result<Vec<f64>> {
    problem.check_iterate(x)?;
    let w = sampling_weights(problem.m(), beta)?;
    let mut signed = vec![0.0; problem.m()];
    problem.residual_into(x, &mut signed);
    let sorted = sorted_positive(&signed);
    let mut grad = vec![0.0; problem.n()];
    for (wj, &(s, i)) in w.weights.iter().zip(&sorted[beta - 1..]) {
        if s > 0.0 {
            problem.row(i).axpy(wj * s, &mut grad);
        }
    }
    Ok(grad)
}

fn binomial(m: usize, k: usize) -> f64 {
    let k = k.min(m - k);
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Expected loss by enumerating every `beta`-subset. Refuses when
/// `C(m, beta)` exceeds [`BRUTEFORCE_LIMIT`].
pub fn expected_loss_bruteforce(problem: &Problem, x: &[f64], beta: usize) -> Result<f64> {
    problem.check_iterate(x)?;
    let m = problem.m();
    check_beta(m, beta)?;
    if binomial(m, beta).round() > BRUTEFORCE_LIMIT as f64 {
        return Err(Error::TooManySubsets {
            m,
            beta,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let pos: Vec<f64> = (0..m).map(|i| problem.row_residual(i, x).max(0.0)).collect();
    let mut idx: Vec<usize> = (0..beta).collect();
    let mut total = 0.0;
    let mut count = 0u64;
    loop {
        let s = idx.iter().map(|&i| pos[i]).fold(0.0, f64::max);
        total += 0.5 * s * s;
        count += 1;
        // advance to the next combination in lexicographic order
        let Some(p) = (0..beta).rev().find(|&p| idx[p] < m - beta + p) else {
            break;
        };
        idx[p] += 1;
        for q in p + 1..beta {
            idx[q] = idx[q - 1] + 1;
        }
    }
    Ok(total / count as f64)
}
