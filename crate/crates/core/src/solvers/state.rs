use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::Problem;
use crate::sampling::{argmax_violated, Sampler};

use super::config::{GskmStart, SolverConfig, Variant};

/// Random number generator used by every solver. ChaCha8 is counter based
/// and produces the same stream on every platform.
pub type SolverRng = ChaCha8Rng;

pub fn solver_rng(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Iterates of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub k: usize,
    pub x: Vec<f64>,
    /// GSKM: the previous SKM point `z_{k-1}`.
    pub z_prev: Option<Vec<f64>>,
    /// PASKM: the auxiliary sequence `v_k`.
    pub v: Option<Vec<f64>>,
    /// PASKM: `y_k = x_k + alpha (v_k - x_k)`, the point at which the next
    /// row is selected.
    pub y: Option<Vec<f64>>,
    /// Sum of the averaged iterates after each step (`x` for SKM/GSKM, `y`
    /// for PASKM).
    pub cesaro_sum: Vec<f64>,
}

impl SolverState {
    pub fn new(problem: &Problem, variant: &Variant, x0: &[f64]) -> Result<Self> {
        problem.check_iterate(x0)?;
        if let Some(index) = x0.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "initial point",
                index,
            });
        }
        let n = x0.len();
        let mut state = Self {
            k: 0,
            x: x0.to_vec(),
            z_prev: None,
            v: None,
            y: None,
            cesaro_sum: vec![0.0; n],
        };
        match variant {
            Variant::Skm => {}
            Variant::Gskm { start, .. } => {
                if *start == GskmStart::FromInitialPoint {
                    state.z_prev = Some(x0.to_vec());
                }
            }
            Variant::Paskm { .. } => {
                state.v = Some(x0.to_vec());
                state.y = Some(x0.to_vec());
            }
        }
        Ok(state)
    }

    /// The sequence whose running mean is the Cesaro average.
    pub fn averaged_iterate(&self) -> &[f64] {
        self.y.as_deref().unwrap_or(&self.x)
    }

    fn accumulate(&mut self) {
        let src = self.y.as_deref().unwrap_or(&self.x);
        for (s, v) in self.cesaro_sum.iter_mut().zip(src) {
            *s += v;
        }
    }
}

/// Row selected by one step and its scaled violation
/// `(a_i^T p - b_i)^+ / ||a_i||^2` at the selection point `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepInfo {
    pub chosen: Option<usize>,
    pub scaled_violation: f64,
}

fn select<R: Rng + ?Sized>(
    problem: &Problem,
    point: &[f64],
    sampler: &mut Sampler,
    rng: &mut R,
) -> StepInfo {
    let (chosen, violation) = argmax_violated(problem, point, sampler.draw(rng));
    StepInfo {
        chosen,
        scaled_violation: chosen.map_or(0.0, |i| violation / problem.row_norms_sq()[i]),
    }
}

fn check_sampler(problem: &Problem, sampler: &Sampler) -> Result<()> {
    if sampler.m() != problem.m() {
        return Err(Error::DimensionMismatch {
            what: "sampler rows",
            expected: problem.m(),
            got: sampler.m(),
        });
    }
    Ok(())
}

/// One SKM step: sample, pick the most violated sampled row and project
/// onto it with relaxation `delta`.
pub fn skm_step<R: Rng + ?Sized>(
    problem: &Problem,
    state: &mut SolverState,
    delta: f64,
    sampler: &mut Sampler,
    rng: &mut R,
) -> Result<StepInfo> {
    check_sampler(problem, sampler)?;
    let info = select(problem, &state.x, sampler, rng);
    if let Some(i) = info.chosen {
        problem.row(i).axpy(-delta * info.scaled_violation, &mut state.x);
    }
    state.k += 1;
    state.accumulate();
    Ok(info)
}

/// One GSKM step: `z_k = SKM(x_k)`, `x_{k+1} = (1 - xi) z_k + xi z_{k-1}`.
pub fn gskm_step<R: Rng + ?Sized>(
    problem: &Problem,
    state: &mut SolverState,
    delta: f64,
    xi: f64,
    sampler: &mut Sampler,
    rng: &mut R,
) -> Result<StepInfo> {
    check_sampler(problem, sampler)?;
    let info = select(problem, &state.x, sampler, rng);
    if let Some(i) = info.chosen {
        problem.row(i).axpy(-delta * info.scaled_violation, &mut state.x);
    }
    // state.x now holds z_k
    match state.z_prev.as_mut() {
        None => state.z_prev = Some(state.x.clone()),
        Some(zp) => {
            for (x, p) in state.x.iter_mut().zip(zp.iter_mut()) {
                let z = *x;
                *x = z + xi * (*p - z);
                *p = z;
            }
        }
    }
    state.k += 1;
    state.accumulate();
    Ok(info)
}

/// One PASKM step. With `s` the scaled violation at `y_k`:
/// `x_{k+1} = y_k - delta s a_i`,
/// `v_{k+1} = omega v_k + (1 - omega) y_k - gamma s a_i`,
/// `y_{k+1} = alpha v_{k+1} + (1 - alpha) x_{k+1}`.
pub fn paskm_step<R: Rng + ?Sized>(
    problem: &Problem,
    state: &mut SolverState,
    delta: f64,
    (alpha, omega, gamma): (f64, f64, f64),
    sampler: &mut Sampler,
    rng: &mut R,
) -> Result<StepInfo> {
    check_sampler(problem, sampler)?;
    let (Some(v), Some(y)) = (state.v.as_mut(), state.y.as_mut()) else {
        return Err(Error::InvalidParameter(
            "PASKM step on a state without v and y sequences".into(),
        ));
    };
    let info = select(problem, y, sampler, rng);
    state.x.copy_from_slice(y);
    for (vj, &yj) in v.iter_mut().zip(y.iter()) {
        *vj = yj + omega * (*vj - yj);
    }
    if let Some(i) = info.chosen {
        let row = problem.row(i);
        row.axpy(-delta * info.scaled_violation, &mut state.x);
        row.axpy(-gamma * info.scaled_violation, v);
    }
    for ((yj, &xj), &vj) in y.iter_mut().zip(&state.x).zip(v.iter()) {
        *yj = xj + alpha * (vj - xj);
    }
    state.k += 1;
    state.accumulate();
    Ok(info)
}

/// Dispatches one step according to `variant`.
pub fn step<R: Rng + ?Sized>(
    problem: &Problem,
    state: &mut SolverState,
    variant: &Variant,
    delta: f64,
    sampler: &mut Sampler,
    rng: &mut R,
) -> Result<StepInfo> {
    match *variant {
        Variant::Skm => skm_step(problem, state, delta, sampler, rng),
        Variant::Gskm { xi, .. } => gskm_step(problem, state, delta, xi, sampler, rng),
        Variant::Paskm { alpha, omega, gamma } => {
            paskm_step(problem, state, delta, (alpha, omega, gamma), sampler, rng)
        }
    }
}

/// Step-by-step driver that owns the state, sampler and rng of one run.
#[derive(Clone, Debug)]
pub struct Solver<'a> {
    problem: &'a Problem,
    config: SolverConfig,
    state: SolverState,
    sampler: Sampler,
    rng: SolverRng,
}

impl<'a> Solver<'a> {
    pub fn new(problem: &'a Problem, config: SolverConfig, x0: &[f64]) -> Result<Self> {
        config.validate(problem.m())?;
        let state = SolverState::new(problem, &config.variant, x0)?;
        let sampler = Sampler::new(problem.m(), config.beta)?;
        let rng = solver_rng(config.seed);
        Ok(Self {
            problem,
            config,
            state,
            sampler,
            rng,
        })
    }

    pub fn step(&mut self) -> Result<StepInfo> {
        step(
            self.problem,
            &mut self.state,
            &self.config.variant,
            self.config.delta,
            &mut self.sampler,
            &mut self.rng,
        )
    }

    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn into_state(self) -> SolverState {
        self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;

    fn scalar(b: f64) -> Problem {
        Problem::new(DenseMatrix::from_rows(&[vec![1.0]]).unwrap(), vec![b]).unwrap()
    }

    #[test]
    fn skm_scalar_projection() {
        let p = scalar(0.0);
        let mut s = SolverState::new(&p, &Variant::Skm, &[2.0]).unwrap();
        let mut sampler = Sampler::new(1, 1).unwrap();
        let mut rng = solver_rng(0);
        skm_step(&p, &mut s, 1.0, &mut sampler, &mut rng).unwrap();
        assert_eq!(s.x, vec![0.0]);
        assert_eq!(s.k, 1);
        skm_step(&p, &mut s, 1.0, &mut sampler, &mut rng).unwrap();
        assert_eq!(s.x, vec![0.0]);
    }

    #[test]
    fn gskm_affine_combination() {
        let p = Problem::new(DenseMatrix::identity(2), vec![10.0, 10.0]).unwrap();
        for (xi, want) in [(0.5, 3.0), (-0.2, 1.6)] {
            // feasible point, so z_k = x_k = (2, 0)
            let mut s = SolverState::new(&p, &Variant::gskm(xi), &[2.0, 0.0]).unwrap();
            s.z_prev = Some(vec![4.0, 0.0]);
            let mut sampler = Sampler::new(2, 1).unwrap();
            gskm_step(&p, &mut s, 1.0, xi, &mut sampler, &mut solver_rng(1)).unwrap();
            assert!((s.x[0] - want).abs() < 1e-15);
            assert_eq!(s.z_prev, Some(vec![2.0, 0.0]));
        }
    }

    #[test]
    fn gskm_first_step_repeats() {
        let p = scalar(0.0);
        let mut s = SolverState::new(&p, &Variant::gskm(0.5), &[2.0]).unwrap();
        let mut sampler = Sampler::new(1, 1).unwrap();
        gskm_step(&p, &mut s, 1.0, 0.5, &mut sampler, &mut solver_rng(0)).unwrap();
        assert_eq!(s.x, vec![0.0]);
        assert_eq!(s.z_prev, Some(vec![0.0]));
    }

    #[test]
    fn paskm_hand_arithmetic() {
        let p = scalar(0.0);
        let v = Variant::Paskm {
            alpha: 0.5,
            omega: 0.5,
            gamma: 1.0,
        };
        let mut s = SolverState::new(&p, &v, &[2.0]).unwrap();
        let mut sampler = Sampler::new(1, 1).unwrap();
        paskm_step(&p, &mut s, 1.0, (0.5, 0.5, 1.0), &mut sampler, &mut solver_rng(0)).unwrap();
        assert_eq!(s.x, vec![0.0]);
        assert_eq!(s.v, Some(vec![0.0]));
        assert_eq!(s.y, Some(vec![0.0]));
    }

    #[test]
    fn paskm_alpha_one_tracks_v() {
        let p = Problem::new(
            DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![-1.0, 0.5], vec![0.3, -1.0]]).unwrap(),
            vec![0.0, -1.0, 0.5],
        )
        .unwrap();
        let params = (1.0, 0.4, 0.7);
        let v = Variant::Paskm {
            alpha: 1.0,
            omega: 0.4,
            gamma: 0.7,
        };
        let mut s = SolverState::new(&p, &v, &[3.0, 3.0]).unwrap();
        let mut sampler = Sampler::new(3, 2).unwrap();
        let mut rng = solver_rng(5);
        for _ in 0..20 {
            paskm_step(&p, &mut s, 1.0, params, &mut sampler, &mut rng).unwrap();
            assert_eq!(s.y, s.v);
        }
    }

    #[test]
    fn paskm_fixed_point() {
        let p = Problem::new(DenseMatrix::identity(2), vec![1.0, 1.0]).unwrap();
        let v = Variant::Paskm {
            alpha: 0.3,
            omega: 0.2,
            gamma: 0.5,
        };
        let mut s = SolverState::new(&p, &v, &[0.0, -1.0]).unwrap();
        let mut sampler = Sampler::new(2, 1).unwrap();
        let mut rng = solver_rng(2);
        for _ in 0..10 {
            paskm_step(&p, &mut s, 1.0, (0.3, 0.2, 0.5), &mut sampler, &mut rng).unwrap();
        }
        assert_eq!(s.x, vec![0.0, -1.0]);
        assert_eq!(s.v, s.y);
        assert_eq!(s.cesaro_sum, vec![0.0, -10.0]);
    }

    #[test]
    fn satisfied_sample_still_consumes_rng() {
        let p = Problem::new(DenseMatrix::identity(3), vec![1.0, 1.0, 1.0]).unwrap();
        let mut s = SolverState::new(&p, &Variant::Skm, &[0.0; 3]).unwrap();
        let mut sampler = Sampler::new(3, 1).unwrap();
        let mut rng = solver_rng(9);
        let before = rng.clone();
        let info = skm_step(&p, &mut s, 1.0, &mut sampler, &mut rng).unwrap();
        assert_eq!(info.chosen, None);
        assert_eq!(s.k, 1);
        assert_ne!(rng, before);
    }
}
