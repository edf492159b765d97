//! Numerical feasibility solver: alternating spectral rounding over exact
//! projections, with a Stiefel gradient fallback on stalls.
//!
//! State is kept as orthonormal frames `V_i` (so `P_i = V_i V_i*` is a
//! genuine rank-`r_i` projection at every step) and only the sum defect
//! `‖Σ P_i − λI‖` is monitored. The rounding step replaces `P_i` by the
//! spectral projection onto the `r_i` largest eigenvalues of the Hermitian
//! residual `λI − Σ_{j≠i} P_j`; the gradient step descends
//! `‖Σ V_i V_i* − λI‖_F²` with QR re-orthonormalization.

use crate::linalg;
use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) struct SolveState {
    pub frames: Vec<DMatrix<Complex64>>,
    pub dim: usize,
    pub lambda: f64,
    pub iterations: u64,
}

impl SolveState {
    pub fn projections(&self) -> Vec<DMatrix<Complex64>> {
        self.frames
            .iter()
            .map(|v| {
                if v.ncols() == 0 {
                    DMatrix::zeros(self.dim, self.dim)
                } else {
                    v * v.adjoint()
                }
            })
            .collect()
    }

    fn sum(&self) -> DMatrix<Complex64> {
        let mut s = DMatrix::zeros(self.dim, self.dim);
        for p in self.projections() {
            s += p;
        }
        s
    }

    pub fn residual_matrix(&self) -> DMatrix<Complex64> {
        self.sum() - linalg::identity(self.dim) * Complex64::new(self.lambda, 0.0)
    }

    pub fn sum_defect(&self) -> f64 {
        linalg::hermitian_norm(&self.residual_matrix())
    }
}

/// Stall window: phases give up after this many sweeps without meaningful
/// improvement.
const STALL_WINDOW: u64 = 40;
const STALL_IMPROVEMENT: f64 = 1e-13;

fn rounding_phase(state: &mut SolveState, ranks: &[usize], tol: f64, max_iter: u64) {
    let n = ranks.len();
    let lambda_i = linalg::identity(state.dim) * Complex64::new(state.lambda, 0.0);
    let mut best = f64::INFINITY;
    let mut since_best = 0u64;
    for _ in 0..max_iter {
        let mut projections = state.projections();
        for i in 0..n {
            if ranks[i] == 0 {
                continue;
            }
            let mut others = lambda_i.clone();
            for (j, p) in projections.iter().enumerate() {
                if j != i {
                    others -= p;
                }
            }
            let (_, vectors) = linalg::hermitian_eigen_sorted(&others);
            let frame = vectors.columns(0, ranks[i]).into_owned();
            projections[i] = &frame * frame.adjoint();
            state.frames[i] = frame;
        }
        state.iterations += 1;
        let defect = state.sum_defect();
        if defect <= tol {
            return;
        }
        if defect < best - STALL_IMPROVEMENT {
            best = defect;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW {
                return;
            }
        }
    }
}

fn frobenius_sq(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

fn retract(frame: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    if frame.ncols() == 0 {
        return frame.clone();
    }
    frame.clone().qr().q()
}

fn gradient_phase(state: &mut SolveState, tol: f64, max_iter: u64) {
    let mut eta = 0.05;
    let mut residual = state.residual_matrix();
    let mut value = frobenius_sq(&residual);
    let mut best = f64::INFINITY;
    let mut since_best = 0u64;
    for _ in 0..max_iter {
        if linalg::hermitian_norm(&residual) <= tol {
            return;
        }
        let grads: Vec<DMatrix<Complex64>> = state.frames.iter().map(|v| &residual * v).collect();
        let grad_norm_sq: f64 = grads.iter().map(frobenius_sq).sum();
        if grad_norm_sq < 1e-30 {
            return;
        }
        let mut accepted = false;
        for _ in 0..30 {
            let candidate: Vec<DMatrix<Complex64>> = state
                .frames
                .iter()
                .zip(&grads)
                .map(|(v, g)| retract(&(v - g * Complex64::new(eta, 0.0))))
                .collect();
            let trial = SolveState {
                frames: candidate,
                dim: state.dim,
                lambda: state.lambda,
                iterations: 0,
            };
            let trial_residual = trial.residual_matrix();
            let trial_value = frobenius_sq(&trial_residual);
            if trial_value < value {
                state.frames = trial.frames;
                residual = trial_residual;
                value = trial_value;
                eta *= 1.5;
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        state.iterations += 1;
        if !accepted {
            return;
        }
        if value < best - STALL_IMPROVEMENT {
            best = value;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= STALL_WINDOW {
                return;
            }
        }
    }
}

/// One full attempt from a fresh random start: rounding, then a gradient
/// rescue on stall, then rounding again to restore exact projections and
/// polish. Returns the final state and its sum defect.
pub(crate) fn solve_attempt(
    n: usize,
    dim: usize,
    lambda: f64,
    ranks: &[usize],
    seed: u64,
    tol: f64,
    max_iter: u64,
) -> (SolveState, f64) {
    let mut rng = linalg::seeded_rng(seed, &[dim as u64, n as u64]);
    let frames: Vec<DMatrix<Complex64>> = ranks
        .iter()
        .map(|&r| {
            if r == 0 {
                DMatrix::zeros(dim, 0)
            } else {
                linalg::random_frame(dim, r, &mut rng)
            }
        })
        .collect();
    let mut state = SolveState {
        frames,
        dim,
        lambda,
        iterations: 0,
    };
    rounding_phase(&mut state, ranks, tol, max_iter);
    if state.sum_defect() > tol {
        gradient_phase(&mut state, tol, max_iter);
        rounding_phase(&mut state, ranks, tol, max_iter);
    }
    let defect = state.sum_defect();
    (state, defect)
}
