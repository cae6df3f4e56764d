//! Angle parametrizations of the three-setting inequalities and the
//! resulting sufficient conditions on the correlation tensor.

use argmin::core::{CostFunction, Executor, State};
use argmin::solver::neldermead::NelderMead;
use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::CorrelationTensor;
use crate::error::{QuantumError, Result};
use crate::settings::{settings_from_angle, LocalFrames, MeasurementSettings};
use crate::tol;

/// Settings of the nine-setting inequality built from frames and angles:
/// `X_0` given, `(X_1, X_2)` from the party's angle.
#[allow(clippy::too_many_arguments)]
pub fn fivevector_settings(
    frames: &LocalFrames,
    a0: Vector3<f64>,
    b0: Vector3<f64>,
    c0: Vector3<f64>,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<MeasurementSettings> {
    let first = [a0, b0, c0];
    let angles = [alpha, beta, gamma];
    MeasurementSettings::new(
        (0..3)
            .map(|p| {
                let (v1, v2) = settings_from_angle(angles[p], frames.triad(p));
                vec![first[p], v1, v2]
            })
            .collect(),
    )
}

/// `(T_A12, T_2B1, T_12C, T_111, T_222) · (cβ sγ, sα cγ, cα sβ, cα cβ cγ, sα sβ sγ)`.
#[allow(clippy::too_many_arguments)]
pub fn fivevector_lhs(
    t: &CorrelationTensor,
    frames: &LocalFrames,
    a0: &Vector3<f64>,
    b0: &Vector3<f64>,
    c0: &Vector3<f64>,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> f64 {
    let e = |p: usize, i: usize| frames.e(p, i);
    let components = [
        t.contract(a0, &e(1, 0), &e(2, 1)),
        t.contract(&e(0, 1), b0, &e(2, 0)),
        t.contract(&e(0, 0), &e(1, 1), c0),
        t.contract(&e(0, 0), &e(1, 0), &e(2, 0)),
        t.contract(&e(0, 1), &e(1, 1), &e(2, 1)),
    ];
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    let weights = [cb * sg, sa * cg, ca * sb, ca * cb * cg, sa * sb * sg];
    components.iter().zip(weights).map(|(x, w)| x * w).sum()
}

/// Settings of the two-Δ_XII inequality: `(A_0, A_1)` from α with a spare
/// third direction `e_3`, `B_0`, `C_0` given and `(X_1, X_2)` from β, γ.
pub fn ineq3_settings(
    frames: &LocalFrames,
    b0: Vector3<f64>,
    c0: Vector3<f64>,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<MeasurementSettings> {
    let (a1, a2) = settings_from_angle(alpha, frames.triad(0));
    let (b1, b2) = settings_from_angle(beta, frames.triad(1));
    let (c1, c2) = settings_from_angle(gamma, frames.triad(2));
    MeasurementSettings::new(vec![vec![a1, a2, frames.e(0, 2)], vec![b0, b1, b2], vec![c0, c1, c2]])
}

/// `T ⊙ (cα e_1⊗B_0⊗C_0 + sα e_2⊗(cβcγ e_1e_1 + cβsγ e_1e_2 + sβcγ e_2e_1 − sβsγ e_2e_2))`.
pub fn ineq3_lhs(
    t: &CorrelationTensor,
    frames: &LocalFrames,
    b0: &Vector3<f64>,
    c0: &Vector3<f64>,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> f64 {
    let e = |p: usize, i: usize| frames.e(p, i);
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    let (sg, cg) = gamma.sin_cos();
    let a2 = e(0, 1);
    let tail = cb * cg * t.contract(&a2, &e(1, 0), &e(2, 0)) + cb * sg * t.contract(&a2, &e(1, 0), &e(2, 1))
        + sb * cg * t.contract(&a2, &e(1, 1), &e(2, 0))
        - sb * sg * t.contract(&a2, &e(1, 1), &e(2, 1));
    ca * t.contract(&e(0, 0), b0, c0) + sa * tail
}

/// `T_111² + T_222² + Σ_i (T_i12² + T_2i1² + T_12i²)` in the frames' components.
pub fn condition_three_setting(t: &CorrelationTensor, frames: &LocalFrames) -> f64 {
    let f = t.in_frames(frames);
    let sq = |i, j, k| {
        let x: f64 = f.get(i, j, k);
        x * x
    };
    sq(0, 0, 0) + sq(1, 1, 1) + (0..3).map(|i| sq(i, 0, 1) + sq(1, i, 0) + sq(0, 1, i)).sum::<f64>()
}

fn ineq3_tail(f: &CorrelationTensor) -> f64 {
    (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| f.get(1, i, j).powi(2)).sum()
}

/// `Σ_k T_1kC² + Σ_{i,j≤2} T_2ij²` at a given `C_0`.
pub fn condition_ineq3_at(t: &CorrelationTensor, frames: &LocalFrames, c0: &Vector3<f64>) -> f64 {
    let f = t.in_frames(frames);
    let e1 = frames.e(0, 0);
    let head: f64 = (0..3).map(|k| t.contract(&e1, &frames.e(1, k), c0).powi(2)).sum();
    head + ineq3_tail(&f)
}

/// [`condition_ineq3_at`] maximized over `C_0`: the first term becomes the
/// largest squared singular value of `M_jk = T_1jk`.
pub fn condition_ineq3(t: &CorrelationTensor, frames: &LocalFrames) -> f64 {
    let f = t.in_frames(frames);
    let m = Matrix3::from_fn(|j, k| f.get(0, j, k));
    let head = (m * m.transpose()).symmetric_eigenvalues().max().max(0.0);
    head + ineq3_tail(&f)
}

/// Which frame-dependent condition to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Condition {
    ThreeSetting,
    Ineq3,
}

impl Condition {
    pub fn eval(self, t: &CorrelationTensor, frames: &LocalFrames) -> f64 {
        match self {
            Self::ThreeSetting => condition_three_setting(t, frames),
            Self::Ineq3 => condition_ineq3(t, frames),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameOptimum {
    pub value: f64,
    pub frames: LocalFrames,
    /// Euler angles `[φ, θ, ψ]` per party.
    pub angles: Vec<f64>,
    pub best_restart: usize,
}

struct NegatedCondition<'a> {
    t: &'a CorrelationTensor,
    which: Condition,
}

impl CostFunction for NegatedCondition<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        Ok(-self.which.eval(self.t, &LocalFrames::from_euler(p)))
    }
}

fn nelder_mead(t: &CorrelationTensor, which: Condition, start: Vec<f64>, spread: f64) -> (Vec<f64>, f64) {
    let mut simplex = vec![start.clone()];
    for k in 0..start.len() {
        let mut p = start.clone();
        p[k] += spread;
        simplex.push(p);
    }
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(tol::FRAME_OPT_SD)
        .expect("positive tolerance");
    let res = Executor::new(NegatedCondition { t, which }, solver)
        .configure(|s| s.max_iters(5000))
        .run()
        .expect("objective is total");
    let state = res.state();
    let best = state.get_best_param().cloned().unwrap_or(start);
    (best, -state.get_best_cost())
}

/// Nelder–Mead over the nine Euler angles from `restarts` starts (the first
/// at the standard frames, the rest random), each followed by a polishing
/// pass from a smaller simplex.
pub fn condition_max(t: &CorrelationTensor, which: Condition, restarts: usize, seed: u64) -> Result<FrameOptimum> {
    if restarts == 0 {
        return Err(QuantumError::InvalidArgument("at least one restart is needed".into()));
    }
    let runs: Vec<(Vec<f64>, f64)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start: Vec<f64> = if r == 0 {
                vec![0.0; 9]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(r as u64);
                (0..9).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect()
            };
            let (p, _) = nelder_mead(t, which, start, 0.5);
            let (p, _) = nelder_mead(t, which, p, 0.05);
            let v = which.eval(t, &LocalFrames::from_euler(&p));
            (p, v)
        })
        .collect();
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.1 > runs[best].1 {
            best = r;
        }
    }
    let (angles, value) = runs[best].clone();
    Ok(FrameOptimum {
        value,
        frames: LocalFrames::from_euler(&angles),
        angles,
        best_restart: best,
    })
}

pub fn condition_three_setting_max(t: &CorrelationTensor, restarts: usize, seed: u64) -> Result<FrameOptimum> {
    condition_max(t, Condition::ThreeSetting, restarts, seed)
}

pub fn condition_ineq3_max(t: &CorrelationTensor, restarts: usize, seed: u64) -> Result<FrameOptimum> {
    condition_max(t, Condition::Ineq3, restarts, seed)
}

/// Grid search over Euler angles: a sweep with one frame shared by all
/// parties picks the start, then each party's angles in turn sweep the grid
/// with the other frames held, until a full round brings no gain. Gives a
/// lower bound on the maximum.
pub fn frame_grid_search(t: &CorrelationTensor, which: Condition, step_degrees: f64) -> Result<FrameOptimum> {
    if !(step_degrees > 0.0 && step_degrees <= 90.0) {
        return Err(QuantumError::InvalidArgument(format!("grid step {step_degrees} out of range")));
    }
    let n_az = (360.0 / step_degrees).round() as usize;
    let n_pol = (180.0 / step_degrees).round() as usize + 1;
    let rad = |m: usize, n: usize, span: f64| m as f64 * span / n as f64;
    let pi = std::f64::consts::PI;
    let total = n_az * n_pol * n_az;
    let scan = |angles: &[f64], parties: &[usize]| {
        (0..total)
            .into_par_iter()
            .map(|code| {
                let mut a = angles.to_vec();
                for &p in parties {
                    a[3 * p] = rad(code / (n_pol * n_az), n_az, 2.0 * pi);
                    a[3 * p + 1] = rad((code / n_az) % n_pol, n_pol - 1, pi);
                    a[3 * p + 2] = rad(code % n_az, n_az, 2.0 * pi);
                }
                (which.eval(t, &LocalFrames::from_euler(&a)), code, a)
            })
            .reduce(
                || (f64::NEG_INFINITY, usize::MAX, Vec::new()),
                |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x },
            )
    };
    let (mut value, _, mut angles) = scan(&[0.0; 9], &[0, 1, 2]);
    for _ in 0..20 {
        let before = value;
        for p in 0..3 {
            let best = scan(&angles, &[p]);
            if best.0 > value {
                value = best.0;
                angles = best.2;
            }
        }
        if value <= before {
            break;
        }
    }
    Ok(FrameOptimum {
        value,
        frames: LocalFrames::from_euler(&angles),
        angles,
        best_restart: 0,
    })
}
