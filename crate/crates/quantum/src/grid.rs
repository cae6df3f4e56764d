//! Exhaustive angle-grid search used as an independent check on the see-saw.
//!
//! Bob's and Carol's directions run over a grid in the x-y plane; Alice's
//! directions are then optimal in closed form (each aligns with its field),
//! so the value at a grid point is `Σ_i |Σ_jk g_ijk T(·, B_j, C_k)|`. When
//! the tensor has no z components and is invariant under opposite z-rotations
//! of two parties (as for GHZ), the planar restriction loses nothing and the
//! first used direction of Bob and of Carol can be pinned to angle 0.

use nalgebra::{Matrix3, Rotation3, Vector3};
use rayon::prelude::*;

use tightbell::CoeffTensor;

use crate::bell::Dense;
use crate::correlation::CorrelationTensor;
use crate::error::{QuantumError, Result};
use crate::settings::MeasurementSettings;

/// Grid points beyond which the step is doubled.
const MAX_POINTS: u64 = 40_000_000;

#[derive(Debug, Clone)]
pub struct GridResult {
    pub value: f64,
    /// Step actually used after any coarsening.
    pub step_degrees: f64,
    pub gauge_fixed: bool,
    pub settings: MeasurementSettings,
}

fn rz(a: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), a).into_inner()
}

/// No z components, and invariant under `R_z(θ) ⊗ R_z(−θ)` on the pairs
/// (A, B) and (A, C).
pub fn phase_covariant(t: &CorrelationTensor) -> bool {
    let flat_z = (0..27).all(|n| {
        let (i, j, k) = (n / 9, (n / 3) % 3, n % 3);
        (i < 2 && j < 2 && k < 2) || t.data()[n].abs() < 1e-12
    });
    let close = |u: &CorrelationTensor| u.data().iter().zip(t.data()).all(|(a, b)| (a - b).abs() < 1e-12);
    let id = Matrix3::identity();
    flat_z
        && [0.7, 2.3].iter().all(|&th| {
            close(&t.rotated(&[rz(th), rz(-th), id])) && close(&t.rotated(&[rz(th), id, rz(-th)]))
        })
}

fn planar(angle: f64) -> Vector3<f64> {
    Vector3::new(angle.cos(), angle.sin(), 0.0)
}

pub fn grid_oracle(g: &CoeffTensor, t: &CorrelationTensor, step_degrees: f64) -> Result<GridResult> {
    if !(step_degrees > 0.0 && step_degrees <= 180.0) {
        return Err(QuantumError::InvalidArgument(format!("grid step {step_degrees} out of range")));
    }
    let d = Dense::new(g)?;
    let used: Vec<Vec<usize>> = (0..3)
        .map(|p| (0..d.counts[p]).filter(|&s| !d.unused(p, s)).collect())
        .collect();
    let gauge_fixed = phase_covariant(t);
    // (party, setting) pairs whose angle is searched.
    let free: Vec<(usize, usize)> = [1, 2]
        .iter()
        .flat_map(|&p| {
            let skip = usize::from(gauge_fixed);
            used[p].iter().skip(skip).map(move |&s| (p, s))
        })
        .collect();

    let mut n = (360.0 / step_degrees).round().max(1.0) as u64;
    while n.checked_pow(free.len() as u32).is_none_or(|c| c > MAX_POINTS) {
        n = n.div_ceil(2);
    }
    let step = 360.0 / n as f64;
    let n = n as usize;
    let angle = |m: usize| (m as f64 * step).to_radians();
    let units: Vec<Vector3<f64>> = (0..n).map(|m| planar(angle(m))).collect();
    let fields: Vec<Vector3<f64>> = (0..n * n)
        .map(|x| t.contract_except(0, &units[x / n], &units[x % n]))
        .collect();

    // Angle index of every B and C setting at grid point `code`.
    let decode = |mut code: usize| -> [Vec<usize>; 2] {
        let mut idx = [vec![0; d.counts[1]], vec![0; d.counts[2]]];
        for &(p, s) in free.iter().rev() {
            idx[p - 1][s] = code % n;
            code /= n;
        }
        idx
    };
    let eval = |idx: &[Vec<usize>; 2]| -> f64 {
        used[0]
            .iter()
            .map(|&i| {
                let mut v = Vector3::zeros();
                for &j in &used[1] {
                    for &k in &used[2] {
                        v += d.at(i, j, k) * fields[idx[0][j] * n + idx[1][k]];
                    }
                }
                v.norm()
            })
            .sum()
    };

    let total = n.pow(free.len() as u32);
    let chunk = total.div_ceil(n.min(total));
    let best = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut best = (f64::NEG_INFINITY, 0usize);
            for code in c * chunk..((c + 1) * chunk).min(total) {
                let v = eval(&decode(code));
                if v > best.0 {
                    best = (v, code);
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((f64::NEG_INFINITY, 0usize), |a, b| if b.0 > a.0 { b } else { a });

    let idx = decode(best.1);
    let mut parties = vec![Vec::new(); 3];
    for i in 0..d.counts[0] {
        let mut v = Vector3::zeros();
        for j in 0..d.counts[1] {
            for k in 0..d.counts[2] {
                v += d.at(i, j, k) * fields[idx[0][j] * n + idx[1][k]];
            }
        }
        parties[0].push(if v.norm() > 0.0 { v / v.norm() } else { Vector3::x() });
    }
    for p in 1..3 {
        parties[p] = idx[p - 1].iter().map(|&m| units[m]).collect();
    }
    Ok(GridResult {
        value: best.0,
        step_degrees: step,
        gauge_fixed,
        settings: MeasurementSettings::new(parties)?,
    })
}
