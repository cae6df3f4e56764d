//! Full three-party Pauli correlation tensors.

use nalgebra::{Matrix3, Vector3};
use serde::{Serialize, Serializer};

use crate::error::{QuantumError, Result};
use crate::settings::LocalFrames;
use crate::tol;

/// `T_ijk = Tr ρ (σ_i ⊗ σ_j ⊗ σ_k)`, indices 0..3 for x, y, z, stored at `9i + 3j + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTensor {
    t: [f64; 27],
}

impl Serialize for CorrelationTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nested: Vec<Vec<Vec<f64>>> = (0..3)
            .map(|i| (0..3).map(|j| (0..3).map(|k| self.get(i, j, k)).collect()).collect())
            .collect();
        nested.serialize(s)
    }
}

impl CorrelationTensor {
    pub fn new(t: [f64; 27]) -> Result<Self> {
        if let Some((n, x)) = t.iter().enumerate().find(|(_, x)| !x.is_finite() || x.abs() > 1.0 + tol::TENSOR_BOUND) {
            return Err(QuantumError::InvalidTensor(format!(
                "entry ({}, {}, {}) = {x} outside [-1, 1]",
                n / 9 + 1,
                (n / 3) % 3 + 1,
                n % 3 + 1
            )));
        }
        Ok(Self { t })
    }

    pub fn zeros() -> Self {
        Self { t: [0.0; 27] }
    }

    pub fn from_fn(f: impl Fn(usize, usize, usize) -> f64) -> Result<Self> {
        Self::new(std::array::from_fn(|n| f(n / 9, (n / 3) % 3, n % 3)))
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t[9 * i + 3 * j + k]
    }

    pub fn data(&self) -> &[f64; 27] {
        &self.t
    }

    /// `T ⊙ a ⊗ b ⊗ c`.
    pub fn contract(&self, a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let ab = a[i] * b[j];
                for k in 0..3 {
                    s += self.t[9 * i + 3 * j + k] * ab * c[k];
                }
            }
        }
        s
    }

    /// Contracts the two parties other than `party` with `u` (lower index)
    /// and `w` (higher index), leaving a vector in `party`'s slot.
    pub fn contract_except(&self, party: usize, u: &Vector3<f64>, w: &Vector3<f64>) -> Vector3<f64> {
        let mut out = Vector3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let x = self.t[9 * i + 3 * j + k];
                    match party {
                        0 => out[i] += x * u[j] * w[k],
                        1 => out[j] += x * u[i] * w[k],
                        _ => out[k] += x * u[i] * w[j],
                    }
                }
            }
        }
        out
    }

    /// `T'_ijk = Σ R_A[i,i'] R_B[j,j'] R_C[k,k'] T_i'j'k'`.
    pub fn rotated(&self, r: &[Matrix3<f64>; 3]) -> Self {
        let mut s1 = [0.0; 27];
        for i in 0..3 {
            for n in 0..9 {
                s1[9 * i + n] = (0..3).map(|a| r[0][(i, a)] * self.t[9 * a + n]).sum();
            }
        }
        let mut s2 = [0.0; 27];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s2[9 * i + 3 * j + k] = (0..3).map(|b| r[1][(j, b)] * s1[9 * i + 3 * b + k]).sum();
                }
            }
        }
        let mut s3 = [0.0; 27];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    s3[9 * i + 3 * j + k] = (0..3).map(|c| r[2][(k, c)] * s2[9 * i + 3 * j + c]).sum();
                }
            }
        }
        Self { t: s3 }
    }

    /// Components `T ⊙ e_i^A ⊗ e_j^B ⊗ e_k^C` in the given frames.
    pub fn in_frames(&self, frames: &LocalFrames) -> Self {
        self.rotated(&std::array::from_fn(|p| frames.triad(p).transpose()))
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.t.iter().map(|x| x * x).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_is_enforced() {
        let mut t = [0.0; 27];
        t[4] = 1.0 + 1e-10;
        assert!(CorrelationTensor::new(t).is_ok());
        t[4] = 1.01;
        assert!(CorrelationTensor::new(t).is_err());
        t[4] = f64::NAN;
        assert!(CorrelationTensor::new(t).is_err());
    }

    #[test]
    fn contraction_helpers_agree() {
        let t = CorrelationTensor::from_fn(|i, j, k| ((i * 7 + j * 3 + k) % 5) as f64 / 5.0 - 0.4).unwrap();
        let a = Vector3::new(0.2, -0.3, 0.9);
        let b = Vector3::new(-0.5, 0.1, 0.4);
        let c = Vector3::new(0.7, 0.7, -0.1);
        let full = t.contract(&a, &b, &c);
        assert!((t.contract_except(0, &b, &c).dot(&a) - full).abs() < 1e-14);
        assert!((t.contract_except(1, &a, &c).dot(&b) - full).abs() < 1e-14);
        assert!((t.contract_except(2, &a, &b).dot(&c) - full).abs() < 1e-14);
    }
}
