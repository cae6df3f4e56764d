//! Measurement directions and local coordinate frames.

use nalgebra::{Matrix3, Rotation3, Vector3};
use rand::Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Serialize, Serializer};

use tightbell::Scenario;

use crate::error::{QuantumError, Result};
use crate::tol;

/// Unit Bloch vectors, one list per party in setting order.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSettings {
    parties: Vec<Vec<Vector3<f64>>>,
}

fn as_arrays(v: &[Vector3<f64>]) -> Vec<[f64; 3]> {
    v.iter().map(|x| [x.x, x.y, x.z]).collect()
}

impl Serialize for MeasurementSettings {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nested: Vec<Vec<[f64; 3]>> = self.parties.iter().map(|p| as_arrays(p)).collect();
        nested.serialize(s)
    }
}

impl MeasurementSettings {
    pub fn new(parties: Vec<Vec<Vector3<f64>>>) -> Result<Self> {
        if parties.len() != 3 {
            return Err(QuantumError::InvalidSettings(format!("need 3 parties, got {}", parties.len())));
        }
        for (p, list) in parties.iter().enumerate() {
            if list.is_empty() {
                return Err(QuantumError::InvalidSettings(format!("party {p} has no settings")));
            }
            for (s, v) in list.iter().enumerate() {
                if (v.norm() - 1.0).abs() > tol::NORM {
                    return Err(QuantumError::InvalidSettings(format!(
                        "setting {s} of party {p} has norm {}",
                        v.norm()
                    )));
                }
            }
        }
        Ok(Self { parties })
    }

    pub fn random<R: Rng + ?Sized>(counts: &[usize], rng: &mut R) -> Self {
        Self {
            parties: counts
                .iter()
                .map(|&n| (0..n).map(|_| Vector3::from(UnitSphere.sample(rng))).collect())
                .collect(),
        }
    }

    pub fn counts(&self) -> Vec<usize> {
        self.parties.iter().map(Vec::len).collect()
    }

    pub fn party(&self, p: usize) -> &[Vector3<f64>] {
        &self.parties[p]
    }

    pub fn vector(&self, p: usize, s: usize) -> &Vector3<f64> {
        &self.parties[p][s]
    }

    pub(crate) fn set(&mut self, p: usize, s: usize, v: Vector3<f64>) {
        self.parties[p][s] = v;
    }

    pub fn check_scenario(&self, scenario: &Scenario) -> Result<()> {
        if scenario.settings() != self.counts().as_slice() {
            return Err(QuantumError::ShapeMismatch {
                expected: format!("settings for {scenario}"),
                found: format!("{:?} vectors per party", self.counts()),
            });
        }
        Ok(())
    }
}

/// One right-handed orthonormal triad per party, stored as the columns
/// `e_1, e_2, e_3` of a rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrames {
    triads: [Matrix3<f64>; 3],
}

impl Serialize for LocalFrames {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let nested: Vec<Vec<[f64; 3]>> = (0..3)
            .map(|p| (0..3).map(|i| self.e(p, i)).collect::<Vec<_>>())
            .map(|v| as_arrays(&v))
            .collect();
        nested.serialize(s)
    }
}

fn rz(a: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), a).into_inner()
}

fn ry(a: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Vector3::y_axis(), a).into_inner()
}

impl LocalFrames {
    pub fn new(triads: [Matrix3<f64>; 3]) -> Result<Self> {
        for (p, m) in triads.iter().enumerate() {
            let dev = (m.transpose() * m - Matrix3::identity()).abs().max();
            if dev > tol::FRAME {
                return Err(QuantumError::InvalidFrames(format!("frame of party {p} is not orthonormal")));
            }
            if (m.determinant() - 1.0).abs() > tol::FRAME {
                return Err(QuantumError::InvalidFrames(format!("frame of party {p} is not right-handed")));
            }
        }
        Ok(Self { triads })
    }

    pub fn standard() -> Self {
        Self {
            triads: [Matrix3::identity(); 3],
        }
    }

    /// Frames from `e_1` and `e_2` per party; `e_3 = e_1 × e_2`.
    pub fn from_axes(axes: [(Vector3<f64>, Vector3<f64>); 3]) -> Result<Self> {
        Self::new(axes.map(|(e1, e2)| Matrix3::from_columns(&[e1, e2, e1.cross(&e2)])))
    }

    /// The same frame for all parties.
    pub fn uniform(e1: Vector3<f64>, e2: Vector3<f64>) -> Result<Self> {
        Self::from_axes([(e1, e2); 3])
    }

    /// `R_z(φ) R_y(θ) R_z(ψ)` per party from `[φ, θ, ψ]` triples.
    pub fn from_euler(angles: &[f64]) -> Self {
        assert_eq!(angles.len(), 9);
        Self {
            triads: std::array::from_fn(|p| {
                let a = &angles[3 * p..3 * p + 3];
                rz(a[0]) * ry(a[1]) * rz(a[2])
            }),
        }
    }

    pub fn triad(&self, p: usize) -> &Matrix3<f64> {
        &self.triads[p]
    }

    /// Axis `e_{i+1}` of party `p`.
    pub fn e(&self, p: usize, i: usize) -> Vector3<f64> {
        self.triads[p].column(i).into_owned()
    }
}

/// `v1 = cos θ e_1 + sin θ e_2`, `v2 = cos θ e_1 − sin θ e_2`, so that
/// `v1 + v2 = 2 cos θ e_1` and `v1 − v2 = 2 sin θ e_2`.
pub fn settings_from_angle(angle: f64, triad: &Matrix3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let e1 = triad.column(0).into_owned();
    let e2 = triad.column(1).into_owned();
    let (s, c) = angle.sin_cos();
    (c * e1 + s * e2, c * e1 - s * e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_examples() {
        let id = Matrix3::identity();
        let (v1, v2) = settings_from_angle(0.0, &id);
        assert_eq!((v1, v2), (Vector3::x(), Vector3::x()));
        let (v1, v2) = settings_from_angle(std::f64::consts::FRAC_PI_2, &id);
        assert!((v1 - Vector3::y()).norm() < 1e-15 && (v2 + Vector3::y()).norm() < 1e-15);
        let (v1, v2) = settings_from_angle(std::f64::consts::FRAC_PI_4, &id);
        let r2 = 2f64.sqrt();
        assert!((v1 + v2 - r2 * Vector3::x()).norm() < 1e-15);
        assert!((v1 - v2 - r2 * Vector3::y()).norm() < 1e-15);
    }

    #[test]
    fn frame_validation() {
        assert!(LocalFrames::uniform(Vector3::z(), Vector3::x()).is_ok());
        assert!(LocalFrames::uniform(Vector3::z(), Vector3::z()).is_err());
        let mut m = Matrix3::identity();
        m[(2, 2)] = -1.0;
        assert!(LocalFrames::new([m, Matrix3::identity(), Matrix3::identity()]).is_err());
        let f = LocalFrames::from_euler(&[0.3, 1.2, -2.0, 0.0, 0.0, 0.0, 3.0, 0.1, 0.5]);
        assert!(LocalFrames::new(f.triads).is_ok());
    }

    #[test]
    fn settings_validation() {
        assert!(MeasurementSettings::new(vec![vec![Vector3::x()]; 3]).is_ok());
        assert!(MeasurementSettings::new(vec![vec![Vector3::x() * 1.1]; 3]).is_err());
        assert!(MeasurementSettings::new(vec![vec![Vector3::x()]; 2]).is_err());
    }
}
