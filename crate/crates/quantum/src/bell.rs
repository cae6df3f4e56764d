//! Quantum value of a full-correlation Bell expression.

use nalgebra::Vector3;

use tightbell::{CoeffTensor, Scenario};

use crate::correlation::CorrelationTensor;
use crate::error::{QuantumError, Result};
use crate::settings::MeasurementSettings;

/// Float coefficients of a three-party tensor with their shape.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub counts: [usize; 3],
    pub g: Vec<f64>,
}

impl Dense {
    pub fn new(g: &CoeffTensor) -> Result<Self> {
        let s = g.scenario().settings();
        if s.len() != 3 {
            return Err(QuantumError::ShapeMismatch {
                expected: "a three-party tensor".into(),
                found: g.scenario().to_string(),
            });
        }
        Ok(Self {
            counts: [s[0], s[1], s[2]],
            g: g.to_f64(),
        })
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.g[(i * self.counts[1] + j) * self.counts[2] + k]
    }

    /// Coefficient with `party`'s setting `s` and the others' `u`, `w` in
    /// party order.
    pub fn at_party(&self, party: usize, s: usize, u: usize, w: usize) -> f64 {
        match party {
            0 => self.at(s, u, w),
            1 => self.at(u, s, w),
            _ => self.at(u, w, s),
        }
    }

    /// True if no coefficient involves setting `s` of `party`.
    pub fn unused(&self, party: usize, s: usize) -> bool {
        let (a, b) = others(party);
        (0..self.counts[a]).all(|u| (0..self.counts[b]).all(|w| self.at_party(party, s, u, w) == 0.0))
    }

    pub fn value(&self, t: &CorrelationTensor, m: &MeasurementSettings) -> f64 {
        let mut total = 0.0;
        for i in 0..self.counts[0] {
            for j in 0..self.counts[1] {
                for k in 0..self.counts[2] {
                    let x = self.at(i, j, k);
                    if x != 0.0 {
                        total += x * t.contract(m.vector(0, i), m.vector(1, j), m.vector(2, k));
                    }
                }
            }
        }
        total
    }

    /// For each setting of `party`, the vector its direction is dotted with.
    pub fn party_fields(&self, t: &CorrelationTensor, m: &MeasurementSettings, party: usize) -> Vec<Vector3<f64>> {
        let (a, b) = others(party);
        let partial: Vec<Vec<Vector3<f64>>> = (0..self.counts[a])
            .map(|u| {
                (0..self.counts[b])
                    .map(|w| t.contract_except(party, m.vector(a, u), m.vector(b, w)))
                    .collect()
            })
            .collect();
        (0..self.counts[party])
            .map(|s| {
                let mut v = Vector3::zeros();
                for (u, row) in partial.iter().enumerate() {
                    for (w, x) in row.iter().enumerate() {
                        let c = self.at_party(party, s, u, w);
                        if c != 0.0 {
                            v += c * x;
                        }
                    }
                }
                v
            })
            .collect()
    }
}

pub(crate) fn others(party: usize) -> (usize, usize) {
    match party {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// `Σ g_ijk T ⊙ A_i ⊗ B_j ⊗ C_k`.
pub fn bell_value(g: &CoeffTensor, t: &CorrelationTensor, m: &MeasurementSettings) -> Result<f64> {
    m.check_scenario(g.scenario())?;
    Ok(Dense::new(g)?.value(t, m))
}

/// `A_0 = B_0 = C_0 = x̂`, `A_1 = B_1 = ŷ`, `C_1 = −ŷ`; any further settings
/// point along ẑ.
pub fn mabk_settings(scenario: &Scenario) -> Result<MeasurementSettings> {
    let s = scenario.settings();
    if s.len() != 3 || s.iter().any(|&n| n < 2) {
        return Err(QuantumError::ShapeMismatch {
            expected: "three parties with at least two settings".into(),
            found: scenario.to_string(),
        });
    }
    let first = [Vector3::x(), Vector3::x(), Vector3::x()];
    let second = [Vector3::y(), Vector3::y(), -Vector3::y()];
    MeasurementSettings::new(
        (0..3)
            .map(|p| {
                let mut v = vec![first[p], second[p]];
                v.resize(s[p], Vector3::z());
                v
            })
            .collect(),
    )
}
