//! Full valuation tables of sign functions and their multilinear inversion.

use crate::error::{BellError, Result};
use crate::scenario::{Assignment, Dyadic, Scenario};
use crate::tensor::CoeffTensor;

/// Exact value of a candidate sign function at every assignment.
///
/// Values are numerators over `2^denom_exp`, indexed by assignment mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    scenario: Scenario,
    denom_exp: u32,
    values: Vec<i64>,
}

impl SignTable {
    /// Tabulates an integer-valued function (typically ±1).
    pub fn from_fn(scenario: Scenario, f: impl Fn(&Assignment) -> i64) -> Self {
        let values = scenario.assignments().map(|a| f(&a)).collect();
        Self {
            scenario,
            denom_exp: 0,
            values,
        }
    }

    /// `S(a) = Σ g_ijk a_i b_j c_k` at every assignment.
    pub fn from_coefficients(g: &CoeffTensor) -> Self {
        let values = (0..g.scenario().assignment_count() as u32)
            .map(|bits| g.eval_numerator(bits))
            .collect();
        Self {
            scenario: g.scenario().clone(),
            denom_exp: g.denom_exp(),
            values,
        }
    }

    pub(crate) fn from_raw(scenario: Scenario, denom_exp: u32, values: Vec<i64>) -> Self {
        debug_assert_eq!(values.len(), scenario.assignment_count());
        Self {
            scenario,
            denom_exp,
            values,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    /// Raw numerators in mask order.
    pub fn numerators(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, a: &Assignment) -> Result<Dyadic> {
        a.check(&self.scenario)?;
        Ok(Dyadic::new(self.values[a.bits() as usize], self.denom_exp))
    }

    /// Every value is +1 or −1.
    pub fn is_admissible(&self) -> bool {
        let unit = 1i64 << self.denom_exp;
        self.values.iter().all(|v| v.abs() == unit)
    }

    /// `Σ_a S(a)²`, exactly.
    pub fn sum_of_squares(&self) -> Dyadic {
        Dyadic::new(
            self.values.iter().map(|v| v * v).sum(),
            2 * self.denom_exp,
        )
    }

    /// Value-wise equality regardless of the stored denominators.
    pub fn same_values(&self, other: &SignTable) -> bool {
        self.scenario == other.scenario
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(&x, &y)| Dyadic::new(x, self.denom_exp) == Dyadic::new(y, other.denom_exp))
    }
}

/// Inverts `S = Σ g a_i b_j c_k`: `g_ijk = 2^{-n} Σ_a S(a) a_i b_j c_k`.
///
/// Rejects tables with values outside ±1, and ±1 tables that are not of the
/// one-variable-per-party multilinear form (the inversion would not
/// reproduce them).
pub fn coefficients_from_sign(table: &SignTable) -> Result<CoeffTensor> {
    if let Some((bits, &v)) = table
        .values
        .iter()
        .enumerate()
        .find(|(_, v)| v.abs() != 1i64 << table.denom_exp)
    {
        return Err(BellError::NotAdmissible {
            assignment: bits as u32,
            value: Dyadic::new(v, table.denom_exp).to_string(),
        });
    }
    let scenario = table.scenario.clone();
    let n_vars = scenario.variable_count() as u32;
    let target = scenario.denom_exp();
    let offsets: Vec<usize> = (0..scenario.parties())
        .map(|p| scenario.variable_offset(p))
        .collect();

    let mut numerators = Vec::with_capacity(scenario.coefficient_count());
    for flat in 0..scenario.coefficient_count() {
        let index = scenario.unravel(flat);
        let mask: u32 = index
            .iter()
            .zip(&offsets)
            .map(|(&s, &o)| 1u32 << (o + s))
            .sum();
        let sum: i64 = table
            .values
            .iter()
            .enumerate()
            .map(|(bits, &v)| {
                if (bits as u32 & mask).count_ones() % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum();
        // g = sum / 2^(denom_exp + n_vars); numerator over 2^target.
        let coeff = Dyadic::new(sum, table.denom_exp + n_vars);
        let numerator = coeff.numerator_at(target).ok_or(BellError::NotMultilinear)?;
        numerators.push(numerator);
    }
    let g = CoeffTensor::new(scenario, numerators).map_err(|_| BellError::NotMultilinear)?;
    if !SignTable::from_coefficients(&g).same_values(table) {
        return Err(BellError::NotMultilinear);
    }
    Ok(g)
}
