//! Iterated half-differences ("deltas") of sign functions.
//!
//! `Δ_x = ½(S|_{x=+1} − S|_{x=−1})`, nested once per party. An order-`k`
//! delta is a multilinear form over the parties that were not differenced;
//! order-3 deltas of a three-party function are the coefficients themselves.

use std::fmt;

use crate::error::{BellError, Result};
use crate::scenario::{Dyadic, Scenario};
use crate::sign::SignTable;
use crate::tensor::CoeffTensor;

/// A setting-sign variable: one party's `setting`-th ±1 outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub party: usize,
    pub setting: usize,
}

impl Var {
    pub fn new(party: usize, setting: usize) -> Self {
        Self { party, setting }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = ["a", "b", "c"].get(self.party).copied().unwrap_or("x");
        write!(f, "{name}{}", self.setting)
    }
}

/// Multilinear form with exact coefficients over the non-differenced parties.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaPoly {
    differenced: Vec<Var>,
    remaining: Vec<usize>,
    settings: Vec<usize>,
    denom_exp: u32,
    numerators: Vec<i64>,
}

impl DeltaPoly {
    /// Builds a form directly from coefficients (row-major over `settings`).
    pub fn from_parts(
        differenced: Vec<Var>,
        remaining: Vec<usize>,
        settings: Vec<usize>,
        denom_exp: u32,
        numerators: Vec<i64>,
    ) -> Result<Self> {
        if remaining.len() != settings.len() {
            return Err(BellError::InvalidVariables(
                "one setting count per remaining party".into(),
            ));
        }
        let expected: usize = settings.iter().product();
        if numerators.len() != expected {
            return Err(BellError::ShapeMismatch {
                expected: format!("{expected} coefficients"),
                found: numerators.len().to_string(),
            });
        }
        Ok(Self {
            differenced,
            remaining,
            settings,
            denom_exp,
            numerators,
        })
    }

    pub fn order(&self) -> usize {
        self.differenced.len()
    }

    pub fn differenced(&self) -> &[Var] {
        &self.differenced
    }

    pub fn remaining_parties(&self) -> &[usize] {
        &self.remaining
    }

    pub fn remaining_settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(|&n| n == 0)
    }

    /// Number of sign variables the form depends on.
    pub fn variable_count(&self) -> usize {
        self.settings.iter().sum()
    }

    /// Numerator of the value at an assignment of the remaining variables.
    pub fn eval_numerator(&self, bits: u32) -> i64 {
        let sign = |k: usize| 1 - 2 * ((bits >> k) & 1) as i64;
        let mut total = 0;
        for (flat, &n) in self.numerators.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let mut rem = flat;
            let mut offset = self.variable_count();
            let mut prod = n;
            for &count in self.settings.iter().rev() {
                offset -= count;
                prod *= sign(offset + rem % count);
                rem /= count;
            }
            total += prod;
        }
        total
    }

    pub fn eval(&self, bits: u32) -> Dyadic {
        Dyadic::new(self.eval_numerator(bits), self.denom_exp)
    }

    /// Values over every assignment of the remaining variables.
    pub fn values(&self) -> impl Iterator<Item = Dyadic> + '_ {
        (0..1u32 << self.variable_count()).map(|bits| self.eval(bits))
    }

    /// Sum of squared coefficients.
    pub fn norm_sq(&self) -> Dyadic {
        Dyadic::new(
            self.numerators.iter().map(|n| n * n).sum(),
            2 * self.denom_exp,
        )
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["a", "b", "c"];
        let mut first = true;
        for (flat, &n) in self.numerators.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let mut rem = flat;
            let mut labels = Vec::new();
            for (&party, &count) in self.remaining.iter().zip(&self.settings).rev() {
                labels.push(format!("{}{}", names[party], rem % count));
                rem /= count;
            }
            labels.reverse();
            let c = Dyadic::new(n.abs(), self.denom_exp);
            let sign = if n < 0 { "-" } else { "+" };
            if first {
                if n < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for l in labels {
                write!(f, "·{l}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Iterated half-difference of `table` along `vars` (at most one per party).
///
/// Fails with [`BellError::NotMultilinear`] if the table is not of the
/// one-variable-per-party form, in which case the result would not be a
/// form over the remaining parties alone.
pub fn delta(table: &SignTable, vars: &[Var]) -> Result<DeltaPoly> {
    let scenario = table.scenario();
    if vars.is_empty() || vars.len() > scenario.parties() {
        return Err(BellError::InvalidVariables(format!(
            "expected 1..={} variables, got {}",
            scenario.parties(),
            vars.len()
        )));
    }
    for (i, v) in vars.iter().enumerate() {
        if v.party >= scenario.parties() || v.setting >= scenario.settings_of(v.party) {
            return Err(BellError::InvalidVariables(format!("{v} is not in {scenario}")));
        }
        if vars[..i].iter().any(|w| w.party == v.party) {
            return Err(BellError::InvalidVariables(format!(
                "two variables of party {} (sign functions carry no same-party products)",
                v.party
            )));
        }
    }

    let mut values = table.numerators().to_vec();
    let mut exp = table.denom_exp();
    for v in vars {
        let bit = 1usize << scenario.variable_index(v.party, v.setting);
        let mut next = vec![0; values.len()];
        for (bits, slot) in next.iter_mut().enumerate() {
            let base = bits & !bit;
            *slot = values[base] - values[base | bit];
        }
        values = next;
        exp += 1;
    }

    let differenced_parties: Vec<usize> = vars.iter().map(|v| v.party).collect();
    let remaining: Vec<usize> = (0..scenario.parties())
        .filter(|p| !differenced_parties.contains(p))
        .collect();
    let settings: Vec<usize> = remaining.iter().map(|&p| scenario.settings_of(p)).collect();

    // Bits of the remaining parties inside a full assignment mask.
    let rest_bits: Vec<usize> = remaining
        .iter()
        .flat_map(|&p| (0..scenario.settings_of(p)).map(move |s| (p, s)))
        .map(|(p, s)| scenario.variable_index(p, s))
        .collect();
    let spread = |local: u32| -> usize {
        rest_bits
            .iter()
            .enumerate()
            .filter(|(k, _)| (local >> k) & 1 == 1)
            .map(|(_, &b)| 1usize << b)
            .sum()
    };

    // The differenced function must not depend on the differenced parties'
    // other settings.
    let rest_mask: usize = spread(u32::MAX >> (32 - rest_bits.len().max(1)));
    let rest_mask = if rest_bits.is_empty() { 0 } else { rest_mask };
    for (bits, &v) in values.iter().enumerate() {
        if v != values[bits & rest_mask] {
            return Err(BellError::NotMultilinear);
        }
    }

    let m = rest_bits.len();
    let local_values: Vec<i64> = (0..1u32 << m).map(|local| values[spread(local)]).collect();
    let target = scenario.denom_exp();
    let coefficient_count: usize = settings.iter().product();
    let mut numerators = Vec::with_capacity(coefficient_count);
    for flat in 0..coefficient_count {
        let mut rem = flat;
        let mut offset = m;
        let mut mask = 0u32;
        for &count in settings.iter().rev() {
            offset -= count;
            mask |= 1 << (offset + rem % count);
            rem /= count;
        }
        let sum: i64 = local_values
            .iter()
            .enumerate()
            .map(|(local, &v)| {
                if (local as u32 & mask).count_ones() % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .sum();
        let coeff = Dyadic::new(sum, exp + m as u32);
        numerators.push(coeff.numerator_at(target).ok_or(BellError::NotMultilinear)?);
    }

    let poly = DeltaPoly {
        differenced: vars.to_vec(),
        remaining,
        settings,
        denom_exp: target,
        numerators,
    };
    for (local, &v) in local_values.iter().enumerate() {
        if poly.eval(local as u32) != Dyadic::new(v, exp) {
            return Err(BellError::NotMultilinear);
        }
    }
    Ok(poly)
}

/// `S = Σ_i x_i Δ_{x_i}` from the order-1 deltas of every setting of one party.
pub fn reconstruct_sign(deltas: &[DeltaPoly]) -> Result<SignTable> {
    let first = deltas
        .first()
        .ok_or_else(|| BellError::InvalidVariables("no deltas given".into()))?;
    if deltas.iter().any(|d| d.order() != 1) {
        return Err(BellError::InvalidVariables("only order-1 deltas can be combined".into()));
    }
    let party = first.differenced[0].party;
    let mut by_setting: Vec<Option<&DeltaPoly>> = vec![None; deltas.len()];
    for d in deltas {
        let v = d.differenced[0];
        if v.party != party {
            return Err(BellError::InvalidVariables("deltas of different parties".into()));
        }
        if d.remaining != first.remaining
            || d.settings != first.settings
            || d.denom_exp != first.denom_exp
        {
            return Err(BellError::ShapeMismatch {
                expected: format!("{:?} over {:?}", first.remaining, first.settings),
                found: format!("{:?} over {:?}", d.remaining, d.settings),
            });
        }
        match by_setting.get_mut(v.setting) {
            Some(slot @ None) => *slot = Some(d),
            _ => {
                return Err(BellError::InvalidVariables(format!(
                    "settings of {party} must be 0..{} exactly once",
                    deltas.len()
                )))
            }
        }
    }

    let mut full = first.settings.clone();
    full.insert(party, deltas.len());
    let scenario = Scenario::new(full)?;
    let offset = scenario.variable_offset(party);
    let width = deltas.len();
    let low_mask = (1u32 << offset) - 1;

    let values = scenario
        .assignments()
        .map(|a| {
            let bits = a.bits();
            let rest = (bits & low_mask) | ((bits >> (offset + width)) << offset);
            by_setting
                .iter()
                .enumerate()
                .map(|(i, d)| a.sign(offset + i) * d.expect("filled").eval_numerator(rest))
                .sum()
        })
        .collect();
    Ok(SignTable::from_raw(scenario, first.denom_exp, values))
}

impl CoeffTensor {
    /// Order-1 delta `Δ_{x}` for `x = (party, setting)`, read off as a slice.
    pub fn order1_delta(&self, party: usize, setting: usize) -> DeltaPoly {
        let scenario = self.scenario();
        let remaining: Vec<usize> = (0..scenario.parties()).filter(|&p| p != party).collect();
        let settings = scenario.without_party(party);
        let numerators = (0..self.numerators().len())
            .filter_map(|flat| {
                let idx = scenario.unravel(flat);
                (idx[party] == setting).then(|| self.numerators()[flat])
            })
            .collect();
        DeltaPoly {
            differenced: vec![Var::new(party, setting)],
            remaining,
            settings,
            denom_exp: self.denom_exp(),
            numerators,
        }
    }

    /// All order-1 deltas of `party`, one per setting.
    pub fn order1_deltas(&self, party: usize) -> Vec<DeltaPoly> {
        (0..self.scenario().settings_of(party))
            .map(|s| self.order1_delta(party, s))
            .collect()
    }
}
