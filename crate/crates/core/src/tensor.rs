//! Exact coefficient tensors `g` of full-correlation Bell expressions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BellError, Result};
use crate::scenario::{Assignment, Dyadic, Scenario};

/// Coefficients `g` stored as integer numerators over `2^denom_exp`.
///
/// Indexed by one setting per party, row-major with the first party most
/// significant. Non-admissible tensors are ordinary values; the checks
/// below report on them without failing construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCoeffTensor", into = "RawCoeffTensor")]
pub struct CoeffTensor {
    scenario: Scenario,
    denom_exp: u32,
    numerators: Vec<i64>,
}

/// Wire form: `{"scenario": [3,3,3], "denom_exp": 2, "numerators": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawCoeffTensor {
    pub scenario: Vec<usize>,
    pub denom_exp: u32,
    pub numerators: Vec<i64>,
}

impl TryFrom<RawCoeffTensor> for CoeffTensor {
    type Error = BellError;

    fn try_from(raw: RawCoeffTensor) -> Result<Self> {
        let scenario = Scenario::new(raw.scenario)?;
        if raw.denom_exp != scenario.denom_exp() {
            return Err(BellError::DenominatorMismatch {
                expected: scenario.denom_exp(),
                found: raw.denom_exp,
            });
        }
        CoeffTensor::new(scenario, raw.numerators)
    }
}

impl From<CoeffTensor> for RawCoeffTensor {
    fn from(g: CoeffTensor) -> Self {
        RawCoeffTensor {
            scenario: g.scenario.settings().to_vec(),
            denom_exp: g.denom_exp,
            numerators: g.numerators,
        }
    }
}

/// Result of the `|Σg| = Σg² = 1` test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormConditions {
    pub sum_abs: Dyadic,
    pub sum_sq: Dyadic,
    pub pass: bool,
}

impl CoeffTensor {
    pub fn new(scenario: Scenario, numerators: Vec<i64>) -> Result<Self> {
        if numerators.len() != scenario.coefficient_count() {
            return Err(BellError::ShapeMismatch {
                expected: format!("{} numerators for {scenario}", scenario.coefficient_count()),
                found: numerators.len().to_string(),
            });
        }
        let denom_exp = scenario.denom_exp();
        let bound = 1i64 << denom_exp;
        if let Some((index, &value)) = numerators
            .iter()
            .enumerate()
            .find(|(_, n)| n.abs() > bound)
        {
            return Err(BellError::NumeratorOutOfRange {
                index,
                value,
                denom_exp,
            });
        }
        Ok(Self {
            scenario,
            denom_exp,
            numerators,
        })
    }

    pub fn zeros(scenario: Scenario) -> Self {
        let n = scenario.coefficient_count();
        Self {
            denom_exp: scenario.denom_exp(),
            scenario,
            numerators: vec![0; n],
        }
    }

    /// Builds a tensor from `(index, numerator)` pairs; repeated indices add up.
    pub fn from_terms(scenario: Scenario, terms: &[(&[usize], i64)]) -> Result<Self> {
        let mut numerators = vec![0; scenario.coefficient_count()];
        for (index, value) in terms {
            if index.len() != scenario.parties()
                || index
                    .iter()
                    .zip(scenario.settings())
                    .any(|(&i, &n)| i >= n)
            {
                return Err(BellError::ShapeMismatch {
                    expected: scenario.to_string(),
                    found: format!("index {index:?}"),
                });
            }
            numerators[scenario.ravel(index)] += value;
        }
        Self::new(scenario, numerators)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn numerator(&self, index: &[usize]) -> i64 {
        self.numerators[self.scenario.ravel(index)]
    }

    pub fn coefficient(&self, index: &[usize]) -> Dyadic {
        Dyadic::new(self.numerator(index), self.denom_exp)
    }

    pub fn is_zero(&self) -> bool {
        self.numerators.iter().all(|&n| n == 0)
    }

    /// Coefficients as floats, flat row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        let d = (1u64 << self.denom_exp) as f64;
        self.numerators.iter().map(|&n| n as f64 / d).collect()
    }

    pub(crate) fn from_parts_unchecked(scenario: Scenario, numerators: Vec<i64>) -> Self {
        Self {
            denom_exp: scenario.denom_exp(),
            scenario,
            numerators,
        }
    }

    /// Numerator of `S(a) = Σ g_ijk a_i b_j c_k` over `2^denom_exp`.
    pub(crate) fn eval_numerator(&self, bits: u32) -> i64 {
        let settings = self.scenario.settings();
        let mut signs = Vec::with_capacity(settings.len());
        let mut offset = 0;
        for &n in settings {
            let s: Vec<i64> = (0..n)
                .map(|i| 1 - 2 * ((bits >> (offset + i)) & 1) as i64)
                .collect();
            signs.push(s);
            offset += n;
        }
        match signs.as_slice() {
            [a, b] => {
                let mut total = 0;
                for (i, &ai) in a.iter().enumerate() {
                    let row = &self.numerators[i * b.len()..(i + 1) * b.len()];
                    let inner: i64 = row.iter().zip(b).map(|(g, bj)| g * bj).sum();
                    total += ai * inner;
                }
                total
            }
            [a, b, c] => {
                let mut total = 0;
                let slab = b.len() * c.len();
                for (i, &ai) in a.iter().enumerate() {
                    let mut mid = 0;
                    for (j, &bj) in b.iter().enumerate() {
                        let row = &self.numerators[i * slab + j * c.len()..][..c.len()];
                        let inner: i64 = row.iter().zip(c).map(|(g, ck)| g * ck).sum();
                        mid += bj * inner;
                    }
                    total += ai * mid;
                }
                total
            }
            _ => unreachable!("scenarios have two or three parties"),
        }
    }

    /// Exact value of the sign function at `a`.
    pub fn eval_sign(&self, a: &Assignment) -> Result<Dyadic> {
        a.check(&self.scenario)?;
        Ok(Dyadic::new(self.eval_numerator(a.bits()), self.denom_exp))
    }

    /// True iff `S(a) = ±1` for every assignment.
    pub fn is_admissible(&self) -> bool {
        self.first_inadmissible().is_none()
    }

    /// First assignment (in mask order) where `S` leaves `{±1}`.
    pub fn first_inadmissible(&self) -> Option<u32> {
        let unit = 1i64 << self.denom_exp;
        (0..self.scenario.assignment_count() as u32)
            .find(|&bits| self.eval_numerator(bits).abs() != unit)
    }

    pub fn sum(&self) -> Dyadic {
        Dyadic::new(self.numerators.iter().sum(), self.denom_exp)
    }

    pub fn sum_sq(&self) -> Dyadic {
        Dyadic::new(
            self.numerators.iter().map(|n| n * n).sum(),
            2 * self.denom_exp,
        )
    }

    /// `|Σ g| = 1` and `Σ g² = 1`, exactly.
    pub fn norm_conditions(&self) -> NormConditions {
        let sum_abs = self.sum().abs();
        let sum_sq = self.sum_sq();
        NormConditions {
            sum_abs,
            sum_sq,
            pass: sum_abs == Dyadic::ONE && sum_sq == Dyadic::ONE,
        }
    }

    /// Order-1 delta of the first party's setting `i`, evaluated at the
    /// remaining parties' assignment (numerator over `2^denom_exp`).
    fn first_party_delta(&self, i: usize, rest_bits: u32) -> i64 {
        let settings = self.scenario.settings();
        let slab = self.scenario.coefficient_count() / settings[0];
        let slice = &self.numerators[i * slab..(i + 1) * slab];
        let sign = |k: usize| 1 - 2 * ((rest_bits >> k) & 1) as i64;
        match settings.len() {
            2 => slice.iter().enumerate().map(|(j, g)| g * sign(j)).sum(),
            3 => {
                let nc = settings[2];
                slice
                    .iter()
                    .enumerate()
                    .map(|(jk, g)| g * sign(jk / nc) * sign(settings[1] + jk % nc))
                    .sum()
            }
            _ => unreachable!(),
        }
    }

    /// At every assignment of the non-first parties, exactly one order-1
    /// delta `Δ_{a_i}` is ±1 and the others vanish.
    ///
    /// Equivalent to [`is_admissible`](Self::is_admissible): `S = Σ a_i Δ_{a_i}`
    /// is ±1 for all `a` exactly when one `Δ_{a_i}` is ±1 and the rest are 0.
    pub fn pointwise_delta_structure(&self) -> bool {
        let unit = 1i64 << self.denom_exp;
        let rest_vars: usize = self.scenario.settings()[1..].iter().sum();
        (0..1u32 << rest_vars).all(|rest| {
            let mut units = 0;
            for i in 0..self.scenario.settings()[0] {
                match self.first_party_delta(i, rest).abs() {
                    0 => {}
                    v if v == unit => units += 1,
                    _ => return false,
                }
            }
            units == 1
        })
    }

    /// Largest and smallest value of `S` over all assignments.
    pub fn sign_range(&self) -> (Dyadic, Dyadic) {
        let (hi, lo) = (0..self.scenario.assignment_count() as u32)
            .map(|bits| self.eval_numerator(bits))
            .fold((i64::MIN, i64::MAX), |(hi, lo), v| (hi.max(v), lo.min(v)));
        (Dyadic::new(hi, self.denom_exp), Dyadic::new(lo, self.denom_exp))
    }

    pub fn negated(&self) -> Self {
        Self {
            scenario: self.scenario.clone(),
            denom_exp: self.denom_exp,
            numerators: self.numerators.iter().map(|n| -n).collect(),
        }
    }

    /// Non-zero terms as `(index, numerator)` in row-major order.
    pub fn terms(&self) -> Vec<(Vec<usize>, i64)> {
        self.numerators
            .iter()
            .enumerate()
            .filter(|(_, &n)| n != 0)
            .map(|(flat, &n)| (self.scenario.unravel(flat), n))
            .collect()
    }
}

impl fmt::Display for CoeffTensor {
    /// Renders the Bell expression, e.g. `1/2 |E00 + E01 + E10 - E11| <= 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0 <= 1");
        }
        let common = terms
            .iter()
            .map(|(_, n)| n.unsigned_abs().trailing_zeros())
            .min()
            .unwrap_or(0)
            .min(self.denom_exp);
        let scale = 1i64 << common;
        let outer = Dyadic::new(scale, self.denom_exp);
        if outer != Dyadic::ONE {
            write!(f, "{outer} ")?;
        }
        f.write_str("|")?;
        for (pos, (index, n)) in terms.iter().enumerate() {
            let m = n / scale;
            let label: String = index.iter().map(|i| i.to_string()).collect();
            let sign = if m < 0 { "-" } else { "+" };
            if pos == 0 {
                if m < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.abs() != 1 {
                write!(f, "{}", m.abs())?;
            }
            write!(f, "E{label}")?;
        }
        f.write_str("| <= 1")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Scenario {
        Scenario::three_by_three_by_three()
    }

    #[test]
    fn eval_sign_direct_substitution() {
        // ½(E000 + E001 + E100 − E101) at the all-plus assignment.
        let g = CoeffTensor::from_terms(
            s3(),
            &[(&[0, 0, 0], 2), (&[0, 0, 1], 2), (&[1, 0, 0], 2), (&[1, 0, 1], -2)],
        )
        .unwrap();
        assert_eq!(g.eval_sign(&Assignment::all_plus(&s3())).unwrap(), Dyadic::ONE);
    }

    #[test]
    fn eval_sign_single_term_is_product() {
        let g = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 4)]).unwrap();
        for a in s3().assignments() {
            let expected = a.sign(0) * a.sign(3) * a.sign(6);
            assert_eq!(g.eval_sign(&a).unwrap(), Dyadic::from_int(expected));
        }
    }

    #[test]
    fn eval_sign_all_quarters() {
        let g = CoeffTensor::new(s3(), vec![1; 27]).unwrap();
        assert_eq!(
            g.eval_sign(&Assignment::all_plus(&s3())).unwrap(),
            Dyadic::new(27, 2)
        );
    }

    #[test]
    fn eval_sign_rejects_wrong_width() {
        let g = CoeffTensor::zeros(s3());
        let a = Assignment::all_plus(&Scenario::three_by_three());
        assert!(matches!(g.eval_sign(&a), Err(BellError::ShapeMismatch { .. })));
    }

    #[test]
    fn admissibility_basics() {
        let trivial = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 4)]).unwrap();
        assert!(trivial.is_admissible());
        assert!(trivial.pointwise_delta_structure());
        let zero = CoeffTensor::zeros(s3());
        assert!(!zero.is_admissible());
        assert!(!zero.pointwise_delta_structure());
    }

    #[test]
    fn two_half_weight_terms_fail_pointwise() {
        let g = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 2), (&[1, 1, 1], 2)]).unwrap();
        assert!(!g.pointwise_delta_structure());
        assert!(!g.is_admissible());
    }

    #[test]
    fn norm_conditions_examples() {
        let trivial = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 4)]).unwrap();
        let nc = trivial.norm_conditions();
        assert_eq!((nc.sum_abs, nc.sum_sq, nc.pass), (Dyadic::ONE, Dyadic::ONE, true));

        let double = CoeffTensor::from_terms(s3(), &[(&[0, 0, 0], 4), (&[1, 1, 1], 4)]).unwrap();
        let nc = double.norm_conditions();
        assert_eq!(nc.sum_abs, Dyadic::from_int(2));
        assert_eq!(nc.sum_sq, Dyadic::from_int(2));
        assert!(!nc.pass);
    }

    #[test]
    fn construction_validates() {
        assert!(CoeffTensor::new(s3(), vec![0; 26]).is_err());
        assert!(matches!(
            CoeffTensor::new(s3(), {
                let mut v = vec![0; 27];
                v[3] = 5;
                v
            }),
            Err(BellError::NumeratorOutOfRange { index: 3, .. })
        ));
        assert!(CoeffTensor::from_terms(s3(), &[(&[3, 0, 0], 1)]).is_err());
    }

    #[test]
    fn serde_wire_format() {
        let g = CoeffTensor::from_terms(Scenario::three_by_three(), &[(&[0, 0], 2)]).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"scenario":[3,3],"denom_exp":1,"numerators":[2,0,0,0,0,0,0,0,0]}"#
        );
        let back: CoeffTensor = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"scenario":[3,3],"denom_exp":2,"numerators":[2,0,0,0,0,0,0,0,0]}"#;
        assert!(serde_json::from_str::<CoeffTensor>(bad).is_err());
    }

    #[test]
    fn display_renders_expression() {
        let chsh = CoeffTensor::from_terms(
            Scenario::three_by_three(),
            &[(&[0, 0], 1), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], -1)],
        )
        .unwrap();
        assert_eq!(chsh.to_string(), "1/2 |E00 + E01 + E10 - E11| <= 1");
    }
}
