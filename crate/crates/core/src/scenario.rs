//! Measurement scenarios, setting-sign assignments and exact dyadic values.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BellError, Result};

/// Largest number of dichotomic settings a single party may hold.
pub const MAX_SETTINGS: usize = 4;

/// Number of parties and the setting count of each.
///
/// Two or three parties, each with one to four settings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Scenario {
    settings: Vec<usize>,
}

impl Scenario {
    pub fn new(settings: Vec<usize>) -> Result<Self> {
        if !(2..=3).contains(&settings.len()) {
            return Err(BellError::InvalidScenario(format!(
                "{} parties (expected 2 or 3)",
                settings.len()
            )));
        }
        if let Some(&bad) = settings.iter().find(|&&n| n == 0 || n > MAX_SETTINGS) {
            return Err(BellError::InvalidScenario(format!(
                "{bad} settings for one party (expected 1..={MAX_SETTINGS})"
            )));
        }
        Ok(Self { settings })
    }

    /// Three parties with three settings each.
    pub fn three_by_three_by_three() -> Self {
        Self { settings: vec![3, 3, 3] }
    }

    /// Two parties with three settings each.
    pub fn three_by_three() -> Self {
        Self { settings: vec![3, 3] }
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[usize] {
        &self.settings
    }

    pub fn settings_of(&self, party: usize) -> usize {
        self.settings[party]
    }

    /// Number of correlation coordinates (product of setting counts).
    pub fn coefficient_count(&self) -> usize {
        self.settings.iter().product()
    }

    /// Number of setting-sign variables (sum of setting counts).
    pub fn variable_count(&self) -> usize {
        self.settings.iter().sum()
    }

    pub fn assignment_count(&self) -> usize {
        1 << self.variable_count()
    }

    /// Denominator exponent of the coefficient lattice: quarters for three
    /// parties, halves for two.
    pub fn denom_exp(&self) -> u32 {
        (self.parties() - 1) as u32
    }

    /// Bit offset of the first variable of `party` inside an assignment mask.
    pub fn variable_offset(&self, party: usize) -> usize {
        self.settings[..party].iter().sum()
    }

    pub fn variable_index(&self, party: usize, setting: usize) -> usize {
        self.variable_offset(party) + setting
    }

    /// Row-major strides, first party most significant.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.parties()];
        for p in (0..self.parties().saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * self.settings[p + 1];
        }
        strides
    }

    pub fn ravel(&self, index: &[usize]) -> usize {
        index
            .iter()
            .zip(self.strides())
            .map(|(&i, s)| i * s)
            .sum()
    }

    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut index = vec![0; self.parties()];
        for p in (0..self.parties()).rev() {
            index[p] = flat % self.settings[p];
            flat /= self.settings[p];
        }
        index
    }

    /// All assignments of this scenario in mask order.
    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        let width = self.variable_count() as u8;
        (0..self.assignment_count() as u32).map(move |bits| Assignment { bits, width })
    }

    /// Same scenario with `party` removed.
    pub(crate) fn without_party(&self, party: usize) -> Vec<usize> {
        let mut s = self.settings.clone();
        s.remove(party);
        s
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.settings.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

impl FromStr for Scenario {
    type Err = BellError;

    fn from_str(s: &str) -> Result<Self> {
        let settings = s
            .split(['x', 'X', '×'])
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| BellError::InvalidScenario(format!("cannot parse '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Scenario::new(settings)
    }
}

impl TryFrom<Vec<usize>> for Scenario {
    type Error = BellError;

    fn try_from(settings: Vec<usize>) -> Result<Self> {
        Scenario::new(settings)
    }
}

impl From<Scenario> for Vec<usize> {
    fn from(s: Scenario) -> Self {
        s.settings
    }
}

/// One ±1 value per (party, setting), packed into a bitmask.
///
/// A set bit means the variable is −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: u32,
    width: u8,
}

impl Assignment {
    pub fn from_bits(bits: u32, width: usize) -> Self {
        debug_assert!(width <= 16);
        let mask = if width == 32 { u32::MAX } else { (1u32 << width) - 1 };
        Self {
            bits: bits & mask,
            width: width as u8,
        }
    }

    /// Builds an assignment from per-party sign lists, e.g. `[[1,1,-1],[1,-1,1],[1,1,1]]`.
    pub fn from_signs(scenario: &Scenario, signs: &[Vec<i8>]) -> Result<Self> {
        if signs.len() != scenario.parties()
            || signs
                .iter()
                .zip(scenario.settings())
                .any(|(s, &n)| s.len() != n)
        {
            return Err(BellError::ShapeMismatch {
                expected: scenario.to_string(),
                found: format!("{signs:?}"),
            });
        }
        let mut bits = 0u32;
        let mut offset = 0;
        for party in signs {
            for &s in party {
                match s {
                    1 => {}
                    -1 => bits |= 1 << offset,
                    other => {
                        return Err(BellError::ShapeMismatch {
                            expected: "±1 entries".into(),
                            found: other.to_string(),
                        })
                    }
                }
                offset += 1;
            }
        }
        Ok(Self::from_bits(bits, offset))
    }

    /// All variables +1.
    pub fn all_plus(scenario: &Scenario) -> Self {
        Self::from_bits(0, scenario.variable_count())
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    /// Value (±1) of variable `index`.
    #[inline]
    pub fn sign(&self, index: usize) -> i64 {
        1 - 2 * ((self.bits >> index) & 1) as i64
    }

    pub(crate) fn check(&self, scenario: &Scenario) -> Result<()> {
        if self.width() != scenario.variable_count() {
            return Err(BellError::ShapeMismatch {
                expected: format!("{} variables", scenario.variable_count()),
                found: format!("{} variables", self.width()),
            });
        }
        Ok(())
    }
}

/// An exact value `num / 2^exp`, always stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };

    pub fn new(num: i64, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        d.reduce();
        d
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { num: n, exp: 0 }
    }

    fn reduce(&mut self) {
        if self.num == 0 {
            self.exp = 0;
            return;
        }
        let shift = self.num.trailing_zeros().min(self.exp);
        self.num >>= shift;
        self.exp -= shift;
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        1i64 << self.exp
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    /// Numerator over a fixed denominator `2^exp`, if representable.
    pub fn numerator_at(&self, exp: u32) -> Option<i64> {
        if exp < self.exp {
            return None;
        }
        self.num.checked_mul(1i64 << (exp - self.exp))
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// True iff the value is +1 or −1.
    pub fn is_unit(&self) -> bool {
        self.exp == 0 && self.num.abs() == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / (1u64 << self.exp) as f64
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        let a = (self.num as i128) << (e - self.exp);
        let b = (other.num as i128) << (e - other.exp);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_shapes() {
        let s = Scenario::three_by_three_by_three();
        assert_eq!(s.coefficient_count(), 27);
        assert_eq!(s.assignment_count(), 512);
        assert_eq!(Scenario::three_by_three().coefficient_count(), 9);
        let s: Scenario = "2x4x4".parse().unwrap();
        assert_eq!(s.coefficient_count(), 32);
        assert_eq!(s.variable_count(), 10);
        assert_eq!(s.to_string(), "2x4x4");
    }

    #[test]
    fn scenario_rejects_bad_shapes() {
        assert!(Scenario::new(vec![3]).is_err());
        assert!(Scenario::new(vec![3, 3, 3, 3]).is_err());
        assert!(Scenario::new(vec![3, 0, 3]).is_err());
        assert!(Scenario::new(vec![3, 5]).is_err());
        assert!("3x?".parse::<Scenario>().is_err());
    }

    #[test]
    fn ravel_round_trip() {
        let s: Scenario = "2x4x3".parse().unwrap();
        for flat in 0..s.coefficient_count() {
            assert_eq!(s.ravel(&s.unravel(flat)), flat);
        }
        assert_eq!(s.ravel(&[1, 2, 1]), 12 + 6 + 1);
    }

    #[test]
    fn assignment_signs() {
        let s = Scenario::three_by_three_by_three();
        let a = Assignment::from_signs(&s, &[vec![1, -1, 1], vec![1, 1, 1], vec![-1, 1, 1]])
            .unwrap();
        assert_eq!(a.sign(0), 1);
        assert_eq!(a.sign(1), -1);
        assert_eq!(a.sign(6), -1);
        assert!(Assignment::from_signs(&s, &[vec![1, 1], vec![1, 1, 1], vec![1, 1, 1]]).is_err());
    }

    #[test]
    fn dyadic_is_reduced_and_ordered() {
        assert_eq!(Dyadic::new(4, 2), Dyadic::ONE);
        assert_eq!(Dyadic::new(27, 2).to_string(), "27/4");
        assert!(Dyadic::new(3, 2) < Dyadic::new(1, 0));
        assert!(Dyadic::new(-1, 0).is_unit());
        assert!(!Dyadic::new(2, 2).is_unit());
        assert_eq!(Dyadic::new(1, 1).numerator_at(2), Some(2));
        assert_eq!(Dyadic::new(1, 2).numerator_at(1), None);
    }
}
