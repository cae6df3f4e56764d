//! Setting identification and reshaping between scenarios.

use crate::error::{BellError, Result};
use crate::scenario::Scenario;
use crate::tensor::CoeffTensor;

/// Sets measurement `u` of `party` equal to measurement `v`.
///
/// The slice of `u` is added onto the slice of `v` and `u` is dropped, so the
/// party loses one setting and settings above `u` shift down by one. The
/// reduced sign function is a restriction of the original one, so an
/// admissible input stays admissible.
pub fn identify_settings(g: &CoeffTensor, party: usize, u: usize, v: usize) -> Result<CoeffTensor> {
    let scenario = g.scenario();
    if party >= scenario.parties() {
        return Err(BellError::InvalidIdentification(format!("no party {party}")));
    }
    let n = scenario.settings_of(party);
    if u == v || u >= n || v >= n {
        return Err(BellError::InvalidIdentification(format!(
            "cannot merge setting {u} into {v} of a party with {n} settings"
        )));
    }
    if n == 1 {
        return Err(BellError::InvalidIdentification("party has a single setting".into()));
    }
    let mut settings = scenario.settings().to_vec();
    settings[party] -= 1;
    let reduced = Scenario::new(settings)?;
    let mut out = vec![0i64; reduced.coefficient_count()];
    for (flat, &x) in g.numerators().iter().enumerate() {
        let mut idx = scenario.unravel(flat);
        let s = if idx[party] == u { v } else { idx[party] };
        idx[party] = if s > u { s - 1 } else { s };
        out[reduced.ravel(&idx)] += x;
    }
    let bound = 1i64 << reduced.denom_exp();
    if let Some((index, &value)) = out.iter().enumerate().find(|(_, x)| x.abs() > bound) {
        return Err(BellError::NumeratorOutOfRange {
            index,
            value,
            denom_exp: reduced.denom_exp(),
        });
    }
    CoeffTensor::new(reduced, out)
}

/// Drops settings whose coefficient slice is identically zero (keeping at
/// least one setting per party).
pub fn compact(g: &CoeffTensor) -> CoeffTensor {
    let scenario = g.scenario();
    let keep: Vec<Vec<usize>> = (0..scenario.parties())
        .map(|p| {
            let used: Vec<usize> = (0..scenario.settings_of(p))
                .filter(|&s| {
                    g.numerators()
                        .iter()
                        .enumerate()
                        .any(|(flat, &x)| x != 0 && scenario.unravel(flat)[p] == s)
                })
                .collect();
            if used.is_empty() {
                vec![0]
            } else {
                used
            }
        })
        .collect();
    let reduced = Scenario::new(keep.iter().map(Vec::len).collect()).expect("sizes shrink");
    let mut out = vec![0i64; reduced.coefficient_count()];
    for (flat, &x) in g.numerators().iter().enumerate() {
        let idx = scenario.unravel(flat);
        if let Some(new_idx) = idx
            .iter()
            .zip(&keep)
            .map(|(&s, k)| k.iter().position(|&t| t == s))
            .collect::<Option<Vec<_>>>()
        {
            out[reduced.ravel(&new_idx)] = x;
        }
    }
    CoeffTensor::from_parts_unchecked(reduced, out)
}

/// Pads a tensor with zero coefficients into a scenario with at least as
/// many settings per party.
pub fn embed(g: &CoeffTensor, target: &Scenario) -> Result<CoeffTensor> {
    let scenario = g.scenario();
    if target.parties() != scenario.parties()
        || scenario
            .settings()
            .iter()
            .zip(target.settings())
            .any(|(a, b)| a > b)
    {
        return Err(BellError::ShapeMismatch {
            expected: format!("a scenario containing {scenario}"),
            found: target.to_string(),
        });
    }
    let mut out = vec![0i64; target.coefficient_count()];
    for (flat, &x) in g.numerators().iter().enumerate() {
        out[target.ravel(&scenario.unravel(flat))] = x;
    }
    Ok(CoeffTensor::from_parts_unchecked(target.clone(), out))
}

/// Compacts, then pads into the uniform scenario with the largest setting
/// count, so tensors from different shapes can be compared canonically.
pub fn normalize_shape(g: &CoeffTensor) -> Result<CoeffTensor> {
    let c = compact(g);
    let m = *c.scenario().settings().iter().max().expect("nonempty");
    let target = Scenario::new(vec![m.max(3); c.scenario().parties()])?;
    embed(&c, &target)
}

/// True iff the two tensors are related by a local symmetry once unused
/// settings are dropped.
pub fn same_class(g: &CoeffTensor, h: &CoeffTensor) -> Result<bool> {
    let a = normalize_shape(g)?;
    let b = normalize_shape(h)?;
    Ok(a.scenario() == b.scenario() && a.canonicalize().0 == b.canonicalize().0)
}
