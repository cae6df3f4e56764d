//! Local-realistic vertices of the full-correlation polytope and facet
//! certificates.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rank::affine_rank;
use crate::scenario::{Assignment, Dyadic, Scenario};
use crate::tensor::CoeffTensor;

/// A deterministic local model and its correlation point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LRVertex {
    pub outcomes: Assignment,
    /// `a_i b_j c_k`, row-major.
    pub correlations: Vec<i64>,
}

impl LRVertex {
    pub fn new(scenario: &Scenario, outcomes: Assignment) -> Self {
        let offsets: Vec<usize> = (0..scenario.parties())
            .map(|p| scenario.variable_offset(p))
            .collect();
        let correlations = (0..scenario.coefficient_count())
            .map(|flat| {
                scenario
                    .unravel(flat)
                    .iter()
                    .zip(&offsets)
                    .map(|(&s, &o)| outcomes.sign(o + s))
                    .product()
            })
            .collect();
        Self {
            outcomes,
            correlations,
        }
    }
}

/// All deterministic assignments; with `dedup`, one per distinct correlation
/// point (first in mask order).
pub fn lr_vertices(scenario: &Scenario, dedup: bool) -> Vec<LRVertex> {
    let all = scenario.assignments().map(|a| LRVertex::new(scenario, a));
    if !dedup {
        return all.collect();
    }
    let mut seen = HashSet::new();
    all.filter(|v| seen.insert(v.correlations.clone())).collect()
}

fn lhs_numerator(g: &CoeffTensor, v: &LRVertex) -> i64 {
    g.numerators()
        .iter()
        .zip(&v.correlations)
        .map(|(a, b)| a * b)
        .sum()
}

/// Exact maximum and minimum of `Σ g E` over the given vertices.
pub fn lhs_extremes(g: &CoeffTensor, vertices: &[LRVertex]) -> (Dyadic, Dyadic) {
    let (max, min) = vertices
        .par_iter()
        .map(|v| {
            let x = lhs_numerator(g, v);
            (x, x)
        })
        .reduce(|| (i64::MIN, i64::MAX), |a, b| (a.0.max(b.0), a.1.min(b.1)));
    (Dyadic::new(max, g.denom_exp()), Dyadic::new(min, g.denom_exp()))
}

/// Exact facet certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawCertificate", from = "RawCertificate")]
pub struct TightnessCertificate {
    pub max_value: Dyadic,
    pub saturating_count: usize,
    pub affine_rank: usize,
    pub ambient_dim: usize,
    pub is_facet: bool,
}

#[derive(Serialize, Deserialize)]
struct RawCertificate {
    max_num: i64,
    max_den: i64,
    saturating_count: usize,
    affine_rank: usize,
    ambient_dim: usize,
    is_facet: bool,
}

impl From<TightnessCertificate> for RawCertificate {
    fn from(c: TightnessCertificate) -> Self {
        Self {
            max_num: c.max_value.numerator(),
            max_den: c.max_value.denominator(),
            saturating_count: c.saturating_count,
            affine_rank: c.affine_rank,
            ambient_dim: c.ambient_dim,
            is_facet: c.is_facet,
        }
    }
}

impl From<RawCertificate> for TightnessCertificate {
    fn from(r: RawCertificate) -> Self {
        Self {
            max_value: Dyadic::new(r.max_num, r.max_den.max(1).trailing_zeros()),
            saturating_count: r.saturating_count,
            affine_rank: r.affine_rank,
            ambient_dim: r.ambient_dim,
            is_facet: r.is_facet,
        }
    }
}

/// Affine rank of the vertices saturating `Σ g E = 1`; a facet needs
/// maximum exactly 1 and rank one below the ambient dimension.
pub fn tightness(g: &CoeffTensor) -> TightnessCertificate {
    let vertices = lr_vertices(g.scenario(), true);
    tightness_on(g, &vertices)
}

/// As [`tightness`], reusing a precomputed deduplicated vertex list.
pub fn tightness_on(g: &CoeffTensor, vertices: &[LRVertex]) -> TightnessCertificate {
    let (max_value, _) = lhs_extremes(g, vertices);
    let one = 1i64 << g.denom_exp();
    let saturating: Vec<Vec<i64>> = vertices
        .iter()
        .filter(|v| lhs_numerator(g, v) == one)
        .map(|v| v.correlations.clone())
        .collect();
    let ambient_dim = g.scenario().coefficient_count();
    let rank = affine_rank(&saturating);
    TightnessCertificate {
        max_value,
        saturating_count: saturating.len(),
        affine_rank: rank,
        ambient_dim,
        is_facet: max_value == Dyadic::ONE && rank + 1 == ambient_dim,
    }
}

/// Affine rank of the whole deduplicated vertex set.
pub fn vertex_set_rank(scenario: &Scenario) -> usize {
    let points: Vec<Vec<i64>> = lr_vertices(scenario, true)
        .into_iter()
        .map(|v| v.correlations)
        .collect();
    affine_rank(&points)
}
