//! Known inequalities, each held as the sign-function polynomial and the
//! inequality coefficients, both as printed in the source tables and as
//! corrected where the printed transcriptions disagree.
//!
//! Terms are written as digit strings of setting indices (`"012"` is
//! `a_0 b_1 c_2`) with numerators over `2^(parties-1)`.

use crate::scenario::Scenario;
use crate::tensor::CoeffTensor;

/// One fixture. `sign` and `inequality` are the corrected transcriptions;
/// the `printed_*` fields hold the data exactly as published.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub scenario: Scenario,
    /// Whether a sign-function polynomial was published (the 2x4x4 parent
    /// is only given as an inequality).
    pub has_sign: bool,
    pub sign: CoeffTensor,
    pub inequality: CoeffTensor,
    pub printed_sign: CoeffTensor,
    pub printed_inequality: CoeffTensor,
    pub corrections: &'static [&'static str],
}

impl Fixture {
    pub fn is_corrected(&self) -> bool {
        !self.corrections.is_empty()
    }
}

fn tensor(scenario: &Scenario, terms: &[(&str, i64)]) -> CoeffTensor {
    let mut numerators = vec![0i64; scenario.coefficient_count()];
    for (idx, n) in terms {
        let index: Vec<usize> = idx.bytes().map(|b| (b - b'0') as usize).collect();
        numerators[scenario.ravel(&index)] += n;
    }
    CoeffTensor::new(scenario.clone(), numerators).expect("fixture data is in range")
}

struct Spec {
    name: &'static str,
    description: &'static str,
    settings: &'static [usize],
    sign: Option<&'static [(&'static str, i64)]>,
    inequality: &'static [(&'static str, i64)],
    printed_sign: Option<&'static [(&'static str, i64)]>,
    printed_inequality: Option<&'static [(&'static str, i64)]>,
    corrections: &'static [&'static str],
}

const DELTA_I_IV: &[(&str, i64)] = &[
    ("000", -3), ("001", 1), ("010", 1), ("011", 1),
    ("100", 1), ("101", 1), ("110", 1), ("111", 1),
];
const CHSH_EXT_AC: &[(&str, i64)] = &[("000", 2), ("001", 2), ("100", 2), ("101", -2)];
const CHSH_EXT_AB: &[(&str, i64)] = &[("000", 2), ("010", 2), ("100", 2), ("110", -2)];
const CHSH_EXT_MIXED: &[(&str, i64)] = &[("000", 2), ("001", 2), ("110", 2), ("111", -2)];
const MABK: &[(&str, i64)] = &[("000", 2), ("011", 2), ("101", 2), ("110", -2)];
const MABK_PRINTED_SIGN: &[(&str, i64)] = &[("000", 2), ("011", 2), ("110", 2), ("101", -2)];

const NINE_SETTING: &[(&str, i64)] = &[
    ("011", 1), ("012", -1), ("021", 1), ("022", -1),
    ("101", 1), ("102", 1), ("110", 1), ("111", 1), ("120", -1), ("122", 1),
    ("201", -1), ("202", -1), ("210", 1), ("212", 1), ("220", -1), ("221", 1),
];
const NINE_SETTING_PRINTED_INEQ: &[(&str, i64)] = &[
    ("011", 1), ("012", -1), ("021", 1), ("022", -1),
    ("101", 1), ("102", 1), ("110", 1), ("111", 1), ("120", -1), ("122", 1),
    ("201", -1), ("202", -1), ("210", 1), ("211", 1), ("220", -1), ("221", 1),
];

const MERGE_A0_A2: &[(&str, i64)] = &[
    ("001", -1), ("002", -1), ("010", 1), ("011", 1), ("020", -1), ("021", 2), ("022", -1),
    ("101", 1), ("102", 1), ("110", 1), ("111", 1), ("120", -1), ("122", 1),
];
const MERGE_A0_A2_PRINTED_INEQ: &[(&str, i64)] = &[
    ("001", -1), ("002", -1), ("010", 1), ("011", 1), ("020", -1), ("021", 2), ("022", 1),
    ("101", 1), ("102", 1), ("110", 1), ("111", 1), ("120", -1), ("222", 1),
];

const MERGE_A2_A1: &[(&str, i64)] = &[
    ("011", 1), ("012", -1), ("021", 1), ("022", -1),
    ("110", 2), ("111", 1), ("112", 1), ("120", -2), ("121", 1), ("122", 1),
];
const MERGE_A2_A1_PRINTED: &[(&str, i64)] = &[
    ("011", 1), ("012", -1), ("021", 1), ("022", -1),
    ("110", 2), ("111", 1), ("112", 1), ("120", 2), ("121", -1), ("122", -1),
];

const TWO_XII: &[(&str, i64)] = &[
    ("000", 2), ("011", 1), ("012", 1), ("021", 1), ("022", -1),
    ("100", 2), ("111", -1), ("112", -1), ("121", -1), ("122", 1),
];

const PARENT_244: &[(&str, i64)] = &[
    ("000", 1), ("001", 1), ("010", 1), ("011", -1),
    ("022", 1), ("023", 1), ("032", 1), ("033", -1),
    ("100", 1), ("101", 1), ("110", 1), ("111", -1),
    ("122", -1), ("123", -1), ("132", -1), ("133", 1),
];

const CHSH: &[(&str, i64)] = &[("00", 1), ("01", 1), ("10", 1), ("11", -1)];
const TRIVIAL_2: &[(&str, i64)] = &[("00", 2)];

const SPECS: &[Spec] = &[
    Spec {
        name: "delta_i_iv",
        description: "2x2x2 inequality built from a Delta_I and a Delta_IV",
        settings: &[3, 3, 3],
        sign: Some(DELTA_I_IV),
        inequality: DELTA_I_IV,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
    Spec {
        name: "chsh_ext_ac",
        description: "CHSH between Alice and Carol at Bob's setting 0",
        settings: &[3, 3, 3],
        sign: Some(CHSH_EXT_AC),
        inequality: CHSH_EXT_AC,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
    Spec {
        name: "chsh_ext_ab",
        description: "CHSH between Alice and Bob at Carol's setting 0",
        settings: &[3, 3, 3],
        sign: Some(CHSH_EXT_AB),
        inequality: CHSH_EXT_AB,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
    Spec {
        name: "chsh_ext_mixed",
        description: "CHSH-type extension with Bob's setting tied to Alice's",
        settings: &[3, 3, 3],
        sign: Some(CHSH_EXT_MIXED),
        inequality: CHSH_EXT_MIXED,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
    Spec {
        name: "mabk",
        description: "Mermin-Ardehali-Belinskii-Klyshko inequality",
        settings: &[3, 3, 3],
        sign: Some(MABK),
        inequality: MABK,
        printed_sign: Some(MABK_PRINTED_SIGN),
        printed_inequality: None,
        corrections: &["sign polynomial: a1(b1 c0 - b0 c1) -> a1(b0 c1 - b1 c0) to match the inequality"],
    },
    Spec {
        name: "nine_setting",
        description: "three settings for every party",
        settings: &[3, 3, 3],
        sign: Some(NINE_SETTING),
        inequality: NINE_SETTING,
        printed_sign: None,
        printed_inequality: Some(NINE_SETTING_PRINTED_INEQ),
        corrections: &["inequality: +E211 -> +E212 (the sign polynomial has a2 b1 c2)"],
    },
    Spec {
        name: "merge_a0_a2",
        description: "nine_setting with Alice's settings 0 and 2 identified",
        settings: &[3, 3, 3],
        sign: Some(MERGE_A0_A2),
        inequality: MERGE_A0_A2,
        printed_sign: None,
        printed_inequality: Some(MERGE_A0_A2_PRINTED_INEQ),
        corrections: &[
            "inequality: +E022 -> -E022",
            "inequality: +E222 -> +E122",
        ],
    },
    Spec {
        name: "merge_a2_a1",
        description: "nine_setting with Alice's settings 2 and 1 identified",
        settings: &[3, 3, 3],
        sign: Some(MERGE_A2_A1),
        inequality: MERGE_A2_A1,
        printed_sign: Some(MERGE_A2_A1_PRINTED),
        printed_inequality: Some(MERGE_A2_A1_PRINTED),
        corrections: &[
            "sign polynomial and inequality: a1 b2(2c0 - c1 - c2) -> a1 b2(-2c0 + c1 + c2) (printed form is not a sign function)",
        ],
    },
    Spec {
        name: "two_xii",
        description: "two Delta_XII deltas for Alice's settings 0 and 1",
        settings: &[3, 3, 3],
        sign: Some(TWO_XII),
        inequality: TWO_XII,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
    Spec {
        name: "parent_2x4x4",
        description: "2x4x4 inequality containing the reduced three-setting ones",
        settings: &[2, 4, 4],
        sign: None,
        inequality: PARENT_244,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
    Spec {
        name: "chsh",
        description: "two-party CHSH",
        settings: &[3, 3],
        sign: Some(CHSH),
        inequality: CHSH,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
    Spec {
        name: "trivial_2",
        description: "two-party trivial bound |E00| <= 1",
        settings: &[3, 3],
        sign: Some(TRIVIAL_2),
        inequality: TRIVIAL_2,
        printed_sign: None,
        printed_inequality: None,
        corrections: &[],
    },
];

fn build(spec: &Spec) -> Fixture {
    let scenario = Scenario::new(spec.settings.to_vec()).expect("fixture scenarios are valid");
    let inequality = tensor(&scenario, spec.inequality);
    let sign = spec.sign.map_or_else(|| inequality.clone(), |t| tensor(&scenario, t));
    let printed_sign = spec.printed_sign.map_or_else(|| sign.clone(), |t| tensor(&scenario, t));
    let printed_inequality = spec
        .printed_inequality
        .map_or_else(|| inequality.clone(), |t| tensor(&scenario, t));
    Fixture {
        name: spec.name,
        description: spec.description,
        scenario,
        has_sign: spec.sign.is_some(),
        sign,
        inequality,
        printed_sign,
        printed_inequality,
        corrections: spec.corrections,
    }
}

/// Every fixture, in a fixed order.
pub fn all() -> Vec<Fixture> {
    SPECS.iter().map(build).collect()
}

pub fn by_name(name: &str) -> Option<Fixture> {
    SPECS.iter().find(|s| s.name == name).map(build)
}

/// The nine three-party fixtures with a published sign polynomial.
pub fn three_party_signs() -> Vec<Fixture> {
    all()
        .into_iter()
        .filter(|f| f.has_sign && f.scenario.parties() == 3)
        .collect()
}

/// The five two-setting fixtures.
pub fn two_setting() -> Vec<Fixture> {
    ["delta_i_iv", "chsh_ext_ac", "chsh_ext_ab", "chsh_ext_mixed", "mabk"]
        .iter()
        .map(|n| by_name(n).expect("known name"))
        .collect()
}

pub fn two_party() -> Vec<Fixture> {
    all().into_iter().filter(|f| f.scenario.parties() == 2).collect()
}
