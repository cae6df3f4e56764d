//! The five subcommands, each returning a JSON report and an exit code.

use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use tightbell::fixtures;
use tightbell::{
    classify_delta, enumerate_three_party, enumerate_two_party, tightness, Budget, Catalog, CoeffTensor,
    DeltaPoly, Scenario, TightnessCertificate,
};
use tightbell_quantum::conditions::Condition;
use tightbell_quantum::{
    condition_max, frame_grid_search, grid_oracle, seesaw_maximize, CorrelationTensor, LocalFrames,
    MeasurementSettings, ThreeQubitState,
};

use crate::error::{CliError, Result};
use crate::io::{read_state, read_tensor, to_json};

/// Everything that influences a run besides the input files.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub restarts: usize,
    pub budget: Budget,
    /// Grid step for cross-checks; each command has its own default.
    pub grid_degrees: Option<f64>,
    pub certify: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: tightbell_quantum::tol::SEESAW_RESTARTS,
            budget: Budget::default(),
            grid_degrees: None,
            certify: false,
        }
    }
}

impl RunConfig {
    pub fn with_budget(mut self, nodes: Option<u64>, secs: Option<u64>) -> Self {
        if nodes.is_some() || secs.is_some() {
            self.budget = Budget {
                max_nodes: nodes,
                max_time: secs.map(Duration::from_secs),
            };
        }
        self
    }
}

/// A finished command: the JSON report, a one-line summary and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub json: String,
    pub summary: String,
    pub exit: i32,
}

#[derive(Serialize)]
struct NormReport {
    sum: String,
    sum_sq: String,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    name: Option<String>,
    scenario: Scenario,
    admissible: bool,
    first_inadmissible_assignment: Option<u32>,
    sign_range: [String; 2],
    norm_conditions: NormReport,
    pointwise_delta_structure: bool,
    /// Per party, the family of each order-1 delta.
    delta_families: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<TightnessCertificate>,
}

fn family_label(d: &DeltaPoly) -> String {
    match classify_delta(d) {
        Ok(Some(id)) => id.label().to_string(),
        Ok(None) => "none".to_string(),
        Err(_) => "n/a".to_string(),
    }
}

fn delta_families(g: &CoeffTensor) -> Vec<Vec<String>> {
    if g.scenario().parties() != 3 {
        return Vec::new();
    }
    (0..3)
        .map(|p| g.order1_deltas(p).iter().map(family_label).collect())
        .collect()
}

pub fn cmd_verify(path: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let input = read_tensor(path)?;
    let g = &input.tensor;
    let nc = g.norm_conditions();
    let (hi, lo) = g.sign_range();
    let admissible = g.is_admissible();
    let certificate = cfg.certify.then(|| tightness(g));
    let report = VerifyReport {
        name: input.name.clone(),
        scenario: g.scenario().clone(),
        admissible,
        first_inadmissible_assignment: g.first_inadmissible(),
        sign_range: [lo.to_string(), hi.to_string()],
        norm_conditions: NormReport {
            sum: g.sum().to_string(),
            sum_sq: g.sum_sq().to_string(),
            pass: nc.pass,
        },
        pointwise_delta_structure: g.pointwise_delta_structure(),
        delta_families: delta_families(g),
        certificate,
    };
    let mut summary = format!(
        "{}: {}",
        input.name.as_deref().unwrap_or("tensor"),
        if admissible { "admissible" } else { "not admissible" }
    );
    if let Some(c) = certificate {
        summary.push_str(if c.is_facet { ", facet" } else { ", not a facet" });
    }
    Ok(Outcome {
        json: to_json(&report),
        summary,
        exit: if admissible { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct TightenReport {
    name: Option<String>,
    scenario: Scenario,
    admissible: bool,
    certificate: TightnessCertificate,
}

pub fn cmd_tighten(path: &Path) -> Result<Outcome> {
    let input = read_tensor(path)?;
    let certificate = tightness(&input.tensor);
    let summary = format!(
        "{}: max {}, affine rank {} of {}, {}",
        input.name.as_deref().unwrap_or("tensor"),
        certificate.max_value,
        certificate.affine_rank,
        certificate.ambient_dim - 1,
        if certificate.is_facet { "facet" } else { "not a facet" }
    );
    let report = TightenReport {
        name: input.name,
        scenario: input.tensor.scenario().clone(),
        admissible: input.tensor.is_admissible(),
        certificate,
    };
    Ok(Outcome {
        json: to_json(&report),
        summary,
        exit: if certificate.is_facet { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct QuantumValues {
    seesaw: f64,
    grid: f64,
    grid_step_degrees: f64,
}

#[derive(Serialize)]
struct CatalogRecord {
    scenario: Scenario,
    denom_exp: u32,
    numerators: Vec<i64>,
    orbit_size: u64,
    admissible: bool,
    tight: Option<bool>,
    certificate: Option<TightnessCertificate>,
    delta_profile: Vec<String>,
    provenance: String,
    fixtures: Vec<String>,
    ghz: Option<QuantumValues>,
}

#[derive(Serialize)]
struct CatalogFile {
    scenario: Scenario,
    complete: bool,
    strategies_agree: bool,
    class_count: usize,
    strategies: Vec<tightbell::enumerate::StrategyReport>,
    unclassified_deltas: Vec<String>,
    seed: u64,
    restarts: usize,
    records: Vec<CatalogRecord>,
}

/// GHZ see-saw and grid values for one inequality.
fn ghz_values(g: &CoeffTensor, cfg: &RunConfig) -> Result<QuantumValues> {
    let t = ThreeQubitState::ghz().correlation_tensor()?;
    let s = seesaw_maximize(g, &t, cfg.restarts, cfg.seed)?;
    let grid = grid_oracle(g, &t, cfg.grid_degrees.unwrap_or(10.0))?;
    Ok(QuantumValues {
        seesaw: s.value,
        grid: grid.value,
        grid_step_degrees: grid.step_degrees,
    })
}

/// Catalog for `scenario` with fixture membership and GHZ values attached.
pub fn build_catalog(scenario: &Scenario, cfg: &RunConfig) -> Result<(Catalog, String)> {
    let catalog = if scenario == &Scenario::three_by_three() {
        enumerate_two_party(true)
    } else if scenario == &Scenario::three_by_three_by_three() {
        enumerate_three_party(cfg.budget, true)
    } else {
        return Err(CliError::Usage(format!(
            "enumeration supports 3x3 and 3x3x3, not {scenario}"
        )));
    };
    let known = fixtures::all();
    let three = scenario.parties() == 3;
    let records = catalog
        .records
        .iter()
        .map(|r| {
            let g = r.canonical();
            let members = known
                .iter()
                .filter(|f| f.scenario == *scenario && catalog.find(&f.inequality).is_some_and(|i| catalog.records[i] == *r))
                .map(|f| f.name.to_string())
                .collect();
            Ok(CatalogRecord {
                scenario: r.scenario.clone(),
                denom_exp: r.denom_exp,
                numerators: r.numerators.clone(),
                orbit_size: r.orbit_size,
                admissible: r.admissible,
                tight: r.tight,
                certificate: r.certificate,
                delta_profile: r.delta_profile.clone(),
                provenance: r.provenance.clone(),
                fixtures: members,
                ghz: if three { Some(ghz_values(&g, cfg)?) } else { None },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let file = CatalogFile {
        scenario: catalog.scenario.clone(),
        complete: catalog.complete,
        strategies_agree: catalog.strategies_agree,
        class_count: catalog.class_count(),
        strategies: catalog.strategies.clone(),
        unclassified_deltas: catalog.unclassified_deltas.clone(),
        seed: cfg.seed,
        restarts: cfg.restarts,
        records,
    };
    Ok((catalog, to_json(&file)))
}

pub fn cmd_enumerate(scenario: &str, cfg: &RunConfig) -> Result<Outcome> {
    let scenario: Scenario = scenario
        .parse()
        .map_err(|e: tightbell::BellError| CliError::Usage(e.to_string()))?;
    let (catalog, json) = build_catalog(&scenario, cfg)?;
    let summary = format!(
        "{scenario}: {} classes, {}, routes {}",
        catalog.class_count(),
        if catalog.complete { "complete" } else { "incomplete (budget exhausted)" },
        if catalog.strategies_agree { "agree" } else { "disagree" }
    );
    let ok = catalog.complete && catalog.strategies_agree && catalog.unclassified_deltas.is_empty();
    Ok(Outcome {
        json,
        summary,
        exit: if ok { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct SeesawReport {
    value: f64,
    settings: MeasurementSettings,
    best_restart: usize,
    restarts: usize,
    seed: u64,
}

#[derive(Serialize)]
struct GridReport {
    value: f64,
    step_degrees: f64,
    gauge_fixed: bool,
    settings: MeasurementSettings,
}

#[derive(Serialize)]
struct ViolateReport {
    name: Option<String>,
    correlation_tensor: CorrelationTensor,
    seesaw: SeesawReport,
    grid: GridReport,
    grid_delta: f64,
    violation: bool,
}

pub fn cmd_violate(tensor: &Path, state: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let input = read_tensor(tensor)?;
    let t = read_state(state)?.correlation_tensor()?;
    let s = seesaw_maximize(&input.tensor, &t, cfg.restarts, cfg.seed)?;
    let grid = grid_oracle(&input.tensor, &t, cfg.grid_degrees.unwrap_or(10.0))?;
    let violation = s.value > 1.0 + tightbell_quantum::tol::MARGIN;
    let summary = format!(
        "{}: see-saw {:.12}, grid {:.12}{}",
        input.name.as_deref().unwrap_or("tensor"),
        s.value,
        grid.value,
        if violation { ", violated" } else { "" }
    );
    let report = ViolateReport {
        name: input.name,
        correlation_tensor: t,
        grid_delta: (s.value - grid.value).abs(),
        seesaw: SeesawReport {
            value: s.value,
            settings: s.settings,
            best_restart: s.best_restart,
            restarts: cfg.restarts,
            seed: cfg.seed,
        },
        grid: GridReport {
            value: grid.value,
            step_degrees: grid.step_degrees,
            gauge_fixed: grid.gauge_fixed,
            settings: grid.settings,
        },
        violation,
    };
    Ok(Outcome {
        json: to_json(&report),
        summary,
        exit: 0,
    })
}

#[derive(Serialize)]
struct ConditionReport {
    max: f64,
    frames: LocalFrames,
    /// Absent when the grid search found the larger value.
    best_restart: Option<usize>,
    grid: f64,
    grid_step_degrees: f64,
    /// The maximum stays within 1, which rules out a violation.
    sufficient: bool,
}

#[derive(Serialize)]
struct ConditionsReport {
    correlation_tensor: CorrelationTensor,
    nine_setting: ConditionReport,
    two_xii: ConditionReport,
    restarts: usize,
    seed: u64,
}

fn condition_report(t: &CorrelationTensor, which: Condition, cfg: &RunConfig) -> Result<ConditionReport> {
    let step = cfg.grid_degrees.unwrap_or(15.0);
    let opt = condition_max(t, which, cfg.restarts, cfg.seed)?;
    let grid = frame_grid_search(t, which, step)?;
    let (max, frames, best_restart) = if grid.value > opt.value {
        (grid.value, grid.frames, None)
    } else {
        (opt.value, opt.frames, Some(opt.best_restart))
    };
    Ok(ConditionReport {
        max,
        frames,
        best_restart,
        grid: grid.value,
        grid_step_degrees: step,
        sufficient: max <= 1.0 + tightbell_quantum::tol::EQUALITY,
    })
}

pub fn cmd_conditions(state: &Path, cfg: &RunConfig) -> Result<Outcome> {
    let t = read_state(state)?.correlation_tensor()?;
    let nine = condition_report(&t, Condition::ThreeSetting, cfg)?;
    let xii = condition_report(&t, Condition::Ineq3, cfg)?;
    let summary = format!(
        "nine_setting condition max {:.12} ({}), two_xii condition max {:.12} ({})",
        nine.max,
        if nine.sufficient { "cannot violate" } else { "inconclusive" },
        xii.max,
        if xii.sufficient { "cannot violate" } else { "inconclusive" },
    );
    let report = ConditionsReport {
        correlation_tensor: t,
        nine_setting: nine,
        two_xii: xii,
        restarts: cfg.restarts,
        seed: cfg.seed,
    };
    Ok(Outcome {
        json: to_json(&report),
        summary,
        exit: 0,
    })
}
