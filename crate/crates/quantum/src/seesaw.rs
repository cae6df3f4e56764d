//! Alternating maximization of a Bell value over measurement directions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tightbell::CoeffTensor;

use crate::bell::Dense;
use crate::correlation::CorrelationTensor;
use crate::error::{QuantumError, Result};
use crate::settings::MeasurementSettings;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub seed: u64,
    pub convergence: f64,
    pub max_sweeps: usize,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            restarts: tol::SEESAW_RESTARTS,
            seed: 0,
            convergence: tol::SEESAW_CONVERGENCE,
            max_sweeps: tol::SEESAW_MAX_SWEEPS,
        }
    }
}

/// One descent from a fixed start.
#[derive(Debug, Clone)]
pub struct SeesawRun {
    pub value: f64,
    pub settings: MeasurementSettings,
    /// Value at the start and after every sweep.
    pub trace: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub value: f64,
    pub settings: MeasurementSettings,
    pub best_restart: usize,
    pub run_values: Vec<f64>,
}

fn sweep(d: &Dense, t: &CorrelationTensor, m: &mut MeasurementSettings) {
    for party in 0..3 {
        let fields = d.party_fields(t, m, party);
        for (s, v) in fields.into_iter().enumerate() {
            let n = v.norm();
            // A vanishing field leaves the value independent of this direction.
            if n > 0.0 {
                m.set(party, s, v / n);
            }
        }
    }
}

/// Runs sweeps from `start` until the gain drops below `convergence` or the
/// sweep cap is reached.
pub fn seesaw_run(
    g: &CoeffTensor,
    t: &CorrelationTensor,
    start: MeasurementSettings,
    convergence: f64,
    max_sweeps: usize,
) -> Result<SeesawRun> {
    start.check_scenario(g.scenario())?;
    let d = Dense::new(g)?;
    Ok(run_dense(&d, t, start, convergence, max_sweeps))
}

fn run_dense(d: &Dense, t: &CorrelationTensor, start: MeasurementSettings, convergence: f64, max_sweeps: usize) -> SeesawRun {
    let mut m = start;
    let mut value = d.value(t, &m);
    let mut trace = vec![value];
    let mut converged = false;
    for _ in 0..max_sweeps {
        sweep(d, t, &mut m);
        let next = d.value(t, &m);
        trace.push(next);
        let gain = next - value;
        value = next;
        if gain < convergence {
            converged = true;
            break;
        }
    }
    SeesawRun {
        value,
        settings: m,
        trace,
        converged,
    }
}

/// Best see-saw value over `restarts` random starts.
pub fn seesaw_maximize(g: &CoeffTensor, t: &CorrelationTensor, restarts: usize, seed: u64) -> Result<SeesawResult> {
    seesaw_with(
        g,
        t,
        &SeesawOptions {
            restarts,
            seed,
            ..SeesawOptions::default()
        },
    )
}

pub fn seesaw_with(g: &CoeffTensor, t: &CorrelationTensor, opts: &SeesawOptions) -> Result<SeesawResult> {
    if opts.restarts == 0 {
        return Err(QuantumError::InvalidArgument("at least one restart is needed".into()));
    }
    let d = Dense::new(g)?;
    let runs: Vec<SeesawRun> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(r as u64);
            let start = MeasurementSettings::random(&d.counts, &mut rng);
            run_dense(&d, t, start, opts.convergence, opts.max_sweeps)
        })
        .collect();
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.value > runs[best].value {
            best = r;
        }
    }
    Ok(SeesawResult {
        value: runs[best].value,
        settings: runs[best].settings.clone(),
        best_restart: best,
        run_values: runs.iter().map(|r| r.value).collect(),
    })
}
