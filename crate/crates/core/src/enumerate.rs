//! Enumeration of admissible coefficient tensors and their symmetry classes.
//!
//! Two independent routes are used and compared:
//!
//! * delta composition: every order-1 delta reachable from a listed family
//!   by relabeling Bob and Carol, combined three at a time (one per setting
//!   of Alice) with disjoint supports covering all of Bob's and Carol's
//!   assignments;
//! * lattice search: a depth-first search over integer numerators, with
//!   row, slice and weight pruning, that never consults the family list.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::family::{classify_delta, DeltaFamily, FamilyId};
use crate::polytope::{lr_vertices, tightness_on, TightnessCertificate};
use crate::scenario::Scenario;
use crate::symmetry::{canonical_form, compare_keys, generators};
use crate::tensor::CoeffTensor;

/// Node and wall-clock limits for the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            max_nodes: None,
            max_time: None,
        }
    }

    pub fn nodes(n: u64) -> Self {
        Self {
            max_nodes: Some(n),
            max_time: None,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: Some(2_000_000_000),
            max_time: Some(Duration::from_secs(600)),
        }
    }
}

struct Meter {
    nodes: AtomicU64,
    stopped: AtomicBool,
    budget: Budget,
    start: Instant,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Self {
            nodes: AtomicU64::new(0),
            stopped: AtomicBool::new(false),
            budget,
            start: Instant::now(),
        }
    }

    /// Counts one node; false once the budget is spent.
    #[inline]
    fn tick(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.budget.max_nodes.is_some_and(|max| n > max) {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        if n % 4096 == 0 && self.budget.max_time.is_some_and(|t| self.start.elapsed() > t) {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    fn exhausted(&self) -> bool {
        self.stopped.load(Ordering::Relaxed)
    }
}

/// One class of admissible tensors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub scenario: Scenario,
    pub denom_exp: u32,
    pub numerators: Vec<i64>,
    pub orbit_size: u64,
    pub admissible: bool,
    pub tight: Option<bool>,
    pub certificate: Option<TightnessCertificate>,
    pub delta_profile: Vec<String>,
    pub provenance: String,
}

impl InequalityRecord {
    pub fn canonical(&self) -> CoeffTensor {
        CoeffTensor::new(self.scenario.clone(), self.numerators.clone())
            .expect("records hold valid tensors")
    }
}

/// Outcome of one route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub name: String,
    pub tensors: usize,
    pub classes: usize,
    pub nodes: u64,
    pub complete: bool,
}

/// Result of an enumeration run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub scenario: Scenario,
    pub complete: bool,
    pub strategies: Vec<StrategyReport>,
    /// Both routes produced the same tensors (only meaningful when both are complete).
    pub strategies_agree: bool,
    /// Deltas of catalog classes that match no listed family.
    pub unclassified_deltas: Vec<String>,
    pub records: Vec<InequalityRecord>,
}

impl Catalog {
    pub fn class_count(&self) -> usize {
        self.records.len()
    }

    /// Position of the class containing `g` (compared after canonicalization).
    pub fn find(&self, g: &CoeffTensor) -> Option<usize> {
        if g.scenario() != &self.scenario {
            return None;
        }
        let canon = g.canonicalize().0;
        self.records.iter().position(|r| r.numerators == canon.numerators())
    }
}

/// Signs `±1` of every product of one variable per remaining party, per
/// assignment: `chars[bits][flat]`.
fn characters(rem: &[usize]) -> Vec<Vec<i64>> {
    let total: usize = rem.iter().sum();
    let len: usize = rem.iter().product();
    (0..1u32 << total)
        .map(|bits| {
            (0..len)
                .map(|mut flat| {
                    let mut offset = total;
                    let mut sign = 1;
                    for &n in rem.iter().rev() {
                        offset -= n;
                        if (bits >> (offset + flat % n)) & 1 == 1 {
                            sign = -sign;
                        }
                        flat /= n;
                    }
                    sign
                })
                .collect()
        })
        .collect()
}

/// A candidate order-1 delta with its value table and support.
#[derive(Debug, Clone)]
struct Slice {
    coeffs: Vec<i64>,
    mask: u64,
    sum: i64,
    sum_sq: i64,
}

fn slice_from(coeffs: Vec<i64>, chars: &[Vec<i64>], unit: i64) -> Option<Slice> {
    let mut mask = 0u64;
    for (bits, ch) in chars.iter().enumerate() {
        let v: i64 = coeffs.iter().zip(ch).map(|(a, b)| a * b).sum();
        if v != 0 {
            if v.abs() != unit {
                return None;
            }
            mask |= 1 << bits;
        }
    }
    Some(Slice {
        sum: coeffs.iter().sum(),
        sum_sq: coeffs.iter().map(|x| x * x).sum(),
        coeffs,
        mask,
    })
}

/// Combines one slice per setting of the first party so that supports are
/// disjoint and cover every assignment.
fn combine(slices: &[Slice], k: usize, full: u64, meter: &Meter) -> Vec<Vec<i64>> {
    let mut by_mask: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, s) in slices.iter().enumerate() {
        by_mask.entry(s.mask).or_default().push(i);
    }
    fn rec(
        slices: &[Slice],
        by_mask: &HashMap<u64, Vec<usize>>,
        chosen: &mut Vec<usize>,
        used: u64,
        k: usize,
        full: u64,
        meter: &Meter,
        out: &mut Vec<Vec<i64>>,
    ) {
        if !meter.tick() {
            return;
        }
        if chosen.len() + 1 == k {
            if let Some(last) = by_mask.get(&(full & !used)) {
                for &i in last {
                    chosen.push(i);
                    out.push(chosen.iter().flat_map(|&c| slices[c].coeffs.iter().copied()).collect());
                    chosen.pop();
                }
            }
            return;
        }
        for (i, s) in slices.iter().enumerate() {
            if s.mask & used == 0 {
                chosen.push(i);
                rec(slices, by_mask, chosen, used | s.mask, k, full, meter, out);
                chosen.pop();
            }
        }
    }
    (0..slices.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut chosen = vec![first];
            if k == 1 {
                if slices[first].mask == full {
                    out.push(slices[first].coeffs.clone());
                }
            } else {
                rec(slices, &by_mask, &mut chosen, slices[first].mask, k, full, meter, &mut out);
            }
            out
        })
        .collect()
}

/// Every order-1 delta obtained from the listed families by relabeling the
/// remaining parties (no exchange of parties).
fn family_slices(families: &[DeltaFamily], chars: &[Vec<i64>], unit: i64) -> Vec<Slice> {
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    for fam in families {
        let rep = &fam.representative;
        let orbit = crate::symmetry::orbit_bfs(rep.remaining_settings(), rep.numerators(), false);
        seen.extend(orbit);
    }
    seen.into_iter()
        .filter_map(|c| slice_from(c, chars, unit))
        .collect()
}

/// All order-1 deltas on the lattice, found by a position-wise search that
/// checks each completed row (one setting of the next party) on its own.
fn lattice_slices(rem: &[usize], unit: i64, max_sq: i64, chars: &[Vec<i64>], meter: &Meter) -> Vec<Slice> {
    let len: usize = rem.iter().product();
    let row = *rem.last().expect("at least one remaining party");
    let row_chars = characters(&[row]);
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; len];
    fn rec(
        pos: usize,
        sq: i64,
        coeffs: &mut Vec<i64>,
        row: usize,
        unit: i64,
        max_sq: i64,
        row_chars: &[Vec<i64>],
        chars: &[Vec<i64>],
        meter: &Meter,
        out: &mut Vec<Slice>,
    ) {
        if !meter.tick() {
            return;
        }
        if pos > 0 && pos % row == 0 {
            // A completed row is a higher-order delta: values in {0, ±unit/2, ±unit}.
            let r = &coeffs[pos - row..pos];
            let ok = row_chars.iter().all(|ch| {
                let v: i64 = r.iter().zip(ch).map(|(a, b)| a * b).sum::<i64>().abs();
                v == 0 || 2 * v == unit || v == unit
            });
            if !ok {
                return;
            }
        }
        if pos == coeffs.len() {
            if let Some(s) = slice_from(coeffs.clone(), chars, unit) {
                out.push(s);
            }
            return;
        }
        for v in -unit..=unit {
            let nsq = sq + v * v;
            if nsq > max_sq {
                continue;
            }
            coeffs[pos] = v;
            rec(pos + 1, nsq, coeffs, row, unit, max_sq, row_chars, chars, meter, out);
        }
        coeffs[pos] = 0;
    }
    rec(0, 0, &mut coeffs, row, unit, max_sq, &row_chars, chars, meter, &mut out);
    out
}

/// Depth-first search over the first party's slices, reusing the list of
/// valid slices for every slice position.
fn lattice_search(
    slices: &[Slice],
    k: usize,
    full: u64,
    unit_sq: i64,
    unit_sum: i64,
    meter: &Meter,
) -> Vec<Vec<i64>> {
    struct Search<'a> {
        slices: &'a [Slice],
        by_mask: HashMap<u64, Vec<usize>>,
        all: Vec<usize>,
        k: usize,
        full: u64,
        unit_sq: i64,
        unit_sum: i64,
        meter: &'a Meter,
    }

    impl Search<'_> {
        fn rec(&self, chosen: &mut Vec<usize>, used: u64, sum: i64, sq: i64, out: &mut Vec<Vec<i64>>) {
            if !self.meter.tick() {
                return;
            }
            let left = self.unit_sq - sq;
            // Weight budget, and reachability of |Σh| = unit_sum with what is left.
            if left < 0 || (sum - self.unit_sum).abs().min((sum + self.unit_sum).abs()) > left {
                return;
            }
            if chosen.len() == self.k {
                if used == self.full && left == 0 && sum.abs() == self.unit_sum {
                    out.push(chosen.iter().flat_map(|&c| self.slices[c].coeffs.iter().copied()).collect());
                }
                return;
            }
            // The last slice must fill exactly the uncovered assignments.
            let candidates: &[usize] = if chosen.len() + 1 == self.k {
                self.by_mask.get(&(self.full & !used)).map_or(&[], Vec::as_slice)
            } else {
                &self.all
            };
            for &i in candidates {
                let s = &self.slices[i];
                if s.mask & used == 0 && s.sum_sq <= left {
                    chosen.push(i);
                    self.rec(chosen, used | s.mask, sum + s.sum, sq + s.sum_sq, out);
                    chosen.pop();
                }
            }
        }
    }

    let mut by_mask: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, s) in slices.iter().enumerate() {
        by_mask.entry(s.mask).or_default().push(i);
    }
    let search = Search {
        slices,
        by_mask,
        all: (0..slices.len()).collect(),
        k,
        full,
        unit_sq,
        unit_sum,
        meter,
    };
    (0..slices.len())
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let s = &slices[first];
            search.rec(&mut vec![first], s.mask, s.sum, s.sum_sq, &mut out);
            out
        })
        .collect()
}

/// Partitions a set of tensors into symmetry classes.
///
/// Returns `(canonical, orbit size)` per class (sorted by canonical key), the
/// class index of every tensor, and whether every orbit stayed inside the set.
fn partition(
    settings: &[usize],
    tensors: &HashSet<Vec<i64>>,
) -> (Vec<(Vec<i64>, u64)>, HashMap<Vec<i64>, usize>, bool) {
    let gens = generators(settings, true);
    let mut sorted: Vec<&Vec<i64>> = tensors.iter().collect();
    sorted.sort_by(|a, b| compare_keys(a, b));
    let mut member: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut classes = Vec::new();
    let mut closed = true;
    for t in sorted {
        if member.contains_key(t) {
            continue;
        }
        let id = classes.len();
        let (canon, orbit) = canonical_form(settings, t, true);
        let mut stack = vec![t.clone()];
        member.insert(t.clone(), id);
        let mut count = 1u64;
        while let Some(u) = stack.pop() {
            for g in &gens {
                let v = g.apply_raw(settings, &u);
                if !member.contains_key(&v) {
                    closed &= tensors.contains(&v);
                    member.insert(v.clone(), id);
                    stack.push(v);
                    count += 1;
                }
            }
        }
        assert_eq!(count, orbit, "orbit size by stabilizer count and by closure differ");
        classes.push((canon, orbit));
    }
    // Renumber classes in canonical order.
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| compare_keys(&classes[a].0, &classes[b].0));
    let mut rank = vec![0; classes.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    for id in member.values_mut() {
        *id = rank[*id];
    }
    let classes = order.into_iter().map(|i| classes[i].clone()).collect();
    (classes, member, closed)
}

fn class_ids(member: &HashMap<Vec<i64>, usize>, tensors: &HashSet<Vec<i64>>) -> BTreeSet<usize> {
    tensors.iter().filter_map(|t| member.get(t).copied()).collect()
}

fn profile(g: &CoeffTensor, unclassified: &mut Vec<String>) -> Vec<String> {
    let mut labels: Vec<(FamilyId, String)> = g
        .order1_deltas(0)
        .into_iter()
        .map(|d| match classify_delta(&d) {
            Ok(Some(id)) => (id, id.label().to_string()),
            _ => {
                unclassified.push(format!("{d} (from {g})"));
                (FamilyId::Zero, "none".to_string())
            }
        })
        .collect();
    labels.sort();
    labels.into_iter().map(|(_, l)| l).collect()
}

fn provenance(lattice: bool, composition: bool) -> String {
    match (lattice, composition) {
        (true, true) => "lattice+composition",
        (true, false) => "lattice",
        (false, true) => "composition",
        (false, false) => "unknown",
    }
    .to_string()
}

fn build_records(
    scenario: &Scenario,
    classes: &[(Vec<i64>, u64)],
    provenance: impl Fn(usize) -> String,
    certify: bool,
    unclassified: &mut Vec<String>,
) -> Vec<InequalityRecord> {
    let vertices = certify.then(|| lr_vertices(scenario, true));
    classes
        .iter()
        .enumerate()
        .map(|(id, (canon, orbit))| {
            let g = CoeffTensor::new(scenario.clone(), canon.clone()).expect("lattice tensors are in range");
            let certificate = vertices.as_ref().map(|v| tightness_on(&g, v));
            InequalityRecord {
                scenario: scenario.clone(),
                denom_exp: g.denom_exp(),
                numerators: canon.clone(),
                orbit_size: *orbit,
                admissible: g.is_admissible(),
                tight: certificate.map(|c| c.is_facet),
                certificate,
                delta_profile: profile(&g, unclassified),
                provenance: provenance(id),
            }
        })
        .collect()
}

/// Exhaustive 3x3 enumeration: every tensor on the half-integer lattice is
/// tested directly, and the result is compared with delta composition.
pub fn enumerate_two_party(certify: bool) -> Catalog {
    let scenario = Scenario::three_by_three();
    let settings = scenario.settings().to_vec();
    let unit = 1i64 << scenario.denom_exp();

    // Route 1: the whole lattice {0, ±1/2, ±1}^9.
    let lattice_start = Instant::now();
    let base = (2 * unit + 1) as u64;
    let total = base.pow(scenario.coefficient_count() as u32);
    let lattice: HashSet<Vec<i64>> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut nums = vec![0i64; 9];
            for n in nums.iter_mut() {
                *n = (code % base) as i64 - unit;
                code /= base;
            }
            let sq: i64 = nums.iter().map(|x| x * x).sum();
            if sq != unit * unit {
                return None;
            }
            let g = CoeffTensor::new(scenario.clone(), nums).ok()?;
            g.is_admissible().then(|| g.numerators().to_vec())
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let _ = lattice_start;

    // Route 2: composition of the two-party delta families.
    let rem = [3usize];
    let chars = characters(&rem);
    let meter = Meter::new(Budget::unlimited());
    let slices = family_slices(&DeltaFamily::all_two_party(), &chars, unit);
    let composed: HashSet<Vec<i64>> = combine(&slices, 3, (1u64 << chars.len()) - 1, &meter)
        .into_iter()
        .collect();

    let mut both = lattice.clone();
    both.extend(composed.iter().cloned());
    let (classes, member, _) = partition(&settings, &both);
    let lattice_classes = class_ids(&member, &lattice);
    let composed_classes = class_ids(&member, &composed);
    let mut unclassified = Vec::new();
    let records = build_records(
        &scenario,
        &classes,
        |id| provenance(lattice_classes.contains(&id), composed_classes.contains(&id)),
        certify,
        &mut unclassified,
    );
    Catalog {
        scenario,
        complete: true,
        strategies: vec![
            StrategyReport {
                name: "lattice".into(),
                tensors: lattice.len(),
                classes: lattice_classes.len(),
                nodes: total,
                complete: true,
            },
            StrategyReport {
                name: "composition".into(),
                tensors: composed.len(),
                classes: composed_classes.len(),
                nodes: meter.nodes(),
                complete: true,
            },
        ],
        strategies_agree: lattice == composed,
        unclassified_deltas: unclassified,
        records,
    }
}

/// 3x3x3 enumeration by both routes, merged into one catalog.
pub fn enumerate_three_party(budget: Budget, certify: bool) -> Catalog {
    let scenario = Scenario::three_by_three_by_three();
    let settings = scenario.settings().to_vec();
    let unit = 1i64 << scenario.denom_exp();
    let rem = [3usize, 3];
    let chars = characters(&rem);
    let full = u64::MAX;

    // Route (i): composition from the family list.
    let comp_meter = Meter::new(budget);
    let fam = family_slices(&DeltaFamily::all_three_party(), &chars, unit);
    let composed: HashSet<Vec<i64>> = combine(&fam, 3, full, &comp_meter).into_iter().collect();
    let comp_complete = !comp_meter.exhausted();

    // Route (ii): lattice search, independent of the family list.
    let dfs_meter = Meter::new(budget);
    let lat = lattice_slices(&rem, unit, unit * unit, &chars, &dfs_meter);
    let searched: HashSet<Vec<i64>> = if dfs_meter.exhausted() {
        HashSet::new()
    } else {
        lattice_search(&lat, 3, full, unit * unit, unit, &dfs_meter)
            .into_iter()
            .collect()
    };
    let dfs_complete = !dfs_meter.exhausted();

    let mut union: HashSet<Vec<i64>> = composed.clone();
    union.extend(searched.iter().cloned());
    // Candidates are admissible by construction; keep the check explicit.
    union.retain(|t| {
        CoeffTensor::new(scenario.clone(), t.clone()).is_ok_and(|g| g.is_admissible())
    });

    let (classes, member, closed) = partition(&settings, &union);
    let comp_classes = class_ids(&member, &composed);
    let dfs_classes = class_ids(&member, &searched);
    let mut unclassified = Vec::new();
    let records = build_records(
        &scenario,
        &classes,
        |id| provenance(dfs_classes.contains(&id), comp_classes.contains(&id)),
        certify,
        &mut unclassified,
    );
    Catalog {
        scenario,
        complete: comp_complete && dfs_complete,
        strategies: vec![
            StrategyReport {
                name: "lattice".into(),
                tensors: searched.len(),
                classes: dfs_classes.len(),
                nodes: dfs_meter.nodes(),
                complete: dfs_complete,
            },
            StrategyReport {
                name: "composition".into(),
                tensors: composed.len(),
                classes: comp_classes.len(),
                nodes: comp_meter.nodes(),
                complete: comp_complete,
            },
        ],
        strategies_agree: comp_complete && dfs_complete && closed && composed == searched,
        unclassified_deltas: unclassified,
        records,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_shape() {
        let c = characters(&[3, 3]);
        assert_eq!(c.len(), 64);
        assert_eq!(c[0], vec![1; 9]);
        // b0 = −1 flips the first row.
        assert_eq!(&c[1][..3], &[-1, -1, -1]);
        assert_eq!(&c[1][3..], &[1; 6]);
    }

    #[test]
    fn two_party_lattice_slices_match_families() {
        let chars = characters(&[3]);
        let meter = Meter::new(Budget::unlimited());
        let lat: BTreeSet<Vec<i64>> = lattice_slices(&[3], 2, 4, &chars, &meter)
            .into_iter()
            .map(|s| s.coeffs)
            .collect();
        let fam: BTreeSet<Vec<i64>> = family_slices(&DeltaFamily::all_two_party(), &chars, 2)
            .into_iter()
            .map(|s| s.coeffs)
            .collect();
        assert_eq!(lat, fam);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let cat = enumerate_three_party(Budget::nodes(1000), false);
        assert!(!cat.complete);
        assert!(!cat.strategies_agree);
    }
}
