//! Local relabelings: setting permutations, per-setting sign flips, party
//! permutations among parties with equal setting counts, and a global sign.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{BellError, Result};
use crate::tensor::CoeffTensor;

/// One element of the local symmetry group.
///
/// Input variable `(p, s)` is sent to `(party_perm[p], setting_perms[p][s])`
/// with sign `flips[p][s]`; the whole tensor is then multiplied by
/// `global_sign`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalSymmetry {
    pub party_perm: Vec<usize>,
    pub setting_perms: Vec<Vec<usize>>,
    pub flips: Vec<Vec<i8>>,
    pub global_sign: i8,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl LocalSymmetry {
    pub fn identity(settings: &[usize]) -> Self {
        Self {
            party_perm: (0..settings.len()).collect(),
            setting_perms: settings.iter().map(|&n| (0..n).collect()).collect(),
            flips: settings.iter().map(|&n| vec![1; n]).collect(),
            global_sign: 1,
        }
    }

    /// Flips the sign of one setting.
    pub fn flip(settings: &[usize], party: usize, setting: usize) -> Self {
        let mut t = Self::identity(settings);
        t.flips[party][setting] = -1;
        t
    }

    /// Swaps two settings of one party.
    pub fn swap_settings(settings: &[usize], party: usize, s: usize, r: usize) -> Self {
        let mut t = Self::identity(settings);
        t.setting_perms[party].swap(s, r);
        t
    }

    /// Swaps two parties (which must have equal setting counts).
    pub fn swap_parties(settings: &[usize], p: usize, q: usize) -> Self {
        let mut t = Self::identity(settings);
        t.party_perm.swap(p, q);
        t
    }

    pub fn negation(settings: &[usize]) -> Self {
        let mut t = Self::identity(settings);
        t.global_sign = -1;
        t
    }

    /// Checks shapes and that party permutations respect setting counts.
    pub fn validate(&self, settings: &[usize]) -> Result<()> {
        let n = settings.len();
        if self.party_perm.len() != n
            || self.setting_perms.len() != n
            || self.flips.len() != n
            || !is_permutation(&self.party_perm)
        {
            return Err(BellError::InvalidSymmetry(format!(
                "party permutation {:?} does not fit {n} parties",
                self.party_perm
            )));
        }
        for p in 0..n {
            if settings[self.party_perm[p]] != settings[p] {
                return Err(BellError::InvalidSymmetry(format!(
                    "party {p} ({} settings) cannot move to party {} ({} settings)",
                    settings[p], self.party_perm[p], settings[self.party_perm[p]]
                )));
            }
            if self.setting_perms[p].len() != settings[p] || !is_permutation(&self.setting_perms[p])
            {
                return Err(BellError::InvalidSymmetry(format!(
                    "setting permutation {:?} of party {p}",
                    self.setting_perms[p]
                )));
            }
            if self.flips[p].len() != settings[p] || self.flips[p].iter().any(|f| f.abs() != 1) {
                return Err(BellError::InvalidSymmetry(format!("flips {:?} of party {p}", self.flips[p])));
            }
        }
        if self.global_sign.abs() != 1 {
            return Err(BellError::InvalidSymmetry("global sign must be ±1".into()));
        }
        Ok(())
    }

    /// Applies `self` after `first`.
    pub fn compose(&self, first: &LocalSymmetry) -> LocalSymmetry {
        let n = first.party_perm.len();
        let mut out = first.clone();
        for p in 0..n {
            let mid = first.party_perm[p];
            out.party_perm[p] = self.party_perm[mid];
            for s in 0..first.setting_perms[p].len() {
                let ms = first.setting_perms[p][s];
                out.setting_perms[p][s] = self.setting_perms[mid][ms];
                out.flips[p][s] = first.flips[p][s] * self.flips[mid][ms];
            }
        }
        out.global_sign = first.global_sign * self.global_sign;
        out
    }

    pub fn inverse(&self) -> LocalSymmetry {
        let mut out = self.clone();
        for p in 0..self.party_perm.len() {
            let q = self.party_perm[p];
            out.party_perm[q] = p;
            out.setting_perms[q] = vec![0; self.setting_perms[p].len()];
            out.flips[q] = vec![1; self.flips[p].len()];
        }
        for p in 0..self.party_perm.len() {
            let q = self.party_perm[p];
            for (s, &t) in self.setting_perms[p].iter().enumerate() {
                out.setting_perms[q][t] = s;
                out.flips[q][t] = self.flips[p][s];
            }
        }
        out
    }

    /// Acts on a raw row-major array of shape `settings`.
    pub fn apply_raw(&self, settings: &[usize], data: &[i64]) -> Vec<i64> {
        let n = settings.len();
        let mut strides = vec![1; n];
        for p in (0..n.saturating_sub(1)).rev() {
            strides[p] = strides[p + 1] * settings[p + 1];
        }
        let mut out = vec![0; data.len()];
        let mut index = vec![0; n];
        for (flat, &v) in data.iter().enumerate() {
            let mut rem = flat;
            for p in (0..n).rev() {
                index[p] = rem % settings[p];
                rem /= settings[p];
            }
            let mut sign = self.global_sign as i64;
            let mut target = 0;
            for p in 0..n {
                let s = index[p];
                sign *= self.flips[p][s] as i64;
                target += self.setting_perms[p][s] * strides[self.party_perm[p]];
            }
            out[target] = sign * v;
        }
        out
    }

    /// A uniformly random element of the full group for `settings`.
    pub fn random<R: Rng + ?Sized>(settings: &[usize], allow_party_perm: bool, rng: &mut R) -> Self {
        let mut t = Self::identity(settings);
        if allow_party_perm {
            // Shuffle within each block of equal setting counts.
            let mut by_count: Vec<Vec<usize>> = Vec::new();
            for p in 0..settings.len() {
                match by_count.iter_mut().find(|b| settings[b[0]] == settings[p]) {
                    Some(b) => b.push(p),
                    None => by_count.push(vec![p]),
                }
            }
            for block in by_count {
                let mut targets = block.clone();
                targets.shuffle(rng);
                for (&p, &q) in block.iter().zip(&targets) {
                    t.party_perm[p] = q;
                }
            }
        }
        for p in 0..settings.len() {
            t.setting_perms[p].shuffle(rng);
            for f in t.flips[p].iter_mut() {
                *f = if rng.random::<bool>() { 1 } else { -1 };
            }
        }
        t.global_sign = if rng.random::<bool>() { 1 } else { -1 };
        t
    }
}

/// Generators of the group: adjacent setting swaps, single flips, adjacent
/// swaps of equal-size parties, and negation.
pub fn generators(settings: &[usize], allow_party_perm: bool) -> Vec<LocalSymmetry> {
    let mut out = Vec::new();
    for (p, &n) in settings.iter().enumerate() {
        for s in 0..n.saturating_sub(1) {
            out.push(LocalSymmetry::swap_settings(settings, p, s, s + 1));
        }
        for s in 0..n {
            out.push(LocalSymmetry::flip(settings, p, s));
        }
    }
    if allow_party_perm {
        for p in 0..settings.len() {
            for q in p + 1..settings.len() {
                if settings[p] == settings[q] {
                    out.push(LocalSymmetry::swap_parties(settings, p, q));
                }
            }
        }
    }
    out.push(LocalSymmetry::negation(settings));
    out
}

/// Order of the full group (every flip pattern counted separately).
pub fn group_order(settings: &[usize], allow_party_perm: bool) -> u64 {
    let fact = |n: usize| (1..=n as u64).product::<u64>();
    let perms: u64 = settings.iter().map(|&n| fact(n) << n).product();
    perms * 2 * party_perm_count(settings, allow_party_perm)
}

/// Order of the group modulo the relabelings that fix every tensor
/// (flipping all settings of a set of parties, compensated by the global sign).
pub fn effective_order(settings: &[usize], allow_party_perm: bool) -> u64 {
    group_order(settings, allow_party_perm) >> settings.len()
}

fn party_perm_count(settings: &[usize], allow: bool) -> u64 {
    if !allow {
        return 1;
    }
    party_perms(settings, true).len() as u64
}

fn party_perms(settings: &[usize], allow: bool) -> Vec<Vec<usize>> {
    let n = settings.len();
    if !allow {
        return vec![(0..n).collect()];
    }
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|i| settings[p[i]] == settings[i]))
        .collect()
}

/// Fixed total order on numerators: by magnitude, negative first.
#[inline]
pub fn order_key(n: i64) -> i64 {
    2 * n.abs() - i64::from(n < 0)
}

/// Lexicographic comparison of two arrays under [`order_key`].
pub fn compare_keys(a: &[i64], b: &[i64]) -> std::cmp::Ordering {
    a.iter().map(|&x| order_key(x)).cmp(b.iter().map(|&x| order_key(x)))
}

/// Orbit minimum of a raw array and the orbit size.
///
/// Sweeps one representative of every group element modulo the trivially
/// acting flips, so the stabilizer count is exact.
pub fn canonical_form(settings: &[usize], data: &[i64], allow_party_perm: bool) -> (Vec<i64>, u64) {
    let n = settings.len();
    let len: usize = settings.iter().product();
    debug_assert_eq!(data.len(), len);
    let mut strides = vec![1; n];
    for p in (0..n.saturating_sub(1)).rev() {
        strides[p] = strides[p + 1] * settings[p + 1];
    }
    let indices: Vec<Vec<usize>> = (0..len)
        .map(|mut flat| {
            let mut idx = vec![0; n];
            for p in (0..n).rev() {
                idx[p] = flat % settings[p];
                flat /= settings[p];
            }
            idx
        })
        .collect();

    let setting_perm_sets: Vec<Vec<Vec<usize>>> = settings
        .iter()
        .map(|&k| (0..k).permutations(k).collect())
        .collect();
    // Flip patterns with the first setting of every party fixed to +1.
    let flip_bits: usize = settings.iter().map(|&k| k - 1).sum();
    let flip_offsets: Vec<usize> = settings
        .iter()
        .scan(0, |acc, &k| {
            let o = *acc;
            *acc += k - 1;
            Some(o)
        })
        .collect();

    let mut best: Option<Vec<i64>> = None;
    let mut stabilizer = 0u64;
    let mut candidate = vec![0i64; len];
    let mut source = vec![0usize; len];
    let mut parity_masks = vec![0u64; len];

    for pperm in party_perms(settings, allow_party_perm) {
        for sperms in setting_perm_sets.iter().multi_cartesian_product() {
            // source[target] = flat input index landing on `target`, with the
            // flip bits it picks up.
            for (flat, idx) in indices.iter().enumerate() {
                let mut target = 0;
                let mut mask = 0u64;
                for p in 0..n {
                    target += sperms[p][idx[p]] * strides[pperm[p]];
                    if idx[p] > 0 {
                        mask |= 1 << (flip_offsets[p] + idx[p] - 1);
                    }
                }
                source[target] = flat;
                parity_masks[target] = mask;
            }
            for flips in 0..1u64 << flip_bits {
                for global in [1i64, -1] {
                    let mut order = std::cmp::Ordering::Equal;
                    let mut same_as_input = true;
                    for t in 0..len {
                        let sign = if (flips & parity_masks[t]).count_ones() % 2 == 0 {
                            global
                        } else {
                            -global
                        };
                        let v = sign * data[source[t]];
                        candidate[t] = v;
                        same_as_input &= v == data[t];
                        if order == std::cmp::Ordering::Equal {
                            if let Some(b) = &best {
                                order = order_key(v).cmp(&order_key(b[t]));
                                if order == std::cmp::Ordering::Greater && !same_as_input {
                                    break;
                                }
                            } else {
                                order = std::cmp::Ordering::Less;
                            }
                        }
                    }
                    if same_as_input && candidate.as_slice() == data {
                        stabilizer += 1;
                    }
                    if order == std::cmp::Ordering::Less {
                        best = Some(candidate.clone());
                    }
                }
            }
        }
    }
    let order = effective_order(settings, allow_party_perm);
    (best.expect("group is nonempty"), order / stabilizer)
}

impl CoeffTensor {
    /// Acts with a local symmetry.
    pub fn apply_symmetry(&self, t: &LocalSymmetry) -> Result<CoeffTensor> {
        let settings = self.scenario().settings();
        t.validate(settings)?;
        Ok(CoeffTensor::from_parts_unchecked(
            self.scenario().clone(),
            t.apply_raw(settings, self.numerators()),
        ))
    }

    /// Orbit minimum under the full group (party permutations included) and
    /// the orbit size.
    pub fn canonicalize(&self) -> (CoeffTensor, u64) {
        let (data, orbit) = canonical_form(self.scenario().settings(), self.numerators(), true);
        (
            CoeffTensor::from_parts_unchecked(self.scenario().clone(), data),
            orbit,
        )
    }
}

/// Explicit orbit by closure under the generators (for cross-checks).
pub fn orbit_bfs(settings: &[usize], data: &[i64], allow_party_perm: bool) -> Vec<Vec<i64>> {
    let gens = generators(settings, allow_party_perm);
    let mut seen = std::collections::HashSet::new();
    seen.insert(data.to_vec());
    let mut stack = vec![data.to_vec()];
    while let Some(u) = stack.pop() {
        for g in &gens {
            let v = g.apply_raw(settings, &u);
            if seen.insert(v.clone()) {
                stack.push(v);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| compare_keys(a, b));
    out
}
