//! Chopping of Young-diagram rows into hybrid type sequences
//! `A_0 = A*, A_1, …, A_L` that converge toward `B*`, plus the per-level
//! bookkeeping used by the hybrid lower-bound argument.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Exponent};
use crate::types::{profile_distance, sort_to_type, RowArray, TypeProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopParams {
    pub n: usize,
    /// Smallest power of two `≥ N`.
    pub p: usize,
    /// `⌈log₂ N⌉`.
    pub levels: usize,
}

impl ChopParams {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        let p = n.next_power_of_two();
        Ok(ChopParams { n, p, levels: p.trailing_zeros() as usize })
    }

    /// `P / 2^ℓ`.
    pub fn chop_size(&self, level: usize) -> usize {
        self.p >> level
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopStep {
    pub level: usize,
    pub chop_size: usize,
    pub rows_chopped: usize,
    /// Aligned row-array distance `½ Σ |a_i^{(ℓ)} − a_i^{(ℓ−1)}|`; equals
    /// `rows_chopped · chop_size`.
    pub distance: usize,
    /// `‖A_ℓ − A_{ℓ−1}‖` between the sorted profiles; at most `distance`.
    pub profile_distance: usize,
    /// Row-array indices chopped at this level, ascending.
    pub chopped_rows: Vec<usize>,
    /// Lengths of the chopped rows before the chop.
    pub chopped_lengths: Vec<usize>,
    /// Fresh slots that received the chopped-off pieces, parallel to `chopped_rows`.
    pub fresh_slots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridSequence {
    pub params: ChopParams,
    pub start: TypeProfile,
    pub baseline: TypeProfile,
    /// `A_0 … A_L`.
    pub profiles: Vec<TypeProfile>,
    /// Row-array after each level, `arrays[0]` the padded start.
    pub arrays: Vec<RowArray>,
    /// One record per level `ℓ = 1..=L`.
    pub steps: Vec<ChopStep>,
}

impl HybridSequence {
    pub fn last(&self) -> &TypeProfile {
        self.profiles.last().expect("sequence holds A_0")
    }

    pub fn total_chops(&self) -> usize {
        self.steps.iter().map(|s| s.rows_chopped).sum()
    }

    /// Structural invariants; returns a description of each violation.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.params.n;
        for (k, arr) in self.arrays.iter().enumerate() {
            if arr.rows().len() != 2 * n || arr.rows().iter().sum::<usize>() != n {
                out.push(format!("array {k} is not a row-array for N={n}"));
            }
        }
        for step in &self.steps {
            let expect = step.rows_chopped * step.chop_size;
            if step.distance != expect {
                out.push(format!("level {}: d = {} ≠ r·P/2^ℓ = {expect}", step.level, step.distance));
            }
            let recomputed = self.arrays[step.level].aligned_distance(&self.arrays[step.level - 1]);
            if recomputed != step.distance {
                out.push(format!("level {}: stored d = {} but arrays differ by {recomputed}", step.level, step.distance));
            }
            if step.profile_distance > step.distance {
                out.push(format!("level {}: profile distance {} exceeds {}", step.level, step.profile_distance, step.distance));
            }
            let mut seen = step.chopped_rows.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != step.chopped_rows.len() {
                out.push(format!("level {}: a row was chopped twice", step.level));
            }
        }
        if self.total_chops() > n.saturating_sub(1) {
            out.push(format!("{} chops exceed N − 1 = {}", self.total_chops(), n - 1));
        }
        out
    }
}

/// Evolves `start` toward the fixed `baseline`, chopping at every level
/// each row with `a_i − b_i ≥ P/2^ℓ` and `a_i > P/2^ℓ`. Rows are scanned in
/// ascending index order; pieces go to the lowest slot with `a_j = b_j = 0`.
pub fn chop_sequence(start: &TypeProfile, baseline: &TypeProfile) -> Result<HybridSequence> {
    let n = start.n();
    if baseline.n() != n {
        return Err(Error::MismatchedN { left: n, right: baseline.n() });
    }
    let params = ChopParams::new(n)?;
    let b = baseline.padded(2 * n);
    let mut current = start.row_array();
    let mut profiles = vec![start.clone()];
    let mut arrays = vec![current.clone()];
    let mut steps = Vec::with_capacity(params.levels);

    for level in 1..=params.levels {
        let size = params.chop_size(level);
        let mut step = ChopStep {
            level,
            chop_size: size,
            rows_chopped: 0,
            distance: 0,
            profile_distance: 0,
            chopped_rows: Vec::new(),
            chopped_lengths: Vec::new(),
            fresh_slots: Vec::new(),
        };
        let candidates: Vec<usize> = {
            let a = current.rows();
            (0..2 * n).filter(|&i| a[i] > size && a[i] >= b[i] + size).collect()
        };
        for i in candidates {
            let rows = current.rows_mut();
            step.chopped_lengths.push(rows[i]);
            rows[i] -= size;
            let j = (0..2 * n)
                .find(|&j| rows[j] == 0 && b[j] == 0)
                .ok_or(Error::NoFreshSlot { level })?;
            rows[j] = size;
            step.chopped_rows.push(i);
            step.fresh_slots.push(j);
        }
        step.rows_chopped = step.chopped_rows.len();
        step.distance = current.aligned_distance(arrays.last().unwrap());
        let profile = sort_to_type(&current);
        step.profile_distance = profile_distance(&profile, profiles.last().unwrap())?;
        profiles.push(profile);
        arrays.push(current.clone());
        steps.push(step);
    }

    Ok(HybridSequence { params, start: start.clone(), baseline: baseline.clone(), profiles, arrays, steps })
}

/// Both hybrid sequences for a pair, computed concurrently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridPair {
    pub a: HybridSequence,
    pub b: HybridSequence,
    pub final_configuration: TypeProfile,
}

impl HybridPair {
    /// `A_L = B_L = final_configuration`.
    pub fn converged(&self) -> bool {
        self.a.last() == self.b.last() && self.a.last() == &self.final_configuration
    }
}

pub fn chop_pair(astar: &TypeProfile, bstar: &TypeProfile) -> Result<HybridPair> {
    let (a, b) = rayon::join(|| chop_sequence(astar, bstar), || chop_sequence(bstar, astar));
    Ok(HybridPair { a: a?, b: b?, final_configuration: final_configuration(astar, bstar)? })
}

/// `‖A* − B*‖` singleton rows plus one row of length `min{a_i, b_i}` for each
/// `i` with a positive minimum.
pub fn final_configuration(a: &TypeProfile, b: &TypeProfile) -> Result<TypeProfile> {
    let singletons = profile_distance(a, b)?;
    let len = a.len().max(b.len());
    let mut parts: Vec<usize> = (0..len).map(|i| a.part(i).min(b.part(i))).filter(|&m| m > 0).collect();
    parts.extend(std::iter::repeat_n(1, singletons));
    TypeProfile::from_unsorted(parts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChopubLevel {
    pub level: usize,
    pub distance: usize,
    /// `8N / T^c`.
    pub limit: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChopubReport {
    pub t: u64,
    pub c: Exponent,
    /// Levels with `ℓ ≤ log₂ T − 2`; empty when `T < 8`.
    pub levels: Vec<ChopubLevel>,
}

impl ChopubReport {
    pub fn violations(&self) -> usize {
        self.levels.iter().filter(|l| !l.holds).count()
    }
}

/// `ℓ ≤ log₂(T) − 2`, i.e. `2^{ℓ+2} ≤ T`.
pub fn level_is_small(level: usize, t: u64) -> bool {
    level + 2 < 64 && (1u64 << (level + 2)) <= t
}

/// Checks `d_ℓ ≤ 8N/T^c` exactly on every small level.
pub fn chopub_check(seq: &HybridSequence, t: u64, c: Exponent) -> ChopubReport {
    let n = seq.params.n;
    let limit = 8.0 * n as f64 / c.power_of(t);
    let levels = seq
        .steps
        .iter()
        .filter(|s| level_is_small(s.level, t))
        .map(|s| ChopubLevel {
            level: s.level,
            distance: s.distance,
            limit,
            margin: limit - s.distance as f64,
            holds: exact::within(exact::int(s.distance), exact::int(0), exact::int(8 * n), t, c),
        })
        .collect();
    ChopubReport { t, c, levels }
}

/// `β_ℓ = 1/(10ℓ²)` for `ℓ = 1..=L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasSchedule {
    pub betas: Vec<f64>,
}

impl BiasSchedule {
    pub fn new(levels: usize) -> Self {
        BiasSchedule { betas: (1..=levels).map(beta).collect() }
    }

    pub fn total(&self) -> f64 {
        self.betas.iter().sum()
    }
}

pub fn beta(level: usize) -> f64 {
    1.0 / (10.0 * (level * level) as f64)
}

/// `(r / log₂ r)^{1/5}`, taken as `r^{1/5}` when `r ≤ 2`.
pub fn set_equality_factor(r: usize) -> f64 {
    let rf = r as f64;
    if r <= 2 {
        rf.powf(0.2)
    } else {
        (rf / rf.log2()).powf(0.2)
    }
}

/// `2^{ℓ/7} / ℓ^{1/7}`.
pub fn large_level_factor(level: usize) -> f64 {
    let l = level as f64;
    2f64.powf(l / 7.0) / l.powf(1.0 / 7.0)
}

/// `max{√(2^ℓ/r), (r/log₂ r)^{1/5}}`: the better of the two per-level
/// lower bounds when `d ≈ rN/2^ℓ`.
pub fn level_tradeoff(level: usize, r: f64) -> f64 {
    let adversary = (2f64.powi(level as i32) / r).sqrt();
    let set_eq = if r <= 2.0 { r.powf(0.2) } else { (r / r.log2()).powf(0.2) };
    adversary.max(set_eq)
}

/// Where the two branches cross: `r ≈ 2^{5ℓ/7} ℓ^{2/7}`.
pub fn crossover_estimate(level: usize) -> f64 {
    let l = level as f64;
    2f64.powf(5.0 * l / 7.0) * l.powf(2.0 / 7.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub level: usize,
    pub rows_chopped: usize,
    pub distance: usize,
    pub sqrt_n_over_d: f64,
    pub set_equality: f64,
    pub large_level: f64,
    pub sqrt_tc: f64,
    pub beta: f64,
    pub small_level_case: f64,
    pub large_level_case: f64,
    pub level_is_small: bool,
}

/// Raw per-level bound expressions; no hidden constants.
pub fn bound_profile(seq: &HybridSequence, t: u64, c: Exponent) -> Vec<BoundRow> {
    let n = seq.params.n as f64;
    let sqrt_tc = c.power_of(t).sqrt();
    seq.steps
        .iter()
        .filter(|s| s.rows_chopped > 0)
        .map(|s| {
            let l2 = (s.level * s.level) as f64;
            BoundRow {
                level: s.level,
                rows_chopped: s.rows_chopped,
                distance: s.distance,
                sqrt_n_over_d: (n / s.distance as f64).sqrt(),
                set_equality: set_equality_factor(s.rows_chopped),
                large_level: large_level_factor(s.level),
                sqrt_tc,
                beta: beta(s.level),
                small_level_case: sqrt_tc / l2,
                large_level_case: large_level_factor(s.level) / l2,
                level_is_small: level_is_small(s.level, t),
            }
        })
        .collect()
}
