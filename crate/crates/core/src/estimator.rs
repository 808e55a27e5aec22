//! The multiplicity sampler, the type-matching decision procedure built on it,
//! the separation condition that makes the decision procedure correct, and the
//! hard-core pair search.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Exponent, Rational};
use crate::rng::trial_rng;
use crate::types::{multiplicity_counts, InputWord, SymmetricFunction, TypeProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorParams {
    t: u64,
    c: Exponent,
}

impl EstimatorParams {
    pub fn new(t: u64, c: Exponent) -> Result<Self> {
        if t < 2 {
            return Err(Error::InvalidParameter(format!("T must be at least 2, got {t}")));
        }
        Ok(EstimatorParams { t, c })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn c(&self) -> Exponent {
        self.c
    }

    /// `U = ⌈24 · T^{1+c} · ln T⌉`.
    pub fn sample_count(&self) -> usize {
        let t = self.t as f64;
        (24.0 * t.powf(1.0 + self.c.value()) * t.ln()).ceil() as usize
    }
}

/// Raw sample tallies `z_j`; the estimates are `κ̃_j = (N/U) z_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityEstimate {
    n: usize,
    sample_counts: Vec<usize>,
}

impl MultiplicityEstimate {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> usize {
        self.sample_counts.iter().sum()
    }

    pub fn sample_counts(&self) -> &[usize] {
        &self.sample_counts
    }

    pub fn value(&self, j: usize) -> Rational {
        exact::frac(self.n * self.sample_counts[j], self.samples())
    }

    pub fn values(&self) -> Vec<Rational> {
        (0..self.sample_counts.len()).map(|j| self.value(j)).collect()
    }

    /// Estimates sorted descending.
    pub fn sorted_values(&self) -> Vec<Rational> {
        let mut v = self.values();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

pub fn run_sampler<R: Rng + ?Sized>(word: &InputWord, params: &EstimatorParams, rng: &mut R) -> MultiplicityEstimate {
    let n = word.len();
    let mut sample_counts = vec![0usize; word.alphabet() as usize];
    for _ in 0..params.sample_count() {
        let i = rng.random_range(0..n);
        sample_counts[word.entries()[i] as usize - 1] += 1;
    }
    MultiplicityEstimate { n, sample_counts }
}

/// `|x − a| ≤ N/T + a/T^c`: the per-row acceptance band.
fn in_band(x: Rational, a: usize, n: usize, params: &EstimatorParams) -> bool {
    let a_r = exact::int(a);
    exact::within(exact::abs_diff(x, a_r), exact::frac(n, params.t as usize), a_r, params.t, params.c)
}

/// Outcome of checking one estimate against the true multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationCheck {
    /// Some `j` has `|κ̃_j − κ_j| > N/T + κ_j/T^c`.
    pub bad_event: bool,
    /// 1-based symbol with the largest `|κ̃_j − κ_j|` (lowest on ties).
    pub max_deviation_row: usize,
    pub max_deviation: f64,
}

pub fn check_deviation(word: &InputWord, estimate: &MultiplicityEstimate, params: &EstimatorParams) -> DeviationCheck {
    let truth = multiplicity_counts(word);
    let n = word.len();
    let mut bad_event = false;
    let mut best = (0usize, Rational::from_integer(-1));
    for (j, &kappa) in truth.iter().enumerate() {
        let dev = exact::abs_diff(estimate.value(j), exact::int(kappa));
        if dev > best.1 {
            best = (j, dev);
        }
        if !in_band(estimate.value(j), kappa, n, params) {
            bad_event = true;
        }
    }
    DeviationCheck { bad_event, max_deviation_row: best.0 + 1, max_deviation: exact::ratio_to_f64(&best.1) }
}

/// Does the sorted estimate fall within the band of the given type?
pub fn matches_type(sorted: &[Rational], profile: &TypeProfile, params: &EstimatorParams) -> bool {
    let n = profile.n();
    let len = sorted.len().max(profile.len());
    (0..len).all(|i| {
        let x = sorted.get(i).copied().unwrap_or_else(|| exact::int(0));
        in_band(x, profile.part(i), n, params)
    })
}

/// Outputs 1 iff some 1-type of `f` lies within the band of the sorted estimate.
pub fn decide_from_estimate(f: &SymmetricFunction, estimate: &MultiplicityEstimate, params: &EstimatorParams) -> bool {
    let sorted = estimate.sorted_values();
    f.one_types().any(|a| matches_type(&sorted, a, params))
}

pub fn decide<R: Rng + ?Sized>(
    f: &SymmetricFunction,
    word: &InputWord,
    params: &EstimatorParams,
    rng: &mut R,
) -> Result<bool> {
    if f.defined_len() == 0 {
        return Err(Error::InvalidFunction("function has no defined types".into()));
    }
    if word.len() != f.n() {
        return Err(Error::InvalidWord(format!("word length {} ≠ N = {}", word.len(), f.n())));
    }
    let estimate = run_sampler(word, params, rng);
    Ok(decide_from_estimate(f, &estimate, params))
}

fn check_same_n(a: &TypeProfile, b: &TypeProfile) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::MismatchedN { left: a.n(), right: b.n() });
    }
    Ok(a.n())
}

/// Some row has `|a_i − b_i| > 2N/T + (a_i + b_i)/T^c`.
pub fn separation_holds(a: &TypeProfile, b: &TypeProfile, t: u64, c: Exponent) -> Result<bool> {
    let n = check_same_n(a, b)?;
    let len = a.len().max(b.len());
    Ok((0..len).any(|i| {
        let (ai, bi) = (a.part(i), b.part(i));
        exact::exceeds(exact::int(ai.abs_diff(bi)), exact::frac(2 * n, t as usize), exact::int(ai + bi), t, c)
    }))
}

/// Every row has `|a_i − b_i| ≤ 3N/T + (a_i + b_i)/T^c`.
pub fn hard_core_bound_holds(a: &TypeProfile, b: &TypeProfile, t: u64, c: Exponent) -> Result<bool> {
    let n = check_same_n(a, b)?;
    let len = a.len().max(b.len());
    Ok((0..len).all(|i| {
        let (ai, bi) = (a.part(i), b.part(i));
        exact::within(exact::int(ai.abs_diff(bi)), exact::frac(3 * n, t as usize), exact::int(ai + bi), t, c)
    }))
}

/// True when every (1-type, 0-type) pair of `f` is separated at `T`.
pub fn separates_all_pairs(f: &SymmetricFunction, t: u64, c: Exponent) -> Result<bool> {
    for a in f.one_types() {
        for b in f.zero_types() {
            if !separation_holds(a, b, t, c)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest `T ∈ [2, t_max]` at which every pair of `f` is separated.
pub fn min_separating_t(f: &SymmetricFunction, c: Exponent, t_max: u64) -> Result<Option<u64>> {
    for t in 2..=t_max {
        if separates_all_pairs(f, t, c)? {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardCore {
    pub t: u64,
    pub c: Exponent,
    pub one_type: TypeProfile,
    pub zero_type: TypeProfile,
}

/// Scans `T = 3N, 3N−1, …, 2` and stops at the first `T` where some
/// (1-type, 0-type) pair satisfies the hard-core bound.
pub fn find_hard_core(f: &SymmetricFunction, c: Exponent) -> Result<HardCore> {
    if f.one_types().next().is_none() || f.zero_types().next().is_none() {
        return Err(Error::ConstantFunction);
    }
    let t_max = (3 * f.n()).max(2) as u64;
    for t in (2..=t_max).rev() {
        for a in f.one_types() {
            for b in f.zero_types() {
                if hard_core_bound_holds(a, b, t, c)? {
                    return Ok(HardCore { t, c, one_type: a.clone(), zero_type: b.clone() });
                }
            }
        }
    }
    // At T = 2 the bound reads |a_i − b_i| ≤ 3N/2 + …, which every pair meets.
    unreachable!("hard-core bound always holds at T = 2")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingTrial {
    pub trial: u64,
    pub bad_event: bool,
    pub max_deviation_row: usize,
}

/// Independent sampler runs, one RNG stream per trial.
pub fn sampling_experiment(word: &InputWord, params: &EstimatorParams, trials: u64, seed: u64) -> Vec<SamplingTrial> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let est = run_sampler(word, params, &mut rng);
            let check = check_deviation(word, &est, params);
            SamplingTrial { trial, bad_event: check.bad_event, max_deviation_row: check.max_deviation_row }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTrial {
    pub trial: u64,
    pub expected: Option<bool>,
    pub output: bool,
}

/// Runs `decide` on each word of `words` for `trials` seeded trials
/// (word chosen round-robin).
pub fn decision_experiment(
    f: &SymmetricFunction,
    words: &[InputWord],
    params: &EstimatorParams,
    trials: u64,
    seed: u64,
) -> Result<Vec<DecisionTrial>> {
    if words.is_empty() {
        return Err(Error::InvalidParameter("no input words".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let word = &words[(trial as usize) % words.len()];
            let mut rng = trial_rng(seed, trial);
            let output = decide(f, word, params, &mut rng)?;
            Ok(DecisionTrial { trial, expected: f.evaluate(word), output })
        })
        .collect()
}
