//! Partial symmetric Boolean functions given by their value on each Hamming
//! weight, and the sampling algorithm that decides them.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::trial_rng;

/// Sample-count constant for weight estimation.
pub const HAMMING_CONSTANT: f64 = 27.0;
/// Default scale in `T = ⌈C_T γ²⌉`.
pub const DEFAULT_SCALE: f64 = 9.0;

/// `f(k)` for the weights where `f` is defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingSpec {
    n: usize,
    values: BTreeMap<usize, bool>,
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    #[serde(rename = "N")]
    n: usize,
    #[serde(default)]
    ones: Vec<usize>,
    #[serde(default)]
    zeros: Vec<usize>,
}

impl HammingSpec {
    pub fn new(n: usize, ones: &[usize], zeros: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFunction("N must be positive".into()));
        }
        let mut values = BTreeMap::new();
        for (list, v) in [(ones, true), (zeros, false)] {
            for &k in list {
                if k > n {
                    return Err(Error::InvalidFunction(format!("weight {k} exceeds N = {n}")));
                }
                if values.insert(k, v).is_some_and(|old| old != v) {
                    return Err(Error::InvalidFunction(format!("weight {k} is both 0 and 1")));
                }
            }
        }
        if values.is_empty() {
            return Err(Error::InvalidFunction("no defined weights".into()));
        }
        Ok(HammingSpec { n, values })
    }

    /// `f(0) = 0`, `f(k) = 1` for every `k ≥ 1`.
    pub fn or_like(n: usize) -> Result<Self> {
        Self::new(n, &(1..=n).collect::<Vec<_>>(), &[0])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, k: usize) -> Option<bool> {
        self.values.get(&k).copied()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().filter(|e| *e.1).map(|e| *e.0)
    }

    pub fn zeros(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().filter(|e| !*e.1).map(|e| *e.0)
    }

    pub fn is_constant(&self) -> bool {
        self.ones().next().is_none() || self.zeros().next().is_none()
    }

    /// Every defined zero lies on one side of every defined one.
    pub fn is_threshold(&self) -> bool {
        let (z_lo, z_hi) = (self.zeros().min(), self.zeros().max());
        let (o_lo, o_hi) = (self.ones().min(), self.ones().max());
        match (z_lo, z_hi, o_lo, o_hi) {
            (Some(zl), Some(zh), Some(ol), Some(oh)) => zh < ol || oh < zl,
            _ => true,
        }
    }

    pub fn transformed(&self, o: Orientation) -> HammingSpec {
        let values = self
            .values
            .iter()
            .map(|(&k, &v)| {
                let k = if o.reflects() { self.n - k } else { k };
                (k, v ^ o.complements())
            })
            .collect();
        HammingSpec { n: self.n, values }
    }
}

impl Serialize for HammingSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecFile { n: self.n, ones: self.ones().collect(), zeros: self.zeros().collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HammingSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = SpecFile::deserialize(d)?;
        HammingSpec::new(f.n, &f.ones, &f.zeros).map_err(serde::de::Error::custom)
    }
}

/// The four symmetries `f ↦ 1 − f` and `f(k) ↦ f(N − k)`, in tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Identity,
    Complement,
    Reflect,
    Both,
}

impl Orientation {
    pub const ALL: [Orientation; 4] = [Orientation::Identity, Orientation::Complement, Orientation::Reflect, Orientation::Both];

    pub fn complements(self) -> bool {
        matches!(self, Orientation::Complement | Orientation::Both)
    }

    pub fn reflects(self) -> bool {
        matches!(self, Orientation::Reflect | Orientation::Both)
    }

    pub fn compose(self, other: Orientation) -> Orientation {
        let c = self.complements() ^ other.complements();
        let r = self.reflects() ^ other.reflects();
        match (c, r) {
            (false, false) => Orientation::Identity,
            (true, false) => Orientation::Complement,
            (false, true) => Orientation::Reflect,
            (true, true) => Orientation::Both,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gamma {
    pub gamma: f64,
    pub orientation: Orientation,
    /// `(a, b)` in the chosen orientation: `f(a) = 0`, `f(b) = 1`, `a < b`, `a ≤ N/2`.
    pub pair: (usize, usize),
    pub normalized: HammingSpec,
}

/// `max √(bN)/(b − a)` over admissible pairs of one orientation.
fn oriented_gamma(spec: &HammingSpec) -> Option<(f64, (usize, usize))> {
    let n = spec.n as f64;
    let mut best: Option<(f64, (usize, usize))> = None;
    for a in spec.zeros().filter(|&a| 2 * a <= spec.n) {
        for b in spec.ones().filter(|&b| b > a) {
            let g = (b as f64 * n).sqrt() / (b - a) as f64;
            if best.is_none_or(|(bg, _)| g > bg) {
                best = Some((g, (a, b)));
            }
        }
    }
    best
}

pub fn gamma(spec: &HammingSpec) -> Result<Gamma> {
    if spec.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let mut best: Option<Gamma> = None;
    for o in Orientation::ALL {
        let t = spec.transformed(o);
        if let Some((g, pair)) = oriented_gamma(&t) {
            if best.as_ref().is_none_or(|b| g > b.gamma) {
                best = Some(Gamma { gamma: g, orientation: o, pair, normalized: t });
            }
        }
    }
    Ok(best.expect("a non-constant spec has an admissible pair in some orientation"))
}

/// `√((N − a) b)/(b − a)`.
pub fn weight_lower_bound(n: usize, a: usize, b: usize) -> Result<f64> {
    if a >= b || b > n || 2 * a > n {
        return Err(Error::InvalidParameter(format!("need a < b ≤ N and a ≤ N/2, got a={a}, b={b}, N={n}")));
    }
    Ok((((n - a) * b) as f64).sqrt() / (b - a) as f64)
}

fn check_bits(bits: &[u32]) -> Result<()> {
    if bits.is_empty() || bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidWord(format!("expected a non-empty bit string, got {bits:?}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HammingEstimate {
    pub samples: usize,
    /// Estimate of `|X|/N`.
    pub estimate: f64,
}

pub fn hamming_sample_count(epsilon: f64, beta_hint: f64) -> usize {
    (HAMMING_CONSTANT * beta_hint / (epsilon * epsilon)).ceil() as usize
}

pub fn hamming_estimate<R: Rng + ?Sized>(bits: &[u32], epsilon: f64, beta_hint: f64, rng: &mut R) -> Result<HammingEstimate> {
    check_bits(bits)?;
    if !(epsilon > 0.0 && epsilon < beta_hint && beta_hint <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < ε < β ≤ 1, got ε={epsilon}, β={beta_hint}")));
    }
    let samples = hamming_sample_count(epsilon, beta_hint);
    let ones: usize = (0..samples).map(|_| bits[rng.random_range(0..bits.len())] as usize).sum();
    Ok(HammingEstimate { samples, estimate: ones as f64 / samples as f64 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixDecision {
    pub output: bool,
    pub samples: usize,
    /// Scaled weight estimate in the normalized orientation.
    pub k: f64,
    pub orientation: Orientation,
}

pub fn appendix_sample_count(gamma: f64, scale: f64) -> usize {
    (scale * gamma * gamma).ceil() as usize
}

/// Samples `⌈C_T γ²⌉` bits, estimates the weight, and accepts when some
/// weight `b` with `f(b) = 1` lies within `√(bN)/(3γ)` of the estimate.
/// Works in the normalized orientation and maps the answer back.
pub fn appendix_decide<R: Rng + ?Sized>(spec: &HammingSpec, bits: &[u32], scale: f64, rng: &mut R) -> Result<AppendixDecision> {
    check_bits(bits)?;
    if bits.len() != spec.n {
        return Err(Error::InvalidWord(format!("expected {} bits, got {}", spec.n, bits.len())));
    }
    if !(scale > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {scale}")));
    }
    let g = gamma(spec)?;
    plan_decide(&g, bits, scale, rng)
}

fn plan_decide<R: Rng + ?Sized>(g: &Gamma, bits: &[u32], scale: f64, rng: &mut R) -> Result<AppendixDecision> {
    let n = g.normalized.n;
    let samples = appendix_sample_count(g.gamma, scale);
    let flip = g.orientation.reflects() as u32;
    let ones: usize = (0..samples).map(|_| (bits[rng.random_range(0..n)] ^ flip) as usize).sum();
    let k = n as f64 * ones as f64 / samples as f64;
    let accept = g.normalized.ones().any(|b| (k - b as f64).abs() <= (b as f64 * n as f64).sqrt() / (3.0 * g.gamma));
    Ok(AppendixDecision { output: accept ^ g.orientation.complements(), samples, k, orientation: g.orientation })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecideTrial {
    pub trial: u64,
    pub weight: usize,
    pub expected: bool,
    pub output: bool,
}

/// Runs `trials` decisions on `bits`, each with its own seeded stream.
pub fn decide_experiment(spec: &HammingSpec, bits: &[u32], scale: f64, trials: u64, seed: u64) -> Result<Vec<DecideTrial>> {
    check_bits(bits)?;
    if bits.len() != spec.n {
        return Err(Error::InvalidWord(format!("expected {} bits, got {}", spec.n, bits.len())));
    }
    let weight = bits.iter().filter(|&&b| b == 1).count();
    let expected = spec
        .value(weight)
        .ok_or_else(|| Error::PromiseViolation(format!("f is undefined at weight {weight}")))?;
    let g = gamma(spec)?;
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let d = plan_decide(&g, bits, scale, &mut rng)?;
            Ok(DecideTrial { trial, weight, expected, output: d.output })
        })
        .collect()
}

/// Samples used by the decision procedure over `weight_lower_bound²` at the
/// achieving pair.
pub fn query_ratio(spec: &HammingSpec, scale: f64) -> Result<f64> {
    let g = gamma(spec)?;
    let (a, b) = g.pair;
    let lb = weight_lower_bound(spec.n, a, b)?;
    Ok(appendix_sample_count(g.gamma, scale) as f64 / (lb * lb))
}

/// A word of length `n` with its first `weight` bits set.
pub fn word_of_weight(n: usize, weight: usize) -> Vec<u32> {
    (0..n).map(|i| (i < weight) as u32).collect()
}
