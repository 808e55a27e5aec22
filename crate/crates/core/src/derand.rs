//! Classical simulation of a query algorithm's acceptance polynomial by
//! repeatedly querying its most influential variable, plus rounding,
//! conditional-expectation juntas, and an influence probe.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::BoundedPolynomial;
use crate::qsim::VALUE_TOL;

pub const DEFAULT_EXPONENT: u32 = 3;
pub const DEFAULT_PROBE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    pub epsilon: f64,
    pub delta: f64,
    /// `k` in the influence threshold `(εδ/T)^k`.
    pub exponent: u32,
    /// `None` means `N`.
    pub max_rounds: Option<usize>,
    /// Stop as soon as no variable clears the influence threshold.
    pub abort_on_shortfall: bool,
}

impl SimulationParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        Self::with_options(epsilon, delta, DEFAULT_EXPONENT, None, false)
    }

    pub fn with_options(
        epsilon: f64,
        delta: f64,
        exponent: u32,
        max_rounds: Option<usize>,
        abort_on_shortfall: bool,
    ) -> Result<Self> {
        for (name, v) in [("epsilon", epsilon), ("delta", delta)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        if exponent == 0 {
            return Err(Error::InvalidParameter("threshold exponent must be positive".into()));
        }
        if max_rounds == Some(0) {
            return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
        }
        Ok(SimulationParams { epsilon, delta, exponent, max_rounds, abort_on_shortfall })
    }

    /// `εδ`, the variance level at which the simulation stops.
    pub fn variance_threshold(&self) -> f64 {
        self.epsilon * self.delta
    }

    /// `(εδ/T)^k`, with `T = 0` treated as 1.
    pub fn influence_threshold(&self, t: usize) -> f64 {
        (self.variance_threshold() / t.max(1) as f64).powi(self.exponent as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HaltReason {
    VarianceThreshold,
    RoundCap,
    InfluenceShortfall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Round {
    /// Original (0-based) index of the queried variable.
    pub variable: usize,
    pub bit: u32,
    pub vr: f64,
    pub max_influence: f64,
    pub above_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictionTrace {
    pub rounds: Vec<Round>,
    /// `p_0, p_1, …`; left empty unless requested.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub polynomials: Vec<BoundedPolynomial>,
    pub estimate: f64,
    pub final_vr: f64,
    pub halted_by: HaltReason,
}

impl RestrictionTrace {
    pub fn queries(&self) -> usize {
        self.rounds.len()
    }

    pub fn queried(&self) -> Vec<(usize, u32)> {
        self.rounds.iter().map(|r| (r.variable, r.bit)).collect()
    }

    pub fn all_rounds_above_threshold(&self) -> bool {
        self.rounds.iter().all(|r| r.above_threshold)
    }
}

/// `SumInf[p_0] / (εδ/T)^k`.
pub fn query_budget(p: &BoundedPolynomial, params: &SimulationParams, t: usize) -> f64 {
    p.sum_influence() / params.influence_threshold(t)
}

fn simulate(p: &BoundedPolynomial, x: usize, params: &SimulationParams, t: usize, keep: bool) -> RestrictionTrace {
    let q = params.influence_threshold(t);
    let cap = params.max_rounds.unwrap_or(p.n());
    let mut remaining: Vec<usize> = (0..p.n()).collect();
    let mut current = p.clone();
    let mut rounds = Vec::new();
    let mut polynomials = Vec::new();
    loop {
        if keep {
            polynomials.push(current.clone());
        }
        let vr = current.variance_l1();
        let halt = if vr <= params.variance_threshold() {
            Some(HaltReason::VarianceThreshold)
        } else if rounds.len() >= cap {
            Some(HaltReason::RoundCap)
        } else {
            None
        };
        if let Some(halted_by) = halt {
            return RestrictionTrace { rounds, polynomials, estimate: current.mean(), final_vr: vr, halted_by };
        }
        let (local, inf) = current.max_influence().expect("positive variance needs a variable");
        let above = inf > q;
        if !above && params.abort_on_shortfall {
            return RestrictionTrace {
                rounds,
                polynomials,
                estimate: current.mean(),
                final_vr: vr,
                halted_by: HaltReason::InfluenceShortfall,
            };
        }
        let variable = remaining.remove(local);
        let bit = (x >> variable & 1) as u32;
        rounds.push(Round { variable, bit, vr, max_influence: inf, above_threshold: above });
        current = current.restrict(local, bit == 1).expect("local index in range");
    }
}

/// Runs the influence-driven simulation on the input `bits`.
pub fn classical_simulate(
    p: &BoundedPolynomial,
    bits: &[u32],
    params: &SimulationParams,
    t: usize,
) -> Result<RestrictionTrace> {
    if bits.len() != p.n() || bits.iter().any(|&b| b > 1) {
        return Err(Error::InvalidWord(format!("expected {} bits, got {bits:?}", p.n())));
    }
    Ok(simulate(p, crate::poly::bits_to_mask(bits), params, t, true))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputOutcome {
    pub input: usize,
    pub queries: usize,
    pub estimate: f64,
    pub value: f64,
    pub halted_by: HaltReason,
    pub all_rounds_above_threshold: bool,
}

impl InputOutcome {
    pub fn error(&self) -> f64 {
        (self.estimate - self.value).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub params: SimulationParams,
    pub t: usize,
    pub outcomes: Vec<InputOutcome>,
    /// Fraction of inputs with `|estimate − p(X)| > ε`.
    pub failure_fraction: f64,
    pub max_queries: usize,
    pub budget: f64,
    pub halted_by: BTreeMap<HaltReason, usize>,
}

impl SimulationSummary {
    pub fn all_variance_halts(&self) -> bool {
        self.halted_by.keys().all(|&h| h == HaltReason::VarianceThreshold)
    }

    /// The query count is within `budget + 1` on every input whose rounds
    /// all cleared the influence threshold.
    pub fn budget_respected(&self) -> bool {
        self.outcomes.iter().filter(|o| o.all_rounds_above_threshold).all(|o| o.queries as f64 <= self.budget + 1.0)
    }
}

/// Runs the simulation on every input of the cube.
pub fn simulate_all(p: &BoundedPolynomial, params: &SimulationParams, t: usize) -> SimulationSummary {
    let outcomes: Vec<InputOutcome> = (0..1usize << p.n())
        .into_par_iter()
        .map(|x| {
            let tr = simulate(p, x, params, t, false);
            InputOutcome {
                input: x,
                queries: tr.queries(),
                estimate: tr.estimate,
                value: p.value(x),
                halted_by: tr.halted_by,
                all_rounds_above_threshold: tr.all_rounds_above_threshold(),
            }
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.error() > params.epsilon).count();
    let mut halted_by = BTreeMap::new();
    for o in &outcomes {
        *halted_by.entry(o.halted_by).or_insert(0) += 1;
    }
    SimulationSummary {
        params: *params,
        t,
        failure_fraction: failures as f64 / outcomes.len() as f64,
        max_queries: outcomes.iter().map(|o| o.queries).max().unwrap_or(0),
        budget: query_budget(p, params, t),
        outcomes,
        halted_by,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundingReport {
    pub defined_inputs: usize,
    pub agreement: f64,
    /// `1 − ε − δ`.
    pub target: f64,
}

impl RoundingReport {
    pub fn meets_target(&self) -> bool {
        self.agreement >= self.target
    }
}

/// Thresholds each simulated estimate at ½ and compares against `f`, given
/// as one optional bit per input mask.
pub fn boolean_round(
    p: &BoundedPolynomial,
    f: &[Option<bool>],
    params: &SimulationParams,
    t: usize,
) -> Result<RoundingReport> {
    if f.len() != p.values().len() {
        return Err(Error::InvalidFunction(format!("table has {} entries, expected {}", f.len(), p.values().len())));
    }
    let summary = simulate_all(p, params, t);
    let defined: Vec<(usize, bool)> = f.iter().enumerate().filter_map(|(x, v)| v.map(|b| (x, b))).collect();
    if defined.is_empty() {
        return Err(Error::InvalidFunction("function is undefined everywhere".into()));
    }
    let agree = defined.iter().filter(|&&(x, b)| (summary.outcomes[x].estimate >= 0.5) == b).count();
    Ok(RoundingReport {
        defined_inputs: defined.len(),
        agreement: agree as f64 / defined.len() as f64,
        target: 1.0 - params.epsilon - params.delta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Junta {
    /// 0-based variables the junta depends on.
    pub subset: Vec<usize>,
    pub polynomial: BoundedPolynomial,
    /// `E[(p̃ − p)²]`.
    pub l2_error: f64,
}

fn subset_mask(n: usize, subset: &[usize]) -> Result<usize> {
    subset.iter().try_fold(0usize, |acc, &i| {
        if i >= n {
            Err(Error::InvalidParameter(format!("variable {i} outside {n} variables")))
        } else {
            Ok(acc | 1 << i)
        }
    })
}

/// The `L2`-optimal junta on `subset`: average `p` over the other variables.
pub fn best_junta(p: &BoundedPolynomial, subset: &[usize]) -> Result<Junta> {
    let mask = subset_mask(p.n(), subset)?;
    let polynomial = p.average_outside(mask);
    let l2_error = polynomial.l2_distance_sq(p);
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    Ok(Junta { subset, polynomial, l2_error })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Exhaustive search for the best `k`-junta; ties go to the
/// lexicographically first subset.
pub fn junta_search(p: &BoundedPolynomial, k: usize, budget: u128) -> Result<Junta> {
    let n = p.n();
    if k > n {
        return Err(Error::InvalidParameter(format!("junta size {k} exceeds {n} variables")));
    }
    let needed = binomial(n, k);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let masks: Vec<usize> = (0..1usize << n).filter(|m| m.count_ones() as usize == k).collect();
    let best = masks
        .par_iter()
        .map(|&m| (m, p.average_outside(m).l2_distance_sq(p)))
        .reduce_with(|a, b| {
            let a_first = (0..n).filter(|i| a.0 >> i & 1 == 1).lt((0..n).filter(|i| b.0 >> i & 1 == 1));
            if b.1 < a.1 || (b.1 == a.1 && !a_first) {
                b
            } else {
                a
            }
        })
        .expect("at least one subset");
    let subset: Vec<usize> = (0..n).filter(|i| best.0 >> i & 1 == 1).collect();
    best_junta(p, &subset)
}

pub fn markov_check(junta: &Junta, p: &BoundedPolynomial, alpha: f64, delta: f64) -> Result<MarkovOutcome> {
    if !(alpha > 0.0) || !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("need α > 0 and δ in (0, 1], got α={alpha}, δ={delta}")));
    }
    let total = p.values().len();
    let bad = p.values().iter().zip(junta.polynomial.values()).filter(|(a, b)| (*a - *b).abs() > alpha).count();
    Ok(MarkovOutcome {
        l2_error: junta.l2_error,
        condition_holds: junta.l2_error <= alpha * alpha * delta * delta,
        bad_fraction: bad as f64 / total as f64,
        alpha,
        delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovOutcome {
    pub l2_error: f64,
    pub condition_holds: bool,
    pub bad_fraction: f64,
    pub alpha: f64,
    pub delta: f64,
}

impl MarkovOutcome {
    /// If the error condition holds, fewer than a `δ` fraction of inputs
    /// deviate by more than `α`.
    pub fn passes(&self) -> bool {
        !self.condition_holds || self.bad_fraction < self.delta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub degree: usize,
    pub max_influence: f64,
    pub argmax: Option<usize>,
    pub vr: f64,
    /// `max Inf / (Vr/d)^k` for `k = 1, 2, 3`; absent when vacuous.
    pub ratios: Option<[f64; 3]>,
    pub flagged: bool,
}

impl ProbeReport {
    pub fn vacuous(&self) -> bool {
        self.ratios.is_none()
    }
}

/// Compares the largest influence with powers of `Vr/d`. Reports, never
/// asserts; `flagged` marks ratios below `floor` for a closer look.
pub fn conjecture_probe(p: &BoundedPolynomial, degree: usize, floor: f64) -> Result<ProbeReport> {
    if let Some((x, &v)) = p.values().iter().enumerate().find(|(_, v)| !(-VALUE_TOL..=1.0 + VALUE_TOL).contains(*v)) {
        return Err(Error::OutOfRange { vertex: x, value: v });
    }
    let vr = p.variance_l1();
    let (argmax, max_influence) = match p.max_influence() {
        Some((i, v)) => (Some(i), v),
        None => (None, 0.0),
    };
    let ratios = if vr <= 0.0 || degree == 0 {
        None
    } else {
        let base = vr / degree as f64;
        Some([1, 2, 3].map(|k| max_influence / base.powi(k)))
    };
    let flagged = ratios.is_some_and(|r| r.iter().any(|&x| x < floor));
    Ok(ProbeReport { degree, max_influence, argmax, vr, ratios, flagged })
}

/// Random coefficients on monomials of size `≤ degree`, then rescaled
/// affinely onto `[0, 1]`.
pub fn random_bounded_polynomial<R: Rng + ?Sized>(n: usize, degree: usize, rng: &mut R) -> Result<BoundedPolynomial> {
    let coeffs: Vec<f64> = (0..1usize << n)
        .map(|s| if s.count_ones() as usize <= degree { rng.random_range(-1.0..1.0) } else { 0.0 })
        .collect();
    let raw = BoundedPolynomial::from_coefficients(n, coeffs)?;
    let (lo, hi) = (raw.min_value(), raw.max_value());
    let span = if hi > lo { hi - lo } else { 1.0 };
    BoundedPolynomial::from_values(n, raw.values().iter().map(|v| ((v - lo) / span).clamp(0.0, 1.0)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{deutsch_circuit, QueryCircuit};
    use crate::rng::trial_rng;

    fn xor2() -> BoundedPolynomial {
        deutsch_circuit().extract_polynomial().unwrap()
    }

    fn params(e: f64, d: f64) -> SimulationParams {
        SimulationParams::new(e, d).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(SimulationParams::new(0.0, 0.5).is_err());
        assert!(SimulationParams::new(0.5, 1.0).is_err());
        assert!(SimulationParams::with_options(0.2, 0.2, 0, None, false).is_err());
        assert!(SimulationParams::with_options(0.2, 0.2, 3, Some(0), false).is_err());
        let p = params(0.2, 0.2);
        assert!((p.influence_threshold(2) - 0.02f64.powi(3)).abs() < 1e-18);
        assert_eq!(p.influence_threshold(0), p.influence_threshold(1));
    }

    #[test]
    fn constant_needs_no_queries() {
        let p = BoundedPolynomial::constant(3, 0.7).unwrap();
        let tr = classical_simulate(&p, &[1, 0, 1], &params(0.2, 0.2), 2).unwrap();
        assert_eq!(tr.queries(), 0);
        assert_eq!(tr.halted_by, HaltReason::VarianceThreshold);
        assert!((tr.estimate - 0.7).abs() < 1e-12);
    }

    #[test]
    fn xor_is_simulated_exactly() {
        let p = xor2();
        let tr = classical_simulate(&p, &[1, 0], &params(0.2, 0.2), 1).unwrap();
        assert_eq!(tr.queried(), vec![(0, 1), (1, 0)]);
        assert!((tr.rounds[0].vr - 0.5).abs() < 1e-12);
        assert!((tr.estimate - 1.0).abs() < 1e-12);
        assert_eq!(tr.polynomials.len(), 3);
        let all = simulate_all(&p, &params(0.2, 0.2), 1);
        assert_eq!(all.failure_fraction, 0.0);
        assert!(all.all_variance_halts() && all.budget_respected());
    }

    #[test]
    fn trace_polynomials_are_successive_restrictions() {
        let mut rng = trial_rng(5, 0);
        let p = QueryCircuit::random(5, 2, 1, &mut rng).extract_polynomial().unwrap();
        let tr = classical_simulate(&p, &[1, 1, 0, 1, 0], &params(0.05, 0.05), 2).unwrap();
        let mut remaining: Vec<usize> = (0..5).collect();
        for (k, r) in tr.rounds.iter().enumerate() {
            let local = remaining.iter().position(|&v| v == r.variable).unwrap();
            remaining.remove(local);
            let expect = tr.polynomials[k].restrict(local, r.bit == 1).unwrap();
            assert_eq!(expect.values(), tr.polynomials[k + 1].values());
        }
    }

    #[test]
    fn round_cap_and_shortfall_are_reported() {
        let p = xor2();
        let capped = SimulationParams::with_options(0.2, 0.2, 3, Some(1), false).unwrap();
        let tr = classical_simulate(&p, &[0, 1], &capped, 1).unwrap();
        assert_eq!((tr.queries(), tr.halted_by), (1, HaltReason::RoundCap));
        // mean of four bits: each influence is 1/4, below εδ = 0.27, while
        // Vr = 35/128 stays above it
        let q = BoundedPolynomial::from_terms(4, &[(&[0], 0.25), (&[1], 0.25), (&[2], 0.25), (&[3], 0.25)]).unwrap();
        assert!((q.variance_l1() - 35.0 / 128.0).abs() < 1e-12);
        let strict = SimulationParams::with_options(0.9, 0.3, 1, None, true).unwrap();
        let tr = classical_simulate(&q, &[1, 1, 0, 0], &strict, 1).unwrap();
        assert_eq!((tr.queries(), tr.halted_by), (0, HaltReason::InfluenceShortfall));
        let lenient = SimulationParams::with_options(0.9, 0.3, 1, None, false).unwrap();
        let tr = classical_simulate(&q, &[1, 1, 0, 0], &lenient, 1).unwrap();
        assert!(tr.rounds.iter().all(|r| !r.above_threshold));
        assert_eq!(tr.halted_by, HaltReason::VarianceThreshold);
    }

    #[test]
    fn random_circuits_meet_the_markov_guarantee() {
        let pr = params(0.2, 0.2);
        for trial in 0..30 {
            let mut rng = trial_rng(6, trial);
            let c = QueryCircuit::random(6, 2, 2, &mut rng);
            let p = c.extract_polynomial().unwrap();
            let s = simulate_all(&p, &pr, 2);
            assert!(s.max_queries <= 6);
            assert!(s.budget_respected());
            if s.all_variance_halts() {
                assert!(s.failure_fraction < pr.delta, "trial {trial}: {}", s.failure_fraction);
            }
        }
    }

    #[test]
    fn rounding_examples() {
        let p = xor2();
        let parity: Vec<Option<bool>> = (0..4usize).map(|x| Some(x.count_ones() % 2 == 1)).collect();
        let r = boolean_round(&p, &parity, &params(0.1, 0.1), 1).unwrap();
        assert_eq!(r.agreement, 1.0);
        assert!(r.meets_target());
        // 10% of inputs flipped from a majority-of-5 indicator
        let n = 5;
        let maj = |x: usize| x.count_ones() >= 3;
        let mut rng = trial_rng(7, 0);
        let truth: Vec<Option<bool>> = (0..1usize << n).map(|x| Some(maj(x))).collect();
        let mut values: Vec<f64> = (0..1usize << n).map(|x| maj(x) as u8 as f64).collect();
        let mut flipped = 0;
        while flipped < 3 {
            let x = rng.random_range(0..values.len());
            if values[x] == maj(x) as u8 as f64 {
                values[x] = 1.0 - values[x];
                flipped += 1;
            }
        }
        let perturbed = BoundedPolynomial::from_values(n, values).unwrap();
        let r = boolean_round(&perturbed, &truth, &params(0.1, 0.1), 3).unwrap();
        assert!(r.agreement >= 0.8, "{}", r.agreement);
        assert!(boolean_round(&p, &[None; 4], &params(0.1, 0.1), 1).is_err());
    }

    #[test]
    fn junta_examples() {
        let p = xor2();
        let full = best_junta(&p, &[0, 1]).unwrap();
        assert!(full.l2_error.abs() < 1e-12);
        let empty = best_junta(&p, &[]).unwrap();
        assert!((empty.l2_error - (p.l2_norm_sq() - p.mean().powi(2))).abs() < 1e-12);
        let one = best_junta(&p, &[0]).unwrap();
        assert!(one.polynomial.values().iter().all(|&v| (v - 0.5).abs() < 1e-12));
        assert!((one.l2_error - 0.25).abs() < 1e-12);
        let s = junta_search(&p, 1, 100).unwrap();
        assert_eq!(s.subset, vec![0]);
        assert!((s.l2_error - 0.25).abs() < 1e-12);
        assert!(best_junta(&p, &[2]).is_err());
        assert!(junta_search(&p, 3, 100).is_err());
    }

    #[test]
    fn junta_search_finds_true_dependencies() {
        // depends on variables 1 and 4 only
        let p = BoundedPolynomial::from_terms(6, &[(&[], 0.1), (&[1], 0.3), (&[4], 0.2), (&[1, 4], 0.3)]).unwrap();
        let j = junta_search(&p, 2, 1000).unwrap();
        assert_eq!(j.subset, vec![1, 4]);
        assert!(j.l2_error < 1e-12);
        assert!(matches!(junta_search(&p, 3, 5), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn markov_checks_on_random_circuits() {
        for trial in 0..20 {
            let mut rng = trial_rng(8, trial);
            let p = QueryCircuit::random(6, 1, 1, &mut rng).extract_polynomial().unwrap();
            let j = junta_search(&p, 4, 1000).unwrap();
            for (alpha, delta) in [(0.1, 0.1), (0.3, 0.3), (0.5, 0.5)] {
                assert!(markov_check(&j, &p, alpha, delta).unwrap().passes());
            }
        }
    }

    #[test]
    fn probe_examples() {
        let x1 = BoundedPolynomial::from_terms(2, &[(&[0], 1.0)]).unwrap();
        let r = conjecture_probe(&x1, 1, DEFAULT_PROBE_FLOOR).unwrap();
        assert!((r.max_influence - 1.0).abs() < 1e-12 && (r.vr - 0.5).abs() < 1e-12);
        assert!(r.ratios.unwrap().iter().all(|&x| x >= 1.0));
        assert!(!r.flagged);
        let c = BoundedPolynomial::constant(3, 0.4).unwrap();
        assert!(conjecture_probe(&c, 0, DEFAULT_PROBE_FLOOR).unwrap().vacuous());
        let over = BoundedPolynomial::from_terms(1, &[(&[0], 2.0)]).unwrap();
        assert!(matches!(conjecture_probe(&over, 1, DEFAULT_PROBE_FLOOR), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn random_bounded_polynomials_are_bounded_with_the_right_degree() {
        let mut rng = trial_rng(9, 0);
        for _ in 0..20 {
            let p = random_bounded_polynomial(6, 3, &mut rng).unwrap();
            assert!(p.min_value() >= 0.0 && p.max_value() <= 1.0);
            assert!(p.degree(1e-9) <= 3);
            assert!(conjecture_probe(&p, 3, DEFAULT_PROBE_FLOOR).is_ok());
        }
    }
}
