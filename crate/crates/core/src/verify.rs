//! The acceptance battery behind `symq verify`. Each check is deterministic
//! given the master seed; failures are report content, never errors.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{
    adversary_bound, chop_bound_sweep, embed_set_equality, enumerable_chop_moves, weight_relation, ChopBoundSweep,
    ChopMove, Labeling, Weighting, DEFAULT_PAIR_BUDGET,
};
use crate::boolean::{self, gamma, HammingSpec, DEFAULT_SCALE};
use crate::chopper::{chop_pair, chopub_check};
use crate::derand::{best_junta, junta_search, markov_check, simulate_all, SimulationParams};
use crate::estimator::{
    decision_experiment, find_hard_core, min_separating_t, sampling_experiment, EstimatorParams,
};
use crate::exact::Exponent;
use crate::poly::BoundedPolynomial;
use crate::qsim::{deutsch_circuit, QueryCircuit};
use crate::rng::trial_rng;
use crate::stats::{wilson_interval, Z95};
use crate::types::{all_equal_vs_balanced, collision_function, random_profile, type_of, InputWord};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const CRITERIA: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Fast,
    Full,
}

/// Every tolerance the battery compares against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub adversary: f64,
    pub degree: f64,
    pub sum_influence: f64,
    pub sensitivity: f64,
    pub range: f64,
    pub deutsch: f64,
    pub junta_slack: f64,
    /// Added to `1/3` for the decision error rate.
    pub decision_slack: f64,
    /// Subtracted from `2/3` for the Hamming-weight success rate.
    pub appendix_slack: f64,
    pub confidence_z: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            adversary: 1e-9,
            degree: 1e-8,
            sum_influence: 1e-6,
            sensitivity: 1e-9,
            range: 1e-9,
            deutsch: 1e-9,
            junta_slack: 1e-12,
            decision_slack: 0.05,
            appendix_slack: 0.05,
            confidence_z: Z95,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: Level,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<u32> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.id).collect()
    }

    /// The report without timings, for reproducibility comparisons.
    pub fn fingerprint(&self) -> Vec<(u32, bool, String)> {
        self.checks.iter().map(|c| (c.id, c.passed, c.detail.clone())).collect()
    }
}

/// Sizes that differ between the two levels.
struct Plan {
    chop_ns: &'static [usize],
    chop_pairs: usize,
    hard_core_max_n: usize,
    sampling_trials: u64,
    decision_trials: u64,
    circuits_per_cell: usize,
    impthm_circuits: usize,
    junta_instances: usize,
    appendix_trials: u64,
    path_weight_context: bool,
}

impl Plan {
    fn for_level(level: Level) -> Plan {
        match level {
            Level::Fast => Plan {
                chop_ns: &[4, 8, 16, 32],
                chop_pairs: 250,
                hard_core_max_n: 32,
                sampling_trials: 500,
                decision_trials: 200,
                circuits_per_cell: 50,
                impthm_circuits: 20,
                junta_instances: 30,
                appendix_trials: 300,
                path_weight_context: false,
            },
            Level::Full => Plan {
                chop_ns: &[4, 8, 16, 32, 64],
                chop_pairs: 1000,
                hard_core_max_n: 64,
                sampling_trials: 2000,
                decision_trials: 500,
                circuits_per_cell: 200,
                impthm_circuits: 60,
                junta_instances: 100,
                appendix_trials: 1000,
                path_weight_context: true,
            },
        }
    }
}

pub fn check_name(id: u32) -> &'static str {
    match id {
        1 => "chopping correctness",
        2 => "small-level chop distances",
        3 => "sampler deviation frequency",
        4 => "type-band decision error",
        5 => "weight-relation adversary identities",
        6 => "chop-relation product bound",
        7 => "set-equality embedding types",
        8 => "random-circuit polynomial properties",
        9 => "Deutsch exactness",
        10 => "influence-driven simulation correctness",
        11 => "junta optimality and Markov step",
        12 => "Hamming-weight decision",
        _ => "unknown",
    }
}

pub fn run_suite(level: Level, seed: u64) -> VerifyReport {
    run_suite_with(level, seed, &Tolerances::default())
}

pub fn run_suite_with(level: Level, seed: u64, tol: &Tolerances) -> VerifyReport {
    let checks = (1..=CRITERIA).map(|id| run_check(id, level, seed, tol)).collect();
    VerifyReport { level, seed, checks }
}

pub fn run_check(id: u32, level: Level, seed: u64, tol: &Tolerances) -> CheckResult {
    let plan = Plan::for_level(level);
    let sub_seed = seed.wrapping_mul(1_000_003).wrapping_add(id as u64);
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => chopping(&plan, sub_seed),
        2 => small_levels(&plan),
        3 => sampling(&plan, sub_seed, tol),
        4 => decision(&plan, sub_seed, tol),
        5 => adversary_identities(tol),
        6 => product_bound(&plan),
        7 => set_equality(),
        8 => circuits(&plan, sub_seed, tol),
        9 => deutsch(tol),
        10 => impthm(&plan, sub_seed),
        11 => juntas(&plan, sub_seed, tol),
        12 => appendix(&plan, sub_seed, tol),
        _ => (false, format!("no criterion {id}")),
    };
    CheckResult { id, name: check_name(id).to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn chopping(plan: &Plan, seed: u64) -> (bool, String) {
    let mut failures: Vec<String> = Vec::new();
    let mut pairs = 0usize;
    for &n in plan.chop_ns {
        let found: Vec<String> = (0..plan.chop_pairs as u64)
            .into_par_iter()
            .filter_map(|k| {
                let mut rng = trial_rng(seed ^ n as u64, k);
                let a = random_profile(n, &mut rng);
                let b = random_profile(n, &mut rng);
                let pair = match chop_pair(&a, &b) {
                    Ok(p) => p,
                    Err(e) => return Some(format!("N={n} {a} vs {b}: {e}")),
                };
                let mut problems = pair.a.invariant_violations();
                problems.extend(pair.b.invariant_violations());
                if !pair.converged() {
                    problems.push("A_L, B_L and the final configuration differ".into());
                }
                (!problems.is_empty()).then(|| format!("N={n} {a} vs {b}: {}", problems.join("; ")))
            })
            .collect();
        pairs += plan.chop_pairs;
        failures.extend(found);
    }
    let detail = match failures.first() {
        None => format!("{pairs} random pairs over N ∈ {:?}, zero violations", plan.chop_ns),
        Some(f) => format!("{} of {pairs} pairs violate; first: {f}", failures.len()),
    };
    (failures.is_empty(), detail)
}

fn small_levels(plan: &Plan) -> (bool, String) {
    let c = Exponent::two_sevenths();
    let mut levels = 0usize;
    let mut violations = Vec::new();
    let mut cores = 0usize;
    for n in (2..=plan.hard_core_max_n).step_by(2) {
        let families = [("collision", collision_function(n, n as u32)), ("all-equal", all_equal_vs_balanced(n))];
        for (name, f) in families {
            let f = f.expect("even N is a valid family size");
            let core = find_hard_core(&f, c).expect("family is non-constant");
            let pair = chop_pair(&core.one_type, &core.zero_type).expect("chopping succeeds");
            cores += 1;
            for seq in [&pair.a, &pair.b] {
                let report = chopub_check(seq, core.t, c);
                levels += report.levels.len();
                for l in report.levels.iter().filter(|l| !l.holds) {
                    violations.push(format!("{name} N={n} T={} level {}: d = {} > {:.3}", core.t, l.level, l.distance, l.limit));
                }
            }
        }
    }
    let detail = match violations.first() {
        None => format!("{cores} hard cores, {levels} small levels checked exactly, zero violations"),
        Some(v) => format!("{} violations over {levels} levels; first: {v}", violations.len()),
    };
    (violations.is_empty(), detail)
}

fn sampling(plan: &Plan, seed: u64, tol: &Tolerances) -> (bool, String) {
    let n = 1024;
    let word = InputWord::from_multiplicities(&vec![2; n / 2], n as u32).expect("two-to-one word");
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [8u64, 16, 32] {
        let params = EstimatorParams::new(t, Exponent::two_sevenths()).expect("T ≥ 2");
        let trials = sampling_experiment(&word, &params, plan.sampling_trials, seed ^ t);
        let bad = trials.iter().filter(|r| r.bad_event).count() as u64;
        let (_, upper) = wilson_interval(bad, plan.sampling_trials, tol.confidence_z);
        let limit = 5.0 / t as f64;
        ok &= upper <= limit;
        parts.push(format!("T={t}: {bad}/{} bad, upper {upper:.4} vs 5/T = {limit:.4}", plan.sampling_trials));
    }
    (ok, parts.join("; "))
}

fn decision(plan: &Plan, seed: u64, tol: &Tolerances) -> (bool, String) {
    let n = 64;
    let c = Exponent::two_sevenths();
    let f = all_equal_vs_balanced(n).expect("even N");
    let Some(t) = min_separating_t(&f, c, 4096).expect("same N") else {
        return (false, "no separating T up to 4096".into());
    };
    let params = EstimatorParams::new(t, c).expect("T ≥ 2");
    let words = [
        InputWord::from_multiplicities(&[n], 2).expect("constant word"),
        InputWord::from_multiplicities(&[n / 2, n / 2], 2).expect("balanced word"),
    ];
    let trials = decision_experiment(&f, &words, &params, plan.decision_trials, seed).expect("valid inputs");
    let errors = trials.iter().filter(|r| r.expected != Some(r.output)).count();
    let rate = errors as f64 / trials.len() as f64;
    let limit = 1.0 / 3.0 + tol.decision_slack;
    (rate <= limit, format!("T={t}, U={}: {errors}/{} wrong, rate {rate:.4} vs {limit:.4}", params.sample_count(), trials.len()))
}

fn adversary_identities(tol: &Tolerances) -> (bool, String) {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=8usize {
        for b in 1..=n {
            for a in 0..b {
                let adv = adversary_bound(&weight_relation(n, a, b).expect("a < b ≤ N")).expect("within budget");
                let expect = (((n - a) * b) as f64).sqrt() / (b - a) as f64;
                worst = worst.max((adv.bound - expect).abs());
                cases += 1;
            }
        }
    }
    let grover_exact = (1..=8usize).all(|n| {
        let adv = adversary_bound(&weight_relation(n, 0, 1).expect("valid")).expect("within budget");
        adv.alpha == crate::exact::frac(1, n)
    });
    let ok = worst <= tol.adversary && grover_exact;
    (ok, format!("{cases} relations, max |bound − closed form| = {worst:.2e}; Grover α = 1/N exactly: {grover_exact}"))
}

fn describe_move(mv: &ChopMove) -> String {
    format!("{} chopping rows {:?} by {}", mv.prev, mv.chopped_rows, mv.chop_size)
}

fn summarize_sweep(label: &str, sweep: &ChopBoundSweep) -> String {
    let violations = sweep.violations().count();
    let worst = sweep
        .worst()
        .map(|w| format!("worst α·(N−d)/d = {} at {}", w.ratio(), describe_move(&w.chop)))
        .unwrap_or_else(|| "nothing checked".into());
    format!(
        "{label}: {violations} of {} moves violate α ≤ d/(N−d), {} skipped by budget, {worst}",
        sweep.checked.len(),
        sweep.skipped.len()
    )
}

fn product_bound(plan: &Plan) -> (bool, String) {
    let sweep = chop_bound_sweep(8, Labeling::Canonical, Weighting::Uniform, DEFAULT_PAIR_BUDGET);
    let ok = sweep.violations().next().is_none() && !sweep.checked.is_empty();
    let mut detail = summarize_sweep("canonical, uniform", &sweep);
    if plan.path_weight_context {
        let weighted = chop_bound_sweep(8, Labeling::Canonical, Weighting::PathCount, DEFAULT_PAIR_BUDGET);
        detail.push_str("; ");
        detail.push_str(&summarize_sweep("canonical, path-count", &weighted));
    }
    (ok, detail)
}

/// Ordered `r`-tuples of distinct symbols from `pool`.
fn tuples(pool: &[u32], r: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in tuples(pool, r - 1) {
        for &s in pool {
            if !rest.contains(&s) {
                let mut t = rest.clone();
                t.push(s);
                out.push(t);
            }
        }
    }
    out
}

fn set_equality() -> (bool, String) {
    let pool: Vec<u32> = (1..=6).collect();
    let moves: Vec<ChopMove> =
        (2..=8).flat_map(enumerable_chop_moves).filter(|mv| (1..=2).contains(&mv.rows_chopped())).collect();
    let mut instances = 0usize;
    let mut failures = Vec::new();
    for mv in &moves {
        let r = mv.rows_chopped();
        let fresh: Vec<u32> = (7..7 + mv.prev.len() as u32).collect();
        let alphabet = 6 + mv.prev.len() as u32;
        let (prev, next) = (mv.prev.clone(), mv.next());
        let all = tuples(&pool, r);
        for y in &all {
            let ys: BTreeSet<u32> = y.iter().copied().collect();
            for z in &all {
                let zs: BTreeSet<u32> = z.iter().copied().collect();
                let expect = if ys == zs {
                    &prev
                } else if ys.is_disjoint(&zs) {
                    &next
                } else {
                    continue;
                };
                instances += 1;
                match embed_set_equality(y, z, mv, &fresh, alphabet) {
                    Ok(w) if &type_of(&w) == expect => {}
                    Ok(w) => failures.push(format!("{}: Y={y:?} Z={z:?} gave type {}", describe_move(mv), type_of(&w))),
                    Err(e) => failures.push(format!("{}: Y={y:?} Z={z:?}: {e}", describe_move(mv))),
                }
            }
        }
    }
    let detail = match failures.first() {
        None => format!("{} chop moves with r ≤ 2, {instances} (Y, Z) instances, all typed correctly", moves.len()),
        Some(f) => format!("{} of {instances} instances wrong; first: {f}", failures.len()),
    };
    (failures.is_empty(), detail)
}

#[derive(Default)]
struct CircuitTally {
    circuits: usize,
    degree: usize,
    sum_influence: usize,
    sensitivity: usize,
    hybrid: usize,
    range: usize,
    worst_sensitivity_ratio: f64,
    max_sum_influence_ratio: f64,
}

fn circuits(plan: &Plan, seed: u64, tol: &Tolerances) -> (bool, String) {
    let cells: Vec<(usize, usize)> = [4usize, 6, 8].iter().flat_map(|&n| [1usize, 2, 3].map(|t| (n, t))).collect();
    let mut tally = CircuitTally::default();
    for (cell, &(n, t)) in cells.iter().enumerate() {
        let rows: Vec<(f64, f64, f64, bool)> = (0..plan.circuits_per_cell as u64)
            .into_par_iter()
            .map(|k| {
                let mut rng = trial_rng(seed ^ ((cell as u64) << 32), k);
                let circ = QueryCircuit::random(n, t, 2, &mut rng);
                let values: Vec<f64> = (0..1usize << n).map(|x| circ.acceptance_probability_mask(x)).collect();
                let in_range = values.iter().all(|v| (-tol.range..=1.0 + tol.range).contains(v));
                let p = BoundedPolynomial::from_values(n, values).expect("n ≤ 20");
                let e = circ.state_sensitivity().expect("n ≤ 16").mean_sq_distance;
                (p.max_coefficient_above(2 * t), p.sum_influence(), e, in_range)
            })
            .collect();
        let linear = 2.0 * t as f64 / n as f64;
        let hybrid = 4.0 * (t * t) as f64 / n as f64;
        let sum_inf_limit = 4.0 * t as f64;
        for (excess, sum_inf, e, in_range) in rows {
            tally.circuits += 1;
            tally.degree += (excess > tol.degree) as usize;
            tally.sum_influence += (sum_inf > sum_inf_limit + tol.sum_influence) as usize;
            tally.sensitivity += (e > linear + tol.sensitivity) as usize;
            tally.hybrid += (e > hybrid + tol.sensitivity) as usize;
            tally.range += (!in_range) as usize;
            tally.worst_sensitivity_ratio = tally.worst_sensitivity_ratio.max(e / linear);
            tally.max_sum_influence_ratio = tally.max_sum_influence_ratio.max(sum_inf / sum_inf_limit);
        }
    }
    let ok = tally.degree + tally.sum_influence + tally.sensitivity + tally.range == 0;
    let detail = format!(
        "{} circuits: degree > 2T violations {}, SumInf > 4T violations {} (max SumInf/4T {:.3}), \
         E > 2T/N violations {} (max E/(2T/N) {:.3}), E > 4T²/N violations {}, p outside [0,1] {}",
        tally.circuits,
        tally.degree,
        tally.sum_influence,
        tally.max_sum_influence_ratio,
        tally.sensitivity,
        tally.worst_sensitivity_ratio,
        tally.hybrid,
        tally.range
    );
    (ok, detail)
}

fn deutsch(tol: &Tolerances) -> (bool, String) {
    let p = match deutsch_circuit().extract_polynomial() {
        Ok(p) => p,
        Err(e) => return (false, format!("extraction failed: {e}")),
    };
    let target = [0.0, 1.0, 1.0, -2.0];
    let coeff_err = (0..4).map(|m| (p.coefficient(m) - target[m]).abs()).fold(0.0, f64::max);
    let infl = p.influences();
    let infl_err = infl.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let ok = coeff_err <= tol.deutsch && infl_err <= tol.deutsch;
    (ok, format!("max coefficient error {coeff_err:.2e}, influences {infl:?}"))
}

fn impthm(plan: &Plan, seed: u64) -> (bool, String) {
    let params = SimulationParams::new(0.2, 0.2).expect("valid ε, δ");
    let jobs: Vec<(usize, u64)> = (0..=2).flat_map(|t| (0..plan.impthm_circuits as u64).map(move |k| (t, k))).collect();
    let results: Vec<(bool, bool, bool, bool)> = jobs
        .par_iter()
        .map(|&(t, k)| {
            let mut rng = trial_rng(seed ^ ((t as u64) << 40), k);
            let p = QueryCircuit::random(6, t, 2, &mut rng).extract_polynomial().expect("random circuits are valid");
            let s = simulate_all(&p, &params, t);
            let variance_only = s.all_variance_halts();
            let accurate = !variance_only || s.failure_fraction < params.delta;
            let thresholds_held = s.outcomes.iter().any(|o| o.all_rounds_above_threshold);
            (variance_only, accurate, thresholds_held, s.budget_respected())
        })
        .collect();
    let variance_cases = results.iter().filter(|r| r.0).count();
    let inaccurate = results.iter().filter(|r| !r.1).count();
    let budget_cases = results.iter().filter(|r| r.2).count();
    let over_budget = results.iter().filter(|r| !r.3).count();
    let ok = inaccurate == 0 && over_budget == 0;
    (
        ok,
        format!(
            "{} polynomials (T ≤ 2, N = 6): {variance_cases} all-variance-halt, {inaccurate} with failure ≥ δ; \
             {budget_cases} with threshold-clearing inputs, {over_budget} over budget",
            results.len()
        ),
    )
}

/// A bounded function of the variables in `keep` only.
fn random_junta<R: Rng + ?Sized>(n: usize, keep: usize, rng: &mut R) -> BoundedPolynomial {
    let table: Vec<f64> = (0..1usize << n).map(|_| rng.random::<f64>()).collect();
    BoundedPolynomial::from_values(n, (0..1usize << n).map(|x| table[x & keep]).collect()).expect("n ≤ 20")
}

fn juntas(plan: &Plan, seed: u64, tol: &Tolerances) -> (bool, String) {
    let (alpha, delta) = (0.25, 0.25);
    let results: Vec<(bool, bool, bool)> = (0..plan.junta_instances as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            let n = 6;
            // alternate between circuit polynomials and perturbed juntas
            let p = if k % 2 == 0 {
                let t = rng.random_range(1..=2);
                QueryCircuit::random(n, t, 2, &mut rng).extract_polynomial().expect("valid circuit")
            } else {
                let mut vars: Vec<usize> = (0..n).collect();
                vars.shuffle(&mut rng);
                let keep = vars[..3].iter().fold(0, |m, &i| m | 1 << i);
                let base = random_junta(n, keep, &mut rng);
                let noise = random_junta(n, (1 << n) - 1, &mut rng);
                let mix = base.values().iter().zip(noise.values()).map(|(b, e)| 0.95 * b + 0.05 * e).collect();
                BoundedPolynomial::from_values(n, mix).expect("n ≤ 20")
            };
            let size = rng.random_range(2..=4);
            let best = junta_search(&p, size, 1 << 12).expect("small search");
            let keep = best.subset.iter().fold(0usize, |m, &i| m | 1 << i);
            let direct = best_junta(&p, &best.subset).expect("subset in range");
            let optimal = (0..100).all(|_| {
                let other = if rng.random_bool(0.5) {
                    random_junta(n, keep, &mut rng)
                } else {
                    let shifted = direct
                        .polynomial
                        .values()
                        .iter()
                        .enumerate()
                        .map(|(x, v)| (v + 0.01 * ((x & keep) as f64).sin()).clamp(0.0, 1.0))
                        .collect();
                    BoundedPolynomial::from_values(n, shifted).expect("n ≤ 20")
                };
                direct.l2_error <= other.l2_distance_sq(&p) + tol.junta_slack
            });
            let markov = markov_check(&best, &p, alpha, delta).expect("valid α, δ");
            (optimal, markov.condition_holds, markov.passes())
        })
        .collect();
    let suboptimal = results.iter().filter(|r| !r.0).count();
    let eligible = results.iter().filter(|r| r.1).count();
    let markov_fail = results.iter().filter(|r| !r.2).count();
    let ok = suboptimal == 0 && markov_fail == 0;
    (
        ok,
        format!(
            "{} instances × 100 competitors: {suboptimal} beaten; Markov step on {eligible} instances with error ≤ α²δ² \
             (α = δ = {alpha}): {markov_fail} failures",
            results.len()
        ),
    )
}

fn appendix(plan: &Plan, seed: u64, tol: &Tolerances) -> (bool, String) {
    let mut problems = Vec::new();
    for n in 1..=64usize {
        let full = HammingSpec::new(n, &[n], &[0]).expect("valid spec");
        let g = gamma(&full).expect("non-constant").gamma;
        if (g - 1.0).abs() > 1e-12 {
            problems.push(format!("γ((0,{n})) = {g}"));
        }
        // at N = 2 the complemented reflection (1, 2) gives γ = 2 > √2
        if n < 3 {
            continue;
        }
        let or = HammingSpec::or_like(n).expect("valid spec");
        let g = gamma(&or).expect("non-constant").gamma;
        if (g - (n as f64).sqrt()).abs() > 1e-12 {
            problems.push(format!("γ(OR_{n}) = {g}"));
        }
    }
    let mut extreme_runs = 0usize;
    for n in [2usize, 5, 16, 64] {
        for spec in [HammingSpec::new(n, &[n], &[0]).expect("valid"), HammingSpec::or_like(n).expect("valid")] {
            for w in [0, n] {
                let bits = boolean::word_of_weight(n, w);
                let runs = boolean::decide_experiment(&spec, &bits, DEFAULT_SCALE, 200, seed ^ (n * 131 + w) as u64)
                    .expect("on-promise input");
                extreme_runs += runs.len();
                if let Some(r) = runs.iter().find(|r| r.output != r.expected) {
                    problems.push(format!("N={n} weight {w}: trial {} answered {}", r.trial, r.output));
                }
            }
        }
    }
    let n = 64;
    let or = HammingSpec::or_like(n).expect("valid spec");
    let floor = 2.0 / 3.0 - tol.appendix_slack;
    let mut worst = (1.0f64, 0usize);
    for w in 0..=n {
        let bits = boolean::word_of_weight(n, w);
        let runs = boolean::decide_experiment(&or, &bits, DEFAULT_SCALE, plan.appendix_trials, seed ^ (w as u64) << 20)
            .expect("on-promise input");
        let rate = runs.iter().filter(|r| r.output == r.expected).count() as f64 / runs.len() as f64;
        if rate < worst.0 {
            worst = (rate, w);
        }
    }
    if worst.0 < floor {
        problems.push(format!("OR_64 weight {} success {:.4} < {floor:.4}", worst.1, worst.0));
    }
    let detail = format!(
        "γ identities for N ≤ 64 (OR-like from N = 3), {extreme_runs} weight-0/N runs, OR_64 min success {:.4} at weight {} over {} trials{}",
        worst.0,
        worst.1,
        plan.appendix_trials,
        if problems.is_empty() { String::new() } else { format!("; problems: {}", problems.join("; ")) }
    );
    (problems.is_empty(), detail)
}
