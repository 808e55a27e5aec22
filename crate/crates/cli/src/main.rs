//! `symq`: batch experiments over the workbench. Every command writes a
//! versioned run record (JSON) or its per-trial rows (CSV).

mod inputs;
mod record;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use symq::adversary::{
    adversary_bound_with_budget, chop_bound_sweep, chop_relation, embed_set_equality, weight_relation, ChopMove,
    Labeling, Weighting, DEFAULT_PAIR_BUDGET,
};
use symq::boolean::{self, gamma, HammingSpec};
use symq::chopper::{bound_profile, chop_pair, chopub_check, HybridSequence};
use symq::derand::{self, SimulationParams};
use symq::estimator::{self, EstimatorParams};
use symq::exact::ratio_to_f64;
use symq::poly::{self, BoundedPolynomial};
use symq::qsim::QueryCircuit;
use symq::rng::trial_rng;
use symq::stats::{wilson_interval, Z95};
use symq::types::type_of;
use symq::verify::{self, Level};
use symq::{Exponent, InputWord, SymmetricFunction};

use inputs::{parse_bits, parse_list, parse_profile, read_bits, read_json, read_spec, read_word, CircuitArgs, FuncArgs};
use record::{emit, to_value, Format, RunRecord, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "symq", version, about = "Experiments on permutation-invariant query problems")]
struct Cli {
    /// Master seed; required by every Monte Carlo command.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Enumeration guard for exhaustive constructions.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the multiplicity sampler and check its deviation event.
    Sample(SampleArgs),
    /// Decide a symmetric function with the type-band rule.
    Decide(DecideArgs),
    /// Locate a hard core of a symmetric function.
    Hardcore(HardcoreArgs),
    /// Build the hybrid sequences between two profiles.
    Chop(ChopArgs),
    /// Exact adversary bound of a weight or chop relation.
    Adversary(AdversaryArgs),
    /// Embed a Set Equality instance into a chop move.
    Setequality(SetEqualityArgs),
    /// Simulate a query circuit and extract its polynomial.
    Qsim(QsimArgs),
    /// Influence-driven classical simulation of a circuit's polynomial.
    Derand(DerandArgs),
    /// Best junta and the Markov step.
    Junta(JuntaArgs),
    /// Influence-versus-variance probe.
    Probe(ProbeArgs),
    /// Hamming-weight decision procedure.
    Boolean(BooleanArgs),
    /// Run the acceptance battery.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    One,
    Zero,
}

#[derive(Debug, Args)]
struct WordChoice {
    /// Input word JSON `{"M": …, "entries": […]}`.
    #[arg(long)]
    word: Option<PathBuf>,
    /// Use the canonical word of the function's first 1-type or 0-type.
    #[arg(long, value_enum)]
    input: Option<Side>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    func: FuncArgs,
    #[command(flatten)]
    choice: WordChoice,
    #[arg(long = "T")]
    t: u64,
    #[arg(long, default_value = "2/7")]
    c: Exponent,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[command(flatten)]
    func: FuncArgs,
    #[command(flatten)]
    choice: WordChoice,
    /// Query parameter; the smallest separating T when absent.
    #[arg(long = "T")]
    t: Option<u64>,
    #[arg(long, default_value = "2/7")]
    c: Exponent,
    #[arg(long, default_value_t = 500)]
    trials: u64,
}

#[derive(Debug, Args)]
struct HardcoreArgs {
    #[command(flatten)]
    func: FuncArgs,
    #[arg(long, default_value = "2/7")]
    c: Exponent,
}

#[derive(Debug, Args)]
struct ChopArgs {
    #[command(flatten)]
    func: FuncArgs,
    /// Start profile, e.g. `3,2,1` (with --b instead of --func).
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long, default_value = "2/7")]
    c: Exponent,
    /// T for the small-level check (the hard core's T with --func).
    #[arg(long = "T")]
    t: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RelationKind {
    Weight,
    Chop,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LabelingArg {
    Canonical,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightingArg {
    Uniform,
    Path,
}

#[derive(Debug, Args)]
struct ChopMoveArgs {
    /// Profile before the chop, e.g. `3,2`.
    #[arg(long)]
    prev: Option<String>,
    /// 0-based profile rows to chop, e.g. `0,1`.
    #[arg(long)]
    rows: Option<String>,
    /// Elements moved per chopped row.
    #[arg(long)]
    size: Option<usize>,
    /// Sequence JSON written by `chop` (or a bare hybrid sequence).
    #[arg(long)]
    seq: Option<PathBuf>,
    /// Level of --seq to use.
    #[arg(long)]
    level: Option<usize>,
    /// Which sequence of a `chop` record to read.
    #[arg(long, value_enum, default_value = "a")]
    seq_side: SeqSide,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeqSide {
    A,
    B,
}

impl ChopMoveArgs {
    fn load(&self) -> Result<ChopMove> {
        if let Some(path) = &self.seq {
            let level = self.level.ok_or_else(|| anyhow!("--seq needs --level"))?;
            return Ok(ChopMove::from_step(&read_sequence(path, self.seq_side)?, level)?);
        }
        let prev = parse_profile(self.prev.as_deref().ok_or_else(|| anyhow!("--prev or --seq is required"))?)?;
        let rows = parse_list::<usize>(self.rows.as_deref().unwrap_or(""))?;
        let size = self.size.ok_or_else(|| anyhow!("--size is required with --prev"))?;
        Ok(ChopMove::new(prev, rows, size)?)
    }
}

#[derive(Debug, Args)]
struct AdversaryArgs {
    #[arg(long, value_enum)]
    relation: RelationKind,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[command(flatten)]
    chop: ChopMoveArgs,
    /// Alphabet for the chop relation (defaults to u + r).
    #[arg(long = "M")]
    m: Option<u32>,
    #[arg(long, value_enum, default_value = "canonical")]
    labeling: LabelingArg,
    #[arg(long, value_enum, default_value = "path")]
    weighting: WeightingArg,
    /// Check every enumerable chop move up to this N instead of one move.
    #[arg(long)]
    sweep: Option<usize>,
}

#[derive(Debug, Args)]
struct SetEqualityArgs {
    #[command(flatten)]
    chop: ChopMoveArgs,
    #[arg(long = "Y")]
    y: String,
    #[arg(long = "Z")]
    z: String,
    /// Symbols for the unchopped rows (default: after every symbol in use).
    #[arg(long)]
    fresh: Option<String>,
}

#[derive(Debug, Args)]
struct QsimArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Comma list from poly, inf, sens.
    #[arg(long, default_value = "poly")]
    report: String,
    /// Write the simulated circuit as JSON.
    #[arg(long)]
    save_circuit: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DerandArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    delta: f64,
    #[arg(long, default_value_t = derand::DEFAULT_EXPONENT)]
    k: u32,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    abort_on_shortfall: bool,
    /// Trace a single input (e.g. `0110`) instead of the whole cube.
    #[arg(long)]
    bits: Option<String>,
}

#[derive(Debug, Args)]
struct JuntaArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
}

#[derive(Debug, Args)]
struct ProbeArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Survey random bounded polynomials on this many variables instead.
    #[arg(long = "random-n")]
    random_n: Option<usize>,
    #[arg(long, default_value_t = 100)]
    samples: u64,
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = derand::DEFAULT_PROBE_FLOOR)]
    floor: f64,
}

#[derive(Debug, Args)]
struct BooleanArgs {
    /// Spec JSON `{"N": …, "ones": […], "zeros": […]}`.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Use the OR-like spec on N bits.
    #[arg(long)]
    or_like: Option<usize>,
    /// Bit word JSON, `[0,1,…]` or `{"bits": […]}`.
    #[arg(long)]
    word: Option<PathBuf>,
    /// Use the word whose first `weight` bits are set.
    #[arg(long)]
    weight: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Sample-count constant C_T.
    #[arg(long, default_value_t = boolean::DEFAULT_SCALE)]
    scale: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "full")]
    fast: bool,
    #[arg(long)]
    full: bool,
}

/// What a command hands back before it is wrapped into a run record.
struct Outcome {
    config: Value,
    rows: Vec<Value>,
    summary: Value,
    passed: bool,
}

impl Outcome {
    fn ok(config: Value, rows: Vec<Value>, summary: Value) -> Self {
        Outcome { config, rows, summary, passed: true }
    }
}

pub(crate) fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| anyhow!("this command is randomized and needs an explicit --seed"))
}

fn read_sequence(path: &Path, side: SeqSide) -> Result<HybridSequence> {
    let v: Value = read_json(path)?;
    if let Ok(seq) = serde_json::from_value::<HybridSequence>(v.clone()) {
        return Ok(seq);
    }
    let key = match side {
        SeqSide::A => "/summary/sequence_a",
        SeqSide::B => "/summary/sequence_b",
    };
    let inner = v.pointer(key).cloned().ok_or_else(|| anyhow!("{} holds no sequence", path.display()))?;
    Ok(serde_json::from_value(inner)?)
}

fn canonical_word(f: &SymmetricFunction, side: Side) -> Result<InputWord> {
    let profile = match side {
        Side::One => f.one_types().next(),
        Side::Zero => f.zero_types().next(),
    }
    .ok_or_else(|| anyhow!("function has no {side:?} type"))?;
    Ok(InputWord::from_multiplicities(profile.parts(), f.m())?)
}

fn choose_words(f: Option<&SymmetricFunction>, choice: &WordChoice) -> Result<Vec<InputWord>> {
    match (&choice.word, choice.input, f) {
        (Some(path), None, _) => Ok(vec![read_word(path)?]),
        (None, Some(side), Some(f)) => Ok(vec![canonical_word(f, side)?]),
        (None, None, Some(f)) => Ok(vec![canonical_word(f, Side::One)?, canonical_word(f, Side::Zero)?]),
        (Some(_), Some(_), _) => bail!("give --word or --input, not both"),
        (None, _, None) => bail!("--word or --func is required"),
    }
}

fn sample(args: &SampleArgs, seed: Option<u64>) -> Result<Outcome> {
    let seed = require_seed(seed)?;
    let f = args.func.func.as_ref().map(|_| args.func.load()).transpose()?;
    let word = match (&args.choice.word, args.choice.input) {
        (None, None) => choose_words(f.as_ref(), &WordChoice { word: None, input: Some(Side::Zero) })?,
        _ => choose_words(f.as_ref(), &args.choice)?,
    }
    .remove(0);
    let params = EstimatorParams::new(args.t, args.c)?;
    let trials = estimator::sampling_experiment(&word, &params, args.trials, seed);
    let bad = trials.iter().filter(|r| r.bad_event).count() as u64;
    let (lo, hi) = wilson_interval(bad, args.trials.max(1), Z95);
    let config = json!({"T": args.t, "c": args.c.to_string(), "trials": args.trials, "seed": seed, "N": word.len(),
        "word_type": type_of(&word).to_string()});
    let summary = json!({
        "sample_count": params.sample_count(),
        "bad_events": bad,
        "frequency": bad as f64 / args.trials.max(1) as f64,
        "wilson95": [lo, hi],
        "limit_5_over_T": 5.0 / args.t as f64,
    });
    Ok(Outcome::ok(config, trials.iter().map(to_value).collect(), summary))
}

fn decide(args: &DecideArgs, seed: Option<u64>) -> Result<Outcome> {
    let seed = require_seed(seed)?;
    let f = args.func.load()?;
    let words = choose_words(Some(&f), &args.choice)?;
    let t = match args.t {
        Some(t) => t,
        None => estimator::min_separating_t(&f, args.c, 1 << 20)?.ok_or_else(|| anyhow!("no separating T up to 2^20"))?,
    };
    let params = EstimatorParams::new(t, args.c)?;
    let trials = estimator::decision_experiment(&f, &words, &params, args.trials, seed)?;
    let graded: Vec<_> = trials.iter().filter(|r| r.expected.is_some()).collect();
    let errors = graded.iter().filter(|r| r.expected != Some(r.output)).count();
    let config = json!({"N": f.n(), "M": f.m(), "T": t, "c": args.c.to_string(), "trials": args.trials, "seed": seed});
    let summary = json!({
        "sample_count": params.sample_count(),
        "separated": estimator::separates_all_pairs(&f, t, args.c)?,
        "graded_trials": graded.len(),
        "errors": errors,
        "error_rate": if graded.is_empty() { Value::Null } else { json!(errors as f64 / graded.len() as f64) },
    });
    Ok(Outcome::ok(config, trials.iter().map(to_value).collect(), summary))
}

fn hardcore(args: &HardcoreArgs) -> Result<Outcome> {
    let f = args.func.load()?;
    let core = estimator::find_hard_core(&f, args.c)?;
    let config = json!({"N": f.n(), "M": f.m(), "c": args.c.to_string()});
    let summary = json!({
        "hard_core": to_value(&core),
        "separating_T": estimator::min_separating_t(&f, args.c, 1 << 20)?,
    });
    Ok(Outcome::ok(config, Vec::new(), summary))
}

fn chop(args: &ChopArgs) -> Result<Outcome> {
    let (a, b, t) = match (&args.func.func, &args.a, &args.b) {
        (Some(_), None, None) => {
            let core = estimator::find_hard_core(&args.func.load()?, args.c)?;
            (core.one_type, core.zero_type, Some(args.t.unwrap_or(core.t)))
        }
        (None, Some(a), Some(b)) => (parse_profile(a)?, parse_profile(b)?, args.t),
        _ => bail!("give --func, or both --a and --b"),
    };
    let pair = chop_pair(&a, &b)?;
    let mut violations = pair.a.invariant_violations();
    violations.extend(pair.b.invariant_violations());
    let mut rows = Vec::new();
    for (side, seq) in [("a", &pair.a), ("b", &pair.b)] {
        for s in &seq.steps {
            rows.push(json!({"side": side, "level": s.level, "chop_size": s.chop_size, "rows_chopped": s.rows_chopped,
                "distance": s.distance, "profile_distance": s.profile_distance,
                "profile": seq.profiles[s.level].to_string()}));
        }
    }
    let small = t.map(|t| [chopub_check(&pair.a, t, args.c), chopub_check(&pair.b, t, args.c)]);
    let small_ok = small.as_ref().is_none_or(|r| r.iter().all(|r| r.violations() == 0));
    let config = json!({"a": a.to_string(), "b": b.to_string(), "c": args.c.to_string(), "T": t});
    let summary = json!({
        "final_configuration": pair.final_configuration.to_string(),
        "a_l_equals_b_l": pair.converged(),
        "invariant_violations": violations,
        "small_levels": small.as_ref().map(to_value),
        "bounds": t.map(|t| to_value(&bound_profile(&pair.a, t, args.c))),
        "sequence_a": to_value(&pair.a),
        "sequence_b": to_value(&pair.b),
    });
    let passed = pair.converged() && violations.is_empty() && small_ok;
    Ok(Outcome { config, rows, summary, passed })
}

fn labeling(l: LabelingArg) -> Labeling {
    match l {
        LabelingArg::Canonical => Labeling::Canonical,
        LabelingArg::All => Labeling::AllLabelings,
    }
}

fn weighting(w: WeightingArg) -> Weighting {
    match w {
        WeightingArg::Uniform => Weighting::Uniform,
        WeightingArg::Path => Weighting::PathCount,
    }
}

fn adversary(args: &AdversaryArgs, budget: u128) -> Result<Outcome> {
    match args.relation {
        RelationKind::Weight => {
            let (Some(n), Some(a), Some(b)) = (args.n, args.a, args.b) else {
                bail!("--relation weight needs --N, --a and --b");
            };
            let bound = adversary_bound_with_budget(&weight_relation(n, a, b)?, budget)?;
            let closed = if a < b && b <= n { Some((((n - a) * b) as f64).sqrt() / (b - a) as f64) } else { None };
            let config = json!({"relation": "weight", "N": n, "a": a, "b": b, "budget": budget});
            let summary = json!({"alpha": bound.alpha.to_string(), "alpha_f64": ratio_to_f64(&bound.alpha),
                "bound": bound.bound, "closed_form": closed, "witness": bound.witness});
            Ok(Outcome::ok(config, Vec::new(), summary))
        }
        RelationKind::Chop if args.sweep.is_some() => {
            let n_max = args.sweep.unwrap_or(0);
            let sweep = chop_bound_sweep(n_max, labeling(args.labeling), weighting(args.weighting), budget);
            let rows: Vec<Value> = sweep
                .checked
                .iter()
                .map(|c| {
                    json!({"prev": c.chop.prev.to_string(), "chopped_rows": format!("{:?}", c.chop.chopped_rows),
                        "chop_size": c.chop.chop_size, "pairs": c.pairs, "alpha": c.alpha.to_string(),
                        "limit": c.limit.to_string(), "holds": c.holds()})
                })
                .collect();
            let violations = sweep.violations().count();
            let config = json!({"relation": "chop", "sweep": n_max, "labeling": format!("{:?}", args.labeling),
                "weighting": format!("{:?}", args.weighting), "budget": budget});
            let summary = json!({"checked": sweep.checked.len(), "skipped": sweep.skipped.len(), "violations": violations,
                "worst_ratio": sweep.worst().map(|w| w.ratio().to_string())});
            Ok(Outcome { config, rows, summary, passed: violations == 0 })
        }
        RelationKind::Chop => {
            let mv = args.chop.load()?;
            let alphabet = args.m.unwrap_or((mv.prev.len() + mv.rows_chopped()) as u32);
            let cr = chop_relation(&mv, alphabet, labeling(args.labeling), budget)?;
            let rel = match args.weighting {
                WeightingArg::Uniform => cr.relation.unweighted(),
                WeightingArg::Path => cr.relation.clone(),
            };
            let bound = adversary_bound_with_budget(&rel, budget)?;
            let limit = cr.product_limit();
            let config = json!({"relation": "chop", "move": to_value(&mv), "M": alphabet,
                "labeling": format!("{:?}", args.labeling), "weighting": format!("{:?}", args.weighting), "budget": budget});
            let summary = json!({"next": cr.next.to_string(), "side_a": rel.side_a().len(), "side_b": rel.side_b().len(),
                "pairs": rel.pairs().len(), "alpha": bound.alpha.to_string(), "alpha_f64": ratio_to_f64(&bound.alpha),
                "bound": bound.bound, "limit": limit.to_string(), "product_bound_holds": bound.alpha <= limit,
                "witness": bound.witness});
            Ok(Outcome::ok(config, Vec::new(), summary))
        }
    }
}

fn set_equality(args: &SetEqualityArgs) -> Result<Outcome> {
    let mv = args.chop.load()?;
    let y = parse_list::<u32>(&args.y)?;
    let z = parse_list::<u32>(&args.z)?;
    let top = y.iter().chain(&z).copied().max().unwrap_or(0);
    let fresh = match &args.fresh {
        Some(s) => parse_list::<u32>(s)?,
        None => (top + 1..=top + mv.prev.len() as u32).collect(),
    };
    let alphabet = top.max(fresh.iter().copied().max().unwrap_or(0));
    let word = embed_set_equality(&y, &z, &mv, &fresh, alphabet)?;
    let ys: std::collections::BTreeSet<_> = y.iter().collect();
    let zs: std::collections::BTreeSet<_> = z.iter().collect();
    let expected = if ys == zs { mv.prev.clone() } else { mv.next() };
    let got = type_of(&word);
    let config = json!({"move": to_value(&mv), "Y": y, "Z": z, "fresh": fresh});
    let summary = json!({"word": to_value(&word), "type": got.to_string(), "expected_type": expected.to_string(),
        "sets_equal": ys == zs});
    Ok(Outcome { config, rows: Vec::new(), summary, passed: got == expected })
}

/// Coefficients keyed by 1-based variable sets, e.g. `{1,2}`.
fn coefficient_map(p: &BoundedPolynomial) -> BTreeMap<String, f64> {
    (0..1usize << p.n())
        .filter(|&m| m == 0 || p.coefficient(m).abs() > 1e-12)
        .map(|m| {
            let vars: Vec<String> = (0..p.n()).filter(|i| m >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
            (format!("{{{}}}", vars.join(",")), p.coefficient(m))
        })
        .collect()
}

fn circuit_config(args: &CircuitArgs, c: &QueryCircuit, seed: Option<u64>) -> Value {
    json!({"circuit": args.circuit, "random": args.random, "seed": if args.is_random() { seed } else { None },
        "N": c.n(), "T": c.t(), "W": c.w()})
}

fn qsim(args: &QsimArgs, seed: Option<u64>) -> Result<Outcome> {
    let circ = args.circuit.load(seed)?;
    if let Some(path) = &args.save_circuit {
        std::fs::write(path, serde_json::to_string_pretty(&circ)?)?;
    }
    let reports: Vec<&str> = args.report.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if let Some(bad) = reports.iter().find(|r| !matches!(**r, "poly" | "inf" | "sens")) {
        bail!("unknown report {bad:?}; expected poly, inf or sens");
    }
    let p = circ.extract_polynomial()?;
    let mut summary = serde_json::Map::new();
    let rows = (0..1usize << p.n())
        .map(|x| json!({"input": poly::mask_to_bits(x, p.n()), "acceptance": p.value(x)}))
        .collect();
    if reports.contains(&"poly") {
        summary.insert("coefficients".into(), to_value(&coefficient_map(&p)));
        summary.insert("degree".into(), json!(p.degree(symq::qsim::DEGREE_TOL)));
    }
    if reports.contains(&"inf") {
        summary.insert("influences".into(), json!(p.influences()));
        summary.insert("sum_influence".into(), json!(p.sum_influence()));
        summary.insert("variance_l1".into(), json!(p.variance_l1()));
    }
    if reports.contains(&"sens") {
        summary.insert("state_sensitivity".into(), to_value(&circ.state_sensitivity()?));
    }
    Ok(Outcome::ok(circuit_config(&args.circuit, &circ, seed), rows, Value::Object(summary)))
}

fn derand_cmd(args: &DerandArgs, seed: Option<u64>) -> Result<Outcome> {
    let circ = args.circuit.load(seed)?;
    let p = circ.extract_polynomial()?;
    let params = SimulationParams::with_options(args.epsilon, args.delta, args.k, args.max_rounds, args.abort_on_shortfall)?;
    let mut config = circuit_config(&args.circuit, &circ, seed);
    config["params"] = to_value(&params);
    if let Some(bits) = &args.bits {
        let bits = parse_bits(bits)?;
        let trace = derand::classical_simulate(&p, &bits, &params, circ.t())?;
        config["bits"] = json!(bits);
        let summary = json!({"estimate": trace.estimate, "value": p.evaluate_bits(&bits), "queries": trace.queries(),
            "halted_by": trace.halted_by, "final_vr": trace.final_vr,
            "variance_threshold": params.variance_threshold(), "influence_threshold": params.influence_threshold(circ.t())});
        return Ok(Outcome::ok(config, trace.rounds.iter().map(to_value).collect(), summary));
    }
    let s = derand::simulate_all(&p, &params, circ.t());
    let summary = json!({"failure_fraction": s.failure_fraction, "max_queries": s.max_queries, "budget": s.budget,
        "halted_by": to_value(&s.halted_by), "all_variance_halts": s.all_variance_halts(),
        "budget_respected": s.budget_respected(),
        "failure_below_delta": s.failure_fraction < args.delta});
    Ok(Outcome::ok(config, s.outcomes.iter().map(to_value).collect(), summary))
}

fn junta(args: &JuntaArgs, seed: Option<u64>, budget: u128) -> Result<Outcome> {
    let circ = args.circuit.load(seed)?;
    let p = circ.extract_polynomial()?;
    let j = derand::junta_search(&p, args.k, budget)?;
    let m = derand::markov_check(&j, &p, args.alpha, args.delta)?;
    let mut config = circuit_config(&args.circuit, &circ, seed);
    config["k"] = json!(args.k);
    config["alpha"] = json!(args.alpha);
    config["delta"] = json!(args.delta);
    let summary = json!({"subset": j.subset, "l2_error": j.l2_error, "markov": to_value(&m), "markov_passes": m.passes()});
    Ok(Outcome { config, rows: Vec::new(), summary, passed: m.passes() })
}

fn probe(args: &ProbeArgs, seed: Option<u64>) -> Result<Outcome> {
    if let Some(n) = args.random_n {
        let seed = require_seed(seed)?;
        let degree = args.degree.ok_or_else(|| anyhow!("--random-n needs --degree"))?;
        let rows: Vec<Value> = (0..args.samples)
            .map(|k| {
                let mut rng = trial_rng(seed, k);
                let p = derand::random_bounded_polynomial(n, degree, &mut rng)?;
                let mut row = to_value(&derand::conjecture_probe(&p, degree, args.floor)?);
                row["sample"] = json!(k);
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let flagged = rows.iter().filter(|r| r["flagged"] == json!(true)).count();
        let config = json!({"random_n": n, "degree": degree, "samples": args.samples, "floor": args.floor, "seed": seed});
        return Ok(Outcome::ok(config, rows, json!({"flagged": flagged})));
    }
    let circ = args.circuit.load(seed)?;
    let p = circ.extract_polynomial()?;
    let degree = args.degree.unwrap_or(p.degree(symq::qsim::DEGREE_TOL));
    let report = derand::conjecture_probe(&p, degree, args.floor)?;
    let mut config = circuit_config(&args.circuit, &circ, seed);
    config["degree"] = json!(degree);
    config["floor"] = json!(args.floor);
    Ok(Outcome::ok(config, Vec::new(), to_value(&report)))
}

fn boolean_cmd(args: &BooleanArgs, seed: Option<u64>) -> Result<Outcome> {
    let seed = require_seed(seed)?;
    let spec: HammingSpec = match (&args.spec, args.or_like) {
        (Some(p), None) => read_spec(p)?,
        (None, Some(n)) => HammingSpec::or_like(n)?,
        _ => bail!("give exactly one of --spec and --or-like"),
    };
    let bits = match (&args.word, args.weight) {
        (Some(p), None) => read_bits(p)?,
        (None, Some(w)) if w <= spec.n() => boolean::word_of_weight(spec.n(), w),
        (None, Some(w)) => bail!("weight {w} exceeds N = {}", spec.n()),
        _ => bail!("give exactly one of --word and --weight"),
    };
    let g = gamma(&spec)?;
    let trials = boolean::decide_experiment(&spec, &bits, args.scale, args.trials, seed)?;
    let correct = trials.iter().filter(|r| r.output == r.expected).count();
    let config = json!({"spec": to_value(&spec), "scale": args.scale, "trials": args.trials, "seed": seed});
    let summary = json!({"gamma": g.gamma, "orientation": g.orientation, "pair": g.pair,
        "samples_per_trial": boolean::appendix_sample_count(g.gamma, args.scale),
        "query_ratio": boolean::query_ratio(&spec, args.scale)?,
        "success_rate": correct as f64 / trials.len().max(1) as f64});
    Ok(Outcome::ok(config, trials.iter().map(to_value).collect(), summary))
}

fn verify_cmd(args: &VerifyArgs, seed: Option<u64>) -> Result<Outcome> {
    let level = if args.full { Level::Full } else { Level::Fast };
    let seed = seed.unwrap_or(verify::DEFAULT_SEED);
    let report = verify::run_suite(level, seed);
    for c in &report.checks {
        eprintln!("{} [{:>2}] {}: {} ({:.1}s)", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail, c.seconds);
    }
    let rows = report.checks.iter().map(to_value).collect();
    let summary = json!({"passed": report.all_passed(), "failed": report.failed()});
    Ok(Outcome { config: json!({"level": level, "seed": seed}), rows, summary, passed: report.all_passed() })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Sample(_) => "sample",
        Command::Decide(_) => "decide",
        Command::Hardcore(_) => "hardcore",
        Command::Chop(_) => "chop",
        Command::Adversary(_) => "adversary",
        Command::Setequality(_) => "setequality",
        Command::Qsim(_) => "qsim",
        Command::Derand(_) => "derand",
        Command::Junta(_) => "junta",
        Command::Probe(_) => "probe",
        Command::Boolean(_) => "boolean",
        Command::Verify(_) => "verify",
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let started = Instant::now();
    let budget = cli.budget.unwrap_or(DEFAULT_PAIR_BUDGET);
    let outcome = match &cli.command {
        Command::Sample(a) => sample(a, cli.seed)?,
        Command::Decide(a) => decide(a, cli.seed)?,
        Command::Hardcore(a) => hardcore(a)?,
        Command::Chop(a) => chop(a)?,
        Command::Adversary(a) => adversary(a, budget)?,
        Command::Setequality(a) => set_equality(a)?,
        Command::Qsim(a) => qsim(a, cli.seed)?,
        Command::Derand(a) => derand_cmd(a, cli.seed)?,
        Command::Junta(a) => junta(a, cli.seed, budget)?,
        Command::Probe(a) => probe(a, cli.seed)?,
        Command::Boolean(a) => boolean_cmd(a, cli.seed)?,
        Command::Verify(a) => verify_cmd(a, cli.seed)?,
    };
    let record = RunRecord {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        command: command_name(&cli.command).to_string(),
        config: outcome.config,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        rows: outcome.rows,
        summary: outcome.summary,
    };
    emit(&record, cli.out.as_deref(), cli.format)?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
