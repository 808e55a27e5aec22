//! Exact evaluation of the weighted-relation adversary quantity
//! `α = max q_{X,i} q_{Y,i}` on explicit relations, and the relations and
//! embeddings used by the hybrid lower bound.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chopper::HybridSequence;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::types::{InputWord, TypeProfile};

pub const DEFAULT_PAIR_BUDGET: u128 = 1_000_000;

/// Two disjoint word sets and a relation between them covering both sides.
/// Each pair carries a positive weight; plain relations use weight 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRelation {
    side_a: Vec<Vec<u32>>,
    side_b: Vec<Vec<u32>>,
    pairs: Vec<(usize, usize)>,
    weights: Vec<u64>,
}

impl InputRelation {
    pub fn new(side_a: Vec<Vec<u32>>, side_b: Vec<Vec<u32>>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let unique: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        Self::weighted(side_a, side_b, unique.into_iter().map(|p| (p, 1)).collect())
    }

    /// Repeated pairs have their weights summed.
    pub fn weighted(side_a: Vec<Vec<u32>>, side_b: Vec<Vec<u32>>, pairs: Vec<((usize, usize), u64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidRelation("empty relation".into()));
        }
        let n = side_a.first().map(Vec::len).unwrap_or(0);
        if side_a.iter().chain(&side_b).any(|w| w.len() != n) {
            return Err(Error::InvalidRelation("words have different lengths".into()));
        }
        let a_set: HashSet<&Vec<u32>> = side_a.iter().collect();
        if a_set.len() != side_a.len() {
            return Err(Error::InvalidRelation("duplicate word on side A".into()));
        }
        if let Some(w) = side_b.iter().find(|w| a_set.contains(w)) {
            return Err(Error::InvalidRelation(format!("word {w:?} lies in both A and B")));
        }
        let mut merged: std::collections::BTreeMap<(usize, usize), u64> = Default::default();
        for (p, w) in pairs {
            if w == 0 {
                return Err(Error::InvalidRelation(format!("pair {p:?} has zero weight")));
            }
            *merged.entry(p).or_default() += w;
        }
        let mut covered_a = vec![false; side_a.len()];
        let mut covered_b = vec![false; side_b.len()];
        for &(x, y) in merged.keys() {
            if x >= side_a.len() || y >= side_b.len() {
                return Err(Error::InvalidRelation(format!("pair ({x}, {y}) out of range")));
            }
            covered_a[x] = true;
            covered_b[y] = true;
        }
        if let Some(x) = covered_a.iter().position(|c| !c) {
            return Err(Error::InvalidRelation(format!("A word {:?} has no partner", side_a[x])));
        }
        if let Some(y) = covered_b.iter().position(|c| !c) {
            return Err(Error::InvalidRelation(format!("B word {:?} has no partner", side_b[y])));
        }
        let (pairs, weights) = merged.into_iter().unzip();
        Ok(InputRelation { side_a, side_b, pairs, weights })
    }

    pub fn side_a(&self) -> &[Vec<u32>] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[Vec<u32>] {
        &self.side_b
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    /// The same pairs with every weight reset to 1.
    pub fn unweighted(&self) -> InputRelation {
        InputRelation { weights: vec![1; self.pairs.len()], ..self.clone() }
    }

    pub fn word_len(&self) -> usize {
        self.side_a[0].len()
    }

    /// Applies a symbol map to every word on both sides.
    pub fn relabel(&self, map: impl Fn(u32) -> u32) -> Result<InputRelation> {
        let apply = |w: &Vec<u32>| w.iter().map(|&s| map(s)).collect::<Vec<_>>();
        InputRelation::weighted(
            self.side_a.iter().map(apply).collect(),
            self.side_b.iter().map(apply).collect(),
            self.pairs.iter().copied().zip(self.weights.iter().copied()).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversaryBound {
    /// `max q_{X,i} q_{Y,i}` over related pairs and coordinates where they
    /// differ, with `q` measured under the pair weights.
    pub alpha: Rational,
    /// `1/√α`.
    pub bound: f64,
    /// A pair and coordinate attaining `α`.
    pub witness: (usize, usize, usize),
}

pub fn adversary_bound(rel: &InputRelation) -> Result<AdversaryBound> {
    adversary_bound_with_budget(rel, DEFAULT_PAIR_BUDGET)
}

pub fn adversary_bound_with_budget(rel: &InputRelation, budget: u128) -> Result<AdversaryBound> {
    let needed = rel.pairs.len() as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let n = rel.word_len();
    let mut deg_a = vec![0u64; rel.side_a.len()];
    let mut deg_b = vec![0u64; rel.side_b.len()];
    let mut diff_a = vec![0u64; rel.side_a.len() * n];
    let mut diff_b = vec![0u64; rel.side_b.len() * n];
    for (&(x, y), &w) in rel.pairs.iter().zip(&rel.weights) {
        deg_a[x] += w;
        deg_b[y] += w;
        let (wx, wy) = (&rel.side_a[x], &rel.side_b[y]);
        for i in (0..n).filter(|&i| wx[i] != wy[i]) {
            diff_a[x * n + i] += w;
            diff_b[y * n + i] += w;
        }
    }
    // Track the best product as an unreduced fraction and compare by
    // cross-multiplication.
    let mut best: Option<(u128, u128, (usize, usize, usize))> = None;
    for &(x, y) in &rel.pairs {
        let (wx, wy) = (&rel.side_a[x], &rel.side_b[y]);
        for i in (0..n).filter(|&i| wx[i] != wy[i]) {
            let num = diff_a[x * n + i] as u128 * diff_b[y * n + i] as u128;
            let den = deg_a[x] as u128 * deg_b[y] as u128;
            let better = match best {
                None => true,
                Some((bn, bd, _)) => {
                    let (l, r) = (BigUint::from(num) * bd, BigUint::from(bn) * den);
                    l > r
                }
            };
            if better {
                best = Some((num, den, (x, y, i)));
            }
        }
    }
    let (num, den, witness) = best.ok_or_else(|| Error::InvalidRelation("related words never differ".into()))?;
    let g = num_integer::gcd(num, den);
    let to_i64 = |v: u128| i64::try_from(v).map_err(|_| Error::InvalidRelation("weights too large".into()));
    let alpha = Rational::new(to_i64(num / g)?, to_i64(den / g)?);
    let bound = 1.0 / alpha.to_f64().unwrap().sqrt();
    Ok(AdversaryBound { alpha, bound, witness })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn weight_words(n: usize, w: usize) -> Vec<u32> {
    (0u32..(1u32 << n)).filter(|m| m.count_ones() as usize == w).collect()
}

fn mask_to_word(mask: u32, n: usize) -> Vec<u32> {
    (0..n).map(|i| (mask >> i) & 1).collect()
}

/// Weight-`a` words versus weight-`b` words, related when `X ⪯ Y`.
pub fn weight_relation(n: usize, a: usize, b: usize) -> Result<InputRelation> {
    if a >= b || b > n {
        return Err(Error::InvalidParameter(format!("need 0 ≤ a < b ≤ N, got a={a}, b={b}, N={n}")));
    }
    if n > 20 {
        return Err(Error::InvalidParameter(format!("N = {n} too large to enumerate")));
    }
    let needed = binomial(n, a) * binomial(n - a, b - a);
    if needed > DEFAULT_PAIR_BUDGET * 16 {
        return Err(Error::BudgetExceeded { needed, budget: DEFAULT_PAIR_BUDGET * 16 });
    }
    let xs = weight_words(n, a);
    let ys = weight_words(n, b);
    let index_b: HashMap<u32, usize> = ys.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let mut pairs = Vec::new();
    for (k, &x) in xs.iter().enumerate() {
        let free = !x & ((1u32 << n) - 1);
        // all supersets of x of weight b: x | s for s ⊆ free with |s| = b − a
        let mut s = free;
        loop {
            if s.count_ones() as usize == b - a {
                pairs.push((k, index_b[&(x | s)]));
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & free;
        }
    }
    InputRelation::new(
        xs.iter().map(|&m| mask_to_word(m, n)).collect(),
        ys.iter().map(|&m| mask_to_word(m, n)).collect(),
        pairs,
    )
}

/// `(b − a)² / ((N − a) b)`.
pub fn weight_relation_alpha(n: usize, a: usize, b: usize) -> Rational {
    let gap = (b - a) as i64;
    Rational::new(gap * gap, ((n - a) * b) as i64)
}

/// Splitting `r` rows of `A_{ℓ−1}` so that each loses `chop_size` elements
/// to a new row of length `chop_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopMove {
    pub prev: TypeProfile,
    /// Profile row indices (0-based) of the chopped rows, ascending.
    pub chopped_rows: Vec<usize>,
    pub chop_size: usize,
}

impl ChopMove {
    pub fn new(prev: TypeProfile, mut chopped_rows: Vec<usize>, chop_size: usize) -> Result<Self> {
        chopped_rows.sort_unstable();
        if chopped_rows.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("a row is listed twice".into()));
        }
        if chop_size == 0 {
            return Err(Error::InvalidParameter("chop size must be positive".into()));
        }
        for &k in &chopped_rows {
            if k >= prev.len() {
                return Err(Error::InvalidParameter(format!("row {k} outside profile {prev}")));
            }
            if prev.part(k) <= chop_size {
                return Err(Error::InvalidParameter(format!(
                    "row {k} of length {} cannot lose {chop_size}",
                    prev.part(k)
                )));
            }
        }
        Ok(ChopMove { prev, chopped_rows, chop_size })
    }

    /// Recovers the move behind level `level` of a hybrid sequence, pairing
    /// each chopped row-array slot with a profile row of the same length.
    pub fn from_step(seq: &HybridSequence, level: usize) -> Result<Self> {
        let step = seq
            .steps
            .get(level.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidParameter(format!("level {level} outside 1..={}", seq.steps.len())))?;
        let prev = seq.profiles[level - 1].clone();
        let mut used = vec![false; prev.len()];
        let mut rows = Vec::new();
        for &len in &step.chopped_lengths {
            let k = (0..prev.len())
                .find(|&k| !used[k] && prev.part(k) == len)
                .expect("chopped lengths are rows of the previous profile");
            used[k] = true;
            rows.push(k);
        }
        ChopMove::new(prev, rows, step.chop_size)
    }

    pub fn rows_chopped(&self) -> usize {
        self.chopped_rows.len()
    }

    /// `d = r · chop_size`.
    pub fn distance(&self) -> usize {
        self.rows_chopped() * self.chop_size
    }

    pub fn next(&self) -> TypeProfile {
        let mut parts = self.prev.parts().to_vec();
        for &k in &self.chopped_rows {
            parts[k] -= self.chop_size;
            parts.push(self.chop_size);
        }
        TypeProfile::from_unsorted(parts).expect("chopping preserves N")
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Lexicographic successor of a multiset arrangement.
fn next_arrangement(w: &mut [u32]) -> bool {
    let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else {
        return false;
    };
    let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).unwrap();
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

fn all_arrangements(mut w: Vec<u32>) -> Vec<Vec<u32>> {
    w.sort_unstable();
    let mut out = vec![w.clone()];
    while next_arrangement(&mut w) {
        out.push(w.clone());
    }
    out
}

/// Applies the forward transformation in every possible way, given the
/// symbols `h` being chopped and the fresh symbols `g` that receive the
/// chopped-off elements (`h[j]` hands `chop_size` elements to `g[j]`).
fn transform_all(x: &[u32], h: &[u32], g: &[u32], chop_size: usize, out: &mut HashMap<Vec<u32>, u64>) {
    let n = x.len();
    let d = h.len() * chop_size;
    let per_row: Vec<Vec<Vec<usize>>> = h
        .iter()
        .map(|&sym| {
            let pos: Vec<usize> = (0..n).filter(|&i| x[i] == sym).collect();
            combinations(&pos, chop_size)
        })
        .collect();
    let mut choice = vec![0usize; h.len()];
    loop {
        // changed positions C and the fresh symbol each receives
        let mut changed: Vec<(usize, u32)> = Vec::with_capacity(d);
        for (j, &c) in choice.iter().enumerate() {
            changed.extend(per_row[j][c].iter().map(|&p| (p, g[j])));
        }
        let in_c: HashSet<usize> = changed.iter().map(|&(p, _)| p).collect();
        let rest: Vec<usize> = (0..n).filter(|i| !in_c.contains(i)).collect();
        for q in combinations(&rest, d) {
            for perm in permutations(&q) {
                let mut y = x.to_vec();
                for (&(c, sym), &target) in changed.iter().zip(&perm) {
                    y[c] = x[target];
                    y[target] = sym;
                }
                *out.entry(y).or_default() += 1;
            }
        }
        // advance the mixed-radix counter over per-row choices
        let mut k = 0;
        while k < choice.len() {
            choice[k] += 1;
            if choice[k] < per_row[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if k == choice.len() {
            break;
        }
    }
}

/// Canonical labeling: row `k` of `A_{ℓ−1}` uses symbol `k + 1` and the new
/// row split from the `j`-th chopped row uses symbol `u + j + 1`.
fn canonical_word(mv: &ChopMove) -> Vec<u32> {
    mv.prev
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(k, &len)| std::iter::repeat_n(k as u32 + 1, len))
        .collect()
}

/// All `B` words reachable from `x` under the canonical labeling, each with
/// the number of distinct transformation paths leading to it.
pub fn forward_partners(mv: &ChopMove, x: &[u32]) -> Vec<(Vec<u32>, u64)> {
    let u = mv.prev.len() as u32;
    let h: Vec<u32> = mv.chopped_rows.iter().map(|&k| k as u32 + 1).collect();
    let g: Vec<u32> = (0..h.len() as u32).map(|j| u + j + 1).collect();
    let mut out = HashMap::new();
    transform_all(x, &h, &g, mv.chop_size, &mut out);
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort_unstable();
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Labeling {
    /// Fixed symbols per row; all position arrangements.
    Canonical,
    /// Every word of the right type over `[M]`, every admissible choice of
    /// chopped and fresh symbols.
    AllLabelings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChopRelation {
    pub chop: ChopMove,
    pub next: TypeProfile,
    pub alphabet: u32,
    /// Pairs weighted by the number of transformation paths from `X` to `Y`;
    /// `relation.unweighted()` gives the bare set of pairs.
    pub relation: InputRelation,
}

impl ChopRelation {
    /// `d / (N − d)` as an exact rational.
    pub fn product_limit(&self) -> Rational {
        let n = self.chop.prev.n();
        let d = self.chop.distance();
        Rational::new(d as i64, (n - d) as i64)
    }
}

fn multinomial(parts: &[usize]) -> u128 {
    let mut left = 0;
    parts.iter().fold(1u128, |acc, &p| {
        left += p;
        acc.saturating_mul(binomial(left, p))
    })
}

/// Builds the relation between inputs of type `A_{ℓ−1}` and `A_ℓ` described
/// by the chop move. Requires `d ≤ N/2`.
pub fn chop_relation(mv: &ChopMove, alphabet: u32, labeling: Labeling, budget: u128) -> Result<ChopRelation> {
    let n = mv.prev.n();
    let r = mv.rows_chopped();
    let d = mv.distance();
    if r == 0 {
        return Err(Error::InvalidParameter("no rows chopped".into()));
    }
    if 2 * d > n {
        return Err(Error::InvalidParameter(format!("d = {d} exceeds N/2 = {}", n as f64 / 2.0)));
    }
    let u = mv.prev.len();
    if (alphabet as usize) < u + r {
        return Err(Error::InvalidParameter(format!("alphabet {alphabet} cannot host {} symbols", u + r)));
    }
    let next = mv.next();

    // |A| bounds the pair count from below; the path count bounds the work
    // spent on a single X.
    let words = side_a_count(&mv.prev, alphabet, labeling);
    if words > budget {
        return Err(Error::BudgetExceeded { needed: words, budget });
    }
    let work = per_x_work(mv, alphabet, labeling);
    if work > budget {
        return Err(Error::BudgetExceeded { needed: work, budget });
    }

    let side_a: Vec<Vec<u32>> = match labeling {
        Labeling::Canonical => all_arrangements(canonical_word(mv)),
        Labeling::AllLabelings => labeled_words(&mv.prev, alphabet),
    };
    let partners_of = |x: &[u32]| -> Vec<(Vec<u32>, u64)> {
        match labeling {
            Labeling::Canonical => forward_partners(mv, x),
            Labeling::AllLabelings => labeled_partners(mv, x, alphabet),
        }
    };
    // Every X sees the same number of partners up to relabeling of positions
    // and symbols, so the pair count is |A| × |partners(A[0])|.
    let per_x = partners_of(&side_a[0]).len() as u128;
    let needed = per_x * side_a.len() as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let mut index_b: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut side_b: Vec<Vec<u32>> = Vec::new();
    let mut pairs = Vec::with_capacity(needed as usize);
    for (xa, x) in side_a.iter().enumerate() {
        for (y, paths) in partners_of(x) {
            let next_id = side_b.len();
            let yb = *index_b.entry(y.clone()).or_insert_with(|| {
                side_b.push(y);
                next_id
            });
            pairs.push(((xa, yb), paths));
        }
    }
    let relation = InputRelation::weighted(side_a, side_b, pairs)?;
    Ok(ChopRelation { chop: mv.clone(), next, alphabet, relation })
}

fn falling(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n.saturating_sub(i) as u128))
}

/// Number of words of type `profile`, over the canonical symbols or over `[M]`.
fn side_a_count(profile: &TypeProfile, alphabet: u32, labeling: Labeling) -> u128 {
    let arrangements = multinomial(profile.parts());
    match labeling {
        Labeling::Canonical => arrangements,
        Labeling::AllLabelings => {
            let mut same = BTreeMap::new();
            for &p in profile.parts() {
                *same.entry(p).or_insert(0usize) += 1;
            }
            let symmetry: u128 = same.values().map(|&m| falling(m, m)).product();
            arrangements.saturating_mul(falling(alphabet as usize, profile.len())) / symmetry
        }
    }
}

/// Transformation paths explored from one `X`.
fn per_x_work(mv: &ChopMove, alphabet: u32, labeling: Labeling) -> u128 {
    let (n, d, r) = (mv.prev.n(), mv.distance(), mv.rows_chopped());
    let chosen = mv.chopped_rows.iter().fold(1u128, |acc, &k| acc.saturating_mul(binomial(mv.prev.part(k), mv.chop_size)));
    let base = chosen.saturating_mul(binomial(n - d, d)).saturating_mul(falling(d, d));
    match labeling {
        Labeling::Canonical => base,
        Labeling::AllLabelings => {
            let unused = (alphabet as usize).saturating_sub(mv.prev.len());
            base.saturating_mul(falling(unused, r)).saturating_mul(falling(r, r))
        }
    }
}

/// Upper bound on the pair count of the canonical relation, without
/// enumerating it.
pub fn canonical_pair_estimate(mv: &ChopMove) -> u128 {
    multinomial(mv.prev.parts()).saturating_mul(per_x_work(mv, 0, Labeling::Canonical))
}

/// Every chop move on profiles of size `n` with `d ≤ N/2`, one per multiset
/// of chopped row lengths.
pub fn enumerable_chop_moves(n: usize) -> Vec<ChopMove> {
    let mut out = Vec::new();
    for prev in crate::types::all_profiles(n) {
        for size in 1..=n / 2 {
            let eligible: Vec<usize> = (0..prev.len()).filter(|&k| prev.part(k) > size).collect();
            let mut seen = BTreeSet::new();
            for r in 1..=eligible.len() {
                if 2 * r * size > n {
                    break;
                }
                for rows in combinations(&eligible, r) {
                    let lengths: Vec<usize> = rows.iter().map(|&k| prev.part(k)).collect();
                    if seen.insert(lengths) {
                        out.push(ChopMove::new(prev.clone(), rows, size).expect("eligible rows"));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChopBoundCheck {
    pub chop: ChopMove,
    pub pairs: usize,
    pub alpha: Rational,
    pub limit: Rational,
}

impl ChopBoundCheck {
    pub fn holds(&self) -> bool {
        self.alpha <= self.limit
    }

    /// `α / (d/(N − d))`.
    pub fn ratio(&self) -> Rational {
        self.alpha / self.limit
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChopBoundSweep {
    pub checked: Vec<ChopBoundCheck>,
    /// Moves whose relation exceeded the pair budget.
    pub skipped: Vec<ChopMove>,
}

impl ChopBoundSweep {
    pub fn violations(&self) -> impl Iterator<Item = &ChopBoundCheck> {
        self.checked.iter().filter(|c| !c.holds())
    }

    pub fn worst(&self) -> Option<&ChopBoundCheck> {
        self.checked.iter().max_by(|a, b| a.ratio().cmp(&b.ratio()))
    }
}

/// How pairs of a chop relation are weighted when measuring `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weighting {
    /// Uniform over distinct partners.
    Uniform,
    /// Proportional to the number of transformation paths.
    PathCount,
}

/// Evaluates `α ≤ d/(N − d)` on every enumerable chop relation for
/// `N ≤ n_max`, with alphabet `u + r`.
pub fn chop_bound_sweep(n_max: usize, labeling: Labeling, weighting: Weighting, budget: u128) -> ChopBoundSweep {
    let moves: Vec<ChopMove> = (2..=n_max).flat_map(enumerable_chop_moves).collect();
    let results: Vec<std::result::Result<ChopBoundCheck, ChopMove>> = moves
        .into_par_iter()
        .map(|mv| {
            let alphabet = (mv.prev.len() + mv.rows_chopped()) as u32;
            match chop_relation(&mv, alphabet, labeling, budget) {
                Ok(cr) => {
                    let rel = match weighting {
                        Weighting::Uniform => cr.relation.unweighted(),
                        Weighting::PathCount => cr.relation.clone(),
                    };
                    let alpha = adversary_bound_with_budget(&rel, budget).expect("within budget").alpha;
                    Ok(ChopBoundCheck { pairs: cr.relation.pairs().len(), limit: cr.product_limit(), alpha, chop: mv })
                }
                Err(_) => Err(mv),
            }
        })
        .collect();
    let mut sweep = ChopBoundSweep { checked: Vec::new(), skipped: Vec::new() };
    for r in results {
        match r {
            Ok(c) => sweep.checked.push(c),
            Err(mv) => sweep.skipped.push(mv),
        }
    }
    sweep
}

/// Every word over `[M]` whose type is `profile`: canonical arrangements
/// composed with every injective assignment of symbols to rows.
fn labeled_words(profile: &TypeProfile, alphabet: u32) -> Vec<Vec<u32>> {
    let u = profile.len();
    let symbols: Vec<usize> = (1..=alphabet as usize).collect();
    let arrangements = all_arrangements(
        profile
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(k, &len)| std::iter::repeat_n(k as u32, len))
            .collect(),
    );
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for chosen in combinations(&symbols, u) {
        for sigma in permutations(&chosen) {
            for w in &arrangements {
                let word: Vec<u32> = w.iter().map(|&k| sigma[k as usize] as u32).collect();
                if seen.insert(word.clone()) {
                    out.push(word);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn labeled_partners(mv: &ChopMove, x: &[u32], alphabet: u32) -> Vec<(Vec<u32>, u64)> {
    let mut counts = vec![0usize; alphabet as usize + 1];
    for &s in x {
        counts[s as usize] += 1;
    }
    let lengths: Vec<usize> = mv.chopped_rows.iter().map(|&k| mv.prev.part(k)).collect();
    let unused: Vec<usize> = (1..=alphabet as usize).filter(|&s| counts[s] == 0).collect();
    let r = lengths.len();
    let mut out = HashMap::new();
    // ordered choices of distinct chopped symbols with the right multiplicities
    let mut h_choices: Vec<Vec<u32>> = Vec::new();
    fn pick(lengths: &[usize], counts: &[usize], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == lengths.len() {
            out.push(cur.clone());
            return;
        }
        let want = lengths[cur.len()];
        for s in 1..counts.len() as u32 {
            if counts[s as usize] == want && !cur.contains(&s) {
                cur.push(s);
                pick(lengths, counts, cur, out);
                cur.pop();
            }
        }
    }
    pick(&lengths, &counts, &mut Vec::new(), &mut h_choices);
    for h in &h_choices {
        for g_set in combinations(&unused, r) {
            for g in permutations(&g_set) {
                let g: Vec<u32> = g.into_iter().map(|s| s as u32).collect();
                transform_all(x, h, &g, mv.chop_size, &mut out);
            }
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort_unstable();
    v
}

/// Embeds a Set Equality instance `(Y, Z)` into a word whose type is
/// `A_{ℓ−1}` when `Y = Z` as sets and `A_ℓ` when they are disjoint.
pub fn embed_set_equality(y: &[u32], z: &[u32], mv: &ChopMove, fresh: &[u32], alphabet: u32) -> Result<InputWord> {
    let r = mv.rows_chopped();
    if y.len() != r || z.len() != r {
        return Err(Error::InvalidParameter(format!(
            "Y and Z need one symbol per chopped row ({r}), got {} and {}",
            y.len(),
            z.len()
        )));
    }
    let ys: BTreeSet<u32> = y.iter().copied().collect();
    let zs: BTreeSet<u32> = z.iter().copied().collect();
    if ys.len() != r || zs.len() != r {
        return Err(Error::PromiseViolation("Y or Z repeats a symbol".into()));
    }
    if ys != zs && !ys.is_disjoint(&zs) {
        return Err(Error::PromiseViolation("Y and Z are neither equal nor disjoint".into()));
    }
    let unchopped: Vec<usize> = (0..mv.prev.len()).filter(|k| !mv.chopped_rows.contains(k)).collect();
    let fresh_set: BTreeSet<u32> = fresh.iter().copied().collect();
    if fresh_set.len() != fresh.len() {
        return Err(Error::InvalidParameter("fresh symbols repeat".into()));
    }
    if fresh.len() < unchopped.len() {
        return Err(Error::InvalidParameter(format!(
            "need {} fresh symbols, got {}",
            unchopped.len(),
            fresh.len()
        )));
    }
    if fresh[..unchopped.len()].iter().any(|w| ys.contains(w) || zs.contains(w)) {
        return Err(Error::InvalidParameter("fresh symbols collide with Y ∪ Z".into()));
    }
    let s = mv.chop_size;
    let mut entries = Vec::with_capacity(mv.prev.n());
    for (k, &row) in mv.chopped_rows.iter().enumerate() {
        entries.extend(std::iter::repeat_n(y[k], mv.prev.part(row) - s));
        entries.extend(std::iter::repeat_n(z[k], s));
    }
    for (w, &row) in fresh.iter().zip(&unchopped) {
        entries.extend(std::iter::repeat_n(*w, mv.prev.part(row)));
    }
    InputWord::new(entries, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chopper::chop_sequence;
    use crate::types::type_of;

    fn prof(p: &[usize]) -> TypeProfile {
        TypeProfile::new(p.to_vec()).unwrap()
    }

    /// Direct transcription of the q definitions, one pair at a time.
    fn brute_alpha(rel: &InputRelation) -> f64 {
        let partners_a = |x: usize| rel.pairs().iter().filter(move |p| p.0 == x).map(|p| p.1);
        let partners_b = |y: usize| rel.pairs().iter().filter(move |p| p.1 == y).map(|p| p.0);
        let mut best: f64 = 0.0;
        for &(x, y) in rel.pairs() {
            let (wx, wy) = (&rel.side_a()[x], &rel.side_b()[y]);
            for i in 0..wx.len() {
                if wx[i] == wy[i] {
                    continue;
                }
                let pa: Vec<usize> = partners_a(x).collect();
                let qx = pa.iter().filter(|&&yy| rel.side_b()[yy][i] != wx[i]).count() as f64 / pa.len() as f64;
                let pb: Vec<usize> = partners_b(y).collect();
                let qy = pb.iter().filter(|&&xx| rel.side_a()[xx][i] != wy[i]).count() as f64 / pb.len() as f64;
                best = best.max(qx * qy);
            }
        }
        best
    }

    #[test]
    fn grover_instance() {
        for n in 1..=8 {
            let rel = weight_relation(n, 0, 1).unwrap();
            let adv = adversary_bound(&rel).unwrap();
            assert_eq!(adv.alpha, Rational::new(1, n as i64));
            assert!((adv.bound - (n as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_relation_small_cases() {
        let rel = weight_relation(3, 0, 3).unwrap();
        assert_eq!(rel.pairs(), &[(0, 0)]);
        assert_eq!(rel.side_a(), &[vec![0, 0, 0]]);
        assert_eq!(rel.side_b(), &[vec![1, 1, 1]]);
        let rel = weight_relation(3, 1, 2).unwrap();
        for x in 0..rel.side_a().len() {
            assert_eq!(rel.pairs().iter().filter(|p| p.0 == x).count(), 2);
        }
        assert!(weight_relation(3, 2, 2).is_err());
    }

    #[test]
    fn weight_relation_matches_closed_form_and_brute_force() {
        for n in 1..=6 {
            for b in 1..=n {
                for a in 0..b {
                    let rel = weight_relation(n, a, b).unwrap();
                    let adv = adversary_bound(&rel).unwrap();
                    assert_eq!(adv.alpha, weight_relation_alpha(n, a, b), "N={n} a={a} b={b}");
                    assert!((adv.alpha.to_f64().unwrap() - brute_alpha(&rel)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn relation_validation() {
        assert!(InputRelation::new(vec![vec![0]], vec![vec![1]], vec![]).is_err());
        assert!(InputRelation::new(vec![vec![0]], vec![vec![0]], vec![(0, 0)]).is_err());
        assert!(InputRelation::new(vec![vec![0], vec![2]], vec![vec![1]], vec![(0, 0)]).is_err());
    }

    #[test]
    fn alpha_invariant_under_relabeling() {
        let rel = weight_relation(5, 1, 3).unwrap();
        let swapped = rel.relabel(|s| 7 - s).unwrap();
        assert_eq!(adversary_bound(&rel).unwrap().alpha, adversary_bound(&swapped).unwrap().alpha);
        let mv = ChopMove::new(prof(&[3, 2, 1]), vec![0], 1).unwrap();
        let cr = chop_relation(&mv, 4, Labeling::Canonical, DEFAULT_PAIR_BUDGET).unwrap();
        let shifted = cr.relation.relabel(|s| s + 10).unwrap();
        assert_eq!(adversary_bound(&cr.relation).unwrap().alpha, adversary_bound(&shifted).unwrap().alpha);
    }

    #[test]
    fn chop_relation_four_to_two_two() {
        let mv = ChopMove::new(prof(&[4]), vec![0], 2).unwrap();
        let cr = chop_relation(&mv, 2, Labeling::Canonical, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(cr.next, prof(&[2, 2]));
        assert_eq!(cr.relation.side_a().len(), 1);
        assert_eq!(cr.relation.side_b().len(), 6);
        for y in cr.relation.side_b() {
            assert_eq!(type_of(&InputWord::new(y.clone(), 2).unwrap()), prof(&[2, 2]));
        }
        let adv = adversary_bound(&cr.relation).unwrap();
        assert_eq!(adv.alpha, Rational::new(1, 2));
        assert!(adv.alpha <= cr.product_limit());
        assert_eq!(cr.product_limit(), Rational::new(1, 1));
    }

    #[test]
    fn chop_relation_rejects_degenerate_moves() {
        let none = ChopMove::new(prof(&[4]), vec![], 2).unwrap();
        assert!(chop_relation(&none, 4, Labeling::Canonical, DEFAULT_PAIR_BUDGET).is_err());
        let too_far = ChopMove::new(prof(&[3, 3]), vec![0, 1], 2).unwrap();
        assert!(chop_relation(&too_far, 4, Labeling::Canonical, DEFAULT_PAIR_BUDGET).is_err());
        let small_alphabet = ChopMove::new(prof(&[4, 2]), vec![0], 1).unwrap();
        assert!(chop_relation(&small_alphabet, 2, Labeling::Canonical, DEFAULT_PAIR_BUDGET).is_err());
        assert!(ChopMove::new(prof(&[2, 2]), vec![0], 2).is_err());
    }

    #[test]
    fn chop_relation_sides_have_expected_types() {
        let mv = ChopMove::new(prof(&[3, 2, 1]), vec![0, 1], 1).unwrap();
        let cr = chop_relation(&mv, 5, Labeling::Canonical, DEFAULT_PAIR_BUDGET).unwrap();
        for x in cr.relation.side_a() {
            assert_eq!(type_of(&InputWord::new(x.clone(), 5).unwrap()), mv.prev);
        }
        for y in cr.relation.side_b() {
            assert_eq!(type_of(&InputWord::new(y.clone(), 5).unwrap()), cr.next);
        }
        assert!(cr.relation.pairs().len() as u128 <= canonical_pair_estimate(&mv));
    }

    #[test]
    fn figure_instance_transformation_is_related() {
        // N = 11, two rows of length 3 chopped by 2, h_1 = 1, h_2 = 2.
        let mv = ChopMove::new(prof(&[3, 3, 2, 2, 1]), vec![0, 1], 2).unwrap();
        assert_eq!(mv.distance(), 4);
        let x = vec![1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 5];
        // change two 1s and two 2s, then swap them with four unchanged elements
        let y = vec![3, 3, 1, 4, 5, 2, 6, 6, 7, 4, 7];
        let partners = forward_partners(&mv, &x);
        assert!(partners.iter().any(|(p, paths)| p == &y && *paths >= 1));
        assert_eq!(type_of(&InputWord::new(y, 7).unwrap()), mv.next());
        assert!(partners.iter().all(|(p, _)| type_of(&InputWord::new(p.clone(), 7).unwrap()) == mv.next()));
    }

    #[test]
    fn labelings_can_differ() {
        let mv = ChopMove::new(prof(&[2, 2]), vec![0], 1).unwrap();
        let canon = chop_relation(&mv, 3, Labeling::Canonical, DEFAULT_PAIR_BUDGET).unwrap();
        let full = chop_relation(&mv, 3, Labeling::AllLabelings, DEFAULT_PAIR_BUDGET).unwrap();
        assert_eq!(adversary_bound(&canon.relation).unwrap().alpha, Rational::new(1, 2));
        assert_eq!(adversary_bound(&full.relation).unwrap().alpha, Rational::new(5, 24));
    }

    #[test]
    fn path_weights_meet_the_limit_on_one_singleton_chops() {
        for n in 3..=7 {
            let mv = ChopMove::new(prof(&[n - 1, 1]), vec![0], 1).unwrap();
            let cr = chop_relation(&mv, 3, Labeling::Canonical, DEFAULT_PAIR_BUDGET).unwrap();
            assert_eq!(adversary_bound(&cr.relation).unwrap().alpha, cr.product_limit());
            assert_eq!(adversary_bound(&cr.relation.unweighted()).unwrap().alpha, Rational::new(1, 2));
            let full = chop_relation(&mv, 3, Labeling::AllLabelings, DEFAULT_PAIR_BUDGET).unwrap();
            assert!(adversary_bound(&full.relation).unwrap().alpha < full.product_limit());
        }
    }

    #[test]
    fn product_limit_fails_on_three_two() {
        // (3,2) losing one element of the first row: α exceeds d/(N−d) = 1/4
        // under every labeling and weighting.
        let mv = ChopMove::new(prof(&[3, 2]), vec![0], 1).unwrap();
        for labeling in [Labeling::Canonical, Labeling::AllLabelings] {
            let cr = chop_relation(&mv, 3, labeling, DEFAULT_PAIR_BUDGET).unwrap();
            assert_eq!(cr.product_limit(), Rational::new(1, 4));
            for rel in [cr.relation.clone(), cr.relation.unweighted()] {
                assert!(adversary_bound(&rel).unwrap().alpha > cr.product_limit(), "{labeling:?}");
            }
        }
    }

    #[test]
    fn enumerated_moves_are_valid_and_distinct() {
        let moves = enumerable_chop_moves(5);
        assert!(moves.iter().all(|m| 2 * m.distance() <= 5 && m.next().n() == 5));
        let keys: BTreeSet<_> = moves
            .iter()
            .map(|m| (m.prev.clone(), m.chop_size, m.chopped_rows.iter().map(|&k| m.prev.part(k)).collect::<Vec<_>>()))
            .collect();
        assert_eq!(keys.len(), moves.len());
        assert!(moves.iter().any(|m| m.prev == prof(&[4, 1]) && m.chop_size == 2));
        assert!(enumerable_chop_moves(1).is_empty());
    }

    #[test]
    fn small_sweep_reports_counterexamples() {
        let sweep = chop_bound_sweep(4, Labeling::Canonical, Weighting::PathCount, DEFAULT_PAIR_BUDGET);
        assert!(sweep.skipped.is_empty());
        let worst = sweep.worst().unwrap();
        assert_eq!(worst.ratio(), Rational::new(3, 2));
        assert!(sweep.violations().count() > 0);
    }

    #[test]
    fn from_step_recovers_chop() {
        let seq = chop_sequence(&prof(&[4]), &prof(&[1, 1, 1, 1])).unwrap();
        let mv1 = ChopMove::from_step(&seq, 1).unwrap();
        assert_eq!((mv1.prev.clone(), mv1.chopped_rows.clone(), mv1.chop_size), (prof(&[4]), vec![0], 2));
        assert_eq!(mv1.next(), seq.profiles[1]);
        let mv2 = ChopMove::from_step(&seq, 2).unwrap();
        assert_eq!(mv2.chopped_rows, vec![0, 1]);
        assert_eq!(mv2.next(), seq.profiles[2]);
        assert!(ChopMove::from_step(&seq, 3).is_err());
        assert!(ChopMove::from_step(&seq, 0).is_err());
    }

    #[test]
    fn set_equality_hand_constructions() {
        let mv = ChopMove::new(prof(&[4]), vec![0], 2).unwrap();
        let equal = embed_set_equality(&[7], &[7], &mv, &[], 9).unwrap();
        assert_eq!(equal.entries(), &[7, 7, 7, 7]);
        assert_eq!(type_of(&equal), prof(&[4]));
        let disjoint = embed_set_equality(&[7], &[9], &mv, &[], 9).unwrap();
        assert_eq!(type_of(&disjoint), prof(&[2, 2]));
    }

    #[test]
    fn set_equality_without_chops_uses_fresh_symbols() {
        let mv = ChopMove::new(prof(&[2, 1]), vec![], 1).unwrap();
        let w = embed_set_equality(&[], &[], &mv, &[5, 6], 6).unwrap();
        assert_eq!(w.entries(), &[5, 5, 6]);
        assert_eq!(type_of(&w), mv.prev);
        assert_eq!(mv.next(), mv.prev);
    }

    #[test]
    fn set_equality_promise_errors() {
        let mv = ChopMove::new(prof(&[3, 3, 1]), vec![0, 1], 1).unwrap();
        assert!(embed_set_equality(&[1, 2], &[2, 3], &mv, &[9], 9).is_err());
        assert!(embed_set_equality(&[1, 1], &[1, 1], &mv, &[9], 9).is_err());
        assert!(embed_set_equality(&[1, 2], &[3, 4], &mv, &[1], 9).is_err());
        assert!(embed_set_equality(&[1, 2], &[3, 4], &mv, &[], 9).is_err());
        assert!(embed_set_equality(&[1, 2], &[2, 1], &mv, &[9], 9).is_ok());
    }

    #[test]
    fn oversized_moves_are_refused_before_enumeration() {
        let mv = ChopMove::new(prof(&[2; 8]), (0..8).collect(), 1).unwrap();
        for labeling in [Labeling::Canonical, Labeling::AllLabelings] {
            assert!(matches!(chop_relation(&mv, 16, labeling, DEFAULT_PAIR_BUDGET), Err(Error::BudgetExceeded { .. })));
        }
    }

    #[test]
    fn word_counts_match_enumeration() {
        for parts in [&[2, 2][..], &[3, 1], &[2, 1, 1], &[4]] {
            let p = prof(parts);
            for m in [p.len() as u32, p.len() as u32 + 2] {
                assert_eq!(side_a_count(&p, m, Labeling::AllLabelings), labeled_words(&p, m).len() as u128, "{p} over {m}");
            }
            let canon: Vec<u32> = p.parts().iter().enumerate().flat_map(|(k, &l)| std::iter::repeat_n(k as u32 + 1, l)).collect();
            assert_eq!(side_a_count(&p, 0, Labeling::Canonical), all_arrangements(canon).len() as u128);
        }
    }
}
