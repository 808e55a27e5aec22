//! Input words, type profiles (Young diagrams), row-arrays, and
//! permutation-invariant partial functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word `(x_1, …, x_N)` over the 1-based alphabet `[M]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "WordFile", into = "WordFile")]
pub struct InputWord {
    entries: Vec<u32>,
    alphabet: u32,
}

#[derive(Serialize, Deserialize)]
struct WordFile {
    #[serde(rename = "M")]
    alphabet: u32,
    entries: Vec<u32>,
}

impl TryFrom<WordFile> for InputWord {
    type Error = Error;
    fn try_from(f: WordFile) -> Result<Self> {
        InputWord::new(f.entries, f.alphabet)
    }
}

impl From<InputWord> for WordFile {
    fn from(w: InputWord) -> Self {
        WordFile { alphabet: w.alphabet, entries: w.entries }
    }
}

impl InputWord {
    pub fn new(entries: Vec<u32>, alphabet: u32) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if alphabet == 0 {
            return Err(Error::InvalidWord("alphabet size must be positive".into()));
        }
        if let Some(bad) = entries.iter().find(|&&e| e == 0 || e > alphabet) {
            return Err(Error::InvalidWord(format!("symbol {bad} outside [1, {alphabet}]")));
        }
        Ok(InputWord { entries, alphabet })
    }

    /// Word with `count` symbols, the `j`-th block of `multiplicities[j]` copies
    /// holding symbol `j + 1`.
    pub fn from_multiplicities(multiplicities: &[usize], alphabet: u32) -> Result<Self> {
        let entries = multiplicities
            .iter()
            .enumerate()
            .flat_map(|(j, &k)| std::iter::repeat_n(j as u32 + 1, k))
            .collect();
        InputWord::new(entries, alphabet)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }
}

/// A partition of `N`: non-increasing positive parts. Indexing past the last
/// part yields 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct TypeProfile {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for TypeProfile {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        TypeProfile::new(parts)
    }
}

impl From<TypeProfile> for Vec<usize> {
    fn from(p: TypeProfile) -> Self {
        p.parts
    }
}

impl TypeProfile {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidProfile("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidProfile("parts must be positive".into()));
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProfile(format!("{parts:?} is not non-increasing")));
        }
        Ok(TypeProfile { parts })
    }

    /// Sorts and drops zeros; fails only if nothing is left.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        TypeProfile::new(parts)
    }

    /// `(k^reps)`, e.g. `uniform(2, 4)` is `(2,2,2,2)`.
    pub fn uniform(k: usize, reps: usize) -> Result<Self> {
        TypeProfile::new(vec![k; reps])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<usize> {
        (0..len.max(self.parts.len())).map(|i| self.part(i)).collect()
    }

    pub fn row_array(&self) -> RowArray {
        let n = self.n();
        RowArray { rows: self.padded(2 * n) }
    }
}

impl Index<usize> for TypeProfile {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        self.parts.get(i).unwrap_or(&0)
    }
}

impl fmt::Display for TypeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// `2N` non-negative, unsorted row lengths summing to `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowArray {
    rows: Vec<usize>,
}

impl RowArray {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        let n: usize = rows.iter().sum();
        if n == 0 {
            return Err(Error::InvalidRowArray("rows sum to zero".into()));
        }
        if rows.len() != 2 * n {
            return Err(Error::InvalidRowArray(format!(
                "length {} but rows sum to {n}, expected length {}",
                rows.len(),
                2 * n
            )));
        }
        Ok(RowArray { rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [usize] {
        &mut self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.len() / 2
    }

    /// Half the aligned L1 distance between two row-arrays of equal length.
    pub fn aligned_distance(&self, other: &RowArray) -> usize {
        let total: usize = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(&a, &b)| a.abs_diff(b))
            .sum();
        total / 2
    }
}

pub fn type_of(word: &InputWord) -> TypeProfile {
    let counts = multiplicity_counts(word);
    TypeProfile::from_unsorted(counts).expect("a non-empty word has a non-empty type")
}

/// `κ_j = |{i : x_i = j}|` for `j = 1..=M`, returned 0-based.
pub fn multiplicity_counts(word: &InputWord) -> Vec<usize> {
    let mut counts = vec![0usize; word.alphabet as usize];
    for &e in &word.entries {
        counts[e as usize - 1] += 1;
    }
    counts
}

pub fn sort_to_type(rows: &RowArray) -> TypeProfile {
    TypeProfile::from_unsorted(rows.rows.clone()).expect("row-array sums to N > 0")
}

/// `‖A − B‖ = ½ Σ |a_i − b_i|`. Equal sums make the L1 distance even, so
/// the result is an integer.
pub fn profile_distance(a: &TypeProfile, b: &TypeProfile) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::MismatchedN { left: a.n(), right: b.n() });
    }
    let len = a.len().max(b.len());
    let l1: usize = (0..len).map(|i| a.part(i).abs_diff(b.part(i))).sum();
    debug_assert!(l1.is_multiple_of(2));
    Ok(l1 / 2)
}

/// A promise problem factored through types: profiles present map to a bit,
/// absent profiles are undefined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FunctionFile", into = "FunctionFile")]
pub struct SymmetricFunction {
    n: usize,
    m: u32,
    assignments: BTreeMap<TypeProfile, bool>,
}

#[derive(Serialize, Deserialize)]
struct FunctionFile {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: u32,
    ones: Vec<TypeProfile>,
    zeros: Vec<TypeProfile>,
}

impl TryFrom<FunctionFile> for SymmetricFunction {
    type Error = Error;
    fn try_from(f: FunctionFile) -> Result<Self> {
        SymmetricFunction::new(f.n, f.m, f.ones, f.zeros)
    }
}

impl From<SymmetricFunction> for FunctionFile {
    fn from(f: SymmetricFunction) -> Self {
        FunctionFile {
            n: f.n,
            m: f.m,
            ones: f.one_types().cloned().collect(),
            zeros: f.zero_types().cloned().collect(),
        }
    }
}

impl SymmetricFunction {
    pub fn new(n: usize, m: u32, ones: Vec<TypeProfile>, zeros: Vec<TypeProfile>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidFunction("N and M must be positive".into()));
        }
        let mut assignments = BTreeMap::new();
        for (profile, value) in ones.into_iter().map(|p| (p, true)).chain(zeros.into_iter().map(|p| (p, false))) {
            if profile.n() != n {
                return Err(Error::InvalidFunction(format!("profile {profile} does not sum to N={n}")));
            }
            if profile.len() > m as usize {
                return Err(Error::InvalidFunction(format!("profile {profile} needs more than M={m} symbols")));
            }
            if let Some(prev) = assignments.insert(profile.clone(), value) {
                if prev != value {
                    return Err(Error::InvalidFunction(format!("profile {profile} is both a 1-type and a 0-type")));
                }
            }
        }
        Ok(SymmetricFunction { n, m, assignments })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn value(&self, profile: &TypeProfile) -> Option<bool> {
        self.assignments.get(profile).copied()
    }

    pub fn evaluate(&self, word: &InputWord) -> Option<bool> {
        self.value(&type_of(word))
    }

    pub fn one_types(&self) -> impl Iterator<Item = &TypeProfile> {
        self.assignments.iter().filter(|(_, &v)| v).map(|(p, _)| p)
    }

    pub fn zero_types(&self) -> impl Iterator<Item = &TypeProfile> {
        self.assignments.iter().filter(|(_, &v)| !v).map(|(p, _)| p)
    }

    pub fn defined_len(&self) -> usize {
        self.assignments.len()
    }
}

/// One-to-one (1) versus two-to-one (0).
pub fn collision_function(n: usize, m: u32) -> Result<SymmetricFunction> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("collision needs even N > 0, got {n}")));
    }
    if (m as usize) < n {
        return Err(Error::InvalidParameter(format!("collision needs M ≥ N, got M={m}, N={n}")));
    }
    SymmetricFunction::new(n, m, vec![TypeProfile::uniform(1, n)?], vec![TypeProfile::uniform(2, n / 2)?])
}

/// Constant word (1) versus balanced binary word (0), over `M = 2`.
pub fn all_equal_vs_balanced(n: usize) -> Result<SymmetricFunction> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("all-equal-vs-balanced needs even N ≥ 2, got {n}")));
    }
    SymmetricFunction::new(n, 2, vec![TypeProfile::new(vec![n])?], vec![TypeProfile::uniform(n / 2, 2)?])
}

/// Every partition of `n`, in reverse lexicographic order.
pub fn all_profiles(n: usize) -> Vec<TypeProfile> {
    fn rec(left: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<TypeProfile>) {
        if left == 0 {
            out.push(TypeProfile { parts: cur.clone() });
            return;
        }
        for k in (1..=left.min(cap)).rev() {
            cur.push(k);
            rec(left - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Type of a uniform word over `[m]`, with `m` drawn uniformly from `1..=n`.
pub fn random_profile<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> TypeProfile {
    let m = rng.random_range(1..=n.max(1));
    let mut counts = vec![0usize; m];
    for _ in 0..n {
        counts[rng.random_range(0..m)] += 1;
    }
    TypeProfile::from_unsorted(counts).expect("n > 0")
}

/// All `M^N` words in lexicographic order.
pub fn all_words(n: usize, m: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut code| {
        let mut w = vec![1u32; n];
        for slot in w.iter_mut().rev() {
            *slot = (code % m as u128) as u32 + 1;
            code /= m as u128;
        }
        w
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryCheck {
    /// Value is constant on every type class.
    TypeConstant,
    /// Additionally checks invariance under each adjacent position swap and
    /// each adjacent symbol transposition. Witnesses are then generator pairs.
    FullInvariance,
}

/// Ingests an exhaustive word table for small `N`, `M`.
pub fn validate_symmetry(
    n: usize,
    m: u32,
    word_map: &BTreeMap<Vec<u32>, Option<bool>>,
    check: SymmetryCheck,
) -> Result<SymmetricFunction> {
    let expected = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if word_map.len() as u128 != expected {
        return Err(Error::InvalidFunction(format!(
            "word map has {} entries, expected M^N = {expected}",
            word_map.len()
        )));
    }
    for w in word_map.keys() {
        InputWord::new(w.clone(), m)?;
        if w.len() != n {
            return Err(Error::InvalidWord(format!("{w:?} has length {} ≠ {n}", w.len())));
        }
    }

    if check == SymmetryCheck::FullInvariance {
        for (w, &value) in word_map {
            let mut neighbours = Vec::new();
            for i in 0..n.saturating_sub(1) {
                let mut v = w.clone();
                v.swap(i, i + 1);
                neighbours.push(v);
            }
            for s in 1..m {
                neighbours.push(
                    w.iter()
                        .map(|&e| if e == s { s + 1 } else if e == s + 1 { s } else { e })
                        .collect(),
                );
            }
            for v in neighbours {
                if word_map[&v] != value {
                    return Err(Error::NotSymmetric { first: w.clone(), second: v });
                }
            }
        }
    }

    let mut seen: BTreeMap<TypeProfile, (&Vec<u32>, Option<bool>)> = BTreeMap::new();
    for (w, &value) in word_map {
        let profile = type_of(&InputWord::new(w.clone(), m)?);
        match seen.get(&profile) {
            Some(&(first, prev)) if prev != value => {
                return Err(Error::NotSymmetric { first: first.clone(), second: w.clone() });
            }
            Some(_) => {}
            None => {
                seen.insert(profile, (w, value));
            }
        }
    }
    let (mut ones, mut zeros) = (Vec::new(), Vec::new());
    for (profile, (_, value)) in seen {
        match value {
            Some(true) => ones.push(profile),
            Some(false) => zeros.push(profile),
            None => {}
        }
    }
    SymmetricFunction::new(n, m, ones, zeros)
}
