//! State-vector simulation of `T`-query algorithms against a phase oracle on
//! `N` input bits. Basis state `|i, w⟩` (with `i ∈ 0..=N`, `w ∈ 1..=W`)
//! sits at index `i·W + (w − 1)`; slot `i = 0` is never queried.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, BoundedPolynomial};

pub const UNITARY_TOL: f64 = 1e-10;
pub const VALUE_TOL: f64 = 1e-9;
pub const DEGREE_TOL: f64 = 1e-8;
/// Largest `N` for which all final states are held at once.
pub const MAX_SENSITIVITY_VARS: usize = 16;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::InvalidCircuit(format!("matrix needs {} entries, has {}", dim * dim, data.len())));
        }
        Ok(Matrix { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for k in 0..dim {
            data[k * dim + k] = Complex64::new(1.0, 0.0);
        }
        Matrix { dim, data }
    }

    /// Builds from columns, i.e. the images of the basis vectors.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Result<Self> {
        let dim = cols.len();
        if cols.iter().any(|c| c.len() != dim) {
            return Err(Error::InvalidCircuit("columns must have the matrix dimension".into()));
        }
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, col) in cols.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                data[r * dim + j] = v;
            }
        }
        Ok(Matrix { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    /// Frobenius norm of `U†U − I`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim;
        let mut sum = 0.0;
        for a in 0..d {
            for b in 0..d {
                let mut g = Complex64::new(0.0, 0.0);
                for r in 0..d {
                    g += self.data[r * d + a].conj() * self.data[r * d + b];
                }
                if a == b {
                    g -= 1.0;
                }
                sum += g.norm_sqr();
            }
        }
        sum.sqrt()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|r| self.data[r * d..(r + 1) * d].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Haar-random unitary from Gram–Schmidt on complex Gaussian columns.
    pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
        while cols.len() < dim {
            let mut v: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            // two passes keep the columns orthogonal to working precision
            for _ in 0..2 {
                for u in &cols {
                    let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                v.iter_mut().for_each(|x| *x /= norm);
                cols.push(v);
            }
        }
        Matrix::from_columns(&cols).expect("square")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryCircuit {
    n: usize,
    t: usize,
    w: usize,
    unitaries: Vec<Matrix>,
    /// Flat basis indices of the accepting states.
    accept: Vec<usize>,
}

impl QueryCircuit {
    /// `accept` lists `(i, w)` with `w` 1-based.
    pub fn new(n: usize, t: usize, w: usize, unitaries: Vec<Matrix>, accept: &[(usize, usize)]) -> Result<Self> {
        if w == 0 {
            return Err(Error::InvalidCircuit("workspace dimension must be positive".into()));
        }
        let dim = (n + 1) * w;
        if unitaries.len() != t + 1 {
            return Err(Error::InvalidCircuit(format!("T = {t} needs {} unitaries, got {}", t + 1, unitaries.len())));
        }
        for (k, u) in unitaries.iter().enumerate() {
            if u.dim() != dim {
                return Err(Error::InvalidCircuit(format!("U_{k} has dimension {}, expected {dim}", u.dim())));
            }
            let err = u.unitarity_error();
            if err > UNITARY_TOL {
                return Err(Error::InvalidCircuit(format!("U_{k} is not unitary (‖U†U − I‖_F = {err:e})")));
            }
        }
        let mut flat = Vec::with_capacity(accept.len());
        for &(i, wi) in accept {
            if i > n || wi == 0 || wi > w {
                return Err(Error::InvalidCircuit(format!("accepting state |{i}, {wi}⟩ is outside the basis")));
            }
            flat.push(i * w + wi - 1);
        }
        flat.sort_unstable();
        flat.dedup();
        Ok(QueryCircuit { n, t, w, unitaries, accept: flat })
    }

    /// Every unitary is the identity, so the state stays at `|0, 1⟩`.
    pub fn identity(n: usize, t: usize, w: usize, accept: &[(usize, usize)]) -> Result<Self> {
        let dim = (n + 1) * w;
        Self::new(n, t, w, vec![Matrix::identity(dim); t + 1], accept)
    }

    /// Haar-random unitaries; each basis state accepts independently with
    /// probability ½ (at least one always accepts).
    pub fn random<R: Rng + ?Sized>(n: usize, t: usize, w: usize, rng: &mut R) -> Self {
        let dim = (n + 1) * w;
        let unitaries = (0..=t).map(|_| Matrix::random_unitary(dim, rng)).collect();
        let mut accept: Vec<(usize, usize)> =
            (0..dim).filter(|_| rng.random_bool(0.5)).map(|k| (k / w, k % w + 1)).collect();
        if accept.is_empty() {
            let k = rng.random_range(0..dim);
            accept.push((k / w, k % w + 1));
        }
        Self::new(n, t, w, unitaries, &accept).expect("random unitaries are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn dim(&self) -> usize {
        (self.n + 1) * self.w
    }

    pub fn unitaries(&self) -> &[Matrix] {
        &self.unitaries
    }

    pub fn accept_states(&self) -> Vec<(usize, usize)> {
        self.accept.iter().map(|&k| (k / self.w, k % self.w + 1)).collect()
    }

    fn oracle(&self, x: usize, state: &mut [Complex64]) {
        for i in 1..=self.n {
            if x >> (i - 1) & 1 == 1 {
                state[i * self.w..(i + 1) * self.w].iter_mut().for_each(|a| *a = -*a);
            }
        }
    }

    /// `U_T O_X ⋯ O_X U_0 |0, 1⟩` for the input given as a bitmask
    /// (bit `i − 1` is `x_i`).
    pub fn final_state_mask(&self, x: usize) -> Vec<Complex64> {
        let mut state = vec![Complex64::new(0.0, 0.0); self.dim()];
        state[0] = Complex64::new(1.0, 0.0);
        state = self.unitaries[0].apply(&state);
        for u in &self.unitaries[1..] {
            self.oracle(x, &mut state);
            state = u.apply(&state);
        }
        state
    }

    fn check_bits(&self, bits: &[u32]) -> Result<usize> {
        if bits.len() != self.n || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidWord(format!("expected {} bits, got {bits:?}", self.n)));
        }
        Ok(poly::bits_to_mask(bits))
    }

    pub fn final_state(&self, bits: &[u32]) -> Result<Vec<Complex64>> {
        Ok(self.final_state_mask(self.check_bits(bits)?))
    }

    pub fn acceptance_probability_mask(&self, x: usize) -> f64 {
        let state = self.final_state_mask(x);
        self.accept.iter().map(|&k| state[k].norm_sqr()).sum()
    }

    pub fn acceptance_probability(&self, bits: &[u32]) -> Result<f64> {
        Ok(self.acceptance_probability_mask(self.check_bits(bits)?))
    }

    /// Interpolates the acceptance probability over the whole cube.
    pub fn extract_polynomial(&self) -> Result<BoundedPolynomial> {
        if self.n > poly::MAX_VARS {
            return Err(Error::BudgetExceeded { needed: 1u128 << self.n, budget: 1u128 << poly::MAX_VARS });
        }
        let values: Vec<f64> = (0..1usize << self.n).into_par_iter().map(|x| self.acceptance_probability_mask(x)).collect();
        if let Some((x, &v)) = values.iter().enumerate().find(|(_, v)| !(-VALUE_TOL..=1.0 + VALUE_TOL).contains(*v)) {
            return Err(Error::OutOfRange { vertex: x, value: v });
        }
        let p = BoundedPolynomial::from_values(self.n, values)?;
        let excess = p.max_coefficient_above(2 * self.t);
        if excess > DEGREE_TOL {
            return Err(Error::InvalidCircuit(format!(
                "coefficient {excess:e} above degree 2T = {} survives interpolation",
                2 * self.t
            )));
        }
        Ok(p)
    }

    /// `E_{X,i} ‖ψ_X − ψ_{X^i}‖²` over uniform `X` and `i`.
    pub fn state_sensitivity(&self) -> Result<SensitivityReport> {
        if self.n > MAX_SENSITIVITY_VARS {
            return Err(Error::BudgetExceeded { needed: 1u128 << self.n, budget: 1u128 << MAX_SENSITIVITY_VARS });
        }
        let (n, t) = (self.n, self.t);
        let mean = if n == 0 {
            0.0
        } else {
            let states: Vec<Vec<Complex64>> = (0..1usize << n).into_par_iter().map(|x| self.final_state_mask(x)).collect();
            let total: f64 = (0..1usize << n)
                .into_par_iter()
                .map(|x| {
                    (0..n)
                        .map(|i| {
                            let y = x ^ (1 << i);
                            states[x].iter().zip(&states[y]).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>()
                        })
                        .sum::<f64>()
                })
                .sum();
            total / ((1usize << n) * n) as f64
        };
        let nf = n.max(1) as f64;
        Ok(SensitivityReport {
            mean_sq_distance: mean,
            linear_bound: 2.0 * t as f64 / nf,
            hybrid_bound: 4.0 * (t * t) as f64 / nf,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    /// `E_{X,i} ‖ψ_X − ψ_{X^i}‖²`.
    pub mean_sq_distance: f64,
    /// `2T/N`.
    pub linear_bound: f64,
    /// `4T²/N`, from summing the hybrid argument over `i`.
    pub hybrid_bound: f64,
}

impl SensitivityReport {
    pub fn within_linear_bound(&self) -> bool {
        self.mean_sq_distance <= self.linear_bound + VALUE_TOL
    }

    pub fn within_hybrid_bound(&self) -> bool {
        self.mean_sq_distance <= self.hybrid_bound + VALUE_TOL
    }
}

/// One query to a 2-bit oracle that accepts exactly when `x_1 ≠ x_2`.
pub fn deutsch_circuit() -> QueryCircuit {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64| Complex64::new(re, 0.0);
    let u0 = Matrix::from_columns(&[vec![c(0.0), c(h), c(h)], vec![c(0.0), c(h), c(-h)], vec![c(1.0), c(0.0), c(0.0)]])
        .unwrap();
    // rows: ⟨0| ← ⟨minus|, ⟨1| ← ⟨plus|, ⟨2| ← ⟨0|
    let u1 = Matrix::new(3, vec![c(0.0), c(h), c(-h), c(0.0), c(h), c(h), c(1.0), c(0.0), c(0.0)]).unwrap();
    QueryCircuit::new(2, 1, 1, vec![u0, u1], &[(0, 1)]).unwrap()
}

/// On-disk form: unitaries as row lists of `[re, im]` pairs, accepting
/// states as `[i, w]` with `w` 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "W")]
    pub w: usize,
    pub accept: Vec<[usize; 2]>,
    pub unitaries: Vec<Vec<Vec<[f64; 2]>>>,
}

impl TryFrom<CircuitFile> for QueryCircuit {
    type Error = Error;

    fn try_from(f: CircuitFile) -> Result<Self> {
        let unitaries = f
            .unitaries
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let dim = rows.len();
                if rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::InvalidCircuit(format!("U_{k} is not square")));
                }
                Matrix::new(dim, rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let accept: Vec<(usize, usize)> = f.accept.iter().map(|&[i, w]| (i, w)).collect();
        QueryCircuit::new(f.n, f.t, f.w, unitaries, &accept)
    }
}

impl From<&QueryCircuit> for CircuitFile {
    fn from(c: &QueryCircuit) -> Self {
        let d = c.dim();
        CircuitFile {
            n: c.n,
            t: c.t,
            w: c.w,
            accept: c.accept_states().into_iter().map(|(i, w)| [i, w]).collect(),
            unitaries: c
                .unitaries
                .iter()
                .map(|u| (0..d).map(|r| (0..d).map(|col| [u.get(r, col).re, u.get(r, col).im]).collect()).collect())
                .collect(),
        }
    }
}

impl Serialize for QueryCircuit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CircuitFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for QueryCircuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = CircuitFile::deserialize(d)?;
        QueryCircuit::try_from(f).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;

    #[test]
    fn deutsch_computes_xor() {
        let c = deutsch_circuit();
        for x in 0..4usize {
            let expect = ((x & 1) ^ (x >> 1 & 1)) as f64;
            assert!((c.acceptance_probability_mask(x) - expect).abs() < 1e-12);
        }
        let p = c.extract_polynomial().unwrap();
        for (mask, want) in [(0b00, 0.0), (0b01, 1.0), (0b10, 1.0), (0b11, -2.0)] {
            assert!((p.coefficient(mask) - want).abs() < 1e-9);
        }
        assert!((p.influence(0).unwrap() - 1.0).abs() < 1e-12);
        assert!((p.sum_influence() - 2.0).abs() < 1e-12);
        assert!((p.variance_l1() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn deutsch_flips_give_orthogonal_states() {
        let s = deutsch_circuit().state_sensitivity().unwrap();
        assert!((s.mean_sq_distance - 2.0).abs() < 1e-12);
        assert_eq!(s.linear_bound, 1.0);
        assert!(!s.within_linear_bound());
        assert!(s.within_hybrid_bound());
    }

    #[test]
    fn zero_query_circuits_are_constant() {
        let mut rng = trial_rng(1, 0);
        let c = QueryCircuit::random(3, 0, 2, &mut rng);
        let p = c.extract_polynomial().unwrap();
        assert_eq!(p.degree(DEGREE_TOL), 0);
        assert!(p.max_value() - p.min_value() < 1e-12);
        assert_eq!(c.state_sensitivity().unwrap().mean_sq_distance, 0.0);
        let id = QueryCircuit::identity(2, 1, 1, &[(0, 1)]).unwrap();
        assert!(id.extract_polynomial().unwrap().values().iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn validation_rejects_bad_circuits() {
        let bad = Matrix::new(3, vec![Complex64::new(1.0, 0.0); 9]).unwrap();
        assert!(QueryCircuit::new(2, 0, 1, vec![bad], &[(0, 1)]).is_err());
        assert!(QueryCircuit::new(2, 1, 1, vec![Matrix::identity(3)], &[(0, 1)]).is_err());
        assert!(QueryCircuit::new(2, 0, 1, vec![Matrix::identity(4)], &[(0, 1)]).is_err());
        assert!(QueryCircuit::identity(2, 0, 1, &[(3, 1)]).is_err());
        assert!(QueryCircuit::identity(2, 0, 1, &[(0, 2)]).is_err());
        assert!(deutsch_circuit().acceptance_probability(&[1, 2]).is_err());
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = trial_rng(2, 0);
        for dim in [1, 3, 8, 20] {
            assert!(Matrix::random_unitary(dim, &mut rng).unitarity_error() < UNITARY_TOL);
        }
    }

    #[test]
    fn random_circuits_respect_degree_and_range() {
        for trial in 0..20 {
            let mut rng = trial_rng(3, trial);
            let c = QueryCircuit::random(6, 2, 2, &mut rng);
            let p = c.extract_polynomial().unwrap();
            assert!(p.max_coefficient_above(4) <= DEGREE_TOL);
            assert!(p.min_value() >= -VALUE_TOL && p.max_value() <= 1.0 + VALUE_TOL);
            assert!(p.round_trip_error() < 1e-9);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = deutsch_circuit();
        let text = serde_json::to_string(&c).unwrap();
        let back: QueryCircuit = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["accept"], serde_json::json!([[0, 1]]));
        assert_eq!(v["unitaries"][0][0][2], serde_json::json!([1.0, 0.0]));
    }
}
