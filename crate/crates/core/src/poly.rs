//! Real multilinear polynomials on `{0,1}^N`, held both as a value table and
//! as monomial coefficients indexed by subset bitmask. Bit `i` of a mask is
//! variable `i` (0-based).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `N` whose cube is materialized.
pub const MAX_VARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedPolynomial {
    n: usize,
    coeffs: Vec<f64>,
    values: Vec<f64>,
}

fn check_vars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::BudgetExceeded { needed: 1u128 << n, budget: 1u128 << MAX_VARS });
    }
    Ok(())
}

/// In-place Möbius transform over the subset lattice (zeta inverse).
fn mobius(v: &mut [f64], n: usize) {
    for i in 0..n {
        let bit = 1 << i;
        for mask in 0..v.len() {
            if mask & bit != 0 {
                v[mask] -= v[mask ^ bit];
            }
        }
    }
}

/// In-place zeta transform: `v[S] ← Σ_{S' ⊆ S} v[S']`.
fn zeta(v: &mut [f64], n: usize) {
    for i in 0..n {
        let bit = 1 << i;
        for mask in 0..v.len() {
            if mask & bit != 0 {
                v[mask] += v[mask ^ bit];
            }
        }
    }
}

impl BoundedPolynomial {
    /// From `p(X)` for every `X`, where `X` is read as a bitmask.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        check_vars(n)?;
        if values.len() != 1 << n {
            return Err(Error::InvalidParameter(format!("expected {} values, got {}", 1usize << n, values.len())));
        }
        let mut coeffs = values.clone();
        mobius(&mut coeffs, n);
        Ok(BoundedPolynomial { n, coeffs, values })
    }

    pub fn from_coefficients(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_vars(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::InvalidParameter(format!("expected {} coefficients, got {}", 1usize << n, coeffs.len())));
        }
        let mut values = coeffs.clone();
        zeta(&mut values, n);
        Ok(BoundedPolynomial { n, coeffs, values })
    }

    /// From `(monomial variables, coefficient)` terms; variables are 0-based.
    pub fn from_terms(n: usize, terms: &[(&[usize], f64)]) -> Result<Self> {
        check_vars(n)?;
        let mut coeffs = vec![0.0; 1 << n];
        for (vars, c) in terms {
            let mut mask = 0usize;
            for &v in *vars {
                if v >= n {
                    return Err(Error::InvalidParameter(format!("variable {v} outside {n} variables")));
                }
                mask |= 1 << v;
            }
            coeffs[mask] += c;
        }
        Self::from_coefficients(n, coeffs)
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        check_vars(n)?;
        Self::from_values(n, vec![c; 1 << n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficient(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn value(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    /// Evaluates from coefficients at a bit vector.
    pub fn evaluate_bits(&self, bits: &[u32]) -> f64 {
        let x = bits_to_mask(bits);
        (0..self.coeffs.len()).filter(|&s| s & !x == 0).map(|s| self.coeffs[s]).sum()
    }

    /// Largest deviation between the value table and the coefficient expansion.
    pub fn round_trip_error(&self) -> f64 {
        let mut v = self.coeffs.clone();
        zeta(&mut v, self.n);
        v.iter().zip(&self.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest `|S|` with `|α_S| > tol`; 0 for the zero polynomial.
    pub fn degree(&self, tol: f64) -> usize {
        (0..self.coeffs.len())
            .filter(|&s| self.coeffs[s].abs() > tol)
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Largest `|α_S|` over monomials with more than `d` variables.
    pub fn max_coefficient_above(&self, d: usize) -> f64 {
        (0..self.coeffs.len())
            .filter(|&s| s.count_ones() as usize > d)
            .map(|s| self.coeffs[s].abs())
            .fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.coeffs.iter().enumerate().map(|(s, c)| c / (1u64 << (s.count_ones())) as f64).sum()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `E[|p(X) − p(X^i)|]`.
    pub fn influence(&self, i: usize) -> Result<f64> {
        if i >= self.n {
            return Err(Error::InvalidParameter(format!("variable {i} outside {} variables", self.n)));
        }
        let bit = 1 << i;
        let total: f64 = (0..self.values.len())
            .filter(|&x| x & bit == 0)
            .map(|x| (self.values[x] - self.values[x | bit]).abs())
            .sum();
        Ok(2.0 * total / self.values.len() as f64)
    }

    pub fn influences(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.influence(i).unwrap()).collect()
    }

    pub fn sum_influence(&self) -> f64 {
        self.influences().iter().sum()
    }

    /// Variable of largest influence, lowest index on ties.
    pub fn max_influence(&self) -> Option<(usize, f64)> {
        self.influences()
            .into_iter()
            .enumerate()
            .fold(None, |best, (i, v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((i, v)),
            })
    }

    /// `E_{X,Y}[|p(X) − p(Y)|]` over independent uniform `X, Y`.
    pub fn variance_l1(&self) -> f64 {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        let k = v.len() as f64;
        // Σ_{j<l} (v_l − v_j) = Σ_l v_l (2l − K + 1) with 0-based l.
        let s: f64 = v.iter().enumerate().map(|(l, &x)| x * (2.0 * l as f64 - k + 1.0)).sum();
        2.0 * s / (k * k)
    }

    /// `E[p(X)²]`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64
    }

    /// Sets variable `i` to `b`, leaving a polynomial on `N − 1` variables
    /// (higher variables shift down by one).
    pub fn restrict(&self, i: usize, b: bool) -> Result<BoundedPolynomial> {
        if i >= self.n {
            return Err(Error::InvalidParameter(format!("variable {i} outside {} variables", self.n)));
        }
        let low = (1usize << i) - 1;
        let values = (0..1usize << (self.n - 1))
            .map(|y| {
                let x = (y & low) | ((y & !low) << 1) | ((b as usize) << i);
                self.values[x]
            })
            .collect();
        BoundedPolynomial::from_values(self.n - 1, values)
    }

    /// Conditional expectation onto the variables in `keep` (as a mask):
    /// the polynomial on all `N` variables that averages out the rest.
    pub fn average_outside(&self, keep: usize) -> BoundedPolynomial {
        let mut coeffs = vec![0.0; self.coeffs.len()];
        for (s, &c) in self.coeffs.iter().enumerate() {
            let outside = s & !keep;
            coeffs[s & keep] += c / (1u64 << outside.count_ones()) as f64;
        }
        BoundedPolynomial::from_coefficients(self.n, coeffs).expect("same size")
    }

    /// `E[(p − q)²]`.
    pub fn l2_distance_sq(&self, other: &BoundedPolynomial) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / self.values.len() as f64
    }

    /// Averages `p` over all variable permutations.
    pub fn symmetrize(&self) -> BoundedPolynomial {
        let n = self.n;
        let mut by_weight = vec![(0.0, 0usize); n + 1];
        for (x, &v) in self.values.iter().enumerate() {
            let w = x.count_ones() as usize;
            by_weight[w].0 += v;
            by_weight[w].1 += 1;
        }
        let values = (0..self.values.len())
            .map(|x| {
                let (s, c) = by_weight[x.count_ones() as usize];
                s / c as f64
            })
            .collect();
        BoundedPolynomial::from_values(n, values).expect("same size")
    }

    /// Renames variables: variable `i` of the result is variable `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<BoundedPolynomial> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n || perm.iter().any(|&j| j >= self.n || std::mem::replace(&mut seen[j], true)) {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of {} variables", self.n)));
        }
        let values = (0..self.values.len())
            .map(|y| {
                let x = (0..self.n).filter(|&i| y >> i & 1 == 1).fold(0usize, |acc, i| acc | 1 << perm[i]);
                self.values[x]
            })
            .collect();
        BoundedPolynomial::from_values(self.n, values)
    }
}

pub fn bits_to_mask(bits: &[u32]) -> usize {
    bits.iter().enumerate().filter(|(_, &b)| b != 0).fold(0, |acc, (i, _)| acc | 1 << i)
}

pub fn mask_to_bits(mask: usize, n: usize) -> Vec<u32> {
    (0..n).map(|i| (mask >> i & 1) as u32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xor2() -> BoundedPolynomial {
        BoundedPolynomial::from_terms(2, &[(&[0], 1.0), (&[1], 1.0), (&[0, 1], -2.0)]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    /// Pairwise definition of `Vr`.
    fn vr_brute(p: &BoundedPolynomial) -> f64 {
        let v = p.values();
        let k = v.len() as f64;
        v.iter().flat_map(|a| v.iter().map(move |b| (a - b).abs())).sum::<f64>() / (k * k)
    }

    #[test]
    fn dictator_quantities() {
        let p = BoundedPolynomial::from_terms(2, &[(&[0], 1.0)]).unwrap();
        assert!(close(p.influence(0).unwrap(), 1.0));
        assert!(close(p.influence(1).unwrap(), 0.0));
        assert!(close(p.variance_l1(), 0.5));
        assert!(close(p.sum_influence(), 1.0));
        assert!(close(p.l2_norm_sq(), 0.5));
        assert!(close(p.mean(), 0.5));
    }

    #[test]
    fn constant_quantities() {
        let p = BoundedPolynomial::constant(3, 0.3).unwrap();
        assert!(close(p.variance_l1(), 0.0));
        assert!(close(p.sum_influence(), 0.0));
        assert!(close(p.l2_norm_sq(), 0.09));
        assert_eq!(p.degree(1e-12), 0);
        assert!(close(p.coefficient(0), 0.3));
        assert!(p.coefficients()[1..].iter().all(|&c| c.abs() < 1e-15));
    }

    #[test]
    fn xor_quantities() {
        let p = xor2();
        assert_eq!(p.values(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(close(p.influence(0).unwrap(), 1.0));
        assert!(close(p.influence(1).unwrap(), 1.0));
        assert!(close(p.sum_influence(), 2.0));
        assert!(close(p.variance_l1(), 0.5));
        assert_eq!(p.degree(1e-12), 2);
        assert!(p.influence(2).is_err());
    }

    #[test]
    fn restrictions() {
        let x1 = BoundedPolynomial::from_terms(1, &[(&[0], 1.0)]).unwrap();
        let r = x1.restrict(0, true).unwrap();
        assert_eq!((r.n(), r.values()), (0, &[1.0][..]));
        let r = xor2().restrict(0, false).unwrap();
        assert_eq!(r.values(), &[0.0, 1.0]);
        assert!(close(r.coefficient(1), 1.0));
        assert!(xor2().restrict(2, false).is_err());
    }

    #[test]
    fn conditional_expectation_of_xor() {
        let j = xor2().average_outside(0b01);
        assert!(j.values().iter().all(|&v| close(v, 0.5)));
        assert!(close(j.l2_distance_sq(&xor2()), 0.25));
    }

    #[test]
    fn oversized_cube_is_rejected() {
        assert!(matches!(BoundedPolynomial::constant(21, 0.0), Err(Error::BudgetExceeded { .. })));
    }

    fn arb_poly() -> impl Strategy<Value = BoundedPolynomial> {
        (0usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(0.0f64..1.0, 1 << n).prop_map(move |v| BoundedPolynomial::from_values(n, v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn coefficients_reproduce_values(p in arb_poly()) {
            prop_assert!(p.round_trip_error() < 1e-9);
            for x in 0..p.values().len() {
                prop_assert!((p.evaluate_bits(&mask_to_bits(x, p.n())) - p.value(x)).abs() < 1e-9);
            }
        }

        #[test]
        fn fast_vr_matches_pairwise(p in arb_poly()) {
            prop_assert!((p.variance_l1() - vr_brute(&p)).abs() < 1e-9);
        }

        #[test]
        fn restriction_commutes_and_stays_bounded(p in arb_poly(), bi in any::<bool>(), bj in any::<bool>()) {
            prop_assume!(p.n() >= 2);
            let (i, j) = (0, p.n() - 1);
            // restricting i first shifts j down by one
            let a = p.restrict(i, bi).unwrap().restrict(j - 1, bj).unwrap();
            let b = p.restrict(j, bj).unwrap().restrict(i, bi).unwrap();
            prop_assert_eq!(a.values(), b.values());
            prop_assert!(a.min_value() >= 0.0 && a.max_value() <= 1.0);
        }

        #[test]
        fn symmetrizing_and_permuting_preserve_quantities(p in arb_poly(), seed in any::<u64>()) {
            let n = p.n();
            let mut perm: Vec<usize> = (0..n).collect();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let q = p.permute(&perm).unwrap();
            prop_assert!((q.variance_l1() - p.variance_l1()).abs() < 1e-9);
            prop_assert!((q.sum_influence() - p.sum_influence()).abs() < 1e-9);
            let sym = p.symmetrize();
            let sym_q = q.symmetrize();
            prop_assert!(sym.values().iter().zip(sym_q.values()).all(|(a, b)| (a - b).abs() < 1e-12));
            prop_assert!((sym.variance_l1() - sym_q.variance_l1()).abs() < 1e-9);
            prop_assert!((sym.sum_influence() - sym_q.sum_influence()).abs() < 1e-9);
        }

        #[test]
        fn conditional_expectation_is_l2_optimal(p in arb_poly(), keep in any::<usize>(), g_seed in any::<u64>()) {
            let n = p.n();
            let keep = keep & ((1 << n) - 1);
            let best = p.average_outside(keep);
            // a random junta on the kept variables
            let mut s = g_seed;
            let table: Vec<f64> = (0..1usize << n).map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 11) as f64 / (1u64 << 53) as f64
            }).collect();
            let g = BoundedPolynomial::from_values(n, (0..1usize << n).map(|x| table[x & keep]).collect()).unwrap();
            prop_assert!(best.l2_distance_sq(&p) <= g.l2_distance_sq(&p) + 1e-12);
            prop_assert!((p.average_outside((1 << n) - 1).l2_distance_sq(&p)).abs() < 1e-12);
        }
    }
}
