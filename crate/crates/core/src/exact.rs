//! Comparisons of the form `x ⋚ a + b / T^c` with rational `c = p/q`.
//!
//! `T^c` is irrational in general. An f64 evaluation decides every
//! comparison outside a relative guard band of `GUARD`; inside it the
//! comparison is settled exactly as `(x − a)^q · T^p ⋚ b^q` over big
//! rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

const GUARD: f64 = 1e-9;

/// Exponent `c ∈ (0, 1]`, kept as a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Exponent(Ratio<u32>);

impl Exponent {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num == 0 || num > den {
            return Err(Error::InvalidParameter(format!("exponent {num}/{den} outside (0, 1]")));
        }
        Ok(Exponent(Ratio::new(num, den)))
    }

    /// The `c = 2/7` choice that balances the two hybrid lower bounds.
    pub fn two_sevenths() -> Self {
        Exponent(Ratio::new(2, 7))
    }

    pub fn numer(&self) -> u32 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u32 {
        *self.0.denom()
    }

    pub fn value(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `T^c` in floating point.
    pub fn power_of(&self, t: u64) -> f64 {
        (t as f64).powf(self.value())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse exponent {s:?}; expected p/q"));
        match s.split_once('/') {
            Some((p, q)) => Exponent::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => {
                let p: u32 = s.trim().parse().map_err(|_| bad())?;
                Exponent::new(p, 1)
            }
        }
    }
}

impl TryFrom<String> for Exponent {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Exponent> for String {
    fn from(c: Exponent) -> String {
        c.to_string()
    }
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Sign of `x − (a + b / T^c)`, with `b ≥ 0` and `T ≥ 1`.
pub fn compare_scaled(x: Rational, a: Rational, b: Rational, t: u64, c: Exponent) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    debug_assert!(!b.is_negative() && t >= 1);
    let lhs = to_f64(&x);
    let rhs = to_f64(&a) + to_f64(&b) / c.power_of(t);
    let scale = lhs.abs().max(rhs.abs()).max(1.0);
    if (lhs - rhs).abs() > GUARD * scale {
        return lhs.partial_cmp(&rhs).expect("finite operands");
    }
    let d = to_big(&x) - to_big(&a);
    if b.is_zero() || !d.is_positive() {
        return if b.is_zero() { d.cmp(&BigRational::zero()) } else { Ordering::Less };
    }
    let q = c.denom() as usize;
    let left = num_traits::pow(d, q) * BigRational::from_integer(num_traits::pow(BigInt::from(t), c.numer() as usize));
    let right = num_traits::pow(to_big(&b), q);
    left.cmp(&right)
}

/// `x > a + b / T^c`.
pub fn exceeds(x: Rational, a: Rational, b: Rational, t: u64, c: Exponent) -> bool {
    compare_scaled(x, a, b, t, c) == std::cmp::Ordering::Greater
}

/// `x ≤ a + b / T^c`.
pub fn within(x: Rational, a: Rational, b: Rational, t: u64, c: Exponent) -> bool {
    !exceeds(x, a, b, t, c)
}

/// Integer-valued convenience for `|u − v|` as a rational.
pub fn abs_diff(u: Rational, v: Rational) -> Rational {
    (u - v).abs()
}

pub fn int(v: usize) -> Rational {
    Rational::from_integer(v as i64)
}

pub fn frac(n: usize, d: usize) -> Rational {
    Rational::new(n as i64, d as i64)
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
