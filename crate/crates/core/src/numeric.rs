//! Exact arithmetic shared by the capacity formulas and the verifier.
//!
//! The capacity scale is the silver ratio `1 + sqrt(2)`, so quantities we need
//! to floor, ceil, or compare are of the form `a + b*sqrt(2)` with rational
//! `a`, `b`. All such decisions are made in integer arithmetic here; `f64` is
//! only ever used for reporting. This matters because several certificate
//! inequalities are *tight* (per-vertex fractional mass can equal 1 exactly),
//! where float rounding would flip verdicts.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use thiserror::Error;

/// Rational scalar used throughout the verifier.
pub type Rat = Ratio<i128>;

/// Element of the quadratic field Q(sqrt 2): the value `a + b*sqrt(2)`.
///
/// Comparison is exact: the sign of `a + b*sqrt(2)` is decided by comparing
/// `a^2` against `2*b^2` when the two terms disagree in sign.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Q2 {
    a: Rat,
    b: Rat,
}

impl Q2 {
    pub fn new(a: Rat, b: Rat) -> Self {
        Q2 { a, b }
    }

    pub fn zero() -> Self {
        Q2::from_int(0)
    }

    pub fn one() -> Self {
        Q2::from_int(1)
    }

    pub fn from_int(v: i128) -> Self {
        Q2 {
            a: Rat::from_integer(v),
            b: Rat::zero(),
        }
    }

    pub fn from_ratio(num: i128, den: i128) -> Self {
        Q2 {
            a: Rat::new(num, den),
            b: Rat::zero(),
        }
    }

    pub fn rational(a: Rat) -> Self {
        Q2 { a, b: Rat::zero() }
    }

    pub fn sqrt2() -> Self {
        Q2 {
            a: Rat::zero(),
            b: Rat::from_integer(1),
        }
    }

    /// The silver ratio `1 + sqrt(2)`, the capacity expansion factor.
    pub fn silver_ratio() -> Self {
        Q2 {
            a: Rat::from_integer(1),
            b: Rat::from_integer(1),
        }
    }

    /// Weight carried by first-pass edges: `2 - sqrt(2)`, which equals
    /// `1 - 1/(1 + sqrt(2))`.
    pub fn pass1_weight() -> Self {
        Q2 {
            a: Rat::from_integer(2),
            b: Rat::from_integer(-1),
        }
    }

    /// `1 / (2 + sqrt(2))`, i.e. `(2 - sqrt(2)) / 2`.
    pub fn inv_silver_plus_one() -> Self {
        Q2 {
            a: Rat::from_integer(1),
            b: Rat::new(-1, 2),
        }
    }

    pub fn rational_part(&self) -> Rat {
        self.a
    }

    pub fn sqrt2_part(&self) -> Rat {
        self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign of the value.
    pub fn sign(&self) -> Ordering {
        let sa = if self.a.is_zero() {
            Ordering::Equal
        } else if self.a.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        let sb = if self.b.is_zero() {
            Ordering::Equal
        } else if self.b.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Terms disagree: a + b*sqrt(2) > 0  <=>  a^2 > 2 b^2 when a > 0,
            // and  <=>  2 b^2 > a^2 when b > 0.
            (Ordering::Greater, Ordering::Less) => {
                let lhs = self.a * self.a;
                let rhs = self.b * self.b * Rat::from_integer(2);
                lhs.cmp(&rhs)
            }
            (Ordering::Less, Ordering::Greater) => {
                let lhs = self.b * self.b * Rat::from_integer(2);
                let rhs = self.a * self.a;
                lhs.cmp(&rhs)
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(self.a) + rat_to_f64(self.b) * std::f64::consts::SQRT_2
    }
}

impl Add for Q2 {
    type Output = Q2;
    fn add(self, rhs: Q2) -> Q2 {
        Q2 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl AddAssign for Q2 {
    fn add_assign(&mut self, rhs: Q2) {
        self.a += rhs.a;
        self.b += rhs.b;
    }
}

impl Sub for Q2 {
    type Output = Q2;
    fn sub(self, rhs: Q2) -> Q2 {
        Q2 {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Neg for Q2 {
    type Output = Q2;
    fn neg(self) -> Q2 {
        Q2 {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Mul for Q2 {
    type Output = Q2;
    fn mul(self, rhs: Q2) -> Q2 {
        // (a + b r)(c + d r) = ac + 2bd + (ad + bc) r, with r = sqrt(2).
        Q2 {
            a: self.a * rhs.a + Rat::from_integer(2) * self.b * rhs.b,
            b: self.a * rhs.b + self.b * rhs.a,
        }
    }
}

impl PartialOrd for Q2 {
    fn partial_cmp(&self, other: &Q2) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q2 {
    fn cmp(&self, other: &Q2) -> Ordering {
        (*self - *other).sign()
    }
}

impl fmt::Display for Q2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt(2)", self.a, self.b)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EpsilonError {
    #[error("epsilon must be a plain decimal in (0, 1), got {0:?}")]
    Malformed(String),
    #[error("epsilon must have at most {max} decimal digits, got {got}")]
    TooPrecise { max: usize, got: usize },
    #[error("epsilon must lie strictly between 0 and 1")]
    OutOfRange,
}

/// Accuracy parameter, kept as an exact rational in `(0, 1)`.
///
/// Parsed from plain decimals ("0.1", ".25"); at most six digits after the
/// point so every derived integer quantity fits comfortably in 128 bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Epsilon {
    num: i64,
    den: i64,
}

const EPS_MAX_DIGITS: usize = 6;

impl Epsilon {
    pub fn from_fraction(num: i64, den: i64) -> Result<Self, EpsilonError> {
        if num <= 0 || den <= 0 || num >= den {
            return Err(EpsilonError::OutOfRange);
        }
        if den > 10_i64.pow(EPS_MAX_DIGITS as u32) {
            return Err(EpsilonError::TooPrecise {
                max: EPS_MAX_DIGITS,
                got: den.to_string().len(),
            });
        }
        let g = gcd(num as u64, den as u64) as i64;
        Ok(Epsilon {
            num: num / g,
            den: den / g,
        })
    }

    pub fn parse(s: &str) -> Result<Self, EpsilonError> {
        let s = s.trim();
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_part.is_empty() && frac_part.is_empty())
        {
            return Err(EpsilonError::Malformed(s.to_string()));
        }
        if frac_part.len() > EPS_MAX_DIGITS {
            return Err(EpsilonError::TooPrecise {
                max: EPS_MAX_DIGITS,
                got: frac_part.len(),
            });
        }
        let int_val: i64 = if int_part.is_empty() {
            0
        } else {
            int_part
                .parse()
                .map_err(|_| EpsilonError::Malformed(s.to_string()))?
        };
        let den = 10_i64.pow(frac_part.len() as u32);
        let frac_val: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part
                .parse()
                .map_err(|_| EpsilonError::Malformed(s.to_string()))?
        };
        Self::from_fraction(int_val * den + frac_val, den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn rat(&self) -> Rat {
        Rat::new(self.num as i128, self.den as i128)
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    /// `ceil(1 / eps)`.
    pub fn recip_ceil(&self) -> u64 {
        let (n, d) = (self.num as u64, self.den as u64);
        d.div_ceil(n)
    }

    /// Largest size an odd vertex set may have while staying strictly below
    /// `1/eps`; can be below 3, in which case no odd-set constraint applies.
    pub fn odd_set_limit(&self) -> usize {
        let (n, d) = (self.num as u64, self.den as u64);
        let limit = if d % n == 0 { d / n - 1 } else { d / n };
        limit as usize
    }

    /// Maximum augmenting-path length the local matcher eliminates:
    /// `2 * ceil(1/eps) - 1`, always odd.
    pub fn aug_length_limit(&self) -> usize {
        (2 * self.recip_ceil() - 1) as usize
    }

    /// Default capacity scale `k = ceil((sqrt(2) - 1) / eps^3)`, computed
    /// exactly. `(sqrt(2) - 1)/eps^3` equals `1/((1 + sqrt(2)) * eps^3)` and is
    /// irrational for rational eps, so the ceiling is strictly above it.
    pub fn default_k(&self) -> u64 {
        let p = self.num as i128;
        let q = self.den as i128;
        let p3 = p * p * p;
        let q3 = q * q * q;
        // Smallest m with m * p3 + q3 >= sqrt(2) * q3, i.e. (m*p3 + q3)^2 >= 2*q3^2.
        let holds = |m: i128| -> bool {
            let lhs = m * p3 + q3;
            lhs >= 0 && lhs * lhs >= 2 * q3 * q3
        };
        let guess = ((std::f64::consts::SQRT_2 - 1.0) * (q as f64 / p as f64).powi(3)).ceil();
        let mut m = guess.max(1.0) as i128;
        while holds(m - 1) && m > 1 {
            m -= 1;
        }
        while !holds(m) {
            m += 1;
        }
        m as u64
    }

    /// `floor(eps^3 * cap)` as an exact integer.
    pub fn floor_cubed_times(&self, cap: u64) -> u64 {
        let p = self.num as i128;
        let q = self.den as i128;
        let v = Rat::new(p * p * p * cap as i128, q * q * q);
        v.floor().to_integer() as u64
    }

    /// `ceil((1 - 2*eps) * cap)` as an exact integer, clamped at 0.
    pub fn ceil_one_minus_two_eps_times(&self, cap: u64) -> u64 {
        let p = self.num as i128;
        let q = self.den as i128;
        let num = (q - 2 * p) * cap as i128;
        if num <= 0 {
            return 0;
        }
        Rat::new(num, q).ceil().to_integer() as u64
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Nearest-double rendering of an `i128` ratio; accurate to a few ulp for
/// the magnitudes this crate produces, and only used for reporting.
pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// `ceil(k * sqrt(2))`, exactly: the smallest `t` with `t^2 >= 2 k^2`
/// (for `k >= 1` equality is impossible, sqrt(2) being irrational).
pub fn ceil_sqrt2_times(k: u64) -> u64 {
    if k == 0 {
        return 0;
    }
    let target = 2u128 * (k as u128) * (k as u128);
    let mut t = target.isqrt();
    if t * t < target {
        t += 1;
    }
    t as u64
}

/// The unmatched-side capacity `ceil(k * (1 + sqrt(2))) = k + ceil(k*sqrt(2))`.
pub fn kb_ceil_for(k: u64) -> u64 {
    k + ceil_sqrt2_times(k)
}

/// 64-bit finalizer with full avalanche (splitmix64's mixing step); used to
/// derive deterministic per-object pseudorandom words from a seed.
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

/// Keyed mixing of a word sequence into one 64-bit value. Deterministic
/// across runs and platforms; statistical, not cryptographic.
pub fn mix_seq(seed: u64, parts: &[u64]) -> u64 {
    let mut h = mix64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for (i, &p) in parts.iter().enumerate() {
        h = mix64(h ^ p.wrapping_add((i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
    }
    h
}
