//! Exact rationals and completeness bounds.
//!
//! Every eigenvalue in the crate is a [`Rational`] backed by unbounded
//! integers. A [`Bound`] is either a finite rational or `+inf`; spectra use it
//! to state up to which value their entry list is complete.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms. Panics when `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `a`, `-a`, or `a/b` (no decimals).
pub fn parse_rational(src: &str) -> Result<Rational, String> {
    let s = src.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("invalid rational `{src}`"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("invalid rational `{src}`"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in `{src}`"));
    }
    Ok(Rational::new(num, den))
}

/// Splits a rational into a machine-sized `(numerator, denominator)` pair.
pub fn to_pair(r: &Rational) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

/// Same as [`to_pair`] with 128-bit integers.
pub fn to_pair_i128(r: &Rational) -> Option<(i128, i128)> {
    Some((r.numer().to_i128()?, r.denom().to_i128()?))
}

/// Builds a rational from an integer pair, rejecting a zero denominator.
pub fn from_pair(num: i128, den: i128) -> Option<Rational> {
    if den == 0 {
        return None;
    }
    Some(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Smallest integer `r` with `r * r >= x` for `x >= 0`.
pub fn ceil_sqrt(x: &Rational) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let target = x.ceil().to_integer();
    let mut r = target.sqrt();
    while &r * &r < target {
        r += BigInt::one();
    }
    r
}

/// Completeness bound of a truncated spectrum: a finite value or `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    Finite(Rational),
    Infinite,
}

impl Bound {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Bound::Finite(r) => Some(r),
            Bound::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinite)
    }

    /// `t <= self`.
    pub fn covers(&self, t: &Rational) -> bool {
        match self {
            Bound::Finite(b) => t <= b,
            Bound::Infinite => true,
        }
    }

    pub fn plus(&self, other: &Bound) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a + b),
            _ => Bound::Infinite,
        }
    }

    pub fn shift(&self, c: &Rational) -> Bound {
        match self {
            Bound::Finite(a) => Bound::Finite(a + c),
            Bound::Infinite => Bound::Infinite,
        }
    }

    /// Multiplication by a positive factor.
    pub fn scale(&self, c: &Rational) -> Bound {
        debug_assert!(c.is_positive());
        match self {
            Bound::Finite(a) => Bound::Finite(a * c),
            Bound::Infinite => Bound::Infinite,
        }
    }
}

impl From<Rational> for Bound {
    fn from(r: Rational) -> Self {
        Bound::Finite(r)
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            (Bound::Finite(_), Bound::Infinite) => Ordering::Less,
            (Bound::Infinite, Bound::Finite(_)) => Ordering::Greater,
            (Bound::Infinite, Bound::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(r) => write!(f, "{r}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Bound {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(Bound::Infinite),
            other => parse_rational(other).map(Bound::Finite),
        }
    }
}
