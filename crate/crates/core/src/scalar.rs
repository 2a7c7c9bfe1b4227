//! Exact rationals extended by `-inf` and `+inf`.
//!
//! Every filtration value, interval endpoint and distance in the crate is an
//! [`ExtendedRational`]. Infinities take part in the order, in `min`/`max`,
//! in `abs`, and in addition with finite values. Adding infinities of opposite
//! sign panics.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedRational {
    NegInfinity,
    Finite(BigRational),
    PosInfinity,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseRationalError(pub String);

impl ExtendedRational {
    pub fn zero() -> Self {
        Self::Finite(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom` in lowest terms. Panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            Self::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Finite(q) if q.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Self::NegInfinity => true,
            Self::Finite(q) => q.is_negative(),
            Self::PosInfinity => false,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Self::NegInfinity => false,
            Self::Finite(q) => q.is_positive(),
            Self::PosInfinity => true,
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Self::Finite(q) => Self::Finite(q.abs()),
            _ => Self::PosInfinity,
        }
    }

    pub fn half(&self) -> Self {
        match self {
            Self::Finite(q) => Self::Finite(q / BigInt::from(2)),
            other => other.clone(),
        }
    }

    pub fn double(&self) -> Self {
        match self {
            Self::Finite(q) => Self::Finite(q * BigInt::from(2)),
            other => other.clone(),
        }
    }

    /// Arithmetic mean of two finite values.
    pub fn mean(&self, other: &Self) -> Self {
        (self + other).half()
    }

    /// `|self - other|`, defined for every pair except equal infinities,
    /// where the result is zero by convention of the distance formulas.
    pub fn abs_diff(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite((a - b).abs()),
            (Self::NegInfinity, Self::NegInfinity) | (Self::PosInfinity, Self::PosInfinity) => {
                Self::zero()
            }
            _ => Self::PosInfinity,
        }
    }

    pub fn min_of(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max_of(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// Lossy conversion for rendering only.
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::NegInfinity => f64::NEG_INFINITY,
            Self::PosInfinity => f64::INFINITY,
            Self::Finite(q) => {
                let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
                let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
                n / d
            }
        }
    }
}

impl From<i64> for ExtendedRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for ExtendedRational {
    fn from(q: BigRational) -> Self {
        Self::Finite(q)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInfinity => f.write_str("-inf"),
            Self::PosInfinity => f.write_str("inf"),
            Self::Finite(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for ExtendedRational {
    type Err = ParseRationalError;

    /// Accepts `inf`, `+inf`, `-inf`, integers, `p/q`, and decimal literals
    /// such as `-1.25`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseRationalError(s.to_string());
        match t {
            "inf" | "+inf" | "infinity" => return Ok(Self::PosInfinity),
            "-inf" | "-infinity" => return Ok(Self::NegInfinity),
            "" => return Err(err()),
            _ => {}
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            return Ok(Self::Finite(BigRational::new(n, d)));
        }
        if let Some((int_part, frac_part)) = t.split_once('.') {
            let negative = int_part.starts_with('-');
            let digits = int_part.trim_start_matches(['-', '+']);
            if frac_part.is_empty() && digits.is_empty() {
                return Err(err());
            }
            if !digits.chars().all(|c| c.is_ascii_digit())
                || !frac_part.chars().all(|c| c.is_ascii_digit())
            {
                return Err(err());
            }
            let whole = format!("{digits}{frac_part}");
            let numer: BigInt = if whole.is_empty() {
                BigInt::zero()
            } else {
                whole.parse().map_err(|_| err())?
            };
            let denom = num_traits::pow(BigInt::from(10), frac_part.len());
            let q = BigRational::new(numer, denom);
            return Ok(Self::Finite(if negative { -q } else { q }));
        }
        let n: BigInt = t.parse().map_err(|_| err())?;
        Ok(Self::Finite(BigRational::from_integer(n)))
    }
}

fn add_ref(a: &ExtendedRational, b: &ExtendedRational) -> ExtendedRational {
    use ExtendedRational::*;
    match (a, b) {
        (Finite(x), Finite(y)) => Finite(x + y),
        (NegInfinity, PosInfinity) | (PosInfinity, NegInfinity) => {
            panic!("sum of opposite infinities is undefined")
        }
        (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
        (NegInfinity, _) | (_, NegInfinity) => NegInfinity,
    }
}

impl Neg for ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> Self::Output {
        -&self
    }
}

impl Neg for &ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> Self::Output {
        match self {
            ExtendedRational::NegInfinity => ExtendedRational::PosInfinity,
            ExtendedRational::PosInfinity => ExtendedRational::NegInfinity,
            ExtendedRational::Finite(q) => ExtendedRational::Finite(-q),
        }
    }
}

impl Add<&ExtendedRational> for &ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: &ExtendedRational) -> ExtendedRational {
        add_ref(self, rhs)
    }
}

impl Add for ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, rhs: ExtendedRational) -> ExtendedRational {
        add_ref(&self, &rhs)
    }
}

impl Sub<&ExtendedRational> for &ExtendedRational {
    type Output = ExtendedRational;
    fn sub(self, rhs: &ExtendedRational) -> ExtendedRational {
        add_ref(self, &-rhs)
    }
}

impl Sub for ExtendedRational {
    type Output = ExtendedRational;
    fn sub(self, rhs: ExtendedRational) -> ExtendedRational {
        add_ref(&self, &-rhs)
    }
}
