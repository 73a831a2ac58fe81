//! Exact dyadic rationals on the circle `[0,1)`, chords between them, and
//! standard dyadic intervals and partitions.
//!
//! A [`Dyadic`] is always kept in canonical form: either zero, or an odd
//! numerator over a positive power of two strictly below one. Because of
//! that, structural equality and hashing coincide with equality of values.

mod arc;
mod interval;
mod partition;

pub use arc::{arcs_cross, in_base_triangulation, Arc};
pub use interval::DyadicInterval;
pub use partition::{base_arcs_in_window, refine_common, StandardPartition};

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A dyadic rational `numerator / 2^exponent` taken modulo one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn half() -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: 1,
        }
    }

    /// Reduces `numerator / 2^exponent` modulo one into canonical form.
    /// Negative numerators wrap around the circle.
    pub fn new(numerator: impl Into<BigInt>, exponent: u32) -> Self {
        let modulus = BigInt::one() << exponent as usize;
        let reduced = numerator.into().mod_floor(&modulus);
        let (_, mag) = reduced.into_parts();
        Self::from_scaled(mag, exponent)
    }

    /// Canonical form of `numerator / 2^exponent` for a non-negative numerator.
    pub(crate) fn from_scaled(numerator: BigUint, exponent: u32) -> Self {
        let mut num = numerator;
        let mut exp = exponent;
        if exp > 0 {
            let mask = (BigUint::one() << exp as usize) - 1u32;
            num &= mask;
        } else {
            num = BigUint::zero();
        }
        if num.is_zero() {
            return Dyadic::zero();
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp as u64) as u32;
        if tz > 0 {
            num >>= tz as usize;
            exp -= tz;
        }
        Dyadic {
            numerator: num,
            exponent: exp,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// The integer `self * 2^exponent`. Requires `exponent >= self.exponent()`.
    pub(crate) fn scaled(&self, exponent: u32) -> BigUint {
        debug_assert!(exponent >= self.exponent);
        &self.numerator << (exponent - self.exponent) as usize
    }

    /// Value as `f64`, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        let mut x = self.numerator.clone();
        let mut e = self.exponent;
        // keep the mantissa small enough for a lossless-ish conversion
        if e > 60 {
            x >>= (e - 60) as usize;
            e = 60;
        }
        let m: u64 = x.try_into().unwrap_or(u64::MAX);
        m as f64 / (1u64 << e) as f64
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled(e).cmp(&other.scaled(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            let den = BigUint::one() << self.exponent as usize;
            write!(f, "{}/{}", self.numerator, den)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"0"`, `"1"`, `"m/d"` with `d` a power of two, or `"m/2^n"` into an
/// unreduced pair `(m, n)` with value `m / 2^n`. The value is not taken
/// modulo one, so interval endpoints like `"1"` survive.
pub(crate) fn parse_raw(s: &str) -> Result<(BigUint, u32)> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
    match s.split_once('/') {
        None => {
            let m: BigUint = s.parse().map_err(|_| bad())?;
            Ok((m, 0))
        }
        Some((num, den)) => {
            let m: BigUint = num.trim().parse().map_err(|_| bad())?;
            let den = den.trim();
            let exp = if let Some(pow) = den.strip_prefix("2^") {
                pow.parse::<u32>().map_err(|_| bad())?
            } else {
                let d: BigUint = den.parse().map_err(|_| bad())?;
                if d.is_zero() || d.count_ones() != 1 {
                    return Err(bad());
                }
                d.trailing_zeros().unwrap_or(0) as u32
            };
            Ok((m, exp))
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m, n) = parse_raw(s)?;
        Ok(Dyadic::from_scaled(m, n))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical dyadic for `numerator / 2^exponent` modulo one.
pub fn normalize(numerator: impl Into<BigInt>, exponent: u32) -> Dyadic {
    Dyadic::new(numerator, exponent)
}

/// Whether `x` lies strictly inside the counterclockwise arc from `a` to `b`.
pub fn cyclically_between(x: &Dyadic, a: &Dyadic, b: &Dyadic) -> Result<bool> {
    match a.cmp(b) {
        Ordering::Equal => Err(Error::DegenerateInterval(a.clone())),
        Ordering::Less => Ok(a < x && x < b),
        Ordering::Greater => Ok(x > a || x < b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(2, 2), d("1/2"));
        assert_eq!(normalize(4, 2), Dyadic::zero());
        assert_eq!(normalize(3, 3), d("3/8"));
        assert_eq!(normalize(-1, 2), d("3/4"));
        assert_eq!(normalize(0, 5).exponent(), 0);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(d("3/2^3"), d("3/8"));
        assert_eq!(d("1"), Dyadic::zero());
        assert_eq!(d("0").to_string(), "0");
        assert_eq!(d("6/16").to_string(), "3/8");
        assert!("1/3".parse::<Dyadic>().is_err());
        assert!("x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn between_examples() {
        assert!(cyclically_between(&d("1/4"), &d("0"), &d("1/2")).unwrap());
        assert!(!cyclically_between(&d("3/4"), &d("0"), &d("1/2")).unwrap());
        assert!(cyclically_between(&d("0"), &d("3/4"), &d("1/4")).unwrap());
        assert!(!cyclically_between(&d("1/2"), &d("0"), &d("1/2")).unwrap());
        assert!(matches!(
            cyclically_between(&d("0"), &d("1/4"), &d("1/4")),
            Err(Error::DegenerateInterval(_))
        ));
    }

    #[test]
    fn ordering_by_value() {
        let mut v = [d("3/4"), d("1/8"), d("0"), d("1/2"), d("5/16")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["0", "1/8", "5/16", "1/2", "3/4"]);
    }
}
