use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{parse_raw, Dyadic};
use crate::error::{Error, Result};

/// The standard dyadic interval `[index / 2^level, (index + 1) / 2^level]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicInterval {
    level: u32,
    index: BigUint,
}

impl DyadicInterval {
    pub fn new(index: BigUint, level: u32) -> Result<Self> {
        if index >= (BigUint::one() << level as usize) {
            return Err(Error::NotStandardInterval(
                format!("{index}/2^{level}"),
                format!("{}/2^{level}", &index + 1u32),
            ));
        }
        Ok(DyadicInterval { level, index })
    }

    /// The whole circle `[0,1]`.
    pub fn unit() -> Self {
        DyadicInterval {
            level: 0,
            index: BigUint::zero(),
        }
    }

    /// Parses endpoint strings such as `"1/4"` and `"1/2"` (the right endpoint
    /// may be `"1"`) and checks the interval is standard.
    pub fn from_endpoint_strs(a: &str, b: &str) -> Result<Self> {
        let (an, ae) = parse_raw(a)?;
        let (bn, be) = parse_raw(b)?;
        let e = ae.max(be);
        let lo = an << (e - ae) as usize;
        let hi = bn << (e - be) as usize;
        let not_std = || Error::NotStandardInterval(a.to_string(), b.to_string());
        if hi <= lo || hi > (BigUint::one() << e as usize) {
            return Err(not_std());
        }
        let len = &hi - &lo;
        if len.count_ones() != 1 {
            return Err(not_std());
        }
        let k = len.trailing_zeros().unwrap_or(0) as u32;
        if lo.trailing_zeros().is_some_and(|tz| tz < k as u64) {
            return Err(not_std());
        }
        Ok(DyadicInterval {
            level: e - k,
            index: lo >> k as usize,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> &BigUint {
        &self.index
    }

    pub fn left(&self) -> Dyadic {
        Dyadic::from_scaled(self.index.clone(), self.level)
    }

    /// Right endpoint on the circle; `1` wraps to `0`.
    pub fn right(&self) -> Dyadic {
        Dyadic::from_scaled(&self.index + 1u32, self.level)
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::from_scaled((&self.index << 1usize) + 1u32, self.level + 1)
    }

    pub fn is_last(&self) -> bool {
        &self.index + 1u32 == BigUint::one() << self.level as usize
    }

    pub fn children(&self) -> (DyadicInterval, DyadicInterval) {
        let l = &self.index << 1usize;
        let r = &l + 1u32;
        (
            DyadicInterval {
                level: self.level + 1,
                index: l,
            },
            DyadicInterval {
                level: self.level + 1,
                index: r,
            },
        )
    }

    pub fn parent(&self) -> Option<DyadicInterval> {
        (self.level > 0).then(|| DyadicInterval {
            level: self.level - 1,
            index: &self.index >> 1usize,
        })
    }

    /// Whether `self` is the left child and `next` the right child of the
    /// same parent.
    pub fn is_left_sibling_of(&self, next: &DyadicInterval) -> bool {
        self.level == next.level
            && self.level > 0
            && !self.index.bit(0)
            && next.index == &self.index + 1u32
    }

    /// Whether `other` is a (not necessarily proper) sub-interval of `self`.
    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.level >= self.level
            && (&other.index >> (other.level - self.level) as usize) == self.index
    }

    /// Whether `x` lies in the half-open interval `[left, right)`.
    pub fn contains_point(&self, x: &Dyadic) -> bool {
        let e = self.level.max(x.exponent());
        let lo = &self.index << (e - self.level) as usize;
        let hi = (&self.index + 1u32) << (e - self.level) as usize;
        let v = x.scaled(e);
        lo <= v && v < hi
    }

    /// Whether `x` lies strictly between the endpoints.
    pub fn contains_interior(&self, x: &Dyadic) -> bool {
        self.contains_point(x) && *x != self.left()
    }

    /// Offset of a sub-interval in units of its own length, counted from the
    /// left end of `self`.
    pub(crate) fn offset_of(&self, sub: &DyadicInterval) -> BigUint {
        debug_assert!(self.contains(sub));
        let shift = (sub.level - self.level) as usize;
        &sub.index - (&self.index << shift)
    }

    /// The sub-interval of `self` at `offset`, `depth` levels down.
    pub(crate) fn descendant(&self, depth: u32, offset: BigUint) -> DyadicInterval {
        DyadicInterval {
            level: self.level + depth,
            index: (&self.index << depth as usize) + offset,
        }
    }

    /// Endpoint strings with `1` spelled out for the last interval.
    pub fn endpoint_strings(&self) -> (String, String) {
        let r = if self.is_last() {
            "1".to_string()
        } else {
            self.right().to_string()
        };
        (self.left().to_string(), r)
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.endpoint_strings();
        write!(f, "[{a},{b}]")
    }
}

impl fmt::Debug for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
