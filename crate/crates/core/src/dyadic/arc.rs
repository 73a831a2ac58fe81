use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DyadicInterval, Dyadic};
use crate::error::{Error, Result};

/// A chord of the disk between two distinct dyadic points of the circle.
///
/// Endpoints are stored smaller value first, so the derived ordering is the
/// lexicographic order on (smaller endpoint, larger endpoint).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    lo: Dyadic,
    hi: Dyadic,
}

impl Arc {
    pub fn new(a: Dyadic, b: Dyadic) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Arc { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Arc { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(Error::DegenerateArc(a)),
        }
    }

    /// The base-triangulation arc spanning a standard interval; `None` for
    /// the whole circle.
    pub fn of_interval(iv: &DyadicInterval) -> Option<Arc> {
        Arc::new(iv.left(), iv.right()).ok()
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn endpoints(&self) -> [&Dyadic; 2] {
        [&self.lo, &self.hi]
    }

    pub fn shares_endpoint(&self, other: &Arc) -> bool {
        self.lo == other.lo || self.lo == other.hi || self.hi == other.lo || self.hi == other.hi
    }

    pub fn crosses(&self, other: &Arc) -> bool {
        arcs_cross(self, other)
    }

    pub fn in_base(&self) -> bool {
        in_base_triangulation(self)
    }

    /// Midpoints of the standard intervals cut off by this arc when it
    /// belongs to the base triangulation: one point, or two for `(0,1/2)`.
    pub(crate) fn base_midpoints(&self) -> Vec<Dyadic> {
        if self.lo.is_zero() && self.hi == Dyadic::half() {
            return vec!["1/4".parse().unwrap(), "3/4".parse().unwrap()];
        }
        let mut out = Vec::new();
        if let Some(iv) = standard_between(&self.lo, &self.hi) {
            out.push(iv.midpoint());
        }
        if self.lo.is_zero() {
            if let Some(iv) = standard_to_one(&self.hi) {
                out.push(iv.midpoint());
            }
        }
        out
    }
}

/// The standard interval `[a, b]` with `a < b`, if it is one.
fn standard_between(a: &Dyadic, b: &Dyadic) -> Option<DyadicInterval> {
    let e = a.exponent().max(b.exponent());
    let lo = a.scaled(e);
    let hi = b.scaled(e);
    standard_from_scaled(lo, hi, e)
}

/// The standard interval `[a, 1]`, if it is one.
fn standard_to_one(a: &Dyadic) -> Option<DyadicInterval> {
    let e = a.exponent();
    let lo = a.scaled(e);
    let hi = BigUint::from(1u32) << e as usize;
    standard_from_scaled(lo, hi, e)
}

fn standard_from_scaled(lo: BigUint, hi: BigUint, e: u32) -> Option<DyadicInterval> {
    if hi <= lo {
        return None;
    }
    let len = &hi - &lo;
    if len.count_ones() != 1 {
        return None;
    }
    let k = len.trailing_zeros().unwrap_or(0);
    if lo.trailing_zeros().is_some_and(|tz| tz < k) {
        return None;
    }
    DyadicInterval::new(lo >> k as usize, e - k as u32).ok()
}

/// Whether the endpoints of `b` strictly separate the endpoints of `a` on
/// the circle. Arcs sharing an endpoint never cross.
pub fn arcs_cross(a: &Arc, b: &Arc) -> bool {
    if a.shares_endpoint(b) {
        return false;
    }
    let inside = |x: &Dyadic| a.lo < *x && *x < a.hi;
    inside(&b.lo) != inside(&b.hi)
}

/// Membership in the base triangulation: `(0,1/2)` together with every arc
/// `(m/2^n, (m+1)/2^n)` for `n >= 2`.
pub fn in_base_triangulation(a: &Arc) -> bool {
    if a.lo.is_zero() && a.hi == Dyadic::half() {
        return true;
    }
    let level_ok = |iv: DyadicInterval| iv.level() >= 2;
    standard_between(&a.lo, &a.hi).is_some_and(level_ok)
        || (a.lo.is_zero() && standard_to_one(&a.hi).is_some_and(level_ok))
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Arc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .or_else(|| s.trim().strip_prefix('('))
            .and_then(|r| r.strip_suffix(']').or_else(|| r.strip_suffix(')')))
            .ok_or_else(|| Error::Parse(format!("arc must look like [a,b]: {s:?}")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("arc must have two endpoints: {s:?}")))?;
        Arc::new(a.parse()?, b.parse()?)
    }
}

impl Serialize for Arc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Arc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pair([String; 2]),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Pair([a, b]) => {
                let a: Dyadic = a.parse().map_err(serde::de::Error::custom)?;
                let b: Dyadic = b.parse().map_err(serde::de::Error::custom)?;
                Arc::new(a, b).map_err(serde::de::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(s: &str) -> Arc {
        s.parse().unwrap()
    }

    #[test]
    fn crossing_examples() {
        assert!(arcs_cross(&arc("[0,1/2]"), &arc("[1/4,3/4]")));
        assert!(!arcs_cross(&arc("[0,1/2]"), &arc("[0,1/4]")));
        assert!(!arcs_cross(&arc("[0,1/4]"), &arc("[1/2,3/4]")));
        assert!(arcs_cross(&arc("[1/8,1/2]"), &arc("[0,1/4]")));
    }

    #[test]
    fn base_membership_examples() {
        assert!(arc("[1/4,1/2]").in_base());
        assert!(arc("[0,1/2]").in_base());
        assert!(!arc("[1/4,3/4]").in_base());
        assert!(arc("[3/4,1]").in_base());
        assert!(arc("[0,3/4]").in_base());
        assert!(arc("[7/8,1]").in_base());
        assert!(!arc("[0,5/8]").in_base());
        assert!(!arc("[1/8,1/2]").in_base());
    }

    #[test]
    fn canonical_order_and_text() {
        let a = Arc::new("1/2".parse().unwrap(), Dyadic::zero()).unwrap();
        assert_eq!(a.to_string(), "[0,1/2]");
        assert_eq!(arc("[1/2,1]"), arc("[0,1/2]"));
        assert!(matches!(
            Arc::new(Dyadic::half(), Dyadic::half()),
            Err(Error::DegenerateArc(_))
        ));
        let j: Arc = serde_json::from_str(r#"["3/4","1/4"]"#).unwrap();
        assert_eq!(j, arc("[1/4,3/4]"));
        assert_eq!(serde_json::to_string(&j).unwrap(), r#""[1/4,3/4]""#);
    }

    #[test]
    fn midpoints_of_base_arcs() {
        let m = arc("[0,1/2]").base_midpoints();
        assert_eq!(m.len(), 2);
        assert_eq!(arc("[1/4,1/2]").base_midpoints(), vec!["3/8".parse().unwrap()]);
        assert_eq!(arc("[0,3/4]").base_midpoints(), vec!["7/8".parse().unwrap()]);
    }
}
