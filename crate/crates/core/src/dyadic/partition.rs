use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{in_base_triangulation, Arc, Dyadic, DyadicInterval};
use crate::error::{Error, Result};

/// A partition of the circle into standard dyadic intervals, stored as its
/// intervals in increasing order. Breakpoints always start at `0`.
///
/// With at least three intervals the breakpoints are the vertices of a
/// polygon inscribed in the base triangulation, containing the center of the
/// disk (possibly on its boundary).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StandardPartition {
    leaves: Vec<DyadicInterval>,
}

impl StandardPartition {
    /// The one-interval partition `0 < 1`.
    pub fn trivial() -> Self {
        StandardPartition {
            leaves: vec![DyadicInterval::unit()],
        }
    }

    /// All intervals of length `2^-level`.
    pub fn uniform(level: u32) -> Self {
        let mut p = Self::trivial();
        for _ in 0..level {
            p = p.split_all();
        }
        p
    }

    /// The coarsest standard partition having every given point as a
    /// breakpoint.
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Dyadic>) -> Self {
        let mut p = Self::trivial();
        for x in points {
            p.insert_point(x);
        }
        p
    }

    /// Builds a partition from an explicit breakpoint list, which must start
    /// at `0`, increase strictly and cut the circle into standard intervals.
    pub fn from_breakpoints(points: &[Dyadic]) -> Result<Self> {
        let text = || {
            points
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        if points.first().is_none_or(|x| !x.is_zero()) || points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotStandardPartition(text()));
        }
        let p = Self::from_points(points);
        if p.breakpoints() != points {
            return Err(Error::NotStandardPartition(text()));
        }
        Ok(p)
    }

    /// Builds a partition from intervals listed in increasing order.
    pub fn from_leaves(leaves: Vec<DyadicInterval>) -> Result<Self> {
        let ok = !leaves.is_empty()
            && leaves[0].left().is_zero()
            && leaves.windows(2).all(|w| w[0].right() == w[1].left() && !w[0].is_last())
            && leaves.last().is_some_and(|l| l.is_last());
        if !ok {
            let s = leaves.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
            return Err(Error::NotStandardPartition(s));
        }
        Ok(StandardPartition { leaves })
    }

    pub fn leaves(&self) -> &[DyadicInterval] {
        &self.leaves
    }

    /// Number of intervals (equivalently, of breakpoints).
    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    pub fn breakpoints(&self) -> Vec<Dyadic> {
        self.leaves.iter().map(|l| l.left()).collect()
    }

    /// Index of the interval whose half-open range `[left, right)` holds `x`.
    pub fn leaf_containing(&self, x: &Dyadic) -> usize {
        let i = self.leaves.partition_point(|l| l.left() <= *x);
        i.saturating_sub(1)
    }

    pub fn vertex_index(&self, x: &Dyadic) -> Option<usize> {
        let i = self.leaf_containing(x);
        (self.leaves[i].left() == *x).then_some(i)
    }

    pub fn is_breakpoint(&self, x: &Dyadic) -> bool {
        self.vertex_index(x).is_some()
    }

    /// Refines the partition until `x` is a breakpoint.
    pub fn insert_point(&mut self, x: &Dyadic) {
        loop {
            let i = self.leaf_containing(x);
            if !self.leaves[i].contains_interior(x) {
                return;
            }
            self.split_leaf(i);
        }
    }

    pub fn split_leaf(&mut self, i: usize) {
        let (l, r) = self.leaves[i].children();
        self.leaves[i] = r;
        self.leaves.insert(i, l);
    }

    /// Splits every interval at its midpoint.
    pub fn split_all(&self) -> Self {
        let leaves = self
            .leaves
            .iter()
            .flat_map(|l| {
                let (a, b) = l.children();
                [a, b]
            })
            .collect();
        StandardPartition { leaves }
    }

    /// Whether every breakpoint of `coarser` is a breakpoint of `self`.
    pub fn refines(&self, coarser: &StandardPartition) -> bool {
        coarser.leaves.iter().all(|l| self.is_breakpoint(&l.left()))
    }

    /// Whether `arc` joins the endpoints of one interval, i.e. is a side of
    /// the inscribed polygon.
    pub fn is_side(&self, arc: &Arc) -> bool {
        self.leaves
            .iter()
            .any(|l| Arc::of_interval(l).as_ref() == Some(arc))
    }

    /// Whether `arc` is a chord between two breakpoints that is not a side.
    pub fn is_diagonal(&self, arc: &Arc) -> bool {
        self.is_breakpoint(arc.lo()) && self.is_breakpoint(arc.hi()) && !self.is_side(arc)
    }

    /// Sides of the inscribed polygon in the order of the intervals.
    pub fn sides(&self) -> Vec<Arc> {
        self.leaves.iter().filter_map(Arc::of_interval).collect()
    }
}

/// Coarsest standard partition refining both inputs.
pub fn refine_common(p: &StandardPartition, q: &StandardPartition) -> StandardPartition {
    let mut r = p.clone();
    for l in &q.leaves {
        r.insert_point(&l.left());
    }
    r
}

/// Arcs of the base triangulation lying in the polygon inscribed on the
/// breakpoints of `p`, sides included.
pub fn base_arcs_in_window(p: &StandardPartition) -> Result<BTreeSet<Arc>> {
    if p.len() < 3 {
        return Err(Error::DegeneratePolygon(p.len()));
    }
    let pts = p.breakpoints();
    let mut out = BTreeSet::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let arc = Arc::new(a.clone(), b.clone()).expect("breakpoints are distinct");
            if in_base_triangulation(&arc) {
                out.insert(arc);
            }
        }
    }
    Ok(out)
}

impl fmt::Display for StandardPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.leaves.iter().map(|l| l.left().to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for StandardPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for StandardPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let pts = s
            .split([',', '<'])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Dyadic>>>()?;
        Self::from_breakpoints(&pts)
    }
}

impl Serialize for StandardPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StandardPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
