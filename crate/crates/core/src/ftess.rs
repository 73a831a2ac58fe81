//! F-triangulations and F-tessellations of the disk.
//!
//! An F-tessellation is named by its finite difference from the base
//! triangulation `A_F`: the set of base arcs it drops and the set of non-base
//! arcs it adds. All modifications live inside a finite inscribed polygon
//! (the support window); outside it the tessellation coincides with `A_F`,
//! so every check reduces to a convex polygon with finitely many diagonals.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::{base_arcs_in_window, Arc, Dyadic, StandardPartition};
use crate::error::{Error, Result};
use crate::polygon::{self, Chord};

/// Default bound on the rank accepted by [`FTessellation::containing_triangulations`].
pub const DEFAULT_RANK_BOUND: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FTessellation {
    removed: BTreeSet<Arc>,
    added: BTreeSet<Arc>,
}

/// A reason an arc set fails to be an F-tessellation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Crossing { first: Arc, second: Arc },
    Redundant { arc: Arc },
    RemovedNotInBase { arc: Arc },
    AddedInBase { arc: Arc },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Crossing { first, second } => write!(f, "{first} crosses {second}"),
            Violation::Redundant { arc } => write!(f, "{arc} is listed more than once"),
            Violation::RemovedNotInBase { arc } => {
                write!(f, "removed arc {arc} is not in the base triangulation")
            }
            Violation::AddedInBase { arc } => {
                write!(f, "added arc {arc} already belongs to the base triangulation")
            }
        }
    }
}

/// The cell `f_B ≅ Π A(P_{n_i})` attached to an F-tessellation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDescriptor {
    pub index: FTessellation,
    /// Side counts of the non-triangular components, increasing.
    pub factor_sizes: Vec<usize>,
    pub dimension: usize,
}

/// Result of flipping one arc of an F-triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flip {
    /// The rank-1 tessellation shared by both triangulations (the edge).
    pub edge: FTessellation,
    pub old_arc: Arc,
    pub new_arc: Arc,
    pub target: FTessellation,
}

/// The part of a tessellation visible inside a window polygon.
#[derive(Clone, Debug)]
pub(crate) struct LocalView {
    pub window: StandardPartition,
    pub vertices: Vec<Dyadic>,
    pub diagonals: BTreeSet<Chord>,
}

impl LocalView {
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn arc(&self, c: Chord) -> Arc {
        Arc::new(self.vertices[c.0].clone(), self.vertices[c.1].clone()).expect("distinct vertices")
    }

    pub fn chord_of(&self, a: &Arc) -> Option<Chord> {
        let i = self.window.vertex_index(a.lo())?;
        let j = self.window.vertex_index(a.hi())?;
        Some(polygon::chord(i, j))
    }

    pub fn regions(&self) -> Vec<Vec<usize>> {
        polygon::regions(self.k(), &self.diagonals)
    }

    /// Base diagonals of the window, as chords.
    pub fn base_diagonals(window: &StandardPartition) -> Result<BTreeSet<Chord>> {
        let k = window.len();
        let mut out = BTreeSet::new();
        for a in base_arcs_in_window(window)? {
            let c = polygon::chord(
                window.vertex_index(a.lo()).expect("breakpoint"),
                window.vertex_index(a.hi()).expect("breakpoint"),
            );
            if polygon::is_diagonal(k, c) {
                out.insert(c);
            }
        }
        Ok(out)
    }
}

impl FTessellation {
    /// The base triangulation `A_F`.
    pub fn base() -> Self {
        FTessellation {
            removed: BTreeSet::new(),
            added: BTreeSet::new(),
        }
    }

    /// Checks a candidate `(A_F − removed) ∪ added` and returns it, or every
    /// violation found.
    pub fn validate(
        removed: impl IntoIterator<Item = Arc>,
        added: impl IntoIterator<Item = Arc>,
    ) -> Result<Self> {
        let mut violations = Vec::new();
        let mut r = BTreeSet::new();
        for arc in removed {
            if !arc.in_base() {
                violations.push(Violation::RemovedNotInBase { arc: arc.clone() });
            }
            if !r.insert(arc.clone()) {
                violations.push(Violation::Redundant { arc });
            }
        }
        let mut a = BTreeSet::new();
        for arc in added {
            if arc.in_base() {
                violations.push(Violation::AddedInBase { arc: arc.clone() });
            }
            if !a.insert(arc.clone()) {
                violations.push(Violation::Redundant { arc });
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidTessellation(violations));
        }
        let candidate = FTessellation {
            removed: r,
            added: a,
        };
        let view = candidate.local_view(&candidate.support_polygon())?;
        let diags: Vec<Chord> = view.diagonals.iter().copied().collect();
        for (x, &c) in diags.iter().enumerate() {
            for &d in &diags[x + 1..] {
                if polygon::crosses(c, d) {
                    violations.push(Violation::Crossing {
                        first: view.arc(c),
                        second: view.arc(d),
                    });
                }
            }
        }
        if violations.is_empty() {
            Ok(candidate)
        } else {
            Err(Error::InvalidTessellation(violations))
        }
    }

    pub fn removed(&self) -> &BTreeSet<Arc> {
        &self.removed
    }

    pub fn added(&self) -> &BTreeSet<Arc> {
        &self.added
    }

    /// Number of arcs missing to complete this to an F-triangulation.
    pub fn rank(&self) -> usize {
        self.removed.len() - self.added.len()
    }

    pub fn is_triangulation(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_base(&self) -> bool {
        self.removed.is_empty() && self.added.is_empty()
    }

    pub fn contains_arc(&self, a: &Arc) -> bool {
        self.added.contains(a) || (a.in_base() && !self.removed.contains(a))
    }

    /// Minimal inscribed window (at least a triangle, so it holds the center)
    /// having every modified arc as a diagonal.
    ///
    /// Breakpoints are the endpoints of all modified arcs plus the midpoints
    /// of the intervals cut off by removed arcs. When that leaves only
    /// `0 < 1/2`, the half `[1/2,1]` is split, giving the triangle
    /// `0 < 1/2 < 3/4`.
    pub fn support_polygon(&self) -> StandardPartition {
        self.window_with(std::iter::empty())
    }

    /// Support window refined so that each extra arc is also a diagonal.
    pub(crate) fn window_with<'a>(&self, extra: impl IntoIterator<Item = &'a Arc>) -> StandardPartition {
        let mut pts: Vec<Dyadic> = Vec::new();
        let push_arc = |a: &Arc, pts: &mut Vec<Dyadic>| {
            pts.push(a.lo().clone());
            pts.push(a.hi().clone());
            if a.in_base() {
                pts.extend(a.base_midpoints());
            }
        };
        for a in self.removed.iter().chain(&self.added) {
            push_arc(a, &mut pts);
        }
        for a in extra {
            push_arc(a, &mut pts);
        }
        let mut w = StandardPartition::from_points(&pts);
        if w.len() < 3 {
            w.insert_point(&"3/4".parse().expect("literal"));
        }
        w
    }

    /// Whether every modification is a diagonal of the window polygon.
    pub fn fits_window(&self, window: &StandardPartition) -> bool {
        window.len() >= 3
            && self
                .removed
                .iter()
                .chain(&self.added)
                .all(|a| window.is_diagonal(a))
    }

    pub(crate) fn local_view(&self, window: &StandardPartition) -> Result<LocalView> {
        if !self.fits_window(window) {
            return Err(Error::OutsideWindow(window.to_string()));
        }
        let mut diagonals = LocalView::base_diagonals(window)?;
        let vertices = window.breakpoints();
        let mut view = LocalView {
            window: window.clone(),
            vertices,
            diagonals: BTreeSet::new(),
        };
        for a in &self.removed {
            diagonals.remove(&view.chord_of(a).expect("fits window"));
        }
        for a in &self.added {
            diagonals.insert(view.chord_of(a).expect("fits window"));
        }
        view.diagonals = diagonals;
        Ok(view)
    }

    /// The tessellation equal to the given diagonals inside `window` and to
    /// `A_F` outside it. The caller guarantees the chords do not cross.
    pub(crate) fn from_local(window: &StandardPartition, diagonals: &BTreeSet<Chord>) -> Result<Self> {
        let base = LocalView::base_diagonals(window)?;
        let vertices = window.breakpoints();
        let arc = |c: &Chord| Arc::new(vertices[c.0].clone(), vertices[c.1].clone()).expect("distinct");
        Ok(FTessellation {
            removed: base.difference(diagonals).map(arc).collect(),
            added: diagonals.difference(&base).map(arc).collect(),
        })
    }

    /// All arcs of the tessellation lying in the window polygon, sides
    /// included.
    pub fn arcs_in_window(&self, window: &StandardPartition) -> Result<BTreeSet<Arc>> {
        let view = self.local_view(window)?;
        let mut out: BTreeSet<Arc> = window.sides().into_iter().collect();
        out.extend(view.diagonals.iter().map(|&c| view.arc(c)));
        Ok(out)
    }

    /// Complementary regions with at least four sides, each listed by its
    /// vertices in increasing order.
    pub fn nontriangular_components(&self) -> Vec<Vec<Dyadic>> {
        let view = self
            .local_view(&self.support_polygon())
            .expect("support window always fits");
        let mut comps: Vec<Vec<Dyadic>> = view
            .regions()
            .into_iter()
            .filter(|r| r.len() >= 4)
            .map(|r| r.into_iter().map(|i| view.vertices[i].clone()).collect())
            .collect();
        comps.sort();
        comps
    }

    pub fn cell(&self) -> CellDescriptor {
        let mut factor_sizes: Vec<usize> = self.nontriangular_components().iter().map(Vec::len).collect();
        factor_sizes.sort_unstable();
        CellDescriptor {
            index: self.clone(),
            dimension: self.rank(),
            factor_sizes,
        }
    }

    /// Drops one arc.
    pub fn without_arc(&self, a: &Arc) -> Result<Self> {
        if !self.contains_arc(a) {
            return Err(Error::ArcNotPresent(a.clone()));
        }
        let mut out = self.clone();
        if !out.added.remove(a) {
            out.removed.insert(a.clone());
        }
        Ok(out)
    }

    /// Adds one arc without checking crossings.
    pub(crate) fn with_arc(&self, a: &Arc) -> Self {
        let mut out = self.clone();
        if !out.removed.remove(a) {
            out.added.insert(a.clone());
        }
        out
    }

    /// Flips arc `a` of an F-triangulation.
    pub fn flip_arc(&self, a: &Arc) -> Result<Flip> {
        if !self.is_triangulation() {
            return Err(Error::NotFTriangulation(self.rank()));
        }
        if !self.contains_arc(a) {
            return Err(Error::ArcNotPresent(a.clone()));
        }
        let window = self.window_with([a]);
        let view = self.local_view(&window)?;
        let c = view.chord_of(a).expect("arc endpoints are breakpoints");
        let partner = polygon::flip_partner(view.k(), &view.diagonals, c);
        let new_arc = view.arc(partner);
        let edge = self.without_arc(a)?;
        let target = edge.with_arc(&new_arc);
        Ok(Flip {
            edge,
            old_arc: a.clone(),
            new_arc,
            target,
        })
    }

    /// Every F-triangulation containing this tessellation, obtained by
    /// triangulating each non-triangular component independently.
    pub fn containing_triangulations(&self, rank_bound: usize) -> Result<Vec<FTessellation>> {
        if self.rank() > rank_bound {
            return Err(Error::RankTooLarge {
                rank: self.rank(),
                bound: rank_bound,
            });
        }
        let window = self.support_polygon();
        let view = self.local_view(&window)?;
        let mut partial: Vec<BTreeSet<Chord>> = vec![view.diagonals.clone()];
        for region in view.regions().into_iter().filter(|r| r.len() >= 4) {
            let options = polygon::triangulations(&region);
            partial = partial
                .iter()
                .flat_map(|base| {
                    options.iter().map(move |opt| {
                        let mut s = base.clone();
                        s.extend(opt.iter().copied());
                        s
                    })
                })
                .collect();
        }
        partial.iter().map(|d| FTessellation::from_local(&window, d)).collect()
    }
}

/// Arc-set intersection: the smallest cell containing both cells.
pub fn intersect(a: &FTessellation, b: &FTessellation) -> FTessellation {
    FTessellation {
        removed: a.removed.union(&b.removed).cloned().collect(),
        added: a.added.intersection(&b.added).cloned().collect(),
    }
}

/// `a ≤ b` in the cell order: every arc of `b` is an arc of `a`, so the
/// cell of `a` is a face of the cell of `b`.
pub fn leq(a: &FTessellation, b: &FTessellation) -> bool {
    a.removed.is_subset(&b.removed) && b.added.is_subset(&a.added)
}

/// Arc-set union of two tessellations, if it is again an F-tessellation.
pub fn union(a: &FTessellation, b: &FTessellation) -> Result<FTessellation> {
    FTessellation::validate(
        a.removed.intersection(&b.removed).cloned(),
        a.added.union(&b.added).cloned(),
    )
}

impl fmt::Display for FTessellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_base() {
            return write!(f, "A_F");
        }
        let join = |s: &BTreeSet<Arc>| s.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "A_F")?;
        if !self.removed.is_empty() {
            write!(f, " -{{{}}}", join(&self.removed))?;
        }
        if !self.added.is_empty() {
            write!(f, " +{{{}}}", join(&self.added))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FTessellation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'de> Deserialize<'de> for FTessellation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(default)]
            removed: Vec<Arc>,
            #[serde(default)]
            added: Vec<Arc>,
        }
        let raw = Raw::deserialize(d)?;
        FTessellation::validate(raw.removed, raw.added).map_err(serde::de::Error::custom)
    }
}
