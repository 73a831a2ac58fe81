//! The non-oriented Thompson group `T^±`: piecewise-affine bijections of the
//! circle `R/Z` with dyadic breakpoints and slopes `±2^r`.
//!
//! An element is stored as its minimal list of pieces `src → dst`, where the
//! sources form a standard dyadic partition and each source interval is
//! mapped affinely onto a standard dyadic target interval. A single global
//! orientation says whether every piece preserves or reverses direction.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyadic::{refine_common, Arc, Dyadic, DyadicInterval, StandardPartition};
use crate::error::{Error, Result};
use crate::ftess::FTessellation;
use crate::polygon::{self, Chord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    /// `0` for orientation-preserving elements (those in `T`), `1` otherwise.
    pub fn sign(self) -> u8 {
        match self {
            Orientation::Preserving => 0,
            Orientation::Reversing => 1,
        }
    }

    pub fn from_sign(s: i64) -> Result<Self> {
        match s {
            1 | 0 => Ok(Orientation::Preserving),
            -1 => Ok(Orientation::Reversing),
            _ => Err(Error::Parse(format!("orientation must be 1 or -1, got {s}"))),
        }
    }

    pub fn times(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }
}

impl Serialize for Orientation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        })
    }
}

impl<'de> Deserialize<'de> for Orientation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Orientation::from_sign(i64::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// One affine piece of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub src: DyadicInterval,
    pub dst: DyadicInterval,
}

impl Serialize for Piece {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (a, b) = self.src.endpoint_strings();
        let (c, d) = self.dst.endpoint_strings();
        let mut st = s.serialize_struct("Piece", 2)?;
        st.serialize_field("src", &[a, b])?;
        st.serialize_field("dst", &[c, d])?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Piece {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            src: [String; 2],
            dst: [String; 2],
        }
        let raw = Raw::deserialize(d)?;
        let iv = |p: &[String; 2]| {
            DyadicInterval::from_endpoint_strs(&p[0], &p[1]).map_err(serde::de::Error::custom)
        };
        Ok(Piece {
            src: iv(&raw.src)?,
            dst: iv(&raw.dst)?,
        })
    }
}

/// An element of `T^±` in reduced form. Equality is equality of reduced
/// forms, which is equality of maps.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ThompsonElement {
    pieces: Vec<Piece>,
    orientation: Orientation,
}

impl ThompsonElement {
    pub fn identity() -> Self {
        ThompsonElement {
            pieces: vec![Piece {
                src: DyadicInterval::unit(),
                dst: DyadicInterval::unit(),
            }],
            orientation: Orientation::Preserving,
        }
    }

    /// `x ↦ -x`.
    pub fn reflection() -> Self {
        ThompsonElement {
            orientation: Orientation::Reversing,
            ..Self::identity()
        }
    }

    /// Rotation `x ↦ x + r`.
    pub fn rotation(r: &Dyadic) -> Self {
        let n = r.exponent();
        let m = r.numerator();
        let size = BigUint::one() << n as usize;
        let mut pieces = Vec::new();
        let mut i = BigUint::from(0u32);
        while i < size {
            let j = (&i + m) % &size;
            pieces.push(Piece {
                src: DyadicInterval::new(i.clone(), n).expect("index below 2^n"),
                dst: DyadicInterval::new(j, n).expect("index below 2^n"),
            });
            i += 1u32;
        }
        Self::from_raw(pieces, Orientation::Preserving)
    }

    /// The map with slopes `1/2, 1, 2` on `[0,1/2], [1/2,3/4], [3/4,1]`.
    pub fn x0() -> Self {
        let iv = |a: &str, b: &str| DyadicInterval::from_endpoint_strs(a, b).expect("literal");
        Self::make_element(
            vec![
                (iv("0", "1/2"), iv("0", "1/4")),
                (iv("1/2", "3/4"), iv("1/4", "1/2")),
                (iv("3/4", "1"), iv("1/2", "1")),
            ],
            Orientation::Preserving,
        )
        .expect("valid literal element")
    }

    /// Validates a list of `(source, target)` interval pairs and reduces it.
    ///
    /// Sources must partition the circle. Listed in source order, the targets
    /// must follow each other around the circle counterclockwise for
    /// orientation-preserving maps and clockwise for reversing ones.
    pub fn make_element(
        pairs: Vec<(DyadicInterval, DyadicInterval)>,
        orientation: Orientation,
    ) -> Result<Self> {
        let mut pieces: Vec<Piece> = pairs.into_iter().map(|(src, dst)| Piece { src, dst }).collect();
        pieces.sort_by_key(|p| p.src.left());
        let srcs: Vec<DyadicInterval> = pieces.iter().map(|p| p.src.clone()).collect();
        StandardPartition::from_leaves(srcs)
            .map_err(|e| Error::InvalidElement(format!("sources: {e}")))?;
        let k = pieces.len();
        for i in 0..k {
            let (cur, next) = (&pieces[i].dst, &pieces[(i + 1) % k].dst);
            let ok = match orientation {
                Orientation::Preserving => next.left() == cur.right(),
                Orientation::Reversing => next.right() == cur.left(),
            };
            if !ok {
                return Err(Error::InvalidElement(format!(
                    "target {next} does not follow {cur} in the required cyclic order"
                )));
            }
        }
        // Contiguous targets that wind around exactly once tile the circle.
        let mut dsts: Vec<DyadicInterval> = pieces.iter().map(|p| p.dst.clone()).collect();
        dsts.sort_by_key(|d| d.left());
        StandardPartition::from_leaves(dsts)
            .map_err(|e| Error::InvalidElement(format!("targets: {e}")))?;
        Ok(Self::from_raw(pieces, orientation))
    }

    /// Pairs the `i`-th interval of `domain` with interval `i + shift` of
    /// `range` (or `shift - i` when reversing), indices mod the length.
    pub fn from_partitions(
        domain: &StandardPartition,
        range: &StandardPartition,
        shift: usize,
        orientation: Orientation,
    ) -> Result<Self> {
        let k = domain.len();
        if range.len() != k {
            return Err(Error::InvalidElement(format!(
                "domain has {k} intervals, range has {}",
                range.len()
            )));
        }
        let pieces = (0..k)
            .map(|i| {
                let j = match orientation {
                    Orientation::Preserving => (i + shift) % k,
                    Orientation::Reversing => (shift % k + k - i) % k,
                };
                Piece {
                    src: domain.leaves()[i].clone(),
                    dst: range.leaves()[j].clone(),
                }
            })
            .collect();
        Ok(Self::from_raw(pieces, orientation))
    }

    /// A random element whose unreduced domain has `leaves` intervals.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, leaves: usize) -> Self {
        let leaves = leaves.max(1);
        let d = random_partition(rng, leaves);
        let r = random_partition(rng, leaves);
        let shift = rng.random_range(0..leaves);
        let o = if rng.random_bool(0.5) {
            Orientation::Reversing
        } else {
            Orientation::Preserving
        };
        Self::from_partitions(&d, &r, shift, o).expect("equal lengths")
    }

    fn from_raw(mut pieces: Vec<Piece>, orientation: Orientation) -> Self {
        pieces.sort_by_key(|p| p.src.left());
        ThompsonElement {
            pieces: reduce_pieces(pieces, orientation),
            orientation,
        }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn sign(&self) -> u8 {
        self.orientation.sign()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// The minimal standard dyadic partition of the domain.
    pub fn domain_partition(&self) -> StandardPartition {
        StandardPartition::from_leaves(self.pieces.iter().map(|p| p.src.clone()).collect())
            .expect("reduced element has a standard domain")
    }

    /// The image partition, sorted increasingly.
    pub fn range_partition(&self) -> StandardPartition {
        let mut dsts: Vec<DyadicInterval> = self.pieces.iter().map(|p| p.dst.clone()).collect();
        dsts.sort_by_key(|d| d.left());
        StandardPartition::from_leaves(dsts).expect("reduced element has a standard range")
    }

    /// Images of the domain breakpoints, in domain order.
    pub fn image_points(&self) -> Vec<Dyadic> {
        self.pieces
            .iter()
            .map(|p| match self.orientation {
                Orientation::Preserving => p.dst.left(),
                Orientation::Reversing => p.dst.right(),
            })
            .collect()
    }

    /// Index of the domain breakpoint sent to `0`, if any.
    pub fn wrap_index(&self) -> Option<usize> {
        self.image_points().iter().position(Dyadic::is_zero)
    }

    /// Both axis partitions are standard and the image points run once around
    /// the circle in the direction of the orientation.
    pub fn has_standard_partitions(&self) -> bool {
        let dom = StandardPartition::from_leaves(self.pieces.iter().map(|p| p.src.clone()).collect());
        let mut dsts: Vec<DyadicInterval> = self.pieces.iter().map(|p| p.dst.clone()).collect();
        dsts.sort_by_key(|d| d.left());
        let ran = StandardPartition::from_leaves(dsts);
        let (Ok(_), Ok(ran)) = (dom, ran) else {
            return false;
        };
        let mut pts = self.image_points();
        if let Some(w) = pts.iter().position(Dyadic::is_zero) {
            pts.rotate_left(w);
        } else {
            return false;
        }
        if self.orientation == Orientation::Reversing {
            pts[1..].reverse();
        }
        pts == ran.breakpoints()
    }

    pub fn evaluate(&self, x: &Dyadic) -> Dyadic {
        let i = self.pieces.partition_point(|p| p.src.left() <= *x).saturating_sub(1);
        let Piece { src, dst } = &self.pieces[i];
        let (n, p) = (src.level(), dst.level());
        let e = x.exponent().max(n);
        let shift = (e - n) as usize;
        let offset = x.scaled(e) - (src.index() << shift);
        let y = match self.orientation {
            Orientation::Preserving => (dst.index() << shift) + offset,
            Orientation::Reversing => ((dst.index() + 1u32) << shift) - offset,
        };
        Dyadic::from_scaled(y, e - n + p)
    }

    pub fn apply_arc(&self, a: &Arc) -> Arc {
        Arc::new(self.evaluate(a.lo()), self.evaluate(a.hi())).expect("bijection keeps endpoints distinct")
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &ThompsonElement) -> ThompsonElement {
        let mut out = Vec::new();
        for p in &other.pieces {
            self.push_composed(p.src.clone(), p.dst.clone(), other.orientation, &mut out);
        }
        Self::from_raw(out, self.orientation.times(other.orientation))
    }

    /// Maps `src` through `other` onto `mid`, then through `self`, splitting
    /// until `mid` lies inside a single piece of `self`.
    fn push_composed(
        &self,
        src: DyadicInterval,
        mid: DyadicInterval,
        inner: Orientation,
        out: &mut Vec<Piece>,
    ) {
        let k = self.pieces.partition_point(|p| p.src.left() <= mid.left()) - 1;
        let piece = &self.pieces[k];
        if piece.src.contains(&mid) {
            let depth = mid.level() - piece.src.level();
            let r = piece.src.offset_of(&mid);
            let off = match self.orientation {
                Orientation::Preserving => r,
                Orientation::Reversing => (BigUint::one() << depth as usize) - 1u32 - r,
            };
            out.push(Piece {
                src,
                dst: piece.dst.descendant(depth, off),
            });
            return;
        }
        let (s0, s1) = src.children();
        let (m0, m1) = mid.children();
        match inner {
            Orientation::Preserving => {
                self.push_composed(s0, m0, inner, out);
                self.push_composed(s1, m1, inner, out);
            }
            Orientation::Reversing => {
                self.push_composed(s0, m1, inner, out);
                self.push_composed(s1, m0, inner, out);
            }
        }
    }

    pub fn inverse(&self) -> ThompsonElement {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                src: p.dst.clone(),
                dst: p.src.clone(),
            })
            .collect();
        Self::from_raw(pieces, self.orientation)
    }

    /// Elements are always kept reduced; this returns a copy.
    pub fn reduce_minimal(&self) -> ThompsonElement {
        Self::from_raw(self.pieces.clone(), self.orientation)
    }

    /// Image of an F-tessellation.
    ///
    /// Works in the window obtained by refining the support polygon of `b`
    /// until each side lies in one piece of `self`; there every side maps to
    /// a side of the image window and the tessellation outside both windows
    /// is the base triangulation.
    pub fn act_tessellation(&self, b: &FTessellation) -> FTessellation {
        let window = refine_common(&b.support_polygon(), &self.domain_partition());
        let view = b.local_view(&window).expect("refined support window fits");
        let mut leaves: Vec<DyadicInterval> = window.leaves().iter().map(|l| self.image_of_leaf(l)).collect();
        leaves.sort_by_key(|l| l.left());
        let image = StandardPartition::from_leaves(leaves).expect("images of leaves tile the circle");
        let index: Vec<usize> = view
            .vertices
            .iter()
            .map(|v| image.vertex_index(&self.evaluate(v)).expect("breakpoints map to breakpoints"))
            .collect();
        let diags: BTreeSet<Chord> = view
            .diagonals
            .iter()
            .map(|&(i, j)| polygon::chord(index[i], index[j]))
            .collect();
        FTessellation::from_local(&image, &diags).expect("image window has at least 3 sides")
    }

    fn image_of_leaf(&self, leaf: &DyadicInterval) -> DyadicInterval {
        let k = self.pieces.partition_point(|p| p.src.left() <= leaf.left()) - 1;
        let p = &self.pieces[k];
        debug_assert!(p.src.contains(leaf));
        let depth = leaf.level() - p.src.level();
        let r = p.src.offset_of(leaf);
        let off = match self.orientation {
            Orientation::Preserving => r,
            Orientation::Reversing => (BigUint::one() << depth as usize) - 1u32 - r,
        };
        p.dst.descendant(depth, off)
    }

    /// An F-triangulation moved by `self`, or `None` for the identity.
    ///
    /// Tries `A_F`, then every single flip of a base arc that is a diagonal
    /// of the uniform window of level `2, 3, …, max_level`.
    pub fn faithfulness_witness(&self, max_level: u32) -> Result<Option<FTessellation>> {
        if self.is_identity() {
            return Ok(None);
        }
        let base = FTessellation::base();
        if self.act_tessellation(&base) != base {
            return Ok(Some(base));
        }
        let mut tried = 1;
        let mut seen = BTreeSet::new();
        for level in 2..=max_level.max(2) {
            let w = StandardPartition::uniform(level);
            for arc in crate::dyadic::base_arcs_in_window(&w)? {
                if !w.is_diagonal(&arc) || !seen.insert(arc.clone()) {
                    continue;
                }
                tried += 1;
                let flipped = base.flip_arc(&arc)?.target;
                if self.act_tessellation(&flipped) != flipped {
                    return Ok(Some(flipped));
                }
            }
        }
        Err(Error::BudgetExhausted(tried))
    }
}

fn reduce_pieces(pieces: Vec<Piece>, o: Orientation) -> Vec<Piece> {
    let mergeable = |a: &Piece, b: &Piece| {
        a.src.is_left_sibling_of(&b.src)
            && match o {
                Orientation::Preserving => a.dst.is_left_sibling_of(&b.dst),
                Orientation::Reversing => b.dst.is_left_sibling_of(&a.dst),
            }
    };
    let mut stack: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        stack.push(p);
        while stack.len() >= 2 && mergeable(&stack[stack.len() - 2], &stack[stack.len() - 1]) {
            stack.pop();
            let a = stack.pop().expect("len >= 2");
            stack.push(Piece {
                src: a.src.parent().expect("siblings have a parent"),
                dst: a.dst.parent().expect("siblings have a parent"),
            });
        }
    }
    stack
}

fn random_partition<R: Rng + ?Sized>(rng: &mut R, leaves: usize) -> StandardPartition {
    let mut p = StandardPartition::trivial();
    while p.len() < leaves {
        let i = rng.random_range(0..p.len());
        p.split_leaf(i);
    }
    p
}

impl fmt::Display for ThompsonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|p| format!("{}->{}", p.src, p.dst)).collect();
        let o = match self.orientation {
            Orientation::Preserving => "+",
            Orientation::Reversing => "-",
        };
        write!(f, "{} ({o})", parts.join(" "))
    }
}

impl fmt::Debug for ThompsonElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ThompsonElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ThompsonElement", 2)?;
        st.serialize_field("intervals", &self.pieces)?;
        st.serialize_field("orientation", &self.orientation)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ThompsonElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            intervals: Vec<Piece>,
            orientation: Orientation,
        }
        let raw = Raw::deserialize(d)?;
        let pairs = raw.intervals.into_iter().map(|p| (p.src, p.dst)).collect();
        ThompsonElement::make_element(pairs, raw.orientation).map_err(serde::de::Error::custom)
    }
}

/// Parses `id`, `refl`, `x0`, `rot m/2^n` (or `rot 3/8`), a JSON element, or
/// a product of shorthands joined by `*` (applied right to left).
impl FromStr for ThompsonElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()));
        }
        let mut acc = ThompsonElement::identity();
        for factor in s.split('*') {
            acc = acc.compose(&parse_generator(factor.trim())?);
        }
        Ok(acc)
    }
}

fn parse_generator(s: &str) -> Result<ThompsonElement> {
    match s {
        "id" | "identity" => return Ok(ThompsonElement::identity()),
        "refl" | "reflection" => return Ok(ThompsonElement::reflection()),
        "x0" => return Ok(ThompsonElement::x0()),
        _ => {}
    }
    let Some(r) = s.strip_prefix("rot") else {
        return Err(Error::Parse(format!("unknown group element `{s}`")));
    };
    let r: Dyadic = r.trim().parse()?;
    if r.exponent() > 16 {
        return Err(Error::Parse(format!("rotation {r} has too fine a denominator")));
    }
    Ok(ThompsonElement::rotation(&r))
}
