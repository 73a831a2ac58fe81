//! Finite associahedra, F-tessellations of the disk and the action of the
//! non-oriented Thompson group `T^±` on them.
//!
//! The infinite-dimensional associahedron `A_T` is a cell complex whose
//! vertices are F-triangulations of the disk. Everything here works with
//! exact dyadic rationals and finite windows, so results are combinatorial
//! certificates rather than floating-point approximations.

pub mod associahedron;
pub mod complexnav;
pub mod dyadic;
pub mod error;
pub mod ftess;
pub(crate) mod polygon;
pub mod thompson;

pub use associahedron::{FaceLattice, PlanarTree, PolygonTessellation, SphereReport};
pub use dyadic::{Arc, Dyadic, DyadicInterval, StandardPartition};
pub use error::{Error, Result};
pub use ftess::{CellDescriptor, FTessellation, Flip, Violation};
pub use thompson::{Orientation, Piece, ThompsonElement};
pub use complexnav::{CellLink, DistanceReport, LinkShape, WindowPolicy};
