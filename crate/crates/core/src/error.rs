use thiserror::Error;

use crate::dyadic::{Arc, Dyadic};
use crate::ftess::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate arc: both endpoints are {0}")]
    DegenerateArc(Dyadic),

    #[error("degenerate interval: endpoints coincide at {0}")]
    DegenerateInterval(Dyadic),

    #[error("[{0}, {1}] is not a standard dyadic interval")]
    NotStandardInterval(String, String),

    #[error("breakpoints {0} do not form a standard dyadic partition")]
    NotStandardPartition(String),

    #[error("inscribed polygon needs at least 3 sides, partition has {0} intervals")]
    DegeneratePolygon(usize),

    #[error("polygon must have at least 3 vertices, got {0}")]
    InvalidPolygon(usize),

    #[error("({i},{j}) is not an interior diagonal of a {n}-gon")]
    InvalidDiagonal { n: usize, i: usize, j: usize },

    #[error("side {side} does not exist on a {n}-gon")]
    InvalidSide { n: usize, side: usize },

    #[error("diagonals ({0},{1}) and ({2},{3}) cross")]
    CrossingDiagonals(usize, usize, usize, usize),

    #[error("expected a triangulation, found a face of dimension {0}")]
    NotTriangulation(usize),

    #[error("diagonal ({0},{1}) is not part of the tessellation")]
    MissingDiagonal(usize, usize),

    #[error("tree has {leaves} leaves, expected {expected}")]
    TreeShape { leaves: usize, expected: usize },

    #[error("invalid F-tessellation: {}", display_violations(.0))]
    InvalidTessellation(Vec<Violation>),

    #[error("arc {0} does not belong to the tessellation")]
    ArcNotPresent(Arc),

    #[error("expected an F-triangulation, found rank {0}")]
    NotFTriangulation(usize),

    #[error("rank {rank} exceeds the enumeration bound {bound}")]
    RankTooLarge { rank: usize, bound: usize },

    #[error("rank {0} is outside the supported range")]
    WrongRank(usize),

    #[error("support of the tessellation does not fit inside window {0}")]
    OutsideWindow(String),

    #[error("search budget exhausted after visiting {0} states")]
    BudgetExhausted(usize),

    #[error("edges are not consecutive: {0}")]
    NotConsecutive(String),

    #[error("invalid Thompson element: {0}")]
    InvalidElement(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn display_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
