use thiserror::Error;

use crate::geometry::{Axis, RectId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate rectangle id {0}")]
    DuplicateId(RectId),
    #[error("rectangle {id} is degenerate: ({min_x}, {min_y})-({max_x}, {max_y})")]
    DegenerateRect { id: RectId, min_x: i128, min_y: i128, max_x: i128, max_y: i128 },
    #[error("{axis} coordinate {coord} is not a registered endpoint")]
    UnregisteredEndpoint { axis: Axis, coord: i128 },
    #[error("empty rank interval [{lo}, {hi})")]
    EmptyInterval { lo: u64, hi: u64 },
    #[error("rank interval [{lo}, {hi}) exceeds a universe of {size} slabs")]
    OutOfUniverse { lo: u64, hi: u64, size: u64 },
    #[error("node at {axis}-level 0 has no {axis}-parent")]
    NoParent { axis: Axis },
    #[error("node at the deepest {axis}-level has no {axis}-children")]
    NoChild { axis: Axis },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
