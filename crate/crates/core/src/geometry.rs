//! Rectangles, points, endpoint compression and the rectangle intersection classifier.
//!
//! Rectangles are half-open in both axes: a rectangle `(min_x, min_y, max_x, max_y)` covers
//! `[min_x, max_x) x [min_y, max_y)`. Two rectangles intersect only when they share a region of
//! positive area, so rectangles that merely touch along an edge or at a corner do not intersect.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer coordinate type usable by the index.
///
/// Only exact integer types qualify: the index matches endpoints by equality and compresses them
/// into ranks, which rules out floating point.
pub trait Coord:
    PrimInt + Signed + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Coord for T where
    T: PrimInt + Signed + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

pub(crate) fn widen<C: Coord>(c: C) -> i128 {
    // every signed primitive up to 128 bits fits
    c.to_i128().expect("signed primitive fits in i128")
}

/// Identifier of a stored rectangle.
pub type RectId = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point<C> {
    pub x: C,
    pub y: C,
}

impl<C: Coord> Point<C> {
    pub fn new(x: C, y: C) -> Self {
        Point { x, y }
    }
}

/// An axis-parallel rectangle with an identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect<C> {
    pub id: RectId,
    pub min_x: C,
    pub min_y: C,
    pub max_x: C,
    pub max_y: C,
}

impl<C: Coord> Rect<C> {
    /// Builds a rectangle, rejecting zero or negative extents.
    pub fn new(id: RectId, min_x: C, min_y: C, max_x: C, max_y: C) -> Result<Self> {
        let r = Rect { id, min_x, min_y, max_x, max_y };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_x < self.max_x && self.min_y < self.max_y {
            Ok(())
        } else {
            Err(Error::DegenerateRect {
                id: self.id,
                min_x: widen(self.min_x),
                min_y: widen(self.min_y),
                max_x: widen(self.max_x),
                max_y: widen(self.max_y),
            })
        }
    }

    /// The `[lo, hi)` extent along `axis`.
    pub fn extent(&self, axis: Axis) -> (C, C) {
        match axis {
            Axis::X => (self.min_x, self.max_x),
            Axis::Y => (self.min_y, self.max_y),
        }
    }

    /// Half-open containment of a point.
    pub fn contains_point(&self, p: Point<C>) -> bool {
        self.min_x <= p.x && p.x < self.max_x && self.min_y <= p.y && p.y < self.max_y
    }

    pub fn same_extent(&self, other: &Rect<C>) -> bool {
        self.min_x == other.min_x
            && self.min_y == other.min_y
            && self.max_x == other.max_x
            && self.max_y == other.max_y
    }
}

/// Positive-area overlap.
pub fn rects_overlap<C: Coord>(a: &Rect<C>, b: &Rect<C>) -> bool {
    a.min_x.max(b.min_x) < a.max_x.min(b.max_x) && a.min_y.max(b.min_y) < a.max_y.min(b.max_y)
}

/// How two rectangles meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntersectionKind {
    Disjoint,
    Equal,
    /// `a` lies within `b` (and they differ).
    AInsideB,
    BInsideA,
    /// `a` is the tall one: its x-extent lies within `b`'s, and it spans all of `b`'s y-extent.
    ACrossesB,
    /// `b` is the tall one.
    BCrossesA,
    /// Any other overlap, i.e. a corner or side of one pokes into the other.
    Partial,
}

fn within<C: Coord>(inner: (C, C), outer: (C, C)) -> bool {
    outer.0 <= inner.0 && inner.1 <= outer.1
}

pub fn classify_intersection<C: Coord>(a: &Rect<C>, b: &Rect<C>) -> IntersectionKind {
    if !rects_overlap(a, b) {
        return IntersectionKind::Disjoint;
    }
    if a.same_extent(b) {
        return IntersectionKind::Equal;
    }
    let (ax, ay) = (a.extent(Axis::X), a.extent(Axis::Y));
    let (bx, by) = (b.extent(Axis::X), b.extent(Axis::Y));
    if within(ax, bx) && within(ay, by) {
        IntersectionKind::AInsideB
    } else if within(bx, ax) && within(by, ay) {
        IntersectionKind::BInsideA
    } else if within(ax, bx) && within(by, ay) {
        IntersectionKind::ACrossesB
    } else if within(bx, ax) && within(ay, by) {
        IntersectionKind::BCrossesA
    } else {
        IntersectionKind::Partial
    }
}

/// Half-open run of slab ranks `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RankInterval {
    pub lo: u64,
    pub hi: u64,
}

impl RankInterval {
    pub fn new(lo: u64, hi: u64) -> Self {
        RankInterval { lo, hi }
    }

    pub fn len(&self) -> u64 {
        self.hi.saturating_sub(self.lo)
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, rank: u64) -> bool {
        self.lo <= rank && rank < self.hi
    }

    pub fn contains_interval(&self, other: &RankInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Number of levels below the root needed for `slabs` leaves: `ceil(log2(max(slabs, 1)))`.
pub fn levels_for(slabs: u64) -> u32 {
    slabs.max(1).next_power_of_two().trailing_zeros()
}

/// Sorted distinct endpoints per axis. Consecutive endpoints bound the elementary slabs; the slab
/// ranks are padded up to a power of two with phantom slabs that hold no real coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateMap<C> {
    xs: Vec<C>,
    ys: Vec<C>,
}

impl<C: Coord> Default for CoordinateMap<C> {
    fn default() -> Self {
        CoordinateMap { xs: Vec::new(), ys: Vec::new() }
    }
}

impl<C: Coord> CoordinateMap<C> {
    /// Map over explicit endpoint lists; duplicates are removed and the lists sorted.
    pub fn from_endpoints(mut xs: Vec<C>, mut ys: Vec<C>) -> Self {
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        CoordinateMap { xs, ys }
    }

    pub fn endpoints(&self, axis: Axis) -> &[C] {
        match axis {
            Axis::X => &self.xs,
            Axis::Y => &self.ys,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty() && self.ys.is_empty()
    }

    /// Real (non-padding) slab count.
    pub fn slab_count(&self, axis: Axis) -> u64 {
        self.endpoints(axis).len().saturating_sub(1) as u64
    }

    pub fn levels(&self, axis: Axis) -> u32 {
        levels_for(self.slab_count(axis))
    }

    /// Padded universe size, `2^levels`.
    pub fn padded_size(&self, axis: Axis) -> u64 {
        1u64 << self.levels(axis)
    }

    /// The slab holding `coord`, or `None` outside `[first, last)`.
    pub fn slab_of(&self, axis: Axis, coord: C) -> Option<u64> {
        let e = self.endpoints(axis);
        if e.len() < 2 || coord < e[0] || coord >= e[e.len() - 1] {
            return None;
        }
        // number of endpoints <= coord, minus one
        Some((e.partition_point(|&v| v <= coord) - 1) as u64)
    }

    fn rank(&self, axis: Axis, coord: C) -> Result<u64> {
        self.endpoints(axis)
            .binary_search(&coord)
            .map(|r| r as u64)
            .map_err(|_| Error::UnregisteredEndpoint { axis, coord: widen(coord) })
    }

    pub fn rank_interval(&self, axis: Axis, lo: C, hi: C) -> Result<RankInterval> {
        let lo_rank = self.rank(axis, lo)?;
        let hi_rank = self.rank(axis, hi)?;
        if lo_rank >= hi_rank {
            return Err(Error::EmptyInterval { lo: lo_rank, hi: hi_rank });
        }
        Ok(RankInterval::new(lo_rank, hi_rank))
    }

    /// Widen `[lo, hi)` outward to registered endpoints, clamped to the real grid.
    ///
    /// Returns `None` when the clamped range has no extent, i.e. it misses the grid entirely.
    pub fn snap_outward(&self, axis: Axis, lo: C, hi: C) -> Option<(C, C)> {
        let e = self.endpoints(axis);
        if e.len() < 2 {
            return None;
        }
        let below = e.partition_point(|&v| v <= lo);
        let snapped_lo = if below == 0 { e[0] } else { e[below - 1] };
        let above = e.partition_point(|&v| v < hi);
        let snapped_hi = if above == e.len() { e[e.len() - 1] } else { e[above] };
        (snapped_lo < snapped_hi).then_some((snapped_lo, snapped_hi))
    }
}

/// Coordinate map holding exactly the distinct endpoints of `rects`.
///
/// Fails on a degenerate rectangle or a repeated id. An empty input gives an empty map.
pub fn build_coordinate_map<C: Coord>(rects: &[Rect<C>]) -> Result<CoordinateMap<C>> {
    let mut seen = HashSet::with_capacity(rects.len());
    let mut xs = Vec::with_capacity(rects.len() * 2);
    let mut ys = Vec::with_capacity(rects.len() * 2);
    for r in rects {
        r.validate()?;
        if !seen.insert(r.id) {
            return Err(Error::DuplicateId(r.id));
        }
        xs.extend([r.min_x, r.max_x]);
        ys.extend([r.min_y, r.max_y]);
    }
    Ok(CoordinateMap::from_endpoints(xs, ys))
}
