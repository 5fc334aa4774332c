//! Brute-force references for the index: linear scans and cell enumeration.

use crate::geometry::{rects_overlap, Coord, Point, Rect, RectId};
use crate::unified::{DyadicAddress, Levels};
use crate::geometry::RankInterval;

/// Ids of `rects` containing `p` (half-open), ascending.
pub fn oracle_stab<C: Coord>(rects: &[Rect<C>], p: Point<C>) -> Vec<RectId> {
    let mut ids: Vec<RectId> = rects.iter().filter(|r| r.contains_point(p)).map(|r| r.id).collect();
    ids.sort_unstable();
    ids
}

/// Ids of `rects` overlapping `q` with positive area, ascending.
pub fn oracle_intersect<C: Coord>(rects: &[Rect<C>], q: &Rect<C>) -> Vec<RectId> {
    let mut ids: Vec<RectId> = rects.iter().filter(|r| rects_overlap(r, q)).map(|r| r.id).collect();
    ids.sort_unstable();
    ids
}

/// Largest universe side `oracle_cover_check` will enumerate.
pub const MAX_CHECK_SIDE: u64 = 1 << 8;

/// Whether `pieces` tile the rank region `x_range x y_range` exactly: every cell of the region
/// lies in exactly one piece and no piece reaches outside it.
///
/// Universes wider than [`MAX_CHECK_SIDE`] per axis are refused with `false`.
pub fn oracle_cover_check(
    pieces: &[DyadicAddress],
    levels: Levels,
    x_range: RankInterval,
    y_range: RankInterval,
) -> bool {
    let (w, h) = (1u64 << levels.x, 1u64 << levels.y);
    if w > MAX_CHECK_SIDE || h > MAX_CHECK_SIDE {
        return false;
    }
    let mut hits = vec![0u32; (w * h) as usize];
    for p in pieces {
        if !levels.contains(p) {
            return false;
        }
        let (px, py) = p.region(levels);
        for cx in px.lo..px.hi {
            for cy in py.lo..py.hi {
                if !(x_range.contains(cx) && y_range.contains(cy)) {
                    return false;
                }
                hits[(cx * h + cy) as usize] += 1;
            }
        }
    }
    (x_range.lo..x_range.hi).all(|cx| (y_range.lo..y_range.hi).all(|cy| hits[(cx * h + cy) as usize] == 1))
}
