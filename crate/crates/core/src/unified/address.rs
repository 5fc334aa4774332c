//! Addresses of unified-tree nodes and the parent/child/ancestor relations between them.
//!
//! A node is the product of one x-node and one y-node of the per-axis dyadic trees. Its unit in
//! the diamond is the pair of levels `(a, b)`: every node in a unit represents a rectangle of the
//! same shape. An x-parent halves the x-index and keeps the y component, a y-parent does the
//! opposite, and the two commute.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Axis, RankInterval, Rect};
use crate::seg1d::DyadicNode1D;

/// Levels below the root along each axis of a padded universe.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Levels {
    pub x: u32,
    pub y: u32,
}

impl Levels {
    pub fn new(x: u32, y: u32) -> Self {
        Levels { x, y }
    }

    pub fn get(&self, axis: Axis) -> u32 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }

    /// Number of diamond units, `(x + 1) * (y + 1)`.
    pub fn unit_count(&self) -> usize {
        (self.x as usize + 1) * (self.y as usize + 1)
    }

    /// Every address in the universe. Only sensible for small universes.
    pub fn all_addresses(&self) -> impl Iterator<Item = DyadicAddress> + '_ {
        (0..=self.x).flat_map(move |xl| {
            (0..1u64 << xl).flat_map(move |xi| {
                (0..=self.y).flat_map(move |yl| {
                    (0..1u64 << yl).map(move |yi| DyadicAddress::new(xl, xi, yl, yi))
                })
            })
        })
    }

    pub fn contains(&self, addr: &DyadicAddress) -> bool {
        addr.x.level <= self.x
            && addr.y.level <= self.y
            && addr.x.index < 1u64 << addr.x.level
            && addr.y.index < 1u64 << addr.y.level
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicAddress {
    pub x: DyadicNode1D,
    pub y: DyadicNode1D,
}

impl fmt::Debug for DyadicAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.x.level, self.x.index, self.y.level, self.y.index)
    }
}

impl fmt::Display for DyadicAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl DyadicAddress {
    pub const ROOT: DyadicAddress = DyadicAddress { x: DyadicNode1D::ROOT, y: DyadicNode1D::ROOT };

    /// Address from `(x-level, x-index, y-level, y-index)`.
    pub fn new(x_level: u32, x_index: u64, y_level: u32, y_index: u64) -> Self {
        DyadicAddress {
            x: DyadicNode1D::new(x_level, x_index),
            y: DyadicNode1D::new(y_level, y_index),
        }
    }

    pub fn from_nodes(x: DyadicNode1D, y: DyadicNode1D) -> Self {
        DyadicAddress { x, y }
    }

    pub fn unit(&self) -> (u32, u32) {
        (self.x.level, self.y.level)
    }

    pub fn region(&self, levels: Levels) -> (RankInterval, RankInterval) {
        (self.x.interval(levels.x), self.y.interval(levels.y))
    }

    /// The represented region as a rank-space rectangle with id 0.
    pub fn region_rect(&self, levels: Levels) -> Rect<i64> {
        let (x, y) = self.region(levels);
        Rect { id: 0, min_x: x.lo as i64, min_y: y.lo as i64, max_x: x.hi as i64, max_y: y.hi as i64 }
    }

    pub fn x_parent(&self) -> Result<DyadicAddress> {
        let x = self.x.parent().ok_or(Error::NoParent { axis: Axis::X })?;
        Ok(DyadicAddress { x, y: self.y })
    }

    pub fn y_parent(&self) -> Result<DyadicAddress> {
        let y = self.y.parent().ok_or(Error::NoParent { axis: Axis::Y })?;
        Ok(DyadicAddress { x: self.x, y })
    }

    pub fn x_children(&self, levels: Levels) -> Result<[DyadicAddress; 2]> {
        let [l, r] = self.x.children(levels.x).ok_or(Error::NoChild { axis: Axis::X })?;
        Ok([DyadicAddress { x: l, y: self.y }, DyadicAddress { x: r, y: self.y }])
    }

    pub fn y_children(&self, levels: Levels) -> Result<[DyadicAddress; 2]> {
        let [l, r] = self.y.children(levels.y).ok_or(Error::NoChild { axis: Axis::Y })?;
        Ok([DyadicAddress { x: self.x, y: l }, DyadicAddress { x: self.x, y: r }])
    }

    /// One address per unit `(a', b')` with `a' <= a`, `b' <= b`; self first when included.
    pub fn ancestors(&self, include_self: bool) -> Vec<DyadicAddress> {
        let (a, b) = self.unit();
        let mut out = Vec::with_capacity((a as usize + 1) * (b as usize + 1));
        for yl in (0..=b).rev() {
            let y = self.y.ancestor_at(yl);
            for xl in (0..=a).rev() {
                if !include_self && xl == a && yl == b {
                    continue;
                }
                out.push(DyadicAddress { x: self.x.ancestor_at(xl), y });
            }
        }
        out
    }

    /// Strict x-ancestors, nearest first.
    pub fn x_ancestors(&self) -> impl Iterator<Item = DyadicAddress> + '_ {
        (0..self.x.level).rev().map(|l| DyadicAddress { x: self.x.ancestor_at(l), y: self.y })
    }

    /// Strict y-ancestors, nearest first.
    pub fn y_ancestors(&self) -> impl Iterator<Item = DyadicAddress> + '_ {
        (0..self.y.level).rev().map(|l| DyadicAddress { x: self.x, y: self.y.ancestor_at(l) })
    }
}

/// Whether `a` is `b` or a descendant of it; equivalently region(a) lies within region(b).
pub fn is_descendant(a: &DyadicAddress, b: &DyadicAddress) -> bool {
    a.x.is_within(&b.x) && a.y.is_within(&b.y)
}

/// Whether the regions of `a` and `b` cross: one strictly inside the other's x-extent while
/// strictly spanning its y-extent.
pub fn crossing(a: &DyadicAddress, b: &DyadicAddress) -> bool {
    let strictly = |inner: &DyadicNode1D, outer: &DyadicNode1D| {
        inner.level > outer.level && inner.is_within(outer)
    };
    (strictly(&a.x, &b.x) && strictly(&b.y, &a.y)) || (strictly(&b.x, &a.x) && strictly(&a.y, &b.y))
}
