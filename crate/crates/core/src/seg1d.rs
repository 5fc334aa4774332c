//! The one-dimensional segment tree over a padded rank universe of `2^levels` slabs.
//!
//! Nodes are never materialized here. A node is a `(level, index)` address and its parent,
//! children and interval follow from shifts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::RankInterval;

/// A node of the 1D tree: `level` 0 is the root, `index < 2^level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicNode1D {
    pub level: u32,
    pub index: u64,
}

impl DyadicNode1D {
    pub const ROOT: DyadicNode1D = DyadicNode1D { level: 0, index: 0 };

    pub fn new(level: u32, index: u64) -> Self {
        debug_assert!(index < (1u64 << level));
        DyadicNode1D { level, index }
    }

    /// Rank interval represented in a universe with `levels` levels below the root.
    pub fn interval(&self, levels: u32) -> RankInterval {
        let width = 1u64 << (levels - self.level);
        RankInterval::new(self.index * width, (self.index + 1) * width)
    }

    pub fn parent(&self) -> Option<DyadicNode1D> {
        (self.level > 0).then(|| DyadicNode1D { level: self.level - 1, index: self.index >> 1 })
    }

    /// Left and right child, if `self` is above the leaf level.
    pub fn children(&self, levels: u32) -> Option<[DyadicNode1D; 2]> {
        (self.level < levels).then(|| {
            let level = self.level + 1;
            [
                DyadicNode1D { level, index: self.index << 1 },
                DyadicNode1D { level, index: (self.index << 1) | 1 },
            ]
        })
    }

    /// The ancestor of `self` at `level`, which must not be deeper than `self`.
    pub fn ancestor_at(&self, level: u32) -> DyadicNode1D {
        debug_assert!(level <= self.level);
        DyadicNode1D { level, index: self.index >> (self.level - level) }
    }

    /// Whether `self` is `other` or lies below it.
    pub fn is_within(&self, other: &DyadicNode1D) -> bool {
        other.level <= self.level && self.index >> (self.level - other.level) == other.index
    }
}

/// Canonical cover: the maximal tree nodes tiling `interval`, ordered by rank.
pub fn canonical_cover_1d(interval: RankInterval, levels: u32) -> Result<Vec<DyadicNode1D>> {
    let size = 1u64 << levels;
    if interval.is_empty() {
        return Err(Error::EmptyInterval { lo: interval.lo, hi: interval.hi });
    }
    if interval.hi > size {
        return Err(Error::OutOfUniverse { lo: interval.lo, hi: interval.hi, size });
    }
    let mut out = Vec::new();
    descend(DyadicNode1D::ROOT, levels, interval, &mut out);
    Ok(out)
}

fn descend(node: DyadicNode1D, levels: u32, target: RankInterval, out: &mut Vec<DyadicNode1D>) {
    let span = node.interval(levels);
    if span.hi <= target.lo || target.hi <= span.lo {
        return;
    }
    if target.contains_interval(&span) {
        out.push(node);
        return;
    }
    // partial overlap; a leaf is never partial because it spans a single rank
    for child in node.children(levels).expect("partially covered node is not a leaf") {
        descend(child, levels, target, out);
    }
}

/// Strict ancestors of `node`, nearest first.
pub fn ancestors_1d(node: DyadicNode1D) -> Vec<DyadicNode1D> {
    (0..node.level).rev().map(|level| node.ancestor_at(level)).collect()
}

/// Root-to-leaf path through the leaf holding `slab`.
pub fn stab_path_1d(slab: u64, levels: u32) -> Vec<DyadicNode1D> {
    debug_assert!(slab < (1u64 << levels));
    let leaf = DyadicNode1D { level: levels, index: slab };
    (0..=levels).map(|level| leaf.ancestor_at(level)).collect()
}
