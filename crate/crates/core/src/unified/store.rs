//! Compact node storage: packed address keys and one segmented id list per node.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::address::DyadicAddress;
use crate::seg1d::DyadicNode1D;

/// Deepest level a packed key can express per axis.
pub(crate) const MAX_LEVEL: u32 = 31;

/// Heap numbering per axis (`2^level + index`), x in the high half.
pub(crate) fn pack(addr: &DyadicAddress) -> u64 {
    let hx = (1u64 << addr.x.level) | addr.x.index;
    let hy = (1u64 << addr.y.level) | addr.y.index;
    (hx << 32) | hy
}

pub(crate) fn unpack(key: u64) -> DyadicAddress {
    let half = |h: u64| {
        let level = 63 - h.leading_zeros();
        DyadicNode1D { level, index: h ^ (1u64 << level) }
    };
    DyadicAddress { x: half(key >> 32), y: half(key & 0xffff_ffff) }
}

/// Which list of a node an entry belongs to. Every rectangle meets a node in at most one way.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    /// The node is one of the rectangle's pieces.
    Here = 0,
    /// A piece lies below along x only.
    XBelow = 1,
    /// A piece lies below along y only.
    YBelow = 2,
    /// A piece lies below along both axes.
    Below = 3,
}

/// Entries are kept grouped as `[here | x-below | y-below | below]`, so every descendant list
/// of the augmented node is a contiguous slice.
#[derive(Clone, Debug, Default)]
pub(crate) struct Record {
    entries: SmallVec<[u32; 4]>,
    ends: [u32; 3],
}

impl Record {
    pub(crate) fn add(&mut self, slot: Slot, entry: u32) {
        let k = slot as usize;
        let pos = if k == 3 { self.entries.len() } else { self.ends[k] as usize };
        self.entries.insert(pos, entry);
        for e in &mut self.ends[k.min(3)..] {
            *e += 1;
        }
    }

    pub(crate) fn here(&self) -> &[u32] {
        &self.entries[..self.ends[0] as usize]
    }

    pub(crate) fn x_descendants(&self) -> &[u32] {
        &self.entries[self.ends[0] as usize..self.ends[1] as usize]
    }

    pub(crate) fn y_descendants(&self) -> &[u32] {
        &self.entries[self.ends[1] as usize..self.ends[2] as usize]
    }

    pub(crate) fn descendants(&self) -> &[u32] {
        &self.entries[self.ends[0] as usize..]
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Drops `entry` from the `here` group. Returns whether it was present.
    pub(crate) fn remove_here(&mut self, entry: u32) -> bool {
        match self.here().iter().position(|&e| e == entry) {
            Some(pos) => {
                self.entries.remove(pos);
                for e in &mut self.ends {
                    *e -= 1;
                }
                true
            }
            None => false,
        }
    }
}

pub(crate) type NodeMap = FxHashMap<u64, Record>;
