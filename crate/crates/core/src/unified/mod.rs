//! The unified segment tree.
//!
//! The xy- and yx-segment trees over the same rectangles decompose each rectangle into the same
//! pieces, and a node of either tree is named by the region it represents. Keying nodes by their
//! [`DyadicAddress`] therefore merges the two trees (and the inner roots into their outer nodes)
//! without any bookkeeping: there is one record per region. Only the records touched by an insert
//! are materialized, which is exactly the canonical pieces of each stored rectangle plus all of
//! their ancestors.
//!
//! Each record keeps four id lists:
//!
//! * `stored_here`: rectangles with this node among their canonical pieces,
//! * `stored_in_descendants`: rectangles with a piece strictly below this node,
//! * `stored_in_x_descendants`: rectangles with a piece reached from here by x-children only,
//! * `stored_in_y_descendants`: the same for y-children.
//!
//! Two node regions either nest or cross, so a rectangle query needs only the ancestors of the
//! query's own pieces: nesting is seen through `stored_here` of ancestors and
//! `stored_in_descendants` of the piece, crossing through the x-/y-descendant lists of the
//! piece's y-/x-ancestors.

mod address;
mod store;

use std::collections::HashSet;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

pub use address::{crossing, is_descendant, DyadicAddress, Levels};

use crate::error::{Error, Result};
use crate::geometry::{build_coordinate_map, Axis, Coord, CoordinateMap, Point, Rect, RectId};
use crate::seg1d::{canonical_cover_1d, DyadicNode1D};
use store::{pack, unpack, NodeMap, Record, Slot, MAX_LEVEL};

/// The id lists of one node, as rectangle ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub stored_here: Vec<RectId>,
    pub stored_in_descendants: Vec<RectId>,
    pub stored_in_x_descendants: Vec<RectId>,
    pub stored_in_y_descendants: Vec<RectId>,
}

impl NodeRecord {
    pub fn is_empty(&self) -> bool {
        self.stored_here.is_empty()
            && self.stored_in_descendants.is_empty()
            && self.stored_in_x_descendants.is_empty()
            && self.stored_in_y_descendants.is_empty()
    }
}

/// Per-unit figures for the diamond view.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitStats {
    pub a: u32,
    pub b: u32,
    pub nodes: usize,
    /// Total `stored_here` entries across the unit.
    pub stored: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub rects: usize,
    pub nodes: usize,
    pub lx: u32,
    pub ly: u32,
    pub units: Vec<UnitStats>,
    /// Largest strict-ancestor set of one rectangle's canonical pieces.
    pub max_ancestors: usize,
    /// Largest number of those ancestors falling in a single unit.
    pub max_unit_ancestors: usize,
    pub max_pieces: usize,
}

/// A 1D canonical cover closed under ancestors, flagged by cover membership.
fn ancestor_closure(cover: &[DyadicNode1D]) -> Vec<(DyadicNode1D, bool)> {
    let mut out: Vec<(DyadicNode1D, bool)> = cover.iter().map(|&n| (n, true)).collect();
    for node in cover {
        let mut cur = *node;
        while let Some(p) = cur.parent() {
            out.push((p, false));
            cur = p;
        }
    }
    // cover nodes are disjoint, so a node is never both a cover member and a strict ancestor
    out.sort_unstable();
    out.dedup();
    out
}

fn count_by_level(closure: &[(DyadicNode1D, bool)], levels: u32) -> Vec<(usize, usize)> {
    let mut counts = vec![(0usize, 0usize); levels as usize + 1];
    for (node, is_cover) in closure {
        let slot = &mut counts[node.level as usize];
        slot.0 += 1;
        if *is_cover {
            slot.1 += 1;
        }
    }
    counts
}

/// The two-dimensional unified segment tree over integer coordinates `C`.
///
/// The coordinate map is fixed when the tree is created; rectangles inserted later must use
/// registered endpoints. Writes need `&mut self`, queries only `&self`, so a built tree can be
/// shared between threads for concurrent queries.
#[derive(Clone, Debug)]
pub struct UnifiedSegmentTree<C> {
    map: CoordinateMap<C>,
    levels: Levels,
    // lists hold positions in `rects`, not ids
    rects: Vec<Rect<C>>,
    slots: FxHashMap<RectId, u32>,
    nodes: NodeMap,
    max_ancestors: usize,
    max_unit_ancestors: usize,
    max_pieces: usize,
}

impl<C: Coord> UnifiedSegmentTree<C> {
    /// Empty tree over a fixed coordinate map.
    ///
    /// # Panics
    ///
    /// If either axis needs more than 31 levels, i.e. has over 2^31 slabs.
    pub fn with_map(map: CoordinateMap<C>) -> Self {
        let levels = Levels::new(map.levels(Axis::X), map.levels(Axis::Y));
        assert!(levels.x <= MAX_LEVEL && levels.y <= MAX_LEVEL, "universe too large: {levels:?}");
        UnifiedSegmentTree {
            map,
            levels,
            rects: Vec::new(),
            slots: FxHashMap::default(),
            nodes: NodeMap::default(),
            max_ancestors: 0,
            max_unit_ancestors: 0,
            max_pieces: 0,
        }
    }

    /// Registers the endpoints of `rects` and inserts all of them.
    pub fn build(rects: &[Rect<C>]) -> Result<Self> {
        let map = build_coordinate_map(rects)?;
        let mut tree = Self::with_map(map);
        for r in rects {
            tree.insert(*r)?;
        }
        Ok(tree)
    }

    pub fn map(&self) -> &CoordinateMap<C> {
        &self.map
    }

    pub fn levels(&self) -> Levels {
        self.levels
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn rect(&self, id: RectId) -> Option<&Rect<C>> {
        self.slots.get(&id).map(|&s| &self.rects[s as usize])
    }

    /// Stored rectangles in insertion order.
    pub fn rects(&self) -> impl Iterator<Item = &Rect<C>> {
        self.rects.iter()
    }

    fn ids(&self, entries: &[u32]) -> Vec<RectId> {
        entries.iter().map(|&s| self.rects[s as usize].id).collect()
    }

    fn to_node_record(&self, rec: &Record) -> NodeRecord {
        NodeRecord {
            stored_here: self.ids(rec.here()),
            stored_in_descendants: self.ids(rec.descendants()),
            stored_in_x_descendants: self.ids(rec.x_descendants()),
            stored_in_y_descendants: self.ids(rec.y_descendants()),
        }
    }

    /// The lists of a materialized node.
    pub fn record(&self, addr: &DyadicAddress) -> Option<NodeRecord> {
        if !self.levels.contains(addr) {
            return None;
        }
        self.nodes.get(&pack(addr)).map(|rec| self.to_node_record(rec))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Addresses of materialized nodes, in no particular order.
    pub fn addresses(&self) -> impl Iterator<Item = DyadicAddress> + '_ {
        self.nodes.keys().map(|&k| unpack(k))
    }

    /// Materialized nodes with their lists, in no particular order.
    pub fn nodes(&self) -> impl Iterator<Item = (DyadicAddress, NodeRecord)> + '_ {
        self.nodes.iter().map(|(&k, rec)| (unpack(k), self.to_node_record(rec)))
    }

    fn covers(&self, rect: &Rect<C>) -> Result<(Vec<DyadicNode1D>, Vec<DyadicNode1D>)> {
        rect.validate()?;
        let xi = self.map.rank_interval(Axis::X, rect.min_x, rect.max_x)?;
        let yi = self.map.rank_interval(Axis::Y, rect.min_y, rect.max_y)?;
        Ok((canonical_cover_1d(xi, self.levels.x)?, canonical_cover_1d(yi, self.levels.y)?))
    }

    /// Canonical pieces: the product of the per-axis canonical covers, x-cover outermost.
    pub fn canonical_pieces(&self, rect: &Rect<C>) -> Result<Vec<DyadicAddress>> {
        let (cx, cy) = self.covers(rect)?;
        Ok(cx
            .iter()
            .flat_map(|&x| cy.iter().map(move |&y| DyadicAddress::from_nodes(x, y)))
            .collect())
    }

    /// The same pieces, decomposing along y first and then splitting each strip along x.
    pub fn canonical_pieces_y_first(&self, rect: &Rect<C>) -> Result<Vec<DyadicAddress>> {
        let (cx, cy) = self.covers(rect)?;
        Ok(cy
            .iter()
            .flat_map(|&y| cx.iter().map(move |&x| DyadicAddress::from_nodes(x, y)))
            .collect())
    }

    /// Stores `rect` at its canonical pieces and records it in every ancestor's lists.
    ///
    /// The union of the pieces' ancestors-or-self is the product of the per-axis ancestor
    /// closures, so each touched record is visited exactly once and each id lands in a list at
    /// most once.
    pub fn insert(&mut self, rect: Rect<C>) -> Result<()> {
        if self.slots.contains_key(&rect.id) {
            return Err(Error::DuplicateId(rect.id));
        }
        let (cx, cy) = self.covers(&rect)?;
        let ax = ancestor_closure(&cx);
        let ay = ancestor_closure(&cy);

        let entry = u32::try_from(self.rects.len()).expect("at most 2^32 rectangles");
        for &(x, x_cover) in &ax {
            for &(y, y_cover) in &ay {
                let slot = match (x_cover, y_cover) {
                    (true, true) => Slot::Here,
                    // strict x-ancestor of a piece
                    (false, true) => Slot::XBelow,
                    (true, false) => Slot::YBelow,
                    (false, false) => Slot::Below,
                };
                let key = pack(&DyadicAddress::from_nodes(x, y));
                self.nodes.entry(key).or_default().add(slot, entry);
            }
        }

        let pieces = cx.len() * cy.len();
        self.max_pieces = self.max_pieces.max(pieces);
        self.max_ancestors = self.max_ancestors.max(ax.len() * ay.len() - pieces);
        let per_x = count_by_level(&ax, self.levels.x);
        let per_y = count_by_level(&ay, self.levels.y);
        for &(nx, cover_x) in &per_x {
            for &(ny, cover_y) in &per_y {
                self.max_unit_ancestors = self.max_unit_ancestors.max(nx * ny - cover_x * cover_y);
            }
        }

        self.slots.insert(rect.id, entry);
        self.rects.push(rect);
        Ok(())
    }

    /// Ids of stored rectangles containing `p`, ascending. Points off the grid yield nothing.
    pub fn stab(&self, p: Point<C>) -> Vec<RectId> {
        let (Some(sx), Some(sy)) = (self.map.slab_of(Axis::X, p.x), self.map.slab_of(Axis::Y, p.y))
        else {
            return Vec::new();
        };
        let cell = DyadicAddress::new(self.levels.x, sx, self.levels.y, sy);
        let mut ids: Vec<RectId> = cell
            .ancestors(true)
            .iter()
            .filter_map(|a| self.nodes.get(&pack(a)))
            .flat_map(|rec| rec.here().iter().map(|&s| self.rects[s as usize].id))
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Ids of stored rectangles overlapping `q` with positive area, ascending.
    ///
    /// For every canonical piece of `q` this reports
    /// 1. `stored_here` of each ancestor-or-self,
    /// 2. `stored_in_descendants` of the piece,
    /// 3. `stored_in_x_descendants` of each strict y-ancestor,
    /// 4. `stored_in_y_descendants` of each strict x-ancestor.
    ///
    /// Pieces share ancestors, so the nodes are enumerated once from the per-axis ancestor
    /// closures instead of piece by piece; the id of `q` itself plays no role. Duplicates (a
    /// rectangle met through several pieces) are removed.
    ///
    /// An empty tree has no endpoints and answers every query with nothing.
    pub fn intersect_query(&self, q: &Rect<C>) -> Result<Vec<RectId>> {
        if self.rects.is_empty() {
            q.validate()?;
            return Ok(Vec::new());
        }
        let (cx, cy) = self.covers(q)?;
        let ax = ancestor_closure(&cx);
        let ay = ancestor_closure(&cy);

        let mut hits: Vec<u32> = Vec::new();
        for &(x, x_cover) in &ax {
            for &(y, y_cover) in &ay {
                let Some(rec) = self.nodes.get(&pack(&DyadicAddress::from_nodes(x, y))) else {
                    continue;
                };
                hits.extend_from_slice(rec.here());
                match (x_cover, y_cover) {
                    (true, true) => hits.extend_from_slice(rec.descendants()),
                    // strict y-ancestor of a piece
                    (true, false) => hits.extend_from_slice(rec.x_descendants()),
                    (false, true) => hits.extend_from_slice(rec.y_descendants()),
                    (false, false) => {}
                }
            }
        }
        hits.sort_unstable();
        hits.dedup();
        let mut ids = self.ids(&hits);
        ids.sort_unstable();
        Ok(ids)
    }

    /// Query with endpoints widened outward to registered ones.
    ///
    /// Returns the effective query (or `None` when `q` misses the grid) and the ids that overlap
    /// the original `q`.
    pub fn intersect_query_snapped(&self, q: &Rect<C>) -> Result<(Option<Rect<C>>, Vec<RectId>)> {
        q.validate()?;
        let sx = self.map.snap_outward(Axis::X, q.min_x, q.max_x);
        let sy = self.map.snap_outward(Axis::Y, q.min_y, q.max_y);
        let (Some((min_x, max_x)), Some((min_y, max_y))) = (sx, sy) else {
            return Ok((None, Vec::new()));
        };
        let effective = Rect { id: q.id, min_x, min_y, max_x, max_y };
        let mut ids = self.intersect_query(&effective)?;
        ids.retain(|&id| crate::geometry::rects_overlap(self.rect(id).expect("reported id is stored"), q));
        Ok((Some(effective), ids))
    }

    pub fn stats(&self) -> TreeStats {
        let mut units: Vec<UnitStats> = (0..=self.levels.x)
            .flat_map(|a| (0..=self.levels.y).map(move |b| UnitStats { a, b, nodes: 0, stored: 0 }))
            .collect();
        let width = self.levels.y as usize + 1;
        for (&key, rec) in &self.nodes {
            let addr = unpack(key);
            let u = &mut units[addr.x.level as usize * width + addr.y.level as usize];
            u.nodes += 1;
            u.stored += rec.here().len();
        }
        TreeStats {
            rects: self.rects.len(),
            nodes: self.nodes.len(),
            lx: self.levels.x,
            ly: self.levels.y,
            units,
            max_ancestors: self.max_ancestors,
            max_unit_ancestors: self.max_unit_ancestors,
            max_pieces: self.max_pieces,
        }
    }

    /// Materialized nodes in the square units `(l, l)`, ordered by level then position.
    ///
    /// These form a quadtree: the quad parent of `(l, i, l, j)` is its x-parent's y-parent.
    pub fn quadtree_view(&self) -> Vec<DyadicAddress> {
        let mut out: Vec<DyadicAddress> = self.addresses().filter(|a| a.x.level == a.y.level).collect();
        out.sort_unstable_by_key(|a| (a.x.level, a.x.index, a.y.index));
        out
    }

    /// Structural consistency of the node store. Returns one message per violation.
    pub fn verify_records(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (&key, rec) in &self.nodes {
            let addr = unpack(key);
            if !self.levels.contains(&addr) {
                problems.push(format!("node {addr} lies outside the universe"));
            }
            if rec.is_empty() {
                problems.push(format!("node {addr} is materialized but empty"));
            }
            let mut seen = HashSet::new();
            for list in [rec.here(), rec.descendants()] {
                for &e in list {
                    if e as usize >= self.rects.len() {
                        problems.push(format!("node {addr} mentions unknown entry {e}"));
                    } else if !seen.insert(e) {
                        problems.push(format!("node {addr} lists id {} twice", self.rects[e as usize].id));
                    }
                }
            }
        }
        problems
    }

    /// Fault-injection hook: silently removes `id` from every `stored_here` list, leaving the
    /// ancestor lists untouched.
    #[doc(hidden)]
    pub fn corrupt_forget_pieces(&mut self, id: RectId) -> bool {
        let Some(&entry) = self.slots.get(&id) else {
            return false;
        };
        let mut hit = false;
        for rec in self.nodes.values_mut() {
            hit |= rec.remove_here(entry);
        }
        hit
    }
}
