//! A two-dimensional unified segment tree.
//!
//! The xy- and yx-segment trees over a set of rectangles are merged into one structure whose nodes
//! are dyadic rectangles in rank space. The tree answers point-stabbing queries and reports every
//! stored rectangle overlapping a query rectangle, touching only the ancestors of the query's
//! canonical pieces.
//!
//! Everything is generic over an integer coordinate type (see [`Coord`]); the aliases at the crate
//! root fix it to `i64`, which is what the command-line tool uses.
//!
//! ```
//! use unified_segtree::{Point, Rect, Tree};
//!
//! let rects = vec![
//!     Rect::new(1, 0, 0, 4, 4).unwrap(),
//!     Rect::new(2, 2, 2, 6, 6).unwrap(),
//! ];
//! let tree = Tree::build(&rects).unwrap();
//! assert_eq!(tree.stab(Point::new(3, 3)), vec![1, 2]);
//! assert_eq!(tree.intersect_query(&rects[0]).unwrap(), vec![1, 2]);
//! ```

pub mod cli;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod random;
pub mod seg1d;
pub mod unified;

pub use error::{Error, Result};
pub use geometry::{
    build_coordinate_map, classify_intersection, rects_overlap, Axis, Coord, IntersectionKind,
    RankInterval, RectId,
};
pub use seg1d::DyadicNode1D;
pub use unified::{DyadicAddress, Levels, NodeRecord, TreeStats, UnifiedSegmentTree, UnitStats};

pub type Rect = geometry::Rect<i64>;
pub type Point = geometry::Point<i64>;
pub type CoordinateMap = geometry::CoordinateMap<i64>;
pub type Tree = UnifiedSegmentTree<i64>;

pub type Rect32 = geometry::Rect<i32>;
pub type Point32 = geometry::Point<i32>;
pub type Tree32 = UnifiedSegmentTree<i32>;
