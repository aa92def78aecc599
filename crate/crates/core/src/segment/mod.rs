//! Closed relations on `[0,1]` given by finitely many rational segments.

pub mod region;
pub mod relation;
pub mod verdict;

pub use region::{farey, parse_q, q, sample_rationals, show_q, Interval, Region, Q};
pub use relation::{SegLevels, SegRelation, Segment};
pub use verdict::{seg_point_class, seg_verdict, SegParams, SegQuery};
