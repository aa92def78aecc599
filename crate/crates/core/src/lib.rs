//! Exact toolkit for closed-relation dynamical systems `(X, G)`.
//!
//! Three engines share one classifier vocabulary:
//!
//! * [`relation::FiniteSystem`], a finite discrete space,
//! * [`segment::SegRelation`], finite unions of rational segments in `[0,1]²`,
//! * [`seqspace::SeqSpace`], finitely many points plus convergent sequences.
//!
//! All arithmetic is exact.

pub mod binstream;
pub mod classify;
pub mod corpus;
pub mod doc;
pub mod engine;
pub mod error;
pub mod relation;
pub mod report;
pub mod segment;
pub mod seqspace;
pub mod suite;
pub mod tree;
pub mod verdict;

pub use error::Error;
pub use relation::{FiniteSystem, PointId, PointSet};
pub use verdict::{Verdict, Witness};
