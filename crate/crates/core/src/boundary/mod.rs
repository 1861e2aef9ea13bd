//! Reduced words of the free group, its boundary, and lamination samples.
//!
//! Boundary points are infinite reduced words accessed through prefixes.
//! Eventually periodic points have an exact canonical form; points given by
//! a generator are identified by a fixed-length prefix.

mod lamination;
mod point;
mod word;

pub use lamination::{audit, flip, parse_pairs, saturate, AuditReport, BoundaryPair, LaminationSample, SampleEntry};
pub use point::{act, common_prefix, BoundaryPoint, PointKey, STREAM_KEY_DEPTH};
pub use word::{cyclically_reduced_words, parse_symbols, reduce, reduced_words, Basis, Letter, ReducedWord};
