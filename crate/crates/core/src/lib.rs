//! Computational geometry of ℝ-trees and free-group boundary dynamics.
//!
//! * [`tree`]: finite metric trees, metric tables, the four-point check,
//!   centers, segments and reconstruction of tree metrics.
//! * [`observers`]: directions, the observers' topology and inferior limits
//!   over finite trees and lazy infinite oracles.
//! * [`boundary`]: reduced words, boundary points of the free group and
//!   finite lamination samples.
//! * [`qmap`]: the map `Q` for computable actions, small translation lengths
//!   and dual lamination samples.
//! * [`blend`]: convex combinations of compatible tree metrics and
//!   translation-length functions.

pub mod blend;
pub mod boundary;
pub mod error;
pub mod gen;
pub mod num;
pub mod observers;
pub mod qmap;
pub mod tree;

pub use error::{BlendError, ObserverError, QmapError, TreeError, WordError};
pub use num::{Dist, Quadratic, Rational, Scalar};
pub use tree::{check_hyperbolic, reconstruct_tree, HyperbolicityVerdict, Location, MetricTable, MetricTree, Witness};
