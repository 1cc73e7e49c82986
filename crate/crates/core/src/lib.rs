//! Exact-arithmetic tools for F-avoiding orientations of graphs: given a
//! finite set `F(v)` of forbidden out-degrees (or imbalances) at each
//! vertex, construct and certify orientations with `deg+(v)` outside
//! `F(v)` everywhere.
//!
//! The crate provides:
//! - certificate constructions with guaranteed per-vertex slack
//!   ([`constructors`]): a `floor(deg/3) - 1` bound, a
//!   `floor(2 deg+ / 3) - 1` bound relative to a given orientation, and a
//!   randomized `(sqrt(2) - 1 - o(1)) deg` construction with exact
//!   conservative acceptance;
//! - the fractional rounding engine behind them ([`rounding`]),
//!   exact over the rationals;
//! - permanent-based coefficient identities, Eulerian subgraph counting,
//!   Alon-Tarsi certificates and numbers, and a Z_p-connectivity
//!   certificate ([`algebra`]);
//! - brute-force ground truth for everything above ([`oracle`]).

pub mod algebra;
pub mod constructors;
pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod rounding;

pub use error::{Error, Result};
pub use graph::{
    balanced_orientation, convert_to_imbalance, left_right_degrees, ForbiddenMode, ForbiddenSets,
    Graph, Orientation, Subgraph, VertexOrdering,
};
pub use matrix::{ExactMatrix, Rat};
