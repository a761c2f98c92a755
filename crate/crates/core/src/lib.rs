//! Exact perfect-matching counting on bipartite graphs.
//!
//! The counting router splits a graph into elementary components, decomposes
//! each along tight cuts into braces, and counts each brace either through a
//! Pfaffian (Kasteleyn) sign pattern or a dynamic program over a perfect
//! matching decomposition, falling back to enumeration when neither applies.

pub mod config;
pub mod error;
mod flow;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod minors;
pub mod permanent;
pub mod pfaffian;
pub mod planarity;
pub mod pmw;
pub mod poly;
pub mod reduction;
pub mod router;
pub mod tightcut;

pub use config::Bounds;
pub use error::{Error, Result};
pub use graph::{BipartiteGraph, Color, EdgeId, PerfectMatching, VertexId, VertexSet};
pub use poly::{EdgeLabeling, IntPolynomial};
pub use router::{count_perfect_matchings, weighted_generating_function, Route, RouterOptions};
