//! Offline routing toolkit.
//!
//! The crate bundles a family of graph solvers built around a shared
//! edge-list graph representation:
//!
//! - [`bottleneck`]: maximum-capacity (widest) paths and multicast trees in
//!   three interchangeable strategies.
//! - [`index`]: a union-by-rank forest that answers maximum-capacity path
//!   queries in logarithmic (or square-root-of-height) time.
//! - [`obnoxious`]: farthest-distance routing away from undesirable
//!   vertices, by reduction to the bottleneck solvers.
//! - [`lex`]: generalized shortest paths over multi-component edge weights
//!   with per-component aggregators and lexicographic comparison.
//! - [`kpacket`]: dynamic programs for monotone k-packet coverage and
//!   ordered request serving.
//! - [`nonlinear`]: pseudo-polynomial optimization of non-decreasing
//!   aggregate costs over typed connections.
//! - [`pareto`]: reachable-state enumeration and non-dominated front
//!   extraction for multi-objective paths.
//! - [`connectivity`]: offline replay of edge/vertex deletions answering
//!   aggregate connectivity queries by reverse processing.

pub mod bottleneck;
pub mod connectivity;
pub mod error;
pub mod graph;
pub mod index;
pub mod kpacket;
pub mod lex;
pub mod nonlinear;
pub mod obnoxious;
pub mod pareto;

pub use error::{Error, Result};
pub use graph::{Graph, VertexId, INF};
