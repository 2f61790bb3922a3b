//! Streaming and multi-pass algorithms for maximizing submodular functions
//! subject to a matroid constraint.

pub mod acceptance;
pub mod continuous_greedy;
pub mod error;
pub mod hardness;
pub mod harness;
pub mod local_search;
pub mod matroid;
pub mod multilinear;
pub mod objective;
pub mod rng;
pub mod rounding;
pub mod single_pass;
pub mod tolerance;
pub mod two_player;

pub use error::{Error, Result};
pub use matroid::{ElementId, GraphicMatroid, Matroid, PartitionMatroid, UniformMatroid};
pub use multilinear::{EstimatorConfig, FractionalPoint, Multilinear};
pub use objective::{ArrivalOrder, CountingOracle, CoverageFunction, CutFunction, SubmodularFn};
