//! Instance files, generators, reference solutions and experiment runners.

pub mod baseline;
pub mod bench;
pub mod generate;
pub mod instance;
pub mod order;
pub mod runner;
