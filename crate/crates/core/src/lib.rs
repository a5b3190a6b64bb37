//! Gossip dual averaging for pairwise objectives.
//!
//! Each node of a communication graph holds one data point. Nodes minimize
//! `R_n(theta) = (1/n^2) sum_{i,j} f(theta; x_i, x_j) + psi(theta)` by
//! averaging dual accumulators with a neighbour and swapping auxiliary data
//! points, so every node eventually sees every other node's data.

pub mod analysis;
pub mod centralized;
pub mod data;
pub mod error;
pub mod experiment;
pub mod gossip;
pub mod graph;
pub mod loss;
pub mod param;
pub mod problem;
pub mod regularizer;
pub mod rng;
pub mod schedule;
pub mod trace;

pub use error::{Error, Result};
pub use graph::{Graph, Topology};
pub use loss::{DataPoint, Dataset, PairwiseLoss};
pub use param::{Parameter, Shape};
pub use problem::{Problem, Reference};
pub use regularizer::Regularizer;
pub use schedule::StepSchedule;
pub use trace::{Trace, TraceRecord};
