//! Feedback neural memory laboratory.
//!
//! - [`hebbian`]: outer-product training, threshold recall, energy descent
//! - [`generator`]: `T = B + Bᵗ` split and spreading retrieval from a fragment
//! - [`analysis`]: fixed-point enumeration, attractor census, capacity sweeps
//! - [`quantum`]: reorganization counting and Born-rule collapse sampling
//! - [`format`], [`report`], [`cli`]: file formats and the `neuromem` binary
//!
//! Neuron indices are 0-based in the API and 1-based in files, reports and
//! command-line syntax.

pub mod analysis;
pub mod bipolar;
pub mod cli;
pub mod error;
pub mod format;
pub mod fragment;
pub mod generator;
pub mod hebbian;
pub mod proximity;
pub mod quantum;
pub mod report;

pub use bipolar::{sgn, validate_memory_set, Bipolar, BipolarVector, MemorySet};
pub use error::{Error, ErrorKind, Result};
pub use fragment::Fragment;
pub use generator::{GeneratorMatrix, SpreadOrder, SpreadTrace};
pub use hebbian::{InterconnectionMatrix, RecallResult, Schedule};
pub use proximity::ProximityMatrix;
pub use quantum::AmplitudeVector;
