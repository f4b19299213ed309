//! Power-aware cognitive radar for joint multi-target detection and tracking
//! with a massive-MIMO array.
//!
//! Each target owns an independent POMCP search tree and an unweighted
//! particle-filter belief. At every step the per-target planners pick one
//! angle bin each, a transmit waveform distributes the power budget over those
//! bins (orthogonal, uniform, or the power-aware max-min design weighted by
//! predicted range), and a Wald-type detector turns the returns into
//! observations that refine the beliefs.
//!
//! Module map:
//!
//! - [`scenario`]: target kinematics, radar-equation amplitudes, experiment configuration
//! - [`array`]: angle-bin grid, ULA steering vectors, virtual-array vector
//! - [`waveform`]: orthogonal / uniform / power-aware transmit designs
//! - [`detection`]: Wald statistic, threshold, observation discretization, Marcum-Q oracle
//! - [`planner`]: generator, POMCP tree search, particle belief
//! - [`engine`]: closed-loop episodes, Monte Carlo harness, CSV output
//! - [`cli`]: run / validate front end used by the `cogradar` binary
//!
//! The runnable programs under `examples/` walk through each capability.

pub mod array;
pub mod cli;
pub mod detection;
pub mod engine;
pub mod error;
pub mod planner;
pub mod rng;
pub mod scenario;
pub mod waveform;

pub use error::{Error, Result};

pub use num_complex::Complex64;
