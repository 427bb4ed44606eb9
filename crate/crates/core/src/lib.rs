//! Hybrid beamforming for joint radar-communications (JRC) transmitters.
//!
//! The crate synthesizes clustered-multipath MIMO channels for a set of
//! communication users and radar targets, selects which DFT-codebook RF
//! chains serve each operation with a Dinkelbach fractional-programming
//! loop driven only by channel covariances, and scores the result against
//! four reference precoding schemes.
//!
//! Module map:
//!
//! - [`numerics`]: DFT codebook, nullspaces, log-det capacities, covariances.
//! - [`channel`]: scenarios, angle placement, steering vectors, channel draws.
//! - [`metrics`]: mutual-information figures of merit and radar beampatterns.
//! - [`baselines`]: no/with-interference bounds, SVD and beamspace nulling.
//! - [`rfselect`]: the covariance-driven RF-chain selection and its oracle.
//! - [`harness`]: config parsing, seeded Monte-Carlo sweeps, result emission.

pub mod baselines;
pub mod channel;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod numerics;
pub mod rfselect;

pub use error::{Error, Result};
pub use num_complex::Complex64;
