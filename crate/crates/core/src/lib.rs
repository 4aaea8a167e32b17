//! Capacity model for coherent joint transmission in distributed MIMO.
//!
//! A group of `N` independently clocked transmitters, each with `Nt` antennas,
//! jointly precodes a common stream vector towards one `Nr`-antenna receiver.
//! This crate evaluates how residual carrier-phase offsets, fractional timing
//! offsets and stale channel state erode the SVD-precoded spectral efficiency:
//!
//! - [`numerics`]: complex matrices, Gaussian sampling, `J0`, thin SVD.
//! - [`channel`]: iid Rayleigh aggregate channel and AR(1) channel aging.
//! - [`impairments`]: per-transmitter offsets and their diagonal expansions.
//! - [`precoding`]: SVD precoder / receive combiner and the ideal baseline.
//! - [`capacity`]: effective signal and ISI matrices, per-stream SINR.
//! - [`simulation`]: the deterministic per-trial pipeline, trial statistics and
//!   a symbol-level oracle for the analytic SINR decomposition.
//!
//! The crate is `no_std` (it needs `alloc`); sweeps, file formats and the
//! command line live in the `dmimo` crate.
#![no_std]

extern crate alloc;

pub mod capacity;
pub mod channel;
mod error;
pub mod impairments;
pub mod numerics;
pub mod precoding;
pub mod simulation;

pub use error::{Error, Result};
pub use numerics::ComplexMatrix;
