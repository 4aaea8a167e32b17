//! SVD precoding of the aggregate channel.
//!
//! The joint precoder is built from the first `Ns` right singular vectors of
//! the channel known at precoding time, scaled by `1/sqrt(Ns)` so that the
//! total transmit power is one with unit-power symbols. Streams get equal
//! power; there is no waterfilling. SNR is `1 / noise_var`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numerics::{thin_svd, ComplexMatrix};
use crate::{Error, Result};

/// Which channel estimate the receive combiner `U` is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CombinerSource {
    /// Left singular vectors of `H(t)`.
    #[default]
    Current,
    /// Left singular vectors of `H(t - tau)`, i.e. the same stale estimate the
    /// precoder uses.
    Delayed,
}

/// `Ns = min(N * Nt, Nr)`.
pub fn n_streams(n_tx_antennas: usize, n_r: usize) -> usize {
    n_tx_antennas.min(n_r)
}

fn check_streams(h: &ComplexMatrix, n_streams: usize) -> Result<()> {
    if n_streams == 0 || n_streams > h.rows().min(h.cols()) {
        return Err(Error::Domain(
            "stream count must be in 1..=min(rows, cols) of the channel",
        ));
    }
    Ok(())
}

fn warn_zero_gain(singular_values: &[f64], n_streams: usize) {
    if singular_values[..n_streams].contains(&0.0) {
        log::warn!("channel is rank deficient: at least one of {n_streams} streams has zero gain");
    }
}

/// `F = V[:, ..Ns] / sqrt(Ns)`.
///
/// Streams with zero singular value are kept (with a warning) so the stream
/// count stays fixed.
pub fn build_precoder(h_for_precoding: &ComplexMatrix, n_streams: usize) -> Result<ComplexMatrix> {
    check_streams(h_for_precoding, n_streams)?;
    let svd = thin_svd(h_for_precoding)?;
    warn_zero_gain(&svd.singular_values, n_streams);
    let scale = Complex64::new(1.0 / libm::sqrt(n_streams as f64), 0.0);
    Ok(svd.v.columns(0, n_streams).scale(scale))
}

/// `U[:, ..Ns]` and the leading `Ns` singular values of `h`.
pub fn build_combiner(h: &ComplexMatrix, n_streams: usize) -> Result<(ComplexMatrix, Vec<f64>)> {
    check_streams(h, n_streams)?;
    let svd = thin_svd(h)?;
    warn_zero_gain(&svd.singular_values, n_streams);
    Ok((svd.u.columns(0, n_streams), svd.singular_values[..n_streams].to_vec()))
}

/// Precoder, combiner and current-channel gains for one transmission.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecodingSet {
    pub combiner_u: ComplexMatrix,
    pub precoder_f: ComplexMatrix,
    /// Leading singular values of `H(t)`, the ideal-CSI stream gains.
    pub singular_values_current: Vec<f64>,
    pub n_streams: usize,
}

impl PrecodingSet {
    /// Precoder from `h_delayed`, combiner per `source`, gains from `h_current`.
    pub fn build(h_delayed: &ComplexMatrix, h_current: &ComplexMatrix, source: CombinerSource) -> Result<Self> {
        if h_delayed.shape() != h_current.shape() {
            return Err(Error::DimensionMismatch {
                op: "PrecodingSet::build",
                expected: h_current.shape(),
                actual: h_delayed.shape(),
            });
        }
        let ns = n_streams(h_current.cols(), h_current.rows());
        let precoder_f = build_precoder(h_delayed, ns)?;
        let (current_u, singular_values_current) = build_combiner(h_current, ns)?;
        let combiner_u = match source {
            CombinerSource::Current => current_u,
            CombinerSource::Delayed => build_combiner(h_delayed, ns)?.0,
        };
        Ok(Self {
            combiner_u,
            precoder_f,
            singular_values_current,
            n_streams: ns,
        })
    }
}

/// `sum_s log2(1 + sigma_s^2 / (Ns noise_var))` with `Ns = singular_values.len()`.
pub fn ideal_spectral_efficiency(singular_values: &[f64], noise_var: f64) -> Result<f64> {
    if !noise_var.is_finite() || noise_var <= 0.0 {
        return Err(Error::Domain("noise variance must be finite and > 0"));
    }
    let ns = singular_values.len() as f64;
    Ok(singular_values
        .iter()
        .map(|s| libm::log2(1.0 + s * s / (ns * noise_var)))
        .sum())
}
