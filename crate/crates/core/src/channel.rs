//! Aggregate Rayleigh channel and its evolution over the CSI feedback delay.
//!
//! The per-transmitter blocks `H_i` (each `Nr x Nt`) are iid, so the stacked
//! `Nr x N*Nt` matrix is drawn in one go. Channel aging follows the AR(1)
//! model `H(t) = rho H(t - tau) + E(t)` with `E` iid `CN(0, 1 - rho^2)` and
//! `rho = J0(2 pi f_d tau)`.

use core::f64::consts::PI;

use rand::Rng;

use crate::numerics::{bessel_j0, sample_complex_gaussian, ComplexMatrix};
use crate::{Error, Result};

/// Maximum Doppler shift and feedback delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerSpec {
    doppler_hz: f64,
    delay_s: f64,
}

impl DopplerSpec {
    pub fn new(doppler_hz: f64, delay_s: f64) -> Result<Self> {
        if !(doppler_hz.is_finite() && doppler_hz >= 0.0) {
            return Err(Error::Domain("Doppler shift must be finite and >= 0"));
        }
        if !(delay_s.is_finite() && delay_s >= 0.0) {
            return Err(Error::Domain("feedback delay must be finite and >= 0"));
        }
        Ok(Self { doppler_hz, delay_s })
    }

    /// Delay given in milliseconds.
    pub fn from_millis(doppler_hz: f64, delay_ms: f64) -> Result<Self> {
        Self::new(doppler_hz, delay_ms * 1e-3)
    }

    pub fn doppler_hz(&self) -> f64 {
        self.doppler_hz
    }

    pub fn delay_s(&self) -> f64 {
        self.delay_s
    }
}

/// Jakes temporal correlation `J0(2 pi f_d tau)`.
pub fn jakes_correlation(spec: &DopplerSpec) -> Result<f64> {
    if spec.delay_s == 0.0 || spec.doppler_hz == 0.0 {
        return Ok(1.0);
    }
    bessel_j0(2.0 * PI * spec.doppler_hz * spec.delay_s)
}

/// `n_r x n_cols` matrix of iid `CN(0, 1)` entries, drawn row by row.
pub fn draw_channel<R: Rng + ?Sized>(rng: &mut R, n_r: usize, n_cols: usize) -> Result<ComplexMatrix> {
    if n_r == 0 || n_cols == 0 {
        return Err(Error::Domain("channel dimensions must be >= 1"));
    }
    let mut h = ComplexMatrix::zeros(n_r, n_cols);
    for i in 0..n_r {
        for j in 0..n_cols {
            h[(i, j)] = sample_complex_gaussian(rng, 1.0)?;
        }
    }
    Ok(h)
}

/// Channel seen at precoding time and at transmission time.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    /// `H(t - tau)`, used to design the precoder.
    pub delayed: ComplexMatrix,
    /// `H(t)`, the channel the signal actually goes through.
    pub current: ComplexMatrix,
    pub rho: f64,
}

/// Ages `h_delayed` by one AR(1) step with correlation `rho`.
///
/// The innovation is always drawn (zero-variance when `|rho| = 1`), so the
/// generator advances identically for every `rho`.
pub fn evolve_channel<R: Rng + ?Sized>(h_delayed: ComplexMatrix, rho: f64, rng: &mut R) -> Result<ChannelPair> {
    if !(rho.is_finite() && rho.abs() <= 1.0) {
        return Err(Error::Domain("channel correlation must satisfy |rho| <= 1"));
    }
    let innovation_var = (1.0 - rho * rho).max(0.0);
    let (rows, cols) = h_delayed.shape();
    let mut current = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let e = sample_complex_gaussian(rng, innovation_var)?;
            current[(i, j)] = h_delayed[(i, j)] * rho + e;
        }
    }
    Ok(ChannelPair {
        delayed: h_delayed,
        current,
        rho,
    })
}
