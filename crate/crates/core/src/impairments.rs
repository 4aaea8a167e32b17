//! Residual synchronization offsets.
//!
//! Every transmitter `i` carries an initial carrier phase `phi_i` (the phase
//! left by its residual frequency offset) and a fractional timing offset
//! `eta_i` in sample periods. The stream it emits is the linear interpolation
//! `s(k - eta_i) = w_sig s(k) + w_isi s(k')` with `k'` the neighbouring symbol
//! index, so in the stacked model the received signal splits into
//! `H theta phi F s(k)` plus the ISI term `H psi phi F s(k')`. The diagonals are
//! block-constant because all antennas of a transmitter share one oscillator.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::numerics::sample_standard_normal;
use crate::{Error, Result};

/// Gaussian offset statistics shared by all transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImpairmentDistribution {
    phase_std_deg: f64,
    time_std: f64,
    /// Pin transmitter 0 as the synchronization reference (zero offsets).
    pub pin_reference: bool,
}

impl ImpairmentDistribution {
    pub fn new(phase_std_deg: f64, time_std: f64, pin_reference: bool) -> Result<Self> {
        if !(phase_std_deg.is_finite() && phase_std_deg >= 0.0) {
            return Err(Error::Domain("phase offset std-dev must be finite and >= 0"));
        }
        if !(time_std.is_finite() && time_std >= 0.0) {
            return Err(Error::Domain("time offset std-dev must be finite and >= 0"));
        }
        Ok(Self {
            phase_std_deg,
            time_std,
            pin_reference,
        })
    }

    pub fn phase_std_deg(&self) -> f64 {
        self.phase_std_deg
    }

    pub fn time_std(&self) -> f64 {
        self.time_std
    }
}

/// How the fractional offset splits power between `s(k)` and its neighbour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterpolationWeights {
    /// `(1 - |eta|, |eta|)`: convex weights, interpolation between adjacent samples.
    #[default]
    Magnitude,
    /// `(1 - eta, eta)`: the literal signed form. For `eta < 0` the signal
    /// weight exceeds one (extrapolation).
    Signed,
}

impl InterpolationWeights {
    /// `(signal weight, ISI weight)` for offset `eta`.
    #[inline]
    pub fn weights(self, eta: f64) -> (f64, f64) {
        match self {
            Self::Magnitude => (1.0 - eta.abs(), eta.abs()),
            Self::Signed => (1.0 - eta, eta),
        }
    }
}

/// Which adjacent symbol leaks into `s(k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsiNeighbor {
    /// `s(k - 1)`: the transmitter started late (`eta > 0`).
    Previous,
    /// `s(k + 1)`: the transmitter started early (`eta < 0`).
    Next,
}

impl IsiNeighbor {
    pub fn for_offset(eta: f64) -> Self {
        if eta < 0.0 {
            Self::Next
        } else {
            Self::Previous
        }
    }

    /// `+1` for `s(k - 1)`, `-1` for `s(k + 1)`.
    pub fn direction(self) -> i8 {
        match self {
            Self::Previous => 1,
            Self::Next => -1,
        }
    }
}

/// Per-transmitter phase offsets (radians) and normalized time offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetRealization {
    phase_offsets: Vec<f64>,
    time_offsets: Vec<f64>,
}

impl OffsetRealization {
    pub fn new(phase_offsets: Vec<f64>, time_offsets: Vec<f64>) -> Result<Self> {
        if phase_offsets.len() != time_offsets.len() || phase_offsets.is_empty() {
            return Err(Error::Domain("offset vectors must be nonempty and of equal length"));
        }
        if phase_offsets.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("phase offsets must be finite"));
        }
        if time_offsets.iter().any(|t| t.is_nan() || t.abs() > 1.0) {
            return Err(Error::Domain("time offsets must satisfy |eta| <= 1"));
        }
        Ok(Self {
            phase_offsets,
            time_offsets,
        })
    }

    /// All offsets zero.
    pub fn zero(n_transmitters: usize) -> Self {
        Self {
            phase_offsets: alloc::vec![0.0; n_transmitters],
            time_offsets: alloc::vec![0.0; n_transmitters],
        }
    }

    pub fn n_transmitters(&self) -> usize {
        self.phase_offsets.len()
    }

    pub fn phase_offsets(&self) -> &[f64] {
        &self.phase_offsets
    }

    pub fn time_offsets(&self) -> &[f64] {
        &self.time_offsets
    }
}

/// Draws iid Gaussian offsets for `n_transmitters`: all phases first, then all
/// time offsets, each time offset clamped to `[-1, 1]`. The same number of
/// normals is consumed whatever the distribution parameters are.
pub fn draw_offsets<R: Rng + ?Sized>(
    dist: &ImpairmentDistribution,
    n_transmitters: usize,
    rng: &mut R,
) -> Result<OffsetRealization> {
    if n_transmitters == 0 {
        return Err(Error::Domain("need at least one transmitter"));
    }
    let phase_std = dist.phase_std_deg.to_radians();
    let mut phase_offsets: Vec<f64> = (0..n_transmitters)
        .map(|_| phase_std * sample_standard_normal(rng))
        .collect();
    let mut time_offsets: Vec<f64> = (0..n_transmitters)
        .map(|_| (dist.time_std * sample_standard_normal(rng)).clamp(-1.0, 1.0))
        .collect();
    if dist.pin_reference {
        phase_offsets[0] = 0.0;
        time_offsets[0] = 0.0;
    }
    Ok(OffsetRealization {
        phase_offsets,
        time_offsets,
    })
}

/// Diagonals of the stacked impairment matrices, one entry per transmit antenna.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpairmentDiagonals {
    /// Signal weight of each antenna (`theta`).
    pub theta: Vec<f64>,
    /// `exp(j phi_i)` of each antenna.
    pub phase: Vec<Complex64>,
    /// ISI weight of each antenna (`psi`).
    pub psi: Vec<f64>,
    /// Leaking neighbour, one per transmitter.
    pub isi_neighbor: Vec<IsiNeighbor>,
}

impl ImpairmentDiagonals {
    /// No impairment on `n_transmitters` blocks of `n_t` antennas.
    pub fn identity(n_transmitters: usize, n_t: usize) -> Self {
        expand_diagonals(
            &OffsetRealization::zero(n_transmitters),
            n_t,
            InterpolationWeights::Magnitude,
        )
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    /// Entries of `theta * phi`.
    pub fn signal_diagonal(&self) -> Vec<Complex64> {
        self.theta.iter().zip(&self.phase).map(|(t, p)| p * *t).collect()
    }

    /// Entries of `psi * phi`.
    pub fn isi_diagonal(&self) -> Vec<Complex64> {
        self.psi.iter().zip(&self.phase).map(|(s, p)| p * *s).collect()
    }
}

/// Repeats each transmitter's offsets over its `n_t` antennas.
pub fn expand_diagonals(offsets: &OffsetRealization, n_t: usize, weights: InterpolationWeights) -> ImpairmentDiagonals {
    let n = offsets.n_transmitters();
    let mut diag = ImpairmentDiagonals {
        theta: Vec::with_capacity(n * n_t),
        phase: Vec::with_capacity(n * n_t),
        psi: Vec::with_capacity(n * n_t),
        isi_neighbor: Vec::with_capacity(n),
    };
    for (&phi, &eta) in offsets.phase_offsets.iter().zip(&offsets.time_offsets) {
        let (w_sig, w_isi) = weights.weights(eta);
        let rot = Complex64::from_polar(1.0, phi);
        for _ in 0..n_t {
            diag.theta.push(w_sig);
            diag.phase.push(rot);
            diag.psi.push(w_isi);
        }
        diag.isi_neighbor.push(IsiNeighbor::for_offset(eta));
    }
    diag
}
