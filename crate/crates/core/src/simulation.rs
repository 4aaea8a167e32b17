//! Per-trial Monte Carlo pipeline, trial statistics and the symbol-level
//! oracle.
//!
//! A trial is a pure function of `(point, master_seed, trial_index)`: its
//! generator is the ChaCha stream `trial_index` under key `master_seed`, and
//! the draw order is fixed (delayed channel, aging innovation, phase offsets,
//! time offsets). Trials of different grid points with the same index share
//! their random stream, so curves across a grid use common random numbers.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::capacity::{effective_matrices, spectral_efficiency, EffectiveMatrices, IsiModel, StreamSinr};
use crate::channel::{draw_channel, evolve_channel, jakes_correlation, ChannelPair, DopplerSpec};
use crate::impairments::{
    draw_offsets, expand_diagonals, ImpairmentDiagonals, ImpairmentDistribution, InterpolationWeights, IsiNeighbor,
    OffsetRealization,
};
use crate::numerics::{sample_complex_gaussian, trial_rng, ComplexMatrix};
use crate::precoding::{ideal_spectral_efficiency, CombinerSource, PrecodingSet};
use crate::{Error, Result};

/// One point of a sweep grid plus the model variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub n_transmitters: usize,
    pub n_t: usize,
    pub n_r: usize,
    pub snr_db: f64,
    pub phase_std_deg: f64,
    pub time_std: f64,
    pub tau_ms: f64,
    pub doppler_hz: f64,
    pub pin_reference: bool,
    pub interpolation: InterpolationWeights,
    pub combiner: CombinerSource,
    pub isi_model: IsiModel,
}

impl Default for PointParams {
    fn default() -> Self {
        Self {
            n_transmitters: 5,
            n_t: 2,
            n_r: 2,
            snr_db: 15.0,
            phase_std_deg: 0.0,
            time_std: 0.0,
            tau_ms: 0.0,
            doppler_hz: 5.0,
            pin_reference: false,
            interpolation: InterpolationWeights::Magnitude,
            combiner: CombinerSource::Current,
            isi_model: IsiModel::Independent,
        }
    }
}

impl PointParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_transmitters == 0 || self.n_t == 0 || self.n_r == 0 {
            return Err(Error::Domain("transmitter and antenna counts must be >= 1"));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::Domain("SNR must be finite"));
        }
        self.distribution()?;
        self.doppler()?;
        Ok(())
    }

    /// Noise variance for unit total transmit power: `10^(-snr_db / 10)`.
    pub fn noise_var(&self) -> f64 {
        libm::pow(10.0, -self.snr_db / 10.0)
    }

    pub fn distribution(&self) -> Result<ImpairmentDistribution> {
        ImpairmentDistribution::new(self.phase_std_deg, self.time_std, self.pin_reference)
    }

    pub fn doppler(&self) -> Result<DopplerSpec> {
        DopplerSpec::from_millis(self.doppler_hz, self.tau_ms)
    }

    pub fn n_tx_antennas(&self) -> usize {
        self.n_transmitters * self.n_t
    }
}

/// Everything drawn and derived for one channel/offset realization.
#[derive(Debug, Clone)]
pub struct Realization {
    pub channels: ChannelPair,
    pub offsets: OffsetRealization,
    pub diagonals: ImpairmentDiagonals,
    pub precoding: PrecodingSet,
    pub effective: EffectiveMatrices,
}

/// Draws a realization from `rng` in the fixed trial order.
pub fn draw_realization<R: Rng + ?Sized>(point: &PointParams, rng: &mut R) -> Result<Realization> {
    point.validate()?;
    let h_delayed = draw_channel(rng, point.n_r, point.n_tx_antennas())?;
    let rho = jakes_correlation(&point.doppler()?)?;
    let channels = evolve_channel(h_delayed, rho, rng)?;
    let offsets = draw_offsets(&point.distribution()?, point.n_transmitters, rng)?;
    let diagonals = expand_diagonals(&offsets, point.n_t, point.interpolation);
    let precoding = PrecodingSet::build(&channels.delayed, &channels.current, point.combiner)?;
    let effective = effective_matrices(
        &channels.current,
        &precoding.combiner_u,
        &precoding.precoder_f,
        &diagonals,
        point.isi_model,
    )?;
    Ok(Realization {
        channels,
        offsets,
        diagonals,
        precoding,
        effective,
    })
}

/// Spectral efficiencies of one trial, bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub impaired: f64,
    pub ideal: f64,
}

pub fn run_trial(point: &PointParams, trial_index: u64, master_seed: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(master_seed, trial_index);
    let r = draw_realization(point, &mut rng)?;
    let noise_var = point.noise_var();
    let (impaired, _) = spectral_efficiency(&r.effective, noise_var)?;
    let ideal = ideal_spectral_efficiency(&r.precoding.singular_values_current, noise_var)?;
    if !(impaired.is_finite() && ideal.is_finite()) {
        return Err(Error::Domain("trial produced a non-finite spectral efficiency"));
    }
    Ok(TrialOutcome { impaired, ideal })
}

/// Fixed-order pairwise summation; the result depends only on the slice
/// contents, never on how the values were produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Mean and standard error (sample std / sqrt(n); zero for a single value).
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    (mean, libm::sqrt(var / n))
}

/// Averages over the trials of one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSummary {
    pub mean_se: f64,
    pub stderr_se: f64,
    pub mean_ideal_se: f64,
    pub stderr_ideal_se: f64,
    /// `100 (mean_ideal - mean) / mean_ideal` over the same trial set.
    pub drop_pct: f64,
    pub trials: u64,
}

/// Summarises outcomes given in trial-index order.
pub fn summarize(outcomes: &[TrialOutcome]) -> Result<PointSummary> {
    if outcomes.is_empty() {
        return Err(Error::Domain("cannot summarize zero trials"));
    }
    let impaired: Vec<f64> = outcomes.iter().map(|o| o.impaired).collect();
    let ideal: Vec<f64> = outcomes.iter().map(|o| o.ideal).collect();
    let (mean_se, stderr_se) = mean_and_stderr(&impaired);
    let (mean_ideal_se, stderr_ideal_se) = mean_and_stderr(&ideal);
    let drop_pct = crate::capacity::capacity_drop(mean_ideal_se, mean_se)?;
    Ok(PointSummary {
        mean_se,
        stderr_se,
        mean_ideal_se,
        stderr_ideal_se,
        drop_pct,
        trials: outcomes.len() as u64,
    })
}

/// Runs trials `0..trials` of one point serially.
pub fn run_point(point: &PointParams, trials: u64, master_seed: u64) -> Result<PointSummary> {
    let outcomes = (0..trials)
        .map(|t| run_trial(point, t, master_seed))
        .collect::<Result<Vec<_>>>()?;
    summarize(&outcomes)
}

/// Analytic versus measured per-stream quantities for one realization.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub analytic: Vec<StreamSinr>,
    pub empirical_sinr: Vec<f64>,
    /// Analytic `Phi`.
    pub phi: ComplexMatrix,
    /// Measured `E[y_s(k) conj(s_s'(k))]`, the empirical counterpart of `Phi`.
    pub empirical_gain: ComplexMatrix,
    pub n_symbols: usize,
}

impl OracleReport {
    /// `|empirical / analytic - 1|` per stream.
    pub fn sinr_relative_errors(&self) -> Vec<f64> {
        self.analytic
            .iter()
            .zip(&self.empirical_sinr)
            .map(|(a, e)| libm::fabs(e / a.sinr() - 1.0))
            .collect()
    }
}

/// Smallest symbol count accepted by [`symbol_level_oracle`].
pub const MIN_ORACLE_SYMBOLS: usize = 10_000;

/// Simulates the received symbol stream of one realization explicitly and
/// measures per-stream SINR.
///
/// The received vector is assembled per transmitter,
/// `y(k) = sum_i e^{j phi_i} H_i F_i (w_sig,i s(k) + w_isi,i s(k'_i)) + n(k)`,
/// with `k'_i = k - 1` or `k + 1` following transmitter `i`'s own offset sign,
/// then combined with `U^H`. Symbols and noise are complex Gaussian.
pub fn symbol_level_oracle<R: Rng + ?Sized>(
    point: &PointParams,
    n_symbols: usize,
    rng: &mut R,
) -> Result<OracleReport> {
    if n_symbols < MIN_ORACLE_SYMBOLS {
        return Err(Error::Domain("symbol-level oracle needs at least 10^4 symbols"));
    }
    let real = draw_realization(point, rng)?;
    let noise_var = point.noise_var();
    let (_, analytic) = spectral_efficiency(&real.effective, noise_var)?;

    let ns = real.precoding.n_streams;
    let n_r = point.n_r;
    let u_h = real.precoding.combiner_u.adjoint();
    // per-transmitter H_i F_i with its offset parameters
    let per_tx: Vec<(ComplexMatrix, Complex64, f64, f64, IsiNeighbor)> = (0..point.n_transmitters)
        .map(|i| {
            let cols = i * point.n_t..(i + 1) * point.n_t;
            let h_i = real.channels.current.columns(cols.start, cols.end);
            let f_i = real.precoding.precoder_f.row_block(cols.start, cols.end);
            let eta = real.offsets.time_offsets()[i];
            let (w_sig, w_isi) = point.interpolation.weights(eta);
            let rot = Complex64::from_polar(1.0, real.offsets.phase_offsets()[i]);
            Ok((h_i.matmul(&f_i)?, rot, w_sig, w_isi, IsiNeighbor::for_offset(eta)))
        })
        .collect::<Result<_>>()?;

    // symbols for k = 0..=n_symbols+1; k = 1..=n_symbols are observed
    let symbols: Vec<Vec<Complex64>> = (0..n_symbols + 2)
        .map(|_| {
            (0..ns)
                .map(|_| sample_complex_gaussian(rng, 1.0))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;

    let mut gain = ComplexMatrix::zeros(ns, ns);
    let mut combined: Vec<Vec<Complex64>> = Vec::with_capacity(n_symbols);
    for k in 1..=n_symbols {
        let mut y: Vec<Complex64> = (0..n_r)
            .map(|_| sample_complex_gaussian(rng, noise_var))
            .collect::<Result<_>>()?;
        for (g, rot, w_sig, w_isi, neighbor) in &per_tx {
            let k_isi = match neighbor {
                IsiNeighbor::Previous => k - 1,
                IsiNeighbor::Next => k + 1,
            };
            let mixed: Vec<Complex64> = symbols[k]
                .iter()
                .zip(&symbols[k_isi])
                .map(|(a, b)| (a * *w_sig + b * *w_isi) * rot)
                .collect();
            for (yi, gi) in y.iter_mut().zip(g.apply(&mixed)?) {
                *yi += gi;
            }
        }
        let y_hat = u_h.apply(&y)?;
        for s in 0..ns {
            for t in 0..ns {
                gain[(s, t)] += y_hat[s] * symbols[k][t].conj();
            }
        }
        combined.push(y_hat);
    }
    let inv_n = 1.0 / n_symbols as f64;
    let gain = gain.scale(Complex64::new(inv_n, 0.0));

    let empirical_sinr = (0..ns)
        .map(|s| {
            let g = gain[(s, s)];
            let residual: f64 = combined
                .iter()
                .enumerate()
                .map(|(idx, y_hat)| (y_hat[s] - g * symbols[idx + 1][s]).norm_sqr())
                .sum::<f64>()
                * inv_n;
            g.norm_sqr() / residual
        })
        .collect();

    Ok(OracleReport {
        analytic,
        empirical_sinr,
        phi: real.effective.phi,
        empirical_gain: gain,
        n_symbols,
    })
}
