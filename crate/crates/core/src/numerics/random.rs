use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Generator owned by a single trial.
pub type TrialRng = ChaCha8Rng;

/// Substream for one trial: ChaCha8 keyed by `master_seed`, stream `trial_index`.
///
/// ChaCha exposes 2^64 non-overlapping streams per key, so every trial gets
/// an independent sequence that does not depend on which worker runs it.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

pub fn sample_standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Draws `x ~ CN(0, variance)`: real and imaginary parts independent with
/// variance `variance / 2` each.
///
/// Two normals are consumed even when `variance == 0`, so the stream position
/// after the call does not depend on the variance.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Result<Complex64> {
    if !variance.is_finite() || variance < 0.0 {
        return Err(Error::Domain("complex Gaussian variance must be finite and >= 0"));
    }
    let re = sample_standard_normal(rng);
    let im = sample_standard_normal(rng);
    if variance == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let scale = libm::sqrt(variance / 2.0);
    Ok(Complex64::new(scale * re, scale * im))
}
