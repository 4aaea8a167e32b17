//! Numeric kernels: dense complex matrices, seeded Gaussian sampling, the
//! zeroth-order Bessel function and a thin SVD for small matrices.

mod bessel;
mod matrix;
mod random;
mod svd;

pub use bessel::bessel_j0;
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use random::{sample_complex_gaussian, sample_standard_normal, trial_rng, TrialRng};
pub use svd::{thin_svd, SvdResult};
