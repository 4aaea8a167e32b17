//! Effective channel after receive combining and the resulting per-stream
//! SINR and spectral efficiency.
//!
//! With combiner `U`, precoder `F` and impairment diagonals `theta`, `psi`,
//! `phi`, the combined output is `Phi s(k) + Zeta s(k') + U^H n`, where
//! `Phi = U^H H theta phi F` and `Zeta = U^H H psi phi F`. Symbols at `k'` are
//! unit power and independent of `s(k)`, so stream `s` sees
//! signal `|Phi_ss|^2`, inter-layer interference `sum_{s' != s} |Phi_ss'|^2`
//! and ISI `sum_s' |Zeta_ss'|^2`.
//!
//! Transmitters that started late leak `s(k-1)`, early ones leak `s(k+1)`.
//! [`IsiModel::Independent`] keeps one `Zeta` per neighbour so the two
//! independent symbol vectors add in power; [`IsiModel::Coherent`] folds every
//! transmitter into a single `Zeta` as if all leaked the same symbol vector.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::impairments::{ImpairmentDiagonals, IsiNeighbor};
use crate::numerics::ComplexMatrix;
use crate::{Error, Result};

/// How ISI contributions of different transmitters are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IsiModel {
    /// One `Zeta` per neighbouring symbol (`k-1`, `k+1`); their powers add.
    #[default]
    Independent,
    /// A single `Zeta = U^H H psi phi F`, all ISI summed coherently.
    Coherent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveMatrices {
    /// Signal plus inter-layer interference, `Ns x Ns`.
    pub phi: ComplexMatrix,
    /// Inter-symbol interference, one `Ns x Ns` matrix per independent
    /// interfering symbol vector.
    pub zeta: Vec<ComplexMatrix>,
}

impl EffectiveMatrices {
    /// Sum of the ISI matrices, `U^H H psi phi F`.
    pub fn total_zeta(&self) -> ComplexMatrix {
        let ns = self.phi.rows();
        let mut total = ComplexMatrix::zeros(ns, ns);
        for z in &self.zeta {
            for i in 0..ns {
                for j in 0..ns {
                    total[(i, j)] += z[(i, j)];
                }
            }
        }
        total
    }
}

/// Power budget of one stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamSinr {
    pub signal: f64,
    pub inter_layer: f64,
    pub isi: f64,
    pub noise_var: f64,
}

impl StreamSinr {
    pub fn sinr(&self) -> f64 {
        self.signal / (self.inter_layer + self.isi + self.noise_var)
    }

    pub fn spectral_efficiency(&self) -> f64 {
        libm::log2(1.0 + self.sinr())
    }
}

pub fn effective_matrices(
    h_current: &ComplexMatrix,
    combiner_u: &ComplexMatrix,
    precoder_f: &ComplexMatrix,
    diag: &ImpairmentDiagonals,
    isi_model: IsiModel,
) -> Result<EffectiveMatrices> {
    let m = h_current.cols();
    if combiner_u.rows() != h_current.rows() {
        return Err(Error::DimensionMismatch {
            op: "effective_matrices (combiner)",
            expected: (h_current.rows(), combiner_u.cols()),
            actual: combiner_u.shape(),
        });
    }
    if precoder_f.rows() != m || diag.len() != m {
        return Err(Error::DimensionMismatch {
            op: "effective_matrices (precoder/diagonals)",
            expected: (m, precoder_f.cols()),
            actual: (precoder_f.rows(), diag.len()),
        });
    }
    if combiner_u.cols() != precoder_f.cols() {
        return Err(Error::DimensionMismatch {
            op: "effective_matrices (stream count)",
            expected: (combiner_u.cols(), combiner_u.cols()),
            actual: (precoder_f.cols(), precoder_f.cols()),
        });
    }
    let uh_h = combiner_u.adjoint().matmul(h_current)?;
    let phi = uh_h.scale_columns(&diag.signal_diagonal())?.matmul(precoder_f)?;
    let isi = diag.isi_diagonal();
    let zeta = match isi_model {
        IsiModel::Coherent => vec![uh_h.scale_columns(&isi)?.matmul(precoder_f)?],
        IsiModel::Independent => {
            let n_t = m / diag.isi_neighbor.len().max(1);
            [IsiNeighbor::Previous, IsiNeighbor::Next]
                .into_iter()
                .map(|which| {
                    let masked: Vec<Complex64> = isi
                        .iter()
                        .enumerate()
                        .map(|(k, &d)| {
                            if diag.isi_neighbor[k / n_t] == which {
                                d
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                        })
                        .collect();
                    uh_h.scale_columns(&masked)?.matmul(precoder_f)
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(EffectiveMatrices { phi, zeta })
}

/// Sum over streams of `log2(1 + A / (B + C + noise_var))`, with the per-stream
/// breakdown.
pub fn spectral_efficiency(em: &EffectiveMatrices, noise_var: f64) -> Result<(f64, Vec<StreamSinr>)> {
    if !noise_var.is_finite() || noise_var <= 0.0 {
        return Err(Error::Domain("noise variance must be finite and > 0"));
    }
    let ns = em.phi.rows();
    if let Some(bad) = core::iter::once(&em.phi)
        .chain(&em.zeta)
        .find(|m| m.shape() != (ns, ns))
    {
        return Err(Error::DimensionMismatch {
            op: "spectral_efficiency",
            expected: (ns, ns),
            actual: bad.shape(),
        });
    }
    let breakdown: Vec<StreamSinr> = (0..ns)
        .map(|s| {
            let row = em.phi.row(s);
            let signal = row[s].norm_sqr();
            let inter_layer = row
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != s)
                .map(|(_, z)| z.norm_sqr())
                .sum();
            let isi = em.zeta.iter().flat_map(|z| z.row(s)).map(|z| z.norm_sqr()).sum();
            StreamSinr {
                signal,
                inter_layer,
                isi,
                noise_var,
            }
        })
        .collect();
    let total = breakdown.iter().map(StreamSinr::spectral_efficiency).sum();
    Ok((total, breakdown))
}

/// Percentage drop `100 (ideal - impaired) / ideal`.
pub fn capacity_drop(ideal: f64, impaired: f64) -> Result<f64> {
    if !ideal.is_finite() || ideal <= 0.0 {
        return Err(Error::Domain("ideal spectral efficiency must be finite and > 0"));
    }
    if !impaired.is_finite() || impaired < 0.0 {
        return Err(Error::Domain("impaired spectral efficiency must be finite and >= 0"));
    }
    Ok(100.0 * (ideal - impaired) / ideal)
}
