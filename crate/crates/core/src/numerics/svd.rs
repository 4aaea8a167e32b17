use alloc::vec::Vec;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Thin singular value decomposition `A = U diag(sigma) V^H`.
///
/// With `r = min(rows, cols)`: `u` is `rows x r`, `v` is `cols x r`, both with
/// orthonormal columns, and `singular_values` is sorted descending. Each column
/// of `v` is phased so that its largest-modulus entry (lowest index on ties)
/// is real and nonnegative, which makes the factorisation deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdResult {
    /// `U diag(sigma) V^H`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let r = self.singular_values.len();
        ComplexMatrix::from_fn(self.u.rows(), self.v.rows(), |i, j| {
            (0..r)
                .map(|k| self.u[(i, k)] * self.singular_values[k] * self.v[(j, k)].conj())
                .sum()
        })
    }
}

pub fn thin_svd(a: &ComplexMatrix) -> Result<SvdResult> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Domain("thin_svd needs at least one row and one column"));
    }
    if !a.is_finite() {
        return Err(Error::Domain("thin_svd input has non-finite entries"));
    }
    let (u, singular_values, v) = if a.rows() >= a.cols() {
        one_sided_jacobi(a)?
    } else {
        // A^H = U' S V'^H  =>  A = V' S U'^H
        let (u, s, v) = one_sided_jacobi(&a.adjoint())?;
        (v, s, u)
    };
    let mut svd = SvdResult { u, singular_values, v };
    fix_phases(&mut svd);
    Ok(svd)
}

/// Hestenes one-sided Jacobi for `rows >= cols`: orthogonalise the columns of
/// `A V` by plane rotations, accumulating `V`.
fn one_sided_jacobi(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = alloc::vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                let gamma: Complex64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut w, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            kernel: "one-sided Jacobi SVD",
            iterations: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = w.iter().map(|col| libm::sqrt(norm_sqr(col))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal singular values keep column order
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma_max = norms[order[0]];
    let tol = (m.max(n) as f64) * f64::EPSILON * sigma_max;
    let mut u_cols: Vec<Option<Vec<Complex64>>> = Vec::with_capacity(n);
    let mut singular_values = Vec::with_capacity(n);
    for &j in &order {
        let s = norms[j];
        singular_values.push(s);
        if s > tol && s > 0.0 {
            u_cols.push(Some(w[j].iter().map(|x| x / s).collect()));
        } else {
            u_cols.push(None);
        }
    }
    let u_cols = complete_orthonormal(u_cols, m);

    let u = ComplexMatrix::from_fn(m, n, |i, k| u_cols[k][i]);
    let v = ComplexMatrix::from_fn(n, n, |i, k| v[order[k]][i]);
    Ok((u, singular_values, v))
}

/// Rotation acting on columns `p`, `q`: `q` is first rephased by `conj(phase)`
/// so their inner product is real, then a real Givens rotation is applied.
fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    let phase_conj = phase.conj();
    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *xp;
        let b = *xq * phase_conj;
        *xp = a * c - b * s;
        *xq = a * s + b * c;
    }
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Fills the missing columns (numerically zero singular values) with unit
/// vectors orthogonal to every other column, drawn from the standard basis.
fn complete_orthonormal(cols: Vec<Option<Vec<Complex64>>>, m: usize) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = cols.iter().flatten().cloned().collect();
    let mut candidate = 0usize;
    let mut out = Vec::with_capacity(cols.len());
    for col in cols {
        match col {
            Some(c) => out.push(c),
            None => loop {
                assert!(candidate < m, "orthonormal completion ran out of basis vectors");
                let mut e = alloc::vec![Complex64::new(0.0, 0.0); m];
                e[candidate] = Complex64::new(1.0, 0.0);
                candidate += 1;
                // two Gram-Schmidt passes
                for _ in 0..2 {
                    for b in &basis {
                        let proj: Complex64 = b.iter().zip(&e).map(|(x, y)| x.conj() * y).sum();
                        for (ei, bi) in e.iter_mut().zip(b) {
                            *ei -= proj * bi;
                        }
                    }
                }
                let norm = libm::sqrt(norm_sqr(&e));
                if norm > 0.5 {
                    let unit: Vec<Complex64> = e.iter().map(|x| x / norm).collect();
                    basis.push(unit.clone());
                    out.push(unit);
                    break;
                }
            },
        }
    }
    out
}

fn fix_phases(svd: &mut SvdResult) {
    let r = svd.singular_values.len();
    for k in 0..r {
        let mut best = 0;
        let mut best_mag = -1.0;
        for i in 0..svd.v.rows() {
            let mag = svd.v[(i, k)].norm();
            if mag > best_mag {
                best_mag = mag;
                best = i;
            }
        }
        if best_mag <= 0.0 {
            continue;
        }
        let rot = (svd.v[(best, k)] / best_mag).conj();
        for i in 0..svd.v.rows() {
            svd.v[(i, k)] *= rot;
        }
        for i in 0..svd.u.rows() {
            svd.u[(i, k)] *= rot;
        }
        svd.v[(best, k)] = Complex64::new(best_mag, 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_complex_gaussian, trial_rng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn gram_defect(m: &ComplexMatrix) -> f64 {
        let g = m.adjoint().matmul(m).unwrap();
        g.max_abs_diff(&ComplexMatrix::identity(g.rows())).unwrap()
    }

    #[test]
    fn identity() {
        let svd = thin_svd(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(svd.singular_values, [1.0, 1.0]);
        let uvh = svd.u.matmul(&svd.v.adjoint()).unwrap();
        assert!(uvh.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn rank_deficient_diagonal() {
        let a = ComplexMatrix::from_diagonal(&[c(3.0), c(0.0)]);
        let svd = thin_svd(&a).unwrap();
        assert_eq!(svd.singular_values, [3.0, 0.0]);
        assert!(gram_defect(&svd.u) < 1e-15);
        assert!(gram_defect(&svd.v) < 1e-15);
        assert!(svd.reconstruct().max_abs_diff(&a).unwrap() < 1e-15);
    }

    #[test]
    fn zero_matrix() {
        let svd = thin_svd(&ComplexMatrix::zeros(2, 3)).unwrap();
        assert_eq!(svd.singular_values, [0.0, 0.0]);
        assert!(gram_defect(&svd.u) < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(thin_svd(&ComplexMatrix::zeros(0, 3)).is_err());
        let mut a = ComplexMatrix::identity(2);
        a[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(thin_svd(&a).is_err());
    }

    #[test]
    fn wide_and_tall_agree() {
        let mut rng = trial_rng(11, 0);
        let a = ComplexMatrix::from_fn(3, 7, |_, _| sample_complex_gaussian(&mut rng, 1.0).unwrap());
        let wide = thin_svd(&a).unwrap();
        let tall = thin_svd(&a.adjoint()).unwrap();
        for (x, y) in wide.singular_values.iter().zip(&tall.singular_values) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(wide.u.shape(), (3, 3));
        assert_eq!(wide.v.shape(), (7, 3));
        assert!(wide.reconstruct().max_abs_diff(&a).unwrap() < 1e-12);
    }

    #[test]
    fn sign_convention() {
        let mut rng = trial_rng(5, 1);
        let a = ComplexMatrix::from_fn(2, 10, |_, _| sample_complex_gaussian(&mut rng, 1.0).unwrap());
        let svd = thin_svd(&a).unwrap();
        for k in 0..2 {
            let col = svd.v.column(k);
            let (idx, _) = col.iter().enumerate().fold(
                (0, -1.0),
                |(bi, bm), (i, z)| if z.norm() > bm { (i, z.norm()) } else { (bi, bm) },
            );
            assert_eq!(col[idx].im, 0.0);
            assert!(col[idx].re >= 0.0);
        }
        assert_eq!(thin_svd(&a).unwrap(), svd);
    }
}
