use dmimo_core::numerics::{bessel_j0, sample_complex_gaussian, thin_svd, trial_rng, Complex64, SvdResult};
use dmimo_core::ComplexMatrix;
use proptest::prelude::*;

/// Truncated power series in plain f64. Only trustworthy for small arguments,
/// where no cancellation occurs.
fn j0_series_f64(x: f64) -> f64 {
    let q = x * x / 4.0;
    let (mut sum, mut term, mut m) = (0.0, 1.0f64, 0.0);
    while term.abs() >= 1e-16 {
        sum += term;
        m += 1.0;
        term *= -q / (m * m);
    }
    sum
}

fn frozen_grid() -> Vec<(f64, f64)> {
    include_str!("data/j0_series_grid.txt")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace().map(|t| t.parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

#[test]
fn j0_matches_high_precision_series_on_grid() {
    let grid = frozen_grid();
    assert_eq!(grid.len(), 2000);
    let worst = grid
        .iter()
        .map(|&(x, want)| (bessel_j0(x).unwrap() - want).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-10, "worst abs error {worst:e}");
}

#[test]
fn j0_matches_f64_series_for_small_arguments() {
    for i in 0..=400 {
        let x = i as f64 * 0.01;
        assert!((bessel_j0(x).unwrap() - j0_series_f64(x)).abs() < 1e-14);
    }
}

#[test]
fn j0_reference_points() {
    // 60-digit series values
    assert!((bessel_j0(0.3141593).unwrap() - 0.975_477_768_700_705_5).abs() < 1e-10);
    assert!((bessel_j0(2.4048256).unwrap() - (-2.196_213_349_876_274e-8)).abs() < 1e-10);
}

fn gaussian_matrix(seed: u64, rows: usize, cols: usize) -> ComplexMatrix {
    let mut rng = trial_rng(seed, 0);
    ComplexMatrix::from_fn(rows, cols, |_, _| sample_complex_gaussian(&mut rng, 1.0).unwrap())
}

/// Singular values of a 2-row matrix from the closed-form eigenvalues of the
/// 2x2 Hermitian Gram matrix `A A^H`.
fn gram_oracle_2xn(a: &ComplexMatrix) -> [f64; 2] {
    assert_eq!(a.rows(), 2);
    let (mut p, mut d) = (0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for j in 0..a.cols() {
        p += a[(0, j)].norm_sqr();
        d += a[(1, j)].norm_sqr();
        b += a[(0, j)] * a[(1, j)].conj();
    }
    let mid = 0.5 * (p + d);
    let rad = (0.25 * (p - d) * (p - d) + b.norm_sqr()).sqrt();
    [(mid + rad).sqrt(), (mid - rad).max(0.0).sqrt()]
}

fn check_invariants(a: &ComplexMatrix, svd: &SvdResult) {
    let r = a.rows().min(a.cols());
    assert_eq!(svd.u.shape(), (a.rows(), r));
    assert_eq!(svd.v.shape(), (a.cols(), r));
    for m in [&svd.u, &svd.v] {
        let g = m.adjoint().matmul(m).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::identity(r)).unwrap() <= 1e-10);
    }
    let err = svd.reconstruct().max_abs_diff(a).unwrap();
    assert!(
        err <= 1e-9 * a.max_abs().max(f64::MIN_POSITIVE),
        "reconstruction {err:e}"
    );
    for w in svd.singular_values.windows(2) {
        assert!(w[0] >= w[1]);
    }
    assert!(svd.singular_values.iter().all(|&s| s >= 0.0));
    for k in 0..r {
        let col = svd.v.column(k);
        let mut best = 0;
        for i in 1..col.len() {
            if col[i].norm() > col[best].norm() {
                best = i;
            }
        }
        assert!(col[best].im == 0.0 && col[best].re >= 0.0);
    }
}

#[test]
fn svd_of_seeded_2x10_matches_gram_oracle() {
    for seed in 0..1000 {
        let a = gaussian_matrix(seed, 2, 10);
        let svd = thin_svd(&a).unwrap();
        check_invariants(&a, &svd);
        let oracle = gram_oracle_2xn(&a);
        for (got, want) in svd.singular_values.iter().zip(oracle) {
            assert!((got - want).abs() < 1e-8, "seed {seed}: {got} vs {want}");
        }
    }
}

#[test]
fn svd_is_deterministic() {
    let a = gaussian_matrix(99, 4, 6);
    assert_eq!(thin_svd(&a).unwrap(), thin_svd(&a).unwrap());
}

proptest! {
    #[test]
    fn svd_invariants_hold(seed in any::<u64>(), rows in 1usize..=8, cols in 1usize..=8, scale in 1e-3f64..1e3) {
        let a = gaussian_matrix(seed, rows, cols).scale(Complex64::new(scale, 0.0));
        let svd = thin_svd(&a).unwrap();
        check_invariants(&a, &svd);
    }

    #[test]
    fn svd_of_low_rank_products(seed in any::<u64>(), rank in 1usize..=3) {
        let a = gaussian_matrix(seed, 5, rank).matmul(&gaussian_matrix(seed ^ 0xabcd, rank, 7)).unwrap();
        let svd = thin_svd(&a).unwrap();
        check_invariants(&a, &svd);
        let tail = svd.singular_values[rank..].iter().cloned().fold(0.0, f64::max);
        prop_assert!(tail < 1e-10 * svd.singular_values[0]);
    }
}
