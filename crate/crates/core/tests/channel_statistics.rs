//! Monte Carlo checks of the Rayleigh draw and AR(1) aging statistics.

use dmimo_core::channel::{draw_channel, evolve_channel};
use dmimo_core::numerics::{trial_rng, Complex64};

const TRIALS: u64 = 100_000;

#[test]
fn rayleigh_entries_have_unit_variance() {
    let mut power = [0.0f64; 20];
    for t in 0..TRIALS {
        let h = draw_channel(&mut trial_rng(17, t), 2, 10).unwrap();
        for (p, z) in power.iter_mut().zip(h.as_slice()) {
            *p += z.norm_sqr();
        }
    }
    for p in power {
        let var = p / TRIALS as f64;
        assert!((0.98..=1.02).contains(&var), "entry variance {var}");
    }
}

struct LagStats {
    mean: Complex64,
    var: f64,
    corr: Complex64,
}

fn lag_stats(rho: f64, seed: u64) -> LagStats {
    let (mut sum, mut power, mut cross) = (Complex64::new(0.0, 0.0), 0.0, Complex64::new(0.0, 0.0));
    for t in 0..TRIALS {
        let mut rng = trial_rng(seed, t);
        let h = draw_channel(&mut rng, 1, 1).unwrap();
        let pair = evolve_channel(h, rho, &mut rng).unwrap();
        let (cur, del) = (pair.current[(0, 0)], pair.delayed[(0, 0)]);
        sum += cur;
        power += cur.norm_sqr();
        cross += cur.conj() * del;
    }
    let n = TRIALS as f64;
    LagStats {
        mean: sum / n,
        var: power / n,
        corr: cross / n,
    }
}

#[test]
fn aging_preserves_stationarity_and_correlation() {
    for (i, &rho) in [0.0, 0.5, 0.9, 0.99, -0.4].iter().enumerate() {
        let s = lag_stats(rho, 100 + i as u64);
        assert!(s.mean.norm() < 0.01, "rho {rho}: mean {}", s.mean);
        assert!((0.97..=1.03).contains(&s.var), "rho {rho}: var {}", s.var);
        assert!((s.corr.re - rho).abs() < 0.01, "rho {rho}: corr {}", s.corr);
        assert!(s.corr.im.abs() < 0.01);
    }
}
