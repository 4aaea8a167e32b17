//! Named sweeps reproducing the published figures and tables.
//!
//! Every preset selects the calibrated model variant: transmitter 0 is the
//! timing/phase reference, interpolation weights are signed, the receive
//! combiner comes from the delayed channel estimate and ISI is folded into a
//! single coherent term. Grid overrides (`--set`, config files) apply on top.

use dmimo_core::capacity::IsiModel;
use dmimo_core::impairments::InterpolationWeights;
use dmimo_core::precoding::CombinerSource;

use crate::config::{ConfigError, SweepConfig};

/// Preset names with a one-line description, in listing order.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2", "SE vs SNR for phase std {0, 3.6, 18, 36, 45, 90} deg"),
    ("fig3a", "SE vs SNR for time-offset std {0, 1/20, 1/10, 1/5, 1/2}"),
    ("fig3b", "SE vs time-offset std 0..1 at 15 dB"),
    (
        "fig4a",
        "SE vs SNR for feedback delay {0, 5, 10, 15, 20} ms, f_d = 5 Hz",
    ),
    ("fig4b", "SE vs feedback delay 0..20 ms for f_d {5, 10, 20} Hz at 15 dB"),
    (
        "table1",
        "capacity drop for phase std {3.6, 18, 36, 45, 90} deg at 15/25 dB",
    ),
    (
        "table2",
        "capacity drop for time-offset std {1/20, 1/10, 1/5, 1/2} at 15/25 dB",
    ),
    (
        "table3",
        "capacity drop for delay {5, 10, 15, 20} ms, f_d = 5 Hz, at 15/25 dB",
    ),
];

const SNR_AXIS: [f64; 9] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0];
const TABLE_SNR: [f64; 2] = [15.0, 25.0];

fn calibrated(name: &str) -> SweepConfig {
    SweepConfig {
        name: name.to_string(),
        pin_reference: true,
        interpolation: InterpolationWeights::Signed,
        combiner: CombinerSource::Delayed,
        isi_model: IsiModel::Coherent,
        snr_db: TABLE_SNR.to_vec(),
        ..SweepConfig::default()
    }
}

fn steps(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start + i as f64 * step).collect()
}

pub fn preset(name: &str) -> Result<SweepConfig, ConfigError> {
    let mut cfg = calibrated(name);
    match name {
        "fig2" => {
            cfg.snr_db = SNR_AXIS.to_vec();
            cfg.phase_std_deg = vec![0.0, 3.6, 18.0, 36.0, 45.0, 90.0];
        }
        "fig3a" => {
            cfg.snr_db = SNR_AXIS.to_vec();
            cfg.time_std = vec![0.0, 1.0 / 20.0, 1.0 / 10.0, 1.0 / 5.0, 1.0 / 2.0];
        }
        "fig3b" => {
            cfg.snr_db = vec![15.0];
            cfg.time_std = steps(0.0, 0.05, 21);
        }
        "fig4a" => {
            cfg.snr_db = SNR_AXIS.to_vec();
            cfg.tau_ms = vec![0.0, 5.0, 10.0, 15.0, 20.0];
            cfg.doppler_hz = vec![5.0];
        }
        "fig4b" => {
            cfg.snr_db = vec![15.0];
            cfg.tau_ms = steps(0.0, 1.0, 21);
            cfg.doppler_hz = vec![5.0, 10.0, 20.0];
        }
        "table1" => cfg.phase_std_deg = vec![3.6, 18.0, 36.0, 45.0, 90.0],
        "table2" => cfg.time_std = vec![1.0 / 20.0, 1.0 / 10.0, 1.0 / 5.0, 1.0 / 2.0],
        "table3" => {
            cfg.tau_ms = vec![5.0, 10.0, 15.0, 20.0];
            cfg.doppler_hz = vec![5.0];
        }
        _ => return Err(ConfigError::UnknownPreset(name.to_string())),
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_resolves_and_validates() {
        for (name, _) in PRESETS {
            let cfg = preset(name).unwrap();
            cfg.validate().unwrap();
            assert_eq!(cfg.name, *name);
            assert!(cfg.pin_reference);
            assert_eq!(cfg.combiner, CombinerSource::Delayed);
        }
        assert_eq!(preset("fig9"), Err(ConfigError::UnknownPreset("fig9".into())));
    }

    #[test]
    fn table_grids() {
        let t1 = preset("table1").unwrap();
        assert_eq!(t1.points().len(), 10);
        assert!(t1.phase_std_deg.contains(&3.6) && t1.phase_std_deg.contains(&90.0));
        assert_eq!(t1.snr_db, [15.0, 25.0]);

        let t2 = preset("table2").unwrap();
        assert_eq!(t2.time_std, [0.05, 0.1, 0.2, 0.5]);

        let t3 = preset("table3").unwrap();
        assert_eq!(t3.tau_ms, [5.0, 10.0, 15.0, 20.0]);
        assert_eq!(t3.doppler_hz, [5.0]);
        assert_eq!(t3.points().len(), 8);
    }

    #[test]
    fn fig3b_spans_a_full_sample() {
        let cfg = preset("fig3b").unwrap();
        assert_eq!(cfg.snr_db, [15.0]);
        assert_eq!(cfg.time_std.first(), Some(&0.0));
        assert!((cfg.time_std.last().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fig4b_uses_several_dopplers() {
        let cfg = preset("fig4b").unwrap();
        assert_eq!(cfg.doppler_hz, [5.0, 10.0, 20.0]);
        assert_eq!(cfg.points().len(), 21 * 3);
    }
}
