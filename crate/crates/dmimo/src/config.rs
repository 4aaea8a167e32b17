//! Sweep configuration.
//!
//! Files are flat `key = value` text, one entry per line, `#` starting a
//! comment. Grid keys take comma-separated lists whose items are numbers,
//! fractions (`1/20`) or inclusive ranges `start:stop:step`:
//!
//! ```text
//! # phase sweep
//! snr_db    = 0:40:5
//! phase_std = 3.6, 18, 36, 45, 90
//! trials    = 10000
//! ```
//!
//! Keys may also be spelled with dashes (`phase-std`). Later assignments win,
//! so a preset is refined by a file, which is refined by command-line flags.

use std::fmt;

use dmimo_core::capacity::IsiModel;
use dmimo_core::impairments::InterpolationWeights;
use dmimo_core::precoding::CombinerSource;
use dmimo_core::simulation::PointParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("malformed line (expected `key = value`): {0}")]
    Syntax(String),
    #[error("invalid value `{value}` for `{key}`: expected {expected}")]
    InvalidValue {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("`{key}` out of range: {constraint} (got {value})")]
    Range {
        key: &'static str,
        constraint: &'static str,
        value: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("unknown preset `{0}` (see `dmimo presets`)")]
    UnknownPreset(String),
    #[error("{origin}:{line}: {source}")]
    AtLine {
        origin: String,
        line: usize,
        #[source]
        source: Box<ConfigError>,
    },
}

/// Enum values spelled as lowercase keywords in files and JSON.
pub trait Keyword: Copy + PartialEq + 'static {
    const VARIANTS: &'static [(&'static str, Self)];
    const EXPECTED: &'static str;

    fn keyword(self) -> &'static str {
        Self::VARIANTS
            .iter()
            .find(|(_, v)| *v == self)
            .map(|(k, _)| *k)
            .unwrap()
    }

    fn from_keyword(s: &str) -> Option<Self> {
        Self::VARIANTS.iter().find(|(k, _)| *k == s).map(|(_, v)| *v)
    }
}

impl Keyword for InterpolationWeights {
    const VARIANTS: &'static [(&'static str, Self)] = &[("magnitude", Self::Magnitude), ("signed", Self::Signed)];
    const EXPECTED: &'static str = "`magnitude` or `signed`";
}

impl Keyword for CombinerSource {
    const VARIANTS: &'static [(&'static str, Self)] = &[("current", Self::Current), ("delayed", Self::Delayed)];
    const EXPECTED: &'static str = "`current` or `delayed`";
}

impl Keyword for IsiModel {
    const VARIANTS: &'static [(&'static str, Self)] =
        &[("independent", Self::Independent), ("coherent", Self::Coherent)];
    const EXPECTED: &'static str = "`independent` or `coherent`";
}

mod keyword_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Keyword;

    pub fn serialize<T: Keyword, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(v.keyword())
    }

    pub fn deserialize<'de, T: Keyword, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        T::from_keyword(&s).ok_or_else(|| D::Error::custom(format!("expected {}, got `{s}`", T::EXPECTED)))
    }
}

/// A full sweep: grids over SNR and impairment parameters plus the model
/// variant, trial count and master seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Label used for default output file names.
    pub name: String,
    pub n_transmitters: usize,
    pub n_t: usize,
    pub n_r: usize,
    pub snr_db: Vec<f64>,
    pub phase_std_deg: Vec<f64>,
    pub time_std: Vec<f64>,
    pub tau_ms: Vec<f64>,
    pub doppler_hz: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub pin_reference: bool,
    #[serde(with = "keyword_serde")]
    pub interpolation: InterpolationWeights,
    #[serde(with = "keyword_serde")]
    pub combiner: CombinerSource,
    #[serde(with = "keyword_serde")]
    pub isi_model: IsiModel,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            name: "run".into(),
            n_transmitters: 5,
            n_t: 2,
            n_r: 2,
            snr_db: vec![15.0, 25.0],
            phase_std_deg: vec![0.0],
            time_std: vec![0.0],
            tau_ms: vec![0.0],
            doppler_hz: vec![5.0],
            trials: 10_000,
            seed: 1,
            pin_reference: false,
            interpolation: InterpolationWeights::Magnitude,
            combiner: CombinerSource::Current,
            isi_model: IsiModel::Independent,
        }
    }
}

/// Every key accepted by [`SweepConfig::set`].
pub const KEYS: &[&str] = &[
    "name",
    "n_transmitters",
    "n_t",
    "n_r",
    "snr_db",
    "phase_std",
    "time_std",
    "tau_ms",
    "f_d",
    "trials",
    "seed",
    "pin_reference",
    "interpolation",
    "combiner",
    "isi_model",
];

fn invalid(key: &str, value: &str, expected: &'static str) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.into(),
        value: value.into(),
        expected,
    }
}

fn parse_number(key: &str, item: &str) -> Result<f64, ConfigError> {
    let item = item.trim();
    let parsed = match item.split_once('/') {
        Some((num, den)) => match (num.trim().parse::<f64>(), den.trim().parse::<f64>()) {
            (Ok(n), Ok(d)) if d != 0.0 => Some(n / d),
            _ => None,
        },
        None => item.parse::<f64>().ok(),
    };
    parsed
        .filter(|v| v.is_finite())
        .ok_or_else(|| invalid(key, item, "a finite number or fraction"))
}

/// Comma-separated numbers, fractions and inclusive `start:stop:step` ranges.
fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_number(key, single)?),
            [start, stop, step] => {
                let (start, stop, step) = (
                    parse_number(key, start)?,
                    parse_number(key, stop)?,
                    parse_number(key, step)?,
                );
                if step <= 0.0 || stop < start {
                    return Err(invalid(
                        key,
                        item,
                        "a range `start:stop:step` with step > 0 and stop >= start",
                    ));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| start + i as f64 * step));
            }
            _ => return Err(invalid(key, item, "a number or `start:stop:step`")),
        }
    }
    Ok(out)
}

fn parse_count(key: &str, value: &str) -> Result<u64, ConfigError> {
    value
        .trim()
        .parse::<u64>()
        .map_err(|_| invalid(key, value, "a nonnegative integer"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(invalid(key, value, "`true` or `false`")),
    }
}

fn parse_keyword<T: Keyword>(key: &str, value: &str) -> Result<T, ConfigError> {
    T::from_keyword(value.trim()).ok_or_else(|| invalid(key, value, T::EXPECTED))
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl SweepConfig {
    /// Assigns one key. Values are range-checked immediately.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let key = normalize_key(key);
        let value = value.trim();
        match key.as_str() {
            "name" => self.name = value.to_string(),
            "n_transmitters" => self.n_transmitters = parse_count(&key, value)? as usize,
            "n_t" => self.n_t = parse_count(&key, value)? as usize,
            "n_r" => self.n_r = parse_count(&key, value)? as usize,
            "snr_db" => self.snr_db = parse_list(&key, value)?,
            "phase_std" => self.phase_std_deg = parse_list(&key, value)?,
            "time_std" => self.time_std = parse_list(&key, value)?,
            "tau_ms" => self.tau_ms = parse_list(&key, value)?,
            "f_d" => self.doppler_hz = parse_list(&key, value)?,
            "trials" => self.trials = parse_count(&key, value)?,
            "seed" => self.seed = parse_count(&key, value)?,
            "pin_reference" => self.pin_reference = parse_bool(&key, value)?,
            "interpolation" => self.interpolation = parse_keyword(&key, value)?,
            "combiner" => self.combiner = parse_keyword(&key, value)?,
            "isi_model" => self.isi_model = parse_keyword(&key, value)?,
            _ => return Err(ConfigError::UnknownKey(key)),
        }
        self.validate()
    }

    /// Applies every `key = value` line of `text`; `origin` labels errors.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at_line = |source| ConfigError::AtLine {
                origin: origin.to_string(),
                line: idx + 1,
                source: Box::new(source),
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at_line(ConfigError::Syntax(raw.trim().to_string())))?;
            self.set(key, value).map_err(at_line)?;
        }
        Ok(())
    }

    /// Applies `key=value` overrides in order.
    pub fn apply_overrides<'a>(&mut self, pairs: impl IntoIterator<Item = &'a str>) -> Result<(), ConfigError> {
        for pair in pairs {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax(pair.to_string()))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        fn range(key: &'static str, constraint: &'static str, value: impl fmt::Display) -> ConfigError {
            ConfigError::Range {
                key,
                constraint,
                value: value.to_string(),
            }
        }
        for (key, v) in [
            ("n_transmitters", self.n_transmitters),
            ("n_t", self.n_t),
            ("n_r", self.n_r),
        ] {
            if v == 0 {
                return Err(range(key, "must be >= 1", v));
            }
        }
        if self.trials == 0 {
            return Err(range("trials", "must be >= 1", self.trials));
        }
        let grids: [(&'static str, &[f64], bool); 5] = [
            ("snr_db", &self.snr_db, false),
            ("phase_std", &self.phase_std_deg, true),
            ("time_std", &self.time_std, true),
            ("tau_ms", &self.tau_ms, true),
            ("f_d", &self.doppler_hz, true),
        ];
        for (key, grid, nonnegative) in grids {
            if grid.is_empty() {
                return Err(range(key, "grid must not be empty", "[]"));
            }
            if let Some(bad) = grid.iter().find(|v| !v.is_finite() || (nonnegative && **v < 0.0)) {
                return Err(range(
                    key,
                    if nonnegative {
                        "must be finite and >= 0"
                    } else {
                        "must be finite"
                    },
                    bad,
                ));
            }
        }
        Ok(())
    }

    /// Grid points in output order: `snr_db` outermost, then phase std,
    /// time std, delay and Doppler innermost.
    pub fn points(&self) -> Vec<PointParams> {
        let mut out = Vec::new();
        for &snr_db in &self.snr_db {
            for &phase_std_deg in &self.phase_std_deg {
                for &time_std in &self.time_std {
                    for &tau_ms in &self.tau_ms {
                        for &doppler_hz in &self.doppler_hz {
                            out.push(PointParams {
                                n_transmitters: self.n_transmitters,
                                n_t: self.n_t,
                                n_r: self.n_r,
                                snr_db,
                                phase_std_deg,
                                time_std,
                                tau_ms,
                                doppler_hz,
                                pin_reference: self.pin_reference,
                                interpolation: self.interpolation,
                                combiner: self.combiner,
                                isi_model: self.isi_model,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}
