//! Result files: CSV rows, the JSON run manifest and an optional plotting
//! script for an external plotter.
//!
//! CSV floats are printed with six decimals; JSON keeps full precision so a
//! manifest parses back to the identical value. Wall-clock time and the
//! timestamp are only recorded on request, so repeated runs with the same
//! configuration produce byte-identical files.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::SweepConfig;
use crate::error::CliError;
use crate::sweep::{PointResult, SweepResult};

pub const CSV_COLUMNS: [&str; 11] = [
    "snr_db",
    "phase_std_deg",
    "time_std",
    "tau_ms",
    "f_d_hz",
    "trials",
    "mean_se",
    "stderr_se",
    "ideal_se",
    "drop_pct",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// Version of the tool that produced the file.
    pub version: String,
    pub timestamp: Option<String>,
    pub wall_clock_s: Option<f64>,
    pub master_seed: u64,
    pub config: SweepConfig,
    pub points: Vec<PointResult>,
}

impl RunManifest {
    /// `stamp` records the current UTC time and the sweep's wall-clock time.
    pub fn new(result: &SweepResult, stamp: bool) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: stamp.then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
            wall_clock_s: stamp.then_some(result.wall_clock_s),
            master_seed: result.config.seed,
            config: result.config.clone(),
            points: result.points.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

fn fixed6(x: f64) -> String {
    // Avoid a "-0.000000" that differs from a neighbouring "0.000000".
    let s = format!("{x:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn to_csv(points: &[PointResult]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS).expect("in-memory write");
    for p in points {
        writer
            .write_record([
                fixed6(p.snr_db),
                fixed6(p.phase_std_deg),
                fixed6(p.time_std),
                fixed6(p.tau_ms),
                fixed6(p.f_d_hz),
                p.trials.to_string(),
                fixed6(p.mean_se),
                fixed6(p.stderr_se),
                fixed6(p.ideal_se),
                fixed6(p.drop_pct),
                p.seed.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn render(result: &SweepResult, format: OutputFormat, stamp: bool) -> String {
    match format {
        OutputFormat::Csv => to_csv(&result.points),
        OutputFormat::Json => RunManifest::new(result, stamp).to_json(),
    }
}

/// Where results go: a file or standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Destination {
    Stdout,
    File(PathBuf),
}

impl Destination {
    /// `-` means standard output.
    pub fn parse(arg: &str) -> Self {
        if arg == "-" {
            Self::Stdout
        } else {
            Self::File(PathBuf::from(arg))
        }
    }

    pub fn write(&self, contents: &str) -> Result<(), CliError> {
        match self {
            Self::Stdout => {
                let mut out = io::stdout().lock();
                out.write_all(contents.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::io("<stdout>", e))
            }
            Self::File(path) => write_file(path, contents),
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// A matplotlib script that plots the CSV next to it. The x axis is SNR if it
/// varies, otherwise the first varying impairment; remaining varying columns
/// label the curves.
pub fn plot_script(csv_file_name: &str, config: &SweepConfig) -> String {
    let axes = [
        ("snr_db", "SNR (dB)", config.snr_db.len()),
        ("phase_std_deg", "phase offset std (deg)", config.phase_std_deg.len()),
        ("time_std", "time offset std (samples)", config.time_std.len()),
        ("tau_ms", "feedback delay (ms)", config.tau_ms.len()),
        ("f_d_hz", "Doppler (Hz)", config.doppler_hz.len()),
    ];
    let (x_col, x_label) = axes
        .iter()
        .find(|(_, _, n)| *n > 1)
        .map(|(c, l, _)| (*c, *l))
        .unwrap_or(("snr_db", "SNR (dB)"));
    let curve_cols: Vec<String> = axes
        .iter()
        .filter(|(c, _, n)| *n > 1 && *c != x_col)
        .map(|(c, _, _)| format!("\"{c}\""))
        .collect();
    format!(
        r#"#!/usr/bin/env python3
# Plots mean spectral efficiency from {csv_file_name}.
import csv
import os
from collections import defaultdict

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "{csv_file_name}"), newline="") as f:
    rows = list(csv.DictReader(f))

x_col = "{x_col}"
curve_cols = [{curves}]
curves = defaultdict(list)
ideal = {{}}
for row in rows:
    key = tuple((c, row[c]) for c in curve_cols)
    curves[key].append((float(row[x_col]), float(row["mean_se"]), float(row["stderr_se"])))
    ideal[float(row[x_col])] = float(row["ideal_se"])

fig, ax = plt.subplots()
if x_col == "snr_db":
    xs = sorted(ideal)
    ax.plot(xs, [ideal[x] for x in xs], "k--", label="ideal")
for key, pts in curves.items():
    pts.sort()
    label = ", ".join(f"{{c}}={{float(v):g}}" for c, v in key) or "impaired"
    ax.errorbar([p[0] for p in pts], [p[1] for p in pts], yerr=[p[2] for p in pts], marker="o", label=label)
ax.set_xlabel("{x_label}")
ax.set_ylabel("spectral efficiency (bit/s/Hz)")
ax.grid(True)
ax.legend()
fig.savefig(os.path.join(here, "{stem}.png"), dpi=150)
"#,
        curves = curve_cols.join(", "),
        stem = csv_file_name.strip_suffix(".csv").unwrap_or(csv_file_name),
    )
}
