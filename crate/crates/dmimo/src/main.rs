use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dmimo::config::ConfigError;
use dmimo::output::{self, Destination, OutputFormat};
use dmimo::presets::{preset, PRESETS};
use dmimo::{run_sweep, CliError, SweepConfig};
use dmimo_core::numerics::trial_rng;
use dmimo_core::simulation::symbol_level_oracle;

#[derive(Debug, Parser)]
#[command(
    name = "dmimo",
    version,
    about = "Capacity sweeps for distributed MIMO under sync offsets and CSI delay"
)]
struct Cli {
    /// More log output on stderr (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a sweep and write CSV or JSON results.
    Run(RunArgs),
    /// Compare analytic per-stream SINR with a symbol-level simulation.
    Oracle(OracleArgs),
    /// List the named presets.
    Presets,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Key-value configuration file, applied on top of the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Start from a named preset (see `dmimo presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Override a configuration key, e.g. `--set snr_db=0:30:5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Output file, or `-` for stdout. Defaults to `<output-dir>/<name>.<format>`.
    #[arg(long)]
    out: Option<String>,
    /// Directory for the default output file.
    #[arg(long, env = "DMIMO_OUTPUT_DIR", default_value = ".")]
    output_dir: PathBuf,
    /// Worker threads; 0 uses one per core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Also write a matplotlib script next to the CSV file.
    #[arg(long)]
    plot_script: bool,
    /// Record timestamp and wall-clock time in the JSON manifest.
    #[arg(long)]
    stamp: bool,
}

#[derive(Debug, clap::Args)]
struct OracleArgs {
    /// Point parameters as `key=value,...`, e.g. `phase_std=20,time_std=0.2,tau_ms=5`.
    #[arg(long, default_value = "")]
    point: String,
    /// Model variant to start from.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    symbols: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn load_config(args: &RunArgs) -> Result<SweepConfig, CliError> {
    let mut cfg = match &args.preset {
        Some(name) => preset(name)?,
        None => SweepConfig::default(),
    };
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        cfg.apply_text(&text, &path.display().to_string())?;
    }
    cfg.apply_overrides(args.overrides.iter().map(String::as_str))?;
    if let Some(trials) = args.trials {
        cfg.set("trials", &trials.to_string())?;
    }
    if let Some(seed) = args.seed {
        cfg.set("seed", &seed.to_string())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let cfg = load_config(&args)?;
    let dest = match &args.out {
        Some(out) => Destination::parse(out),
        None => Destination::File(
            args.output_dir
                .join(format!("{}.{}", cfg.name, args.format.extension())),
        ),
    };
    let plot_target = match (&dest, args.plot_script, args.format) {
        (_, false, _) => None,
        (Destination::File(path), true, OutputFormat::Csv) => Some(path.clone()),
        _ => {
            return Err(ConfigError::Usage("--plot-script needs CSV output written to a file".into()).into());
        }
    };

    let result = run_sweep(&cfg, args.workers)?;
    dest.write(&output::render(&result, args.format, args.stamp))?;
    if let Destination::File(path) = &dest {
        log::info!("wrote {}", path.display());
    }
    if let Some(csv_path) = plot_target {
        let file_name = csv_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let script_path = csv_path.with_extension("py");
        output::write_file(&script_path, &output::plot_script(&file_name, &cfg))?;
        log::info!("wrote {}", script_path.display());
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), CliError> {
    let mut cfg = match &args.preset {
        Some(name) => preset(name)?,
        None => SweepConfig::default(),
    };
    cfg.snr_db = vec![15.0];
    cfg.apply_overrides(args.point.split(',').map(str::trim).filter(|s| !s.is_empty()))?;
    let points = cfg.points();
    let [point] = points.as_slice() else {
        return Err(ConfigError::Usage(format!(
            "--point must describe a single point, got a grid of {}",
            points.len()
        ))
        .into());
    };
    let mut rng = trial_rng(args.seed, 0);
    let report = symbol_level_oracle(point, args.symbols, &mut rng)?;
    println!("stream,analytic_sinr,empirical_sinr,relative_error");
    for (s, ((analytic, empirical), err)) in report
        .analytic
        .iter()
        .zip(&report.empirical_sinr)
        .zip(report.sinr_relative_errors())
        .enumerate()
    {
        println!("{s},{:.6},{empirical:.6},{err:.6}", analytic.sinr());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Oracle(args) => oracle(args),
        Command::Presets => {
            for (name, description) in PRESETS {
                println!("{name:<8} {description}");
            }
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
