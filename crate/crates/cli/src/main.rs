//! Command-line front end: state generation, single-shot detection,
//! Monte-Carlo detection histograms, variance-surface scans, and
//! repetition planning, all emitting CSV/JSON artifacts.
//!
//! Every command that takes `--seed` produces byte-identical data artifacts
//! on replay (within one build). File outputs get a sibling
//! `<file>.manifest.json` recording the command, resolved configuration,
//! seed, tool version, and wall clock, so any run can be reproduced.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cvwit::detector::{detect, montecarlo, DetectionConfig, NoiseModel, StateFamily};
use cvwit::homodyne::{scan_surface, MeasurementRecord, DEFAULT_SCAN_GRID};
use cvwit::states::{bound_entangled_4mode, random_covariance, squeezed_vacuum, RandomStateConfig};
use cvwit::stats::witness_error;
use cvwit::symplectic::Partition;
use cvwit::witness::{optimize, WitnessOptions};
use cvwit::{Covariance, Real, Setting};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "cvwit", version, about = "Entanglement detection for continuous-variable states from random homodyne measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a covariance matrix as JSON
    Gen {
        #[command(subcommand)]
        state: GenState,
    },
    /// Run one sequential detection trial on a covariance matrix
    Detect(DetectArgs),
    /// Detection-fraction histogram over a family of states
    Montecarlo(MontecarloArgs),
    /// Tabulate the quadrature variance over the measurement-angle grid
    Scan(ScanArgs),
    /// Witness confidence versus repetition count for fixed settings
    Confidence(ConfidenceArgs),
}

#[derive(Subcommand)]
enum GenState {
    /// Two-mode squeezed vacuum with squeezing parameter r
    SqueezedVacuum {
        #[arg(long)]
        r: Real,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random physical state: thermal spectrum, squeezing, passive mixing
    Random {
        #[arg(long, default_value_t = 2)]
        modes: usize,
        #[arg(long, default_value_t = 1.0)]
        nu_min: Real,
        #[arg(long, default_value_t = 5.0)]
        nu_max: Real,
        #[arg(long, default_value_t = 2.0)]
        r_max: Real,
        #[arg(long, env = "CVWIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The four-mode bound entangled reference state
    Bound4 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DetectArgs {
    /// Covariance-matrix JSON file
    #[arg(long)]
    cm: PathBuf,
    /// Comma-separated group sizes, e.g. 1,1 or 2,2
    #[arg(long)]
    partition: String,
    #[arg(long, env = "CVWIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Setting budget; default is twice the tomographically complete count
    #[arg(long)]
    max_settings: Option<usize>,
    /// Measurement repetitions per setting; exact variances when absent
    #[arg(long)]
    noise: Option<usize>,
    /// Trial stream index under the master seed
    #[arg(long, default_value_t = 0)]
    trial: u64,
    /// Also write the detection record (and its manifest) to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Squeezed,
    Random,
    Bound4,
}

#[derive(Args)]
struct MontecarloArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, env = "CVWIT_SEED", default_value_t = 0)]
    seed: u64,
    /// Histogram CSV destination
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated group sizes; defaults to 1,1 (bound4: 2,2)
    #[arg(long)]
    partition: Option<String>,
    #[arg(long)]
    max_settings: Option<usize>,
    /// Measurement repetitions per setting; exact variances when absent
    #[arg(long)]
    noise: Option<usize>,
    /// Squeezed family: explicit comma-separated grid of r values
    #[arg(long, value_delimiter = ',')]
    r_values: Option<Vec<Real>>,
    /// Squeezed family: evenly spaced r grid on [0, 2] with this many points
    #[arg(long, default_value_t = 21)]
    r_points: usize,
    /// Random family: mode count
    #[arg(long, default_value_t = 2)]
    modes: usize,
    /// Random family: thermal symplectic eigenvalues drawn from [nu-min, nu-max]
    #[arg(long, default_value_t = 1.0)]
    nu_min: Real,
    #[arg(long, default_value_t = 5.0)]
    nu_max: Real,
    /// Random family: per-mode squeezing drawn from [0, r-max]
    #[arg(long, default_value_t = 2.0)]
    r_max: Real,
}

#[derive(Args)]
struct ScanArgs {
    /// Covariance-matrix JSON file (two modes)
    #[arg(long)]
    cm: PathBuf,
    /// Local-oscillator phase
    #[arg(long, default_value_t = 0.0)]
    theta: Real,
    /// Grid points per angle axis
    #[arg(long, default_value_t = DEFAULT_SCAN_GRID)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConfidenceArgs {
    /// Covariance-matrix JSON file
    #[arg(long)]
    cm: PathBuf,
    /// JSON array of measurement settings
    #[arg(long)]
    settings: PathBuf,
    /// Confidence level in sigmas
    #[arg(long, default_value_t = 3.0)]
    ksigma: Real,
    /// Repetition counts lo:hi:step (inclusive)
    #[arg(long, default_value = "10:10000:10")]
    n_range: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let started = Instant::now();
    match cli.command {
        Command::Gen { state } => cmd_gen(state, started),
        Command::Detect(args) => cmd_detect(args, started),
        Command::Montecarlo(args) => cmd_montecarlo(args, started),
        Command::Scan(args) => cmd_scan(args, started),
        Command::Confidence(args) => cmd_confidence(args, started),
    }
}

fn cmd_gen(state: GenState, started: Instant) -> Result<ExitCode> {
    let (cm, seed, config, out): (Covariance, Option<u64>, serde_json::Value, Option<PathBuf>) =
        match state {
            GenState::SqueezedVacuum { r, out } => {
                (squeezed_vacuum(r), None, serde_json::json!({ "state": "squeezed-vacuum", "r": r }), out)
            }
            GenState::Random { modes, nu_min, nu_max, r_max, seed, out } => {
                let config = RandomStateConfig::new(modes, nu_min, nu_max, r_max, seed)?;
                let cm = random_covariance(&config)?;
                (cm, Some(seed), serde_json::to_value(&config)?, out)
            }
            GenState::Bound4 { out } => {
                (bound_entangled_4mode(), None, serde_json::json!({ "state": "bound4" }), out)
            }
        };
    let body = serde_json::to_string_pretty(&cm)? + "\n";
    emit(out.as_deref(), &body, "gen", seed, config, started)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_detect(args: DetectArgs, started: Instant) -> Result<ExitCode> {
    let cm = read_cm(&args.cm)?;
    let partition = parse_partition(&args.partition, cm.modes())?;
    let mut config = DetectionConfig::new(partition);
    config.seed = args.seed;
    if let Some(cap) = args.max_settings {
        config.max_settings = cap;
    }
    if let Some(repetitions) = args.noise {
        config.noise = NoiseModel::Gaussian { repetitions };
    }
    let record = detect(&cm, &config, args.trial)?;
    let body = serde_json::to_string_pretty(&record)? + "\n";
    print!("{body}");
    if let Some(out) = &args.out {
        fs::write(out, &body).with_context(|| format!("writing {}", out.display()))?;
        write_manifest(out, "detect", Some(args.seed), serde_json::to_value(&config)?, started)?;
    }
    Ok(if record.detected { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_montecarlo(args: MontecarloArgs, started: Instant) -> Result<ExitCode> {
    let family = match args.family {
        FamilyKind::Squeezed => {
            let r_values = match &args.r_values {
                Some(values) => values.clone(),
                None => linspace(0.0, 2.0, args.r_points)?,
            };
            StateFamily::SqueezedGrid { r_values }
        }
        FamilyKind::Random => StateFamily::Random(RandomStateConfig::new(
            args.modes,
            args.nu_min,
            args.nu_max,
            args.r_max,
            args.seed,
        )?),
        FamilyKind::Bound4 => StateFamily::Bound4,
    };
    let default_split = match args.family {
        FamilyKind::Bound4 => "2,2",
        _ => "1,1",
    };
    let partition =
        parse_partition(args.partition.as_deref().unwrap_or(default_split), family.modes())?;
    let mut config = DetectionConfig::new(partition);
    config.seed = args.seed;
    if let Some(cap) = args.max_settings {
        config.max_settings = cap;
    }
    if let Some(repetitions) = args.noise {
        config.noise = NoiseModel::Gaussian { repetitions };
    }
    let table = montecarlo(&family, args.trials, &config)?;
    fs::write(&args.out, table.to_csv())
        .with_context(|| format!("writing {}", args.out.display()))?;
    write_manifest(
        &args.out,
        "montecarlo",
        Some(args.seed),
        serde_json::json!({ "family": family, "trials": args.trials, "detection": config }),
        started,
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(args: ScanArgs, started: Instant) -> Result<ExitCode> {
    let cm = read_cm(&args.cm)?;
    let surface = scan_surface(&cm, args.theta, args.grid)?;
    let body = surface.to_csv();
    let config = serde_json::json!({ "theta": args.theta, "grid": args.grid });
    emit(args.out.as_deref(), &body, "scan", None, config, started)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_confidence(args: ConfidenceArgs, started: Instant) -> Result<ExitCode> {
    let cm = read_cm(&args.cm)?;
    let raw = fs::read_to_string(&args.settings)
        .with_context(|| format!("reading {}", args.settings.display()))?;
    let settings: Vec<Setting> = serde_json::from_str(&raw)
        .with_context(|| format!("parsing {}", args.settings.display()))?;
    if settings.is_empty() {
        bail!("settings file {} holds no settings", args.settings.display());
    }
    let (lo, hi, step) = parse_range(&args.n_range)?;

    let records = settings
        .iter()
        .map(|s| MeasurementRecord::exact(&cm, s.clone()))
        .collect::<cvwit::Result<Vec<_>>>()?;
    let partition = Partition::bipartite_split(1, cm.modes())?;
    let witness = optimize(&records, &partition, &WitnessOptions::default())?;
    if witness.value.is_none() {
        bail!("no witness exists for these settings (status {:?})", witness.status);
    }
    let m: Vec<Real> = records.iter().map(|r| r.value).collect();

    let mut body = String::from("n,upper_confidence\n");
    let mut n = lo;
    while n <= hi {
        let mut estimate = witness_error(&witness.c, &m, n)?;
        estimate.k_sigma = args.ksigma;
        body.push_str(&format!("{n},{}\n", estimate.upper_confidence()));
        n += step;
    }
    let config = serde_json::json!({
        "ksigma": args.ksigma,
        "n_range": args.n_range,
        "settings": settings.len(),
        "witness_value": witness.value,
    });
    emit(args.out.as_deref(), &body, "confidence", None, config, started)?;
    Ok(ExitCode::SUCCESS)
}

/// Print the artifact to stdout, or write it to `out` with a manifest.
fn emit(
    out: Option<&Path>,
    body: &str,
    command: &str,
    seed: Option<u64>,
    config: serde_json::Value,
    started: Instant,
) -> Result<()> {
    match out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => {
            fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
            write_manifest(path, command, seed, config, started)
        }
    }
}

fn read_cm(path: &Path) -> Result<Covariance> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))
}

fn parse_partition(spec: &str, modes: usize) -> Result<Partition> {
    let sizes = spec
        .split(',')
        .map(|tok| tok.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("partition {spec:?} is not a comma-separated size list"))?;
    Ok(Partition::new(sizes, modes)?)
}

fn parse_range(spec: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        bail!("range {spec:?} is not lo:hi:step");
    }
    let lo = parts[0].parse().with_context(|| format!("range start {:?}", parts[0]))?;
    let hi = parts[1].parse().with_context(|| format!("range end {:?}", parts[1]))?;
    let step = parts[2].parse().with_context(|| format!("range step {:?}", parts[2]))?;
    if lo < 2 || hi < lo || step == 0 {
        bail!("range {spec:?} must satisfy 2 <= lo <= hi with positive step");
    }
    Ok((lo, hi, step))
}

fn linspace(lo: Real, hi: Real, points: usize) -> Result<Vec<Real>> {
    if points < 2 {
        bail!("a grid needs at least 2 points");
    }
    let step = (hi - lo) / (points - 1) as Real;
    Ok((0..points).map(|i| lo + step * i as Real).collect())
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    argv: Vec<String>,
    seed: Option<u64>,
    config: serde_json::Value,
    version: String,
    git: String,
    created_utc: String,
    wall_seconds: f64,
}

/// Sibling `<artifact>.manifest.json` describing how the artifact was made.
fn write_manifest(
    artifact: &Path,
    command: &str,
    seed: Option<u64>,
    config: serde_json::Value,
    started: Instant,
) -> Result<()> {
    let manifest = RunManifest {
        command: command.into(),
        argv: std::env::args().collect(),
        seed,
        config,
        version: env!("CARGO_PKG_VERSION").into(),
        git: env!("GIT_HASH").into(),
        created_utc: chrono::Utc::now().to_rfc3339(),
        wall_seconds: started.elapsed().as_secs_f64(),
    };
    let mut path = artifact.as_os_str().to_owned();
    path.push(".manifest.json");
    let body = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&path, body)
        .with_context(|| format!("writing {}", PathBuf::from(&path).display()))?;
    Ok(())
}
