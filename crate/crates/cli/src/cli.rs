use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Physical-distance experiments: optimal transport between quantum states
/// and the chaos measures built on it.
#[derive(Debug, Clone, Parser)]
#[command(name = "physdist", version, args_override_self = true)]
pub struct Cli {
    /// Directory for every output file.
    #[arg(
        long,
        global = true,
        env = "PHYSDIST_OUT",
        default_value = "physdist-out"
    )]
    pub out_dir: PathBuf,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// `key = value` file; its entries override command-line flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Wasserstein distance between two distributions read from CSV.
    Ot(OtArgs),
    /// Classical, physical and expectation-value distances of two kicked-rotor packets.
    RotorEvolve(RotorEvolveArgs),
    /// Chaos measure over every kicked-rotor phase-space cell.
    RotorScan(RotorScanArgs),
    /// Mean-field Poincaré section of the three-site Bose–Hubbard model.
    BhSection(BhSectionArgs),
    /// Chaos measure over the Bose–Hubbard section grid.
    BhChaos(BhChaosArgs),
    /// Level statistics and chaos measure of the defect XXZ chain.
    Spin(SpinArgs),
    /// Binary dump of a phase-cell basis matrix.
    ExportBasis(ExportBasisArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    /// `|x − y|` between numeric labels.
    Line,
    /// Minimal-image distance between numeric labels, period from `--period`.
    Torus,
    /// Hamming distance between 0/1 labels.
    Hamming,
    /// Dense matrix from `--metric-file`.
    File,
}

#[derive(Debug, Clone, Args)]
pub struct OtArgs {
    /// CSV of `label,weight` rows.
    #[arg(long)]
    pub p: PathBuf,
    /// CSV of `label,weight` rows with the same labels as `--p`.
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricKind::Line)]
    pub metric: MetricKind,
    #[arg(long)]
    pub period: Option<f64>,
    /// CSV with one row per label holding that row of the distance matrix.
    #[arg(long)]
    pub metric_file: Option<PathBuf>,
    /// Cost exponent.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub lambda: u32,
    /// Also write the optimal plan to `ot_plan.csv`.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
    pub plan: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RotorEvolveArgs {
    #[arg(
        long,
        short = 'k',
        default_value_t = 0.3,
        allow_negative_numbers = true
    )]
    pub k: f64,
    /// Phase-space resolution; the Hilbert space has dimension m².
    #[arg(long, short = 'm', default_value_t = 30)]
    pub m: usize,
    #[arg(long, default_value_t = 20)]
    pub kicks: usize,
    /// First packet centre `q,p`.
    #[arg(long, value_parser = parse_point)]
    pub start1: Option<(f64, f64)>,
    /// Second packet centre `q,p`; defaults to the first shifted by one cell in each direction.
    #[arg(long, value_parser = parse_point)]
    pub start2: Option<(f64, f64)>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub lambda: u32,
}

#[derive(Debug, Clone, Args)]
pub struct RotorScanArgs {
    #[arg(
        long,
        short = 'k',
        default_value_t = 4.7,
        allow_negative_numbers = true
    )]
    pub k: f64,
    #[arg(long, short = 'm', default_value_t = 20)]
    pub m: usize,
    /// Average the first N kicks instead of using the infinite-time ensemble.
    #[arg(long)]
    pub stroboscopic: Option<usize>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub lambda: u32,
    /// Logarithmic heatmap scale.
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
    pub log: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BhModelArgs {
    /// Interaction strength in units of the hopping c₀.
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub c_over_c0: f64,
    /// Section energy in units of c₀.
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    pub energy: f64,
    /// Section plane `n₂`.
    #[arg(long, default_value_t = 0.2475)]
    pub n2: f64,
    /// Cell resolution; the particle number is L² − 1.
    #[arg(long, short = 'l', default_value_t = 6)]
    pub l: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BhSectionArgs {
    #[command(flatten)]
    pub model: BhModelArgs,
    /// Seeds `n1,theta1` separated by `;`; angles accept a `pi` suffix.
    #[arg(long, value_parser = parse_seeds, default_value = "0.22,0.8pi;0.42,0.8pi")]
    pub seeds: Seeds,
    #[arg(long, default_value_t = 400.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = physdist_core::bose_hubbard::DEFAULT_DT)]
    pub dt: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BhChaosArgs {
    #[command(flatten)]
    pub model: BhModelArgs,
    /// Sampling step of the section grid; defaults to 1/(3L).
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
    pub log: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SpinArgs {
    #[arg(long, default_value_t = 15)]
    pub sites: usize,
    #[arg(long, default_value_t = 5)]
    pub up: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j1: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub j2: f64,
    /// Defect field.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub eps: f64,
    /// Zero-based defect site.
    #[arg(long, default_value_t = 2)]
    pub defect: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ExportBasisArgs {
    #[arg(long, short = 'l', default_value_t = 4)]
    pub l: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub dof: u32,
}

/// A number, optionally followed by `pi` (`0.8pi`, `pi`).
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, scale) = match t.strip_suffix("pi") {
        Some("") => return Ok(std::f64::consts::PI),
        Some("-") => return Ok(-std::f64::consts::PI),
        Some(rest) => (rest.trim_end_matches('*'), std::f64::consts::PI),
        None => (t, 1.0),
    };
    num.trim()
        .parse::<f64>()
        .map(|x| x * scale)
        .map_err(|_| format!("cannot read {s:?} as a number"))
}

pub fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `x,y`, got {s:?}"))?;
    Ok((parse_angle(a)?, parse_angle(b)?))
}

/// Section seeds `(n₁, θ₁)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Seeds(pub Vec<(f64, f64)>);

fn parse_seeds(s: &str) -> Result<Seeds, String> {
    let v = s
        .split(';')
        .filter(|x| !x.trim().is_empty())
        .map(parse_point)
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("at least one seed is required".into());
    }
    Ok(Seeds(v))
}
