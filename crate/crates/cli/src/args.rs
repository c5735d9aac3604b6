use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pulseforge::ErrorKind;

#[derive(Debug, Parser)]
#[command(
    name = "pulseforge",
    version,
    about = "Robust entangling-gate pulses for a three-level spin system",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep an error fraction and write fidelity curves.
    Scan(ScanArgs),
    /// Optimize a robust control schedule.
    Grape(GrapeArgs),
    /// Scan all schemes on one grid and tabulate durations.
    Compare(CompareArgs),
    /// Print the model summary.
    Info(InfoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScanError {
    Ple,
    Ore,
}

impl From<ScanError> for ErrorKind {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Ple => ErrorKind::PulseLength,
            ScanError::Ore => ErrorKind::OffResonance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrainError {
    Ple,
    Ore,
    None,
}

impl TrainError {
    pub fn kind(self) -> Option<ErrorKind> {
        match self {
            TrainError::Ple => Some(ErrorKind::PulseLength),
            TrainError::Ore => Some(ErrorKind::OffResonance),
            TrainError::None => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TrainError::Ple => "ple",
            TrainError::Ore => "ore",
            TrainError::None => "none",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, env = "PULSEFORGE_OUT", default_value = ".")]
    pub out: PathBuf,
    /// File-name prefix; defaults to the error kind.
    #[arg(long)]
    pub prefix: Option<String>,
    /// Key=value file whose entries act as defaults for these flags.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 81)]
    pub grid_points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum, default_value = "ple")]
    pub error: ScanError,
    /// Comma-separated: sequential, bb1, corpse, grape:<pulse file>.
    #[arg(long, default_value = "sequential,bb1,corpse")]
    pub schemes: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GrapeArgs {
    #[arg(long, value_enum, default_value = "ple")]
    pub error: TrainError,
    #[arg(long, default_value_t = -0.2, allow_negative_numbers = true)]
    pub train_min: f64,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    pub train_max: f64,
    #[arg(long, default_value_t = 5)]
    pub train_points: usize,
    #[arg(long, default_value_t = 400)]
    pub bins: usize,
    /// Total time in units of 1/Λ; accepts forms like `18.85`, `6pi`, `pi`.
    #[arg(long, default_value = "6pi", value_parser = parse_time)]
    pub time: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    /// Power-penalty weight.
    #[arg(long, default_value_t = 0.01)]
    pub penalty: f64,
    /// Initial ascent step size.
    #[arg(long)]
    pub step_size: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Initial controls are uniform in [-scale, scale].
    #[arg(long)]
    pub init_scale: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum, default_value = "ple")]
    pub error: ScanError,
    /// Checkpoint written by `grape`.
    #[arg(long, value_name = "FILE")]
    pub grape_pulse: Option<PathBuf>,
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 41)]
    pub grid_points: usize,
    /// Maximum Rabi frequency Λ in s⁻¹, used for physical-unit columns.
    #[arg(long, default_value_t = 1e6)]
    pub lambda: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InfoArgs {
    /// Maximum Rabi frequency Λ in s⁻¹.
    #[arg(long, default_value_t = 1e6)]
    pub lambda: f64,
}

/// Parses `<x>`, `<x>pi`, `<x>π` or `pi`.
pub fn parse_time(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (num, factor) = match t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
        Some(rest) => (rest.trim().trim_end_matches('*'), PI),
        None => (t, 1.0),
    };
    let x = if num.is_empty() {
        1.0
    } else {
        num.parse::<f64>().map_err(|_| format!("invalid time {s:?}"))?
    };
    let v = x * factor;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("time must be positive, got {s:?}"))
    }
}
