use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(name = "cocycle", version, about = "Cocycle growth laboratory")]
pub struct Cli {
    /// Master seed; Monte Carlo stream i uses (seed, i).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub threads: Option<u64>,

    /// Output directory (default: out/<subcommand>).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Flat key=value file; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Simple random walks: mean distance curve and escape rate.
    Walk(WalkArgs),
    /// Compression exponent of a cocycle from bucketed norms.
    Compress(CompressArgs),
    /// Markov-type ratio E‖b(Wₙ)‖ᵖ / (n·E‖b(W₁)‖ᵖ).
    Markov(MarkovArgs),
    /// Maximal nondecreasing η with f·η(|g|) ≤ h.
    Eta(EtaArgs),
    /// Moduli of convexity and smoothness of ℓᵖ.
    Moduli(ModuliArgs),
    /// Invariant renorming under a finite matrix group.
    Renorm(RenormArgs),
    /// Spectral-gap reports for a gallery of representations.
    Gap(GapArgs),
    /// Harmonize a cocycle against a measure.
    Harmonize(HarmonizeArgs),
    /// Radial ODE on a rank-one symmetric space.
    Ode(OdeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Walk(_) => "walk",
            Command::Compress(_) => "compress",
            Command::Markov(_) => "markov",
            Command::Eta(_) => "eta",
            Command::Moduli(_) => "moduli",
            Command::Renorm(_) => "renorm",
            Command::Gap(_) => "gap",
            Command::Harmonize(_) => "harmonize",
            Command::Ode(_) => "ode",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct WalkArgs {
    /// free:<k>, abelian:<d> or lamplighter.
    #[arg(long, default_value = "free:2")]
    pub group: String,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(100..=10_000_000))]
    pub steps: u64,
    #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub walks: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct CocycleArgs {
    #[arg(long, default_value = "free:2")]
    pub group: String,
    /// haagerup, homomorphism, or a JSON cocycle file.
    #[arg(long, default_value = "haagerup")]
    pub cocycle: String,
}

#[derive(Args, Debug, Serialize)]
pub struct CompressArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub cocycle: CocycleArgs,
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(100..=50_000_000))]
    pub samples: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub r_min: u64,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub r_max: u64,
    /// Share of walk endpoints among the samples (default depends on the group).
    #[arg(long)]
    pub walk_fraction: Option<f64>,
    /// Smoothness exponent for the verdict, in (1, 2].
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct MarkovArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub cocycle: CocycleArgs,
    /// Exponent in (1, 2].
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    pub n_max: u64,
    #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(2..=10_000_000))]
    pub samples: u64,
    /// Comma-separated step counts (default: every n ≤ n-max).
    #[arg(long)]
    pub checkpoints: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct EtaArgs {
    /// CSV with columns radius,f,h; when absent, f = ‖b(g)‖ and h = |g|^h-power
    /// on sampled elements.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub cocycle: CocycleArgs,
    #[arg(long, default_value_t = 1.0)]
    pub h_power: f64,
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(10..=10_000_000))]
    pub samples: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub r_min: u64,
    #[arg(long, default_value_t = 1_000, value_parser = clap::value_parser!(u64).range(2..=1_000_000))]
    pub r_max: u64,
    /// Comma-separated divergence thresholds.
    #[arg(long)]
    pub thresholds: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct ModuliArgs {
    /// Exponent p ≥ 1 or "inf".
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=16))]
    pub dim: u64,
    /// Grid points per curve.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..=10_000))]
    pub points: u64,
    /// Largest τ of the smoothness grid.
    #[arg(long, default_value_t = 1.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub restarts: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct RenormArgs {
    /// Exponent p ≥ 1 or "inf" of the base norm.
    #[arg(long, default_value = "2")]
    pub p: String,
    /// "rotation8" (order-8 rotation conjugated by diag(2,1)) or a JSON
    /// file holding a list of square matrices.
    #[arg(long, default_value = "rotation8")]
    pub generators: String,
    /// Uniform bound M for groups whose closure is too large to enumerate.
    #[arg(long)]
    pub bound: Option<f64>,
    /// Sampled orbit words when the closure is not enumerated.
    #[arg(long, default_value_t = 4_096, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    pub budget: u64,
    /// Comma-separated vector to renorm.
    #[arg(long)]
    pub vector: Option<String>,
    /// Angles of the unit-circle profile written to renorm.csv (dim 2).
    #[arg(long, default_value_t = 360, value_parser = clap::value_parser!(u64).range(4..=100_000))]
    pub angles: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct GapArgs {
    /// JSON gallery file (default: built-in gallery).
    #[arg(long)]
    pub gallery: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct HarmonizeArgs {
    /// JSON cocycle file; alternative to --example.
    #[arg(long, conflicts_with = "example")]
    pub cocycle: Option<PathBuf>,
    /// "simple", "uniform:<w1>,<w2>,…", or a JSON measure file. Defaults to
    /// the example's measure, else "simple".
    #[arg(long)]
    pub measure: Option<String>,
    /// Gallery example whose representation carries the cocycle.
    #[arg(long)]
    pub example: Option<String>,
    /// JSON gallery file (default: built-in gallery).
    #[arg(long)]
    pub gallery: Option<PathBuf>,
    /// Cocycle drawn on the example: random generator values or a random
    /// coboundary.
    #[arg(long, default_value = "random", value_parser = ["random", "coboundary"])]
    pub kind: String,
}

#[derive(Args, Debug, Serialize)]
pub struct OdeArgs {
    /// R, C, H or O.
    #[arg(long, default_value = "H")]
    pub field: String,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=64))]
    pub n: u32,
    /// const:<v>, band:<a>,<b>:<period>, or a CSV file with columns r,zeta.
    #[arg(long, default_value = "const:1")]
    pub forcing: String,
    #[arg(long, default_value_t = 20.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Rows of ode.csv (grid is thinned evenly).
    #[arg(long, default_value_t = 10_001, value_parser = clap::value_parser!(u64).range(2..=10_000_000))]
    pub csv_points: u64,
}
