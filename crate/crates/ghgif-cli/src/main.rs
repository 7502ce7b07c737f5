//! `ghgif` — guided image filtering toolkit.
//!
//! Subcommands: `filter`, `bench-smooth`, `bench-denoise`, `enhance`,
//! `tonemap`, `dehaze`, `texture`, `selftest`. Exit codes: 0 success,
//! 2 bad parameters, 3 I/O failure, 4 internal-consistency failure.

mod cmd_apps;
mod cmd_bench;
mod cmd_filter;
mod cmd_selftest;
mod error;
mod imgio;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliResult;

#[derive(Parser)]
#[command(name = "ghgif", version, about = "Guided image filtering: affine and Gaussian-highpass families, applications, and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one guided filter on an image.
    Filter(FilterArgs),
    /// Edge-aware smoothing benchmark over a corpus (self-guided grid).
    BenchSmooth(BenchSmoothArgs),
    /// Denoising benchmark: seeded Gaussian noise, two guidance cases.
    BenchDenoise(BenchDenoiseArgs),
    /// Detail enhancement (base + amplified detail).
    Enhance(EnhanceArgs),
    /// HDR tone mapping by base-layer compression in log luminance.
    Tonemap(TonemapArgs),
    /// Single-image dehazing with guided transmission refinement.
    Dehaze(DehazeArgs),
    /// Rolling-guidance texture removal.
    Texture(TextureArgs),
    /// Internal consistency battery (identities that must hold exactly).
    Selftest(SelftestArgs),
}

/// Filter selection shared by every command that runs a guided filter.
#[derive(Args, Debug, Clone)]
struct FilterOpts {
    /// Filter variant: gif, wgif, ggif, skwgif, rdwgif, or their gh-
    /// counterparts.
    #[arg(long, default_value = "gh-gif")]
    variant: String,

    /// Window radius.
    #[arg(short = 'r', long = "radius", value_name = "R")]
    r: Option<usize>,

    /// Affine-family regularization (epsilon).
    #[arg(long)]
    eps: Option<f64>,

    /// Highpass-family regularization (lambda). Defaults to eps/10.
    #[arg(long)]
    lambda: Option<f64>,

    /// Gaussian scale for the highpass family's base layers. Defaults to
    /// r/2.
    #[arg(long)]
    sigma: Option<f64>,

    /// Border policy: replicate or reflect.
    #[arg(long, default_value = "replicate")]
    border: String,
}

#[derive(Args)]
struct FilterArgs {
    /// Input image (png, pgm, ppm).
    input: PathBuf,
    /// Output image (png, pgm, ppm).
    output: PathBuf,

    #[command(flatten)]
    opts: FilterOpts,

    /// Guidance image; defaults to the input itself (self-guided).
    #[arg(long)]
    guide: Option<PathBuf>,

    /// Export the variant's edge-aware weight field as a rescaled PGM.
    #[arg(long)]
    dump_weights: Option<PathBuf>,
}

#[derive(Args)]
struct BenchSmoothArgs {
    /// Directory of clean corpus images.
    #[arg(long, default_value = "assets/corpus")]
    corpus: PathBuf,

    /// JSON-lines report destination.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Markdown table destination (PSNR and SSIM tables).
    #[arg(long)]
    markdown: Option<PathBuf>,

    /// Window radii to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2usize, 4, 8])]
    r_grid: Vec<usize>,

    /// Epsilon values to sweep (lambda is always eps/10).
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.01f64, 0.04, 0.16])]
    eps_grid: Vec<f64>,

    /// Gaussian scale of the highpass family's base layers, as multiples
    /// of r. Pass 0.25,0.5,1 for a sensitivity sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5f64])]
    sigma_scale: Vec<f64>,

    /// Record wall-clock times in the report (makes reports
    /// non-reproducible byte-for-byte).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct BenchDenoiseArgs {
    #[arg(long, default_value = "assets/corpus")]
    corpus: PathBuf,

    #[arg(long)]
    report: Option<PathBuf>,

    /// Noise generator seed; recorded in every report row.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Window radius.
    #[arg(short = 'r', long = "radius", default_value_t = 4)]
    r: usize,

    /// Affine-family epsilon (lambda is eps/10).
    #[arg(long, default_value_t = 0.04)]
    eps: f64,

    /// Gaussian noise standard deviation (defaults to 25/255).
    #[arg(long)]
    noise_sigma: Option<f64>,

    /// Gaussian scale used to build the case-2 guidance from the noisy
    /// image.
    #[arg(long, default_value_t = 2.0)]
    guide_sigma: f64,

    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct EnhanceArgs {
    input: PathBuf,
    output: PathBuf,

    /// Detail amplification factor.
    #[arg(short = 'k', long, default_value_t = 5.0)]
    k: f64,

    #[command(flatten)]
    opts: FilterOpts,
}

#[derive(Args)]
struct TonemapArgs {
    /// HDR input (.hdr radiance; png/pgm inputs are treated as linear
    /// gray radiance).
    input: PathBuf,
    /// Output image; without -c the compression sweep appends `_cX.XX`
    /// before the extension.
    output: PathBuf,

    /// Base-layer compression in (0,1); omitted = sweep 0.3, 0.4, 0.5.
    #[arg(short = 'c', long)]
    compression: Option<f64>,

    /// Display contrast target capping the effective compression.
    #[arg(long, default_value_t = 100.0)]
    target_contrast: f64,

    #[command(flatten)]
    opts: FilterOpts,
}

#[derive(Args)]
struct DehazeArgs {
    /// Hazy RGB input.
    input: PathBuf,
    /// Recovered output.
    output: PathBuf,

    /// Dark-channel patch radius (patch side = 2r+1).
    #[arg(long, default_value_t = 7)]
    patch: usize,

    /// Haze retention factor in (0,1].
    #[arg(long, default_value_t = 0.95)]
    omega: f64,

    /// Transmission floor.
    #[arg(long, default_value_t = 0.1)]
    t0: f64,

    /// Fraction of brightest dark-channel pixels for the airlight.
    #[arg(long, default_value_t = 0.001)]
    airlight_quantile: f64,

    /// Write the refined transmission map here (pgm/png).
    #[arg(long)]
    dump_transmission: Option<PathBuf>,

    #[command(flatten)]
    opts: FilterOpts,
}

#[derive(Args)]
struct TextureArgs {
    input: PathBuf,
    output: PathBuf,

    /// Rolling iterations after the initial Gaussian pass.
    #[arg(long, default_value_t = 5)]
    iterations: usize,

    /// Structure-removal Gaussian scale seeding the guidance; defaults to
    /// r/2.
    #[arg(long)]
    sigma_init: Option<f64>,

    #[command(flatten)]
    opts: FilterOpts,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed for the random consistency checks.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Filter(args) => cmd_filter::run(args),
        Command::BenchSmooth(args) => cmd_bench::run_smooth(args),
        Command::BenchDenoise(args) => cmd_bench::run_denoise(args),
        Command::Enhance(args) => cmd_apps::run_enhance(args),
        Command::Tonemap(args) => cmd_apps::run_tonemap(args),
        Command::Dehaze(args) => cmd_apps::run_dehaze(args),
        Command::Texture(args) => cmd_apps::run_texture(args),
        Command::Selftest(args) => cmd_selftest::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
