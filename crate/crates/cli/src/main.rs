//! Command-line front end: single-image restoration, synthetic mask
//! generation, metric computation, and the benchmark harness.

mod bench;
mod imgio;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use descratch::inpaint::InpaintParams;
use descratch::maskgen::{estimate_width, generate_scratches, ScratchSpec};
use descratch::pipeline::{run_multiscale, PipelineConfig};
use descratch::scalesel::{Strategy, Thickness};
use descratch::{metrics, Error};

/// Exit codes: 2 bad flags, 3 I/O failure, 4 pipeline error.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Pipeline(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Pipeline(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Pipeline(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Read { .. }
            | Error::Write { .. }
            | Error::MalformedHeader(_)
            | Error::UnsupportedMaxval(_)
            | Error::TruncatedPayload { .. } => CliError::Io(e.to_string()),
            other => CliError::Pipeline(other.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

#[derive(Parser)]
#[command(
    name = "descratch",
    version,
    about = "Restore scratch-damaged images by multiscale spline inpainting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Restore one image from an image/mask pair.
    Inpaint(InpaintArgs),
    /// Generate a synthetic scratch mask.
    GenMask(GenMaskArgs),
    /// Print PSNR and SSIM between two images.
    Metrics(MetricsArgs),
    /// Sweep masks, strategies, and scale counts over a corpus; write CSV.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct InpaintArgs {
    /// Damaged input image (.pgm/.ppm, or .png).
    #[arg(long)]
    image: PathBuf,
    /// Mask image; >= 128 marks a missing pixel.
    #[arg(long)]
    mask: PathBuf,
    /// Restored output path.
    #[arg(long)]
    out: PathBuf,
    /// Scale-selection strategy.
    #[arg(long, default_value = "pyramid")]
    strategy: String,
    /// Noise thickness in pixels, or "auto" to estimate from the mask.
    #[arg(long, default_value = "auto")]
    thickness: String,
    /// Override the number of additional downscaled levels.
    #[arg(long)]
    scales: Option<u32>,
    /// Outlier rejection distance for fusion.
    #[arg(long)]
    tau: Option<f64>,
    /// Edge-detection gradient threshold.
    #[arg(long)]
    edge_threshold: Option<f64>,
}

#[derive(Args)]
struct GenMaskArgs {
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    /// Number of scratch lines.
    #[arg(long)]
    lines: usize,
    /// Line thickness in pixels.
    #[arg(long)]
    thickness: u32,
    /// Minimum line length.
    #[arg(long, default_value_t = 16)]
    min_len: u32,
    /// Maximum line length.
    #[arg(long, default_value_t = 64)]
    max_len: u32,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference (ground-truth) image.
    #[arg(long = "ref")]
    reference: PathBuf,
    /// Image under test.
    #[arg(long)]
    test: PathBuf,
    /// Mask for `--masked-only`.
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Score only the masked region (diagnostic; reported numbers use the
    /// full frame).
    #[arg(long, requires = "mask")]
    masked_only: bool,
}

fn parse_strategy(s: &str) -> Result<Strategy, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn cmd_inpaint(args: &InpaintArgs) -> CliResult {
    let strategy = parse_strategy(&args.strategy)?;
    let img = imgio::load_image_any(&args.image)?;
    let mask = imgio::load_mask_any(&args.mask)?;
    if img.width() != mask.width() || img.height() != mask.height() {
        return Err(CliError::Pipeline(format!(
            "dimension mismatch: image {}x{} vs mask {}x{}",
            img.width(),
            img.height(),
            mask.width(),
            mask.height()
        )));
    }

    let thickness = match args.thickness.as_str() {
        "auto" => {
            if mask.count_missing() == 0 {
                Thickness::new(1).expect("1 is a valid thickness")
            } else {
                estimate_width(&mask)?
            }
        }
        s => {
            let w: u32 = s.parse().map_err(|_| {
                CliError::Usage(format!("--thickness must be a count or 'auto', got '{s}'"))
            })?;
            Thickness::new(w).map_err(|e| CliError::Usage(e.to_string()))?
        }
    };

    let mut params = InpaintParams::for_thickness(thickness, (img.width(), img.height()));
    if let Some(tau) = args.tau {
        params.outlier_tau = tau;
    }
    if let Some(thr) = args.edge_threshold {
        params.edge_threshold = thr;
    }
    params
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;

    let cfg = PipelineConfig {
        strategy,
        thickness: Some(thickness),
        scale_override: args.scales,
        weights: None,
        inpaint: Some(params),
    };
    let (restored, report) = run_multiscale(&img, &mask, &cfg, None)?;
    imgio::save_image_any(&restored, &args.out)?;

    let factors: Vec<String> = report.scale_factors.iter().map(|f| f.to_string()).collect();
    println!(
        "strategy={} thickness={} factors={} wall_seconds={:.4} (compute only, no file I/O)",
        report.strategy,
        thickness,
        factors.join(","),
        report.wall_seconds
    );
    Ok(())
}

fn cmd_gen_mask(args: &GenMaskArgs) -> CliResult {
    if args.width == 0 || args.height == 0 {
        return Err(CliError::Usage("width and height must be >= 1".into()));
    }
    let spec = ScratchSpec {
        n_lines: args.lines,
        thickness: args.thickness,
        min_len: args.min_len,
        max_len: args.max_len,
        seed: args.seed,
    };
    let mask = generate_scratches(args.width, args.height, &spec)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    imgio::save_mask_any(&mask, &args.out)?;
    println!(
        "wrote {} ({}x{}, {} missing pixels)",
        args.out.display(),
        args.width,
        args.height,
        mask.count_missing()
    );
    Ok(())
}

/// Formats a metric value with 4 decimals; infinity prints as "inf".
pub fn fmt_metric(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.4}")
    }
}

fn cmd_metrics(args: &MetricsArgs) -> CliResult {
    let reference = imgio::load_image_any(&args.reference)?;
    let test = imgio::load_image_any(&args.test)?;
    let (p, s) = if args.masked_only {
        let mask_path = args.mask.as_ref().expect("clap enforces requires");
        let mask = imgio::load_mask_any(mask_path)?;
        (
            metrics::psnr_masked(&test, &reference, &mask)?,
            metrics::ssim_masked(&test, &reference, &mask)?,
        )
    } else {
        (
            metrics::psnr(&test, &reference)?,
            metrics::ssim(&test, &reference)?,
        )
    };
    println!("psnr={} ssim={}", fmt_metric(p), fmt_metric(s));
    Ok(())
}

fn main() -> ExitCode {
    // Clap already exits with code 2 and a usage diagnostic on bad flags.
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Inpaint(args) => cmd_inpaint(args),
        Command::GenMask(args) => cmd_gen_mask(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Bench(args) => bench::cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("descratch: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
