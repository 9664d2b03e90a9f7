//! Benchmark harness: sweeps (image, mask seed, thickness, strategy, scale
//! count) cells over a ground-truth corpus, scores each restoration, and
//! writes one CSV row per cell plus aggregate means per configuration.
//!
//! Cells are computed in parallel (capped by `INPAINT_THREADS`, 0 = auto)
//! and rows are written afterwards in a fixed sorted order, so identical
//! flags produce identical CSVs regardless of scheduling. Wall times are
//! the only nondeterministic column; `--times none` zeroes them for
//! byte-reproducible reports.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use descratch::maskgen::{generate_scratches, ScratchSpec};
use descratch::pipeline::{run_multiscale, PipelineConfig};
use descratch::raster::Image;
use descratch::scalesel::{Strategy, Thickness};

use crate::{fmt_metric, imgio, CliError};

#[derive(Args)]
pub struct BenchArgs {
    /// Directory of ground-truth images (.pgm/.ppm/.png).
    #[arg(long)]
    images: PathBuf,
    /// Number of random masks per image; seeds run 0..N.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    /// Comma-separated scratch thicknesses.
    #[arg(long, default_value = "5")]
    thickness_list: String,
    /// Comma-separated strategies (pyramid, integer).
    #[arg(long, default_value = "pyramid")]
    strategies: String,
    /// Additional-scale counts to sweep: "0..4" (inclusive) or "0,1,2".
    /// Default: the floor-log2 count plus the single-scale baseline.
    #[arg(long)]
    scale_sweep: Option<String>,
    /// Scratch lines per mask.
    #[arg(long, default_value_t = 8)]
    lines: usize,
    #[arg(long, default_value_t = 16)]
    min_len: u32,
    #[arg(long, default_value_t = 64)]
    max_len: u32,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Also mirror the rows to this path as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// "wall" records wall-clock seconds; "none" zeroes the column so
    /// repeated runs are byte-identical.
    #[arg(long, default_value = "wall")]
    times: String,
}

/// One benchmark measurement; also the CSV row schema, in column order.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub image_id: String,
    pub seed: u64,
    pub strategy: String,
    pub n_scales: u32,
    pub thickness: u32,
    pub psnr_db: f64,
    pub ssim: f64,
    pub wall_seconds: f64,
}

pub const CSV_HEADER: &str = "image_id,seed,strategy,n_scales,thickness,psnr_db,ssim,wall_seconds";

impl BenchRow {
    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.image_id,
            self.seed,
            self.strategy,
            self.n_scales,
            self.thickness,
            fmt_metric(self.psnr_db),
            fmt_metric(self.ssim),
            fmt_metric(self.wall_seconds),
        )
    }
}

struct Cell {
    image_idx: usize,
    seed: u64,
    thickness: u32,
    strategy: Strategy,
    /// Requested additional-scale count; `None` means the floor-log2 rule.
    requested: Option<u32>,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| CliError::Usage(format!("bad {what} entry '{tok}'")))
        })
        .collect()
}

fn parse_sweep(s: &str) -> Result<Vec<u32>, CliError> {
    if let Some((a, b)) = s.split_once("..") {
        let lo: u32 = a
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad sweep bound '{a}'")))?;
        let hi: u32 = b
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad sweep bound '{b}'")))?;
        if hi < lo {
            return Err(CliError::Usage(format!("empty sweep range '{s}'")));
        }
        return Ok((lo..=hi).collect());
    }
    parse_list(s, "scale-sweep")
}

fn load_corpus(dir: &Path) -> Result<Vec<(String, Image)>, CliError> {
    let entries = fs::read_dir(dir)
        .map_err(|e| CliError::Io(format!("unreadable corpus {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .and_then(|e| e.to_str())
                .map(|e| {
                    matches!(
                        e.to_ascii_lowercase().as_str(),
                        "pgm" | "ppm" | "pnm" | "png"
                    )
                })
                .unwrap_or(false)
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Io(format!(
            "no .pgm/.ppm/.png images found in {}",
            dir.display()
        )));
    }
    let mut corpus = Vec::with_capacity(paths.len());
    for path in paths {
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().replace(',', "_"))
            .unwrap_or_else(|| "image".into());
        let img = imgio::load_image_any(&path)?;
        corpus.push((id, img));
    }
    Ok(corpus)
}

fn run_cell(
    cell: &Cell,
    corpus: &[(String, Image)],
    args: &BenchArgs,
    record_wall: bool,
) -> Result<BenchRow, CliError> {
    let (id, img) = &corpus[cell.image_idx];
    let spec = ScratchSpec {
        n_lines: args.lines,
        thickness: cell.thickness,
        min_len: args.min_len,
        max_len: args.max_len,
        seed: cell.seed,
    };
    let mask = generate_scratches(img.width(), img.height(), &spec)?;
    let thickness = Thickness::new(cell.thickness).map_err(CliError::from)?;
    let cfg = PipelineConfig {
        strategy: cell.strategy,
        thickness: Some(thickness),
        scale_override: cell.requested,
        weights: None,
        inpaint: None,
    };
    let (_, report) = run_multiscale(img, &mask, &cfg, Some(img))?;
    let n_scales = match cell.requested {
        Some(s) => s,
        None => (report.scale_factors.len() - 1) as u32,
    };
    Ok(BenchRow {
        image_id: id.clone(),
        seed: cell.seed,
        strategy: cell.strategy.to_string(),
        n_scales,
        thickness: cell.thickness,
        psnr_db: report.psnr_db.expect("reference supplied"),
        ssim: report.ssim.expect("reference supplied"),
        wall_seconds: if record_wall {
            report.wall_seconds
        } else {
            0.0
        },
    })
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("INPAINT_THREADS") {
        let n: usize = raw.parse().map_err(|_| {
            CliError::Usage(format!("INPAINT_THREADS must be a count, got '{raw}'"))
        })?;
        if n > 0 {
            builder = builder.num_threads(n);
        }
    }
    builder
        .build()
        .map_err(|e| CliError::Pipeline(format!("thread pool: {e}")))
}

pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let record_wall = match args.times.as_str() {
        "wall" => true,
        "none" => false,
        other => {
            return Err(CliError::Usage(format!(
                "--times must be wall or none, got '{other}'"
            )))
        }
    };
    let thicknesses: Vec<u32> = parse_list(&args.thickness_list, "thickness-list")?;
    if thicknesses.iter().any(|&t| t < 1) {
        return Err(CliError::Usage("thicknesses must be >= 1".into()));
    }
    let strategies: Vec<Strategy> = args
        .strategies
        .split(',')
        .map(|s| s.trim().parse().map_err(CliError::Usage))
        .collect::<Result<_, _>>()?;
    let sweep: Option<Vec<u32>> = args.scale_sweep.as_deref().map(parse_sweep).transpose()?;

    let corpus = load_corpus(&args.images)?;

    // Fixed nested order defines the row order of the report.
    let mut cells = Vec::new();
    for image_idx in 0..corpus.len() {
        for seed in 0..args.seeds {
            for &thickness in &thicknesses {
                for &strategy in &strategies {
                    match &sweep {
                        Some(counts) => {
                            for &requested in counts {
                                cells.push(Cell {
                                    image_idx,
                                    seed,
                                    thickness,
                                    strategy,
                                    requested: Some(requested),
                                });
                            }
                        }
                        None => {
                            // Recommended count plus the single-scale baseline.
                            cells.push(Cell {
                                image_idx,
                                seed,
                                thickness,
                                strategy,
                                requested: None,
                            });
                            cells.push(Cell {
                                image_idx,
                                seed,
                                thickness,
                                strategy,
                                requested: Some(0),
                            });
                        }
                    }
                }
            }
        }
    }

    let pool = thread_pool()?;
    let results: Vec<Result<BenchRow, CliError>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| run_cell(cell, &corpus, args, record_wall))
            .collect()
    });

    // Write rows in cell order; on the first failure, flush what exists and
    // report the error.
    let file = fs::File::create(&args.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out.display())))?;
    let mut writer = std::io::BufWriter::new(file);
    let mut written: Vec<BenchRow> = Vec::with_capacity(results.len());
    let mut failure: Option<CliError> = None;
    writeln!(writer, "{CSV_HEADER}").map_err(|e| CliError::Io(e.to_string()))?;
    for result in results {
        match result {
            Ok(row) => {
                writeln!(writer, "{}", row.to_csv()).map_err(|e| CliError::Io(e.to_string()))?;
                written.push(row);
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    writer.flush().map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(e) = failure {
        return Err(e);
    }

    if let Some(json_path) = &args.json {
        let body = serde_json::to_string_pretty(&written)
            .map_err(|e| CliError::Pipeline(format!("json encode: {e}")))?;
        fs::write(json_path, body)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", json_path.display())))?;
    }

    print_aggregates(&written);
    println!(
        "wrote {} rows to {} (wall times are compute only, no file I/O)",
        written.len(),
        args.out.display()
    );
    Ok(())
}

/// Prints per-configuration means, sorted by (strategy, thickness,
/// n_scales), to standard output.
fn print_aggregates(rows: &[BenchRow]) {
    let mut keys: Vec<(String, u32, u32)> = rows
        .iter()
        .map(|r| (r.strategy.clone(), r.thickness, r.n_scales))
        .collect();
    keys.sort();
    keys.dedup();
    for (strategy, thickness, n_scales) in keys {
        let group: Vec<&BenchRow> = rows
            .iter()
            .filter(|r| {
                r.strategy == strategy && r.thickness == thickness && r.n_scales == n_scales
            })
            .collect();
        let n = group.len() as f64;
        let psnr = group.iter().map(|r| r.psnr_db).sum::<f64>() / n;
        let ssim = group.iter().map(|r| r.ssim).sum::<f64>() / n;
        let wall = group.iter().map(|r| r.wall_seconds).sum::<f64>() / n;
        println!(
            "mean strategy={strategy} thickness={thickness} n_scales={n_scales} psnr_db={} ssim={} wall_seconds={} rows={}",
            fmt_metric(psnr),
            fmt_metric(ssim),
            fmt_metric(wall),
            group.len()
        );
    }
}
