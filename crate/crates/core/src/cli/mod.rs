//! The `bezitrace` command line: `vectorize`, `rasterize`, `psnr`,
//! `gradcheck` and `energyscan`.
//!
//! Exit codes are 0 on success, 1 on runtime failure (including a failed
//! gradient check) and 2 on usage errors. `BEZITRACE_THREADS` caps the
//! worker pool.

pub mod gradcheck;
pub mod report;
pub mod scan;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::energy::{EnergyContext, EnergyWeights, VectorShape};
use crate::geometry::Point;
use crate::imaging::{load_png, load_svg, parse_color, psnr, save_png, save_svg, RasterImage, Rgb};
use crate::pipeline::{vectorize, VectorizeConfig};
use crate::raster::{composite, oracle_coverage, rasterize_all, Background, RasterGrid};

pub use gradcheck::{gradcheck, GradcheckOptions, GradcheckTable, TermCheck};
pub use report::{VectorizeReport, REPORT_SCHEMA_VERSION};
pub use scan::{energy_scan, max_jump, median_jump, scan_csv, sweep_values, ScanParam, ScanRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bezitrace", version, about = "Vectorize clipart into closed cubic Bezier paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace a PNG into an SVG of filled bezigons.
    Vectorize(VectorizeArgs),
    /// Render an SVG to PNG.
    Rasterize(RasterizeArgs),
    /// PSNR between two PNGs of equal size, in dB.
    Psnr { a: PathBuf, b: PathBuf },
    /// Compare analytic gradients with central differences.
    Gradcheck(GradcheckArgs),
    /// Sweep one control-point coordinate and tabulate the data energy.
    Energyscan(EnergyscanArgs),
}

#[derive(Debug, Args)]
pub struct VectorizeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Start from this SVG instead of segmenting the image.
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Prior weights `spt,apt,hpt,lpt`.
    #[arg(long, value_parser = parse_weights)]
    pub weights: Option<EnergyWeights>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long, overrides_with = "no_global")]
    pub global: bool,
    #[arg(long, overrides_with = "global")]
    pub no_global: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Background color, replacing the estimate.
    #[arg(long, value_parser = parse_rgb)]
    pub bg: Option<Rgb>,
    /// Grid depth; defaults to the smallest grid covering the image.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Divide the data term by the initial curve length.
    #[arg(long)]
    pub l0: bool,
    /// Segmentation threshold on the 0-255 scale.
    #[arg(long)]
    pub k: Option<f64>,
    /// Curve fitting tolerance in pixels.
    #[arg(long)]
    pub fit_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RasterizeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Output size of the longer side in pixels; the drawing is scaled to it.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, value_parser = parse_rgb, default_value = "#ffffff")]
    pub bg: Rgb,
    /// Point-sample with n×n samples per pixel instead.
    #[arg(long)]
    pub oracle: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GradcheckArgs {
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub depth: u32,
}

#[derive(Debug, Args)]
pub struct EnergyscanArgs {
    pub svg: PathBuf,
    pub png: PathBuf,
    /// `segment,point,coord` with coord `x` or `y`.
    #[arg(long, value_parser = parse_param)]
    pub param: ScanParam,
    /// `a:b:steps` in pixels.
    #[arg(long, value_parser = parse_range)]
    pub range: (f64, f64, usize),
    #[arg(long)]
    pub out: PathBuf,
    /// Which shape of the SVG to scan.
    #[arg(long, default_value_t = 0)]
    pub shape: usize,
    #[arg(long, value_parser = parse_rgb, default_value = "#ffffff")]
    pub bg: Rgb,
    /// Samples per axis of the oracle column.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
}

fn parse_weights(s: &str) -> Result<EnergyWeights, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [spt, apt, hpt, lpt] = v[..] else {
        return Err(format!("expected 4 comma-separated weights, got {}", v.len()));
    };
    let w = EnergyWeights { spt, apt, hpt, lpt };
    if !w.is_valid() {
        return Err("weights must be finite and non-negative".into());
    }
    Ok(w)
}

fn parse_rgb(s: &str) -> Result<Rgb, String> {
    parse_color(s).map_err(|e| e.to_string())
}

fn parse_param(s: &str) -> Result<ScanParam, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [j, i, c] = parts[..] else {
        return Err("expected segment,point,coord".into());
    };
    let coord = match c {
        "x" | "0" => 0,
        "y" | "1" => 1,
        _ => return Err(format!("coordinate must be x or y, got {c:?}")),
    };
    let point: usize = i.parse().map_err(|e| format!("{i:?}: {e}"))?;
    if point > 2 {
        return Err(format!("point index must be 0, 1 or 2, got {point}"));
    }
    Ok(ScanParam { segment: j.parse().map_err(|e| format!("{j:?}: {e}"))?, point, coord })
}

fn parse_range(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err("expected a:b:steps".into());
    };
    let a: f64 = a.parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: f64 = b.parse().map_err(|e| format!("{b:?}: {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("{n:?}: {e}"))?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err("range needs finite ends and at least one step".into());
    }
    Ok((a, b, n))
}

type CmdResult = Result<i32, Box<dyn std::error::Error + Send + Sync>>;

pub fn cmd_vectorize(args: &VectorizeArgs) -> CmdResult {
    let start = Instant::now();
    let image = load_png(&args.input)?;
    let seed = args.init.as_ref().map(load_svg).transpose()?;
    let mut config = VectorizeConfig::default();
    if let Some(w) = args.weights {
        config.weights = w;
    }
    if let Some(n) = args.sweeps {
        config.solver.max_sweeps = n;
    }
    if args.no_global {
        config.solver.global_pass = false;
    }
    if let Some(k) = args.k {
        config.init.k = k;
    }
    if let Some(t) = args.fit_tol {
        config.init.fit.err_tol = t;
    }
    config.background = args.bg;
    config.depth = args.depth;
    config.normalize_by_l0 = args.l0;
    let v = vectorize(&image, seed.as_ref(), &config)?;
    save_svg(&v.document, &args.out)?;
    if let Some(path) = &args.report {
        let r = VectorizeReport::new(
            &args.input.display().to_string(),
            seed.is_some(),
            &config,
            &v,
            start.elapsed().as_secs_f64(),
        );
        std::fs::write(path, r.to_json())?;
    }
    println!(
        "{} shapes, PSNR {:.2} dB -> {:.2} dB",
        v.document.shapes.len(),
        v.psnr_initial,
        v.psnr_final
    );
    Ok(EXIT_OK)
}

/// Renders `doc` at its own size times `scale`, padded to a dyadic grid and
/// cropped back.
pub fn render_document(
    doc: &crate::imaging::VectorDocument,
    scale: f64,
    bg: Rgb,
    oracle: Option<usize>,
) -> Result<RasterImage, Box<dyn std::error::Error + Send + Sync>> {
    let w = (doc.width * scale).ceil().max(1.0) as usize;
    let h = (doc.height * scale).ceil().max(1.0) as usize;
    let grid = RasterGrid::covering(w, h)?;
    let k = scale / grid.size() as f64;
    let shapes: Vec<VectorShape> = doc
        .shapes
        .iter()
        .map(|s| VectorShape { bezigon: s.bezigon.map_points(|p| Point::new(p.x * k, p.y * k)), color: s.color })
        .collect();
    let img = match oracle {
        None => rasterize_all(&shapes, &Background::Solid(bg), grid)?,
        Some(n) => {
            let n = n.max(1);
            let mut canvas = Background::Image(RasterImage::filled(grid.size() as usize, grid.size() as usize, bg));
            for s in &shapes {
                canvas = Background::Image(composite(&oracle_coverage(&s.bezigon, grid, n), s.color, &canvas));
            }
            match canvas {
                Background::Image(img) => img,
                Background::Solid(_) => unreachable!(),
            }
        }
    };
    Ok(img.crop(w, h))
}

pub fn cmd_rasterize(args: &RasterizeArgs) -> CmdResult {
    let doc = load_svg(&args.input)?;
    let scale = match args.size {
        Some(0) => return Err("--size must be positive".into()),
        Some(s) => s as f64 / doc.width.max(doc.height),
        None => 1.0,
    };
    let img = render_document(&doc, scale, args.bg, args.oracle)?;
    save_png(&img, &args.out)?;
    Ok(EXIT_OK)
}

pub fn cmd_psnr(a: &Path, b: &Path) -> CmdResult {
    let (a, b) = (load_png(a)?.to_rgb(), load_png(b)?.to_rgb());
    println!("{:.4}", psnr(&a, &b)?);
    Ok(EXIT_OK)
}

pub fn cmd_gradcheck(args: &GradcheckArgs) -> CmdResult {
    let opts = GradcheckOptions { trials: args.trials, seed: args.seed, depth: args.depth, ..Default::default() };
    let table = gradcheck(&opts)?;
    print!("{}", table.render());
    Ok(if table.pass() { EXIT_OK } else { EXIT_RUNTIME })
}

pub fn cmd_energyscan(args: &EnergyscanArgs) -> CmdResult {
    let doc = load_svg(&args.svg)?;
    let image = load_png(&args.png)?.to_rgb();
    let shape = doc
        .shapes
        .get(args.shape)
        .ok_or_else(|| format!("the SVG has {} shapes, no index {}", doc.shapes.len(), args.shape))?;
    let grid = RasterGrid::covering(image.width(), image.height())?;
    let n = grid.size() as f64;
    let sx = image.width() as f64 / doc.width;
    let sy = image.height() as f64 / doc.height;
    let normalized = VectorShape {
        bezigon: shape.bezigon.map_points(|p| Point::new(p.x * sx / n, p.y * sy / n)),
        color: shape.color,
    };
    let padded = image.pad_to_square(grid.size() as usize);
    let side = grid.size() as usize;
    let mask = (0..grid.pixel_count())
        .map(|i| i % side < image.width() && i / side < image.height())
        .collect();
    let ctx = EnergyContext::for_shape(padded, Background::Solid(args.bg), &normalized.bezigon)?.with_mask(mask)?;
    let (a, b, steps) = args.range;
    let unit = if args.param.coord == 0 { sx } else { sy };
    let values: Vec<f64> = sweep_values(a, b, steps).into_iter().map(|v| v * unit / n).collect();
    let mut rows = energy_scan(&normalized, &ctx, args.param, &values, args.samples)?;
    let values_px = sweep_values(a, b, steps);
    for (r, v) in rows.iter_mut().zip(values_px) {
        r.value = v;
    }
    std::fs::write(&args.out, scan_csv(&rows, 1.0))?;
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Vectorize(a) => cmd_vectorize(a),
        Command::Rasterize(a) => cmd_rasterize(a),
        Command::Psnr { a, b } => cmd_psnr(a, b),
        Command::Gradcheck(a) => cmd_gradcheck(a),
        Command::Energyscan(a) => cmd_energyscan(a),
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let threads = std::env::var("BEZITRACE_THREADS").ok().and_then(|s| s.parse::<usize>().ok());
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}
