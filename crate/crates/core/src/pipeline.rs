//! End-to-end vectorization of a raster image: initialization (or a seed
//! document), independent per-shape optimization and a final guard that the
//! result never scores below its starting point.
//!
//! Each shape is optimized against the input with everything behind it,
//! rendered from the initial shapes, as its background image. Pixels covered
//! by shapes in front of it, and padding added to reach a dyadic square, are
//! masked out.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{
    total_energy, EnergyBreakdown, EnergyContext, EnergyError, EnergyWeights, VectorShape,
};
use crate::geometry::{Bezigon, GeometryError};
use crate::imaging::{psnr, ImagingError, RasterImage, Rgb, VectorDocument};
use crate::init::{InitParams, Initialization};
use crate::raster::{coverage, rasterize_all, Background, RasterError, RasterGrid};
use crate::solver::{optimize_bezigon, OptimizeReport, SolverOptions};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorizeConfig {
    pub weights: EnergyWeights,
    pub solver: SolverOptions,
    pub init: InitParams,
    /// Replaces the estimated background color.
    pub background: Option<Rgb>,
    pub normalize_by_l0: bool,
    /// Grid depth; `None` picks the smallest grid covering the image.
    pub depth: Option<u32>,
    /// Skip optimization and return the initial shapes.
    pub optimize: bool,
}

impl Default for VectorizeConfig {
    fn default() -> Self {
        VectorizeConfig {
            weights: EnergyWeights::default(),
            solver: SolverOptions::default(),
            init: InitParams::default(),
            background: None,
            normalize_by_l0: false,
            depth: None,
            optimize: true,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("seed shape {index} leaves the {width}x{height} canvas")]
    SeedOutside { index: usize, width: usize, height: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub index: usize,
    pub region: Option<usize>,
    pub hole: bool,
    pub segments: usize,
    pub initial_energy: EnergyBreakdown,
    pub final_energy: EnergyBreakdown,
    pub optimize: Option<OptimizeReport>,
    /// Set when the final guard put the initial shape back.
    pub reverted: bool,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct Vectorization {
    /// Result in pixel coordinates of the input image.
    pub document: VectorDocument,
    pub initial: VectorDocument,
    pub background: Rgb,
    pub psnr_initial: f64,
    pub psnr_final: f64,
    /// Side of the dyadic square the input was padded to.
    pub canvas: usize,
    pub shapes: Vec<ShapeReport>,
}

fn to_pixels(shapes: &[VectorShape], size: f64, w: usize, h: usize) -> VectorDocument {
    VectorDocument {
        width: w as f64,
        height: h as f64,
        shapes: shapes
            .iter()
            .map(|s| VectorShape { bezigon: s.bezigon.map_points(|p| p * size), color: s.color })
            .collect(),
    }
}

/// Paints `shapes` over `bg` on `grid` and scores the visible part against
/// `image`.
pub fn composite_psnr(
    shapes: &[VectorShape],
    bg: Rgb,
    grid: RasterGrid,
    image: &RasterImage,
) -> Result<f64, PipelineError> {
    let out = rasterize_all(shapes, &Background::Solid(bg), grid)?;
    Ok(psnr(&out.crop(image.width(), image.height()), &image.to_rgb())?)
}

fn covered(b: &Bezigon, grid: RasterGrid) -> Result<Vec<bool>, RasterError> {
    Ok(coverage(b, grid)?.alpha.iter().map(|a| a.abs() > 1e-6).collect())
}

/// Mean of valid pixels at least `dilate` pixels away from every shape.
fn uncovered_mean(
    image: &RasterImage,
    shapes: &[VectorShape],
    grid: RasterGrid,
    valid: &[bool],
) -> Result<Rgb, RasterError> {
    let n = grid.size() as usize;
    let mut hit = vec![false; n * n];
    for s in shapes {
        for (h, c) in hit.iter_mut().zip(covered(&s.bezigon, grid)?) {
            *h |= c;
        }
    }
    let dilate = 2i64;
    let mut sum = [0.0; 3];
    let mut count = 0usize;
    for y in 0..n {
        for x in 0..n {
            if !valid[y * n + x] {
                continue;
            }
            let near = (-dilate..=dilate).any(|dy| {
                (-dilate..=dilate).any(|dx| {
                    let (xx, yy) = (x as i64 + dx, y as i64 + dy);
                    xx >= 0 && yy >= 0 && xx < n as i64 && yy < n as i64 && hit[yy as usize * n + xx as usize]
                })
            });
            if !near {
                let p = image.rgb(x, y);
                for c in 0..3 {
                    sum[c] += p[c];
                }
                count += 1;
            }
        }
    }
    Ok(if count == 0 { [1.0; 3] } else { sum.map(|s| s / count as f64) })
}

struct Prepared {
    shapes: Vec<VectorShape>,
    regions: Vec<Option<usize>>,
    holes: Vec<bool>,
    background: Rgb,
}

fn prepare(
    image: &RasterImage,
    padded: &RasterImage,
    seed: Option<&VectorDocument>,
    config: &VectorizeConfig,
    grid: RasterGrid,
    valid: &[bool],
) -> Result<Prepared, PipelineError> {
    let size = grid.size() as f64;
    match seed {
        Some(doc) => {
            let sx = image.width() as f64 / doc.width.max(f64::MIN_POSITIVE);
            let sy = image.height() as f64 / doc.height.max(f64::MIN_POSITIVE);
            let mut shapes = Vec::with_capacity(doc.shapes.len());
            for (index, s) in doc.shapes.iter().enumerate() {
                let b = s.bezigon.map_points(|p| crate::geometry::Point::new(p.x * sx / size, p.y * sy / size));
                let (lo, hi) = b.control_bounds();
                if lo.x < 0.0 || lo.y < 0.0 || hi.x > 1.0 || hi.y > 1.0 {
                    return Err(PipelineError::SeedOutside {
                        index,
                        width: image.width(),
                        height: image.height(),
                    });
                }
                shapes.push(VectorShape::new(b.normalized_orientation(), s.color));
            }
            let background = match config.background {
                Some(c) => c,
                None => uncovered_mean(padded, &shapes, grid, valid)?,
            };
            let n = shapes.len();
            Ok(Prepared { shapes, regions: vec![None; n], holes: vec![false; n], background })
        }
        None => {
            let init = Initialization::run(image, &config.init);
            let shapes = init
                .shapes
                .iter()
                .map(|s| VectorShape::new(s.bezigon.map_points(|p| p * (1.0 / size)), s.color))
                .collect();
            Ok(Prepared {
                shapes,
                regions: init.shapes.iter().map(|s| Some(s.region)).collect(),
                holes: init.shapes.iter().map(|s| s.hole).collect(),
                background: config.background.unwrap_or(init.background_color),
            })
        }
    }
}

/// Vectorizes `image`, starting from `seed` (pixel coordinates of a canvas
/// that is rescaled onto the image) or from the built-in initialization.
pub fn vectorize(
    image: &RasterImage,
    seed: Option<&VectorDocument>,
    config: &VectorizeConfig,
) -> Result<Vectorization, PipelineError> {
    if !config.weights.is_valid() {
        return Err(PipelineError::Config("prior weights must be finite and non-negative".into()));
    }
    let (w, h) = (image.width(), image.height());
    let grid = match config.depth {
        None => RasterGrid::covering(w, h)?,
        Some(d) => {
            let g = RasterGrid::new(d)?;
            if (g.size() as usize) < w.max(h) {
                return Err(PipelineError::Config(format!("depth {d} is too small for a {w}x{h} image")));
            }
            g
        }
    };
    let n = grid.size() as usize;
    let image = image.to_rgb();
    let padded = image.pad_to_square(n);
    let valid: Vec<bool> = (0..n * n).map(|i| i % n < w && i / n < h).collect();
    let prep = prepare(&image, &padded, seed, config, grid, &valid)?;
    let initial = prep.shapes.clone();
    let psnr_initial = composite_psnr(&initial, prep.background, grid, &image)?;

    let covers: Vec<Vec<bool>> = initial
        .par_iter()
        .map(|s| covered(&s.bezigon, grid))
        .collect::<Result<_, _>>()?;

    let results: Vec<(VectorShape, ShapeReport)> = (0..initial.len())
        .into_par_iter()
        .map(|i| -> Result<_, PipelineError> {
            let start = Instant::now();
            let shape = &initial[i];
            let behind = rasterize_all(&initial[..i], &Background::Solid(prep.background), grid)?;
            let mask: Vec<bool> = (0..n * n)
                .map(|p| valid[p] && !covers[i + 1..].iter().any(|c| c[p]))
                .collect();
            let mut ctx = EnergyContext::for_shape(padded.clone(), Background::Image(behind), &shape.bezigon)?
                .with_mask(mask)?;
            ctx.normalize_by_l0 = config.normalize_by_l0;
            let initial_energy = total_energy(shape, &ctx, &config.weights)?;
            let (out, report) = if config.optimize {
                let (s, r) = optimize_bezigon(shape, &ctx, &config.weights, &config.solver)?;
                (s, Some(r))
            } else {
                (shape.clone(), None)
            };
            let final_energy = total_energy(&out, &ctx, &config.weights)?;
            let report = ShapeReport {
                index: i,
                region: prep.regions[i],
                hole: prep.holes[i],
                segments: out.bezigon.num_segments(),
                initial_energy,
                final_energy,
                optimize: report,
                reverted: false,
                seconds: start.elapsed().as_secs_f64(),
            };
            Ok((out, report))
        })
        .collect::<Result<_, _>>()?;
    let (mut shapes, mut reports): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let mut psnr_final = composite_psnr(&shapes, prep.background, grid, &image)?;
    if psnr_final < psnr_initial {
        for i in 0..shapes.len() {
            let mut trial = shapes.clone();
            trial[i] = initial[i].clone();
            let p = composite_psnr(&trial, prep.background, grid, &image)?;
            if p > psnr_final {
                shapes = trial;
                psnr_final = p;
                reports[i].reverted = true;
                reports[i].final_energy = reports[i].initial_energy;
                reports[i].segments = shapes[i].bezigon.num_segments();
            }
        }
        if psnr_final < psnr_initial {
            shapes = initial.clone();
            psnr_final = psnr_initial;
            for r in &mut reports {
                r.reverted = true;
                r.final_energy = r.initial_energy;
            }
        }
    }
    Ok(Vectorization {
        document: to_pixels(&shapes, n as f64, w, h),
        initial: to_pixels(&initial, n as f64, w, h),
        background: prep.background,
        psnr_initial,
        psnr_final,
        canvas: n,
        shapes: reports,
    })
}
