// Full bezigon optimization from a jittered start: piece sweeps, then a
// joint pass over every control point and the fill color.

use std::error::Error;

use bezitrace::energy::{EnergyContext, EnergyWeights, VectorShape};
use bezitrace::geometry::{shapes, Bezigon, Point};
use bezitrace::imaging::psnr;
use bezitrace::raster::{rasterize, Background, RasterGrid};
use bezitrace::solver::{optimize_bezigon, SolverOptions};
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = RasterGrid::new(6)?;
    let px = 1.0 / grid.size() as f64;
    let truth = shapes::rounded_rect(Point::new(0.2, 0.25), Point::new(0.8, 0.75), 0.12);
    let bg = Background::Solid([1.0; 3]);
    let target = rasterize(&VectorShape::new(truth.clone(), [0.8, 0.4, 0.1]), &bg, grid)?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let noise = Normal::new(0.0, px)?;
    let jittered: Vec<Point> = truth
        .points()
        .iter()
        .map(|p| {
            let dx = noise.sample(&mut rng);
            let dy = noise.sample(&mut rng);
            Point::new(p.x + dx, p.y + dy)
        })
        .collect();
    let start = VectorShape::new(Bezigon::new(jittered)?, [0.5; 3]);
    let ctx = EnergyContext::for_shape(target.clone(), bg.clone(), &start.bezigon)?;

    let (out, report) = optimize_bezigon(&start, &ctx, &EnergyWeights::default(), &SolverOptions::default())?;
    for (k, e) in report.trace.iter().enumerate() {
        println!("step {k}: total {:.5}  data {:.5}", e.total, e.e_data);
    }
    println!(
        "psnr {:.2} -> {:.2} dB, color {:?}, monotone {}",
        psnr(&rasterize(&start, &bg, grid)?, &target)?,
        psnr(&rasterize(&out, &bg, grid)?, &target)?,
        out.color.map(|c| (c * 1000.0).round() / 1000.0),
        report.is_monotone()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
