// A single overlapped piece solve: one joint pushed off a circle is pulled
// back while the piece's outer anchors stay put.

use std::error::Error;

use bezitrace::energy::{EnergyContext, EnergyWeights, VectorShape};
use bezitrace::geometry::{shapes, Point};
use bezitrace::raster::{rasterize, Background, RasterGrid};
use bezitrace::solver::{optimize_piece, PieceSelector, SolverOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = RasterGrid::new(6)?;
    let px = 1.0 / grid.size() as f64;
    let center = Point::new(0.5, 0.5);
    let truth = VectorShape::new(shapes::circle(center, 0.3, 4), [0.1, 0.2, 0.7]);
    let bg = Background::Solid([1.0; 3]);
    let ctx = EnergyContext::for_shape(rasterize(&truth, &bg, grid)?, bg, &truth.bezigon)?;

    let mut start = truth.clone();
    let joint = start.bezigon.points()[3];
    start.bezigon.set_point(3, joint + (joint - center) * (2.0 * px / 0.3));

    let piece = PieceSelector { j: 0 };
    let (out, outcome) = optimize_piece(&start, &ctx, &EnergyWeights::default(), piece, &SolverOptions::default())?;
    let off = |p: Point| ((p - center).norm() - 0.3).abs() / px;
    println!("free points {:?}, anchors {:?}", piece.free_points(4), piece.anchors(4));
    println!(
        "energy {:.4} -> {:.4} in {} iterations; joint off the circle {:.3} px -> {:.3} px",
        outcome.energy_before,
        outcome.energy_after,
        outcome.iterations,
        off(start.bezigon.points()[3]),
        off(out.bezigon.points()[3])
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
