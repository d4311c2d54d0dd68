// Exact anti-aliased coverage of a few stock shapes, written out as PNG.

use std::error::Error;

use bezitrace::energy::VectorShape;
use bezitrace::geometry::{shapes, Point};
use bezitrace::imaging::save_png;
use bezitrace::raster::{coverage, rasterize_all, Background, RasterGrid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = RasterGrid::new(6)?;
    let p = Point::new;
    let scene = [
        VectorShape::new(shapes::circle(p(0.35, 0.4), 0.25, 4), [0.9, 0.3, 0.1]),
        VectorShape::new(shapes::star(p(0.62, 0.6), 0.3, 0.14, 5), [0.1, 0.4, 0.8]),
        VectorShape::new(shapes::rounded_rect(p(0.1, 0.7), p(0.45, 0.92), 0.05), [0.2, 0.7, 0.3]),
    ];

    // The coverage of a closed curve sums to its area in pixels.
    for s in &scene {
        let alpha = coverage(&s.bezigon, grid)?;
        let sum: f64 = alpha.alpha.iter().sum();
        let area = s.bezigon.signed_area() * grid.pixel_count() as f64;
        println!("coverage sum {sum:9.4}  area {area:9.4}");
        assert!((sum - area).abs() < 1e-9);
    }

    let img = rasterize_all(&scene, &Background::Solid([1.0; 3]), grid)?;
    let dir = tempfile::tempdir()?;
    let out = dir.path().join("scene.png");
    save_png(&img, &out)?;
    println!("wrote {}x{} image to {}", img.width(), img.height(), out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
