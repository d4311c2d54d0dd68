// Initialization on its own: flat-color regions, traced boundaries and the
// cubic fits that seed the optimizer.

use std::error::Error;

use bezitrace::energy::VectorShape;
use bezitrace::geometry::{shapes, Point};
use bezitrace::init::{InitParams, Initialization};
use bezitrace::raster::{rasterize_all, Background, RasterGrid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = RasterGrid::new(6)?;
    let p = Point::new;
    let scene = [
        VectorShape::new(shapes::circle(p(0.5, 0.5), 0.38, 4), [0.2, 0.5, 0.2]),
        VectorShape::new(shapes::circle(p(0.5, 0.5), 0.15, 4), [1.0; 3]),
        VectorShape::new(shapes::star(p(0.25, 0.25), 0.18, 0.08, 5), [0.9, 0.6, 0.1]),
    ];
    let img = rasterize_all(&scene, &Background::Solid([1.0; 3]), grid)?;

    let init = Initialization::run(&img, &InitParams::default());
    println!("{} regions, background color {:?}", init.labels.count, init.background_color);
    for s in &init.shapes {
        println!(
            "region {} {}: {} segments, area {:.1} px, color {:?}",
            s.region,
            if s.hole { "hole " } else { "shape" },
            s.bezigon.num_segments(),
            s.area,
            s.color.map(|c| (c * 100.0).round() / 100.0)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
