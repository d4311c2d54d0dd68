// SVG and PNG input and output, and PSNR between images.

use std::error::Error;

use bezitrace::energy::VectorShape;
use bezitrace::geometry::{shapes, Point};
use bezitrace::imaging::{load_png, load_svg, parse_svg, psnr, save_png, save_svg, RasterImage, VectorDocument};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;

    let mut doc = VectorDocument::new(120.0, 90.0);
    doc.shapes.push(VectorShape::new(shapes::circle(Point::new(60.0, 45.0), 30.0, 4), [0.25, 0.5, 0.75]));
    let svg = dir.path().join("circle.svg");
    save_svg(&doc, &svg)?;
    let back = load_svg(&svg)?;
    let drift = doc.shapes[0]
        .bezigon
        .points()
        .iter()
        .zip(back.shapes[0].bezigon.points())
        .map(|(a, b)| a.distance(*b))
        .fold(0.0, f64::max);
    println!("svg: {} shape(s), max control-point drift {drift:.1e} px", back.shapes.len());

    let hand = parse_svg(
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="10" height="10">
             <path d="M1 1 H9 V9 H1 Z" fill="#ff8000"/></svg>"##,
    )?;
    println!("hand-written svg: {} segments", hand.shapes[0].bezigon.num_segments());

    let a = RasterImage::filled(8, 8, [0.2, 0.4, 0.6]);
    let png = dir.path().join("flat.png");
    save_png(&a, &png)?;
    let loaded = load_png(&png)?;
    let b = RasterImage::filled(8, 8, [0.3, 0.5, 0.7]);
    println!("png reload psnr {:.1} dB, offset by 0.1: {:.4} dB", psnr(&a, &loaded)?, psnr(&a, &b)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
