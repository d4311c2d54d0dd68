// End to end: render a small clipart scene, vectorize it and compare the
// initialization with the optimized result.

use std::error::Error;

use bezitrace::cli::render_document;
use bezitrace::energy::VectorShape;
use bezitrace::geometry::{shapes, Point};
use bezitrace::imaging::{write_svg, VectorDocument};
use bezitrace::pipeline::{vectorize, VectorizeConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = Point::new;
    let mut doc = VectorDocument::new(96.0, 80.0);
    doc.shapes.push(VectorShape::new(shapes::ellipse(p(40.0, 40.0), 28.0, 22.0, 4), [0.95, 0.75, 0.2]));
    doc.shapes.push(VectorShape::new(shapes::star(p(62.0, 44.0), 20.0, 9.0, 5), [0.7, 0.1, 0.2]));
    let img = render_document(&doc, 1.0, [1.0; 3], None).map_err(|e| e.to_string())?;

    let v = vectorize(&img, None, &VectorizeConfig::default())?;
    println!(
        "{} shapes on a {} px canvas, psnr {:.2} -> {:.2} dB",
        v.document.shapes.len(),
        v.canvas,
        v.psnr_initial,
        v.psnr_final
    );
    for s in &v.shapes {
        println!(
            "  shape {}: {} segments, energy {:.3} -> {:.3}{}",
            s.index,
            s.segments,
            s.initial_energy.total,
            s.final_energy.total,
            if s.reverted { " (reverted)" } else { "" }
        );
    }
    let svg = write_svg(&v.document);
    println!("{} bytes of SVG", svg.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
