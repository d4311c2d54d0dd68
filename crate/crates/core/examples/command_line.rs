// Driving the command-line interface in-process: rasterize an SVG, trace
// it back and score the result.

use std::error::Error;

use bezitrace::cli::{run, EXIT_OK};
use bezitrace::energy::VectorShape;
use bezitrace::geometry::{shapes, Point};
use bezitrace::imaging::{save_svg, VectorDocument};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();

    let mut doc = VectorDocument::new(64.0, 64.0);
    doc.shapes.push(VectorShape::new(shapes::circle(Point::new(32.0, 32.0), 20.0, 4), [0.2, 0.3, 0.9]));
    save_svg(&doc, path("in.svg"))?;

    let steps: [Vec<String>; 4] = [
        vec!["rasterize".into(), path("in.svg"), "--out".into(), path("in.png")],
        vec!["vectorize".into(), path("in.png"), "--out".into(), path("out.svg"), "--report".into(), path("report.json")],
        vec!["rasterize".into(), path("out.svg"), "--out".into(), path("out.png")],
        vec!["psnr".into(), path("in.png"), path("out.png")],
    ];
    for step in steps {
        let args = std::iter::once("bezitrace".to_string()).chain(step.iter().cloned());
        let code = run(args);
        if code != EXIT_OK {
            return Err(format!("`{}` exited with {code}", step.join(" ")).into());
        }
    }
    let report = std::fs::read_to_string(path("report.json"))?;
    println!("report: {} bytes of JSON", report.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
