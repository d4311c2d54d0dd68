// Data energy as one anchor slides across pixel boundaries. The wavelet
// column changes smoothly; the one-sample column jumps whenever a pixel
// center changes sides.

use std::error::Error;

use bezitrace::cli::{energy_scan, max_jump, median_jump, scan_csv, sweep_values, ScanParam};
use bezitrace::energy::{EnergyContext, VectorShape};
use bezitrace::geometry::{shapes, Point};
use bezitrace::raster::{rasterize, Background, RasterGrid};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = RasterGrid::new(4)?;
    let b = shapes::circle(Point::new(0.5, 0.5), 0.3, 4);
    let shape = VectorShape::new(b.clone(), [0.1, 0.2, 0.9]);
    let bg = Background::Solid([1.0; 3]);
    let ctx = EnergyContext::for_shape(rasterize(&shape, &bg, grid)?, bg, &b)?;

    let param = ScanParam { segment: 0, point: 0, coord: 0 };
    let rows = energy_scan(&shape, &ctx, param, &sweep_values(0.7, 0.9, 40), 1)?;
    let csv = scan_csv(&rows, grid.size() as f64);
    for line in csv.lines().take(6) {
        println!("{line}");
    }
    let w: Vec<f64> = rows.iter().map(|r| r.wavelet).collect();
    let o: Vec<f64> = rows.iter().map(|r| r.oracle).collect();
    println!("wavelet max jump {:.3e}, median {:.3e}", max_jump(&w), median_jump(&w));
    println!("sampled max jump {:.3e}, median {:.3e}", max_jump(&o), median_jump(&o));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
