// Wavelet coverage against supersampled point sampling. The two converge
// as the sample count grows; a single sample per pixel is a hard edge.

use std::error::Error;

use bezitrace::geometry::{shapes, Point};
use bezitrace::raster::{coverage, oracle_coverage, RasterGrid};
use rand::SeedableRng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let grid = RasterGrid::new(5)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let blob = shapes::random_blob(&mut rng, Point::new(0.5, 0.5), 0.3, 6);
    let exact = coverage(&blob, grid)?;
    for n in [1, 4, 16, 64] {
        let sampled = oracle_coverage(&blob, grid, n);
        let diffs: Vec<f64> = exact.alpha.iter().zip(&sampled.alpha).map(|(a, b)| (a - b).abs()).collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let max = diffs.iter().cloned().fold(0.0, f64::max);
        println!("{n:>3} samples/axis: mean |diff| {mean:.2e}  max {max:.2e}");
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
