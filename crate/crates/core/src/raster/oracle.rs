//! Reference rasterizer: stratified point sampling with an even–odd test
//! against a finely flattened outline.

use super::{composite, Background, CoverageImage, RasterError, RasterGrid};
use crate::energy::VectorShape;
use crate::geometry::Bezigon;
use crate::imaging::RasterImage;

/// Fraction of the `n × n` sub-pixel sample centers of each pixel that fall
/// inside the curve. `n = 1` samples pixel centers only.
pub fn oracle_coverage(bezigon: &Bezigon, grid: RasterGrid, samples_per_axis: usize) -> CoverageImage {
    let n = samples_per_axis.max(1);
    let size = grid.size() as usize;
    let total = size * n;
    let inv_total = 1.0 / total as f64;
    let poly = bezigon.flatten(1e-4 / size as f64);
    let mut counts = vec![0u32; size * size];
    let mut xs: Vec<f64> = Vec::new();
    for row in 0..total {
        let y = (row as f64 + 0.5) * inv_total;
        xs.clear();
        for w in poly.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.y > y) != (b.y > y) {
                xs.push(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        xs.sort_by(f64::total_cmp);
        let py = row / n;
        for span in xs.chunks_exact(2) {
            // samples with center (i + 0.5) / total in [x0, x1)
            let first = ((span[0] * total as f64 - 0.5).ceil().max(0.0)) as usize;
            let last = ((span[1] * total as f64 - 0.5).ceil().max(0.0) as usize).min(total);
            for i in first..last {
                counts[py * size + i / n] += 1;
            }
        }
    }
    let norm = 1.0 / (n * n) as f64;
    CoverageImage {
        grid,
        alpha: counts.into_iter().map(|c| c as f64 * norm).collect(),
    }
}

pub fn oracle_rasterize(
    shape: &VectorShape,
    background: &Background,
    grid: RasterGrid,
    samples_per_axis: usize,
) -> Result<RasterImage, RasterError> {
    let alpha = oracle_coverage(&shape.bezigon, grid, samples_per_axis);
    Ok(composite(&alpha, shape.color, background))
}
