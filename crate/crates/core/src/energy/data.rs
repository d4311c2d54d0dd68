use super::{EnergyContext, EnergyError, VectorShape};
use crate::geometry::Bezigon;
use crate::imaging::{RasterImage, Rgb};
use crate::raster::{coverage, coverage_gradient, Background, CoverageImage, RasterGrid};

/// Geometric and color parts of `∂E_data`.
#[derive(Clone, Debug, PartialEq)]
pub struct DataGradient {
    pub geometry: Vec<f64>,
    pub color: Rgb,
    pub degenerate_roots: usize,
    pub flagged: Vec<bool>,
}

fn residuals<'a>(
    shape: &'a VectorShape,
    ctx: &'a EnergyContext,
    alpha: &'a CoverageImage,
) -> impl Iterator<Item = (usize, f64, Rgb, Rgb)> + 'a {
    let n = ctx.grid.size() as usize;
    (0..n * n).filter(move |&i| ctx.mask[i]).map(move |i| {
        let (x, y) = (i % n, i / n);
        let a = alpha.alpha[i];
        let ac = a.clamp(0.0, 1.0);
        let bg = ctx.background.at(x, y);
        let input = ctx.input.rgb(x, y);
        let mut r = [0.0; 3];
        for c in 0..3 {
            r[c] = ac * shape.color[c] + (1.0 - ac) * bg[c] - input[c];
        }
        (i, a, r, bg)
    })
}

/// `Σ_{masked pixels} ‖R − I‖²` over all channels, divided by `l0` when the
/// context asks for it.
pub fn data_energy(shape: &VectorShape, ctx: &EnergyContext) -> Result<f64, EnergyError> {
    let alpha = coverage(&shape.bezigon, ctx.grid)?;
    Ok(data_energy_with_coverage(shape, ctx, &alpha))
}

/// [`data_energy`] with the coverage supplied by the caller, e.g. from a
/// sampling rasterizer.
pub fn data_energy_with_coverage(shape: &VectorShape, ctx: &EnergyContext, alpha: &CoverageImage) -> f64 {
    let sum: f64 = residuals(shape, ctx, alpha)
        .map(|(_, _, r, _)| r[0] * r[0] + r[1] * r[1] + r[2] * r[2])
        .sum();
    ctx.scale() * sum
}

/// Analytic gradient of [`data_energy`] with respect to the control points
/// and the fill color.
pub fn data_gradient(shape: &VectorShape, ctx: &EnergyContext) -> Result<DataGradient, EnergyError> {
    let alpha = coverage(&shape.bezigon, ctx.grid)?;
    let k = 2.0 * ctx.scale();
    let mut weights = vec![0.0; ctx.grid.pixel_count()];
    let mut color = [0.0; 3];
    for (i, a, r, bg) in residuals(shape, ctx, &alpha) {
        let ac = a.clamp(0.0, 1.0);
        for c in 0..3 {
            color[c] += k * ac * r[c];
        }
        if (0.0..=1.0).contains(&a) {
            weights[i] = k * (0..3).map(|c| r[c] * (shape.color[c] - bg[c])).sum::<f64>();
        }
    }
    let g = coverage_gradient(&shape.bezigon, ctx.grid, &weights)?;
    Ok(DataGradient {
        geometry: g.grad,
        color,
        degenerate_roots: g.degenerate_roots,
        flagged: g.flagged,
    })
}

/// Mean input color over pixels with coverage above 0.9. `None` when no
/// pixel qualifies.
pub fn mean_color_inside(input: &RasterImage, bezigon: &Bezigon, grid: RasterGrid) -> Option<Rgb> {
    let alpha = coverage(bezigon, grid).ok()?;
    let n = grid.size() as usize;
    let mut sum = [0.0; 3];
    let mut count = 0usize;
    for (i, &a) in alpha.alpha.iter().enumerate() {
        if a > 0.9 {
            let p = input.rgb(i % n, i / n);
            for c in 0..3 {
                sum[c] += p[c];
            }
            count += 1;
        }
    }
    (count > 0).then(|| sum.map(|s| s / count as f64))
}

/// Mean color of `mask`ed pixels lying outside the shape's filled region
/// grown by `dilate` pixels. Falls back to white when nothing remains.
pub fn estimate_background(
    input: &RasterImage,
    bezigon: &Bezigon,
    grid: RasterGrid,
    mask: &[bool],
    dilate: usize,
) -> Background {
    let n = grid.size() as usize;
    let Ok(alpha) = coverage(bezigon, grid) else {
        return Background::Solid([1.0; 3]);
    };
    let filled: Vec<bool> = alpha.alpha.iter().map(|&a| a > 1e-6).collect();
    // Chebyshev dilation, separable in x then y.
    let mut row = vec![false; n * n];
    for y in 0..n {
        for x in 0..n {
            let lo = x.saturating_sub(dilate);
            let hi = (x + dilate).min(n - 1);
            row[y * n + x] = (lo..=hi).any(|xx| filled[y * n + xx]);
        }
    }
    let mut sum = [0.0; 3];
    let mut count = 0usize;
    for y in 0..n {
        let lo = y.saturating_sub(dilate);
        let hi = (y + dilate).min(n - 1);
        for x in 0..n {
            let grown = (lo..=hi).any(|yy| row[yy * n + x]);
            if !grown && mask[y * n + x] {
                let p = input.rgb(x, y);
                for c in 0..3 {
                    sum[c] += p[c];
                }
                count += 1;
            }
        }
    }
    if count == 0 {
        return Background::Solid([1.0; 3]);
    }
    Background::Solid(sum.map(|s| s / count as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shapes, Point};
    use crate::raster::rasterize;

    fn setup(d: u32) -> (VectorShape, Background, RasterGrid) {
        let grid = RasterGrid::new(d).unwrap();
        let b = shapes::ellipse(Point::new(0.5, 0.45), 0.3, 0.22, 4);
        (VectorShape::new(b, [0.9, 0.2, 0.1]), Background::Solid([0.1, 0.3, 0.8]), grid)
    }

    #[test]
    fn self_render_has_zero_energy_and_gradient() {
        let (shape, bg, grid) = setup(5);
        let input = rasterize(&shape, &bg, grid).unwrap();
        let ctx = EnergyContext::new(input, bg, 1.7).unwrap();
        assert!(data_energy(&shape, &ctx).unwrap() < 1e-24);
        let g = data_gradient(&shape, &ctx).unwrap();
        assert!(g.geometry.iter().all(|v| v.abs() < 1e-9));
        assert!(g.color.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn single_pixel_offset() {
        let (shape, bg, grid) = setup(3);
        let mut input = rasterize(&shape, &bg, grid).unwrap();
        let mut p = input.rgb(0, 0);
        p[1] += 0.1;
        input.set_pixel(0, 0, &p);
        let ctx = EnergyContext::new(input, bg, 2.0)
            .unwrap()
            .with_length_unit(1.0)
            .unwrap()
            .with_l0();
        assert!((data_energy(&shape, &ctx).unwrap() - 0.005).abs() < 1e-12);
    }

    #[test]
    fn full_coverage_color_gradient() {
        let _grid = RasterGrid::new(3).unwrap();
        let b = shapes::rect(Point::new(0.0, 0.0), Point::new(1.0, 1.0));
        let shape = VectorShape::new(b, [0.5; 3]);
        let mut input = RasterImage::filled(8, 8, [0.25, 0.5, 0.75]);
        input.set_pixel(3, 3, &[0.0; 3]);
        let ctx = EnergyContext::new(input.clone(), Background::Solid([0.0; 3]), 3.0)
            .unwrap()
            .with_length_unit(1.0)
            .unwrap()
            .with_l0();
        let g = data_gradient(&shape, &ctx).unwrap();
        for c in 0..3 {
            let sum: f64 = (0..64).map(|i| 0.5 - input.rgb(i % 8, i / 8)[c]).sum();
            assert!((g.color[c] - 2.0 / 3.0 * sum).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let (shape, bg, grid) = setup(4);
        let target = VectorShape::new(
            shape.bezigon.map_points(|p| Point::new(p.x * 0.97 + 0.02, p.y * 1.02)),
            [0.7, 0.3, 0.2],
        );
        let input = rasterize(&target, &bg, grid).unwrap();
        let ctx = EnergyContext::new(input, bg, 1.3).unwrap().with_l0();
        let g = data_gradient(&shape, &ctx).unwrap();
        let params = shape.bezigon.params();
        let h = 1e-6;
        for k in 0..params.len() {
            let eval = |d: f64| {
                let mut p = params.clone();
                p[k] += d;
                let s = VectorShape::new(Bezigon::from_params(&p).unwrap(), shape.color);
                data_energy(&s, &ctx).unwrap()
            };
            let fd = (eval(h) - eval(-h)) / (2.0 * h);
            assert!((fd - g.geometry[k]).abs() <= 1e-4 * fd.abs().max(1.0), "k={k} {fd} {}", g.geometry[k]);
        }
        for c in 0..3 {
            let eval = |d: f64| {
                let mut col = shape.color;
                col[c] += d;
                data_energy(&VectorShape { bezigon: shape.bezigon.clone(), color: col }, &ctx).unwrap()
            };
            let fd = (eval(h) - eval(-h)) / (2.0 * h);
            assert!((fd - g.color[c]).abs() < 1e-5 * fd.abs().max(1.0));
        }
    }
}
