//! Analytic Haar-wavelet rasterization of bezigons, its exact gradient with
//! respect to the control points, and a supersampling reference rasterizer.

mod coeffs;
mod gradient;
mod oracle;
mod roots;
mod splits;

pub use coeffs::{reconstruct, wavelet_coefficients, CoefficientSet, HaarIndex, HaarKind};
pub use gradient::{
    coverage_gradient, CoverageGradient, DerivAccumulator, NEAR_TANGENT_DIST, TANGENT_EPS,
};
pub use oracle::{oracle_coverage, oracle_rasterize};
pub use roots::{cubic_roots, IdenticallyZero, Roots};
pub use splits::monotone_splits;

use crate::energy::VectorShape;
use crate::geometry::Bezigon;
use crate::imaging::{RasterImage, Rgb};

/// Largest supported dyadic depth.
pub const MAX_DEPTH: u32 = 14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RasterError {
    #[error("grid depth {0} exceeds the supported maximum of {MAX_DEPTH}")]
    DepthTooLarge(u32),
    #[error("curve leaves the unit square: bounds ({0:.6}, {1:.6})-({2:.6}, {3:.6})")]
    Domain(f64, f64, f64, f64),
    #[error("coefficients built for depth {got}, grid has depth {expected}")]
    GridMismatch { expected: u32, got: u32 },
    #[error("weight image has {got} pixels, grid has {expected}")]
    WeightsLength { expected: usize, got: usize },
    #[error("image is {got}x{got}, grid needs {expected}x{expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// A `2^d × 2^d` pixel grid over the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RasterGrid {
    depth: u32,
}

impl RasterGrid {
    pub fn new(depth: u32) -> Result<Self, RasterError> {
        if depth > MAX_DEPTH {
            return Err(RasterError::DepthTooLarge(depth));
        }
        Ok(RasterGrid { depth })
    }

    /// Smallest grid covering a `width × height` image.
    pub fn covering(width: usize, height: usize) -> Result<Self, RasterError> {
        let m = width.max(height).max(1);
        let d = usize::BITS - (m - 1).leading_zeros();
        RasterGrid::new(if m == 1 { 0 } else { d })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn size(&self) -> u32 {
        1 << self.depth
    }

    pub fn pixel_count(&self) -> usize {
        1usize << (2 * self.depth)
    }
}

/// Signed per-pixel coverage, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageImage {
    pub grid: RasterGrid,
    pub alpha: Vec<f64>,
}

impl CoverageImage {
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.alpha[y * self.grid.size() as usize + x]
    }
}

/// What shows through outside the shape.
#[derive(Clone, Debug)]
pub enum Background {
    Solid(Rgb),
    Image(RasterImage),
}

impl Background {
    #[inline]
    pub fn at(&self, x: usize, y: usize) -> Rgb {
        match self {
            Background::Solid(c) => *c,
            Background::Image(img) => img.rgb(x, y),
        }
    }
}

/// Fails if any part of the curve leaves `[0,1]²`.
pub(crate) fn check_domain(b: &Bezigon) -> Result<(), RasterError> {
    let (lo, hi) = b.control_bounds();
    let inside = |lo: f64, hi: f64| lo >= 0.0 && hi <= 1.0;
    if inside(lo.x, hi.x) && inside(lo.y, hi.y) {
        return Ok(());
    }
    // Control polygon pokes out; check the curve itself.
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for seg in b.segments() {
        let c = seg.power_coeffs();
        let mut ts = vec![0.0, 1.0];
        for axis in 0..2 {
            let g = |p: crate::geometry::Point| if axis == 0 { p.x } else { p.y };
            let deriv = [g(c[1]), 2.0 * g(c[2]), 3.0 * g(c[3]), 0.0];
            if let Ok(r) = cubic_roots(deriv, 0.0, 1.0) {
                ts.extend_from_slice(r.as_slice());
            }
        }
        for t in ts {
            let p = seg.eval(t);
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
    }
    const SLACK: f64 = 1e-12;
    if x0 < -SLACK || y0 < -SLACK || x1 > 1.0 + SLACK || y1 > 1.0 + SLACK {
        return Err(RasterError::Domain(x0, y0, x1, y1));
    }
    Ok(())
}

/// Three-point Gauss–Legendre over `[a, b]`: exact for polynomials up to
/// degree 5, which covers every integrand on a cell-local piece.
#[inline]
pub(crate) fn gl3(a: f64, b: f64, mut f: impl FnMut(f64, f64)) {
    const X: f64 = 0.774_596_669_241_483_4;
    const W0: f64 = 8.0 / 9.0;
    const W1: f64 = 5.0 / 9.0;
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    f(c - h * X, W1 * h);
    f(c, W0 * h);
    f(c + h * X, W1 * h);
}

/// Box-filtered coverage of `bezigon` on `grid`.
pub fn coverage(bezigon: &Bezigon, grid: RasterGrid) -> Result<CoverageImage, RasterError> {
    reconstruct(&wavelet_coefficients(bezigon, grid)?, grid)
}

/// Composites the shape's uniform color over `background` with alpha-linear
/// blending, `alpha` clamped to `[0, 1]`.
pub fn composite(alpha: &CoverageImage, color: Rgb, background: &Background) -> RasterImage {
    let n = alpha.grid.size() as usize;
    let mut img = RasterImage::new(n, n, 3);
    for y in 0..n {
        for x in 0..n {
            let a = alpha.at(x, y).clamp(0.0, 1.0);
            let bg = background.at(x, y);
            let px = [
                a * color[0] + (1.0 - a) * bg[0],
                a * color[1] + (1.0 - a) * bg[1],
                a * color[2] + (1.0 - a) * bg[2],
            ];
            img.set_pixel(x, y, &px);
        }
    }
    img
}

/// Wavelet rasterization of one shape over a background.
pub fn rasterize(
    shape: &VectorShape,
    background: &Background,
    grid: RasterGrid,
) -> Result<RasterImage, RasterError> {
    if let Background::Image(img) = background {
        let n = grid.size() as usize;
        if img.width() != n || img.height() != n {
            return Err(RasterError::SizeMismatch { expected: n, got: img.width() });
        }
    }
    let alpha = coverage(&shape.bezigon, grid)?;
    Ok(composite(&alpha, shape.color, background))
}

/// Paints shapes back to front over a background.
pub fn rasterize_all(
    shapes: &[VectorShape],
    background: &Background,
    grid: RasterGrid,
) -> Result<RasterImage, RasterError> {
    let n = grid.size() as usize;
    let mut canvas = Background::Image(match background {
        Background::Solid(c) => RasterImage::filled(n, n, *c),
        Background::Image(img) => img.to_rgb(),
    });
    for shape in shapes {
        canvas = Background::Image(rasterize(shape, &canvas, grid)?);
    }
    Ok(match canvas {
        Background::Image(img) => img,
        Background::Solid(_) => unreachable!(),
    })
}
