//! Analytic derivative of `Σ_pixels w · alpha` with respect to every control
//! point coordinate.
//!
//! `alpha` is linear in the Haar coefficients, so the weighted sum collapses
//! to `W00·c(0,0) + Σ W01·c(0,1) + W10·c(1,0) + W11·c(1,1)` where the `W` are
//! the Haar analysis of the weight image. Substituting the coefficient line
//! integrals, every piece of curve inside one finest cell contributes
//!
//! ```text
//! ∫ A(X) Y' + B(Y) X' dt
//! A(x) = W00·x + Σ_s 2^s σx (W10 + σy W11) (x − ex)
//! B(y) = −Σ_s 2^s σy W01 (y − ey)
//! ```
//!
//! `A` is continuous in x but jumps across horizontal grid lines (the `φ(Y)`
//! and `ψ(Y)` factors); `B` is continuous in y and jumps across vertical
//! lines. Differentiating therefore gives smooth integrals per piece plus
//! sifted delta terms at the roots of `X(t) = m/2^d` and `Y(t) = m/2^d`,
//! each weighted by `sgn(X')` or `sgn(Y')` and the jump of `B` or `A`.

use super::coeffs::cell_key;
use super::splits::{breakpoints, pieces, BreakKind, Breakpoint, Piece};
use super::{check_domain, gl3, RasterError, RasterGrid};
use crate::geometry::{bernstein, bernstein_deriv, BezierSegment, Bezigon};

/// Below this `|X'|` or `|Y'|` a crossing counts as tangent and is skipped.
pub const TANGENT_EPS: f64 = 1e-9;

/// Extrema closer than this to a grid line make the segment's coordinates
/// unreliable for finite-difference comparison.
pub const NEAR_TANGENT_DIST: f64 = 2e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageGradient {
    /// `∂/∂x_i, ∂/∂y_i` for each control point, interleaved.
    pub grad: Vec<f64>,
    /// Crossings skipped because the curve was tangent to the line.
    pub degenerate_roots: usize,
    /// Coordinates whose segment has an extremum within
    /// [`NEAR_TANGENT_DIST`] of a grid line.
    pub flagged: Vec<bool>,
}

impl CoverageGradient {
    pub fn flagged_count(&self) -> usize {
        self.flagged.iter().filter(|&&f| f).count()
    }
}

/// Haar analysis of the weight image, `[W01, W10, W11]` per cell and scale.
#[derive(Clone, Debug)]
pub struct DerivAccumulator {
    grid: RasterGrid,
    w00: f64,
    levels: Vec<Vec<[f64; 3]>>,
}

impl DerivAccumulator {
    pub fn new(grid: RasterGrid, weights: &[f64]) -> Result<Self, RasterError> {
        let d = grid.depth();
        if weights.len() != grid.pixel_count() {
            return Err(RasterError::WeightsLength {
                expected: grid.pixel_count(),
                got: weights.len(),
            });
        }
        let mut sums = weights.to_vec();
        let mut levels = vec![Vec::new(); d as usize];
        for s in (0..d).rev() {
            let n = 1usize << s;
            let fine = 2 * n;
            let mut coarse = vec![0.0; n * n];
            let mut lvl = vec![[0.0; 3]; n * n];
            let two_s = n as f64;
            for ky in 0..n {
                for kx in 0..n {
                    let i = 2 * ky * fine + 2 * kx;
                    let (tl, tr) = (sums[i], sums[i + 1]);
                    let (bl, br) = (sums[i + fine], sums[i + fine + 1]);
                    coarse[ky * n + kx] = tl + tr + bl + br;
                    lvl[ky * n + kx] = [
                        two_s * (tl + tr - bl - br),
                        two_s * (tl + bl - tr - br),
                        two_s * (tl + br - tr - bl),
                    ];
                }
            }
            levels[s as usize] = lvl;
            sums = coarse;
        }
        Ok(DerivAccumulator { grid, w00: sums[0], levels })
    }

    fn in_grid(&self, cx: i64, cy: i64) -> bool {
        let n = self.grid.size() as i64;
        (0..n).contains(&cx) && (0..n).contains(&cy)
    }

    /// `(slope, intercept)` of `A` on finest cell `(cx, cy)`.
    fn a_line(&self, cx: i64, cy: i64) -> (f64, f64) {
        if !self.in_grid(cx, cy) {
            return (0.0, 0.0);
        }
        let d = self.grid.depth();
        let (cx, cy) = (cx as u32, cy as u32);
        let (mut k, mut b) = (self.w00, 0.0);
        for s in 0..d {
            let shift = d - s;
            let (kx, ky) = (cx >> shift, cy >> shift);
            let hx = (cx >> (shift - 1)) & 1;
            let hy = (cy >> (shift - 1)) & 1;
            let w = self.levels[s as usize][((ky as usize) << s) + kx as usize];
            let sy = if hy == 0 { 1.0 } else { -1.0 };
            let two_s = (1u64 << s) as f64;
            let mut g = two_s * (w[1] + sy * w[2]);
            if hx == 1 {
                g = -g;
            }
            k += g;
            b -= g * (kx + hx) as f64 / two_s;
        }
        (k, b)
    }

    /// `(slope, intercept)` of `B` on finest cell `(cx, cy)`.
    fn b_line(&self, cx: i64, cy: i64) -> (f64, f64) {
        if !self.in_grid(cx, cy) {
            return (0.0, 0.0);
        }
        let d = self.grid.depth();
        let (cx, cy) = (cx as u32, cy as u32);
        let (mut k, mut b) = (0.0, 0.0);
        for s in 0..d {
            let shift = d - s;
            let (kx, ky) = (cx >> shift, cy >> shift);
            let hy = (cy >> (shift - 1)) & 1;
            let w = self.levels[s as usize][((ky as usize) << s) + kx as usize];
            let two_s = (1u64 << s) as f64;
            let g = if hy == 0 { -two_s * w[0] } else { two_s * w[0] };
            k += g;
            b -= g * (ky + hy) as f64 / two_s;
        }
        (k, b)
    }

    fn cell_of(&self, v: f64) -> i64 {
        let n = self.grid.size() as i64;
        ((v * n as f64).floor() as i64).clamp(0, n - 1)
    }

    /// Adds this segment's contribution to `gx`, `gy` (per local control
    /// point) and returns the number of skipped tangent crossings.
    fn segment(
        &self,
        seg: &BezierSegment,
        events: &[Breakpoint],
        parts: &[Piece],
        gx: &mut [f64; 4],
        gy: &mut [f64; 4],
    ) -> usize {
        let mut cache: Option<(u64, (f64, f64), (f64, f64))> = None;
        for p in parts {
            let key = cell_key(p.cx, p.cy);
            let (a, b) = match cache {
                Some((k, a, b)) if k == key => (a, b),
                _ => {
                    let a = self.a_line(p.cx as i64, p.cy as i64);
                    let b = self.b_line(p.cx as i64, p.cy as i64);
                    cache = Some((key, a, b));
                    (a, b)
                }
            };
            gl3(p.ta, p.tb, |t, w| {
                let pt = seg.eval(t);
                let dp = seg.deriv(t);
                let bs = bernstein(t);
                let bd = bernstein_deriv(t);
                let av = a.0 * pt.x + a.1;
                let bv = b.0 * pt.y + b.1;
                for i in 0..4 {
                    gx[i] += w * (a.0 * bs[i] * dp.y + bv * bd[i]);
                    gy[i] += w * (b.0 * bs[i] * dp.x + av * bd[i]);
                }
            });
        }

        let mut degenerate = 0;
        for e in events {
            let weight = if e.t <= 1e-12 || e.t >= 1.0 - 1e-12 { 0.5 } else { 1.0 };
            match e.kind {
                BreakKind::XLine(m) => {
                    let dx = seg.deriv(e.t).x;
                    if dx.abs() < TANGENT_EPS {
                        degenerate += 1;
                        continue;
                    }
                    let y0 = seg.eval(e.t).y;
                    let cy = self.cell_of(y0);
                    let r = self.b_line(m, cy);
                    let l = self.b_line(m - 1, cy);
                    let jump = (r.0 - l.0) * y0 + (r.1 - l.1);
                    let f = weight * dx.signum() * jump;
                    let bs = bernstein(e.t);
                    for i in 0..4 {
                        gx[i] += f * bs[i];
                    }
                }
                BreakKind::YLine(m) => {
                    let dy = seg.deriv(e.t).y;
                    if dy.abs() < TANGENT_EPS {
                        degenerate += 1;
                        continue;
                    }
                    let x0 = seg.eval(e.t).x;
                    let cx = self.cell_of(x0);
                    let below = self.a_line(cx, m);
                    let above = self.a_line(cx, m - 1);
                    let jump = (below.0 - above.0) * x0 + (below.1 - above.1);
                    let f = weight * dy.signum() * jump;
                    let bs = bernstein(e.t);
                    for i in 0..4 {
                        gy[i] += f * bs[i];
                    }
                }
                BreakKind::Extremum => {}
            }
        }
        degenerate
    }
}

fn near_tangent(seg: &BezierSegment, events: &[Breakpoint], scale: f64) -> bool {
    events.iter().any(|e| {
        if e.kind != BreakKind::Extremum {
            return false;
        }
        let p = seg.eval(e.t);
        let d = seg.deriv(e.t);
        let v = if d.x.abs() < d.y.abs() { p.x } else { p.y };
        let off = v * scale;
        (off - off.round()).abs() / scale < NEAR_TANGENT_DIST
    })
}

/// Gradient of `Σ_pixels weights · alpha` with respect to the bezigon's
/// control points, in the interleaved parameter layout.
pub fn coverage_gradient(
    bezigon: &Bezigon,
    grid: RasterGrid,
    weights: &[f64],
) -> Result<CoverageGradient, RasterError> {
    check_domain(bezigon)?;
    let acc = DerivAccumulator::new(grid, weights)?;
    let n_pts = bezigon.points().len();
    let mut grad = vec![0.0; 2 * n_pts];
    let mut flagged = vec![false; 2 * n_pts];
    let mut degenerate_roots = 0;
    let mut events = Vec::new();
    let mut parts = Vec::new();
    let scale = grid.size() as f64;
    for (j, seg) in bezigon.segments().enumerate() {
        breakpoints(&seg, grid, &mut events);
        pieces(&seg, grid, &events, &mut parts);
        let mut gx = [0.0; 4];
        let mut gy = [0.0; 4];
        degenerate_roots += acc.segment(&seg, &events, &parts, &mut gx, &mut gy);
        let flag = near_tangent(&seg, &events, scale);
        for i in 0..4 {
            let idx = bezigon.point_index(j, i);
            grad[2 * idx] += gx[i];
            grad[2 * idx + 1] += gy[i];
            if flag {
                flagged[2 * idx] = true;
                flagged[2 * idx + 1] = true;
            }
        }
    }
    Ok(CoverageGradient { grad, degenerate_roots, flagged })
}
