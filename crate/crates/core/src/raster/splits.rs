//! Parameter breakpoints where a segment crosses dyadic grid lines.
//!
//! Between two consecutive breakpoints the segment stays inside one cell of
//! the finest grid, so every Haar factor in the coefficient integrals is
//! constant there and the integrands reduce to polynomials.

use super::roots::cubic_roots;
use super::RasterGrid;
use crate::geometry::BezierSegment;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BreakKind {
    /// Crossing of the vertical line `x = m / 2^d`.
    XLine(i64),
    /// Crossing of the horizontal line `y = m / 2^d`.
    YLine(i64),
    Extremum,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Breakpoint {
    pub t: f64,
    pub kind: BreakKind,
}

fn axis_events(
    coeffs: [f64; 4],
    scale: f64,
    make: fn(i64) -> BreakKind,
    out: &mut Vec<Breakpoint>,
) {
    // range of the coordinate over [0, 1]: endpoints and interior extrema
    let deriv = [coeffs[1], 2.0 * coeffs[2], 3.0 * coeffs[3], 0.0];
    let eval = |t: f64| ((coeffs[3] * t + coeffs[2]) * t + coeffs[1]) * t + coeffs[0];
    let mut lo = eval(0.0).min(eval(1.0));
    let mut hi = eval(0.0).max(eval(1.0));
    if let Ok(ext) = cubic_roots(deriv, 0.0, 1.0) {
        for &t in ext.as_slice() {
            if t > 0.0 && t < 1.0 {
                out.push(Breakpoint { t, kind: BreakKind::Extremum });
            }
            let v = eval(t);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    // widened so a line grazed by an endpoint is tested on both segments
    let m_lo = (lo * scale - 1e-9).ceil() as i64;
    let m_hi = (hi * scale + 1e-9).floor() as i64;
    for m in m_lo..=m_hi {
        let line = m as f64 / scale;
        let c = [coeffs[0] - line, coeffs[1], coeffs[2], coeffs[3]];
        if let Ok(r) = cubic_roots(c, 0.0, 1.0) {
            for &t in r.as_slice() {
                out.push(Breakpoint { t, kind: make(m) });
            }
        }
    }
}

/// All crossing and extremum events of `seg` on `[0, 1]`, sorted by `t`.
/// Crossings exactly at `t = 0` or `t = 1` are included.
pub(crate) fn breakpoints(seg: &BezierSegment, grid: RasterGrid, out: &mut Vec<Breakpoint>) {
    out.clear();
    let scale = grid.size() as f64;
    let c = seg.power_coeffs();
    axis_events([c[0].x, c[1].x, c[2].x, c[3].x], scale, BreakKind::XLine, out);
    axis_events([c[0].y, c[1].y, c[2].y, c[3].y], scale, BreakKind::YLine, out);
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
}

/// Sorted, de-duplicated parameters in `(0, 1)` where the segment crosses a
/// dyadic line of `grid` (any scale) or has an x/y extremum.
pub fn monotone_splits(seg: &BezierSegment, grid: RasterGrid) -> Vec<f64> {
    let mut events = Vec::new();
    breakpoints(seg, grid, &mut events);
    let mut ts: Vec<f64> = events
        .iter()
        .map(|e| e.t)
        .filter(|&t| t > 0.0 && t < 1.0)
        .collect();
    ts.dedup();
    ts
}

/// One sub-interval of a segment lying inside finest cell `(cx, cy)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Piece {
    pub ta: f64,
    pub tb: f64,
    pub cx: u32,
    pub cy: u32,
}

/// Splits `[0,1]` at the given events into cell-local pieces.
pub(crate) fn pieces(
    seg: &BezierSegment,
    grid: RasterGrid,
    events: &[Breakpoint],
    out: &mut Vec<Piece>,
) {
    out.clear();
    let size = grid.size();
    let scale = size as f64;
    let cell = |v: f64| -> u32 { ((v * scale).floor().max(0.0) as u32).min(size - 1) };
    let mut ta = 0.0;
    let push = |ta: f64, tb: f64, out: &mut Vec<Piece>| {
        if tb > ta {
            let mid = seg.eval(0.5 * (ta + tb));
            out.push(Piece { ta, tb, cx: cell(mid.x), cy: cell(mid.y) });
        }
    };
    for e in events {
        if e.t > ta && e.t < 1.0 {
            push(ta, e.t, out);
            ta = e.t;
        }
    }
    push(ta, 1.0, out);
}
