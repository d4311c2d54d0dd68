//! Least-squares cubic fitting of closed contours with adaptive splitting.

use serde::{Deserialize, Serialize};

use super::PixelContour;
use crate::geometry::{bernstein, BezierSegment, Bezigon, Point};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    /// Largest allowed distance from a (smoothed) contour point to the fit,
    /// in the contour's units.
    pub err_tol: f64,
    /// Turning angle, in degrees, above which a contour vertex is a corner.
    pub corner_angle: f64,
    /// Passes of `[1, 2, 1]` smoothing applied away from corners.
    pub smoothing: usize,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams { err_tol: 1.0, corner_angle: 60.0, smoothing: 2 }
    }
}

const CORNER_REACH: usize = 4;
const TANGENT_REACH: usize = 3;
const MAX_REPARAM: usize = 20;

fn unit(p: Point) -> Point {
    let n = p.norm();
    if n > 0.0 {
        p * (1.0 / n)
    } else {
        p
    }
}

fn turning_angle(a: Point, b: Point) -> f64 {
    a.cross(b).abs().atan2(a.dot(b))
}

/// Vertices whose chord turning angle exceeds the threshold and is the
/// largest within their neighborhood.
fn find_corners(pts: &[Point], threshold: f64) -> Vec<usize> {
    let n = pts.len();
    let k = CORNER_REACH.min(n / 4).max(1);
    let turn: Vec<f64> = (0..n)
        .map(|i| {
            let prev = pts[(i + n - k) % n];
            let next = pts[(i + k) % n];
            turning_angle(pts[i] - prev, next - pts[i])
        })
        .collect();
    (0..n)
        .filter(|&i| {
            turn[i] > threshold
                && (1..=k).all(|d| {
                    let before = turn[(i + n - d) % n];
                    let after = turn[(i + d) % n];
                    turn[i] > before && turn[i] >= after
                })
        })
        .collect()
}

fn chord_params(pts: &[Point]) -> Vec<f64> {
    let mut u = Vec::with_capacity(pts.len());
    u.push(0.0);
    for w in pts.windows(2) {
        u.push(u.last().unwrap() + w[0].distance(w[1]));
    }
    let total = *u.last().unwrap();
    if total > 0.0 {
        u.iter_mut().for_each(|v| *v /= total);
    }
    u
}

fn handles_by_thirds(p0: Point, p3: Point, t1: Point, t2: Point) -> BezierSegment {
    let d = p0.distance(p3) / 3.0;
    BezierSegment::new(p0, p0 + t1 * d, p3 + t2 * d, p3)
}

fn generate(pts: &[Point], u: &[f64], t1: Point, t2: Point) -> BezierSegment {
    let (p0, p3) = (pts[0], pts[pts.len() - 1]);
    let mut c = [[0.0; 2]; 2];
    let mut x = [0.0; 2];
    for (p, &t) in pts.iter().zip(u) {
        let b = bernstein(t);
        let a0 = t1 * b[1];
        let a1 = t2 * b[2];
        c[0][0] += a0.dot(a0);
        c[0][1] += a0.dot(a1);
        c[1][1] += a1.dot(a1);
        let tmp = *p - (p0 * (b[0] + b[1]) + p3 * (b[2] + b[3]));
        x[0] += a0.dot(tmp);
        x[1] += a1.dot(tmp);
    }
    c[1][0] = c[0][1];
    let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    let seg = p0.distance(p3);
    let eps = 1e-6 * seg;
    if det.abs() > 1e-12 {
        let al = (x[0] * c[1][1] - x[1] * c[0][1]) / det;
        let ar = (c[0][0] * x[1] - c[1][0] * x[0]) / det;
        if al > eps && ar > eps {
            return BezierSegment::new(p0, p0 + t1 * al, p3 + t2 * ar, p3);
        }
    }
    handles_by_thirds(p0, p3, t1, t2)
}

fn max_error(pts: &[Point], u: &[f64], bez: &BezierSegment) -> (f64, usize) {
    let mut worst = (0.0, pts.len() / 2);
    for (i, (p, &t)) in pts.iter().zip(u).enumerate() {
        let d = bez.eval(t).distance(*p);
        if d > worst.0 {
            worst = (d, i);
        }
    }
    worst
}

fn reparameterize(pts: &[Point], u: &[f64], bez: &BezierSegment) -> Vec<f64> {
    pts.iter()
        .zip(u)
        .map(|(p, &t)| {
            let q = bez.eval(t) - *p;
            let d1 = bez.deriv(t);
            let d2 = bez.second_deriv(t);
            let den = d1.dot(d1) + q.dot(d2);
            if den.abs() < 1e-12 {
                t
            } else {
                (t - q.dot(d1) / den).clamp(0.0, 1.0)
            }
        })
        .collect()
}

fn fit_section(pts: &[Point], t1: Point, t2: Point, tol: f64, out: &mut Vec<BezierSegment>) {
    if pts.len() <= 2 {
        out.push(handles_by_thirds(pts[0], pts[pts.len() - 1], t1, t2));
        return;
    }
    let mut u = chord_params(pts);
    let mut bez = generate(pts, &u, t1, t2);
    let (mut err, mut split) = max_error(pts, &u, &bez);
    if err <= tol {
        out.push(bez);
        return;
    }
    if err <= 4.0 * tol {
        for _ in 0..MAX_REPARAM {
            u = reparameterize(pts, &u, &bez);
            bez = generate(pts, &u, t1, t2);
            (err, split) = max_error(pts, &u, &bez);
            if err <= tol {
                out.push(bez);
                return;
            }
        }
    }
    let split = split.clamp(1, pts.len() - 2);
    let center = unit(pts[split - 1] - pts[split + 1]);
    let center = if center.norm() > 0.0 { center } else { unit(pts[split - 1] - pts[split]) };
    fit_section(&pts[..=split], t1, center, tol, out);
    fit_section(&pts[split..], center * -1.0, t2, tol, out);
}

fn lens(pts: &[Point]) -> Bezigon {
    let a = pts[0];
    let b = pts
        .iter()
        .copied()
        .max_by(|p, q| p.distance(a).total_cmp(&q.distance(a)))
        .unwrap_or(a);
    let b = if b == a { a + Point::new(1e-6, 0.0) } else { b };
    Bezigon::polygon(&[a, b]).expect("two vertices make a valid bezigon")
}

/// Binomial `[1, 2, 1] / 4` smoothing of a closed polyline, `passes` times,
/// with the points in `fixed` left in place. Takes the edge off pixel
/// staircases before fitting.
fn smooth(pts: &[Point], fixed: &[usize], passes: usize) -> Vec<Point> {
    let n = pts.len();
    let mut cur = pts.to_vec();
    for _ in 0..passes {
        cur = (0..n)
            .map(|i| {
                if fixed.contains(&i) {
                    cur[i]
                } else {
                    (cur[(i + n - 1) % n] + cur[i] * 2.0 + cur[(i + 1) % n]) * 0.25
                }
            })
            .collect();
    }
    cur
}

/// Fits a closed piecewise cubic to `contour`, splitting at corners and
/// wherever a single cubic leaves the contour by more than `err_tol`.
/// Corners keep independent tangents; every other joint is smooth.
/// Degenerate contours give a two-segment bezigon.
pub fn fit_bezigon(contour: &PixelContour, params: &FitParams) -> Bezigon {
    let pts = &contour.points;
    let n = pts.len();
    if n < 4 || contour.signed_area().abs() < 1e-9 {
        return lens(if pts.is_empty() { &[Point::ZERO] } else { pts });
    }
    let corners = find_corners(pts, params.corner_angle.to_radians());
    let smoothed = smooth(pts, &corners, params.smoothing);
    let pts = &smoothed;
    let mut splits = corners.clone();
    if splits.is_empty() {
        splits.push(0);
    }
    if splits.len() == 1 {
        let c = splits[0];
        let far = (0..n)
            .max_by(|&i, &j| pts[i].distance(pts[c]).total_cmp(&pts[j].distance(pts[c])))
            .unwrap();
        splits.push(far);
        splits.sort_unstable();
    }
    let smooth_tangent = |i: usize| {
        let k = TANGENT_REACH.min(n / 4).max(1);
        unit(pts[(i + k) % n] - pts[(i + n - k) % n])
    };
    let m = splits.len();
    let mut segments = Vec::new();
    for s in 0..m {
        let (a, b) = (splits[s], splits[(s + 1) % m]);
        let len = if b > a { b - a } else { b + n - a };
        let section: Vec<Point> = (0..=len).map(|k| pts[(a + k) % n]).collect();
        let k = TANGENT_REACH.min(len).max(1);
        let t1 = if corners.contains(&a) { unit(section[k] - section[0]) } else { smooth_tangent(a) };
        let t2 = if corners.contains(&b) {
            unit(section[len - k] - section[len])
        } else {
            smooth_tangent(b) * -1.0
        };
        fit_section(&section, t1, t2, params.err_tol, &mut segments);
    }
    Bezigon::from_segments(&segments)
        .map(|b| b.normalized_orientation())
        .unwrap_or_else(|_| lens(pts))
}
