//! Self-intersection detection: flatten, sweep-and-prune over polyline edges,
//! then Newton refinement of every candidate on `S(t1) - S(t2) = 0`.

use serde::{Deserialize, Serialize};

use super::{Bezigon, Point};

/// Default intersection tolerance in normalized units.
pub const INTERSECTION_TOL: f64 = 1e-4;

/// Candidate pairs closer than this in parameter space are treated as the
/// shared joint between adjacent pieces of the curve, not a crossing.
const ADJACENT_PARAM_GAP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionPair {
    pub t1: f64,
    pub t2: f64,
    pub point: Point,
}

/// Proper crossing of segments `p0-p1` and `q0-q1`; returns the parameters
/// along each.
fn segment_crossing(p0: Point, p1: Point, q0: Point, q1: Point) -> Option<(f64, f64)> {
    let r = p1 - p0;
    let s = q1 - q0;
    let denom = r.cross(s);
    if denom.abs() <= 1e-300 {
        return None;
    }
    let qp = q0 - p0;
    let u = qp.cross(s) / denom;
    let v = qp.cross(r) / denom;
    if (0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v) {
        Some((u, v))
    } else {
        None
    }
}

fn too_close(t1: f64, t2: f64, n: f64) -> bool {
    let d = (t1 - t2).abs();
    d < ADJACENT_PARAM_GAP || (n - d) < ADJACENT_PARAM_GAP
}

fn wrapped_dist(a: f64, b: f64, n: f64) -> f64 {
    let d = (a - b).rem_euclid(n);
    d.min(n - d)
}

impl Bezigon {
    /// All transverse self-crossings `S(t1) = S(t2)`, `t1 < t2`.
    pub fn self_intersections(&self, tol: f64) -> Vec<IntersectionPair> {
        let n = self.num_segments() as f64;
        let poly = self.flatten(tol / 4.0);
        let m = poly.points.len() - 1;
        if m < 3 {
            return Vec::new();
        }

        let mut order: Vec<(f64, f64, usize)> = (0..m)
            .map(|i| {
                let (a, b) = (poly.points[i], poly.points[i + 1]);
                (a.x.min(b.x), a.x.max(b.x), i)
            })
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));

        let mut candidates = Vec::new();
        let mut active: Vec<(f64, usize)> = Vec::new();
        for &(lo, hi, i) in &order {
            active.retain(|&(ahi, _)| ahi >= lo);
            for &(_, k) in &active {
                let (e1, e2) = if i < k { (i, k) } else { (k, i) };
                if e2 == e1 + 1 || (e1 == 0 && e2 == m - 1) {
                    continue;
                }
                let (a0, a1) = (poly.points[e1], poly.points[e1 + 1]);
                let (b0, b1) = (poly.points[e2], poly.points[e2 + 1]);
                let ylo = a0.y.min(a1.y).max(b0.y.min(b1.y));
                let yhi = a0.y.max(a1.y).min(b0.y.max(b1.y));
                if ylo > yhi {
                    continue;
                }
                if let Some((u, v)) = segment_crossing(a0, a1, b0, b1) {
                    let t1 = poly.params[e1] + u * (poly.params[e1 + 1] - poly.params[e1]);
                    let t2 = poly.params[e2] + v * (poly.params[e2 + 1] - poly.params[e2]);
                    if !too_close(t1, t2, n) {
                        candidates.push((t1, t2));
                    }
                }
            }
            active.push((hi, i));
        }

        let mut out: Vec<IntersectionPair> = Vec::new();
        for (t1, t2) in candidates {
            let (mut t1, mut t2) = self.refine_crossing(t1, t2);
            if t1 > t2 {
                std::mem::swap(&mut t1, &mut t2);
            }
            if too_close(t1, t2, n) {
                continue;
            }
            let dup = out.iter().any(|q| {
                wrapped_dist(q.t1, t1, n) < tol && wrapped_dist(q.t2, t2, n) < tol
            });
            if !dup {
                out.push(IntersectionPair {
                    t1,
                    t2,
                    point: self.eval_unchecked(t1),
                });
            }
        }
        out.sort_by(|a, b| a.t1.total_cmp(&b.t1).then(a.t2.total_cmp(&b.t2)));
        out
    }

    /// Newton iteration on `F(t1, t2) = S(t1) - S(t2)`. Falls back to the
    /// starting estimate if the iteration wanders off.
    fn refine_crossing(&self, t1: f64, t2: f64) -> (f64, f64) {
        let n = self.num_segments() as f64;
        let (s1, s2) = (t1, t2);
        let (mut a, mut b) = (t1, t2);
        for _ in 0..30 {
            let f = self.eval_wrapped(a) - self.eval_wrapped(b);
            if f.norm() < 1e-15 {
                break;
            }
            let da = self.deriv_wrapped(a);
            let db = -self.deriv_wrapped(b);
            let det = da.cross(db);
            if det.abs() < 1e-300 {
                return (s1, s2);
            }
            // Solve [da db] [x y]^T = -f.
            let x = -f.cross(db) / det;
            let y = -da.cross(f) / det;
            a += x;
            b += y;
            if !a.is_finite() || !b.is_finite() || (a - s1).abs() > 0.05 || (b - s2).abs() > 0.05 {
                return (s1, s2);
            }
        }
        (a.rem_euclid(n), b.rem_euclid(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shapes, BezierSegment};

    #[test]
    fn convex_circle_is_simple() {
        let c = shapes::circle(Point::new(0.5, 0.5), 0.3, 4);
        assert!(c.self_intersections(INTERSECTION_TOL).is_empty());
        let sq = shapes::rect(Point::new(0.1, 0.1), Point::new(0.9, 0.9));
        assert!(sq.self_intersections(INTERSECTION_TOL).is_empty());
    }

    #[test]
    fn figure_eight_crosses_once() {
        let f = shapes::figure_eight(Point::new(0.5, 0.5), 0.3, 0.4);
        let xs = f.self_intersections(INTERSECTION_TOL);
        assert_eq!(xs.len(), 1);
        let x = xs[0];
        assert!(x.t1 < x.t2);
        let gap = f.eval(x.t1).unwrap().distance(f.eval(x.t2).unwrap());
        assert!(gap < 1e-12);
    }

    #[test]
    fn near_touch_is_not_a_crossing() {
        // Two lobes whose boundaries come within 2e-3 of each other.
        let p = Point::new;
        let segs = [
            BezierSegment::new(p(0.1, 0.5), p(0.1, 0.1), p(0.5, 0.1), p(0.5, 0.498)),
            BezierSegment::new(p(0.5, 0.498), p(0.5, 0.1), p(0.9, 0.1), p(0.9, 0.5)),
            BezierSegment::new(p(0.9, 0.5), p(0.9, 0.9), p(0.5, 0.9), p(0.5, 0.502)),
            BezierSegment::new(p(0.5, 0.502), p(0.5, 0.9), p(0.1, 0.9), p(0.1, 0.5)),
        ];
        let b = Bezigon::from_segments(&segs).unwrap();
        assert!(b.self_intersections(INTERSECTION_TOL).is_empty());
    }

    #[test]
    fn rotation_preserves_crossings() {
        let f = shapes::figure_eight(Point::new(0.5, 0.5), 0.3, 0.4);
        let a = f.self_intersections(INTERSECTION_TOL);
        let b = f.rotated(1).self_intersections(INTERSECTION_TOL);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!(x.point.distance(y.point) < INTERSECTION_TOL);
        }
    }
}
