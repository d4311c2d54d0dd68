use serde::{Deserialize, Serialize};

use super::Point;

/// Cubic Bernstein basis values at `t`.
#[inline]
pub fn bernstein(t: f64) -> [f64; 4] {
    let s = 1.0 - t;
    [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t]
}

/// Derivatives of the cubic Bernstein basis with respect to `t`.
#[inline]
pub fn bernstein_deriv(t: f64) -> [f64; 4] {
    let s = 1.0 - t;
    [
        -3.0 * s * s,
        3.0 * s * s - 6.0 * s * t,
        6.0 * s * t - 3.0 * t * t,
        3.0 * t * t,
    ]
}

/// One cubic Bézier curve with control points `p[0]..p[3]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BezierSegment {
    pub p: [Point; 4],
}

impl BezierSegment {
    pub const fn new(p0: Point, p1: Point, p2: Point, p3: Point) -> Self {
        BezierSegment { p: [p0, p1, p2, p3] }
    }

    /// Straight segment with handles at the 1/3 and 2/3 points.
    pub fn line(a: Point, b: Point) -> Self {
        BezierSegment::new(a, a.lerp(b, 1.0 / 3.0), a.lerp(b, 2.0 / 3.0), b)
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().all(|p| p.is_finite())
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Point {
        if t == 0.0 {
            return self.p[0];
        }
        if t == 1.0 {
            return self.p[3];
        }
        let b = bernstein(t);
        self.p[0] * b[0] + self.p[1] * b[1] + self.p[2] * b[2] + self.p[3] * b[3]
    }

    /// First derivative `S'(t)`.
    #[inline]
    pub fn deriv(&self, t: f64) -> Point {
        let s = 1.0 - t;
        let d0 = self.p[1] - self.p[0];
        let d1 = self.p[2] - self.p[1];
        let d2 = self.p[3] - self.p[2];
        (d0 * (s * s) + d1 * (2.0 * s * t) + d2 * (t * t)) * 3.0
    }

    #[inline]
    pub fn second_deriv(&self, t: f64) -> Point {
        let a = self.p[2] - self.p[1] * 2.0 + self.p[0];
        let b = self.p[3] - self.p[2] * 2.0 + self.p[1];
        (a * (1.0 - t) + b * t) * 6.0
    }

    #[inline]
    pub fn speed(&self, t: f64) -> f64 {
        self.deriv(t).norm()
    }

    /// Power-basis coefficients `c` with `S(t) = c0 + c1 t + c2 t² + c3 t³`.
    pub fn power_coeffs(&self) -> [Point; 4] {
        let [p0, p1, p2, p3] = self.p;
        [
            p0,
            (p1 - p0) * 3.0,
            (p2 - p1 * 2.0 + p0) * 3.0,
            p3 - p0 + (p1 - p2) * 3.0,
        ]
    }

    /// de Casteljau split at `u`.
    pub fn split(&self, u: f64) -> (BezierSegment, BezierSegment) {
        let [p0, p1, p2, p3] = self.p;
        let a = p0.lerp(p1, u);
        let b = p1.lerp(p2, u);
        let c = p2.lerp(p3, u);
        let ab = a.lerp(b, u);
        let bc = b.lerp(c, u);
        let m = ab.lerp(bc, u);
        (
            BezierSegment::new(p0, a, ab, m),
            BezierSegment::new(m, bc, c, p3),
        )
    }

    /// Sub-curve over `[t0, t1]`.
    pub fn subsegment(&self, t0: f64, t1: f64) -> BezierSegment {
        if t0 == 0.0 {
            return self.split(t1).0;
        }
        let (_, right) = self.split(t0);
        if t1 >= 1.0 {
            return right;
        }
        right.split((t1 - t0) / (1.0 - t0)).0
    }

    pub fn reversed(&self) -> BezierSegment {
        BezierSegment::new(self.p[3], self.p[2], self.p[1], self.p[0])
    }

    /// Upper bound on the distance between the curve and its chord.
    pub fn flatness(&self) -> f64 {
        let a = self.p[0];
        let b = self.p[3];
        self.p[1]
            .distance_to_segment(a, b)
            .max(self.p[2].distance_to_segment(a, b))
    }

    /// ∫ X(t) Y'(t) dt over `[t0, t1]`, exact (degree-5 polynomial).
    pub fn x_dy_integral(&self, t0: f64, t1: f64) -> f64 {
        let c = self.power_coeffs();
        let x = [c[0].x, c[1].x, c[2].x, c[3].x];
        let dy = [c[1].y, 2.0 * c[2].y, 3.0 * c[3].y];
        let mut prod = [0.0; 6];
        for (i, xi) in x.iter().enumerate() {
            for (k, dk) in dy.iter().enumerate() {
                prod[i + k] += xi * dk;
            }
        }
        let anti = |t: f64| {
            let mut acc = 0.0;
            for (n, &a) in prod.iter().enumerate().rev() {
                acc = acc * t + a / (n + 1) as f64;
            }
            acc * t
        };
        anti(t1) - anti(t0)
    }

    /// Signed area contribution `∫ x dy` of the whole segment.
    pub fn signed_area_term(&self) -> f64 {
        self.x_dy_integral(0.0, 1.0)
    }

    /// Recursive-subdivision flattening. Pushes `(point, t)` pairs for every
    /// vertex after the start point, with `t` mapped into `[t_lo, t_hi]`.
    pub(crate) fn flatten_into(
        &self,
        tol: f64,
        t_lo: f64,
        t_hi: f64,
        depth: u32,
        out: &mut Vec<(Point, f64)>,
    ) {
        if depth >= 24 || self.flatness() <= tol {
            out.push((self.p[3], t_hi));
            return;
        }
        let (l, r) = self.split(0.5);
        let mid = 0.5 * (t_lo + t_hi);
        l.flatten_into(tol, t_lo, mid, depth + 1, out);
        r.flatten_into(tol, mid, t_hi, depth + 1, out);
    }
}
