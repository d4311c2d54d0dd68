use serde::{Deserialize, Serialize};

use super::quadrature::adaptive_gauss_legendre;
use super::{BezierSegment, GeometryError, Point};

/// Default absolute tolerance for arc-length quadrature (normalized units).
pub const ARC_LENGTH_TOL: f64 = 1e-8;

/// A closed chain of `N >= 2` cubic Bézier segments.
///
/// Stored as the `3N` distinct control points: segment `j` uses points
/// `3j, 3j+1, 3j+2` and `3(j+1) mod 3N`, so consecutive segments share their
/// joint by construction and the path is always closed.
///
/// The global parameter `t ∈ [0, N]` maps segment `j` (0-based) onto
/// `[j, j+1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bezigon {
    points: Vec<Point>,
}

/// A flattened bezigon: closed polyline (last vertex repeats the first) with
/// the global parameter of every vertex.
#[derive(Clone, Debug)]
pub struct Polyline {
    pub points: Vec<Point>,
    pub params: Vec<f64>,
}

impl Polyline {
    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// Even–odd point containment.
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for w in self.points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

impl Bezigon {
    /// Builds a bezigon from its `3N` distinct control points.
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.len() % 3 != 0 {
            return Err(GeometryError::PointCount(points.len()));
        }
        if points.len() < 6 {
            return Err(GeometryError::TooFewSegments(points.len() / 3));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        Ok(Bezigon { points })
    }

    /// Builds a bezigon from explicit segments, which must chain exactly:
    /// `segments[j].p[3] == segments[j+1].p[0]` and the last closes onto the
    /// first.
    pub fn from_segments(segments: &[BezierSegment]) -> Result<Self, GeometryError> {
        let n = segments.len();
        if n < 2 {
            return Err(GeometryError::TooFewSegments(n));
        }
        let mut points = Vec::with_capacity(3 * n);
        for (j, s) in segments.iter().enumerate() {
            let next = &segments[(j + 1) % n];
            if s.p[3] != next.p[0] {
                return Err(GeometryError::Discontinuous(j));
            }
            points.extend_from_slice(&s.p[..3]);
        }
        Bezigon::new(points)
    }

    /// Polygon with straight edges (handles at the third points).
    pub fn polygon(vertices: &[Point]) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 2 {
            return Err(GeometryError::TooFewSegments(n));
        }
        let segs: Vec<_> = (0..n)
            .map(|i| BezierSegment::line(vertices[i], vertices[(i + 1) % n]))
            .collect();
        Bezigon::from_segments(&segs)
    }

    /// Rebuilds from a flat parameter vector (see [`Bezigon::params`]).
    pub fn from_params(params: &[f64]) -> Result<Self, GeometryError> {
        if params.len() % 2 != 0 {
            return Err(GeometryError::PointCount(params.len()));
        }
        Bezigon::new(
            params
                .chunks_exact(2)
                .map(|c| Point::new(c[0], c[1]))
                .collect(),
        )
    }

    /// Flat parameter layout shared by the energy and the solver:
    /// `[x_0, y_0, x_1, y_1, ...]` over the `3N` control points, so index
    /// `2(3j + i) + c` is coordinate `c` of control point `i` of segment `j`.
    pub fn params(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| [p.x, p.y]).collect()
    }

    pub fn num_segments(&self) -> usize {
        self.points.len() / 3
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Index into [`Bezigon::points`] of control point `i ∈ 0..4` of segment `j`.
    #[inline]
    pub fn point_index(&self, j: usize, i: usize) -> usize {
        (3 * j + i) % self.points.len()
    }

    pub fn set_point(&mut self, idx: usize, p: Point) {
        self.points[idx] = p;
    }

    #[inline]
    pub fn segment(&self, j: usize) -> BezierSegment {
        let n = self.points.len();
        BezierSegment::new(
            self.points[3 * j],
            self.points[3 * j + 1],
            self.points[3 * j + 2],
            self.points[(3 * j + 3) % n],
        )
    }

    pub fn segments(&self) -> impl Iterator<Item = BezierSegment> + '_ {
        (0..self.num_segments()).map(move |j| self.segment(j))
    }

    /// Splits a global parameter into `(segment, local t)`.
    #[inline]
    pub fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.num_segments();
        if t >= n as f64 {
            return (n - 1, 1.0);
        }
        if t <= 0.0 {
            return (0, 0.0);
        }
        let j = t.floor() as usize;
        (j, t - j as f64)
    }

    /// Evaluates `S(t)` for `t ∈ [0, N]`.
    pub fn eval(&self, t: f64) -> Result<Point, GeometryError> {
        let n = self.num_segments() as f64;
        if !(0.0..=n).contains(&t) {
            return Err(GeometryError::ParamOutOfRange { t, n: self.num_segments() });
        }
        Ok(self.eval_unchecked(t))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, t: f64) -> Point {
        let (j, u) = self.locate(t);
        self.segment(j).eval(u)
    }

    /// `S(t)` with `t` wrapped onto the closed curve.
    pub(crate) fn eval_wrapped(&self, t: f64) -> Point {
        self.eval_unchecked(t.rem_euclid(self.num_segments() as f64))
    }

    pub(crate) fn deriv_wrapped(&self, t: f64) -> Point {
        let (j, u) = self.locate(t.rem_euclid(self.num_segments() as f64));
        self.segment(j).deriv(u)
    }

    /// Arc length between global parameters `t1 <= t2`.
    pub fn arc_length(&self, t1: f64, t2: f64) -> f64 {
        self.arc_length_tol(t1, t2, ARC_LENGTH_TOL)
    }

    pub fn arc_length_tol(&self, t1: f64, t2: f64, tol: f64) -> f64 {
        let mut scratch = Vec::new();
        self.arc_length_nodes(t1, t2, tol, &mut scratch)
    }

    /// Arc length plus the quadrature nodes used, as `(segment, t, weight)`.
    pub(crate) fn arc_length_nodes(
        &self,
        t1: f64,
        t2: f64,
        tol: f64,
        nodes: &mut Vec<(usize, f64, f64)>,
    ) -> f64 {
        let n = self.num_segments();
        let t1 = t1.clamp(0.0, n as f64);
        let t2 = t2.clamp(0.0, n as f64);
        if t2 <= t1 {
            return 0.0;
        }
        let first = t1.floor() as usize;
        let last = (t2.ceil() as usize).min(n);
        let per_seg_tol = tol / (last - first).max(1) as f64;
        let mut total = 0.0;
        let mut local = Vec::new();
        for j in first..last {
            let a = (t1 - j as f64).max(0.0);
            let b = (t2 - j as f64).min(1.0);
            if b <= a {
                continue;
            }
            let seg = self.segment(j);
            local.clear();
            total += adaptive_gauss_legendre(&|t| seg.speed(t), a, b, per_seg_tol, &mut local);
            nodes.extend(local.iter().map(|&(t, w)| (j, t, w)));
        }
        total
    }

    /// Total arc length `L(0, N)`.
    pub fn length(&self) -> f64 {
        self.arc_length(0.0, self.num_segments() as f64)
    }

    /// Incoming and outgoing handle vectors at joint `j` (the start of
    /// segment `j`): `a = p0_j - p2_{j-1}`, `b = p1_j - p0_j`.
    pub fn joint_tangents(&self, j: usize) -> (Point, Point) {
        let n3 = self.points.len();
        let p0 = self.points[3 * j];
        let prev_p2 = self.points[(3 * j + n3 - 1) % n3];
        let p1 = self.points[3 * j + 1];
        (p0 - prev_p2, p1 - p0)
    }

    /// Flattens to a closed polyline; every curve point lies within
    /// `chord_tol` of it.
    pub fn flatten(&self, chord_tol: f64) -> Polyline {
        let mut out = Vec::with_capacity(8 * self.num_segments());
        for j in 0..self.num_segments() {
            self.segment(j)
                .flatten_into(chord_tol, j as f64, j as f64 + 1.0, 0, &mut out);
        }
        let mut points = Vec::with_capacity(out.len() + 1);
        let mut params = Vec::with_capacity(out.len() + 1);
        points.push(self.points[0]);
        params.push(0.0);
        for (p, t) in out {
            points.push(p);
            params.push(t);
        }
        Polyline { points, params }
    }

    /// Signed enclosed area `∮ x dy`. Positive for the orientation that
    /// rasterizes to positive coverage.
    pub fn signed_area(&self) -> f64 {
        self.segments().map(|s| s.signed_area_term()).sum()
    }

    /// Same curve traversed in the opposite direction, starting at the same
    /// point.
    pub fn reversed(&self) -> Bezigon {
        let n3 = self.points.len();
        Bezigon {
            points: (0..n3).map(|i| self.points[(n3 - i) % n3]).collect(),
        }
    }

    /// Rotates the segment list so segment `k` becomes segment 0.
    pub fn rotated(&self, k: usize) -> Bezigon {
        let n3 = self.points.len();
        Bezigon {
            points: (0..n3).map(|i| self.points[(i + 3 * k) % n3]).collect(),
        }
    }

    /// Reverses orientation if needed so `signed_area() >= 0`.
    pub fn normalized_orientation(self) -> Bezigon {
        if self.signed_area() < 0.0 {
            self.reversed()
        } else {
            self
        }
    }

    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Bezigon {
        Bezigon {
            points: self.points.iter().map(|&p| f(p)).collect(),
        }
    }

    /// Axis-aligned bounds of the control polygon (contains the curve).
    pub fn control_bounds(&self) -> (Point, Point) {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        (lo, hi)
    }
}
