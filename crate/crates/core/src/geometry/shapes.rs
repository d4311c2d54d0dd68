//! Stock bezigons used by the examples, fixtures and tests.

use std::f64::consts::PI;

use rand::Rng;

use super::{BezierSegment, Bezigon, Point};

/// Circle approximated by `n` cubic arcs, positively oriented.
pub fn circle(center: Point, radius: f64, n: usize) -> Bezigon {
    ellipse(center, radius, radius, n)
}

pub fn ellipse(center: Point, rx: f64, ry: f64, n: usize) -> Bezigon {
    let n = n.max(2);
    let step = 2.0 * PI / n as f64;
    let k = 4.0 / 3.0 * (step / 4.0).tan();
    let mut pts = Vec::with_capacity(3 * n);
    for i in 0..n {
        let a0 = step * i as f64;
        let a1 = a0 + step;
        let (s0, c0) = a0.sin_cos();
        let (s1, c1) = a1.sin_cos();
        pts.push(Point::new(center.x + rx * c0, center.y + ry * s0));
        pts.push(Point::new(
            center.x + rx * (c0 - k * s0),
            center.y + ry * (s0 + k * c0),
        ));
        pts.push(Point::new(
            center.x + rx * (c1 + k * s1),
            center.y + ry * (s1 - k * c1),
        ));
    }
    Bezigon::new(pts).expect("ellipse construction is valid")
}

/// Star polygon with `spikes` outer vertices, straight edges.
pub fn star(center: Point, outer: f64, inner: f64, spikes: usize) -> Bezigon {
    let n = 2 * spikes.max(2);
    let verts: Vec<Point> = (0..n)
        .map(|i| {
            let a = PI * i as f64 / spikes as f64 - PI / 2.0;
            let r = if i % 2 == 0 { outer } else { inner };
            Point::new(center.x + r * a.cos(), center.y + r * a.sin())
        })
        .collect();
    Bezigon::polygon(&verts).expect("star construction is valid")
}

/// Axis-aligned rectangle, positively oriented.
pub fn rect(lo: Point, hi: Point) -> Bezigon {
    Bezigon::polygon(&[
        Point::new(lo.x, lo.y),
        Point::new(hi.x, lo.y),
        Point::new(hi.x, hi.y),
        Point::new(lo.x, hi.y),
    ])
    .expect("rect construction is valid")
}

/// Rectangle with circular-arc corners of radius `r`: 4 straight edges and
/// 4 corner arcs.
pub fn rounded_rect(lo: Point, hi: Point, r: f64) -> Bezigon {
    let k = 0.552_284_749_8 * r;
    let (x0, y0, x1, y1) = (lo.x, lo.y, hi.x, hi.y);
    let p = Point::new;
    let segs = [
        BezierSegment::line(p(x0 + r, y0), p(x1 - r, y0)),
        BezierSegment::new(p(x1 - r, y0), p(x1 - r + k, y0), p(x1, y0 + r - k), p(x1, y0 + r)),
        BezierSegment::line(p(x1, y0 + r), p(x1, y1 - r)),
        BezierSegment::new(p(x1, y1 - r), p(x1, y1 - r + k), p(x1 - r + k, y1), p(x1 - r, y1)),
        BezierSegment::line(p(x1 - r, y1), p(x0 + r, y1)),
        BezierSegment::new(p(x0 + r, y1), p(x0 + r - k, y1), p(x0, y1 - r + k), p(x0, y1 - r)),
        BezierSegment::line(p(x0, y1 - r), p(x0, y0 + r)),
        BezierSegment::new(p(x0, y0 + r), p(x0, y0 + r - k), p(x0 + r - k, y0), p(x0 + r, y0)),
    ];
    Bezigon::from_segments(&segs).expect("rounded rect construction is valid")
}

/// Two-segment figure eight: the segments cross once near `center`.
pub fn figure_eight(center: Point, w: f64, h: f64) -> Bezigon {
    let left = Point::new(center.x - w, center.y);
    let right = Point::new(center.x + w, center.y);
    let segs = [
        BezierSegment::new(
            left,
            Point::new(center.x - w, center.y - h),
            Point::new(center.x + w, center.y + h),
            right,
        ),
        BezierSegment::new(
            right,
            Point::new(center.x + w, center.y - h),
            Point::new(center.x - w, center.y + h),
            left,
        ),
    ];
    Bezigon::from_segments(&segs).expect("figure eight construction is valid")
}

fn random_radii<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<(f64, f64)> {
    let step = 2.0 * PI / n as f64;
    (0..n)
        .map(|i| {
            let a = step * (i as f64 + rng.gen_range(-0.3..0.3));
            (a, radius * rng.gen_range(0.55..1.0))
        })
        .collect()
}

/// Star-shaped polygon with `n` vertices at jittered angles and radii up to
/// `radius` around `center`.
pub fn random_polygon<R: Rng>(rng: &mut R, center: Point, radius: f64, n: usize) -> Bezigon {
    let verts: Vec<Point> = random_radii(rng, n.max(3), radius)
        .into_iter()
        .map(|(a, r)| Point::new(center.x + r * a.cos(), center.y + r * a.sin()))
        .collect();
    Bezigon::polygon(&verts).expect("polygon construction is valid")
}

/// Smooth random blob with `n` segments: anchors as in [`random_polygon`],
/// handles along jittered tangents.
pub fn random_blob<R: Rng>(rng: &mut R, center: Point, radius: f64, n: usize) -> Bezigon {
    let n = n.max(2);
    let anchors = random_radii(rng, n, radius);
    let step = 2.0 * PI / n as f64;
    let at = |(a, r): (f64, f64)| Point::new(center.x + r * a.cos(), center.y + r * a.sin());
    let tangent = |a: f64| Point::new(-a.sin(), a.cos());
    let mut pts = Vec::with_capacity(3 * n);
    for j in 0..n {
        let (a0, r0) = anchors[j];
        let (a1, r1) = anchors[(j + 1) % n];
        let k0 = r0 * step / 3.0 * rng.gen_range(0.6..1.3);
        let k1 = r1 * step / 3.0 * rng.gen_range(0.6..1.3);
        let t0 = tangent(a0 + rng.gen_range(-0.3..0.3));
        let t1 = tangent(a1 + rng.gen_range(-0.3..0.3));
        let p0 = at(anchors[j]);
        let p3 = at(anchors[(j + 1) % n]);
        pts.push(p0);
        pts.push(p0 + t0 * k0);
        pts.push(p3 - t1 * k1);
    }
    Bezigon::new(pts).expect("blob construction is valid")
}
