//! Fixtures and reference computations shared by the integration tests.
#![allow(dead_code)]

use bezitrace::cli::render_document;
use bezitrace::energy::VectorShape;
use bezitrace::geometry::{shapes, Bezigon, Point};
use bezitrace::imaging::{RasterImage, VectorDocument};
use bezitrace::raster::RasterGrid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `∮ x dy` of a closed polygon, the same orientation convention as the
/// rasterizer's signed coverage.
pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            0.5 * (a.x + b.x) * (b.y - a.y)
        })
        .sum()
}

fn clip_half_plane(poly: &[Point], inside: impl Fn(Point) -> f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 4);
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let (da, db) = (inside(a), inside(b));
        if da >= 0.0 {
            out.push(a);
        }
        if (da >= 0.0) != (db >= 0.0) {
            out.push(a + (b - a) * (da / (da - db)));
        }
    }
    out
}

/// Sutherland–Hodgman clip of `poly` against the box `[x0, x1] × [y0, y1]`.
pub fn clip_to_box(poly: &[Point], x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
    let mut p = clip_half_plane(poly, |q| q.x - x0);
    p = clip_half_plane(&p, |q| x1 - q.x);
    p = clip_half_plane(&p, |q| q.y - y0);
    clip_half_plane(&p, |q| y1 - q.y)
}

/// Exact per-pixel signed coverage of a straight-edged bezigon, by clipping
/// its anchor polygon to every pixel.
pub fn clipped_coverage(b: &Bezigon, grid: RasterGrid) -> Vec<f64> {
    let n = grid.size() as usize;
    let inv = 1.0 / n as f64;
    let anchors: Vec<Point> = b.points().iter().step_by(3).copied().collect();
    let mut out = vec![0.0; n * n];
    for y in 0..n {
        for x in 0..n {
            let (x0, y0) = (x as f64 * inv, y as f64 * inv);
            let clipped = clip_to_box(&anchors, x0, y0, x0 + inv, y0 + inv);
            if clipped.len() >= 3 {
                out[y * n + x] = polygon_area(&clipped) * (n * n) as f64;
            }
        }
    }
    out
}

/// Every control point moved by an independent `N(0, σ)` offset in x then y.
pub fn jitter(b: &Bezigon, sigma: f64, rng: &mut impl Rng) -> Bezigon {
    let noise = Normal::new(0.0, sigma).expect("finite sigma");
    let moved = b
        .points()
        .iter()
        .map(|q| {
            let dx = noise.sample(rng);
            let dy = noise.sample(rng);
            Point::new(q.x + dx, q.y + dy)
        })
        .collect();
    Bezigon::new(moved).expect("same point count")
}

/// Mean distance between corresponding control points.
pub fn mean_point_error(a: &Bezigon, b: &Bezigon) -> f64 {
    let pa = a.points();
    let pb = b.points();
    pa.iter().zip(pb).map(|(p, q)| p.distance(*q)).sum::<f64>() / pa.len() as f64
}

/// Interior angle at every joint in degrees: 180 for a smooth joint, near 0
/// for a cusp.
pub fn joint_angles(b: &Bezigon) -> Vec<f64> {
    (0..b.num_segments())
        .map(|j| {
            let (a, c) = b.joint_tangents(j);
            180.0 - a.cross(c).abs().atan2(a.dot(c)).to_degrees()
        })
        .collect()
}

/// Shortest handle, measured from each handle point to its own anchor.
pub fn min_handle(b: &Bezigon) -> f64 {
    let p = b.points();
    let n = p.len();
    (0..n / 3)
        .flat_map(|j| [p[3 * j + 1].distance(p[3 * j]), p[3 * j + 2].distance(p[(3 * j + 3) % n])])
        .fold(f64::INFINITY, f64::min)
}

/// Synthetic clipart: 2 to 5 overlapping circles, rounded rectangles, stars
/// and blobs with random fills on white, rendered exactly at 128 to 256 px.
pub fn clipart(index: u64) -> (VectorDocument, RasterImage) {
    let mut rng = rng(100 + index);
    let size = [128.0, 160.0, 192.0, 256.0][index as usize % 4];
    let mut doc = VectorDocument::new(size, size);
    let count = rng.gen_range(2..=5);
    for _ in 0..count {
        let c = Point::new(rng.gen_range(0.25..0.75) * size, rng.gen_range(0.25..0.75) * size);
        let r = rng.gen_range(0.1..0.22) * size;
        let b = match rng.gen_range(0..4) {
            0 => shapes::circle(c, r, 4),
            1 => shapes::rounded_rect(c - Point::new(r, r * 0.7), c + Point::new(r, r * 0.7), r * 0.25),
            2 => {
                let spikes = rng.gen_range(4..7);
                shapes::star(c, r, r * 0.5, spikes)
            }
            _ => {
                let k = rng.gen_range(4..7);
                shapes::random_blob(&mut rng, c, r, k)
            }
        };
        let color = [rng.gen(), rng.gen(), rng.gen()];
        doc.shapes.push(VectorShape::new(b, color));
    }
    let img = render_document(&doc, 1.0, [1.0; 3], None).expect("corpus renders");
    (doc, img)
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
