//! Algebraic invariants checked over random inputs.

mod common;

use bezitrace::energy::{e_apt, e_hpt, e_lpt};
use bezitrace::geometry::{shapes, Point};
use bezitrace::raster::{coverage, cubic_roots, RasterGrid};
use common::*;
use proptest::prelude::*;

fn eval(c: &[f64; 4], t: f64) -> f64 {
    ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
}

/// Roots found by scanning for sign changes and bisecting each bracket.
fn bisection_roots(c: &[f64; 4], lo: f64, hi: f64) -> Vec<f64> {
    let steps = 20_000;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = eval(c, a);
    for k in 1..=steps {
        let b = lo + (hi - lo) * k as f64 / steps as f64;
        let fb = eval(c, b);
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            let (mut x0, mut x1) = (a, b);
            for _ in 0..200 {
                let m = 0.5 * (x0 + x1);
                if eval(c, m) * eval(c, x0) <= 0.0 {
                    x1 = m;
                } else {
                    x0 = m;
                }
            }
            out.push(0.5 * (x0 + x1));
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        out.push(hi);
    }
    out
}

fn blob(seed: u64) -> bezitrace::geometry::Bezigon {
    shapes::random_blob(&mut rng(seed), Point::new(0.5, 0.5), 0.3, 3 + (seed % 5) as usize)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cubic_roots_match_bisection(c in prop::array::uniform4(-1.0f64..1.0)) {
        let found = cubic_roots(c, 0.0, 1.0).unwrap();
        let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for &t in found.as_slice() {
            prop_assert!((0.0..=1.0).contains(&t));
            prop_assert!(eval(&c, t).abs() <= 1e-10 * scale, "p({}) = {}", t, eval(&c, t));
        }
        for r in bisection_roots(&c, 0.0, 1.0) {
            let near = found.as_slice().iter().any(|t| (t - r).abs() < 1e-7);
            prop_assert!(near, "missed root {} in {:?}", r, found.as_slice());
        }
    }

    #[test]
    fn reversing_negates_coverage(seed in any::<u64>(), d in 2u32..7) {
        let b = blob(seed);
        let grid = RasterGrid::new(d).unwrap();
        let fwd = coverage(&b, grid).unwrap();
        let rev = coverage(&b.reversed(), grid).unwrap();
        for (a, r) in fwd.alpha.iter().zip(&rev.alpha) {
            prop_assert!((a + r).abs() <= 1e-12);
        }
    }

    #[test]
    fn coarse_pixels_average_fine_ones(seed in any::<u64>(), d in 2u32..6) {
        let b = blob(seed);
        let coarse = coverage(&b, RasterGrid::new(d).unwrap()).unwrap();
        let fine = coverage(&b, RasterGrid::new(d + 1).unwrap()).unwrap();
        let n = 1usize << d;
        for y in 0..n {
            for x in 0..n {
                let avg = (fine.at(2 * x, 2 * y) + fine.at(2 * x + 1, 2 * y)
                    + fine.at(2 * x, 2 * y + 1) + fine.at(2 * x + 1, 2 * y + 1)) / 4.0;
                prop_assert!((avg - coarse.at(x, y)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn priors_scale_as_expected(seed in any::<u64>(), s in prop_oneof![Just(0.5), Just(2.0), Just(3.0)]) {
        let b = blob(seed);
        let scaled = b.map_points(|p| p * s);
        let rel = |a: f64, e: f64| (a - e).abs() / e.abs().max(1e-300);
        prop_assert!(rel(e_lpt(&scaled), s * e_lpt(&b)) <= 1e-10);
        prop_assert!(rel(e_hpt(&scaled), e_hpt(&b) / s) <= 1e-10);
        prop_assert!((e_apt(&scaled) - e_apt(&b)).abs() <= 1e-10 * e_apt(&b).max(1.0));
    }

    #[test]
    fn translation_moves_coverage_by_whole_pixels(seed in any::<u64>(), dx in -2i32..3, dy in -2i32..3) {
        let grid = RasterGrid::new(5).unwrap();
        let b = shapes::random_blob(&mut rng(seed), Point::new(0.5, 0.5), 0.25, 5);
        let k = 1.0 / 32.0;
        let moved = b.map_points(|p| Point::new(p.x + dx as f64 * k, p.y + dy as f64 * k));
        let a = coverage(&b, grid).unwrap();
        let m = coverage(&moved, grid).unwrap();
        for y in 4..28usize {
            for x in 4..28usize {
                let (sx, sy) = ((x as i32 + dx) as usize, (y as i32 + dy) as usize);
                prop_assert!((a.at(x, y) - m.at(sx, sy)).abs() <= 1e-10);
            }
        }
    }
}
