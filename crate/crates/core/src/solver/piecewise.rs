//! Overlapped piece sweeps.
//!
//! Piece `j` spans segments `j` and `j + 1`. Its free variables are the five
//! control points strictly between the two outer anchors, so consecutive
//! pieces share two points and every interior point is optimized twice per
//! sweep.

use serde::{Deserialize, Serialize};

use super::lbfgs::{minimize, MinimizeOptions, Termination};
use crate::energy::{
    data_energy, data_gradient, prior_gradient, total_energy, EnergyBreakdown, EnergyContext,
    EnergyError, EnergyWeights, PriorScope, VectorShape,
};
use crate::geometry::Bezigon;
use crate::imaging::Rgb;
use crate::raster::{coverage, RasterGrid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Quasi-Newton iterations per piece solve. Kept small: a piece solved to
    /// convergence against misplaced fixed anchors tends to settle into a
    /// cusp, and later sweeps do not leave it.
    pub max_iters: usize,
    pub grad_tol: f64,
    pub step_tol: f64,
    pub value_rel_tol: f64,
    pub history: usize,
    pub initial_step: f64,
    pub max_sweeps: usize,
    pub sweep_rel_tol: f64,
    pub global_pass: bool,
    /// Geometry iterations between two color solves in the global pass.
    pub global_block_iters: usize,
    /// Color/geometry alternations in the global pass.
    pub global_rounds: usize,
    /// Longest coordinate move of a single trial step, in pixels.
    pub max_step_px: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 10,
            grad_tol: 1e-6,
            step_tol: 1e-10,
            value_rel_tol: 1e-10,
            history: 8,
            initial_step: 1e-3,
            max_sweeps: 3,
            sweep_rel_tol: 1e-4,
            global_pass: true,
            global_block_iters: 50,
            global_rounds: 4,
            max_step_px: 1.0,
        }
    }
}

impl SolverOptions {
    fn minimize_options(&self, grid: RasterGrid) -> MinimizeOptions {
        MinimizeOptions {
            max_step: self.max_step_px / grid.size() as f64,
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            step_tol: self.step_tol,
            value_rel_tol: self.value_rel_tol,
            history: self.history,
            initial_step: self.initial_step,
        }
    }
}

/// The overlapped piece starting at segment `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PieceSelector {
    pub j: usize,
}

impl PieceSelector {
    /// Indices into the control point list of the five free points.
    pub fn free_points(&self, n_segments: usize) -> [usize; 5] {
        let n3 = 3 * n_segments;
        let base = 3 * (self.j % n_segments);
        std::array::from_fn(|k| (base + 1 + k) % n3)
    }

    /// The two fixed outer anchors.
    pub fn anchors(&self, n_segments: usize) -> [usize; 2] {
        let n3 = 3 * n_segments;
        let base = 3 * (self.j % n_segments);
        [base, (base + 6) % n3]
    }

    fn free_params(&self, n_segments: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .free_points(n_segments)
            .iter()
            .flat_map(|&p| [2 * p, 2 * p + 1])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PieceOutcome {
    pub j: usize,
    pub accepted: bool,
    pub iterations: usize,
    pub energy_before: f64,
    pub energy_after: f64,
    pub termination: Termination,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizeReport {
    /// Total energy at the start and after every sweep (and the global pass).
    pub trace: Vec<EnergyBreakdown>,
    pub sweeps: usize,
    pub iterations: usize,
    pub pieces_accepted: usize,
    pub pieces_rejected: usize,
    pub global_pass_accepted: bool,
    pub degenerate_roots: usize,
    pub degenerate_handles: usize,
    pub termination: String,
}

impl OptimizeReport {
    /// Whether every recorded total is no larger than the one before it.
    pub fn is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1].total <= w[0].total)
    }
}

struct Counters {
    degenerate_roots: usize,
    degenerate_handles: usize,
}

/// Value and gradient over the free parameter subset `free` of `base`.
fn restricted_objective<'a>(
    base: &'a [f64],
    free: &'a [usize],
    color: Rgb,
    ctx: &'a EnergyContext,
    weights: &'a EnergyWeights,
    scope: PriorScope,
    counters: &'a mut Counters,
) -> impl FnMut(&[f64]) -> Option<(f64, Vec<f64>)> + 'a {
    let mut params = base.to_vec();
    let weights = ctx.prior_weights(weights);
    move |z: &[f64]| {
        for (&k, &v) in free.iter().zip(z) {
            params[k] = v;
        }
        let bezigon = Bezigon::from_params(&params).ok()?;
        let shape = VectorShape { bezigon, color };
        let e = data_energy(&shape, ctx).ok()?;
        let dg = data_gradient(&shape, ctx).ok()?;
        let (terms, pg, flags) = prior_gradient(&shape.bezigon, &weights, scope);
        counters.degenerate_roots += dg.degenerate_roots;
        counters.degenerate_handles += flags.degenerate_handles;
        let value = e + terms.weighted(&weights);
        let grad = free.iter().map(|&k| dg.geometry[k] + pg[k]).collect();
        Some((value, grad))
    }
}

fn piece_impl(
    shape: &VectorShape,
    ctx: &EnergyContext,
    weights: &EnergyWeights,
    piece: PieceSelector,
    opts: &SolverOptions,
    before: &EnergyBreakdown,
    counters: &mut Counters,
) -> Result<(VectorShape, EnergyBreakdown, PieceOutcome), EnergyError> {
    let n = shape.bezigon.num_segments();
    let base = shape.bezigon.params();
    let free = piece.free_params(n);
    let z0: Vec<f64> = free.iter().map(|&k| base[k]).collect();
    let objective = restricted_objective(
        &base,
        &free,
        shape.color,
        ctx,
        weights,
        PriorScope::Piece(piece.j % n),
        counters,
    );
    let (z, report) = minimize(objective, &z0, &opts.minimize_options(ctx.grid));
    let mut params = base.clone();
    for (&k, &v) in free.iter().zip(&z) {
        params[k] = v;
    }
    let mut outcome = PieceOutcome {
        j: piece.j,
        accepted: false,
        iterations: report.iterations,
        energy_before: before.total,
        energy_after: before.total,
        termination: report.termination,
    };
    if z == z0 {
        return Ok((shape.clone(), *before, outcome));
    }
    let candidate = match Bezigon::from_params(&params) {
        Ok(b) => VectorShape { bezigon: b, color: shape.color },
        Err(_) => return Ok((shape.clone(), *before, outcome)),
    };
    match total_energy(&candidate, ctx, weights) {
        Ok(after) if after.total <= before.total => {
            outcome.accepted = true;
            outcome.energy_after = after.total;
            Ok((candidate, after, outcome))
        }
        _ => Ok((shape.clone(), *before, outcome)),
    }
}

/// Minimizes the energy over one piece's ten free scalars. The result is
/// kept only if the full total energy does not increase.
pub fn optimize_piece(
    shape: &VectorShape,
    ctx: &EnergyContext,
    weights: &EnergyWeights,
    piece: PieceSelector,
    opts: &SolverOptions,
) -> Result<(VectorShape, PieceOutcome), EnergyError> {
    let before = total_energy(shape, ctx, weights)?;
    let mut counters = Counters { degenerate_roots: 0, degenerate_handles: 0 };
    let (s, _, o) = piece_impl(shape, ctx, weights, piece, opts, &before, &mut counters)?;
    Ok((s, o))
}

/// Closed-form least-squares fill color for the current coverage, clamped
/// to `[0, 1]`. Unchanged when the shape covers nothing.
pub fn optimize_color(shape: &VectorShape, ctx: &EnergyContext) -> Result<Rgb, EnergyError> {
    let alpha = coverage(&shape.bezigon, ctx.grid)?;
    let n = ctx.grid.size() as usize;
    let mut num = [0.0; 3];
    let mut den = 0.0;
    for (i, &a) in alpha.alpha.iter().enumerate() {
        if !ctx.mask[i] {
            continue;
        }
        let a = a.clamp(0.0, 1.0);
        if a == 0.0 {
            continue;
        }
        let (x, y) = (i % n, i / n);
        let bg = ctx.background.at(x, y);
        let input = ctx.input.rgb(x, y);
        for c in 0..3 {
            num[c] += a * (input[c] - (1.0 - a) * bg[c]);
        }
        den += a * a;
    }
    if den <= 0.0 {
        return Ok(shape.color);
    }
    Ok(num.map(|v| (v / den).clamp(0.0, 1.0)))
}

fn global_pass(
    shape: &VectorShape,
    ctx: &EnergyContext,
    weights: &EnergyWeights,
    opts: &SolverOptions,
    before: &EnergyBreakdown,
    counters: &mut Counters,
) -> Result<(VectorShape, EnergyBreakdown, usize), EnergyError> {
    let mut best = (shape.clone(), *before);
    let mut iterations = 0;
    let mut current = shape.clone();
    let mut last = before.total;
    let mopts = MinimizeOptions { max_iters: opts.global_block_iters, ..opts.minimize_options(ctx.grid) };
    for _ in 0..opts.global_rounds.max(1) {
        current.color = optimize_color(&current, ctx)?;
        let base = current.bezigon.params();
        let free: Vec<usize> = (0..base.len()).collect();
        let objective =
            restricted_objective(&base, &free, current.color, ctx, weights, PriorScope::All, counters);
        let (x, report) = minimize(objective, &base, &mopts);
        iterations += report.iterations;
        if let Ok(b) = Bezigon::from_params(&x) {
            current.bezigon = b;
        }
        let e = total_energy(&current, ctx, weights)?;
        if e.total <= best.1.total {
            best = (current.clone(), e);
        }
        let done = last - e.total <= opts.sweep_rel_tol * last.abs();
        last = e.total;
        if done {
            break;
        }
    }
    Ok((best.0, best.1, iterations))
}

/// Sweeps all pieces until the relative decrease of a sweep drops below
/// `sweep_rel_tol` or `max_sweeps` is reached, then optionally refines all
/// control points and the color together. Never returns a shape with higher
/// total energy than the input.
pub fn optimize_bezigon(
    shape: &VectorShape,
    ctx: &EnergyContext,
    weights: &EnergyWeights,
    opts: &SolverOptions,
) -> Result<(VectorShape, OptimizeReport), EnergyError> {
    let n = shape.bezigon.num_segments();
    let mut current = shape.clone();
    let mut energy = total_energy(&current, ctx, weights)?;
    let mut report = OptimizeReport {
        trace: vec![energy],
        sweeps: 0,
        iterations: 0,
        pieces_accepted: 0,
        pieces_rejected: 0,
        global_pass_accepted: false,
        degenerate_roots: 0,
        degenerate_handles: 0,
        termination: "max_sweeps".into(),
    };
    let mut counters = Counters { degenerate_roots: 0, degenerate_handles: 0 };
    for _ in 0..opts.max_sweeps {
        let start = energy.total;
        for j in 0..n {
            let (s, e, o) =
                piece_impl(&current, ctx, weights, PieceSelector { j }, opts, &energy, &mut counters)?;
            report.iterations += o.iterations;
            if o.accepted {
                report.pieces_accepted += 1;
            } else {
                report.pieces_rejected += 1;
            }
            current = s;
            energy = e;
        }
        report.sweeps += 1;
        report.trace.push(energy);
        if start - energy.total <= opts.sweep_rel_tol * start.abs() {
            report.termination = "converged".into();
            break;
        }
    }
    if opts.global_pass {
        let (s, e, iters) = global_pass(&current, ctx, weights, opts, &energy, &mut counters)?;
        report.iterations += iters;
        if e.total < energy.total {
            report.global_pass_accepted = true;
            current = s;
            energy = e;
        }
        report.trace.push(energy);
    }
    report.degenerate_roots = counters.degenerate_roots;
    report.degenerate_handles = counters.degenerate_handles;
    Ok((current, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shapes, Point};
    use crate::raster::{rasterize, Background, RasterGrid};

    fn scene(d: u32) -> (VectorShape, EnergyContext) {
        let grid = RasterGrid::new(d).unwrap();
        let b = shapes::circle(Point::new(0.5, 0.5), 0.3, 4);
        let shape = VectorShape::new(b.clone(), [0.1, 0.2, 0.7]);
        let bg = Background::Solid([1.0; 3]);
        let input = rasterize(&shape, &bg, grid).unwrap();
        (shape, EnergyContext::for_shape(input, bg, &b).unwrap())
    }

    #[test]
    fn piece_indices() {
        let p = PieceSelector { j: 3 };
        assert_eq!(p.free_points(4), [10, 11, 0, 1, 2]);
        assert_eq!(p.anchors(4), [9, 3]);
    }

    #[test]
    fn color_recovered_exactly() {
        let (mut shape, ctx) = scene(5);
        let truth = shape.color;
        shape.color = [0.5; 3];
        let c = optimize_color(&shape, &ctx).unwrap();
        for k in 0..3 {
            assert!((c[k] - truth[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn piece_reduces_displacement_and_keeps_anchors() {
        let (truth, ctx) = scene(6);
        let px = 1.0 / 64.0;
        let center = Point::new(0.5, 0.5);
        let off_curve = |p: Point| ((p - center).norm() - 0.3).abs() / px;
        let mut b = truth.bezigon.clone();
        let joint = b.points()[3];
        b.set_point(3, joint + (joint - center) * (2.0 * px / 0.3));
        let shape = VectorShape { bezigon: b, color: truth.color };
        assert!((off_curve(shape.bezigon.points()[3]) - 2.0).abs() < 1e-9);
        let w = EnergyWeights::default();
        let (out, o) =
            optimize_piece(&shape, &ctx, &w, PieceSelector { j: 0 }, &SolverOptions::default()).unwrap();
        assert!(o.accepted && o.energy_after <= o.energy_before);
        assert_eq!(out.bezigon.points()[0], shape.bezigon.points()[0]);
        assert_eq!(out.bezigon.points()[6], shape.bezigon.points()[6]);
        let after = off_curve(out.bezigon.points()[3]);
        assert!(after * 5.0 <= 2.0, "{after} {o:?}");
    }

    #[test]
    fn optimal_piece_is_kept() {
        let (truth, ctx) = scene(5);
        let w = EnergyWeights::zero();
        let (out, o) =
            optimize_piece(&truth, &ctx, &w, PieceSelector { j: 2 }, &SolverOptions::default()).unwrap();
        assert!(o.energy_after <= o.energy_before);
        for (a, b) in out.bezigon.points().iter().zip(truth.bezigon.points()) {
            assert!(a.distance(*b) < 1e-9);
        }
    }

    #[test]
    fn optimal_shape_stays_put() {
        let (truth, ctx) = scene(4);
        let w = EnergyWeights::zero();
        let (out, r) = optimize_bezigon(&truth, &ctx, &w, &SolverOptions::default()).unwrap();
        assert!(r.is_monotone());
        assert_eq!(r.sweeps, 1);
        for (a, b) in out.bezigon.points().iter().zip(truth.bezigon.points()) {
            assert!(a.distance(*b) < 1e-9);
        }
    }
}
