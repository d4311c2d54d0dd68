//! JSON report written by `vectorize --report`.

use serde::Serialize;

use crate::energy::{EnergyBreakdown, EnergyWeights};
use crate::pipeline::{ShapeReport, Vectorization, VectorizeConfig};
use crate::solver::SolverOptions;

/// Bumped whenever a field changes meaning or disappears.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct ShapeEntry {
    pub index: usize,
    pub region: Option<usize>,
    pub hole: bool,
    pub color: [f64; 3],
    pub segments: usize,
    /// `[x, y]` pairs in pixels.
    pub control_points_px: Vec<[f64; 2]>,
    pub initial_energy: EnergyBreakdown,
    pub final_energy: EnergyBreakdown,
    pub trace: Vec<EnergyBreakdown>,
    pub sweeps: usize,
    pub iterations: usize,
    pub pieces_accepted: usize,
    pub pieces_rejected: usize,
    pub global_pass_accepted: bool,
    pub degenerate_roots: usize,
    pub degenerate_handles: usize,
    pub termination: Option<String>,
    pub reverted: bool,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VectorizeReport {
    pub schema_version: u32,
    pub input: String,
    pub width: usize,
    pub height: usize,
    pub canvas: usize,
    pub psnr_resolution: String,
    pub seeded: bool,
    pub background: [f64; 3],
    pub weights: EnergyWeights,
    pub solver: SolverOptions,
    pub normalize_by_l0: bool,
    pub psnr_initial: f64,
    pub psnr_final: f64,
    pub seconds: f64,
    pub shapes: Vec<ShapeEntry>,
}

impl VectorizeReport {
    pub fn new(
        input: &str,
        seeded: bool,
        config: &VectorizeConfig,
        v: &Vectorization,
        seconds: f64,
    ) -> Self {
        let (w, h) = (v.document.width as usize, v.document.height as usize);
        VectorizeReport {
            schema_version: REPORT_SCHEMA_VERSION,
            input: input.to_string(),
            width: w,
            height: h,
            canvas: v.canvas,
            psnr_resolution: format!("{w}x{h}"),
            seeded,
            background: v.background,
            weights: config.weights,
            solver: config.solver,
            normalize_by_l0: config.normalize_by_l0,
            psnr_initial: v.psnr_initial,
            psnr_final: v.psnr_final,
            seconds,
            shapes: v.shapes.iter().zip(&v.document.shapes).map(|(r, s)| entry(r, s)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn entry(r: &ShapeReport, s: &crate::energy::VectorShape) -> ShapeEntry {
    let o = r.optimize.as_ref();
    ShapeEntry {
        index: r.index,
        region: r.region,
        hole: r.hole,
        color: s.color,
        segments: r.segments,
        control_points_px: s.bezigon.points().iter().map(|p| [p.x, p.y]).collect(),
        initial_energy: r.initial_energy,
        final_energy: r.final_energy,
        trace: o.map(|o| o.trace.clone()).unwrap_or_default(),
        sweeps: o.map_or(0, |o| o.sweeps),
        iterations: o.map_or(0, |o| o.iterations),
        pieces_accepted: o.map_or(0, |o| o.pieces_accepted),
        pieces_rejected: o.map_or(0, |o| o.pieces_rejected),
        global_pass_accepted: o.is_some_and(|o| o.global_pass_accepted),
        degenerate_roots: o.map_or(0, |o| o.degenerate_roots),
        degenerate_handles: o.map_or(0, |o| o.degenerate_handles),
        termination: o.map(|o| o.termination.clone()),
        reverted: r.reverted,
        seconds: r.seconds,
    }
}
