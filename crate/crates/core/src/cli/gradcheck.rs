//! Analytic gradients against central differences on random bezigons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::energy::{
    apt_gradient, data_energy, data_gradient, e_apt, e_hpt, e_lpt, hpt_gradient, lpt_gradient,
    EnergyContext, EnergyError, VectorShape,
};
use crate::geometry::{shapes, Bezigon, Point};
use crate::raster::{rasterize, Background, RasterGrid};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GradcheckOptions {
    pub trials: usize,
    pub seed: u64,
    pub depth: u32,
    /// Central-difference step in normalized coordinates.
    pub step: f64,
    pub data_tol: f64,
    /// Fraction of unflagged data coordinates that must be within `data_tol`.
    pub data_pass_fraction: f64,
    /// Largest admissible fraction of flagged data coordinates.
    pub max_flagged_fraction: f64,
    pub prior_tol: f64,
}

impl Default for GradcheckOptions {
    fn default() -> Self {
        GradcheckOptions {
            trials: 100,
            seed: 1,
            depth: 5,
            step: 1e-5,
            data_tol: 1e-3,
            data_pass_fraction: 0.99,
            max_flagged_fraction: 0.01,
            prior_tol: 1e-4,
        }
    }
}

/// One row of the table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermCheck {
    pub term: &'static str,
    pub coordinates: usize,
    pub flagged: usize,
    pub within_tol: usize,
    pub max_rel_error: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradcheckTable {
    pub options: GradcheckOptions,
    pub rows: Vec<TermCheck>,
}

impl GradcheckTable {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{:<6} {:>8} {:>8} {:>10} {:>12} {:>9}  result\n",
            "term", "coords", "flagged", "within", "max rel", "tol"
        );
        for r in &self.rows {
            s += &format!(
                "{:<6} {:>8} {:>8} {:>10} {:>12.3e} {:>9.1e}  {}\n",
                r.term,
                r.coordinates,
                r.flagged,
                r.within_tol,
                r.max_rel_error,
                r.tol,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        s
    }
}

/// `|a - f| / max(|a|, |f|, floor)`.
pub fn relative_error(analytic: f64, fd: f64, floor: f64) -> f64 {
    let d = (analytic - fd).abs();
    if d == 0.0 {
        return 0.0;
    }
    d / analytic.abs().max(fd.abs()).max(floor)
}

fn central(params: &[f64], k: usize, h: f64, f: &impl Fn(&Bezigon) -> f64) -> f64 {
    let eval = |d: f64| {
        let mut p = params.to_vec();
        p[k] += d;
        f(&Bezigon::from_params(&p).expect("perturbed parameters keep the point count"))
    };
    (eval(h) - eval(-h)) / (2.0 * h)
}

struct Accum {
    row: TermCheck,
}

impl Accum {
    fn new(term: &'static str, tol: f64) -> Self {
        Accum {
            row: TermCheck { term, coordinates: 0, flagged: 0, within_tol: 0, max_rel_error: 0.0, tol, pass: false },
        }
    }

    fn push(&mut self, e: f64) {
        self.row.coordinates += 1;
        if e <= self.row.tol {
            self.row.within_tol += 1;
        }
        self.row.max_rel_error = self.row.max_rel_error.max(e);
    }
}

fn random_case(rng: &mut ChaCha8Rng) -> (Bezigon, Bezigon, [f64; 3], [f64; 3], [f64; 3]) {
    let c = Point::new(rng.gen_range(0.4..0.6), rng.gen_range(0.4..0.6));
    let r = rng.gen_range(0.2..0.32);
    let n = rng.gen_range(3..=6);
    let shape = shapes::random_blob(rng, c, r, n);
    let tc = Point::new(rng.gen_range(0.4..0.6), rng.gen_range(0.4..0.6));
    let (tr, tn) = (r * rng.gen_range(0.8..1.1), rng.gen_range(3..=5));
    let target = shapes::random_blob(rng, tc, tr, tn);
    let mut color = || [rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()];
    (shape, target, color(), color(), color())
}

/// Runs the check. Trials are reproducible from `opts.seed`.
///
/// Data-term errors use a floor of `1e-3` times the largest analytic
/// component of the same trial, so coordinates whose gradient vanishes
/// compare in absolute terms. Prior errors use a floor of `1e-8`.
pub fn gradcheck(opts: &GradcheckOptions) -> Result<GradcheckTable, EnergyError> {
    let grid = RasterGrid::new(opts.depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut data = Accum::new("data", opts.data_tol);
    let mut priors = [
        (Accum::new("apt", opts.prior_tol), e_apt as fn(&Bezigon) -> f64, apt_gradient as fn(&Bezigon) -> Vec<f64>),
        (Accum::new("hpt", opts.prior_tol), e_hpt, hpt_gradient),
        (Accum::new("lpt", opts.prior_tol), e_lpt, lpt_gradient),
    ];
    for _ in 0..opts.trials {
        let (b, target, color, target_color, bg) = random_case(&mut rng);
        let bg = Background::Solid(bg);
        let input = rasterize(&VectorShape::new(target, target_color), &bg, grid)?;
        let ctx = EnergyContext::for_shape(input, bg, &b)?;
        let shape = VectorShape::new(b.clone(), color);
        let g = data_gradient(&shape, &ctx)?;
        let params = b.params();
        let scale = g.geometry.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let energy = |q: &Bezigon| {
            data_energy(&VectorShape { bezigon: q.clone(), color }, &ctx).expect("valid perturbed shape")
        };
        for k in 0..params.len() {
            if g.flagged[k] {
                data.row.flagged += 1;
                continue;
            }
            let fd = central(&params, k, opts.step, &energy);
            data.push(relative_error(g.geometry[k], fd, 1e-3 * scale));
        }
        for (acc, value, grad) in priors.iter_mut() {
            let a = grad(&b);
            for (k, &ak) in a.iter().enumerate() {
                let fd = central(&params, k, opts.step, value);
                acc.push(relative_error(ak, fd, 1e-8));
            }
        }
    }
    let total = data.row.coordinates + data.row.flagged;
    data.row.pass = total > 0
        && (data.row.flagged as f64) < opts.max_flagged_fraction * total as f64
        && data.row.within_tol as f64 >= opts.data_pass_fraction * data.row.coordinates as f64;
    let mut rows = vec![data.row];
    for (mut acc, _, _) in priors {
        acc.row.pass = acc.row.max_rel_error <= acc.row.tol;
        rows.push(acc.row);
    }
    Ok(GradcheckTable { options: *opts, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let opts = GradcheckOptions { trials: 4, depth: 3, seed: 9, ..Default::default() };
        let a = gradcheck(&opts).unwrap();
        let b = gradcheck(&opts).unwrap();
        assert_eq!(a, b);
        assert!(a.pass(), "{}", a.render());
    }

    #[test]
    fn relative_error_floor() {
        assert_eq!(relative_error(1.0, 1.0, 0.0), 0.0);
        assert!((relative_error(1e-12, 0.0, 1e-6) - 1e-6).abs() < 1e-18);
        assert!((relative_error(2.0, 1.0, 0.0) - 0.5).abs() < 1e-15);
    }
}
