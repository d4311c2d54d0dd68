//! Limited-memory BFGS with a backtracking (Armijo) line search.

use std::collections::VecDeque;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GradientTolerance,
    StepTolerance,
    ValueTolerance,
    MaxIterations,
    LineSearchFailed,
    NonFiniteStart,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimizeReport {
    pub iterations: usize,
    pub evaluations: usize,
    pub initial_value: f64,
    pub final_value: f64,
    pub termination: Termination,
}

/// Settings for [`minimize`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct MinimizeOptions {
    pub max_iters: usize,
    /// Stop when `‖∇f‖∞` falls to this.
    pub grad_tol: f64,
    /// Stop when an accepted step moves no coordinate more than this.
    pub step_tol: f64,
    /// Stop when an iteration lowers `f` by less than this fraction.
    pub value_rel_tol: f64,
    pub history: usize,
    /// Largest coordinate change of the first trial step (and of trial steps
    /// after a memory reset).
    pub initial_step: f64,
    /// Trial steps are shortened so no coordinate moves more than this.
    pub max_step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            max_iters: 200,
            grad_tol: 1e-6,
            step_tol: 1e-10,
            value_rel_tol: 1e-10,
            history: 8,
            initial_step: 1e-3,
            max_step: f64::INFINITY,
        }
    }
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Minimizes `f` from `x0`. The objective returns `None` (or a non-finite
/// value) for infeasible points; such trial steps are shrunk. The returned
/// point never has a higher value than `x0`.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &MinimizeOptions) -> (Vec<f64>, MinimizeReport)
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let mut evaluations = 1;
    let finite = |v: &(f64, Vec<f64>)| v.0.is_finite() && v.1.iter().all(|g| g.is_finite());
    let Some((mut fx, mut g)) = f(x0).filter(finite) else {
        let report = MinimizeReport {
            iterations: 0,
            evaluations,
            initial_value: f64::NAN,
            final_value: f64::NAN,
            termination: Termination::NonFiniteStart,
        };
        return (x0.to_vec(), report);
    };
    let f0 = fx;
    let mut x = x0.to_vec();
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut termination = Termination::MaxIterations;
    let mut iterations = 0;

    while iterations < opts.max_iters {
        if inf_norm(&g) <= opts.grad_tol {
            termination = Termination::GradientTolerance;
            break;
        }
        // two-loop recursion
        let mut d: Vec<f64> = g.iter().map(|v| -v).collect();
        let mut alphas = Vec::with_capacity(memory.len());
        for (s, y, rho) in memory.iter().rev() {
            let a = rho * dot(s, &d);
            for (di, yi) in d.iter_mut().zip(y) {
                *di -= a * yi;
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = memory.back() {
            let gamma = dot(s, y) / dot(y, y);
            for di in &mut d {
                *di *= gamma;
            }
        }
        for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &d);
            for (di, si) in d.iter_mut().zip(s) {
                *di += (a - b) * si;
            }
        }
        let mut slope = dot(&g, &d);
        if memory.is_empty() || !(slope < 0.0) {
            memory.clear();
            let scale = opts.initial_step / inf_norm(&g);
            d = g.iter().map(|v| -v * scale).collect();
            slope = dot(&g, &d);
        }
        let longest = inf_norm(&d);
        if longest > opts.max_step {
            let k = opts.max_step / longest;
            d.iter_mut().for_each(|v| *v *= k);
            slope *= k;
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + step * di).collect();
            evaluations += 1;
            if let Some(v) = f(&trial).filter(finite) {
                if v.0 <= fx + ARMIJO_C1 * step * slope {
                    accepted = Some((trial, v));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, (fn_, gn))) = accepted else {
            if memory.is_empty() {
                termination = Termination::LineSearchFailed;
                break;
            }
            memory.clear();
            continue;
        };
        iterations += 1;
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let decrease = fx - fn_;
        x = xn;
        fx = fn_;
        g = gn;
        if inf_norm(&s) <= opts.step_tol {
            termination = Termination::StepTolerance;
            break;
        }
        if decrease <= opts.value_rel_tol * fx.abs().max(f64::MIN_POSITIVE) {
            termination = Termination::ValueTolerance;
            break;
        }
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if memory.len() == opts.history.max(1) {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }
    }
    let report = MinimizeReport {
        iterations,
        evaluations,
        initial_value: f0,
        final_value: fx,
        termination,
    };
    (x, report)
}
