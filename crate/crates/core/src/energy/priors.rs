//! Shape priors and their gradients.
//!
//! * SPT: for every self-crossing `(t1, t2)`, the shorter of the two arcs it
//!   cuts off.
//! * APT: turning angle between incoming and outgoing handles at each joint.
//! * HPT: reciprocal handle lengths, a barrier against collapsing handles.
//! * LPT: total arc length.

use super::EnergyWeights;
use crate::geometry::{bernstein, bernstein_deriv, Bezigon, Point, ARC_LENGTH_TOL, INTERSECTION_TOL};

/// Handle lengths below this are clamped.
pub const EPS_LEN: f64 = 1e-9;

/// Which terms to evaluate: the whole curve, or only those touched by the
/// overlapped piece made of segments `j` and `j + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PriorScope {
    All,
    Piece(usize),
}

impl PriorScope {
    fn segments(self, n: usize) -> Vec<usize> {
        match self {
            PriorScope::All => (0..n).collect(),
            PriorScope::Piece(j) => vec![j % n, (j + 1) % n],
        }
    }

    fn joints(self, n: usize) -> Vec<usize> {
        match self {
            PriorScope::All => (0..n).collect(),
            PriorScope::Piece(j) => {
                let mut v = vec![j % n, (j + 1) % n, (j + 2) % n];
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PriorTerms {
    pub spt: f64,
    pub apt: f64,
    pub hpt: f64,
    pub lpt: f64,
}

impl PriorTerms {
    pub fn weighted(&self, w: &EnergyWeights) -> f64 {
        w.spt * self.spt + w.apt * self.apt + w.hpt * self.hpt + w.lpt * self.lpt
    }

    /// The same terms for the curve scaled by `s`: lengths grow by `s`,
    /// reciprocal lengths shrink by it, angles are unchanged.
    pub fn scaled(&self, s: f64) -> PriorTerms {
        PriorTerms { spt: self.spt * s, apt: self.apt, hpt: self.hpt / s, lpt: self.lpt * s }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PriorFlags {
    /// Handles shorter than [`EPS_LEN`].
    pub degenerate_handles: usize,
    /// Self-crossings found.
    pub intersections: usize,
}

fn add(grad: &mut [f64], idx: usize, v: Point) {
    grad[2 * idx] += v.x;
    grad[2 * idx + 1] += v.y;
}

/// Turning angle at joint `j` in `[0, π]`.
fn joint_angle(b: &Bezigon, j: usize) -> (f64, bool) {
    let (a, c) = b.joint_tangents(j);
    let degenerate = a.norm() < EPS_LEN || c.norm() < EPS_LEN;
    (a.cross(c).abs().atan2(a.dot(c)), degenerate)
}

fn apt_scoped(b: &Bezigon, scope: PriorScope, grad: Option<&mut [f64]>, flags: &mut PriorFlags) -> f64 {
    let n = b.num_segments();
    let n3 = 3 * n;
    let mut total = 0.0;
    let mut grad = grad;
    for j in scope.joints(n) {
        let (theta, degenerate) = joint_angle(b, j);
        flags.degenerate_handles += degenerate as usize;
        total += theta;
        let Some(g) = grad.as_deref_mut() else { continue };
        let (a, c) = b.joint_tangents(j);
        let cr = a.cross(c);
        let dt = a.dot(c);
        let denom = cr * cr + dt * dt;
        if denom < EPS_LEN * EPS_LEN * EPS_LEN * EPS_LEN {
            continue;
        }
        // θ = atan2(|a×c|, a·c)
        let s = if cr >= 0.0 { 1.0 } else { -1.0 };
        let (u, v) = (dt / denom, -cr.abs() / denom);
        let da = Point::new(c.y, -c.x) * (s * u) + c * v;
        let dc = Point::new(-a.y, a.x) * (s * u) + a * v;
        // a = p0_j − p2_{j−1}, c = p1_j − p0_j
        add(g, 3 * j, da - dc);
        add(g, (3 * j + n3 - 1) % n3, -da);
        add(g, 3 * j + 1, dc);
    }
    total
}

fn hpt_scoped(b: &Bezigon, scope: PriorScope, grad: Option<&mut [f64]>, flags: &mut PriorFlags) -> f64 {
    let n = b.num_segments();
    let mut total = 0.0;
    let mut grad = grad;
    for j in scope.segments(n) {
        let pts = [b.point_index(j, 0), b.point_index(j, 1), b.point_index(j, 2), b.point_index(j, 3)];
        for (anchor, handle) in [(pts[0], pts[1]), (pts[3], pts[2])] {
            let v = b.points()[handle] - b.points()[anchor];
            let len = v.norm();
            if len < EPS_LEN {
                flags.degenerate_handles += 1;
                total += 1.0 / EPS_LEN;
                continue;
            }
            total += 1.0 / len;
            if let Some(g) = grad.as_deref_mut() {
                let d = v * (-1.0 / (len * len * len));
                add(g, handle, d);
                add(g, anchor, -d);
            }
        }
    }
    total
}

/// Arc length over `[t1, t2]` and, optionally, its gradient scaled by `k`
/// with the quadrature nodes held fixed.
fn arc_length_with_grad(b: &Bezigon, t1: f64, t2: f64, k: f64, grad: Option<&mut [f64]>) -> f64 {
    let mut nodes = Vec::new();
    let len = b.arc_length_nodes(t1, t2, ARC_LENGTH_TOL, &mut nodes);
    if let Some(g) = grad {
        for (j, t, w) in nodes {
            let d = b.segment(j).deriv(t);
            let s = d.norm();
            if s == 0.0 {
                continue;
            }
            let u = d * (k * w / s);
            let bd = bernstein_deriv(t);
            for (i, &bi) in bd.iter().enumerate() {
                add(g, b.point_index(j, i), u * bi);
            }
        }
    }
    len
}

fn lpt_scoped(b: &Bezigon, scope: PriorScope, grad: Option<&mut [f64]>) -> f64 {
    let n = b.num_segments();
    let mut grad = grad;
    match scope {
        PriorScope::All => arc_length_with_grad(b, 0.0, n as f64, 1.0, grad),
        PriorScope::Piece(_) => scope
            .segments(n)
            .into_iter()
            .map(|j| arc_length_with_grad(b, j as f64, j as f64 + 1.0, 1.0, grad.as_deref_mut()))
            .sum(),
    }
}

fn spt_impl(b: &Bezigon, grad: Option<&mut [f64]>, flags: &mut PriorFlags) -> f64 {
    let pairs = b.self_intersections(INTERSECTION_TOL);
    flags.intersections += pairs.len();
    if pairs.is_empty() {
        return 0.0;
    }
    let n = b.num_segments() as f64;
    let total_len = b.length();
    let mut grad = grad;
    let mut sum = 0.0;
    for p in pairs {
        let inner = b.arc_length(p.t1, p.t2);
        let k = if inner <= total_len - inner {
            sum += inner;
            arc_length_with_grad(b, p.t1, p.t2, 1.0, grad.as_deref_mut());
            1.0
        } else {
            sum += total_len - inner;
            if grad.is_some() {
                arc_length_with_grad(b, 0.0, n, 1.0, grad.as_deref_mut());
                arc_length_with_grad(b, p.t1, p.t2, -1.0, grad.as_deref_mut());
            }
            -1.0
        };
        if let Some(g) = grad.as_deref_mut() {
            crossing_motion(b, p.t1, p.t2, k, g);
        }
    }
    sum
}

/// Adds `k · ∂L(t1, t2)/∂θ` through the motion of the crossing parameters,
/// from differentiating `S(t1) = S(t2)`. Tangential crossings are skipped.
fn crossing_motion(b: &Bezigon, t1: f64, t2: f64, k: f64, g: &mut [f64]) {
    let (j1, u1) = b.locate(t1);
    let (j2, u2) = b.locate(t2);
    let a = b.segment(j1).deriv(u1);
    let c = b.segment(j2).deriv(u2);
    let x = a.cross(c);
    if x.abs() < 1e-12 * (a.norm_sq() + c.norm_sq()).max(f64::MIN_POSITIVE) {
        return;
    }
    // dt1 = -(D×c)/x, dt2 = (a×D)/x with D = ∂S(t1) - ∂S(t2)
    let w = (Point::new(-a.y, a.x) * c.norm() + Point::new(c.y, -c.x) * a.norm()) * (k / x);
    for (i, bi) in bernstein(u1).into_iter().enumerate() {
        add(g, b.point_index(j1, i), w * bi);
    }
    for (i, bi) in bernstein(u2).into_iter().enumerate() {
        add(g, b.point_index(j2, i), w * -bi);
    }
}

pub fn e_spt(b: &Bezigon) -> f64 {
    spt_impl(b, None, &mut PriorFlags::default())
}

pub fn e_apt(b: &Bezigon) -> f64 {
    apt_scoped(b, PriorScope::All, None, &mut PriorFlags::default())
}

pub fn e_hpt(b: &Bezigon) -> f64 {
    hpt_scoped(b, PriorScope::All, None, &mut PriorFlags::default())
}

pub fn e_lpt(b: &Bezigon) -> f64 {
    lpt_scoped(b, PriorScope::All, None)
}

fn with_grad(b: &Bezigon, f: impl FnOnce(&mut [f64])) -> Vec<f64> {
    let mut g = vec![0.0; 2 * b.points().len()];
    f(&mut g);
    g
}

/// Gradient of [`e_spt`] for the current set of crossings, including the
/// motion of the crossing parameters.
pub fn spt_gradient(b: &Bezigon) -> Vec<f64> {
    with_grad(b, |g| {
        spt_impl(b, Some(g), &mut PriorFlags::default());
    })
}

pub fn apt_gradient(b: &Bezigon) -> Vec<f64> {
    with_grad(b, |g| {
        apt_scoped(b, PriorScope::All, Some(g), &mut PriorFlags::default());
    })
}

pub fn hpt_gradient(b: &Bezigon) -> Vec<f64> {
    with_grad(b, |g| {
        hpt_scoped(b, PriorScope::All, Some(g), &mut PriorFlags::default());
    })
}

pub fn lpt_gradient(b: &Bezigon) -> Vec<f64> {
    with_grad(b, |g| {
        lpt_scoped(b, PriorScope::All, Some(g));
    })
}

/// Unweighted prior values within `scope`. SPT is always global and is
/// skipped (reported as 0) when its weight is zero inside a piece.
pub fn prior_terms(b: &Bezigon, scope: PriorScope, weights: &EnergyWeights) -> (PriorTerms, PriorFlags) {
    let mut flags = PriorFlags::default();
    let spt = if scope == PriorScope::All || weights.spt > 0.0 {
        spt_impl(b, None, &mut flags)
    } else {
        0.0
    };
    let terms = PriorTerms {
        spt,
        apt: apt_scoped(b, scope, None, &mut flags),
        hpt: hpt_scoped(b, scope, None, &mut flags),
        lpt: lpt_scoped(b, scope, None),
    };
    (terms, flags)
}

/// Weighted value and gradient of the priors within `scope`.
pub fn prior_gradient(
    b: &Bezigon,
    weights: &EnergyWeights,
    scope: PriorScope,
) -> (PriorTerms, Vec<f64>, PriorFlags) {
    let mut flags = PriorFlags::default();
    let len = 2 * b.points().len();
    let mut total = vec![0.0; len];
    let mut scratch = vec![0.0; len];
    let mut terms = PriorTerms::default();
    let accumulate = |w: f64, scratch: &mut Vec<f64>, total: &mut Vec<f64>| {
        for (t, s) in total.iter_mut().zip(scratch.iter_mut()) {
            *t += w * *s;
            *s = 0.0;
        }
    };
    if weights.spt > 0.0 || scope == PriorScope::All {
        terms.spt = spt_impl(b, Some(&mut scratch), &mut flags);
        accumulate(weights.spt, &mut scratch, &mut total);
    }
    terms.apt = apt_scoped(b, scope, Some(&mut scratch), &mut flags);
    accumulate(weights.apt, &mut scratch, &mut total);
    terms.hpt = hpt_scoped(b, scope, Some(&mut scratch), &mut flags);
    accumulate(weights.hpt, &mut scratch, &mut total);
    terms.lpt = lpt_scoped(b, scope, Some(&mut scratch));
    accumulate(weights.lpt, &mut scratch, &mut total);
    (terms, total, flags)
}
