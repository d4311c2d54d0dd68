//! Real roots of cubic polynomials on an interval.

/// Up to three sorted real roots.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Roots {
    vals: [f64; 3],
    len: usize,
}

impl Roots {
    fn push(&mut self, v: f64) {
        if self.len < 3 {
            self.vals[self.len] = v;
            self.len += 1;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.vals[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Returned when every coefficient is zero: the polynomial vanishes
/// everywhere and has no isolated roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdenticallyZero;

#[inline]
fn horner(c: &[f64; 4], t: f64) -> f64 {
    ((c[3] * t + c[2]) * t + c[1]) * t + c[0]
}

#[inline]
fn horner_deriv(c: &[f64; 4], t: f64) -> f64 {
    (3.0 * c[3] * t + 2.0 * c[2]) * t + c[1]
}

const REL_EPS: f64 = 1e-14;
const MERGE_EPS: f64 = 1e-9;

/// Real roots of `c0 + c1 t + c2 t² + c3 t³` inside `[lo, hi]`, sorted, with
/// coincident roots collapsed.
///
/// The stationary points (stable quadratic formula) split the interval into
/// monotone pieces; each sign change is then solved by safeguarded Newton
/// iteration to full precision. Values within rounding error of zero at an
/// interval end or a stationary point count as roots there, so tangencies and
/// roots sitting exactly on `lo`/`hi` are reported.
pub fn cubic_roots(c: [f64; 4], lo: f64, hi: f64) -> Result<Roots, IdenticallyZero> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Err(IdenticallyZero);
    }
    let mut knots = [lo, 0.0, 0.0, hi];
    let mut nk = 1;
    let mut crit = Roots::default();
    let (qa, qb, qc) = (3.0 * c[3], 2.0 * c[2], c[1]);
    if qa.abs() > REL_EPS * scale {
        quadratic(qa, qb, qc, &mut crit);
    } else if qb.abs() > REL_EPS * scale {
        crit.push(-qc / qb);
    }
    for &t in crit.as_slice() {
        if t > lo && t < hi {
            knots[nk] = t;
            nk += 1;
        }
    }
    knots[nk] = hi;
    let knots = &knots[..=nk];

    let near_zero = |t: f64| {
        let m = t.abs().max(1.0);
        let bound = ((c[3].abs() * m + c[2].abs()) * m + c[1].abs()) * m + c[0].abs();
        horner(&c, t).abs() <= 8.0 * f64::EPSILON * bound
    };

    let mut vals = [0.0; 8];
    let mut nv = 0;
    for (i, &k) in knots.iter().enumerate() {
        if near_zero(k) {
            vals[nv] = k;
            nv += 1;
        }
        if i + 1 < knots.len() {
            let (a, b) = (k, knots[i + 1]);
            if near_zero(a) || near_zero(b) {
                continue;
            }
            let (fa, fb) = (horner(&c, a), horner(&c, b));
            if (fa < 0.0) != (fb < 0.0) {
                vals[nv] = bracketed(&c, a, b, fa);
                nv += 1;
            }
        }
    }
    let vals = &mut vals[..nv];
    vals.sort_by(f64::total_cmp);

    let mut out = Roots::default();
    for &t in vals.iter() {
        if out.len > 0 && (t - out.vals[out.len - 1]).abs() <= MERGE_EPS {
            continue;
        }
        out.push(t);
    }
    Ok(out)
}

fn quadratic(a: f64, b: f64, c: f64, out: &mut Roots) {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        if disc > -1e-14 * (b * b).max((4.0 * a * c).abs()) {
            out.push(-b / (2.0 * a));
        }
        return;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let r1 = q / a;
    let r2 = if q != 0.0 { c / q } else { r1 };
    out.push(r1.min(r2));
    if r2 != r1 {
        out.push(r1.max(r2));
    }
}

/// Root of a monotone cubic on `[a, b]` with `f(a)`, `f(b)` of opposite sign.
fn bracketed(c: &[f64; 4], mut a: f64, mut b: f64, fa: f64) -> f64 {
    let rising = fa < 0.0;
    let mut t = 0.5 * (a + b);
    for _ in 0..200 {
        let f = horner(c, t);
        if f == 0.0 {
            return t;
        }
        if (f < 0.0) == rising {
            a = t;
        } else {
            b = t;
        }
        let df = horner_deriv(c, t);
        let newton = t - f / df;
        let next = if df != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - t).abs() <= 2.0 * f64::EPSILON * t.abs() || b - a <= 4.0 * f64::EPSILON * t.abs().max(1e-300) {
            return next;
        }
        t = next;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots(c: [f64; 4], lo: f64, hi: f64) -> Vec<f64> {
        cubic_roots(c, lo, hi).unwrap().as_slice().to_vec()
    }

    #[test]
    fn t_cubed_minus_t() {
        let r = roots([0.0, -1.0, 0.0, 1.0], 0.0, 1.0);
        assert_eq!(r.len(), 2);
        assert!(r[0].abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factored_cubic() {
        // (t-1/4)(t-1/2)(t-3/4) = t³ - 1.5t² + 0.6875t - 0.09375
        let r = roots([-0.09375, 0.6875, -1.5, 1.0], 0.0, 1.0);
        assert_eq!(r.len(), 3);
        for (x, e) in r.iter().zip([0.25, 0.5, 0.75]) {
            assert!((x - e).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_cases() {
        assert_eq!(cubic_roots([0.0; 4], 0.0, 1.0), Err(IdenticallyZero));
        assert!(roots([1.0, 0.0, 0.0, 0.0], 0.0, 1.0).is_empty());
        assert_eq!(roots([-0.5, 1.0, 0.0, 0.0], 0.0, 1.0), vec![0.5]);
        let r = roots([0.25, -1.0, 1.0, 0.0], 0.0, 1.0); // (t-1/2)²
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-7);
        let r = roots([-0.125, 0.75, -1.5, 1.0], 0.0, 1.0); // (t-1/2)³
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-5);
    }

    #[test]
    fn nearly_quadratic() {
        // tiny cubic term: roots near the quadratic's, plus a far one
        let r = roots([-0.09, 0.0, 1.0, 1e-9], 0.0, 1.0);
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.3).abs() < 1e-9);
    }
}
