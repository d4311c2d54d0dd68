//! One-parameter sweeps of the data energy, comparing the wavelet
//! rasterizer with a point-sampling one.

use std::fmt::Write as _;

use serde::Serialize;

use crate::energy::{data_energy, data_energy_with_coverage, EnergyContext, EnergyError, VectorShape};
use crate::geometry::Point;
use crate::raster::oracle_coverage;

/// Which coordinate to sweep: control point `i` (0..=2) of segment `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScanParam {
    pub segment: usize,
    pub point: usize,
    /// 0 for x, 1 for y.
    pub coord: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub value: f64,
    pub wavelet: f64,
    pub oracle: f64,
}

/// `steps + 1` values from `a` to `b`; both ends are hit exactly.
pub fn sweep_values(a: f64, b: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| if k == steps { b } else { a + (b - a) * k as f64 / steps as f64 })
        .collect()
}

/// Evaluates the data energy of `shape` with the swept coordinate set to
/// each value of `values` (normalized units). The oracle column samples
/// `oracle_samples²` points per pixel.
pub fn energy_scan(
    shape: &VectorShape,
    ctx: &EnergyContext,
    param: ScanParam,
    values: &[f64],
    oracle_samples: usize,
) -> Result<Vec<ScanRow>, EnergyError> {
    let b = &shape.bezigon;
    if param.segment >= b.num_segments() || param.point > 2 || param.coord > 1 {
        return Err(EnergyError::InvalidParameter(format!(
            "no coordinate ({}, {}, {}) on a {}-segment bezigon",
            param.segment,
            param.point,
            param.coord,
            b.num_segments()
        )));
    }
    let idx = b.point_index(param.segment, param.point);
    values
        .iter()
        .map(|&v| {
            let mut moved = b.clone();
            let p = moved.points()[idx];
            moved.set_point(idx, if param.coord == 0 { Point::new(v, p.y) } else { Point::new(p.x, v) });
            let s = VectorShape { bezigon: moved, color: shape.color };
            let wavelet = data_energy(&s, ctx)?;
            let alpha = oracle_coverage(&s.bezigon, ctx.grid, oracle_samples);
            Ok(ScanRow { value: v, wavelet, oracle: data_energy_with_coverage(&s, ctx, &alpha) })
        })
        .collect()
}

/// Absolute differences between consecutive entries.
pub fn successive_jumps(values: &[f64]) -> Vec<f64> {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
}

pub fn max_jump(values: &[f64]) -> f64 {
    successive_jumps(values).into_iter().fold(0.0, f64::max)
}

pub fn median_jump(values: &[f64]) -> f64 {
    let mut j = successive_jumps(values);
    if j.is_empty() {
        return 0.0;
    }
    j.sort_by(f64::total_cmp);
    j[j.len() / 2]
}

/// CSV with a header; `scale` converts the value column (e.g. to pixels).
pub fn scan_csv(rows: &[ScanRow], scale: f64) -> String {
    let mut s = String::from("value,e_data_wavelet,e_data_oracle\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.value * scale, r.wavelet, r.oracle);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use crate::raster::{rasterize, Background, RasterGrid};

    fn setup() -> (VectorShape, EnergyContext) {
        let grid = RasterGrid::new(4).unwrap();
        let b = shapes::circle(Point::new(0.5, 0.5), 0.3, 4);
        let shape = VectorShape::new(b.clone(), [0.1, 0.2, 0.9]);
        let bg = Background::Solid([1.0; 3]);
        let input = rasterize(&shape, &bg, grid).unwrap();
        (shape, EnergyContext::for_shape(input, bg, &b).unwrap())
    }

    #[test]
    fn endpoints_are_exact() {
        let v = sweep_values(0.1, 0.7, 7);
        assert_eq!(v.len(), 8);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[7], 0.7);
    }

    #[test]
    fn wavelet_is_continuous_and_oracle_steps() {
        let (shape, ctx) = setup();
        let param = ScanParam { segment: 0, point: 0, coord: 0 };
        let rows = energy_scan(&shape, &ctx, param, &sweep_values(0.7, 0.9, 200), 1).unwrap();
        let w: Vec<f64> = rows.iter().map(|r| r.wavelet).collect();
        let o: Vec<f64> = rows.iter().map(|r| r.oracle).collect();
        let fine = energy_scan(&shape, &ctx, param, &sweep_values(0.7, 0.9, 400), 1).unwrap();
        let wf: Vec<f64> = fine.iter().map(|r| r.wavelet).collect();
        assert!(max_jump(&w) < 2.5 * max_jump(&wf));
        assert!(max_jump(&o) > 50.0 * median_jump(&o));
        assert!(rows[100].wavelet < 1e-12);
    }

    #[test]
    fn bad_parameter_is_rejected() {
        let (shape, ctx) = setup();
        let param = ScanParam { segment: 4, point: 0, coord: 0 };
        assert!(energy_scan(&shape, &ctx, param, &[0.5], 1).is_err());
    }
}
