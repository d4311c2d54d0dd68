//! The objective: data fidelity against the input raster plus the four
//! shape priors (self-intersection, angle, handle, length).
//!
//! Geometry lives in normalized coordinates, `[0,1]²` spanning the `2^d`
//! grid. The energy itself measures lengths (`l0` and the priors) in units of
//! `1/length_unit`, pixels by default.
//!
//! By default the data term is the plain sum of squared residuals. The
//! `1/l0` factor is available through [`EnergyContext::with_l0`]; with it on
//! and pixel units, the length prior outweighs the data term at typical clipart
//! sizes and shapes shrink visibly.

mod data;
mod priors;

pub use data::{
    data_energy, data_energy_with_coverage, data_gradient, estimate_background, mean_color_inside, DataGradient};
pub use priors::{
    apt_gradient, e_apt, e_hpt, e_lpt, e_spt, hpt_gradient, lpt_gradient, prior_gradient,
    prior_terms, spt_gradient, PriorFlags, PriorScope, PriorTerms, EPS_LEN,
};

use serde::{Deserialize, Serialize};

use crate::geometry::Bezigon;
use crate::imaging::{RasterImage, Rgb};
use crate::raster::{Background, RasterError, RasterGrid};

/// A bezigon filled with one uniform color.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorShape {
    pub bezigon: Bezigon,
    pub color: Rgb,
}

impl VectorShape {
    /// Color channels are clamped into `[0, 1]`.
    pub fn new(bezigon: Bezigon, color: Rgb) -> Self {
        VectorShape { bezigon, color: color.map(|c| c.clamp(0.0, 1.0)) }
    }
}

/// Prior weights `λ_spt, λ_apt, λ_hpt, λ_lpt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyWeights {
    pub spt: f64,
    pub apt: f64,
    pub hpt: f64,
    pub lpt: f64,
}

impl Default for EnergyWeights {
    fn default() -> Self {
        EnergyWeights { spt: 1.0, apt: 0.08, hpt: 0.1, lpt: 0.1 }
    }
}

impl EnergyWeights {
    pub fn zero() -> Self {
        EnergyWeights { spt: 0.0, apt: 0.0, hpt: 0.0, lpt: 0.0 }
    }

    pub fn is_valid(&self) -> bool {
        [self.spt, self.apt, self.hpt, self.lpt]
            .iter()
            .all(|w| w.is_finite() && *w >= 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EnergyError {
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error("input is {got}x{got_h}, grid is {expected}x{expected}")]
    InputSize { expected: usize, got: usize, got_h: usize },
    #[error("mask has {got} entries, grid has {expected} pixels")]
    MaskSize { expected: usize, got: usize },
    #[error("l0 must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Everything the data term needs besides the shape.
#[derive(Clone, Debug)]
pub struct EnergyContext {
    pub input: RasterImage,
    pub grid: RasterGrid,
    pub background: Background,
    pub l0: f64,
    pub mask: Vec<bool>,
    /// Divide the data term by `l0`.
    pub normalize_by_l0: bool,
    /// Energy length units per normalized unit.
    pub length_unit: f64,
}

impl EnergyContext {
    /// `input` must be a `2^d × 2^d` image; every pixel starts unmasked.
    pub fn new(input: RasterImage, background: Background, l0: f64) -> Result<Self, EnergyError> {
        if input.width() != input.height() || !input.width().is_power_of_two() {
            return Err(EnergyError::InputSize {
                expected: input.width().next_power_of_two().max(input.height()),
                got: input.width(),
                got_h: input.height(),
            });
        }
        let grid = RasterGrid::covering(input.width(), input.height())?;
        if let Background::Image(bg) = &background {
            if bg.width() != input.width() || bg.height() != input.height() {
                return Err(EnergyError::InputSize {
                    expected: input.width(),
                    got: bg.width(),
                    got_h: bg.height(),
                });
            }
        }
        if !(l0.is_finite() && l0 > 0.0) {
            return Err(EnergyError::BadLength(l0));
        }
        let n = grid.pixel_count();
        Ok(EnergyContext {
            input: input.to_rgb(),
            grid,
            background,
            l0,
            mask: vec![true; n],
            normalize_by_l0: false,
            length_unit: grid.size() as f64,
        })
    }

    /// Context whose `l0` is the arc length of `initial`.
    pub fn for_shape(
        input: RasterImage,
        background: Background,
        initial: &Bezigon,
    ) -> Result<Self, EnergyError> {
        EnergyContext::new(input, background, initial.length())
    }

    pub fn with_mask(mut self, mask: Vec<bool>) -> Result<Self, EnergyError> {
        if mask.len() != self.grid.pixel_count() {
            return Err(EnergyError::MaskSize {
                expected: self.grid.pixel_count(),
                got: mask.len(),
            });
        }
        self.mask = mask;
        Ok(self)
    }

    pub fn with_l0(mut self) -> Self {
        self.normalize_by_l0 = true;
        self
    }

    pub fn without_l0(mut self) -> Self {
        self.normalize_by_l0 = false;
        self
    }

    /// `1.0` measures lengths in normalized units instead of pixels.
    pub fn with_length_unit(mut self, unit: f64) -> Result<Self, EnergyError> {
        if !(unit.is_finite() && unit > 0.0) {
            return Err(EnergyError::BadLength(unit));
        }
        self.length_unit = unit;
        Ok(self)
    }

    pub(crate) fn scale(&self) -> f64 {
        if self.normalize_by_l0 {
            1.0 / (self.l0 * self.length_unit)
        } else {
            1.0
        }
    }

    /// Weights that, applied to priors of the normalized curve, give the
    /// priors measured in energy length units.
    pub fn prior_weights(&self, w: &EnergyWeights) -> EnergyWeights {
        let u = self.length_unit;
        EnergyWeights { spt: w.spt * u, apt: w.apt, hpt: w.hpt / u, lpt: w.lpt * u }
    }
}

/// Per-term energies, priors in energy length units, and their weighted
/// total.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub e_data: f64,
    pub e_spt: f64,
    pub e_apt: f64,
    pub e_hpt: f64,
    pub e_lpt: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn from_parts(e_data: f64, p: &PriorTerms, w: &EnergyWeights) -> Self {
        EnergyBreakdown {
            e_data,
            e_spt: p.spt,
            e_apt: p.apt,
            e_hpt: p.hpt,
            e_lpt: p.lpt,
            total: e_data + p.weighted(w),
        }
    }
}

/// `E = E_data + Σ λ·prior`.
pub fn total_energy(
    shape: &VectorShape,
    ctx: &EnergyContext,
    weights: &EnergyWeights,
) -> Result<EnergyBreakdown, EnergyError> {
    let e_data = data_energy(shape, ctx)?;
    let p = prior_terms(&shape.bezigon, PriorScope::All, weights).0;
    Ok(EnergyBreakdown::from_parts(e_data, &p.scaled(ctx.length_unit), weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shapes, Point};

    #[test]
    fn zero_weights_total_is_data() {
        let grid = RasterGrid::new(4).unwrap();
        let b = shapes::circle(Point::new(0.5, 0.5), 0.3, 4);
        let input = RasterImage::filled(16, 16, [0.5; 3]);
        let ctx = EnergyContext::new(input, Background::Solid([1.0; 3]), 2.0).unwrap();
        assert_eq!(ctx.grid, grid);
        let shape = VectorShape::new(b, [0.0; 3]);
        let e = total_energy(&shape, &ctx, &EnergyWeights::zero()).unwrap();
        assert_eq!(e.total, e.e_data);
        assert!(e.e_hpt > 0.0 && e.e_lpt > 0.0);
    }

    #[test]
    fn perfect_circle_total_is_handle_and_length() {
        let grid = RasterGrid::new(5).unwrap();
        let b = shapes::circle(Point::new(0.5, 0.5), 0.3, 4);
        let shape = VectorShape::new(b.clone(), [0.1, 0.2, 0.3]);
        let bg = Background::Solid([1.0; 3]);
        let input = crate::raster::rasterize(&shape, &bg, grid).unwrap();
        let ctx = EnergyContext::for_shape(input, bg, &b).unwrap();
        let w = EnergyWeights::default();
        let e = total_energy(&shape, &ctx, &w).unwrap();
        assert!(e.e_data < 1e-20);
        let expect = w.hpt * e.e_hpt + w.lpt * e.e_lpt + e.e_data;
        assert!((e.total - expect).abs() < 1e-12);
        assert_eq!(e.e_spt, 0.0);
        assert!(e.e_apt < 1e-12);
    }

    #[test]
    fn rejects_non_dyadic_input() {
        let input = RasterImage::filled(12, 12, [0.0; 3]);
        assert!(EnergyContext::new(input, Background::Solid([1.0; 3]), 1.0).is_err());
    }
}
