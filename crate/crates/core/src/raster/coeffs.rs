//! Haar wavelet coefficients of a bezigon's indicator function and the
//! synthesis back to per-pixel coverage.
//!
//! For a positively oriented boundary, the divergence theorem turns each
//! area integral against a 2D Haar basis function into a line integral along
//! the curve. With `ψ̃`/`φ̃` the antiderivatives of the 1D bases:
//!
//! ```text
//! c(0,0)      = ∫ φ̃(X) φ(Y) Y' dt               (scale 0 only)
//! c(0,1)[s,k] = -2^s ∫ ψ̃_ky(Y) φ_kx(X) X' dt
//! c(1,0)[s,k] =  2^s ∫ ψ̃_kx(X) φ_ky(Y) Y' dt
//! c(1,1)[s,k] =  2^s ∫ ψ̃_kx(X) ψ_ky(Y) Y' dt
//! ```
//!
//! `ψ̃` vanishes outside its cell, so only cells the curve passes through get
//! nonzero detail coefficients. Note the (0,1) integrand pairs `ψ̃` with the
//! row index `ky` and `φ` with the column index `kx`.

use std::collections::HashMap;

use super::splits::{breakpoints, pieces, Piece};
use super::{check_domain, gl3, CoverageImage, RasterError, RasterGrid};
use crate::geometry::{BezierSegment, Bezigon};

/// Which 2D Haar function a coefficient belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HaarKind {
    /// `(0,0)`: scaling function, scale 0 only.
    Scaling,
    /// `(0,1)`: φ in x, ψ in y.
    PsiY,
    /// `(1,0)`: ψ in x, φ in y.
    PsiX,
    /// `(1,1)`: ψ in both.
    PsiXY,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HaarIndex {
    pub scale: u32,
    pub kx: u32,
    pub ky: u32,
    pub kind: HaarKind,
}

#[inline]
pub(crate) fn cell_key(kx: u32, ky: u32) -> u64 {
    ((ky as u64) << 32) | kx as u64
}

/// Sparse coefficient storage: one map per scale holding
/// `[c(0,1), c(1,0), c(1,1)]` for every touched cell.
#[derive(Clone, Debug)]
pub struct CoefficientSet {
    grid: RasterGrid,
    c00: f64,
    levels: Vec<HashMap<u64, [f64; 3]>>,
}

impl CoefficientSet {
    fn empty(grid: RasterGrid) -> Self {
        CoefficientSet {
            grid,
            c00: 0.0,
            levels: (0..grid.depth()).map(|_| HashMap::new()).collect(),
        }
    }

    pub fn grid(&self) -> RasterGrid {
        self.grid
    }

    pub fn scaling(&self) -> f64 {
        self.c00
    }

    pub fn get(&self, idx: HaarIndex) -> f64 {
        if idx.kind == HaarKind::Scaling {
            return if idx.scale == 0 && idx.kx == 0 && idx.ky == 0 { self.c00 } else { 0.0 };
        }
        let Some(level) = self.levels.get(idx.scale as usize) else {
            return 0.0;
        };
        let Some(c) = level.get(&cell_key(idx.kx, idx.ky)) else {
            return 0.0;
        };
        match idx.kind {
            HaarKind::PsiY => c[0],
            HaarKind::PsiX => c[1],
            HaarKind::PsiXY => c[2],
            HaarKind::Scaling => unreachable!(),
        }
    }

    /// Number of cells carrying detail coefficients, over all scales.
    pub fn touched_cells(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    /// Every stored coefficient (scaling first, then scale by scale).
    pub fn iter(&self) -> impl Iterator<Item = (HaarIndex, f64)> + '_ {
        let head = std::iter::once((
            HaarIndex { scale: 0, kx: 0, ky: 0, kind: HaarKind::Scaling },
            self.c00,
        ));
        head.chain(self.levels.iter().enumerate().flat_map(|(s, level)| {
            level.iter().flat_map(move |(&key, c)| {
                let kx = key as u32;
                let ky = (key >> 32) as u32;
                [HaarKind::PsiY, HaarKind::PsiX, HaarKind::PsiXY]
                    .into_iter()
                    .zip(c.iter().copied())
                    .map(move |(kind, v)| (HaarIndex { scale: s as u32, kx, ky, kind }, v))
            })
        }))
    }

    fn add_piece(&mut self, seg: &BezierSegment, piece: &Piece) {
        let d = self.grid.depth();
        let inv = 1.0 / self.grid.size() as f64;
        let ox = piece.cx as f64 * inv;
        let oy = piece.cy as f64 * inv;
        // Local integrals with the finest-cell corner as origin.
        let (mut mx, mut my) = (0.0, 0.0);
        gl3(piece.ta, piece.tb, |t, w| {
            let p = seg.eval(t);
            let dp = seg.deriv(t);
            mx += w * (p.x - ox) * dp.y;
            my += w * (p.y - oy) * dp.x;
        });
        let pa = seg.eval(piece.ta);
        let pb = seg.eval(piece.tb);
        let dx = pb.x - pa.x;
        let dy = pb.y - pa.y;

        self.c00 += mx + ox * dy;
        for s in 0..d {
            let shift = d - s;
            let kx = piece.cx >> shift;
            let ky = piece.cy >> shift;
            let hx = (piece.cx >> (shift - 1)) & 1;
            let hy = (piece.cy >> (shift - 1)) & 1;
            let sx = if hx == 0 { 1.0 } else { -1.0 };
            let sy = if hy == 0 { 1.0 } else { -1.0 };
            let two_s = (1u64 << s) as f64;
            let ex = (kx + hx) as f64 / two_s;
            let ey = (ky + hy) as f64 / two_s;
            let along_x = two_s * sx * (mx + (ox - ex) * dy);
            let along_y = -two_s * sy * (my + (oy - ey) * dx);
            let c = self.levels[s as usize]
                .entry(cell_key(kx, ky))
                .or_insert([0.0; 3]);
            c[0] += along_y;
            c[1] += along_x;
            c[2] += sy * along_x;
        }
    }
}

/// Exact Haar coefficients of the region bounded by `bezigon`.
pub fn wavelet_coefficients(
    bezigon: &Bezigon,
    grid: RasterGrid,
) -> Result<CoefficientSet, RasterError> {
    check_domain(bezigon)?;
    let mut set = CoefficientSet::empty(grid);
    let mut events = Vec::new();
    let mut parts = Vec::new();
    for seg in bezigon.segments() {
        breakpoints(&seg, grid, &mut events);
        pieces(&seg, grid, &events, &mut parts);
        for p in &parts {
            set.add_piece(&seg, p);
        }
    }
    Ok(set)
}

/// Synthesizes per-pixel coverage (box-filtered area fraction) from the
/// coefficients, coarse to fine.
pub fn reconstruct(coeffs: &CoefficientSet, grid: RasterGrid) -> Result<CoverageImage, RasterError> {
    if coeffs.grid != grid {
        return Err(RasterError::GridMismatch {
            expected: grid.depth(),
            got: coeffs.grid.depth(),
        });
    }
    let mut cur = vec![coeffs.c00];
    for s in 0..grid.depth() {
        let n = 1usize << s;
        let mut next = vec![0.0; 4 * n * n];
        for ky in 0..n {
            for kx in 0..n {
                let v = cur[ky * n + kx];
                let i = 2 * ky * 2 * n + 2 * kx;
                next[i] = v;
                next[i + 1] = v;
                next[i + 2 * n] = v;
                next[i + 2 * n + 1] = v;
            }
        }
        let two_s = n as f64;
        for (&key, c) in &coeffs.levels[s as usize] {
            let kx = (key as u32) as usize;
            let ky = (key >> 32) as usize;
            let i = 2 * ky * 2 * n + 2 * kx;
            let (a, b, cc) = (c[0] * two_s, c[1] * two_s, c[2] * two_s);
            next[i] += a + b + cc;
            next[i + 1] += a - b - cc;
            next[i + 2 * n] += -a + b - cc;
            next[i + 2 * n + 1] += -a - b + cc;
        }
        cur = next;
    }
    Ok(CoverageImage { grid, alpha: cur })
}
