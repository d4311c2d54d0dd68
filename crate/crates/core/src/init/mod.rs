//! Initial bezigons: segment the input into flat-color regions, trace each
//! region's boundary along pixel edges and fit cubics to it. The result only
//! has to be close enough for the optimizer to take over.

mod fit;
mod segment;
mod trace;

pub use fit::{fit_bezigon, FitParams};
pub use segment::{segment_regions, LabelMap};
pub use trace::{trace_boundary, PixelContour, RegionBoundary};

use serde::{Deserialize, Serialize};

use crate::geometry::Bezigon;
use crate::imaging::{RasterImage, Rgb};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitParams {
    /// Segmentation threshold on the 0–255 color scale.
    pub k: f64,
    /// Smallest region kept, in pixels.
    pub min_size: usize,
    pub fit: FitParams,
    /// Drop the largest region, taking it as the background.
    pub skip_background: bool,
}

impl Default for InitParams {
    fn default() -> Self {
        InitParams { k: 300.0, min_size: 16, fit: FitParams::default(), skip_background: true }
    }
}

/// One initial bezigon in pixel coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitShape {
    pub bezigon: Bezigon,
    pub color: Rgb,
    pub region: usize,
    /// Fills a hole of `region` with the background color.
    pub hole: bool,
    /// Area enclosed by the traced contour, in pixels.
    pub area: f64,
}

#[derive(Clone, Debug)]
pub struct Initialization {
    pub labels: LabelMap,
    pub region_colors: Vec<Rgb>,
    pub background: Option<usize>,
    pub background_color: Rgb,
    /// Back to front: larger enclosed area first, a hole before a region of
    /// the same area.
    pub shapes: Vec<InitShape>,
}

impl Initialization {
    pub fn run(image: &RasterImage, params: &InitParams) -> Initialization {
        let labels = segment_regions(image, params.k, params.min_size);
        let region_colors = labels.region_means(image);
        let sizes = labels.sizes();
        let largest = (0..labels.count).max_by_key(|&r| (sizes[r], std::cmp::Reverse(r)));
        let background = largest.filter(|_| params.skip_background);
        let background_color = largest.map_or([1.0; 3], |r| region_colors[r]);
        let mut shapes = Vec::new();
        for region in 0..labels.count {
            if Some(region) == background {
                continue;
            }
            let Some(boundary) = trace_boundary(&labels, region) else { continue };
            shapes.push(InitShape {
                bezigon: fit_bezigon(&boundary.outer, &params.fit),
                color: region_colors[region],
                region,
                hole: false,
                area: boundary.outer.signed_area(),
            });
            for h in &boundary.holes {
                shapes.push(InitShape {
                    bezigon: fit_bezigon(h, &params.fit),
                    color: background_color,
                    region,
                    hole: true,
                    area: h.signed_area(),
                });
            }
        }
        shapes.sort_by(|a, b| b.area.total_cmp(&a.area).then(b.hole.cmp(&a.hole)));
        Initialization { labels, region_colors, background, background_color, shapes }
    }
}

/// Initial shapes for `image`, back to front. Empty for a constant image
/// when the background is skipped.
pub fn initialize(image: &RasterImage, params: &InitParams) -> Vec<InitShape> {
    Initialization::run(image, params).shapes
}
