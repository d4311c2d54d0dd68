//! Image and vector file I/O plus fidelity metrics.

mod image;
mod metrics;
mod png;
mod svg;

pub use self::image::{RasterImage, Rgb};
pub use metrics::{mse, psnr, PSNR_CAP};
pub use png::{load_png, save_png};
pub use svg::{
    hex_color, load_svg, parse_color, parse_path_data, parse_svg, save_svg, write_svg,
    VectorDocument,
};

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ImagingError {
    #[error("expected {expected} samples, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("images differ in shape: {0:?} vs {1:?}")]
    DimensionMismatch((usize, usize, usize), (usize, usize, usize)),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: cannot decode image: {message}")]
    Decode { path: PathBuf, message: String },
    #[error("{path}: cannot encode image: {message}")]
    Encode { path: PathBuf, message: String },
    #[error("malformed SVG: {0}")]
    Xml(String),
    #[error("unsupported path command '{0}'")]
    UnsupportedCommand(char),
    #[error("bad path data at offset {offset}: {message}")]
    PathSyntax { offset: usize, message: String },
    #[error("unsupported fill '{0}'")]
    UnsupportedColor(String),
    #[error("invalid shape: {0}")]
    Geometry(#[from] crate::geometry::GeometryError),
}
