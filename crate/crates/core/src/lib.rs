//! Vectorization of clipart images by direct optimization of closed cubic
//! Bézier paths ("bezigons") against an analytic, differentiable wavelet
//! rasterizer.

pub mod cli;
pub mod energy;
pub mod geometry;
pub mod imaging;
pub mod init;
pub mod pipeline;
pub mod raster;
pub mod solver;
