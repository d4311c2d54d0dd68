use super::{ImagingError, RasterImage};

/// Value reported for identical images.
pub const PSNR_CAP: f64 = 99.0;

fn shape(img: &RasterImage) -> (usize, usize, usize) {
    (img.width(), img.height(), img.channels())
}

/// Mean squared difference over all samples.
pub fn mse(a: &RasterImage, b: &RasterImage) -> Result<f64, ImagingError> {
    if shape(a) != shape(b) {
        return Err(ImagingError::DimensionMismatch(shape(a), shape(b)));
    }
    let n = a.data().len().max(1) as f64;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / n)
}

/// Peak signal-to-noise ratio in dB with peak 1.0, capped at [`PSNR_CAP`].
pub fn psnr(a: &RasterImage, b: &RasterImage) -> Result<f64, ImagingError> {
    let m = mse(a, b)?;
    if m == 0.0 {
        return Ok(PSNR_CAP);
    }
    Ok((-10.0 * m.log10()).min(PSNR_CAP))
}
