use std::path::Path;

use image::{DynamicImage, ImageBuffer, Rgb as PxRgb};

use super::{ImagingError, RasterImage};

/// Loads a PNG as RGB in `[0, 1]`. 8-bit samples are divided by 255, 16-bit
/// by 65535; any alpha channel is composited over white.
pub fn load_png(path: impl AsRef<Path>) -> Result<RasterImage, ImagingError> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| ImagingError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let decoded = image::load_from_memory_with_format(&bytes, image::ImageFormat::Png)
        .map_err(|e| ImagingError::Decode {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    Ok(from_dynamic(&decoded))
}

fn from_dynamic(img: &DynamicImage) -> RasterImage {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut data = Vec::with_capacity(w * h * 3);
    let mut push = |rgb: [f64; 3], a: f64| {
        for c in rgb {
            data.push(c * a + (1.0 - a));
        }
    };
    match img {
        DynamicImage::ImageLuma8(_)
        | DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgb8(_)
        | DynamicImage::ImageRgba8(_) => {
            for p in img.to_rgba8().pixels() {
                let f = |v: u8| v as f64 / 255.0;
                push([f(p[0]), f(p[1]), f(p[2])], f(p[3]));
            }
        }
        _ => {
            for p in img.to_rgba16().pixels() {
                let f = |v: u16| v as f64 / 65535.0;
                push([f(p[0]), f(p[1]), f(p[2])], f(p[3]));
            }
        }
    }
    RasterImage::from_data(w, h, 3, data).expect("decoded buffer has the right size")
}

/// Saves as 8-bit RGB, rounding `v · 255` to the nearest code value.
pub fn save_png(img: &RasterImage, path: impl AsRef<Path>) -> Result<(), ImagingError> {
    let path = path.as_ref();
    let rgb = img.to_rgb();
    let buf: Vec<u8> = rgb
        .data()
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    let out: ImageBuffer<PxRgb<u8>, _> =
        ImageBuffer::from_raw(img.width() as u32, img.height() as u32, buf)
            .expect("buffer length matches dimensions");
    out.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| ImagingError::Encode {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::{ImageBuffer, Luma, Rgba};

    #[test]
    fn checkerboard_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.png");
        let mut img = RasterImage::new(2, 2, 3);
        img.set_pixel(0, 0, &[1.0; 3]);
        img.set_pixel(1, 1, &[1.0; 3]);
        save_png(&img, &p).unwrap();
        let back = load_png(&p).unwrap();
        assert_eq!(back, img);
        save_png(&back, &p).unwrap();
        assert_eq!(load_png(&p).unwrap(), img);
    }

    #[test]
    fn sixteen_bit_gray() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.png");
        let buf: ImageBuffer<Luma<u16>, _> = ImageBuffer::from_raw(2, 1, vec![0u16, 32768]).unwrap();
        buf.save(&p).unwrap();
        let img = load_png(&p).unwrap();
        assert_eq!(img.rgb(1, 0), [32768.0 / 65535.0; 3]);
    }

    #[test]
    fn alpha_over_white() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.png");
        let buf: ImageBuffer<Rgba<u8>, _> = ImageBuffer::from_raw(1, 1, vec![0u8, 0, 0, 0]).unwrap();
        buf.save(&p).unwrap();
        assert_eq!(load_png(&p).unwrap().rgb(0, 0), [1.0; 3]);
    }

    #[test]
    fn garbage_is_a_decode_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.png");
        std::fs::write(&p, b"not a png").unwrap();
        assert!(matches!(load_png(&p), Err(ImagingError::Decode { .. })));
    }
}
