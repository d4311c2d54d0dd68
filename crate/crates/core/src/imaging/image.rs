use super::ImagingError;

pub type Rgb = [f64; 3];

/// Row-major image with 1 or 3 channels and values in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<f64>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, channels: usize) -> Self {
        assert!(channels == 1 || channels == 3, "channels must be 1 or 3");
        RasterImage {
            width,
            height,
            channels,
            data: vec![0.0; width * height * channels],
        }
    }

    pub fn filled(width: usize, height: usize, color: Rgb) -> Self {
        let mut img = RasterImage::new(width, height, 3);
        for px in img.data.chunks_exact_mut(3) {
            px.copy_from_slice(&color);
        }
        img
    }

    /// Wraps raw samples; values are clamped into `[0, 1]`.
    pub fn from_data(
        width: usize,
        height: usize,
        channels: usize,
        mut data: Vec<f64>,
    ) -> Result<Self, ImagingError> {
        if !(channels == 1 || channels == 3) || data.len() != width * height * channels {
            return Err(ImagingError::Shape {
                expected: width * height * channels,
                got: data.len(),
            });
        }
        for v in &mut data {
            *v = v.clamp(0.0, 1.0);
        }
        Ok(RasterImage { width, height, channels, data })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f64] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    /// Pixel as RGB (gray replicated).
    #[inline]
    pub fn rgb(&self, x: usize, y: usize) -> Rgb {
        let p = self.pixel(x, y);
        if self.channels == 3 {
            [p[0], p[1], p[2]]
        } else {
            [p[0]; 3]
        }
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, v: &[f64]) {
        let c = self.channels;
        let i = (y * self.width + x) * c;
        for (d, s) in self.data[i..i + c].iter_mut().zip(v) {
            *d = s.clamp(0.0, 1.0);
        }
    }

    pub fn to_rgb(&self) -> RasterImage {
        if self.channels == 3 {
            return self.clone();
        }
        RasterImage {
            width: self.width,
            height: self.height,
            channels: 3,
            data: self.data.iter().flat_map(|&v| [v, v, v]).collect(),
        }
    }

    /// Top-left `w × h` window.
    pub fn crop(&self, w: usize, h: usize) -> RasterImage {
        let w = w.min(self.width);
        let h = h.min(self.height);
        let mut out = RasterImage::new(w, h, self.channels);
        for y in 0..h {
            for x in 0..w {
                out.set_pixel(x, y, self.pixel(x, y));
            }
        }
        out
    }

    /// Embeds into the top-left of a `size × size` canvas, replicating the
    /// right and bottom borders into the padding.
    pub fn pad_to_square(&self, size: usize) -> RasterImage {
        let mut out = RasterImage::new(size, size, self.channels);
        for y in 0..size {
            let sy = y.min(self.height - 1);
            for x in 0..size {
                let sx = x.min(self.width - 1);
                out.set_pixel(x, y, self.pixel(sx, sy));
            }
        }
        out
    }
}
