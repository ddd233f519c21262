use crate::accel::GrayImage;
use crate::error::{Error, Result};

pub const WINDOW: usize = 11;
pub const WINDOW_SIGMA: f64 = 1.5;
pub const C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
pub const C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);

fn gaussian_taps() -> [f64; WINDOW] {
    let mut t = [0.0; WINDOW];
    let c = (WINDOW / 2) as f64;
    for (i, v) in t.iter_mut().enumerate() {
        let d = i as f64 - c;
        *v = (-d * d / (2.0 * WINDOW_SIGMA * WINDOW_SIGMA)).exp();
    }
    let s: f64 = t.iter().sum();
    t.map(|v| v / s)
}

/// Separable Gaussian filter over the valid region.
fn filter(src: &[f64], width: usize, height: usize, taps: &[f64; WINDOW]) -> Vec<f64> {
    let ow = width - WINDOW + 1;
    let oh = height - WINDOW + 1;
    let mut rows = vec![0.0; ow * height];
    for y in 0..height {
        let line = &src[y * width..(y + 1) * width];
        for x in 0..ow {
            let mut s = 0.0;
            for (k, t) in taps.iter().enumerate() {
                s += t * line[x + k];
            }
            rows[y * ow + x] = s;
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            let mut s = 0.0;
            for (k, t) in taps.iter().enumerate() {
                s += t * rows[(y + k) * ow + x];
            }
            out[y * ow + x] = s;
        }
    }
    out
}

fn check_size(img: &GrayImage) -> Result<()> {
    if img.width() < WINDOW || img.height() < WINDOW {
        return Err(Error::Image(format!(
            "SSIM needs at least {WINDOW}x{WINDOW} pixels, got {}x{}",
            img.width(),
            img.height()
        )));
    }
    Ok(())
}

/// Precomputed local statistics of a reference image.
#[derive(Clone, Debug)]
pub struct SsimReference {
    image: GrayImage,
    pixels: Vec<f64>,
    mu: Vec<f64>,
    sigma_sq: Vec<f64>,
    taps: [f64; WINDOW],
}

impl SsimReference {
    pub fn new(image: &GrayImage) -> Result<SsimReference> {
        check_size(image)?;
        let taps = gaussian_taps();
        let (w, h) = (image.width(), image.height());
        let pixels: Vec<f64> = image.pixels().iter().map(|&v| f64::from(v)).collect();
        let sq: Vec<f64> = pixels.iter().map(|v| v * v).collect();
        let mu = filter(&pixels, w, h, &taps);
        let ex2 = filter(&sq, w, h, &taps);
        let sigma_sq = ex2.iter().zip(&mu).map(|(e, m)| e - m * m).collect();
        Ok(SsimReference {
            image: image.clone(),
            pixels,
            mu,
            sigma_sq,
            taps,
        })
    }

    pub fn image(&self) -> &GrayImage {
        &self.image
    }

    /// Mean SSIM of `test` against the reference.
    pub fn compare(&self, test: &GrayImage) -> Result<f64> {
        let (w, h) = (self.image.width(), self.image.height());
        if test.width() != w || test.height() != h {
            return Err(Error::Image(format!(
                "SSIM of {w}x{h} and {}x{} images",
                test.width(),
                test.height()
            )));
        }
        if test == &self.image {
            return Ok(1.0);
        }
        let y: Vec<f64> = test.pixels().iter().map(|&v| f64::from(v)).collect();
        let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
        let xy: Vec<f64> = self.pixels.iter().zip(&y).map(|(a, b)| a * b).collect();
        let mu_y = filter(&y, w, h, &self.taps);
        let ey2 = filter(&yy, w, h, &self.taps);
        let exy = filter(&xy, w, h, &self.taps);
        let mut total = 0.0;
        for i in 0..mu_y.len() {
            let (mx, my) = (self.mu[i], mu_y[i]);
            let sy = ey2[i] - my * my;
            let sxy = exy[i] - mx * my;
            total += ((2.0 * mx * my + C1) * (2.0 * sxy + C2))
                / ((mx * mx + my * my + C1) * (self.sigma_sq[i] + sy + C2));
        }
        Ok(total / mu_y.len() as f64)
    }
}

/// Mean structural similarity with an 11x11 Gaussian window (sigma 1.5)
/// over the valid region.
pub fn ssim(reference: &GrayImage, test: &GrayImage) -> Result<f64> {
    check_size(test)?;
    SsimReference::new(reference)?.compare(test)
}
