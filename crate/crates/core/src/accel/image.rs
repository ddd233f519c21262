use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::io::{Read, Write};
use std::path::Path;

/// 8-bit grayscale image, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<GrayImage> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::Image(format!(
                "{} bytes do not form a {width}x{height} image",
                data.len()
            )));
        }
        Ok(GrayImage { width, height, data })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> GrayImage {
        GrayImage {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> GrayImage {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        GrayImage { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    /// Pixel at a signed position with replicated borders.
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let cx = x.clamp(0, self.width as isize - 1) as usize;
        let cy = y.clamp(0, self.height as isize - 1) as usize;
        self.get(cx, cy)
    }

    /// Binary PGM (`P5`, maxval 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.data);
        out
    }

    pub fn from_pgm(bytes: &[u8]) -> Result<GrayImage> {
        let mut pos = 0;
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
                if bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    pos += 1;
                }
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::Image("truncated PGM header".into()));
            }
            fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
        }
        if fields[0] != "P5" {
            return Err(Error::Image(format!("unsupported PGM magic `{}`", fields[0])));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Image(format!("bad PGM header field `{s}`")))
        };
        let (w, h, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
        if maxval != 255 {
            return Err(Error::Image(format!("only 8-bit PGM is supported (maxval {maxval})")));
        }
        pos += 1;
        let end = pos + w * h;
        if end > bytes.len() {
            return Err(Error::Image("truncated PGM pixel data".into()));
        }
        GrayImage::new(w, h, bytes[pos..end].to_vec())
    }

    pub fn read_pgm(path: &Path) -> Result<GrayImage> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        GrayImage::from_pgm(&bytes).map_err(|e| Error::Image(format!("{}: {e}", path.display())))
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        std::fs::File::create(path)?.write_all(&self.to_pgm())?;
        Ok(())
    }
}

/// Kinds of bundled synthetic test images.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Synthetic {
    HorizontalGradient,
    VerticalGradient,
    Checkerboard { cell: usize },
    Noise { sigma: f64 },
    /// Smooth blobs, shapes and mild noise.
    Scene,
}

fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

pub fn synthetic(kind: Synthetic, width: usize, height: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        Synthetic::HorizontalGradient => {
            GrayImage::from_fn(width, height, |x, _| to_u8(255.0 * x as f64 / (width.max(2) - 1) as f64))
        }
        Synthetic::VerticalGradient => {
            GrayImage::from_fn(width, height, |_, y| to_u8(255.0 * y as f64 / (height.max(2) - 1) as f64))
        }
        Synthetic::Checkerboard { cell } => {
            let cell = cell.max(1);
            GrayImage::from_fn(width, height, |x, y| if (x / cell + y / cell) % 2 == 0 { 32 } else { 224 })
        }
        Synthetic::Noise { sigma } => {
            let n = Normal::new(128.0, sigma).expect("finite sigma");
            GrayImage::from_fn(width, height, |_, _| to_u8(n.sample(&mut rng)))
        }
        Synthetic::Scene => scene(width, height, &mut rng),
    }
}

fn scene(width: usize, height: usize, rng: &mut ChaCha8Rng) -> GrayImage {
    let (w, h) = (width as f64, height as f64);
    let mut f = vec![0.0f64; width * height];
    let base = rng.gen_range(40.0..200.0);
    let (gx, gy) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    for y in 0..height {
        for x in 0..width {
            f[y * width + x] = base + 60.0 * (gx * x as f64 / w + gy * y as f64 / h);
        }
    }
    for _ in 0..rng.gen_range(3..7) {
        let (cx, cy) = (rng.gen_range(0.0..w), rng.gen_range(0.0..h));
        let r = rng.gen_range(0.05..0.3) * w.min(h);
        let amp = rng.gen_range(-90.0..90.0);
        for y in 0..height {
            for x in 0..width {
                let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
                f[y * width + x] += amp * (-d2 / (2.0 * r * r)).exp();
            }
        }
    }
    for _ in 0..rng.gen_range(2..5) {
        let x0 = rng.gen_range(0..width);
        let y0 = rng.gen_range(0..height);
        let x1 = (x0 + rng.gen_range(2..width.max(3) / 2 + 2)).min(width);
        let y1 = (y0 + rng.gen_range(2..height.max(3) / 2 + 2)).min(height);
        let v = rng.gen_range(0.0..255.0);
        for y in y0..y1 {
            for x in x0..x1 {
                f[y * width + x] = 0.3 * f[y * width + x] + 0.7 * v;
            }
        }
    }
    let noise = Normal::new(0.0, rng.gen_range(2.0..8.0)).expect("finite sigma");
    let data = f.into_iter().map(|v| to_u8(v + noise.sample(rng))).collect();
    GrayImage { width, height, data }
}

/// A deterministic mixed set of `count` synthetic images.
pub fn synthetic_set(count: usize, width: usize, height: usize, seed: u64) -> Vec<GrayImage> {
    (0..count)
        .map(|i| {
            let s = seed.wrapping_add(i as u64 * 0x9E37_79B9);
            let kind = match i % 8 {
                5 => Synthetic::Noise { sigma: 40.0 },
                7 => Synthetic::Checkerboard { cell: 3 + i % 5 },
                _ => Synthetic::Scene,
            };
            synthetic(kind, width, height, s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_round_trip() {
        let img = synthetic(Synthetic::Scene, 13, 7, 3);
        let back = GrayImage::from_pgm(&img.to_pgm()).unwrap();
        assert_eq!(back, img);
        let with_comment = b"P5\n# c\n2 1\n255\n\x01\x02";
        assert_eq!(GrayImage::from_pgm(with_comment).unwrap().pixels(), &[1, 2]);
        assert!(GrayImage::from_pgm(b"P2\n1 1\n255\n0").is_err());
        assert!(GrayImage::from_pgm(b"P5\n2 2\n255\n\x00").is_err());
    }

    #[test]
    fn synthetic_images_are_seeded() {
        assert_eq!(synthetic_set(4, 16, 16, 9), synthetic_set(4, 16, 16, 9));
        assert_ne!(synthetic_set(4, 16, 16, 9), synthetic_set(4, 16, 16, 10));
        let g = synthetic(Synthetic::HorizontalGradient, 5, 2, 0);
        assert_eq!(g.pixels()[..5], [0, 64, 128, 191, 255]);
    }

    #[test]
    fn clamped_access_replicates_border() {
        let g = GrayImage::from_fn(3, 3, |x, y| (y * 3 + x) as u8);
        assert_eq!(g.get_clamped(-1, -1), 0);
        assert_eq!(g.get_clamped(5, 1), 5);
    }
}
