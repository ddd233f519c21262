use super::graph::{AccelGraph, GraphBuilder, NodeId};
use crate::circgen::OpClass;
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Name of the pixel input at neighbourhood position (`row`, `col`), both in
/// `0..3`; the centre pixel is `p11`.
pub fn pixel_input(row: usize, col: usize) -> String {
    format!("p{row}{col}")
}

/// Name of the coefficient input at kernel position (`row`, `col`).
pub fn coeff_input(row: usize, col: usize) -> String {
    format!("k{row}{col}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Sobel,
    FixedGf,
    GenericGf,
}

impl Benchmark {
    pub const ALL: [Benchmark; 3] = [Benchmark::Sobel, Benchmark::FixedGf, Benchmark::GenericGf];

    pub fn graph(self) -> AccelGraph {
        match self {
            Benchmark::Sobel => build_sobel(),
            Benchmark::FixedGf => build_fixed_gf(),
            Benchmark::GenericGf => build_generic_gf(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Sobel => "sobel",
            Benchmark::FixedGf => "fixed_gf",
            Benchmark::GenericGf => "generic_gf",
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;
    fn from_str(s: &str) -> Result<Benchmark> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown benchmark `{s}` (sobel, fixed_gf, generic_gf)")))
    }
}

fn pixels(g: &mut GraphBuilder) -> [[NodeId; 3]; 3] {
    let mut p = [[0; 3]; 3];
    for (r, row) in p.iter_mut().enumerate() {
        for (c, id) in row.iter_mut().enumerate() {
            *id = g.input(&pixel_input(r, c), 8);
        }
    }
    p
}

/// Vertical-edge Sobel detector: `|right column - left column|` with
/// column weights (1, 2, 1), saturated to 8 bits.
pub fn build_sobel() -> AccelGraph {
    let mut g = GraphBuilder::new();
    let p = pixels(&mut g);
    let add1 = g.op("add1", OpClass::ADD8, p[0][0], p[2][0]);
    let sh_l = g.shl("shl_left", p[1][0], 1, None);
    let add2 = g.op("add2", OpClass::ADD9, add1, sh_l);
    let add3 = g.op("add3", OpClass::ADD8, p[0][2], p[2][2]);
    let sh_r = g.shl("shl_right", p[1][2], 1, None);
    let add4 = g.op("add4", OpClass::ADD9, add3, sh_r);
    let sub = g.op("sub", OpClass::SUB10, add4, add2);
    g.output("out", sub, 8);
    g.finish("sobel").expect("sobel graph is well formed")
}

/// Quantized 3x3 Gaussian kernel (sigma 2), row-major, summing to 256.
pub const FIXED_GF_KERNEL: [u64; 9] = [26, 30, 26, 30, 32, 30, 26, 30, 26];

/// Fixed Gaussian filter with multiplierless constant multiplication:
/// `26 Sc + 30 Se + 32 p = 2 (16 (Sc + Se + p) - (3 Sc + Se))`, where `Sc`
/// and `Se` are the corner and edge sums; the result is shifted right by 7.
pub fn build_fixed_gf() -> AccelGraph {
    let mut g = GraphBuilder::new();
    let p = pixels(&mut g);
    let c1 = g.op("c1", OpClass::ADD8, p[0][0], p[0][2]);
    let c2 = g.op("c2", OpClass::ADD8, p[2][0], p[2][2]);
    let e1 = g.op("e1", OpClass::ADD8, p[0][1], p[2][1]);
    let e2 = g.op("e2", OpClass::ADD8, p[1][0], p[1][2]);
    let sc = g.op("sc", OpClass::ADD9, c1, c2);
    let se = g.op("se", OpClass::ADD9, e1, e2);
    let sc2 = g.shl("sc_x2", sc, 1, None);
    let a = g.op("a", OpClass::ADD16, sc, sc2);
    let x = g.op("x", OpClass::ADD16, a, se);
    let t = g.op("t", OpClass::ADD16, sc, se);
    let u = g.op("u", OpClass::ADD16, t, p[1][1]);
    let u16 = g.shl("u_x16", u, 4, Some(16));
    let r = g.op("r", OpClass::SUB16, u16, x);
    let q = g.shr("norm", r, 7);
    g.output("out", q, 8);
    g.finish("fixed_gf").expect("fixed GF graph is well formed")
}

/// Gaussian filter with runtime coefficients: nine 8x8 products summed by
/// a tree of 16-bit adders, normalized by a right shift of 8.
pub fn build_generic_gf() -> AccelGraph {
    let mut g = GraphBuilder::new();
    let p = pixels(&mut g);
    let mut k = [[0; 3]; 3];
    for (r, row) in k.iter_mut().enumerate() {
        for (c, id) in row.iter_mut().enumerate() {
            *id = g.input(&coeff_input(r, c), 8);
        }
    }
    let mut m = Vec::with_capacity(9);
    for r in 0..3 {
        for c in 0..3 {
            m.push(g.op(&format!("m{r}{c}"), OpClass::MUL8, p[r][c], k[r][c]));
        }
    }
    let s0 = g.op("s0", OpClass::ADD16, m[0], m[1]);
    let s1 = g.op("s1", OpClass::ADD16, m[2], m[3]);
    let s2 = g.op("s2", OpClass::ADD16, m[4], m[5]);
    let s3 = g.op("s3", OpClass::ADD16, m[6], m[7]);
    let t0 = g.op("t0", OpClass::ADD16, s0, s1);
    let t1 = g.op("t1", OpClass::ADD16, s2, s3);
    let u = g.op("u", OpClass::ADD16, t0, t1);
    let v = g.op("v", OpClass::ADD16, u, m[8]);
    let q = g.shr("norm", v, 8);
    g.output("out", q, 8);
    g.finish("generic_gf").expect("generic GF graph is well formed")
}

/// `weights` scaled to integers summing to `total`, each at most `cap`, by
/// flooring and then handing out the deficit in order of decreasing
/// remainder (ties to the lower index).
pub fn quantize_largest_remainder(weights: &[f64], total: u64, cap: u64) -> Vec<u64> {
    let sum: f64 = weights.iter().sum();
    let ideal: Vec<f64> = weights.iter().map(|w| w / sum * total as f64).collect();
    let mut q: Vec<u64> = ideal.iter().map(|x| (x.floor() as u64).min(cap)).collect();
    let mut order: Vec<usize> = (0..q.len()).collect();
    order.sort_by(|&i, &j| (ideal[j] - q[j] as f64).total_cmp(&(ideal[i] - q[i] as f64)).then(i.cmp(&j)));
    let mut deficit = total.saturating_sub(q.iter().sum());
    while deficit > 0 {
        let before = deficit;
        for &i in &order {
            if deficit == 0 {
                break;
            }
            if q[i] < cap {
                q[i] += 1;
                deficit -= 1;
            }
        }
        if before == deficit {
            break;
        }
    }
    q
}

/// 3x3 Gaussian weights `exp(-(dx^2 + dy^2) / (2 sigma^2))`, row-major.
pub fn gaussian_weights(sigma: f64) -> [f64; 9] {
    let mut w = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            let d2 = ((r as f64 - 1.0).powi(2) + (c as f64 - 1.0).powi(2)) as f64;
            w[r * 3 + c] = (-d2 / (2.0 * sigma * sigma)).exp();
        }
    }
    w
}

/// 8-bit coefficients of a Gaussian kernel summing to 256.
pub fn gaussian_kernel(sigma: f64) -> [u64; 9] {
    let q = quantize_largest_remainder(&gaussian_weights(sigma), 256, 255);
    q.try_into().expect("nine coefficients")
}

/// `count` kernels with sigma evenly spaced over `[lo, hi]`.
pub fn generic_gf_kernels(count: usize, lo: f64, hi: f64) -> Vec<[u64; 9]> {
    (0..count)
        .map(|i| {
            let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.0 };
            gaussian_kernel(lo + t * (hi - lo))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_class_counts() {
        let s = build_sobel().class_counts();
        assert_eq!(s[&OpClass::ADD8], 2);
        assert_eq!(s[&OpClass::ADD9], 2);
        assert_eq!(s[&OpClass::SUB10], 1);
        let f = build_fixed_gf();
        assert_eq!(f.op_count(), 11);
        let fc = f.class_counts();
        assert_eq!((fc[&OpClass::ADD8], fc[&OpClass::ADD9], fc[&OpClass::ADD16], fc[&OpClass::SUB16]), (4, 2, 4, 1));
        let gg = build_generic_gf();
        assert_eq!(gg.op_count(), 17);
        assert_eq!(gg.class_counts()[&OpClass::MUL8], 9);
    }

    #[test]
    fn kernels_sum_to_256() {
        assert_eq!(FIXED_GF_KERNEL.iter().sum::<u64>(), 256);
        for k in generic_gf_kernels(50, 0.3, 0.8) {
            assert_eq!(k.iter().sum::<u64>(), 256);
            assert!(k.iter().all(|&c| c <= 255));
            // Largest product sum stays within 16 bits.
            assert!(k.iter().map(|c| c * 255).sum::<u64>() < 1 << 16);
        }
        assert_eq!(quantize_largest_remainder(&[1.0; 9], 256, 255).iter().sum::<u64>(), 256);
        assert_eq!(quantize_largest_remainder(&[1.0, 0.0], 256, 255), vec![255, 1]);
    }

    #[test]
    fn fixed_kernel_is_the_sigma_two_gaussian_up_to_one_unit() {
        let w = gaussian_weights(2.0);
        let s: f64 = w.iter().sum();
        for (q, w) in FIXED_GF_KERNEL.iter().zip(w) {
            assert!((*q as f64 - 256.0 * w / s).abs() < 1.5);
        }
    }

    #[test]
    fn names_parse() {
        for b in Benchmark::ALL {
            assert_eq!(b.name().parse::<Benchmark>().unwrap(), b);
        }
        assert!("laplace".parse::<Benchmark>().is_err());
    }
}
