//! Bit-plane helpers for bit-sliced simulation.
//!
//! A *plane* is a `u64` holding one bit of 64 independent values (lane `j`
//! in bit `j`). Netlists are evaluated on planes, so converting between
//! per-lane integers and planes is on every hot path.

/// Transposes a 64x64 bit matrix in place: afterwards bit `c` of row `r`
/// holds what was bit `r` of row `c`.
pub fn transpose64(m: &mut [u64; 64]) {
    let mut j = 32usize;
    let mut mask: u64 = 0x0000_0000_FFFF_FFFF;
    while j != 0 {
        let mut k = 0usize;
        while k < 64 {
            let t = ((m[k] >> j) ^ m[k + j]) & mask;
            m[k] ^= t << j;
            m[k + j] ^= t;
            k = (k + j + 1) & !j;
        }
        j >>= 1;
        mask ^= mask << j;
    }
}

/// Converts up to 64 lane values into `width` bit planes.
pub fn values_to_planes(values: &[u64], width: usize, out: &mut [u64]) {
    debug_assert!(values.len() <= 64 && width <= 64 && out.len() >= width);
    let mut m = [0u64; 64];
    m[..values.len()].copy_from_slice(values);
    transpose64(&mut m);
    out[..width].copy_from_slice(&m[..width]);
}

/// Converts `planes.len()` bit planes into 64 lane values.
pub fn planes_to_values(planes: &[u64], out: &mut [u64; 64]) {
    debug_assert!(planes.len() <= 64);
    out.fill(0);
    out[..planes.len()].copy_from_slice(planes);
    transpose64(out);
}

/// Plane of input-index bit `bit` for lanes `base..base + 64`, where lane
/// `j` carries the integer `base + j` and `base` is a multiple of 64.
pub fn counter_plane(base: u64, bit: u32) -> u64 {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if bit < 6 {
        PATTERNS[bit as usize]
    } else if (base >> bit) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_transpose(m: &[u64; 64]) -> [u64; 64] {
        let mut out = [0u64; 64];
        for (r, row) in m.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o |= ((row >> c) & 1) << r;
            }
        }
        out
    }

    #[test]
    fn transpose_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut m = [0u64; 64];
            m.iter_mut().for_each(|x| *x = rng.gen());
            let expect = naive_transpose(&m);
            transpose64(&mut m);
            assert_eq!(m, expect);
        }
    }

    #[test]
    fn planes_round_trip() {
        let values: Vec<u64> = (0..64).map(|i| (i * 37 + 5) % 1024).collect();
        let mut planes = [0u64; 10];
        values_to_planes(&values, 10, &mut planes);
        let mut back = [0u64; 64];
        planes_to_values(&planes, &mut back);
        assert_eq!(&back[..], &values[..]);
    }

    #[test]
    fn counter_planes_enumerate() {
        for base in [0u64, 64, 128 * 5] {
            let mut planes = [0u64; 12];
            for (b, p) in planes.iter_mut().enumerate() {
                *p = counter_plane(base, b as u32);
            }
            let mut vals = [0u64; 64];
            planes_to_values(&planes, &mut vals);
            for (j, v) in vals.iter().enumerate() {
                assert_eq!(*v, base + j as u64);
            }
        }
    }
}
