//! Sampling keyed by `(seed, suite, case)` so that concurrent cases never
//! share generator state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::lie::GroupElement;
use crate::linalg::{c, CVector, ZERO};

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn keyed_rng(seed: u64, suite: &str, case: &str) -> ChaCha20Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(suite).to_le_bytes());
    key[16..24].copy_from_slice(&fnv1a(case).to_le_bytes());
    ChaCha20Rng::from_seed(key)
}

/// Normalized complex Gaussian coefficients on the leading `support` modes.
pub fn interior_vector(rng: &mut impl Rng, dim: usize, support: usize) -> CVector {
    let support = support.min(dim);
    let mut v = CVector::from_element(dim, ZERO);
    for k in 0..support {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        v[k] = c(re, im);
    }
    let n = v.norm();
    if n > 0.0 {
        v /= c(n, 0.0);
    }
    v
}

/// Uniform in the box `|ξ_k| ≤ r`.
pub fn group_element(rng: &mut impl Rng, r: f64) -> GroupElement {
    GroupElement::new(rng.random_range(-r..=r), rng.random_range(-r..=r), rng.random_range(-r..=r))
}

/// Multiples of `2⁻¹⁰` in the box `|ξ_k| ≤ r`, for checks that must be exact
/// in floating point.
pub fn dyadic_element(rng: &mut impl Rng, r: f64) -> GroupElement {
    let k = (r * 1024.0).floor() as i64;
    let mut draw = || rng.random_range(-k..=k) as f64 / 1024.0;
    GroupElement::new(draw(), draw(), draw())
}

pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_keyed() {
        let a: u64 = keyed_rng(42, "s", "a").random();
        let b: u64 = keyed_rng(42, "s", "a").random();
        let c: u64 = keyed_rng(42, "s", "b").random();
        let d: u64 = keyed_rng(43, "s", "a").random();
        assert_eq!(a, b);
        assert!(a != c && a != d);
    }

    #[test]
    fn vectors_are_normalized_on_support() {
        let mut rng = keyed_rng(1, "x", "y");
        let v = interior_vector(&mut rng, 10, 4);
        assert!((v.norm() - 1.0).abs() < 1e-14);
        assert!(v.rows(4, 6).iter().all(|z| *z == ZERO));
        let g = dyadic_element(&mut rng, 2.0);
        assert_eq!((g.xi1 * 1024.0).fract(), 0.0);
        assert!(g.max_abs() <= 2.0);
    }
}
