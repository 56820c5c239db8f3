#![allow(dead_code)]

use cmacc_isi::{Allocation, ChannelSpec};
use rand::Rng;

pub fn spec(links: [Vec<f64>; 4], noises: [Vec<f64>; 2], p1: f64, p2: f64) -> ChannelSpec {
    ChannelSpec::from_raw(links, noises, p1, p2).unwrap()
}

pub fn random_taps(rng: &mut impl Rng, max_len: usize) -> Vec<f64> {
    let len = rng.random_range(1..=max_len);
    (0..len).map(|_| rng.random_range(-1.5..1.5)).collect()
}

/// Autocorrelation with support at most `max_support` whose spectrum stays
/// at or above half of `R[0]`.
pub fn random_noise(rng: &mut impl Rng, max_support: usize) -> Vec<f64> {
    let len = rng.random_range(1..=max_support);
    let r0 = rng.random_range(0.5..2.0);
    let mut r = vec![r0];
    for _ in 1..len {
        r.push(rng.random_range(-0.12..0.12) * r0);
    }
    r
}

pub fn random_spec(rng: &mut impl Rng) -> ChannelSpec {
    let links = std::array::from_fn(|_| random_taps(rng, 4));
    let noises = std::array::from_fn(|_| random_noise(rng, 3));
    let (p1, p2) = (rng.random_range(0.1..4.0), rng.random_range(0.1..4.0));
    spec(links, noises, p1, p2)
}

pub fn mirrored(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for k in 0..=n / 2 {
        let x = rng.random_range(lo..=hi);
        v[k] = x;
        v[(n - k) % n] = x;
    }
    v
}

/// Random symmetric allocation scaled to use exactly the spec budgets.
pub fn random_allocation(rng: &mut impl Rng, n: usize, budgets: (f64, f64)) -> Allocation {
    let mut power = |budget: f64| {
        let v = mirrored(rng, n, 0.0, 1.0);
        let mean = v.iter().sum::<f64>() / n as f64;
        if mean > 0.0 {
            v.iter().map(|x| x * budget / mean * (1.0 - 1e-12)).collect()
        } else {
            vec![budget; n]
        }
    };
    let p1 = power(budgets.0);
    let p2 = power(budgets.1);
    let a1 = mirrored(rng, n, 0.0, 1.0);
    let a2 = mirrored(rng, n, 0.0, 1.0);
    Allocation::new(p1, p2, a1, a2).unwrap()
}
