#![allow(dead_code)]

use cmacc_isi::{validate_spec, Allocation, ChannelSpec, ImpulseResponse, NoiseModel};
use rand::Rng;

pub fn ir(taps: &[f64]) -> ImpulseResponse {
    ImpulseResponse::new(taps.to_vec()).unwrap()
}

pub fn noise(r: &[f64]) -> NoiseModel {
    NoiseModel::new(r.to_vec()).unwrap()
}

pub fn spec(
    links: [&[f64]; 4],
    noises: [&[f64]; 2],
    budgets: (f64, f64),
) -> ChannelSpec {
    validate_spec(&ChannelSpec {
        h11: ir(links[0]),
        h12: ir(links[1]),
        h21: ir(links[2]),
        h22: ir(links[3]),
        noise1: noise(noises[0]),
        noise2: noise(noises[1]),
        p1: budgets.0,
        p2: budgets.1,
    })
    .unwrap()
}

/// Random spec with memory at most `max_memory` and noise PSD bounded away
/// from zero.
pub fn random_spec(rng: &mut impl Rng, max_memory: usize) -> ChannelSpec {
    let mut taps = || -> Vec<f64> {
        let len = rng.random_range(1..=max_memory + 1);
        (0..len).map(|_| rng.random_range(-1.5..1.5)).collect()
    };
    let links = [taps(), taps(), taps(), taps()];
    let mut colored = || -> Vec<f64> {
        let len = rng.random_range(1..=3);
        let mut r = vec![rng.random_range(0.5..2.0)];
        for _ in 1..len {
            r.push(rng.random_range(-0.2..0.2) * r[0]);
        }
        r
    };
    let noises = [colored(), colored()];
    let budgets = (rng.random_range(0.1..4.0), rng.random_range(0.1..4.0));
    spec(
        [&links[0], &links[1], &links[2], &links[3]],
        [&noises[0], &noises[1]],
        budgets,
    )
}

/// Random mirror-symmetric allocation with positive mean powers.
pub fn random_allocation(rng: &mut impl Rng, n: usize) -> Allocation {
    let mut profile = |lo: f64, hi: f64| -> Vec<f64> {
        let mut v = vec![0.0; n];
        for k in 0..=n / 2 {
            let x = rng.random_range(lo..=hi);
            v[k] = x;
            v[(n - k) % n] = x;
        }
        v
    };
    let p1 = profile(0.0, 3.0);
    let p2 = profile(0.0, 3.0);
    let a1 = profile(0.0, 1.0);
    let a2 = profile(0.0, 1.0);
    Allocation::new(p1, p2, a1, a2).unwrap()
}

/// `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
