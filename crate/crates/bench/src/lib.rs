//! Fixtures shared by the benchmarks.

use cmacc_isi::{Allocation, ChannelSpec};

/// A three-tap channel with colored noise at both receivers.
pub fn isi_spec() -> ChannelSpec {
    ChannelSpec::from_raw(
        [
            vec![1.0, 0.6, -0.3],
            vec![0.8, -0.4],
            vec![0.5, 0.5],
            vec![1.2, 0.1, 0.2],
        ],
        [vec![1.0, 0.3], vec![0.8, -0.2]],
        1.0,
        1.5,
    )
    .expect("fixture is valid")
}

/// Mirror-symmetric allocation with a gentle spectral tilt.
pub fn tilted_allocation(n: usize) -> Allocation {
    let profile = |scale: f64, tilt: f64| -> Vec<f64> {
        (0..n)
            .map(|k| {
                let w = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                scale * (1.0 + tilt * w.cos())
            })
            .collect()
    };
    Allocation::new(
        profile(1.0, 0.5),
        profile(1.5, -0.3),
        profile(0.4, 0.2),
        profile(0.3, 0.1),
    )
    .expect("fixture is valid")
}
