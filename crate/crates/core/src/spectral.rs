//! n-block circular channel and its DFT decomposition into `n` parallel
//! scalar sub-channels.
//!
//! The transform is unnormalized in the forward direction and scaled by
//! `1/n` on the way back, so a circulant matrix with first column `c` has
//! eigenvalues exactly `dft(c)`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::channel_model::{ChannelSpec, ImpulseResponse, NoiseModel, PSD_TOLERANCE};
use crate::error::{Error, Result};

/// A real time-domain block of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealBlock(Vec<f64>);

impl RealBlock {
    pub fn new(samples: Vec<f64>) -> Self {
        Self(samples)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl From<Vec<f64>> for RealBlock {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// `(h_0, ..., h_m, 0, ..., 0)` of length `n`; requires `n > m`.
pub fn extend_impulse_response(h: &ImpulseResponse, n: usize) -> Result<RealBlock> {
    if n <= h.memory() {
        return Err(Error::BlockTooShort {
            n,
            memory: h.memory(),
        });
    }
    let mut samples = h.taps().to_vec();
    samples.resize(n, 0.0);
    Ok(RealBlock(samples))
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    if buf.is_empty() {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    plan.process(buf);
}

/// Forward DFT `X_k = sum_t x_t exp(-j 2 pi k t / n)` of a real block.
///
/// The output is conjugate symmetric bit-for-bit: `X_k == conj(X_{n-k})`.
pub fn dft(x: &RealBlock) -> Vec<Complex64> {
    let n = x.len();
    let mut buf: Vec<Complex64> = x.0.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut buf, false);
    if n == 0 {
        return buf;
    }
    let mut out = buf.clone();
    out[0] = Complex64::new(buf[0].re, 0.0);
    for k in 1..n {
        let mirrored = buf[n - k].conj();
        let avg = (buf[k] + mirrored) * 0.5;
        out[k] = if k < n - k {
            avg
        } else if k == n - k {
            Complex64::new(avg.re, 0.0)
        } else {
            out[n - k].conj()
        };
    }
    out
}

/// Inverse DFT with `1/n` scaling, keeping only the real part.
pub fn idft(spectrum: &[Complex64]) -> RealBlock {
    let n = spectrum.len();
    let mut buf = spectrum.to_vec();
    fft_in_place(&mut buf, true);
    let scale = 1.0 / n.max(1) as f64;
    RealBlock(buf.into_iter().map(|c| c.re * scale).collect())
}

/// Circular convolution `c_k = sum_t a_t b_{(k - t) mod n}`.
pub fn circular_convolve(a: &RealBlock, b: &RealBlock) -> Result<RealBlock> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: b.len(),
        });
    }
    let out = (0..n)
        .map(|k| {
            (0..n)
                .map(|t| a.0[t] * b.0[(k + n - t) % n])
                .sum::<f64>()
        })
        .collect();
    Ok(RealBlock(out))
}

/// Folds the two-sided autocorrelation into one period of length `n`:
/// `R~[t] = sum_j R[t + j n]` for `t = 0..n`.
pub fn fold_autocorrelation(noise: &NoiseModel, n: usize) -> RealBlock {
    let r = noise.autocorr();
    let mut folded = vec![0.0; n];
    if n == 0 {
        return RealBlock(folded);
    }
    folded[0] += r[0];
    for (lag, &value) in r.iter().enumerate().skip(1) {
        folded[lag % n] += value;
        folded[(n - lag % n) % n] += value;
    }
    RealBlock(folded)
}

/// Eigenvalues `N~(omega_k)` of the periodized noise covariance.
pub fn periodize_autocorrelation(noise: &NoiseModel, n: usize) -> Result<Vec<f64>> {
    periodize_named(noise, n, "noise")
}

fn periodize_named(noise: &NoiseModel, n: usize, field: &'static str) -> Result<Vec<f64>> {
    let folded = fold_autocorrelation(noise, n);
    let spectrum = dft(&folded);
    spectrum
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let v = c.re;
            if v < -PSD_TOLERANCE {
                Err(Error::IndefinitePeriodization {
                    field,
                    bin: k,
                    value: v,
                })
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

/// Per-frequency gains and noise levels of the `n` parallel sub-channels.
#[derive(Debug, Clone, PartialEq)]
pub struct SubchannelSet {
    n: usize,
    // Order: h11, h12, h21, h22.
    gains: [Vec<Complex64>; 4],
    noise: [Vec<f64>; 2],
}

fn link_index(sender: usize, receiver: usize) -> usize {
    match (sender, receiver) {
        (1, 1) => 0,
        (1, 2) => 1,
        (2, 1) => 2,
        (2, 2) => 3,
        _ => panic!("link ({sender}, {receiver}) out of range"),
    }
}

impl SubchannelSet {
    /// Builds a set from raw per-bin values. All vectors must have length `n`.
    pub fn from_parts(gains: [Vec<Complex64>; 4], noise: [Vec<f64>; 2]) -> Result<Self> {
        let n = gains[0].len();
        for g in gains.iter() {
            if g.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "gain profile",
                    expected: n,
                    found: g.len(),
                });
            }
        }
        for z in noise.iter() {
            if z.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "noise profile",
                    expected: n,
                    found: z.len(),
                });
            }
            if z.iter().any(|&v| v.is_nan() || v < 0.0) {
                return Err(Error::InvalidNoise {
                    field: "noise profile",
                    reason: "negative or non-finite noise eigenvalue".into(),
                });
            }
        }
        Ok(Self { n, gains, noise })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of independent half-spectrum bins, `floor(n/2) + 1`.
    pub fn half_len(&self) -> usize {
        self.n / 2 + 1
    }

    /// `H~_{sender,receiver}(omega_k)` for all `k`.
    pub fn gain(&self, sender: usize, receiver: usize) -> &[Complex64] {
        &self.gains[link_index(sender, receiver)]
    }

    /// `N~_receiver(omega_k)` for all `k`.
    pub fn noise(&self, receiver: usize) -> &[f64] {
        &self.noise[receiver - 1]
    }

    /// `|H~|^2 / N~` for one link, with zero-noise bins mapped to infinity
    /// (or zero when the gain also vanishes).
    pub fn snr_profile(&self, sender: usize, receiver: usize) -> Vec<f64> {
        self.gain(sender, receiver)
            .iter()
            .zip(self.noise(receiver))
            .map(|(h, &z)| {
                let g = h.norm_sqr();
                if z > 0.0 {
                    g / z
                } else if g > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .collect()
    }
}

/// `omega_k = 2 pi k / n`.
pub fn frequency(k: usize, n: usize) -> f64 {
    2.0 * std::f64::consts::PI * k as f64 / n as f64
}

/// Decomposes a validated spec into `n` parallel sub-channels.
pub fn decompose(spec: &ChannelSpec, n: usize) -> Result<SubchannelSet> {
    let memory = spec.memory();
    if n <= memory {
        return Err(Error::BlockTooShort { n, memory });
    }
    let gain = |h: &ImpulseResponse| -> Result<Vec<Complex64>> {
        Ok(dft(&extend_impulse_response(h, n)?))
    };
    let gains = [
        gain(&spec.h11)?,
        gain(&spec.h12)?,
        gain(&spec.h21)?,
        gain(&spec.h22)?,
    ];
    let noise = [
        periodize_named(&spec.noise1, n, "noise1")?,
        periodize_named(&spec.noise2, n, "noise2")?,
    ];
    Ok(SubchannelSet { n, gains, noise })
}
