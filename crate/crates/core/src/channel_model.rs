//! Physical channel description: four FIR links, two stationary colored
//! noise processes and the two senders' power budgets.
//!
//! Link naming follows the sender/receiver convention `h{sender}{receiver}`,
//! so `h21` carries sender 2 into receiver 1.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of uniform frequency samples used to check that an
/// autocorrelation sequence has a nonnegative spectrum.
pub const PSD_CHECK_GRID: usize = 4096;

/// Negative round-off tolerated in spectral densities.
pub const PSD_TOLERANCE: f64 = 1e-12;

/// Real FIR impulse response `h_0..h_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ImpulseResponse {
    taps: Vec<f64>,
}

impl ImpulseResponse {
    pub fn new(taps: Vec<f64>) -> Result<Self> {
        Self::checked(taps, "taps")
    }

    fn checked(taps: Vec<f64>, field: &'static str) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::InvalidTaps {
                field,
                reason: "impulse response is empty".into(),
            });
        }
        if let Some((i, t)) = taps.iter().enumerate().find(|(_, t)| !t.is_finite()) {
            return Err(Error::InvalidTaps {
                field,
                reason: format!("tap {i} is not finite ({t})"),
            });
        }
        Ok(Self { taps })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    /// Channel memory `m`, i.e. number of taps minus one.
    pub fn memory(&self) -> usize {
        self.taps.len() - 1
    }

    /// Zero-pads to `memory` (no-op if already at least that long).
    pub fn padded_to(&self, memory: usize) -> Self {
        let mut taps = self.taps.clone();
        if taps.len() < memory + 1 {
            taps.resize(memory + 1, 0.0);
        }
        Self { taps }
    }
}

impl TryFrom<Vec<f64>> for ImpulseResponse {
    type Error = Error;

    fn try_from(taps: Vec<f64>) -> Result<Self> {
        Self::new(taps)
    }
}

impl From<ImpulseResponse> for Vec<f64> {
    fn from(h: ImpulseResponse) -> Self {
        h.taps
    }
}

/// One-sided autocorrelation `R[0..t_max)` of a stationary noise process;
/// `R[-t] = R[t]` is implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    autocorr: Vec<f64>,
}

impl NoiseModel {
    pub fn new(autocorr: Vec<f64>) -> Result<Self> {
        let model = Self { autocorr };
        model.check_basic("noise")?;
        Ok(model)
    }

    /// White noise of the given variance.
    pub fn white(variance: f64) -> Result<Self> {
        Self::new(vec![variance])
    }

    pub fn autocorr(&self) -> &[f64] {
        &self.autocorr
    }

    /// Support bound `t_max`: `R[t] = 0` for `|t| >= t_max`.
    pub fn support(&self) -> usize {
        self.autocorr.len()
    }

    fn check_basic(&self, field: &'static str) -> Result<()> {
        let r = &self.autocorr;
        if r.is_empty() {
            return Err(Error::InvalidNoise {
                field,
                reason: "autocorrelation is empty".into(),
            });
        }
        if let Some((i, v)) = r.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidNoise {
                field,
                reason: format!("R[{i}] is not finite ({v})"),
            });
        }
        if r[0] <= 0.0 {
            return Err(Error::InvalidNoise {
                field,
                reason: format!("R[0] = {} must be positive", r[0]),
            });
        }
        Ok(())
    }

    fn check_spectrum(&self, field: &'static str) -> Result<()> {
        for i in 0..PSD_CHECK_GRID {
            let omega = 2.0 * PI * i as f64 / PSD_CHECK_GRID as f64;
            let value = psd_raw(&self.autocorr, omega);
            if value < -PSD_TOLERANCE {
                return Err(Error::InvalidNoise {
                    field,
                    reason: format!("spectral density is {value:.6e} at omega = {omega:.6}"),
                });
            }
        }
        Ok(())
    }
}

/// Complete two-sender, two-receiver channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub h11: ImpulseResponse,
    pub h12: ImpulseResponse,
    pub h21: ImpulseResponse,
    pub h22: ImpulseResponse,
    pub noise1: NoiseModel,
    pub noise2: NoiseModel,
    pub p1: f64,
    pub p2: f64,
}

impl ChannelSpec {
    /// Common channel memory after validation; before validation this is the
    /// largest individual memory.
    pub fn memory(&self) -> usize {
        self.links().iter().map(|h| h.memory()).max().unwrap_or(0)
    }

    /// Builds a spec from plain sequences (links in the order `h11, h12, h21,
    /// h22`) and validates it. Errors name the offending field.
    pub fn from_raw(
        links: [Vec<f64>; 4],
        noises: [Vec<f64>; 2],
        p1: f64,
        p2: f64,
    ) -> Result<Self> {
        let [h11, h12, h21, h22] = links;
        let [noise1, noise2] = noises;
        let spec = ChannelSpec {
            h11: ImpulseResponse::checked(h11, "h11")?,
            h12: ImpulseResponse::checked(h12, "h12")?,
            h21: ImpulseResponse::checked(h21, "h21")?,
            h22: ImpulseResponse::checked(h22, "h22")?,
            noise1: NoiseModel { autocorr: noise1 },
            noise2: NoiseModel { autocorr: noise2 },
            p1,
            p2,
        };
        validate_spec(&spec)
    }

    /// Links in the order `h11, h12, h21, h22`.
    pub fn links(&self) -> [&ImpulseResponse; 4] {
        [&self.h11, &self.h12, &self.h21, &self.h22]
    }

    pub fn budgets(&self) -> (f64, f64) {
        (self.p1, self.p2)
    }

    /// Link from `sender` into `receiver` (both 1-based).
    pub fn link(&self, sender: usize, receiver: usize) -> &ImpulseResponse {
        match (sender, receiver) {
            (1, 1) => &self.h11,
            (1, 2) => &self.h12,
            (2, 1) => &self.h21,
            (2, 2) => &self.h22,
            _ => panic!("link ({sender}, {receiver}) out of range"),
        }
    }

    /// Noise at `receiver` (1-based).
    pub fn noise(&self, receiver: usize) -> &NoiseModel {
        match receiver {
            1 => &self.noise1,
            2 => &self.noise2,
            _ => panic!("receiver {receiver} out of range"),
        }
    }
}

/// Checks every field and zero-pads all four links to a common memory
/// `m = max(individual memories, t_max - 1)`.
pub fn validate_spec(spec: &ChannelSpec) -> Result<ChannelSpec> {
    for (field, h) in [
        ("h11", &spec.h11),
        ("h12", &spec.h12),
        ("h21", &spec.h21),
        ("h22", &spec.h22),
    ] {
        ImpulseResponse::checked(h.taps.clone(), field)?;
    }
    for (field, noise) in [("noise1", &spec.noise1), ("noise2", &spec.noise2)] {
        noise.check_basic(field)?;
        noise.check_spectrum(field)?;
    }
    for (field, value) in [("p1", spec.p1), ("p2", spec.p2)] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidPower { field, value });
        }
    }

    let t_max = spec.noise1.support().max(spec.noise2.support());
    let memory = spec.memory().max(t_max - 1);
    Ok(ChannelSpec {
        h11: spec.h11.padded_to(memory),
        h12: spec.h12.padded_to(memory),
        h21: spec.h21.padded_to(memory),
        h22: spec.h22.padded_to(memory),
        ..spec.clone()
    })
}

/// `H(omega) = sum_t h_t exp(-j omega t)`.
pub fn transfer_function(h: &ImpulseResponse, omega: f64) -> Complex64 {
    h.taps
        .iter()
        .enumerate()
        .map(|(t, &c)| Complex64::from_polar(c, -omega * t as f64))
        .sum()
}

fn psd_raw(autocorr: &[f64], omega: f64) -> f64 {
    autocorr[0]
        + 2.0
            * autocorr
                .iter()
                .enumerate()
                .skip(1)
                .map(|(t, &r)| r * (omega * t as f64).cos())
                .sum::<f64>()
}

/// Noise spectral density `N(omega) = sum_{|t| < t_max} R[|t|] exp(-j omega t)`.
///
/// Round-off negatives down to `-1e-12` are clamped to zero; anything below
/// that is returned as-is (only possible for unvalidated models).
pub fn noise_psd(noise: &NoiseModel, omega: f64) -> f64 {
    let value = psd_raw(&noise.autocorr, omega);
    if (-PSD_TOLERANCE..0.0).contains(&value) {
        0.0
    } else {
        value
    }
}
