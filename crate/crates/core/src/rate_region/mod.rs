//! Rate terms `T1..T8` (sampled spectrum) and their integral counterparts,
//! the region polytope they bound, and the strong-interference collapse.
//!
//! Term layout, with receiver 1 on odd indices and receiver 2 on even ones:
//!
//! | term | bounds            | signal power in numerator                         |
//! |------|-------------------|---------------------------------------------------|
//! | 1, 2 | `R1`              | `(1-a1) P1 |H1r|^2`                               |
//! | 3, 4 | `R2`              | `(1-a2) P2 |H2r|^2`                               |
//! | 5, 6 | `R1 + R2`         | sum of the two private powers                     |
//! | 7, 8 | `R0 + R1 + R2`    | `P1|H1r|^2 + P2|H2r|^2 + 2 sqrt(a1 a2 P1 P2) Re{H1r H2r*}` |
//!
//! All rates are in bits per channel use.

mod interference;
mod polytope;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel_model::{noise_psd, transfer_function, ChannelSpec};
use crate::error::{Error, Result};
use crate::numeric::{log2_1p, pairwise_sum};
use crate::spectral::SubchannelSet;

pub use interference::{
    sicc_region_constraints, strong_interference_check, InterferenceViolation,
    StrongInterferenceVerdict,
};
pub use polytope::{RatePoint, RateWeights, RegionConstraints, MEMBERSHIP_SLACK};

/// Slack on the per-user power budget.
pub const BUDGET_SLACK: f64 = 1e-9;

/// Default number of quadrature nodes for the integral terms.
pub const DEFAULT_QUADRATURE_POINTS: usize = 4096;

/// Per-bin powers and common-message fractions for both senders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    p1: Vec<f64>,
    p2: Vec<f64>,
    a1: Vec<f64>,
    a2: Vec<f64>,
}

impl Allocation {
    /// Checks lengths, finiteness, nonnegative powers and mirror symmetry
    /// `x_k == x_{n-k}`; fractions are clamped into `[0, 1]`.
    pub fn new(p1: Vec<f64>, p2: Vec<f64>, a1: Vec<f64>, a2: Vec<f64>) -> Result<Self> {
        let n = p1.len();
        if n == 0 {
            return Err(Error::InvalidAllocation("empty allocation".into()));
        }
        for (name, v) in [("p1", &p1), ("p2", &p2), ("a1", &a1), ("a2", &a2)] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    what: name_static(name),
                    expected: n,
                    found: v.len(),
                });
            }
            if let Some(k) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::InvalidAllocation(format!("{name}[{k}] is not finite")));
            }
            for k in 1..n {
                let (x, y) = (v[k], v[n - k]);
                if (x - y).abs() > 1e-12 * x.abs().max(y.abs()).max(1.0) {
                    return Err(Error::InvalidAllocation(format!(
                        "{name} is not symmetric: bin {k} = {x}, bin {} = {y}",
                        n - k
                    )));
                }
            }
        }
        for (name, v) in [("p1", &p1), ("p2", &p2)] {
            if let Some(k) = v.iter().position(|&x| x < 0.0) {
                return Err(Error::InvalidAllocation(format!(
                    "{name}[{k}] = {} is negative",
                    v[k]
                )));
            }
        }
        let clamp = |v: Vec<f64>| v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect();
        Ok(Self {
            p1,
            p2,
            a1: clamp(a1),
            a2: clamp(a2),
        })
    }

    /// Uniform powers `P1`, `P2` with no common-message share.
    pub fn flat(n: usize, p1: f64, p2: f64) -> Self {
        Self::uniform(n, p1, p2, 0.0, 0.0)
    }

    pub fn uniform(n: usize, p1: f64, p2: f64, a1: f64, a2: f64) -> Self {
        Self {
            p1: vec![p1; n],
            p2: vec![p2; n],
            a1: vec![a1.clamp(0.0, 1.0); n],
            a2: vec![a2.clamp(0.0, 1.0); n],
        }
    }

    pub fn n(&self) -> usize {
        self.p1.len()
    }

    /// Per-bin power of `sender` (1-based).
    pub fn power(&self, sender: usize) -> &[f64] {
        match sender {
            1 => &self.p1,
            2 => &self.p2,
            _ => panic!("sender {sender} out of range"),
        }
    }

    /// Per-bin common-message fraction of `sender` (1-based).
    pub fn fraction(&self, sender: usize) -> &[f64] {
        match sender {
            1 => &self.a1,
            2 => &self.a2,
            _ => panic!("sender {sender} out of range"),
        }
    }

    /// `(1/n) sum_k P_q(omega_k)`.
    pub fn mean_power(&self, sender: usize) -> f64 {
        pairwise_sum(self.power(sender)) / self.n() as f64
    }

    pub fn check_budget(&self, budgets: (f64, f64)) -> Result<()> {
        for (sender, budget, field) in [(1, budgets.0, "p1"), (2, budgets.1, "p2")] {
            let used = self.mean_power(sender);
            if used > budget + BUDGET_SLACK {
                return Err(Error::BudgetViolated {
                    field,
                    used,
                    budget,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn from_raw(p1: Vec<f64>, p2: Vec<f64>, a1: Vec<f64>, a2: Vec<f64>) -> Self {
        Self { p1, p2, a1, a2 }
    }

    #[cfg(test)]
    pub(crate) fn into_parts(self) -> [Vec<f64>; 4] {
        [self.p1, self.p2, self.a1, self.a2]
    }
}

fn name_static(name: &str) -> &'static str {
    match name {
        "p1" => "p1",
        "p2" => "p2",
        "a1" => "a1",
        _ => "a2",
    }
}

/// Which receiver attains a compound minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Receiver {
    First,
    Second,
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Receiver::First => write!(f, "1"),
            Receiver::Second => write!(f, "2"),
        }
    }
}

/// The eight rate terms and, for each of the four min-pairs, the receiver
/// that attains the minimum (ties report receiver 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBounds {
    terms: [f64; 8],
    binding: [Receiver; 4],
}

impl RateBounds {
    pub fn new(terms: [f64; 8]) -> Self {
        let binding = std::array::from_fn(|pair| {
            if terms[2 * pair + 1] < terms[2 * pair] {
                Receiver::Second
            } else {
                Receiver::First
            }
        });
        Self { terms, binding }
    }

    pub fn terms(&self) -> &[f64; 8] {
        &self.terms
    }

    /// Term `T_i` with `i` in `1..=8`.
    pub fn term(&self, i: usize) -> f64 {
        self.terms[i - 1]
    }

    pub fn binding(&self) -> &[Receiver; 4] {
        &self.binding
    }
}

/// Per-bin numerators (signal powers) of the eight terms.
pub(crate) fn signal_powers(g: &[Complex64; 4], p: [f64; 2], a: [f64; 2]) -> [f64; 8] {
    let [h11, h12, h21, h22] = g;
    let private1 = (1.0 - a[0]) * p[0];
    let private2 = (1.0 - a[1]) * p[1];
    let coherent = (a[0] * a[1] * p[0] * p[1]).sqrt();
    let s1 = private1 * h11.norm_sqr();
    let s2 = private1 * h12.norm_sqr();
    let s3 = private2 * h21.norm_sqr();
    let s4 = private2 * h22.norm_sqr();
    let s7 = p[0] * h11.norm_sqr()
        + p[1] * h21.norm_sqr()
        + coherent * 2.0 * (h11 * h21.conj()).re;
    let s8 = p[0] * h12.norm_sqr()
        + p[1] * h22.norm_sqr()
        + coherent * 2.0 * (h12 * h22.conj()).re;
    [s1, s2, s3, s4, s1 + s3, s2 + s4, s7.max(0.0), s8.max(0.0)]
}

/// `log2(1 + S_i / N_r)` for each term at one frequency.
fn bin_rates(powers: &[f64; 8], noise: [f64; 2], bin: usize) -> Result<[f64; 8]> {
    let mut out = [0.0; 8];
    for (i, (&s, slot)) in powers.iter().zip(out.iter_mut()).enumerate() {
        let z = noise[i % 2];
        *slot = if s <= 0.0 {
            0.0
        } else if z > 0.0 {
            log2_1p(s / z)
        } else {
            return Err(Error::InfiniteRate { term: i + 1, bin });
        };
    }
    Ok(out)
}

/// Sums per-bin rates term by term with fixed-order pairwise reduction.
fn reduce_terms(per_bin: &[[f64; 8]], weight: f64) -> [f64; 8] {
    let mut column = vec![0.0; per_bin.len()];
    std::array::from_fn(|i| {
        for (slot, row) in column.iter_mut().zip(per_bin) {
            *slot = row[i];
        }
        weight * pairwise_sum(&column)
    })
}

/// `T_i = (1/2n) sum_{k=0}^{n-1} log2(1 + SNR_i(omega_k))` over the full
/// sampled spectrum.
pub fn rate_terms_discrete(sub: &SubchannelSet, alloc: &Allocation) -> Result<RateBounds> {
    let n = sub.n();
    if alloc.n() != n {
        return Err(Error::DimensionMismatch {
            what: "allocation",
            expected: n,
            found: alloc.n(),
        });
    }
    let gains = [sub.gain(1, 1), sub.gain(1, 2), sub.gain(2, 1), sub.gain(2, 2)];
    let per_bin = (0..n)
        .map(|k| {
            let g = gains.map(|v| v[k]);
            let powers = signal_powers(
                &g,
                [alloc.p1[k], alloc.p2[k]],
                [alloc.a1[k], alloc.a2[k]],
            );
            bin_rates(&powers, [sub.noise(1)[k], sub.noise(2)[k]], k)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateBounds::new(reduce_terms(&per_bin, 0.5 / n as f64)))
}

type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Continuous allocation profiles `P_q(omega)`, `alpha_q(omega)` on
/// `[-pi, pi)`. Profiles are expected to be even.
#[derive(Clone)]
pub struct SpectralAllocation {
    p1: Profile,
    p2: Profile,
    a1: Profile,
    a2: Profile,
}

impl fmt::Debug for SpectralAllocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralAllocation").finish_non_exhaustive()
    }
}

impl SpectralAllocation {
    pub fn new<P1, P2, A1, A2>(p1: P1, p2: P2, a1: A1, a2: A2) -> Self
    where
        P1: Fn(f64) -> f64 + Send + Sync + 'static,
        P2: Fn(f64) -> f64 + Send + Sync + 'static,
        A1: Fn(f64) -> f64 + Send + Sync + 'static,
        A2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            p1: Arc::new(p1),
            p2: Arc::new(p2),
            a1: Arc::new(a1),
            a2: Arc::new(a2),
        }
    }

    /// Constant powers and fractions.
    pub fn uniform(p1: f64, p2: f64, a1: f64, a2: f64) -> Self {
        Self::new(move |_| p1, move |_| p2, move |_| a1, move |_| a2)
    }

    fn at(&self, omega: f64) -> ([f64; 2], [f64; 2]) {
        (
            [(self.p1)(omega).max(0.0), (self.p2)(omega).max(0.0)],
            [
                (self.a1)(omega).clamp(0.0, 1.0),
                (self.a2)(omega).clamp(0.0, 1.0),
            ],
        )
    }

    /// Samples the profiles at `omega_k = 2 pi k / n`, folded into
    /// `[0, pi]` so the result is exactly mirror symmetric.
    pub fn sample(&self, n: usize) -> Allocation {
        let mut parts: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(n));
        for k in 0..n {
            let folded = k.min(n - k);
            let omega = 2.0 * PI * folded as f64 / n as f64;
            let (p, a) = self.at(omega);
            for (slot, v) in parts.iter_mut().zip([p[0], p[1], a[0], a[1]]) {
                slot.push(v);
            }
        }
        let [p1, p2, a1, a2] = parts;
        Allocation::from_raw(p1, p2, a1, a2)
    }
}

fn quadrature_nodes(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| -PI + 2.0 * PI * j as f64 / m as f64)
}

/// Integral rate terms `(1/4 pi) int_{-pi}^{pi} log2(1 + SNR_i(omega)) d omega`
/// by the composite trapezoid rule on `m` uniform nodes of `[-pi, pi)`.
///
/// Uses the continuous transfer functions and noise densities of `spec`.
pub fn rate_terms_integral(
    spec: &ChannelSpec,
    profile: &SpectralAllocation,
    m: usize,
) -> Result<RateBounds> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    let mut used = [Vec::with_capacity(m), Vec::with_capacity(m)];
    let per_bin = quadrature_nodes(m)
        .enumerate()
        .map(|(j, omega)| {
            let (p, a) = profile.at(omega);
            used[0].push(p[0]);
            used[1].push(p[1]);
            let g = [
                transfer_function(&spec.h11, omega),
                transfer_function(&spec.h12, omega),
                transfer_function(&spec.h21, omega),
                transfer_function(&spec.h22, omega),
            ];
            let z = [noise_psd(&spec.noise1, omega), noise_psd(&spec.noise2, omega)];
            bin_rates(&signal_powers(&g, p, a), z, j)
        })
        .collect::<Result<Vec<_>>>()?;

    for (q, (field, budget)) in [("p1", spec.p1), ("p2", spec.p2)].into_iter().enumerate() {
        let mean = pairwise_sum(&used[q]) / m as f64;
        if mean > budget * (1.0 + 1e-6) {
            return Err(Error::BudgetViolated {
                field,
                used: mean,
                budget,
            });
        }
    }
    Ok(RateBounds::new(reduce_terms(&per_bin, 0.5 / m as f64)))
}

/// The four min-bounds `a = min(T1,T2)`, `b = min(T3,T4)`, `c = min(T5,T6)`,
/// `d = min(T7,T8)`.
pub fn region_constraints(b: &RateBounds) -> RegionConstraints {
    let t = b.terms();
    RegionConstraints::new(t[0].min(t[1]), t[2].min(t[3]), t[4].min(t[5]), t[6].min(t[7]))
}

/// Membership of `r` in the polytope bounded by `b`, with `1e-12` slack.
pub fn is_achievable(b: &RateBounds, r: &RatePoint) -> bool {
    region_constraints(b).contains(r)
}

/// Maximizer of `mu . R` over the polytope bounded by `b`.
pub fn max_weighted_rate(b: &RateBounds, weights: &RateWeights) -> RatePoint {
    region_constraints(b).max_weighted(weights)
}
