//! Strong-interference specialization.
//!
//! The pointwise check asks, at every sub-channel, that each receiver hear
//! the *other* sender at least as well as that sender's own receiver does:
//! `|H11|^2/N1 <= |H12|^2/N2` and `|H22|^2/N2 <= |H21|^2/N1`. That forces
//! `T1 <= T2` and `T4 <= T3` for every allocation, so the compound minima
//! collapse to `R1 <= T1` and `R2 <= T4`.

use serde::{Deserialize, Serialize};

use super::{RateBounds, RegionConstraints};
use crate::error::{Error, Result};
use crate::spectral::{frequency, SubchannelSet};

/// A sub-channel where one of the two dominance inequalities fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceViolation {
    pub bin: usize,
    pub omega: f64,
    /// 1 for the sender-1 inequality, 2 for the sender-2 inequality.
    pub condition: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongInterferenceVerdict {
    pub violations: Vec<InterferenceViolation>,
    /// Both inequalities hold with equality at every bin.
    pub all_equal: bool,
}

impl StrongInterferenceVerdict {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violating frequencies, deduplicated, in bin order.
    pub fn violated_frequencies(&self) -> Vec<f64> {
        let mut out: Vec<(usize, f64)> = self.violations.iter().map(|v| (v.bin, v.omega)).collect();
        out.dedup_by_key(|(bin, _)| *bin);
        out.into_iter().map(|(_, w)| w).collect()
    }
}

pub fn strong_interference_check(sub: &SubchannelSet) -> StrongInterferenceVerdict {
    let n = sub.n();
    let (n1, n2) = (sub.noise(1), sub.noise(2));
    let mut violations = Vec::new();
    let mut all_equal = true;
    for k in 0..n {
        // Cross-multiplied to stay finite when a noise eigenvalue is zero.
        let own1 = sub.gain(1, 1)[k].norm_sqr() * n2[k];
        let cross1 = sub.gain(1, 2)[k].norm_sqr() * n1[k];
        let own2 = sub.gain(2, 2)[k].norm_sqr() * n1[k];
        let cross2 = sub.gain(2, 1)[k].norm_sqr() * n2[k];
        for (condition, own, cross) in [(1u8, own1, cross1), (2u8, own2, cross2)] {
            if own > cross {
                violations.push(InterferenceViolation {
                    bin: k,
                    omega: frequency(k, n),
                    condition,
                });
            }
            if own != cross {
                all_equal = false;
            }
        }
    }
    StrongInterferenceVerdict {
        violations,
        all_equal,
    }
}

/// `R1 <= T1`, `R2 <= T4`, `R1 + R2 <= min(T5,T6)`, `R0+R1+R2 <= min(T7,T8)`.
///
/// Only meaningful when the bounds came from a sub-channel set whose verdict
/// holds; otherwise returns [`Error::ConditionNotVerified`].
pub fn sicc_region_constraints(
    b: &RateBounds,
    verdict: &StrongInterferenceVerdict,
) -> Result<RegionConstraints> {
    if !verdict.holds() {
        return Err(Error::ConditionNotVerified);
    }
    let t = b.terms();
    Ok(RegionConstraints::new(
        t[0],
        t[3],
        t[4].min(t[5]),
        t[6].min(t[7]),
    ))
}
