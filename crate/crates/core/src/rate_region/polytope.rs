//! The rate polytope for a single allocation and linear scalarization over it.

use serde::{Deserialize, Serialize};

/// Slack used when testing membership of a rate triple.
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

/// Common and private rates in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePoint {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub fn new(r0: f64, r1: f64, r2: f64) -> Self {
        Self { r0, r1, r2 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.r0, self.r1, self.r2]
    }

    fn lex_greater(&self, other: &Self) -> bool {
        self.as_array()
            .partial_cmp(&other.as_array())
            .is_some_and(|o| o.is_gt())
    }
}

/// Nonnegative weights `(mu0, mu1, mu2)` on `(R0, R1, R2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateWeights {
    pub mu0: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl RateWeights {
    pub fn new(mu0: f64, mu1: f64, mu2: f64) -> Self {
        Self { mu0, mu1, mu2 }
    }

    pub fn is_valid(&self) -> bool {
        let w = [self.mu0, self.mu1, self.mu2];
        w.iter().all(|v| v.is_finite() && *v >= 0.0) && w.iter().any(|v| *v > 0.0)
    }

    pub fn dot(&self, r: &RatePoint) -> f64 {
        self.mu0 * r.r0 + self.mu1 * r.r1 + self.mu2 * r.r2
    }
}

/// `R1 <= r1_max`, `R2 <= r2_max`, `R1 + R2 <= sum_max`,
/// `R0 + R1 + R2 <= total_max`, plus nonnegativity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionConstraints {
    pub r1_max: f64,
    pub r2_max: f64,
    pub sum_max: f64,
    pub total_max: f64,
}

impl RegionConstraints {
    pub fn new(r1_max: f64, r2_max: f64, sum_max: f64, total_max: f64) -> Self {
        Self {
            r1_max,
            r2_max,
            sum_max,
            total_max,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.r1_max, self.r2_max, self.sum_max, self.total_max]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn contains(&self, r: &RatePoint) -> bool {
        let s = MEMBERSHIP_SLACK;
        r.r0 >= 0.0
            && r.r1 >= 0.0
            && r.r2 >= 0.0
            && r.r1 <= self.r1_max + s
            && r.r2 <= self.r2_max + s
            && r.r1 + r.r2 <= self.sum_max + s
            && r.r0 + r.r1 + r.r2 <= self.total_max + s
    }

    /// Vertices of the polytope (possibly with repeats).
    ///
    /// The `(R1, R2)` shadow is the pentagon
    /// `0 <= R1 <= a', 0 <= R2 <= b', R1 + R2 <= c'` with `c' = min(c, d)`;
    /// over it `R0` ranges in `[0, d - R1 - R2]`, so every vertex sits on the
    /// floor or the roof above a pentagon corner.
    pub fn vertices(&self) -> Vec<RatePoint> {
        let [a, b, c, d] = self.as_array().map(|v| v.max(0.0));
        let c = c.min(d);
        let a = a.min(c);
        let b = b.min(c);
        let shadow = [
            (0.0, 0.0),
            (a, 0.0),
            (0.0, b),
            (a, b.min(c - a)),
            (a.min(c - b), b),
        ];
        shadow
            .iter()
            .flat_map(|&(r1, r2)| {
                let roof = (d - r1 - r2).max(0.0);
                [RatePoint::new(0.0, r1, r2), RatePoint::new(roof, r1, r2)]
            })
            .collect()
    }

    /// Maximizer of `mu . R` over the polytope; ties go to the
    /// lexicographically largest `(R0, R1, R2)`.
    pub fn max_weighted(&self, weights: &RateWeights) -> RatePoint {
        let scale = self
            .as_array()
            .iter()
            .fold(1.0f64, |m, v| m.max(v.abs()))
            * [weights.mu0, weights.mu1, weights.mu2]
                .iter()
                .fold(1.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-12 * scale;
        let mut best: Option<(f64, RatePoint)> = None;
        for v in self.vertices() {
            let value = weights.dot(&v);
            best = match best {
                None => Some((value, v)),
                Some((bv, bp)) => {
                    if value > bv + tol || (value >= bv - tol && v.lex_greater(&bp)) {
                        Some((value.max(bv), v))
                    } else {
                        Some((bv, bp))
                    }
                }
            };
        }
        best.map(|(_, p)| p).unwrap_or_default()
    }

    pub fn max_weighted_value(&self, weights: &RateWeights) -> f64 {
        self.vertices()
            .iter()
            .map(|v| weights.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Central-difference slopes of [`Self::max_weighted_value`] with respect
    /// to the four bounds. The value is piecewise linear, so away from kinks
    /// this is exact; at a kink it is the average of the one-sided slopes.
    pub fn value_sensitivity(&self, weights: &RateWeights) -> [f64; 4] {
        let base = self.as_array();
        let scale = base.iter().fold(1e-3f64, |m, v| m.max(v.abs()));
        let h = 1e-7 * scale;
        let mut out = [0.0; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut up = base;
            let mut down = base;
            up[i] += h;
            down[i] -= h;
            let vu = Self::from_array(up).max_weighted_value(weights);
            let vd = Self::from_array(down).max_weighted_value(weights);
            *slot = (vu - vd) / (2.0 * h);
        }
        out
    }
}
