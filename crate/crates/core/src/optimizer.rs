//! Allocation search: maximizes a weighted rate over the union of polytopes
//! generated by all feasible power / common-fraction profiles.
//!
//! The search is a multistart projected coordinate ascent over the blocks
//! `P1, P2, alpha1, alpha2` (round-robin), each block moved along a
//! (sub)gradient of the scalarized objective with backtracking. Profiles are
//! kept mirror symmetric by construction. The objective is not concave in
//! the fractions, so results are lower bounds on the true supremum.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log2_1p, pairwise_sum};
use crate::rate_region::{
    rate_terms_discrete, region_constraints, signal_powers, Allocation, RateBounds, RatePoint,
    RateWeights,
};
use crate::spectral::SubchannelSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub multistarts: usize,
    pub max_iterations: usize,
    pub rel_tolerance: f64,
    pub step_init: f64,
    pub seed: u64,
    /// Quanta per user (power) and levels (fractions) in exhaustive mode.
    pub coarse_grid: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            multistarts: 16,
            max_iterations: 2000,
            rel_tolerance: 1e-8,
            step_init: 0.1,
            seed: 0,
            coarse_grid: 8,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.multistarts == 0 || self.max_iterations == 0 || self.coarse_grid == 0 {
            return Err(Error::InvalidArgument(
                "optimizer counts must be at least 1".into(),
            ));
        }
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.rel_tolerance) || !positive(self.step_init) {
            return Err(Error::InvalidArgument(
                "optimizer tolerance and initial step must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// One optimized point on the region boundary together with its witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub weights: RateWeights,
    pub point: RatePoint,
    pub objective: f64,
    pub allocation: Allocation,
    pub bounds: RateBounds,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean projection onto mirror-symmetric profiles with
/// `P_k >= 0` and `(1/n) sum_k P_k <= budget`.
pub fn project_power(raw: &[f64], budget: f64, n: usize) -> Vec<f64> {
    assert_eq!(raw.len(), n, "profile length must equal n");
    if n == 0 {
        return Vec::new();
    }
    let sym: Vec<f64> = (0..n).map(|k| 0.5 * (raw[k] + raw[(n - k) % n])).collect();
    let cap = budget.max(0.0) * n as f64;
    let clipped: Vec<f64> = sym.iter().map(|v| v.max(0.0)).collect();
    if pairwise_sum(&clipped) <= cap {
        return clipped;
    }
    if cap == 0.0 {
        return vec![0.0; n];
    }
    project_simplex(&sym, cap)
}

/// Projection onto `{v >= 0, sum v = total}`: find the shift `tau` with
/// `sum max(v - tau, 0) = total`.
fn project_simplex(v: &[f64], total: f64) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut running = 0.0;
    let mut tau = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        running += x;
        let candidate = (running - total) / (i + 1) as f64;
        if x - candidate > 0.0 {
            tau = candidate;
        } else {
            break;
        }
    }
    v.iter().map(|x| (x - tau).max(0.0)).collect()
}

/// Classical single-user water-filling over the sampled spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFilling {
    pub powers: Vec<f64>,
    pub level: f64,
    /// `(1/2n) sum_k log2(1 + P_k snr_k)`.
    pub capacity: f64,
}

/// `P_k = max(0, level - 1/snr_k)` with `(1/n) sum_k P_k = budget`.
pub fn waterfill_single_user(snr: &[f64], budget: f64) -> Result<WaterFilling> {
    let n = snr.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty SNR profile".into()));
    }
    if snr.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::InvalidArgument(
            "SNR profile must be finite and nonnegative".into(),
        ));
    }
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidPower {
            field: "budget",
            value: budget,
        });
    }
    if budget == 0.0 {
        return Ok(WaterFilling {
            powers: vec![0.0; n],
            level: 0.0,
            capacity: 0.0,
        });
    }
    if snr.iter().all(|&s| s == 0.0) {
        return Err(Error::ZeroChannel);
    }

    let fill = |level: f64| -> Vec<f64> {
        snr.iter()
            .map(|&s| if s > 0.0 { (level - 1.0 / s).max(0.0) } else { 0.0 })
            .collect()
    };
    let mean = |level: f64| pairwise_sum(&fill(level)) / n as f64;
    let worst = snr
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|s| 1.0 / s)
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0, worst + budget * n as f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) > budget {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let level = 0.5 * (lo + hi);
    let powers = fill(level);
    let rates: Vec<f64> = powers.iter().zip(snr).map(|(p, s)| log2_1p(p * s)).collect();
    Ok(WaterFilling {
        capacity: pairwise_sum(&rates) / (2.0 * n as f64),
        powers,
        level,
    })
}

const BLOCKS: usize = 4;
/// Relative gap under which the two branches of a compound minimum are
/// treated as tied.
const TIE_BAND: f64 = 1e-7;
/// Neighbourhood radii tried, in order, by the joint step.
const SAMPLING_RADII: [f64; 4] = [1e-3, 1e-5, 1e-7, 1e-9];
const SAMPLED_GRADIENTS: usize = 12;
/// Relative gain per round below which a joint step is also attempted.
const SLUGGISH_GAIN: f64 = 1e-6;
type Blocks = [Vec<f64>; BLOCKS];

struct Problem<'a> {
    sub: &'a SubchannelSet,
    budgets: (f64, f64),
    weights: RateWeights,
}

struct Evaluated {
    value: f64,
    bounds: RateBounds,
}

impl Problem<'_> {
    fn allocation(&self, x: &Blocks) -> Allocation {
        Allocation::from_raw(x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone())
    }

    fn evaluate(&self, x: &Blocks) -> Result<Evaluated> {
        let bounds = rate_terms_discrete(self.sub, &self.allocation(x))?;
        let value = region_constraints(&bounds).max_weighted_value(&self.weights);
        Ok(Evaluated { value, bounds })
    }

    /// Scaled gradients `n * dT_i/dx` of all eight terms for one block.
    fn term_gradients(&self, x: &Blocks, block: usize) -> [Vec<f64>; 8] {
        const EPS: f64 = 1e-12;
        let sub = self.sub;
        let n = sub.n();
        let gains: [&[Complex64]; 4] =
            [sub.gain(1, 1), sub.gain(1, 2), sub.gain(2, 1), sub.gain(2, 2)];
        let mut out: [Vec<f64>; 8] = std::array::from_fn(|_| vec![0.0; n]);
        for k in 0..n {
            let g = gains.map(|v| v[k]);
            let (p1, p2, a1, a2) = (x[0][k], x[1][k], x[2][k], x[3][k]);
            let s = signal_powers(&g, [p1, p2], [a1, a2]);
            let noise = [sub.noise(1)[k], sub.noise(2)[k]];
            let [g11, g12, g21, g22] = g.map(|h| h.norm_sqr());
            let cross1 = 2.0 * (g[0] * g[2].conj()).re;
            let cross2 = 2.0 * (g[1] * g[3].conj()).re;
            // d sqrt(a1 a2 p1 p2) / d(block variable)
            let coherent = match block {
                0 => 0.5 * (a1 * a2 * p2 / p1.max(EPS)).sqrt(),
                1 => 0.5 * (a1 * a2 * p1 / p2.max(EPS)).sqrt(),
                2 => 0.5 * (a2 * p1 * p2 / a1.max(EPS)).sqrt(),
                _ => 0.5 * (a1 * p1 * p2 / a2.max(EPS)).sqrt(),
            };
            let ds: [f64; 8] = match block {
                0 => {
                    let d = 1.0 - a1;
                    [d * g11, d * g12, 0.0, 0.0, d * g11, d * g12,
                     g11 + cross1 * coherent, g12 + cross2 * coherent]
                }
                1 => {
                    let d = 1.0 - a2;
                    [0.0, 0.0, d * g21, d * g22, d * g21, d * g22,
                     g21 + cross1 * coherent, g22 + cross2 * coherent]
                }
                2 => [-p1 * g11, -p1 * g12, 0.0, 0.0, -p1 * g11, -p1 * g12,
                      cross1 * coherent, cross2 * coherent],
                _ => [0.0, 0.0, -p2 * g21, -p2 * g22, -p2 * g21, -p2 * g22,
                      cross1 * coherent, cross2 * coherent],
            };
            for i in 0..8 {
                let denom = noise[i % 2] + s[i];
                if denom > 0.0 {
                    out[i][k] = ds[i] / (2.0 * LN_2 * denom);
                }
            }
        }
        out
    }

    /// Ascent direction for one block: LP sensitivities chained through the
    /// compound minima. Near-tied pairs use the minimum-norm combination of
    /// both branch gradients, which raises both branches together.
    fn direction(&self, x: &Blocks, eval: &Evaluated, block: usize, band_rel: f64) -> Vec<f64> {
        let n = self.sub.n();
        let constraints = region_constraints(&eval.bounds);
        let sens = constraints.value_sensitivity(&self.weights);
        let grads = self.term_gradients(x, block);
        let t = eval.bounds.terms();
        let mut dir = vec![0.0; n];
        for (pair, &weight) in sens.iter().enumerate() {
            if weight == 0.0 {
                continue;
            }
            let (i, j) = (2 * pair, 2 * pair + 1);
            let band = band_rel * t[i].max(t[j]).max(1e-3);
            let lambda = if t[i] < t[j] - band {
                1.0
            } else if t[j] < t[i] - band {
                0.0
            } else {
                min_norm_weight(&grads[i], &grads[j])
            };
            for k in 0..n {
                dir[k] += weight * (lambda * grads[i][k] + (1.0 - lambda) * grads[j][k]);
            }
        }
        dir
    }

    fn budget(&self, block: usize) -> f64 {
        if block.is_multiple_of(2) {
            self.budgets.0
        } else {
            self.budgets.1
        }
    }

    /// Projects an ascent direction onto the tangent cone of the feasible
    /// set at `x`, so that components the projection would undo are dropped.
    fn tangent(&self, x: &Blocks, block: usize, g: &mut [f64]) {
        let v = &x[block];
        let n = v.len();
        if block >= 2 {
            for k in 0..n {
                if (v[k] <= 0.0 && g[k] < 0.0) || (v[k] >= 1.0 && g[k] > 0.0) {
                    g[k] = 0.0;
                }
            }
            return;
        }
        let cap = self.budget(block) * n as f64;
        let saturated = pairwise_sum(v) >= cap * (1.0 - 1e-12);
        let mut free: Vec<bool> = vec![true; n];
        let mut shift = 0.0;
        if saturated {
            loop {
                let count = free.iter().filter(|f| **f).count();
                if count == 0 {
                    break;
                }
                shift = (0..n).filter(|&k| free[k]).map(|k| g[k]).sum::<f64>() / count as f64;
                let mut changed = false;
                for k in 0..n {
                    if free[k] && v[k] <= 0.0 && g[k] < shift {
                        free[k] = false;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
        } else {
            for k in 0..n {
                free[k] = !(v[k] <= 0.0 && g[k] < 0.0);
            }
        }
        for k in 0..n {
            g[k] = if free[k] { g[k] - shift } else { 0.0 };
        }
    }

    fn project(&self, block: usize, raw: &[f64]) -> Vec<f64> {
        let n = raw.len();
        match block {
            0 => project_power(raw, self.budgets.0, n),
            1 => project_power(raw, self.budgets.1, n),
            _ => (0..n)
                .map(|k| (0.5 * (raw[k] + raw[(n - k) % n])).clamp(0.0, 1.0))
                .collect(),
        }
    }
}

/// `lambda` minimizing `|lambda a + (1 - lambda) b|`.
fn min_norm_weight(a: &[f64], b: &[f64]) -> f64 {
    let diff2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    if diff2 <= 0.0 {
        return 0.5;
    }
    let num: f64 = a.iter().zip(b).map(|(x, y)| (y - x) * y).sum();
    (num / diff2).clamp(0.0, 1.0)
}

/// Minimum-norm point of the convex hull of `vectors`, by projected
/// gradient on the weight simplex.
fn min_norm_in_hull(vectors: &[Vec<f64>]) -> Vec<f64> {
    let m = vectors.len();
    let gram: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| dot(&vectors[i], &vectors[j])).collect())
        .collect();
    let lipschitz = gram
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let dim = vectors[0].len();
    if lipschitz == 0.0 {
        return vec![0.0; dim];
    }
    let mut w = vec![1.0 / m as f64; m];
    for _ in 0..2000 {
        let grad: Vec<f64> = (0..m).map(|i| dot(&gram[i], &w)).collect();
        let next: Vec<f64> = w.iter().zip(&grad).map(|(a, g)| a - g / lipschitz).collect();
        let next = project_simplex(&next, 1.0);
        let delta = next.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        w = next;
        if delta < 1e-14 {
            break;
        }
    }
    let mut out = vec![0.0; dim];
    for (wi, v) in w.iter().zip(vectors) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += wi * x;
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Joint move over all blocks once coordinate sweeps stall, typically on a
/// ridge where two compound branches tie. Gradients sampled around `x` are
/// combined into their minimum-norm element, which is an ascent direction
/// for every nearby smooth piece. Returns whether a step was taken.
fn joint_step(
    problem: &Problem,
    x: &mut Blocks,
    eval: &mut Evaluated,
    active: &[bool; BLOCKS],
    rng: &mut ChaCha8Rng,
) -> bool {
    let n = problem.sub.n();
    let gradient_at = |point: &Blocks, e: &Evaluated| -> Vec<f64> {
        let mut full = Vec::with_capacity(BLOCKS * n);
        for (block, &on) in active.iter().enumerate() {
            let mut g = if on {
                problem.direction(point, e, block, 0.0)
            } else {
                vec![0.0; n]
            };
            problem.tangent(point, block, &mut g);
            full.extend(g);
        }
        full
    };

    for radius in SAMPLING_RADII {
        let mut samples = vec![gradient_at(x, eval)];
        for _ in 0..SAMPLED_GRADIENTS {
            let mut near = x.clone();
            for block in (0..BLOCKS).filter(|&b| active[b]) {
                let noise = random_mirrored(rng, n);
                let raw: Vec<f64> = x[block]
                    .iter()
                    .zip(&noise)
                    .map(|(v, u)| v + radius * (2.0 * u - 1.0))
                    .collect();
                near[block] = problem.project(block, &raw);
            }
            if let Ok(e) = problem.evaluate(&near) {
                samples.push(gradient_at(&near, &e));
            }
        }
        let dir = min_norm_in_hull(&samples);
        let scale = dir.iter().map(|d| d.abs()).fold(0.0, f64::max);
        if scale <= 1e-12 {
            continue;
        }
        let mut step = 10.0 / scale;
        while step * scale > 1e-3 * radius {
            let mut trial = x.clone();
            for block in (0..BLOCKS).filter(|&b| active[b]) {
                let raw: Vec<f64> = x[block]
                    .iter()
                    .zip(&dir[block * n..(block + 1) * n])
                    .map(|(v, d)| v + step * d)
                    .collect();
                trial[block] = problem.project(block, &raw);
            }
            if let Ok(e) = problem.evaluate(&trial) {
                if e.value > eval.value {
                    *x = trial;
                    *eval = e;
                    return true;
                }
            }
            step *= 0.5;
        }
    }
    false
}

struct StartResult {
    x: Blocks,
    eval: Evaluated,
    iterations: usize,
    converged: bool,
}

fn ascend(
    problem: &Problem,
    mut x: Blocks,
    cfg: &OptimizerConfig,
    rng: &mut ChaCha8Rng,
) -> Result<StartResult> {
    let mut eval = problem.evaluate(&x)?;
    let mut steps = [cfg.step_init; BLOCKS];
    let mut iterations = 0;
    let mut converged = false;
    let move_tolerance = cfg.rel_tolerance * (1.0 + problem.budgets.0.max(problem.budgets.1));
    let active = [
        problem.budgets.0 > 0.0,
        problem.budgets.1 > 0.0,
        problem.budgets.0 > 0.0,
        problem.budgets.1 > 0.0,
    ];

    while iterations < cfg.max_iterations {
        iterations += 1;
        let start_value = eval.value;
        let mut moved: f64 = 0.0;
        for block in 0..BLOCKS {
            if !active[block] {
                continue;
            }
            let dir = problem.direction(&x, &eval, block, TIE_BAND);
            if dir.iter().all(|d| *d == 0.0) {
                continue;
            }
            let mut step = steps[block];
            let mut accepted = false;
            for _ in 0..60 {
                let raw: Vec<f64> = x[block].iter().zip(&dir).map(|(v, d)| v + step * d).collect();
                let candidate = problem.project(block, &raw);
                if candidate == x[block] {
                    break;
                }
                let mut trial = x.clone();
                trial[block] = candidate;
                // Steps into a zero-noise bin are rejected like any other
                // non-improving step.
                if let Ok(e) = problem.evaluate(&trial) {
                    if e.value > eval.value {
                        moved = trial[block]
                            .iter()
                            .zip(&x[block])
                            .fold(moved, |m, (a, b)| m.max((a - b).abs()));
                        x = trial;
                        eval = e;
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            steps[block] = if accepted {
                (step * 2.0).min(1e6)
            } else {
                cfg.step_init
            };
        }
        // Stop once a full round neither gains value nor moves the profiles
        // noticeably; the value alone is flat to second order near an optimum.
        // Slow rounds usually mean zig-zagging along a kink, which only a
        // joint move can follow.
        let scale = start_value.abs().max(1e-12);
        let gain = eval.value - start_value;
        let stalled = gain <= cfg.rel_tolerance * scale && moved <= move_tolerance;
        if stalled || gain <= SLUGGISH_GAIN * scale {
            let before = eval.value;
            if joint_step(problem, &mut x, &mut eval, &active, rng)
                && eval.value - before > cfg.rel_tolerance * scale
            {
                continue;
            }
            if stalled {
                converged = true;
                break;
            }
        }
    }
    Ok(StartResult {
        x,
        eval,
        iterations,
        converged,
    })
}

fn check_inputs(sub: &SubchannelSet, budgets: (f64, f64), weights: &RateWeights) -> Result<()> {
    if !weights.is_valid() {
        return Err(Error::InvalidArgument(format!(
            "weights must be nonnegative and not all zero: {weights:?}"
        )));
    }
    for (field, value) in [("p1", budgets.0), ("p2", budgets.1)] {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidPower { field, value });
        }
    }
    if sub.n() == 0 {
        return Err(Error::InvalidArgument("empty sub-channel set".into()));
    }
    Ok(())
}

fn sub_seed(seed: u64, start: usize) -> u64 {
    seed ^ (start as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn random_mirrored(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    for k in 0..=n / 2 {
        let x = rng.random_range(0.0..=1.0);
        v[k] = x;
        v[(n - k) % n] = x;
    }
    v
}

fn into_sample(problem: &Problem, x: Blocks, eval: Evaluated, iterations: usize, converged: bool) -> BoundarySample {
    let point = region_constraints(&eval.bounds).max_weighted(&problem.weights);
    BoundarySample {
        weights: problem.weights,
        objective: eval.value,
        point,
        allocation: problem.allocation(&x),
        bounds: eval.bounds,
        iterations,
        converged,
    }
}

/// Multistart projected coordinate ascent for `max mu . R`.
///
/// Every start begins from flat powers. Start 0 uses no common fraction,
/// start 1 puts everything into the common message, the rest draw random
/// fractions.
///
/// Deterministic for a fixed `cfg.seed`; starts run in parallel and the best
/// one wins, ties going to the lowest start index.
pub fn optimize_weighted(
    sub: &SubchannelSet,
    budgets: (f64, f64),
    weights: &RateWeights,
    cfg: &OptimizerConfig,
) -> Result<BoundarySample> {
    cfg.validate()?;
    check_inputs(sub, budgets, weights)?;
    let n = sub.n();
    let problem = Problem {
        sub,
        budgets,
        weights: *weights,
    };
    let results: Vec<Result<StartResult>> = (0..cfg.multistarts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, start));
            // The first two starts are all-private and all-common; a fraction
            // stuck high on an unpowered bin has no gradient to leave by.
            let (a1, a2) = match start {
                0 => (vec![0.0; n], vec![0.0; n]),
                1 => (vec![1.0; n], vec![1.0; n]),
                _ => (random_mirrored(&mut rng, n), random_mirrored(&mut rng, n)),
            };
            let x = [vec![budgets.0; n], vec![budgets.1; n], a1, a2];
            ascend(&problem, x, cfg, &mut rng)
        })
        .collect();

    let mut best: Option<StartResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.eval.value > b.eval.value) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    Ok(into_sample(&problem, best.x, best.eval, best.iterations, best.converged))
}

/// All ways to place `quanta` indistinguishable units into `bins` slots.
fn compositions(quanta: usize, bins: usize) -> Vec<Vec<usize>> {
    if bins == 1 {
        return vec![vec![quanta]];
    }
    let mut out = Vec::new();
    for first in 0..=quanta {
        for mut rest in compositions(quanta - first, bins - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Exhaustive search over a coarse grid: each sender's budget split into
/// `coarse_grid` quanta across the half-spectrum bins, and spectrally flat
/// common fractions on `coarse_grid + 1` levels. Meant for tiny `n` as an
/// independent check of [`optimize_weighted`].
pub fn optimize_exhaustive(
    sub: &SubchannelSet,
    budgets: (f64, f64),
    weights: &RateWeights,
    cfg: &OptimizerConfig,
) -> Result<BoundarySample> {
    cfg.validate()?;
    check_inputs(sub, budgets, weights)?;
    let n = sub.n();
    let half = n / 2 + 1;
    let multiplicity: Vec<f64> = (0..half)
        .map(|k| if k == 0 || 2 * k == n { 1.0 } else { 2.0 })
        .collect();
    let g = cfg.coarse_grid;
    let profiles = |budget: f64| -> Vec<Vec<f64>> {
        compositions(g, half)
            .into_iter()
            .map(|q| {
                let mut full = vec![0.0; n];
                for k in 0..half {
                    let p = q[k] as f64 / g as f64 * n as f64 * budget / multiplicity[k];
                    full[k] = p;
                    full[(n - k) % n] = p;
                }
                full
            })
            .collect()
    };
    let (powers1, powers2) = (profiles(budgets.0), profiles(budgets.1));
    let levels: Vec<f64> = (0..=g).map(|i| i as f64 / g as f64).collect();
    let problem = Problem {
        sub,
        budgets,
        weights: *weights,
    };

    let mut best: Option<(Blocks, Evaluated)> = None;
    let mut visited = 0;
    for p1 in &powers1 {
        for p2 in &powers2 {
            for &a1 in &levels {
                for &a2 in &levels {
                    let x = [p1.clone(), p2.clone(), vec![a1; n], vec![a2; n]];
                    visited += 1;
                    let e = match problem.evaluate(&x) {
                        Ok(e) => e,
                        Err(Error::InfiniteRate { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    if best.as_ref().is_none_or(|(_, b)| e.value > b.value) {
                        best = Some((x, e));
                    }
                }
            }
        }
    }
    let (x, eval) = best.ok_or(Error::InfiniteRate { term: 0, bin: 0 })?;
    Ok(into_sample(&problem, x, eval, visited, true))
}

/// Runs [`optimize_weighted`] for each weight vector, in order.
///
/// Afterwards every sample is offered every other sample's allocation; if
/// one scores higher under its own weights it is adopted. This keeps the
/// traced points in convex position: no sample ends up strictly dominated by
/// a mixture of two others.
pub fn trace_boundary(
    sub: &SubchannelSet,
    budgets: (f64, f64),
    weight_grid: &[RateWeights],
    cfg: &OptimizerConfig,
) -> Result<Vec<BoundarySample>> {
    if weight_grid.is_empty() {
        return Err(Error::InvalidArgument("weight grid is empty".into()));
    }
    let mut samples = weight_grid
        .iter()
        .map(|w| optimize_weighted(sub, budgets, w, cfg))
        .collect::<Result<Vec<_>>>()?;

    let witnesses: Vec<(Allocation, RateBounds)> = samples
        .iter()
        .map(|s| (s.allocation.clone(), s.bounds.clone()))
        .collect();
    for sample in samples.iter_mut() {
        for (alloc, bounds) in &witnesses {
            let constraints = region_constraints(bounds);
            let value = constraints.max_weighted_value(&sample.weights);
            if value > sample.objective {
                sample.objective = value;
                sample.point = constraints.max_weighted(&sample.weights);
                sample.allocation = alloc.clone();
                sample.bounds = bounds.clone();
            }
        }
    }
    Ok(samples)
}
