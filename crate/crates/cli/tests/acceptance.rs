//! Acceptance checks. Each test prints one `PASS`/`FAIL` line.

mod common;

use std::io::Write;
use std::path::Path;
use std::process::Command;

use cmacc_cli::config::SpecFile;
use cmacc_isi::{
    decompose, gaussian_mi_terms, optimize_weighted, rate_terms_discrete, rate_terms_integral,
    region_constraints, sicc_region_constraints, strong_interference_check,
    waterfill_single_user, Allocation, ChannelSpec, OptimizerConfig, RateBounds, RatePoint,
    RateWeights, RegionConstraints, SpectralAllocation,
};
use common::{mirrored, random_allocation, random_noise, random_spec, random_taps, spec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    // Written straight to stderr so the line survives output capture.
    let _ = writeln!(std::io::stderr(), "[acceptance {id}] {verdict} {name}: {detail}");
}

fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Tolerance for "within 1e-9 relative" with an absolute floor of 1e-9 for
/// terms that are themselves near zero.
fn within_relative(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

struct OracleTrial {
    fast: RateBounds,
    dense: RateBounds,
}

fn oracle_trials() -> Vec<OracleTrial> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut out = Vec::new();
    for trial in 0..102 {
        let spec = random_spec(&mut rng);
        let n = [8, 16, 32][trial % 3];
        let alloc = random_allocation(&mut rng, n, spec.budgets());
        let sub = decompose(&spec, n).unwrap();
        out.push(OracleTrial {
            fast: rate_terms_discrete(&sub, &alloc).unwrap(),
            dense: gaussian_mi_terms(&spec, n, &alloc).unwrap(),
        });
    }
    out
}

#[test]
fn criterion_1_oracle_equivalence() {
    let start = std::time::Instant::now();
    let trials = oracle_trials();
    let elapsed = start.elapsed().as_secs_f64();
    let mut worst_rel: f64 = 0.0;
    let mut failures = 0;
    for t in &trials {
        for i in 1..=8 {
            let (a, b) = (t.fast.term(i), t.dense.term(i));
            worst_rel = worst_rel.max(relative_error(a, b));
            if !within_relative(a, b, 1e-9) {
                failures += 1;
            }
        }
    }
    let pass = failures == 0 && trials.len() >= 100 && elapsed < 60.0;
    report(
        1,
        "oracle equivalence",
        pass,
        &format!(
            "{} specs, n in {{8,16,32}}, worst relative error {worst_rel:.2e}, {failures} mismatches, {elapsed:.1}s",
            trials.len()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_2_convergence() {
    let spec = spec(
        [vec![1.0, 1.0], vec![1.0], vec![1.0], vec![1.0]],
        [vec![1.0], vec![1.0]],
        1.0,
        1.0,
    );
    let profile = SpectralAllocation::uniform(1.0, 1.0, 0.0, 0.0);
    let integral = rate_terms_integral(&spec, &profile, 1 << 14).unwrap();
    let error = |n: usize| -> [f64; 8] {
        let sub = decompose(&spec, n).unwrap();
        let t = rate_terms_discrete(&sub, &profile.sample(n)).unwrap();
        std::array::from_fn(|i| (t.term(i + 1) - integral.term(i + 1)).abs())
    };

    let final_errors = error(2048);
    let final_ok = final_errors.iter().all(|e| *e <= 1e-3);
    let mut ratio_failures = Vec::new();
    for n in [256, 512, 1024] {
        let (e_n, e_2n) = (error(n), error(2 * n));
        for i in 0..8 {
            let ratio = e_2n[i] / e_n[i];
            if !(0.2..=0.8).contains(&ratio) {
                ratio_failures.push(format!("n={n} T{}: {:.1e}/{:.1e}", i + 1, e_2n[i], e_n[i]));
            }
        }
    }
    let max_final = final_errors.iter().cloned().fold(0.0, f64::max);
    let pass = final_ok && ratio_failures.is_empty();
    report(
        2,
        "convergence",
        pass,
        &format!(
            "max |T(2048) - I| = {max_final:.2e} (<= 1e-3: {final_ok}); {} of 24 error ratios outside [0.2, 0.8]{}",
            ratio_failures.len(),
            ratio_failures
                .first()
                .map(|f| format!(", e.g. {f}"))
                .unwrap_or_default()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_waterfilling_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 64;
    let cfg = OptimizerConfig::default();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let h = random_taps(&mut rng, 4);
        let z = random_noise(&mut rng, 3);
        let p1 = rng.random_range(0.2..3.0);
        let spec = spec(
            [h.clone(), h, random_taps(&mut rng, 4), random_taps(&mut rng, 4)],
            [z.clone(), z],
            p1,
            0.0,
        );
        let sub = decompose(&spec, n).unwrap();
        let sample =
            optimize_weighted(&sub, (p1, 0.0), &RateWeights::new(0.0, 1.0, 0.0), &cfg).unwrap();
        let snr: Vec<f64> = (0..n)
            .map(|k| sub.gain(1, 1)[k].norm_sqr() / sub.noise(1)[k])
            .collect();
        let wf = waterfill_single_user(&snr, p1).unwrap();
        worst = worst.max((sample.objective - wf.capacity).abs());
    }
    let pass = worst <= 1e-4;
    report(
        3,
        "single-user water-filling reduction",
        pass,
        &format!("10 specs at n = 64, worst |objective - capacity| = {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_4_identical_receivers() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (h1, h2) = (random_taps(&mut rng, 4), random_taps(&mut rng, 4));
        let z = random_noise(&mut rng, 3);
        let spec = spec([h1.clone(), h1, h2.clone(), h2], [z.clone(), z], 1.5, 0.7);
        let n = 16;
        let sub = decompose(&spec, n).unwrap();
        let b = rate_terms_discrete(&sub, &random_allocation(&mut rng, n, spec.budgets())).unwrap();
        for pair in 0..4 {
            worst = worst.max((b.term(2 * pair + 1) - b.term(2 * pair + 2)).abs());
        }
    }
    let pass = worst <= 1e-12;
    report(
        4,
        "identical receivers",
        pass,
        &format!("100 allocations, worst pair gap {worst:.2e}"),
    );
    assert!(pass);
}

/// Specs that satisfy the pointwise strong-interference check: each cross
/// link is a scaled, slightly perturbed copy of the matching direct link.
fn strong_interference_specs(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<ChannelSpec> {
    let mut out = Vec::new();
    while out.len() < count {
        let h11 = random_taps(rng, 4);
        let h22 = random_taps(rng, 4);
        let z1 = random_noise(rng, 3);
        let ratio = rng.random_range(0.5..2.0);
        let z2: Vec<f64> = z1.iter().map(|r| r * ratio).collect();
        let s1 = (ratio * rng.random_range(1.2..3.0)).sqrt();
        let s2 = (rng.random_range(1.2..3.0) / ratio).sqrt();
        let perturb = |h: &[f64], s: f64, rng: &mut ChaCha8Rng| -> Vec<f64> {
            h.iter().map(|t| s * t + rng.random_range(-0.02..0.02)).collect()
        };
        let h12 = perturb(&h11, s1, rng);
        let h21 = perturb(&h22, s2, rng);
        let spec = spec([h11, h12, h21, h22], [z1, z2], 1.0, 1.0);
        if strong_interference_check(&decompose(&spec, n).unwrap()).holds() {
            out.push(spec);
        }
    }
    out
}

#[test]
fn criterion_5_strong_interference() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 16;
    let specs = strong_interference_specs(&mut rng, n, 10);
    let mut order_violations = 0;
    let mut region_mismatches = 0;
    for spec in &specs {
        let sub = decompose(spec, n).unwrap();
        let verdict = strong_interference_check(&sub);
        for _ in 0..1000 {
            let b = rate_terms_discrete(&sub, &random_allocation(&mut rng, n, spec.budgets()))
                .unwrap();
            if b.term(1) > b.term(2) + 1e-12 || b.term(4) > b.term(3) + 1e-12 {
                order_violations += 1;
            }
            if sicc_region_constraints(&b, &verdict).unwrap() != region_constraints(&b) {
                region_mismatches += 1;
            }
        }
    }
    let pass = order_violations == 0 && region_mismatches == 0;
    report(
        5,
        "strong-interference implication",
        pass,
        &format!(
            "{} specs x 1000 allocations: {order_violations} ordering violations, {region_mismatches} region mismatches",
            specs.len()
        ),
    );
    assert!(pass);
}

/// Optimum over the (R1, R2) grid with step `h`; `R0` is set to its largest
/// feasible value since its weight is nonnegative.
fn brute_force(c: &RegionConstraints, w: &RateWeights, h: f64) -> f64 {
    let mut best = 0.0f64;
    let steps1 = (c.r1_max / h).floor() as usize;
    let steps2 = (c.r2_max / h).floor() as usize;
    for i in 0..=steps1 {
        let r1 = i as f64 * h;
        for j in 0..=steps2 {
            let r2 = j as f64 * h;
            if r1 + r2 > c.sum_max || r1 + r2 > c.total_max {
                break;
            }
            let r0 = c.total_max - r1 - r2;
            best = best.max(w.mu0 * r0 + w.mu1 * r1 + w.mu2 * r2);
        }
    }
    best
}

/// Vertices from every triple of the seven bounding planes.
fn plane_vertices(c: &RegionConstraints) -> Vec<[f64; 3]> {
    let planes: [([f64; 3], f64); 7] = [
        ([1.0, 0.0, 0.0], 0.0),
        ([0.0, 1.0, 0.0], 0.0),
        ([0.0, 0.0, 1.0], 0.0),
        ([0.0, 1.0, 0.0], c.r1_max),
        ([0.0, 0.0, 1.0], c.r2_max),
        ([0.0, 1.0, 1.0], c.sum_max),
        ([1.0, 1.0, 1.0], c.total_max),
    ];
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut out = Vec::new();
    for i in 0..7 {
        for j in i + 1..7 {
            for k in j + 1..7 {
                let a = [planes[i].0, planes[j].0, planes[k].0];
                let rhs = [planes[i].1, planes[j].1, planes[k].1];
                let d = det(a);
                if d.abs() < 1e-12 {
                    continue;
                }
                let x: [f64; 3] = std::array::from_fn(|col| {
                    let mut m = a;
                    for row in 0..3 {
                        m[row][col] = rhs[row];
                    }
                    det(m) / d
                });
                let feasible = x.iter().all(|v| *v >= -1e-12)
                    && x[1] <= c.r1_max + 1e-12
                    && x[2] <= c.r2_max + 1e-12
                    && x[1] + x[2] <= c.sum_max + 1e-12
                    && x[0] + x[1] + x[2] <= c.total_max + 1e-12;
                if feasible {
                    out.push(x);
                }
            }
        }
    }
    out
}

#[test]
fn criterion_6_polytope_lp() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_grid, mut worst_vertex): (f64, f64) = (0.0, 0.0);
    let mut infeasible = 0;
    for _ in 0..1000 {
        let c = RegionConstraints::new(
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
        );
        let w = RateWeights::new(
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..1.0),
        );
        let point: RatePoint = c.max_weighted(&w);
        if !c.contains(&point) {
            infeasible += 1;
        }
        let value = w.dot(&point);
        worst_grid = worst_grid.max((value - brute_force(&c, &w, 1e-3)).abs());
        let exact = plane_vertices(&c)
            .iter()
            .map(|v| w.mu0 * v[0] + w.mu1 * v[1] + w.mu2 * v[2])
            .fold(f64::MIN, f64::max);
        worst_vertex = worst_vertex.max((value - exact).abs());
    }
    let pass = worst_grid <= 1e-2 && worst_vertex <= 1e-12 && infeasible == 0;
    report(
        6,
        "polytope LP",
        pass,
        &format!(
            "1000 tuples: worst grid gap {worst_grid:.2e}, worst vertex gap {worst_vertex:.2e}, {infeasible} infeasible optima"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_private_collapse_and_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonzero = 0;
    for _ in 0..50 {
        let spec = random_spec(&mut rng);
        let n = 16;
        let p1 = mirrored(&mut rng, n, 0.0, spec.p1);
        let p2 = mirrored(&mut rng, n, 0.0, spec.p2);
        let alloc = Allocation::new(p1, p2, vec![1.0; n], vec![1.0; n]).unwrap();
        let fast = rate_terms_discrete(&decompose(&spec, n).unwrap(), &alloc).unwrap();
        let dense = gaussian_mi_terms(&spec, n, &alloc).unwrap();
        for b in [&fast, &dense] {
            nonzero += (1..=6).filter(|&i| b.term(i) != 0.0).count();
        }
    }

    let mut worst_slack = f64::INFINITY;
    for t in oracle_trials() {
        for b in [&t.fast, &t.dense] {
            for (hi, mid, lo) in [(7, 5, 1), (8, 6, 2)] {
                worst_slack = worst_slack
                    .min(b.term(hi) - b.term(mid))
                    .min(b.term(mid) - b.term(lo));
            }
        }
    }
    let pass = nonzero == 0 && worst_slack >= -1e-12;
    report(
        7,
        "private-rate collapse and data-processing chain",
        pass,
        &format!("{nonzero} nonzero private terms at alpha = 1; smallest chain slack {worst_slack:.2e}"),
    );
    assert!(pass);
}

fn write_spec(path: &Path, spec: &ChannelSpec) {
    std::fs::write(path, serde_json::to_string(&SpecFile::from(spec)).unwrap()).unwrap();
}

fn run_region(spec: &Path, out: &Path, weights: &str) {
    let status = Command::new(env!("CARGO_BIN_EXE_cmacc"))
        .args(["--seed", "11", "--n", "16", "--spec"])
        .arg(spec)
        .arg("--out")
        .arg(out)
        .args(["region", "--multistarts", "8", "--weights", weights])
        .status()
        .unwrap();
    assert!(status.success());
}

fn objectives(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|line| {
            let v: Vec<f64> = line.split(',').take(6).map(|x| x.parse().unwrap()).collect();
            v[0] * v[3] + v[1] * v[4] + v[2] * v[5]
        })
        .collect()
}

#[test]
fn criterion_8_determinism_and_monotonicity() {
    let dir = tempfile::tempdir().unwrap();
    let base = spec(
        [vec![1.0, 0.6, -0.3], vec![0.8, -0.4], vec![0.5, 0.5], vec![1.2, 0.1, 0.2]],
        [vec![1.0, 0.3], vec![0.8, -0.2]],
        1.0,
        1.5,
    );
    let doubled = ChannelSpec {
        p1: 2.0 * base.p1,
        p2: 2.0 * base.p2,
        ..base.clone()
    };
    let (base_path, doubled_path) = (dir.path().join("base.json"), dir.path().join("doubled.json"));
    write_spec(&base_path, &base);
    write_spec(&doubled_path, &doubled);

    let weights = "1,0,0;0,1,0;0,0,1;1,1,1;0,1,1;0.3,1,0.6;0,2,1;1,0.5,0.2";
    let outputs: Vec<String> = [&base_path, &base_path, &doubled_path]
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let out = dir.path().join(format!("region{i}.csv"));
            run_region(spec, &out, weights);
            std::fs::read_to_string(out).unwrap()
        })
        .collect();
    let identical = outputs[0] == outputs[1];
    let (before, after) = (objectives(&outputs[0]), objectives(&outputs[2]));
    let decreases = before.iter().zip(&after).filter(|(b, a)| a < b).count();
    let pass = identical && decreases == 0 && before.len() == 8;
    report(
        8,
        "determinism and budget monotonicity",
        pass,
        &format!(
            "repeat run byte-identical: {identical}; {decreases} of {} objectives dropped after doubling budgets",
            before.len()
        ),
    );
    assert!(pass);
}
