use cmacc_isi::{
    decompose, gaussian_mi_terms, optimize_exhaustive, rate_terms_discrete, rate_terms_integral,
    region_constraints, sicc_region_constraints, strong_interference_check, trace_boundary,
    BoundarySample, ChannelSpec, OptimizerConfig, RateBounds, Receiver, RegionConstraints,
    SpectralAllocation,
};
use serde_json::{json, Value};

use crate::config::{load_allocation, load_spec, parse_weights};
use crate::format::{csv, real};
use crate::{CliError, Cli, Command, OptimizerArgs};

/// Largest block length accepted by the dense oracle.
pub const ORACLE_MAX_N: usize = 128;

/// Runs the selected command and returns its rendered output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let spec = load_spec(cli.spec.as_deref())?;
    match &cli.command {
        Command::Eval { alloc, oracle } => cmd_eval(&spec, cli.n, alloc, *oracle),
        Command::Region { weights, optimizer } => {
            cmd_region(&spec, cli.n, cli.seed, weights, optimizer)
        }
        Command::CheckSi { alloc } => cmd_check_si(&spec, cli.n, alloc),
        Command::Converge { ns } => cmd_converge(&spec, ns, cli.quadrature_points),
    }
}

fn bounds_json(c: &RegionConstraints) -> Value {
    json!({
        "r1_max": c.r1_max,
        "r2_max": c.r2_max,
        "sum_max": c.sum_max,
        "total_max": c.total_max,
    })
}

fn binding_json(b: &RateBounds) -> Value {
    b.binding()
        .iter()
        .map(|r| match r {
            Receiver::First => 1,
            Receiver::Second => 2,
        })
        .collect()
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

pub fn cmd_eval(
    spec: &ChannelSpec,
    n: Option<usize>,
    alloc_source: &str,
    oracle: bool,
) -> Result<String, CliError> {
    let alloc = load_allocation(alloc_source, n, spec)?;
    let n = alloc.n();
    let sub = decompose(spec, n)?;
    let bounds = rate_terms_discrete(&sub, &alloc)?;
    let mut report = json!({
        "n": n,
        "terms": bounds.terms(),
        "bounds": bounds_json(&region_constraints(&bounds)),
        "binding": binding_json(&bounds),
    });
    if oracle {
        if n > ORACLE_MAX_N {
            return Err(CliError::validation(format!(
                "the dense oracle supports n <= {ORACLE_MAX_N}, got {n}"
            )));
        }
        let dense = gaussian_mi_terms(spec, n, &alloc)?;
        let deltas: Vec<f64> = bounds
            .terms()
            .iter()
            .zip(dense.terms())
            .map(|(a, b)| (a - b).abs())
            .collect();
        report["oracle"] = json!({
            "terms": dense.terms(),
            "abs_delta": deltas,
            "max_abs_delta": deltas.iter().cloned().fold(0.0, f64::max),
        });
    }
    Ok(pretty(&report))
}

pub fn optimizer_config(args: &OptimizerArgs, seed: u64) -> Result<OptimizerConfig, CliError> {
    let cfg = OptimizerConfig {
        multistarts: args.multistarts,
        max_iterations: args.max_iterations,
        rel_tolerance: args.rel_tolerance,
        step_init: args.step_init,
        seed,
        coarse_grid: args.coarse_grid,
    };
    cfg.validate()?;
    Ok(cfg)
}

pub const REGION_HEADER: [&str; 7] = ["mu0", "mu1", "mu2", "r0", "r1", "r2", "converged"];

pub fn cmd_region(
    spec: &ChannelSpec,
    n: Option<usize>,
    seed: u64,
    weights: &str,
    args: &OptimizerArgs,
) -> Result<String, CliError> {
    let weights = parse_weights(weights)?;
    let cfg = optimizer_config(args, seed)?;
    let n = n.unwrap_or(crate::config::DEFAULT_BLOCK_LENGTH);
    let sub = decompose(spec, n)?;
    let samples: Vec<BoundarySample> = if args.exhaustive {
        weights
            .iter()
            .map(|w| optimize_exhaustive(&sub, spec.budgets(), w, &cfg))
            .collect::<Result<_, _>>()?
    } else {
        trace_boundary(&sub, spec.budgets(), &weights, &cfg)?
    };
    let rows: Vec<Vec<String>> = samples
        .iter()
        .map(|s| {
            let w = s.weights;
            let p = s.point;
            vec![
                real(w.mu0),
                real(w.mu1),
                real(w.mu2),
                real(p.r0),
                real(p.r1),
                real(p.r2),
                s.converged.to_string(),
            ]
        })
        .collect();
    Ok(csv(&REGION_HEADER, &rows))
}

pub fn cmd_check_si(
    spec: &ChannelSpec,
    n: Option<usize>,
    alloc_source: &str,
) -> Result<String, CliError> {
    let alloc = load_allocation(alloc_source, n, spec)?;
    let sub = decompose(spec, alloc.n())?;
    let verdict = strong_interference_check(&sub);
    let mut report = json!({
        "n": alloc.n(),
        "verdict": if verdict.holds() { "holds" } else { "violated" },
        "all_equal": verdict.all_equal,
        "violated_frequencies": verdict.violated_frequencies(),
    });
    if verdict.holds() {
        let bounds = rate_terms_discrete(&sub, &alloc)?;
        report["sicc_bounds"] = bounds_json(&sicc_region_constraints(&bounds, &verdict)?);
        if verdict.all_equal {
            report["note"] = json!("both conditions hold with equality at every frequency");
        }
    }
    Ok(pretty(&report))
}

pub const CONVERGE_HEADER: [&str; 5] = ["n", "term_index", "discrete", "integral", "abs_error"];

pub fn cmd_converge(
    spec: &ChannelSpec,
    ns: &[usize],
    quadrature_points: usize,
) -> Result<String, CliError> {
    if ns.is_empty() {
        return Err(CliError::validation("no block lengths given"));
    }
    // Reject bad block lengths before the (costlier) integral.
    let subs = ns
        .iter()
        .map(|&n| decompose(spec, n))
        .collect::<Result<Vec<_>, _>>()?;
    let profile = SpectralAllocation::uniform(spec.p1, spec.p2, 0.0, 0.0);
    let integral = rate_terms_integral(spec, &profile, quadrature_points)?;
    let mut rows = Vec::with_capacity(ns.len() * 8);
    for (&n, sub) in ns.iter().zip(&subs) {
        let discrete = rate_terms_discrete(sub, &profile.sample(n))?;
        for i in 1..=8 {
            let (d, q) = (discrete.term(i), integral.term(i));
            rows.push(vec![
                n.to_string(),
                i.to_string(),
                real(d),
                real(q),
                real((d - q).abs()),
            ]);
        }
    }
    Ok(csv(&CONVERGE_HEADER, &rows))
}
