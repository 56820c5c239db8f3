//! JSON ingestion for channel specs, allocations and weight grids.

use std::fs;
use std::path::Path;

use cmacc_isi::{Allocation, ChannelSpec, RateWeights};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_BLOCK_LENGTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseFile {
    pub autocorr: Vec<f64>,
}

/// On-disk channel spec. Values are checked only after parsing so that
/// model errors can be told apart from malformed files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub h11: Vec<f64>,
    pub h12: Vec<f64>,
    pub h21: Vec<f64>,
    pub h22: Vec<f64>,
    pub noise1: NoiseFile,
    pub noise2: NoiseFile,
    pub p1: f64,
    pub p2: f64,
}

impl SpecFile {
    pub fn into_spec(self) -> Result<ChannelSpec, CliError> {
        Ok(ChannelSpec::from_raw(
            [self.h11, self.h12, self.h21, self.h22],
            [self.noise1.autocorr, self.noise2.autocorr],
            self.p1,
            self.p2,
        )?)
    }
}

impl From<&ChannelSpec> for SpecFile {
    fn from(s: &ChannelSpec) -> Self {
        Self {
            h11: s.h11.taps().to_vec(),
            h12: s.h12.taps().to_vec(),
            h21: s.h21.taps().to_vec(),
            h22: s.h22.taps().to_vec(),
            noise1: NoiseFile {
                autocorr: s.noise1.autocorr().to_vec(),
            },
            noise2: NoiseFile {
                autocorr: s.noise2.autocorr().to_vec(),
            },
            p1: s.p1,
            p2: s.p2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationFile {
    pub n: usize,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
}

fn read(path: &Path, what: &str) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {what} {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T, CliError> {
    serde_json::from_str(text)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub fn load_spec(path: Option<&Path>) -> Result<ChannelSpec, CliError> {
    let path = path.ok_or_else(|| CliError::parse("--spec is required"))?;
    let file: SpecFile = parse_json(&read(path, "spec")?, path)?;
    file.into_spec()
}

/// Resolves `--alloc` (a file or `flat`) against `--n` and the spec budgets.
pub fn load_allocation(
    source: &str,
    n: Option<usize>,
    spec: &ChannelSpec,
) -> Result<Allocation, CliError> {
    let alloc = if source == "flat" {
        Allocation::flat(n.unwrap_or(DEFAULT_BLOCK_LENGTH), spec.p1, spec.p2)
    } else {
        let path = Path::new(source);
        let file: AllocationFile = parse_json(&read(path, "allocation")?, path)?;
        if let Some(n) = n {
            if n != file.n {
                return Err(CliError::validation(format!(
                    "--n {n} disagrees with allocation n = {}",
                    file.n
                )));
            }
        }
        for (field, v) in [("p1", &file.p1), ("p2", &file.p2), ("a1", &file.a1), ("a2", &file.a2)] {
            if v.len() != file.n {
                return Err(CliError::validation(format!(
                    "allocation {field} has length {}, expected n = {}",
                    v.len(),
                    file.n
                )));
            }
        }
        Allocation::new(file.p1, file.p2, file.a1, file.a2)?
    };
    if alloc.n() == 0 {
        return Err(CliError::validation("block length n must be positive"));
    }
    alloc.check_budget(spec.budgets())?;
    Ok(alloc)
}

/// `"1,0,0;0,1,0"` or a path to a JSON array of triples.
pub fn parse_weights(source: &str) -> Result<Vec<RateWeights>, CliError> {
    let triples: Vec<[f64; 3]> = if source.ends_with(".json") {
        let path = Path::new(source);
        parse_json(&read(path, "weight grid")?, path)?
    } else {
        source
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|triple| {
                let parts: Vec<f64> = triple
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::parse(format!("bad weight triple {triple:?}: {e}")))?;
                <[f64; 3]>::try_from(parts).map_err(|p| {
                    CliError::parse(format!("weight triple {triple:?} has {} entries", p.len()))
                })
            })
            .collect::<Result<_, _>>()?
    };
    if triples.is_empty() {
        return Err(CliError::validation("weight grid is empty"));
    }
    let weights: Vec<RateWeights> = triples
        .iter()
        .map(|&[a, b, c]| RateWeights::new(a, b, c))
        .collect();
    if let Some(bad) = weights.iter().find(|w| !w.is_valid()) {
        return Err(CliError::validation(format!(
            "weights must be nonnegative and not all zero: {bad:?}"
        )));
    }
    Ok(weights)
}
