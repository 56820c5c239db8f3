//! Achievable-rate regions of the two-user linear Gaussian compound multiple
//! access channel with a common message and intersymbol interference.
//!
//! The channel (four FIR links, two colored noises, two power budgets) is
//! approximated by an n-block circular channel, which the DFT splits into
//! `n` independent scalar sub-channels. Rate terms are evaluated on that
//! sampled spectrum, checked against dense log-determinant evaluations, and
//! optimized over power and common-message allocations.
//!
//! ```
//! use cmacc_isi::{decompose, rate_terms_discrete, region_constraints, validate_spec};
//! use cmacc_isi::{Allocation, ChannelSpec, ImpulseResponse, NoiseModel};
//!
//! let unit = || ImpulseResponse::new(vec![1.0]).unwrap();
//! let spec = ChannelSpec {
//!     h11: ImpulseResponse::new(vec![1.0, 0.5]).unwrap(),
//!     h12: unit(),
//!     h21: unit(),
//!     h22: unit(),
//!     noise1: NoiseModel::white(1.0).unwrap(),
//!     noise2: NoiseModel::white(1.0).unwrap(),
//!     p1: 1.0,
//!     p2: 1.0,
//! };
//! let spec = validate_spec(&spec).unwrap();
//! let sub = decompose(&spec, 64).unwrap();
//! let bounds = rate_terms_discrete(&sub, &Allocation::flat(64, 1.0, 1.0)).unwrap();
//! let region = region_constraints(&bounds);
//! assert!(region.r1_max > 0.0 && region.sum_max <= region.total_max);
//! ```

pub mod channel_model;
pub mod error;
pub mod numeric;
pub mod optimizer;
pub mod oracle;
pub mod rate_region;
pub mod spectral;

pub use channel_model::{
    noise_psd, transfer_function, validate_spec, ChannelSpec, ImpulseResponse, NoiseModel,
};
pub use error::{Error, Result};
pub use optimizer::{
    optimize_exhaustive, optimize_weighted, project_power, trace_boundary, waterfill_single_user,
    BoundarySample, OptimizerConfig, WaterFilling,
};
pub use oracle::{build_channel_matrices, gaussian_mi_terms, psd_check, CirculantMatrix};
pub use rate_region::{
    is_achievable, max_weighted_rate, rate_terms_discrete, rate_terms_integral,
    region_constraints, sicc_region_constraints, strong_interference_check, Allocation,
    RateBounds, RatePoint, RateWeights, Receiver, RegionConstraints, SpectralAllocation,
    StrongInterferenceVerdict,
};
pub use spectral::{
    circular_convolve, decompose, dft, extend_impulse_response, idft, periodize_autocorrelation,
    RealBlock, SubchannelSet,
};
