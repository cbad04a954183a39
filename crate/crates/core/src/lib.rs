//! Nonparametric estimators built on the sinc kernel `sin(Rz)/z`: smoothed
//! and conditional distribution functions, inverse-CDF sampling, quantile
//! regression, Markov-gap imputation and mixing-distribution deconvolution.

pub mod cli;
pub mod conditional;
pub mod curve;
pub mod dataset;
pub mod distribution;
pub mod error;
pub mod integral;
pub mod isotonic;
pub mod kernel;
pub mod mixing;
pub mod params;
pub mod quadrature;
pub mod quantile;
pub mod rng;

pub use conditional::{
    conditional_cdf, conditional_weights, log_return_transform, markov_impute, sequential_generate,
    ConditioningSpec,
};
pub use curve::{isotonic_projection, CurveEstimate, CurveParams};
pub use dataset::Dataset;
pub use distribution::{cdf_estimate, inverse_sample, sample_batch, CdfEvaluator, SincCdf};
pub use error::{Error, ErrorCategory, Result};
pub use integral::{m_r_value, rate_check, RateReport, TestFunction};
pub use kernel::{cyclic_kernel, haar_phi, si, sinc_kernel, CyclicKernel, KernelKind};
pub use mixing::{bandwidth_objective, bandwidth_select, median_curve, mixing_cdf, GModel, MixingParams};
pub use params::EstimatorParams;
pub use quantile::{quantile_estimate, quantile_monotonize, QuantileRequest};

/// Library version, echoed in reproducibility lines.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
