use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Result};
use crate::kernel::{CyclicKernel, KernelKind};

/// Smoothing parameters shared by the distribution estimators.
///
/// `r` drives the univariate estimator, `r1` the target variable of a
/// conditional estimator and `r2` every conditioning variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorParams {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    pub kernel: KernelKind,
    pub seed: u64,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams {
            r: 5.0,
            r1: 10.0,
            r2: 6.0,
            kernel: KernelKind::Sin,
            seed: 0,
        }
    }
}

impl EstimatorParams {
    pub fn with_r(r: f64) -> Self {
        EstimatorParams {
            r,
            ..Default::default()
        }
    }

    pub fn conditional(r1: f64, r2: f64) -> Self {
        EstimatorParams {
            r1,
            r2,
            ..Default::default()
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kernel(mut self, kernel: KernelKind) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("R", self.r)?;
        ensure_positive("R1", self.r1)?;
        ensure_positive("R2", self.r2)?;
        Ok(())
    }

    pub fn cyclic_kernel(&self) -> CyclicKernel {
        CyclicKernel::new(self.kernel)
    }
}
