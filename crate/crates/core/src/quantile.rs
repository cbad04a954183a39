//! Quantile regression through the estimated conditional distribution:
//! `Q̂(u|x) = (1/(Nπ)) Σ sin(R(u − F̂(yᵢ*|x)))/(u − F̂(yᵢ*|x)) · yᵢ*` with
//! `yᵢ*` drawn from `F̂(·|x)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conditional::{conditional_evaluator, ConditioningSpec, TABLE_POINTS};
use crate::curve::{isotonic_projection, CurveEstimate, CurveParams};
use crate::dataset::Dataset;
use crate::distribution::{min_max, sample_batch_stream, CdfEvaluator};
use crate::error::{ensure_positive, Error, Result};
use crate::isotonic::pava;
use crate::kernel::{sinc_unchecked, KernelKind};
use crate::params::EstimatorParams;

/// Smallest accepted Monte Carlo size.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileRequest {
    pub u_levels: Vec<f64>,
    pub x_points: Vec<f64>,
    /// Smoothing of the `u` sinc.
    #[serde(rename = "R")]
    pub r: f64,
    /// Conditional-CDF smoothing of `y`.
    #[serde(rename = "R1")]
    pub r1: f64,
    /// Conditional-CDF smoothing of `x`.
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "N")]
    pub mc_samples: usize,
    pub seed: u64,
    /// Apply [`quantile_monotonize`] across `u` at each `x`.
    pub monotone: bool,
}

impl QuantileRequest {
    /// One `R` for every smoothing step.
    pub fn new(u_levels: Vec<f64>, x_points: Vec<f64>, r: f64) -> Self {
        QuantileRequest {
            u_levels,
            x_points,
            r,
            r1: r,
            r2: r,
            mc_samples: 5000,
            seed: 0,
            monotone: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("R", self.r)?;
        ensure_positive("R1", self.r1)?;
        ensure_positive("R2", self.r2)?;
        if self.u_levels.is_empty() || self.x_points.is_empty() {
            return Err(Error::param("need at least one level and one x point"));
        }
        if let Some(u) = self.u_levels.iter().find(|u| !(**u > 0.0 && **u < 1.0)) {
            return Err(Error::param(format!("quantile level must lie in (0, 1), got {u}")));
        }
        if self.u_levels.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("quantile levels must be sorted"));
        }
        if self.mc_samples < MIN_SAMPLES {
            return Err(Error::param(format!(
                "Monte Carlo size must be at least {MIN_SAMPLES}, got {}",
                self.mc_samples
            )));
        }
        Ok(())
    }

    fn conditional_params(&self) -> EstimatorParams {
        EstimatorParams {
            r: self.r1,
            r1: self.r1,
            r2: self.r2,
            kernel: KernelKind::Sin,
            seed: self.seed,
        }
    }
}

/// `values[k][j]` is the estimate at `u_levels[k]`, `x_points[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileMatrix {
    pub u_levels: Vec<f64>,
    pub x_points: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub monotone: bool,
}

impl QuantileMatrix {
    /// Long-format `x,u,q` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,u,q\n");
        for (j, x) in self.x_points.iter().enumerate() {
            for (k, u) in self.u_levels.iter().enumerate() {
                out.push_str(&format!("{x},{u},{}\n", self.values[k][j]));
            }
        }
        out
    }
}

/// Isotonic conditional distribution of `y` given `x` on a fine grid.
pub(crate) fn isotonic_conditional(data: &Dataset, x: f64, params: &EstimatorParams) -> Result<CurveEstimate> {
    let spec = ConditioningSpec::new(1, vec![0], vec![x]);
    let eval = conditional_evaluator(data, &spec, params)?;
    let (lo, hi) = eval.bracket();
    let grid = crate::curve::linspace(lo, hi, TABLE_POINTS);
    let curve = CurveEstimate {
        values: eval.evaluate(&grid),
        grid,
        clamped: true,
        isotonic: false,
        params: CurveParams::Distribution(*params),
    };
    Ok(isotonic_projection(&curve))
}

pub fn quantile_estimate(data: &Dataset, req: &QuantileRequest) -> Result<QuantileMatrix> {
    req.validate()?;
    if data.cols() < 2 {
        return Err(Error::input("quantile regression needs (x, y) columns"));
    }
    if data.rows() < 20 {
        return Err(Error::input(format!("quantile regression needs at least 20 rows, got {}", data.rows())));
    }
    let (x_min, x_max) = min_max(&data.column(0)?);
    if let Some(x) = req.x_points.iter().find(|x| !(**x >= x_min && **x <= x_max)) {
        return Err(Error::param(format!("x = {x} lies outside the data range [{x_min}, {x_max}]")));
    }
    let params = req.conditional_params();
    let columns = req
        .x_points
        .par_iter()
        .enumerate()
        .map(|(j, &x)| {
            let curve = isotonic_conditional(data, x, &params)?;
            let draws = sample_batch_stream(&curve, req.mc_samples, req.seed, j as u64)?;
            let levels: Vec<f64> = draws.iter().map(|&y| curve.cdf(y)).collect();
            let scale = 1.0 / (req.mc_samples as f64 * PI);
            let q: Vec<f64> = req
                .u_levels
                .iter()
                .map(|&u| {
                    let mut sum = 0.0;
                    for (&y, &v) in draws.iter().zip(&levels) {
                        sum += sinc_unchecked(req.r, u - v) * y;
                    }
                    scale * sum
                })
                .collect();
            Ok(if req.monotone { quantile_monotonize(&q) } else { q })
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let values = (0..req.u_levels.len())
        .map(|k| columns.iter().map(|c| c[k]).collect())
        .collect();
    Ok(QuantileMatrix {
        u_levels: req.u_levels.clone(),
        x_points: req.x_points.clone(),
        values,
        monotone: req.monotone,
    })
}

/// Least-squares non-decreasing fit across the levels of one `x`.
pub fn quantile_monotonize(row: &[f64]) -> Vec<f64> {
    pava(row)
}
