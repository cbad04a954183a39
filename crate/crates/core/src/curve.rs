use serde::{Deserialize, Serialize};

use crate::distribution::CdfEvaluator;
use crate::error::{Error, Result};
use crate::isotonic::pava;
use crate::mixing::MixingParams;
use crate::params::EstimatorParams;

pub const SCHEMA: &str = "fourier-est/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "estimator", rename_all = "kebab-case")]
pub enum CurveParams {
    Distribution(EstimatorParams),
    Mixing(MixingParams),
}

/// Distribution function evaluated on a grid, with its post-processing
/// state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEstimate {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub clamped: bool,
    pub isotonic: bool,
    pub params: CurveParams,
}

impl CurveEstimate {
    /// Serializes with the versioned top-level `schema` field.
    pub fn to_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'static str,
            #[serde(flatten)]
            curve: &'a CurveEstimate,
        }
        serde_json::to_string_pretty(&Doc {
            schema: SCHEMA,
            curve: self,
        })
        .map_err(|e| Error::Numeric(format!("curve serialization: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            schema: String,
            #[serde(flatten)]
            curve: CurveEstimate,
        }
        let doc: Doc =
            serde_json::from_str(text).map_err(|e| Error::input(format!("curve JSON: {e}")))?;
        if doc.schema != SCHEMA {
            return Err(Error::input(format!(
                "unsupported schema '{}' (expected {SCHEMA})",
                doc.schema
            )));
        }
        Ok(doc.curve)
    }

    /// Two-column `grid,value` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,F\n");
        for (g, v) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{g},{v}\n"));
        }
        out
    }
}

/// Replaces the values by their least-squares non-decreasing fit, then
/// clamps to [0, 1] again.
pub fn isotonic_projection(curve: &CurveEstimate) -> CurveEstimate {
    let values = pava(&curve.values)
        .into_iter()
        .map(|v| v.clamp(0.0, 1.0))
        .collect();
    CurveEstimate {
        values,
        isotonic: true,
        clamped: true,
        ..curve.clone()
    }
}

/// A grid curve read as a distribution function: piecewise linear on the
/// grid, 0 below it and 1 from its last point on, so any mass the curve
/// leaves outside `[values[0], values[last]]` sits at the grid ends.
impl CdfEvaluator for CurveEstimate {
    fn cdf(&self, y: f64) -> f64 {
        if y < self.grid[0] {
            0.0
        } else if y >= self.grid[self.grid.len() - 1] {
            1.0
        } else {
            interpolate(&self.grid, &self.values, y)
        }
    }

    fn bracket(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }
}

pub(crate) fn interpolate(grid: &[f64], values: &[f64], y: f64) -> f64 {
    let n = grid.len();
    if y <= grid[0] {
        return values[0];
    }
    if y >= grid[n - 1] {
        return values[n - 1];
    }
    let k = grid.partition_point(|&g| g <= y);
    let (x0, x1) = (grid[k - 1], grid[k]);
    let t = (y - x0) / (x1 - x0);
    values[k - 1] + t * (values[k] - values[k - 1])
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::param("evaluation grid is empty"));
    }
    if grid.iter().any(|g| !g.is_finite()) {
        return Err(Error::param("evaluation grid has non-finite points"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("evaluation grid must be strictly increasing"));
    }
    Ok(())
}
