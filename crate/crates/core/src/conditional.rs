//! Conditional distribution functions with sinc-product weights, sequential
//! generation of multivariate samples and Markov-gap imputation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{check_grid, CurveEstimate, CurveParams};
use crate::dataset::Dataset;
use crate::distribution::{inverse_sample, sample_batch, SincCdf, TabulatedCdf};
use crate::error::{ensure_positive, Error, Result};
use crate::kernel::CyclicKernel;
use crate::params::EstimatorParams;
use crate::rng::{open_unit, stream_rng};

/// Redraws allowed per coordinate when the conditioning weights vanish.
pub const MAX_REDRAWS: usize = 100;

/// Table resolution used when many draws come from one conditional.
pub const TABLE_POINTS: usize = 4096;

/// Which column is estimated, which columns are conditioned on and where.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditioningSpec {
    pub target_col: usize,
    pub given_cols: Vec<usize>,
    pub given_point: Vec<f64>,
    #[serde(default)]
    pub exclude_rows: Vec<usize>,
}

impl ConditioningSpec {
    pub fn new(target_col: usize, given_cols: Vec<usize>, given_point: Vec<f64>) -> Self {
        ConditioningSpec {
            target_col,
            given_cols,
            given_point,
            exclude_rows: Vec::new(),
        }
    }

    pub fn unconditional(target_col: usize) -> Self {
        ConditioningSpec::new(target_col, Vec::new(), Vec::new())
    }

    pub fn excluding(mut self, rows: Vec<usize>) -> Self {
        self.exclude_rows = rows;
        self
    }

    pub fn validate(&self, data: &Dataset) -> Result<()> {
        data.check_column(self.target_col)?;
        if self.given_cols.len() != self.given_point.len() {
            return Err(Error::param(format!(
                "{} conditioning columns but {} conditioning values",
                self.given_cols.len(),
                self.given_point.len()
            )));
        }
        for (k, &c) in self.given_cols.iter().enumerate() {
            data.check_column(c)?;
            if c == self.target_col {
                return Err(Error::param(format!("column {c} is both target and conditioning variable")));
            }
            if self.given_cols[..k].contains(&c) {
                return Err(Error::param(format!("conditioning column {c} listed twice")));
            }
        }
        if let Some(v) = self.given_point.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("conditioning value {v} is not finite")));
        }
        if let Some(&r) = self.exclude_rows.iter().find(|&&r| r >= data.rows()) {
            return Err(Error::param(format!("excluded row {r} out of range for {} rows", data.rows())));
        }
        Ok(())
    }
}

/// Product weights for the rows that take part in the estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalWeights {
    /// Indices of the participating (non-excluded) rows.
    pub rows: Vec<usize>,
    pub weights: Vec<f64>,
    pub sum: f64,
}

fn degeneracy_threshold(n: usize, r2: f64, given: usize) -> f64 {
    1e-12 * n as f64 * r2.powi(given as i32)
}

fn check_sum(sum: f64, n: usize, r2: f64, given: usize) -> Result<()> {
    let threshold = degeneracy_threshold(n, r2, given);
    if sum.abs() < threshold || !sum.is_finite() {
        Err(Error::DegenerateDenominator { sum, threshold })
    } else {
        Ok(())
    }
}

/// `wᵢ = Πₗ φ(R2 (xₗ − Yᵢₗ)) / (xₗ − Yᵢₗ)` over the non-excluded rows.
/// Sinc weights can be negative, so the sum is checked in absolute value.
pub fn conditional_weights(
    data: &Dataset,
    spec: &ConditioningSpec,
    r2: f64,
    kernel: CyclicKernel,
) -> Result<ConditionalWeights> {
    ensure_positive("R2", r2)?;
    spec.validate(data)?;
    let rows: Vec<usize> = (0..data.rows()).filter(|i| !spec.exclude_rows.contains(i)).collect();
    if rows.is_empty() {
        return Err(Error::input("every row is excluded"));
    }
    let weights: Vec<f64> = rows
        .iter()
        .map(|&i| {
            spec.given_cols
                .iter()
                .zip(&spec.given_point)
                .fold(1.0, |w, (&c, &x)| w * kernel.weight(r2, x - data.get(i, c)))
        })
        .collect();
    let sum: f64 = weights.iter().sum();
    check_sum(sum, rows.len(), r2, spec.given_cols.len())?;
    Ok(ConditionalWeights { rows, weights, sum })
}

/// The weighted estimator `½ + (1/π) Σ Si(R1(y − yᵢ)) wᵢ / Σ wᵢ` as an
/// evaluator, clamped to `[0, 1]`.
pub fn conditional_evaluator(data: &Dataset, spec: &ConditioningSpec, params: &EstimatorParams) -> Result<SincCdf> {
    params.validate()?;
    let kernel = params.cyclic_kernel();
    let w = conditional_weights(data, spec, params.r2, kernel)?;
    let target: Vec<f64> = w.rows.iter().map(|&i| data.get(i, spec.target_col)).collect();
    SincCdf::weighted(&target, &w.weights, params.r1, kernel)
}

pub fn conditional_cdf(
    data: &Dataset,
    spec: &ConditioningSpec,
    grid: &[f64],
    params: &EstimatorParams,
) -> Result<CurveEstimate> {
    check_grid(grid)?;
    let eval = conditional_evaluator(data, spec, params)?;
    Ok(CurveEstimate {
        grid: grid.to_vec(),
        values: eval.evaluate(grid),
        clamped: true,
        isotonic: false,
        params: CurveParams::Distribution(*params),
    })
}

/// Draws `count` synthetic rows: the first coordinate from the marginal
/// estimator, each later coordinate from its conditional given all earlier
/// ones. `R1` smooths the coordinate being drawn and `R2` the conditioning
/// variables.
///
/// When the weights at some step vanish the previous coordinate is redrawn,
/// at most [`MAX_REDRAWS`] times.
pub fn sequential_generate(data: &Dataset, count: usize, params: &EstimatorParams) -> Result<Dataset> {
    params.validate()?;
    let d = data.cols();
    let kernel = params.cyclic_kernel();
    let first = data.column(0)?;
    let marginal = SincCdf::new(&first, params.r1, kernel)?;
    if count == 0 {
        return Err(Error::param("number of generated rows must be at least 1"));
    }
    let starts = sample_batch(&marginal, count, params.seed)?;
    if d == 1 {
        return Dataset::new(count, 1, starts);
    }
    let columns: Vec<Vec<f64>> = (0..d).map(|j| data.column(j)).collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = starts
        .par_iter()
        .enumerate()
        .map(|(rep, &y0)| generate_chain(&columns, &marginal, y0, rep, params, kernel))
        .collect::<Result<_>>()?;
    Dataset::from_rows(&rows)
}

fn generate_chain(
    columns: &[Vec<f64>],
    marginal: &SincCdf,
    y0: f64,
    rep: usize,
    params: &EstimatorParams,
    kernel: CyclicKernel,
) -> Result<Vec<f64>> {
    let d = columns.len();
    let n = columns[0].len();
    let mut rng = stream_rng(params.seed, rep as u64 + 1);
    let mut point = vec![y0];
    // prefix[j][i] = product of the weights of coordinates 0..j for row i.
    let mut prefix: Vec<Vec<f64>> = vec![vec![1.0; n]];
    let mut redraws = 0;
    while point.len() < d {
        let j = point.len();
        let prev = &prefix[j - 1];
        let weights: Vec<f64> = prev
            .iter()
            .zip(&columns[j - 1])
            .map(|(&p, &x)| p * kernel.weight(params.r2, point[j - 1] - x))
            .collect();
        let sum: f64 = weights.iter().sum();
        if check_sum(sum, n, params.r2, j).is_err() {
            redraws += 1;
            if redraws > MAX_REDRAWS {
                return Err(Error::Generation {
                    coordinate: j,
                    attempts: MAX_REDRAWS,
                });
            }
            let u = open_unit(&mut rng);
            point[j - 1] = if j == 1 {
                inverse_sample(marginal, u)?
            } else {
                let eval = SincCdf::weighted(&columns[j - 1], &prefix[j - 1], params.r1, kernel)?;
                inverse_sample(&eval, u)?
            };
            continue;
        }
        redraws = 0;
        let eval = SincCdf::weighted(&columns[j], &weights, params.r1, kernel)?;
        let u = open_unit(&mut rng);
        point.push(inverse_sample(&eval, u)?);
        prefix.push(weights);
    }
    Ok(point)
}

/// Draws `count` values for the gap at row `m` of a series from the
/// estimate of `y_m` given `(y_{m−1}, y_{m+1})`, built from every triple
/// `(y_{i−1}, y_i, y_{i+1})` with `i ∉ {m−1, m, m+1}`.
pub fn markov_impute(series: &[f64], m: usize, params: &EstimatorParams, count: usize) -> Result<Vec<f64>> {
    params.validate()?;
    let n = series.len();
    if n < 10 {
        return Err(Error::input(format!("imputation needs at least 10 observations, got {n}")));
    }
    if m == 0 || m + 1 >= n {
        return Err(Error::param(format!(
            "row {m} has no neighbour on both sides in a series of length {n}"
        )));
    }
    let (triples, spec) = markov_design(series, m)?;
    let eval = conditional_evaluator(&triples, &spec, params)?;
    let table = TabulatedCdf::over_bracket(eval, TABLE_POINTS)?;
    sample_batch(&table, count, params.seed)
}

/// Triples `(y_i, y_{i−1}, y_{i+1})` for interior `i`, with the rows that
/// touch `m` excluded, and the matching conditioning spec.
pub(crate) fn markov_design(series: &[f64], m: usize) -> Result<(Dataset, ConditioningSpec)> {
    let n = series.len();
    let mut values = Vec::with_capacity(3 * (n - 2));
    for i in 1..n - 1 {
        values.extend_from_slice(&[series[i], series[i - 1], series[i + 1]]);
    }
    let triples = Dataset::new(n - 2, 3, values)?;
    // Row k of `triples` is centred on series index k + 1.
    let exclude = [m.checked_sub(1), Some(m), Some(m + 1)]
        .into_iter()
        .flatten()
        .filter(|&i| i >= 1 && i + 1 < n)
        .map(|i| i - 1)
        .collect();
    let spec = ConditioningSpec::new(0, vec![1, 2], vec![series[m - 1], series[m + 1]]).excluding(exclude);
    Ok((triples, spec))
}

/// `yᵢ = 10 log(raw_{i+1} / raw_i)`.
pub fn log_return_transform(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.len() < 2 {
        return Err(Error::input(format!("log returns need at least 2 values, got {}", raw.len())));
    }
    if let Some(i) = raw.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!(
            "log returns need positive values, row {i} is {}",
            raw[i]
        )));
    }
    Ok(raw.windows(2).map(|w| 10.0 * (w[1] / w[0]).ln()).collect())
}
