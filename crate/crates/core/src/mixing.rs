//! Deconvolution of a covariate-dependent mixing distribution under a
//! Gaussian kernel of scale `h`:
//! `Ĝ(θ|x) = ½ + (R/(Nπ)) Σ e^{½sᵢ²h²} sin(sᵢ(θ − yᵢ*))/sᵢ`
//! with `yᵢ*` drawn from the estimated `P(·|x)` and `sᵢ ~ U(0, R)`.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::conditional::{conditional_evaluator, ConditioningSpec, TABLE_POINTS};
use crate::curve::{check_grid, isotonic_projection, linspace, CurveEstimate, CurveParams};
use crate::dataset::Dataset;
use crate::distribution::{inverse_sample, sample_batch, CdfEvaluator, TabulatedCdf};
use crate::error::{ensure_positive, Error, Result};
use crate::kernel::KernelKind;
use crate::params::EstimatorParams;
use crate::rng::{open_unit, stream_rng};

/// `R·h` above which the exponential weights make the estimator noisy.
pub const WARN_RH: f64 = 6.0;
/// `R·h` above which evaluation is refused.
pub const MAX_RH: f64 = 12.0;
/// Normal draws used by the bandwidth objective.
pub const OBJECTIVE_DRAWS: usize = 10_000;

const S_STREAM: u64 = 1;
const Z_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingParams {
    pub h: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    /// Stratify the `s` draws over `(0, R)` instead of sampling them iid.
    #[serde(default)]
    pub stratified: bool,
    #[serde(default = "default_true")]
    pub isotonic: bool,
}

fn default_true() -> bool {
    true
}

impl Default for MixingParams {
    fn default() -> Self {
        MixingParams {
            h: 0.1,
            r: 10.0,
            r1: 10.0,
            r2: 10.0,
            n: 10_000,
            seed: 0,
            stratified: false,
            isotonic: true,
        }
    }
}

impl MixingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.h >= 0.0 && self.h.is_finite()) {
            return Err(Error::param(format!("h must be finite and >= 0, got {}", self.h)));
        }
        ensure_positive("R", self.r)?;
        ensure_positive("R1", self.r1)?;
        ensure_positive("R2", self.r2)?;
        if self.n == 0 {
            return Err(Error::param("Monte Carlo size N must be at least 1"));
        }
        if self.r * self.h > MAX_RH {
            return Err(Error::param(format!(
                "R*h = {} exceeds {MAX_RH}; the exponential weights overflow the useful range",
                self.r * self.h
            )));
        }
        Ok(())
    }

    /// True when `R·h` is large enough for the weights to dominate the noise.
    pub fn variance_warning(&self) -> bool {
        self.r * self.h > WARN_RH
    }

    /// Parameters of the conditional estimator that feeds the draws.
    pub fn conditional(&self) -> EstimatorParams {
        EstimatorParams {
            r: self.r1,
            r1: self.r1,
            r2: self.r2,
            kernel: KernelKind::Sin,
            seed: self.seed,
        }
    }
}

/// Monte Carlo representation of `Ĝ(·|x)`.
#[derive(Debug, Clone)]
pub struct MixingEstimator {
    y: Vec<f64>,
    s: Vec<f64>,
    /// `R e^{½s²h²} / (Nπ)` per draw.
    coef: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl MixingEstimator {
    pub fn new(data: &Dataset, x0: f64, params: &MixingParams) -> Result<Self> {
        params.validate()?;
        if params.variance_warning() {
            log::warn!(
                "R*h = {:.3} exceeds {WARN_RH}: mixing estimate will be noisy",
                params.r * params.h
            );
        }
        if data.cols() < 2 {
            return Err(Error::input("mixing estimation needs (x, y) columns"));
        }
        let spec = ConditioningSpec::new(1, vec![0], vec![x0]);
        let eval = conditional_evaluator(data, &spec, &params.conditional())?;
        let table = TabulatedCdf::over_bracket(eval, TABLE_POINTS)?;
        let y = sample_batch(&table, params.n, params.seed)?;
        let s = draw_s(params);
        let scale = params.r / (params.n as f64 * std::f64::consts::PI);
        let coef: Vec<f64> = s.iter().map(|&s| scale * (0.5 * s * s * params.h * params.h).exp()).collect();
        let (lo, hi) = table.bracket();
        Ok(MixingEstimator { y, s, coef, lo, hi })
    }

    /// The draws `yᵢ*` from the estimated conditional.
    pub fn draws(&self) -> &[f64] {
        &self.y
    }

    pub fn raw(&self, theta: f64) -> f64 {
        let mut sum = 0.0;
        for ((&y, &s), &c) in self.y.iter().zip(&self.s).zip(&self.coef) {
            sum += c * sin_over(s, theta - y);
        }
        0.5 + sum
    }
}

impl CdfEvaluator for MixingEstimator {
    fn cdf(&self, theta: f64) -> f64 {
        self.raw(theta).clamp(0.0, 1.0)
    }

    fn bracket(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// `sin(s t)/s`, equal to `t` in the limit `s → 0`.
#[inline]
fn sin_over(s: f64, t: f64) -> f64 {
    let st = s * t;
    if st.abs() < 1e-8 {
        t * (1.0 - st * st / 6.0)
    } else {
        st.sin() / s
    }
}

fn draw_s(params: &MixingParams) -> Vec<f64> {
    let mut rng = stream_rng(params.seed, S_STREAM);
    let n = params.n as f64;
    (0..params.n)
        .map(|i| {
            let u = open_unit(&mut rng);
            if params.stratified {
                params.r * (i as f64 + u) / n
            } else {
                params.r * u
            }
        })
        .collect()
}

/// Evaluates `Ĝ(θ|x0)` on `theta_grid`, clamped and (by default)
/// isotonic-projected.
pub fn mixing_cdf(data: &Dataset, x0: f64, theta_grid: &[f64], params: &MixingParams) -> Result<CurveEstimate> {
    check_grid(theta_grid)?;
    let est = MixingEstimator::new(data, x0, params)?;
    let values = theta_grid.par_iter().map(|&t| est.cdf(t)).collect();
    let curve = CurveEstimate {
        grid: theta_grid.to_vec(),
        values,
        clamped: true,
        isotonic: false,
        params: CurveParams::Mixing(*params),
    };
    Ok(if params.isotonic {
        isotonic_projection(&curve)
    } else {
        curve
    })
}

/// Model for `G(θ|x)` inside the bandwidth objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GModel {
    /// `G(θ|x) = Φ(θ − x)`.
    #[default]
    Linear,
    /// The estimate `Ĝ_h` itself, recomputed for every `h`.
    PlugIn,
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Antithetic pairs `(z, −z)`, shared by every `h` so the objective is
/// smooth in `h`.
fn normal_draws(seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, Z_STREAM);
    let mut z = Vec::with_capacity(OBJECTIVE_DRAWS);
    for _ in 0..OBJECTIVE_DRAWS / 2 {
        let v: f64 = StandardNormal.sample(&mut rng);
        z.push(v);
        z.push(-v);
    }
    z
}

/// Index of the first minimum.
fn argmin_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (k, &a) in values.iter().enumerate() {
        if a < values[best] {
            best = k;
        }
    }
    best
}

/// `α(h) = |P̂(y|x) − mean_z G_h(y − h z | x)|`, `z ~ N(0, 1)`.
pub fn bandwidth_objective(
    data: &Dataset,
    x_probe: f64,
    y_probe: f64,
    h: f64,
    model: GModel,
    params: &MixingParams,
) -> Result<f64> {
    let p_hat = probe_cdf(data, x_probe, y_probe, params)?;
    let z = normal_draws(params.seed);
    objective_with(data, x_probe, y_probe, h, model, params, p_hat, &z)
}

fn probe_cdf(data: &Dataset, x: f64, y: f64, params: &MixingParams) -> Result<f64> {
    params.validate()?;
    let spec = ConditioningSpec::new(1, vec![0], vec![x]);
    Ok(conditional_evaluator(data, &spec, &params.conditional())?.cdf(y))
}

#[allow(clippy::too_many_arguments)]
fn objective_with(
    data: &Dataset,
    x: f64,
    y: f64,
    h: f64,
    model: GModel,
    params: &MixingParams,
    p_hat: f64,
    z: &[f64],
) -> Result<f64> {
    let mean = match model {
        GModel::Linear => z.iter().map(|&z| std_normal_cdf(y - h * z - x)).sum::<f64>() / z.len() as f64,
        GModel::PlugIn => {
            let p = MixingParams { h, ..*params };
            let est = MixingEstimator::new(data, x, &p)?;
            // Tabulate Ĝ_h over the range the z-draws reach.
            let spread = h * z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let grid = linspace(y - spread - 1e-9, y + spread + 1e-9, 257);
            let values: Vec<f64> = grid.par_iter().map(|&t| est.cdf(t)).collect();
            let values = crate::isotonic::pava(&values);
            z.iter()
                .map(|&z| crate::curve::interpolate(&grid, &values, y - h * z))
                .sum::<f64>()
                / z.len() as f64
        }
    };
    Ok((p_hat - mean).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthReport {
    pub h_grid: Vec<f64>,
    pub objective: Vec<f64>,
    pub selected: f64,
    pub x_probe: f64,
    pub y_probe: f64,
}

/// Evaluates `α` over `h_grid` and picks its minimiser, preferring the
/// smaller `h` on ties. Probes default to the sample means of `x` and `y`.
pub fn bandwidth_profile(
    data: &Dataset,
    h_grid: &[f64],
    probes: Option<(f64, f64)>,
    model: GModel,
    params: &MixingParams,
) -> Result<BandwidthReport> {
    if h_grid.is_empty() {
        return Err(Error::param("bandwidth grid is empty"));
    }
    if h_grid.iter().any(|h| !(*h >= 0.0 && h.is_finite())) || h_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("bandwidth grid must be non-negative and strictly increasing"));
    }
    if data.cols() < 2 {
        return Err(Error::input("bandwidth selection needs (x, y) columns"));
    }
    let (x_probe, y_probe) = match probes {
        Some(p) => p,
        None => {
            let n = data.rows() as f64;
            let mx = data.column(0)?.iter().sum::<f64>() / n;
            let my = data.column(1)?.iter().sum::<f64>() / n;
            (mx, my)
        }
    };
    let p_hat = probe_cdf(data, x_probe, y_probe, params)?;
    let z = normal_draws(params.seed);
    let objective = h_grid
        .iter()
        .map(|&h| objective_with(data, x_probe, y_probe, h, model, params, p_hat, &z))
        .collect::<Result<Vec<f64>>>()?;
    let best = argmin_first(&objective);
    Ok(BandwidthReport {
        h_grid: h_grid.to_vec(),
        selected: h_grid[best],
        objective,
        x_probe,
        y_probe,
    })
}

pub fn bandwidth_select(
    data: &Dataset,
    h_grid: &[f64],
    probes: Option<(f64, f64)>,
    model: GModel,
    params: &MixingParams,
) -> Result<f64> {
    Ok(bandwidth_profile(data, h_grid, probes, model, params)?.selected)
}

/// Median of `Ĝ(·|x)` along `x_grid`; `None` where the estimate could not
/// be formed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MedianCurve {
    pub x_grid: Vec<f64>,
    pub values: Vec<Option<f64>>,
    pub params: MixingParams,
}

/// Points in the θ grid used to locate each median.
pub const MEDIAN_GRID_POINTS: usize = 512;

pub fn median_curve(data: &Dataset, x_grid: &[f64], params: &MixingParams) -> Result<MedianCurve> {
    params.validate()?;
    check_grid(x_grid)?;
    if data.cols() < 2 {
        return Err(Error::input("median curve needs (x, y) columns"));
    }
    let y = data.column(1)?;
    let (lo, hi) = crate::distribution::min_max(&y);
    let pad = 10.0 / params.r1 + 4.0 * params.h + 1.0;
    let theta = linspace(lo - pad, hi + pad, MEDIAN_GRID_POINTS);
    let values = x_grid
        .iter()
        .map(|&x| {
            let p = MixingParams { isotonic: true, ..*params };
            match mixing_cdf(data, x, &theta, &p).and_then(|c| inverse_sample(&c, 0.5)) {
                Ok(m) => Ok(Some(m)),
                Err(e @ (Error::DegenerateDenominator { .. } | Error::Bracket { .. })) => {
                    log::warn!("median at x = {x} unavailable: {e}");
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MedianCurve {
        x_grid: x_grid.to_vec(),
        values,
        params: *params,
    })
}
