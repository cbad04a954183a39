//! Truncated Fourier integral `m_R(y) = (1/c) ∫ φ(R(y − x))/(y − x) m(x) dx`
//! of known test functions, and an empirical check of how fast it
//! approaches `m(y)` as `R` grows.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::kernel::{CyclicKernel, KernelKind};
use crate::quadrature::Quadrature;

/// Half-width of the integration window around the probe.
pub const TRUNCATION: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    /// Standard normal density.
    GaussPdf,
    /// `Φ(x + 1) − Φ(x − 1)`, a smoothed box.
    GaussCdfCentered,
    /// `(15/16)(1 − x²)²` on `[−1, 1]`: continuously differentiable, with a
    /// jump in the second derivative at the ends.
    BetaLikeSmooth,
}

impl std::str::FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "gauss-pdf" | "gausspdf" => Ok(TestFunction::GaussPdf),
            "gauss-cdf-centered" | "gausscdfcentered" => Ok(TestFunction::GaussCdfCentered),
            "beta-like-smooth" | "betalikesmooth" => Ok(TestFunction::BetaLikeSmooth),
            _ => Err(Error::param(format!("unknown test function '{s}'"))),
        }
    }
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [
        TestFunction::GaussPdf,
        TestFunction::GaussCdfCentered,
        TestFunction::BetaLikeSmooth,
    ];

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::GaussPdf => (-0.5 * x * x).exp() / (2.0 * PI).sqrt(),
            TestFunction::GaussCdfCentered => std_normal_cdf(x + 1.0) - std_normal_cdf(x - 1.0),
            TestFunction::BetaLikeSmooth => {
                if x.abs() < 1.0 {
                    let t = 1.0 - x * x;
                    15.0 / 16.0 * t * t
                } else {
                    0.0
                }
            }
        }
    }

    /// Declared smoothness order.
    pub fn smoothness(&self) -> u32 {
        match self {
            TestFunction::GaussPdf | TestFunction::GaussCdfCentered => 8,
            TestFunction::BetaLikeSmooth => 1,
        }
    }

    /// Closed interval outside which the function vanishes, if any.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            TestFunction::BetaLikeSmooth => Some((-1.0, 1.0)),
            _ => None,
        }
    }

    /// `f̂(s) e^{s²/2}` for the functions whose transform is a Gaussian times
    /// an entire factor, `f̂(s) = ∫ e^{−isx} f(x) dx`.
    fn gaussian_factor(&self, s: f64) -> Option<f64> {
        match self {
            TestFunction::GaussPdf => Some(1.0),
            TestFunction::GaussCdfCentered => Some(if s == 0.0 { 2.0 } else { 2.0 * s.sin() / s }),
            TestFunction::BetaLikeSmooth => None,
        }
    }

    /// Finite everywhere and absolutely integrable, judged on `[−50, 50]`.
    pub fn check(&self) -> Result<()> {
        let q = Quadrature::default();
        let breaks = [-50.0, -1.0, 1.0, 50.0];
        let l1 = q.integrate_pieces(|x| self.eval(x).abs(), &breaks)?;
        let finite = (-500..=500).all(|k| self.eval(k as f64 * 0.1).is_finite());
        if finite && l1.value.is_finite() {
            Ok(())
        } else {
            Err(Error::Numeric(format!("{self:?} is not finite and integrable")))
        }
    }
}

/// `m_R(y)` for an arbitrary integrand. `support` clips the integration
/// window; otherwise `[y − 40, y + 40]` is used.
pub fn m_r_of<F: Fn(f64) -> f64 + Sync>(
    f: F,
    support: Option<(f64, f64)>,
    y: f64,
    r: f64,
    kernel: CyclicKernel,
) -> Result<f64> {
    ensure_positive("R", r)?;
    ensure_finite("y", y)?;
    let (mut lo, mut hi) = (y - TRUNCATION, y + TRUNCATION);
    if let Some((a, b)) = support {
        lo = lo.max(a);
        hi = hi.min(b);
    }
    if lo >= hi {
        return Ok(0.0);
    }
    // Breakpoints every quarter period of the kernel, anchored at the probe,
    // plus the support ends.
    let quarter = 0.5 * PI / r;
    let k_lo = ((lo - y) / quarter).ceil() as i64;
    let k_hi = ((hi - y) / quarter).floor() as i64;
    let mut breaks = Vec::with_capacity((k_hi - k_lo + 3).max(2) as usize);
    breaks.push(lo);
    for k in k_lo..=k_hi {
        let b = y + k as f64 * quarter;
        if b > lo && b < hi {
            breaks.push(b);
        }
    }
    breaks.push(hi);
    let q = Quadrature {
        rel_tol: 1e-8,
        abs_tol: 1e-15,
        max_intervals: 4 * breaks.len() + 20_000,
    };
    let integral = q.integrate_pieces(|x| kernel.weight(r, y - x) * f(x), &breaks)?;
    Ok(integral.value / kernel.normalizer())
}

pub fn m_r_value(f: TestFunction, y: f64, r: f64, kernel: CyclicKernel) -> Result<f64> {
    m_r_of(|x| f.eval(x), f.support(), y, r, kernel)
}

/// `ln |m_R(y) − m(y)|` and its sign, for the sine kernel, from the tail of
/// the Fourier transform: `m_R − m = −(1/π) ∫_R^∞ cos(sy) f̂(s) ds`.
fn sin_error_log(f: TestFunction, y: f64, r: f64) -> Option<(f64, f64)> {
    f.gaussian_factor(0.0)?;
    // Substituting s = R + t pulls out e^{−R²/2}.
    let t_max = -r + (r * r + 2.0 * 45.0).sqrt();
    let q = Quadrature {
        rel_tol: 1e-12,
        abs_tol: 0.0,
        max_intervals: 100_000,
    };
    let g = |t: f64| {
        let s = r + t;
        (s * y).cos() * f.gaussian_factor(s).unwrap_or(0.0) * (-r * t - 0.5 * t * t).exp()
    };
    let pieces = ((t_max * (y.abs() + 1.0)) / 0.5).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=pieces).map(|k| t_max * k as f64 / pieces as f64).collect();
    let integral = q.integrate_pieces(g, &breaks).ok()?.value;
    if integral == 0.0 {
        return None;
    }
    let ln = -0.5 * r * r + integral.abs().ln() - PI.ln();
    Some((ln, -integral.signum()))
}

/// `ln |m_R(y) − m(y)|` from the transform route, where available.
fn spectral_error_log(f: TestFunction, y: f64, r: f64, kernel: CyclicKernel) -> Option<f64> {
    match kernel.kind() {
        KernelKind::Sin => sin_error_log(f, y, r).map(|(ln, _)| ln),
        KernelKind::Haar => {
            // φ(t) = (8/π²) Σ (−1)^j sin((2j+1)t)/(2j+1)², so the Haar error
            // is Σ cⱼ E_sin((2j+1)R) / G with cⱼ = (−1)^j/(2j+1)² and
            // G = Σ cⱼ = π c / 8.
            let big_g = kernel.normalizer() * PI / 8.0;
            let (ln0, sign0) = sin_error_log(f, y, r)?;
            let mut rel = sign0;
            let mut j = 1u32;
            loop {
                let odd = (2 * j + 1) as f64;
                // Relative size of term j is about e^{−2j(j+1)R²}/(2j+1)².
                if 2.0 * (j * (j + 1)) as f64 * r * r > 60.0 || j > 10_000 {
                    break;
                }
                let c = if j % 2 == 0 { 1.0 } else { -1.0 } / (odd * odd);
                if let Some((ln, sign)) = sin_error_log(f, y, odd * r) {
                    rel += c * sign * (ln - ln0).exp();
                }
                j += 1;
            }
            if rel == 0.0 {
                return None;
            }
            Some(ln0 + rel.abs().ln() - big_g.ln())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorRoute {
    /// Closed-form transform tail; exact far below double-precision
    /// differences of `m_R` and `m`.
    Spectral,
    /// Direct difference of the quadrature value and `m(y)`.
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub function: TestFunction,
    pub kernel: KernelKind,
    pub y: f64,
    #[serde(rename = "R_grid")]
    pub r_grid: Vec<f64>,
    /// `|m_R(y) − m(y)|` per grid point (may underflow to 0 for large `R`).
    pub errors: Vec<f64>,
    /// Natural log of `errors`, kept separately so the fit survives underflow.
    pub log_errors: Vec<f64>,
    pub route: ErrorRoute,
    /// Direct quadrature differences, for comparison with the spectral route.
    pub quadrature_errors: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl RateReport {
    /// True when every error after the first is strictly below its
    /// predecessor from the second step on.
    pub fn decreasing_after_first(&self) -> bool {
        self.log_errors.windows(2).skip(1).all(|w| w[1] < w[0])
    }
}

/// Least-squares line through `(x, y)`: slope, intercept and R².
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Errors of `m_R(y)` over `r_grid` and a log-log fit of their decay.
pub fn rate_check(f: TestFunction, y: f64, r_grid: &[f64], kernel: CyclicKernel) -> Result<RateReport> {
    ensure_finite("y", y)?;
    if r_grid.len() < 4 {
        return Err(Error::param(format!("rate check needs at least 4 R values, got {}", r_grid.len())));
    }
    for &r in r_grid {
        ensure_positive("R", r)?;
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("R grid must be strictly increasing"));
    }
    if r_grid[r_grid.len() - 1] < 10.0 * r_grid[0] {
        return Err(Error::param("R grid must span at least one decade"));
    }
    let truth = f.eval(y);
    let quadrature_errors = r_grid
        .par_iter()
        .map(|&r| m_r_value(f, y, r, kernel).map(|m| (m - truth).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let spectral: Option<Vec<f64>> = r_grid
        .par_iter()
        .map(|&r| spectral_error_log(f, y, r, kernel))
        .collect();
    let (route, log_errors) = match spectral {
        Some(l) => (ErrorRoute::Spectral, l),
        None => (
            ErrorRoute::Quadrature,
            quadrature_errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect(),
        ),
    };
    let errors: Vec<f64> = log_errors.iter().map(|l| l.exp()).collect();
    let log_r: Vec<f64> = r_grid.iter().map(|r| r.ln()).collect();
    let (slope, intercept, r_squared) = linear_fit(&log_r, &log_errors);
    Ok(RateReport {
        function: f,
        kernel: kernel.kind(),
        y,
        r_grid: r_grid.to_vec(),
        errors,
        log_errors,
        route,
        quadrature_errors,
        slope,
        intercept,
        r_squared,
    })
}
