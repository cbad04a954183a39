//! Smoothed distribution function `½ + (1/(nπ)) Σ Si(R(y − Yᵢ))`, its
//! weighted (conditional) form, and inverse-CDF sampling.

use rayon::prelude::*;

use crate::curve::{check_grid, interpolate, linspace, CurveEstimate, CurveParams};
use crate::error::{ensure_positive, Error, Result};
use crate::kernel::CyclicKernel;
use crate::params::EstimatorParams;
use crate::rng::{open_unit, stream_rng};

pub use crate::curve::isotonic_projection;

/// Bisection tolerance in `y` for inverse sampling.
pub const INVERSE_TOL: f64 = 1e-8;

const SCAN_POINTS: usize = 32;
/// Cells in the scan shared by an [`InverseSampler`].
const SHARED_SCAN_POINTS: usize = 2048;
const MAX_WIDENINGS: usize = 60;

/// Anything that can be read as a distribution function over the reals.
pub trait CdfEvaluator: Sync {
    fn cdf(&self, y: f64) -> f64;

    /// Initial search interval for inverse sampling.
    fn bracket(&self) -> (f64, f64);
}

impl<E: CdfEvaluator + ?Sized> CdfEvaluator for &E {
    fn cdf(&self, y: f64) -> f64 {
        (**self).cdf(y)
    }

    fn bracket(&self) -> (f64, f64) {
        (**self).bracket()
    }
}

/// `½ + Σ wᵢ P(R(y − Yᵢ)) / (c Σ wᵢ)` where `P` is the kernel primitive and
/// `c` its normalizer. Unit weights give the unconditional estimator.
#[derive(Debug, Clone)]
pub struct SincCdf {
    data: Vec<f64>,
    weights: Vec<f64>,
    total: f64,
    r: f64,
    kernel: CyclicKernel,
    clamp: bool,
    lo: f64,
    hi: f64,
}

impl SincCdf {
    pub fn new(data: &[f64], r: f64, kernel: CyclicKernel) -> Result<Self> {
        SincCdf::weighted(data, &vec![1.0; data.len()], r, kernel)
    }

    /// Weighted estimator. The caller is responsible for rejecting a
    /// vanishing weight total; only an exact zero is refused here.
    pub fn weighted(data: &[f64], weights: &[f64], r: f64, kernel: CyclicKernel) -> Result<Self> {
        ensure_positive("R", r)?;
        if data.is_empty() {
            return Err(Error::input("sample is empty"));
        }
        if weights.len() != data.len() {
            return Err(Error::param(format!(
                "{} weights for {} observations",
                weights.len(),
                data.len()
            )));
        }
        if data.iter().chain(weights).any(|v| !v.is_finite()) {
            return Err(Error::input("sample or weights contain non-finite values"));
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return Err(Error::DegenerateDenominator {
                sum: 0.0,
                threshold: 0.0,
            });
        }
        let (min, max) = min_max(data);
        Ok(SincCdf {
            data: data.to_vec(),
            weights: weights.to_vec(),
            total,
            r,
            kernel,
            clamp: true,
            lo: min - 10.0 / r,
            hi: max + 10.0 / r,
        })
    }

    /// Disables the `[0, 1]` clamp on `cdf`.
    pub fn unclamped(mut self) -> Self {
        self.clamp = false;
        self
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn weight_total(&self) -> f64 {
        self.total
    }

    /// Estimator value before clamping.
    pub fn raw(&self, y: f64) -> f64 {
        let mut sum = 0.0;
        for (&x, &w) in self.data.iter().zip(&self.weights) {
            sum += w * self.kernel.primitive(self.r * (y - x));
        }
        0.5 + sum / (self.kernel.normalizer() * self.total)
    }

    /// Evaluates on every grid point in parallel.
    pub fn evaluate(&self, grid: &[f64]) -> Vec<f64> {
        grid.par_iter().map(|&y| self.cdf(y)).collect()
    }
}

impl CdfEvaluator for SincCdf {
    fn cdf(&self, y: f64) -> f64 {
        let v = self.raw(y);
        if self.clamp {
            v.clamp(0.0, 1.0)
        } else {
            v
        }
    }

    fn bracket(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

/// Linear interpolation of an evaluator tabulated on a uniform grid, with
/// exact evaluation outside the table.
#[derive(Debug, Clone)]
pub struct TabulatedCdf<E> {
    inner: E,
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl<E: CdfEvaluator> TabulatedCdf<E> {
    pub fn new(inner: E, lo: f64, hi: f64, points: usize) -> Result<Self> {
        if points < 2 || !(hi > lo) {
            return Err(Error::param(format!(
                "table needs >= 2 points on a non-empty interval, got {points} on [{lo}, {hi}]"
            )));
        }
        let grid = linspace(lo, hi, points);
        let values = grid.par_iter().map(|&y| inner.cdf(y)).collect();
        Ok(TabulatedCdf {
            inner,
            grid,
            values,
        })
    }

    /// Tabulates over the evaluator's own bracket.
    pub fn over_bracket(inner: E, points: usize) -> Result<Self> {
        let (lo, hi) = inner.bracket();
        TabulatedCdf::new(inner, lo, hi, points)
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }
}

impl<E: CdfEvaluator> CdfEvaluator for TabulatedCdf<E> {
    fn cdf(&self, y: f64) -> f64 {
        if y < self.grid[0] || y > self.grid[self.grid.len() - 1] {
            self.inner.cdf(y)
        } else {
            interpolate(&self.grid, &self.values, y)
        }
    }

    fn bracket(&self) -> (f64, f64) {
        self.inner.bracket()
    }
}

/// Evaluates the smoothed distribution function of `data` on `grid`,
/// clamped to `[0, 1]`.
pub fn cdf_estimate(data: &[f64], grid: &[f64], params: &EstimatorParams) -> Result<CurveEstimate> {
    params.validate()?;
    check_grid(grid)?;
    let eval = SincCdf::new(data, params.r, params.cyclic_kernel())?;
    Ok(CurveEstimate {
        grid: grid.to_vec(),
        values: eval.evaluate(grid),
        clamped: true,
        isotonic: false,
        params: CurveParams::Distribution(*params),
    })
}

/// 256 points over the data range widened by three sample standard
/// deviations (one unit when the spread is zero).
pub fn default_grid(data: &[f64]) -> Vec<f64> {
    const POINTS: usize = 256;
    if data.is_empty() {
        return linspace(-1.0, 1.0, POINTS);
    }
    let (min, max) = min_max(data);
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let sd = if data.len() > 1 {
        (data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let pad = if sd > 0.0 { 3.0 * sd } else { 1.0 };
    linspace(min - pad, max + pad, POINTS)
}

fn check_level(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("level u must lie in (0, 1), got {u}")))
    }
}

/// Smallest `y` in `[lo, hi]` with `F(y) ≥ u`, to [`INVERSE_TOL`].
///
/// A coarse scan picks the first cell in which `F` crosses `u`; the crossing
/// is then refined inside that cell. Fails with [`Error::Bracket`] unless
/// `F(lo) < u ≤ F(hi)`.
pub fn inverse_sample_in<E: CdfEvaluator + ?Sized>(eval: &E, u: f64, lo: f64, hi: f64) -> Result<f64> {
    check_level(u)?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::param(format!("invalid search interval [{lo}, {hi}]")));
    }
    let scan = Scan::new(eval, lo, hi, SCAN_POINTS);
    scan.locate(eval, u)
}

/// [`inverse_sample_in`] over the evaluator's bracket, doubling the bracket
/// about its centre until it straddles `u`.
pub fn inverse_sample<E: CdfEvaluator + ?Sized>(eval: &E, u: f64) -> Result<f64> {
    check_level(u)?;
    let (lo, hi) = eval.bracket();
    widen_and_locate(eval, u, lo, hi)
}

fn widen_and_locate<E: CdfEvaluator + ?Sized>(eval: &E, u: f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut last = None;
    for _ in 0..=MAX_WIDENINGS {
        match inverse_sample_in(eval, u, lo, hi) {
            Err(e @ Error::Bracket { .. }) => {
                let mid = 0.5 * (lo + hi);
                let half = hi - lo;
                lo = mid - half;
                hi = mid + half;
                last = Some(e);
            }
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Inverse sampler that shares one coarse scan across many levels.
pub struct InverseSampler<'a, E: CdfEvaluator + ?Sized> {
    eval: &'a E,
    scan: Scan,
}

impl<'a, E: CdfEvaluator + ?Sized> InverseSampler<'a, E> {
    pub fn new(eval: &'a E) -> Self {
        let (lo, hi) = eval.bracket();
        InverseSampler {
            eval,
            scan: Scan::new(eval, lo, hi, SHARED_SCAN_POINTS),
        }
    }

    pub fn sample(&self, u: f64) -> Result<f64> {
        check_level(u)?;
        match self.scan.locate(self.eval, u) {
            Err(Error::Bracket { .. }) => {
                widen_and_locate(self.eval, u, self.scan.x[0], self.scan.x[SHARED_SCAN_POINTS])
            }
            other => other,
        }
    }
}

/// `count` draws: uniforms are generated in order from the seeded stream and
/// then inverted in parallel.
pub fn sample_batch<E: CdfEvaluator + ?Sized>(eval: &E, count: usize, seed: u64) -> Result<Vec<f64>> {
    sample_batch_stream(eval, count, seed, 0)
}

/// [`sample_batch`] drawing its uniforms from stream `stream` of `seed`.
pub fn sample_batch_stream<E: CdfEvaluator + ?Sized>(
    eval: &E,
    count: usize,
    seed: u64,
    stream: u64,
) -> Result<Vec<f64>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let mut rng = stream_rng(seed, stream);
    let uniforms: Vec<f64> = (0..count).map(|_| open_unit(&mut rng)).collect();
    let sampler = InverseSampler::new(eval);
    uniforms.par_iter().map(|&u| sampler.sample(u)).collect()
}

struct Scan {
    x: Vec<f64>,
    f: Vec<f64>,
    /// Running maximum of `f`, so the first crossing is a binary search.
    peak: Vec<f64>,
}

impl Scan {
    fn new<E: CdfEvaluator + ?Sized>(eval: &E, lo: f64, hi: f64, cells: usize) -> Self {
        let x = linspace(lo, hi, cells + 1);
        let f: Vec<f64> = x.iter().map(|&y| eval.cdf(y)).collect();
        let peak = f
            .iter()
            .scan(f64::NEG_INFINITY, |m, &v| {
                *m = m.max(v);
                Some(*m)
            })
            .collect();
        Scan { x, f, peak }
    }

    fn locate<E: CdfEvaluator + ?Sized>(&self, eval: &E, u: f64) -> Result<f64> {
        let last = self.x.len() - 1;
        let (lo, hi) = (self.x[0], self.x[last]);
        let (f_lo, f_hi) = (self.f[0], self.f[last]);
        match self.peak.partition_point(|&v| v < u) {
            k if k > 0 && k <= last => {
                let (mut a, mut b) = (self.x[k - 1], self.x[k]);
                let (mut fa, mut fb) = (self.f[k - 1], self.f[k]);
                if let Some(g) = self.guess(k, u) {
                    // Probe half a tolerance either side of the guess.
                    for x in [g - 0.45 * INVERSE_TOL, g + 0.45 * INVERSE_TOL] {
                        if x <= a || x >= b {
                            break;
                        }
                        let y = eval.cdf(x);
                        if y >= u {
                            b = x;
                            fb = y;
                            break;
                        }
                        a = x;
                        fa = y;
                    }
                }
                refine(eval, u, a, b, fa, fb)
            }
            _ => Err(Error::Bracket { lo, hi, u, f_lo, f_hi }),
        }
    }

    /// Inverse cubic interpolation through the four nodes around cell `k`,
    /// when they are strictly increasing.
    fn guess(&self, k: usize, u: f64) -> Option<f64> {
        if k < 2 || k + 1 >= self.x.len() {
            return None;
        }
        let f = &self.f[k - 2..=k + 1];
        let x = &self.x[k - 2..=k + 1];
        if !f.windows(2).all(|w| w[0] < w[1]) {
            return None;
        }
        let mut g = 0.0;
        for i in 0..4 {
            let mut l = x[i];
            for j in 0..4 {
                if j != i {
                    l *= (u - f[j]) / (f[i] - f[j]);
                }
            }
            g += l;
        }
        (g > self.x[k - 1] && g < self.x[k]).then_some(g)
    }
}

/// Shrinks `[a, b]` with `F(a) < u ≤ F(b)` to width [`INVERSE_TOL`] and
/// returns the right end. False position, kept at least half a tolerance
/// from either end so the last step closes the bracket; falls back to
/// bisection after two steps that fail to halve the bracket.
fn refine<E: CdfEvaluator + ?Sized>(eval: &E, u: f64, mut a: f64, mut b: f64, fa: f64, fb: f64) -> Result<f64> {
    let tol = INVERSE_TOL;
    let (mut ya, mut yb) = (fa - u, fb - u);
    let mut slow = 0;
    while b - a > tol {
        let width = b - a;
        let mut x = if slow >= 2 || yb == ya {
            0.5 * (a + b)
        } else {
            (yb * a - ya * b) / (yb - ya)
        };
        x = x.clamp(a + 0.5 * tol, b - 0.5 * tol);
        let y = eval.cdf(x) - u;
        if y.is_nan() {
            return Err(Error::Numeric(format!("distribution function is NaN at {x}")));
        }
        if y >= 0.0 {
            b = x;
            yb = y;
        } else {
            a = x;
            ya = y;
        }
        if b - a > 0.5 * width {
            slow += 1;
        } else {
            slow = 0;
        }
    }
    Ok(b)
}

pub(crate) fn min_max(data: &[f64]) -> (f64, f64) {
    data.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}
