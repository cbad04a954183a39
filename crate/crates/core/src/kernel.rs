//! Sine integral, sinc kernel and the Haar triangle-wave alternative.
//!
//! Every estimator in the crate is built from two primitives per kernel:
//! the conditioning weight `φ(Rz)/z` and the smoothed step
//! `∫₀ᶻ φ(t)/t dt`. For the sine kernel these are `sin(Rz)/z` and `Si(z)`;
//! for the Haar kernel `φ` is the 2π-periodic triangle wave with slope
//! `±2/π`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Result};
use crate::quadrature::Quadrature;

/// Which cyclic function drives the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    #[default]
    Sin,
    Haar,
}

impl std::str::FromStr for KernelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sin" | "sinc" => Ok(KernelKind::Sin),
            "haar" => Ok(KernelKind::Haar),
            other => Err(format!("unknown kernel '{other}' (expected sin or haar)")),
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelKind::Sin => "sin",
            KernelKind::Haar => "haar",
        })
    }
}

/// A cyclic kernel together with the constant `∫ φ(t)/t dt` over the real
/// line that normalizes it (π for sine).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "KernelKind", into = "KernelKind")]
pub struct CyclicKernel {
    kind: KernelKind,
    normalizer: f64,
}

impl From<KernelKind> for CyclicKernel {
    fn from(kind: KernelKind) -> Self {
        CyclicKernel::new(kind)
    }
}

impl From<CyclicKernel> for KernelKind {
    fn from(k: CyclicKernel) -> Self {
        k.kind
    }
}

impl Default for CyclicKernel {
    fn default() -> Self {
        CyclicKernel::sin()
    }
}

impl CyclicKernel {
    pub fn new(kind: KernelKind) -> Self {
        match kind {
            KernelKind::Sin => CyclicKernel::sin(),
            KernelKind::Haar => CyclicKernel::haar(),
        }
    }

    pub fn sin() -> Self {
        CyclicKernel {
            kind: KernelKind::Sin,
            normalizer: PI,
        }
    }

    /// The Haar kernel is experimental: its normalizer has no closed form in
    /// this code path and is obtained by quadrature on first use.
    pub fn haar() -> Self {
        CyclicKernel {
            kind: KernelKind::Haar,
            normalizer: haar_normalizer(),
        }
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// `φ(Rz)/z` without argument validation.
    #[inline]
    pub(crate) fn weight(&self, r: f64, z: f64) -> f64 {
        match self.kind {
            KernelKind::Sin => sinc_unchecked(r, z),
            KernelKind::Haar => haar_kernel_unchecked(r, z),
        }
    }

    /// `∫₀ᶻ φ(t)/t dt`; tends to `normalizer / 2` as `z → ∞`.
    #[inline]
    pub(crate) fn primitive(&self, z: f64) -> f64 {
        match self.kind {
            KernelKind::Sin => si_raw(z),
            KernelKind::Haar => haar_si_raw(z),
        }
    }
}

// ---------------------------------------------------------------------------
// Sine integral

/// `Si(z) = ∫₀ᶻ sin(t)/t dt`, absolute error below 1e-13 on the real line.
pub fn si(z: f64) -> Result<f64> {
    ensure_finite("z", z)?;
    Ok(si_raw(z))
}

#[inline]
pub(crate) fn si_raw(z: f64) -> f64 {
    let a = z.abs();
    let v = if a <= 4.0 {
        a * tables().small.eval(a)
    } else {
        let (f, g) = aux_fg(a);
        let (s, c) = a.sin_cos();
        FRAC_PI_2 - f * c - g * s
    };
    if z < 0.0 {
        -v
    } else {
        v
    }
}

fn si_series(a: f64) -> f64 {
    let a2 = a * a;
    let mut term = a;
    let mut sum = a;
    let mut k = 0u32;
    loop {
        let n = f64::from(2 * k + 2);
        term *= -a2 / (n * (n + 1.0));
        let contrib = term / (n + 1.0);
        sum += contrib;
        k += 1;
        if contrib.abs() <= 1e-17 * sum.abs() || k > 40 {
            return sum;
        }
    }
}

/// Auxiliary functions `f(z) = ∫₀^∞ sin t/(t+z) dt` and
/// `g(z) = ∫₀^∞ cos t/(t+z) dt` from the continued fraction of
/// `e^{iz} E₁(iz) = g(z) − i f(z)`. Valid for `z > 2`.
pub(crate) fn aux_fg_continued_fraction(z: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, z);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..500 {
        let a = -f64::from((i - 1) * (i - 1));
        b += Complex64::new(2.0, 0.0);
        d = (d * a + b).inv();
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    (-h.im, h.re)
}

/// Piecewise Chebyshev interpolant on equal-width pieces of `[lo, hi]`.
struct PiecewiseCheb {
    lo: f64,
    width: f64,
    pieces: Vec<Vec<f64>>,
}

impl PiecewiseCheb {
    fn fit(lo: f64, hi: f64, count: usize, degree: usize, f: impl Fn(f64) -> f64) -> Self {
        let width = (hi - lo) / count as f64;
        let pieces = (0..count)
            .map(|p| {
                let a = lo + p as f64 * width;
                let values: Vec<f64> = (0..=degree)
                    .map(|k| {
                        let x = (PI * (k as f64 + 0.5) / (degree + 1) as f64).cos();
                        f(a + 0.5 * width * (x + 1.0))
                    })
                    .collect();
                chebyshev_coefficients(&values)
            })
            .collect();
        PiecewiseCheb { lo, width, pieces }
    }

    /// Evaluates `self` and `other`, which share their pieces, in one pass.
    #[inline]
    fn eval_pair(&self, other: &PiecewiseCheb, x: f64) -> (f64, f64) {
        let u = (x - self.lo) / self.width;
        let p = (u as usize).min(self.pieces.len() - 1);
        let y = 2.0 * (u - p as f64) - 1.0;
        let (ca, cb) = (&self.pieces[p], &other.pieces[p]);
        let (mut a1, mut a2, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0);
        for k in (1..ca.len()).rev() {
            let a0 = 2.0 * y * a1 - a2 + ca[k];
            let b0 = 2.0 * y * b1 - b2 + cb[k];
            a2 = a1;
            a1 = a0;
            b2 = b1;
            b1 = b0;
        }
        (y * a1 - a2 + 0.5 * ca[0], y * b1 - b2 + 0.5 * cb[0])
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        let u = (x - self.lo) / self.width;
        let p = (u as usize).min(self.pieces.len() - 1);
        clenshaw(&self.pieces[p], 2.0 * (u - p as f64) - 1.0)
    }
}

struct SiTables {
    /// `Si(z)/z` on `[0, 4]`.
    small: PiecewiseCheb,
    /// `z·f(z)` and `z²·g(z)` in `t = 1/z` on `[0, 1/4]`.
    f: PiecewiseCheb,
    g: PiecewiseCheb,
}

/// Fitted once: the power series for small arguments, the continued
/// fraction for the auxiliary functions.
fn tables() -> &'static SiTables {
    static TABLES: OnceLock<SiTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let aux = |t: f64| {
            if t <= 0.0 {
                (1.0, 1.0)
            } else {
                let z = 1.0 / t;
                let (f, g) = aux_fg_continued_fraction(z);
                (f * z, g * z * z)
            }
        };
        SiTables {
            small: PiecewiseCheb::fit(0.0, 4.0, 16, 13, |z| if z == 0.0 { 1.0 } else { si_series(z) / z }),
            f: PiecewiseCheb::fit(0.0, 0.25, 64, 13, |t| aux(t).0),
            g: PiecewiseCheb::fit(0.0, 0.25, 64, 13, |t| aux(t).1),
        }
    })
}

fn chebyshev_coefficients(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    (0..n)
        .map(|j| {
            let s: f64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                .sum();
            2.0 * s / n as f64
        })
        .collect()
}

#[inline]
fn clenshaw(coef: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coef.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + 0.5 * coef[0]
}

#[inline]
fn aux_fg(z: f64) -> (f64, f64) {
    let t = 1.0 / z;
    let tables = tables();
    let (f, g) = tables.f.eval_pair(&tables.g, t);
    (f * t, g * t * t)
}

// ---------------------------------------------------------------------------
// Sinc kernel

/// `K_R(z) = sin(Rz)/z`, equal to `R` at the origin.
pub fn sinc_kernel(r: f64, z: f64) -> Result<f64> {
    ensure_positive("R", r)?;
    ensure_finite("z", z)?;
    Ok(sinc_unchecked(r, z))
}

#[inline]
pub(crate) fn sinc_unchecked(r: f64, z: f64) -> f64 {
    if z.abs() < 1e-8 / r {
        let rz = r * z;
        r * (1.0 - rz * rz / 6.0)
    } else {
        (r * z).sin() / z
    }
}

// ---------------------------------------------------------------------------
// Haar triangle wave

/// 2π-periodic triangle wave: `(2/π)(x − 2mπ)` on the rising branch
/// `((2m − ½)π, (2m + ½)π)` and `(2/π)((2m + 1)π − x)` on the falling one.
pub fn haar_phi(x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    Ok(haar_phi_raw(x))
}

#[inline]
fn haar_phi_raw(x: f64) -> f64 {
    let t = (x + FRAC_PI_2).rem_euclid(2.0 * PI);
    if t <= PI {
        (2.0 / PI) * (t - FRAC_PI_2)
    } else {
        (2.0 / PI) * (1.5 * PI - t)
    }
}

#[inline]
fn haar_kernel_unchecked(r: f64, z: f64) -> f64 {
    let rz = r * z;
    if rz.abs() <= FRAC_PI_2 {
        // φ is exactly linear through the origin here.
        (2.0 / PI) * r
    } else {
        haar_phi_raw(rz) / z
    }
}

/// `φ(Rz)/z` for the chosen kernel.
pub fn cyclic_kernel(kernel: CyclicKernel, r: f64, z: f64) -> Result<f64> {
    ensure_positive("R", r)?;
    ensure_finite("z", z)?;
    Ok(kernel.weight(r, z))
}

/// Number of unit-width (in π) pieces tabulated for the Haar primitive.
const HAAR_PIECES: usize = 4096;

/// Exact integral of `φ(t)/t` over the complete piece
/// `[(k − ½)π, (k + ½)π]`, `k ≥ 1`: `(−1)^k [2 − 2k ln((2k+1)/(2k−1))]`,
/// summed as a series in `x = 1/(2k)` to avoid cancellation.
fn haar_piece_integral(k: usize) -> f64 {
    let x = 1.0 / (2.0 * k as f64);
    let x2 = x * x;
    let mut pow = x2;
    let mut sum = 0.0;
    let mut m = 1.0;
    loop {
        let term = pow / (2.0 * m + 1.0);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        pow *= x2;
        m += 1.0;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    -2.0 * sign * sum
}

/// Cumulative `∫₀^{(k+½)π} φ(t)/t dt` for `k = 0..=HAAR_PIECES`.
fn haar_cumulative() -> &'static [f64] {
    static CUM: OnceLock<Vec<f64>> = OnceLock::new();
    CUM.get_or_init(|| {
        let mut cum = Vec::with_capacity(HAAR_PIECES + 1);
        // First piece: φ(t)/t = 2/π on [0, π/2].
        let mut acc = 1.0;
        cum.push(acc);
        for k in 1..=HAAR_PIECES {
            acc += haar_piece_integral(k);
            cum.push(acc);
        }
        cum
    })
}

/// Zero-mean iterated antiderivatives of φ, used for the `∫_z^∞ φ(t)/t dt`
/// asymptotic expansion.
fn haar_antiderivatives(t: f64) -> [f64; 4] {
    let m = (t / PI).round();
    let u = t - m * PI;
    let sign = if (m as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let u2 = u * u;
    let p1 = u2 / PI - PI / 4.0;
    let p2 = u * u2 / (3.0 * PI) - PI * u / 4.0;
    let p3 = u2 * u2 / (12.0 * PI) - PI * u2 / 8.0 + 5.0 * PI.powi(3) / 192.0;
    let p4 = u2 * u2 * u / (60.0 * PI) - PI * u2 * u / 24.0 + 5.0 * PI.powi(3) * u / 192.0;
    [sign * p1, sign * p2, sign * p3, sign * p4]
}

/// `∫_z^∞ φ(t)/t dt` by four rounds of integration by parts; the remainder
/// is below `5/z⁴`.
fn haar_tail(z: f64) -> f64 {
    let [p1, p2, p3, p4] = haar_antiderivatives(z);
    let w = 1.0 / z;
    -w * (p1 + w * (p2 + w * (2.0 * p3 + w * 6.0 * p4)))
}

/// `∫₀ᶻ φ(t)/t dt`, the Haar analogue of `Si`.
pub fn haar_si(z: f64) -> Result<f64> {
    ensure_finite("z", z)?;
    Ok(haar_si_raw(z))
}

fn haar_si_raw(z: f64) -> f64 {
    let a = z.abs();
    let v = if a <= FRAC_PI_2 {
        (2.0 / PI) * a
    } else {
        let k = (a / PI + 0.5).floor() as usize;
        if k > HAAR_PIECES {
            haar_si_limit() - haar_tail(a)
        } else {
            let cum = haar_cumulative();
            let start = (k as f64 - 0.5) * PI;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let coef_log = -sign * 2.0 * k as f64;
            let coef_lin = sign * 2.0 / PI;
            cum[k - 1] + coef_log * ((a - start) / start).ln_1p() + coef_lin * (a - start)
        }
    };
    if z < 0.0 {
        -v
    } else {
        v
    }
}

/// `lim_{z→∞} ∫₀ᶻ φ(t)/t dt` from the closed-form pieces plus the tail
/// expansion.
fn haar_si_limit() -> f64 {
    static LIMIT: OnceLock<f64> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        let cum = haar_cumulative();
        cum[HAAR_PIECES] + haar_tail((HAAR_PIECES as f64 + 0.5) * PI)
    })
}

/// `∫_{−∞}^{∞} φ(t)/t dt` by Gauss–Kronrod quadrature over the linear
/// pieces of φ plus the analytic tail.
fn haar_normalizer() -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    *NORM.get_or_init(|| {
        let q = Quadrature {
            rel_tol: 0.0,
            abs_tol: 1e-12,
            max_intervals: 4 * (HAAR_PIECES + 2),
        };
        let mut breaks = Vec::with_capacity(HAAR_PIECES + 2);
        breaks.push(0.0);
        for k in 0..=HAAR_PIECES {
            breaks.push((k as f64 + 0.5) * PI);
        }
        let body = q
            .integrate_pieces(
                |t| {
                    if t <= FRAC_PI_2 {
                        2.0 / PI
                    } else {
                        haar_phi_raw(t) / t
                    }
                },
                &breaks,
            )
            .map(|i| i.value)
            .unwrap_or_else(|e| {
                log::warn!("Haar normalizer quadrature: {e}; using piecewise sum");
                haar_cumulative()[HAAR_PIECES]
            });
        2.0 * (body + haar_tail((HAAR_PIECES as f64 + 0.5) * PI))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

    fn si_by_quadrature(z: f64) -> f64 {
        let q = Quadrature {
            rel_tol: 1e-14,
            abs_tol: 1e-15,
            max_intervals: 100_000,
        };
        q.integrate(|t: f64| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, z)
            .unwrap()
            .value
    }

    #[test]
    fn si_at_zero_and_oddness() {
        assert_eq!(si(0.0).unwrap(), 0.0);
        assert_eq!(si(-3.7).unwrap(), -si(3.7).unwrap());
    }

    #[test]
    fn si_at_pi_matches_quadrature() {
        let oracle = si_by_quadrature(PI);
        assert_abs_diff_eq!(oracle, 1.851_937_051_982_466, epsilon = 1e-12);
        assert_abs_diff_eq!(si(PI).unwrap(), oracle, epsilon = 1e-12);
    }

    #[test]
    fn si_tends_to_half_pi() {
        assert_abs_diff_eq!(si(1e6).unwrap(), FRAC_PI_2, epsilon = 1e-5);
        assert_abs_diff_eq!(si(1e12).unwrap(), FRAC_PI_2, epsilon = 1e-11);
    }

    #[test]
    fn si_rejects_non_finite() {
        assert!(si(f64::NAN).is_err());
        assert!(si(f64::INFINITY).is_err());
    }

    #[test]
    fn si_continuous_at_branch_switch() {
        let below = si_raw(4.0);
        let above = si_raw(4.0 + 1e-12);
        assert_abs_diff_eq!(below, above, epsilon = 1e-11);
    }

    #[test]
    fn chebyshev_tables_track_continued_fraction() {
        let mut z = 4.0;
        while z < 2000.0 {
            let (f0, g0) = aux_fg_continued_fraction(z);
            let (f1, g1) = aux_fg(z);
            assert!((f0 - f1).abs() < 1e-14, "f at {z}: {f0} vs {f1}");
            assert!((g0 - g1).abs() < 1e-14, "g at {z}: {g0} vs {g1}");
            z *= 1.0137;
        }
    }

    #[test]
    fn sinc_kernel_examples() {
        assert_eq!(sinc_kernel(5.0, 0.0).unwrap(), 5.0);
        assert_abs_diff_eq!(sinc_kernel(5.0, PI / 5.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_eq!(sinc_kernel(5.0, -0.3).unwrap(), sinc_kernel(5.0, 0.3).unwrap());
        assert!(sinc_kernel(0.0, 0.1).is_err());
        assert!(sinc_kernel(-1.0, 0.1).is_err());
    }

    #[test]
    fn sinc_kernel_near_origin_is_smooth() {
        let r: f64 = 7.0;
        let z = 0.9e-8 / r;
        let direct = (r * z).sin() / z;
        assert_abs_diff_eq!(sinc_unchecked(r, z), direct, epsilon = 1e-12);
    }

    #[test]
    fn haar_phi_examples() {
        assert_eq!(haar_phi(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(haar_phi(FRAC_PI_2).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(haar_phi(PI).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(haar_phi(1.5 * PI).unwrap(), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            haar_phi(1.1 + 2.0 * PI).unwrap(),
            haar_phi(1.1).unwrap(),
            epsilon = 1e-14
        );
        assert!(haar_phi(f64::NAN).is_err());
    }

    #[test]
    fn haar_phi_integrates_to_zero_per_period() {
        let q = Quadrature {
            rel_tol: 0.0,
            abs_tol: 1e-13,
            max_intervals: 1000,
        };
        for start in [0.0, 0.3, -2.0, 17.0] {
            let mut breaks = vec![start];
            let mut k = ((start - FRAC_PI_2) / PI).floor() + 1.0;
            while FRAC_PI_2 + k * PI < start + 2.0 * PI {
                breaks.push(FRAC_PI_2 + k * PI);
                k += 1.0;
            }
            breaks.push(start + 2.0 * PI);
            let v = q.integrate_pieces(haar_phi_raw, &breaks).unwrap().value;
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn cyclic_kernel_dispatch() {
        let sin = CyclicKernel::sin();
        assert_eq!(
            cyclic_kernel(sin, 5.0, 0.2).unwrap(),
            sinc_kernel(5.0, 0.2).unwrap()
        );
        let haar = CyclicKernel::haar();
        assert_abs_diff_eq!(cyclic_kernel(haar, 5.0, 0.0).unwrap(), 10.0 / PI, epsilon = 1e-15);
        assert!(cyclic_kernel(haar, 0.0, 1.0).is_err());
    }

    #[test]
    fn haar_kernel_has_zero_mean_per_period() {
        // Over one period in z away from the origin, φ(Rz) integrates to 0.
        let r = 3.0;
        let q = Quadrature {
            rel_tol: 0.0,
            abs_tol: 1e-13,
            max_intervals: 1000,
        };
        for k in [1.0, 2.0, 5.0] {
            let lo = 2.0 * PI * k / r;
            let hi = 2.0 * PI * (k + 1.0) / r;
            let breaks: Vec<f64> = (0..=8).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect();
            let v = q
                .integrate_pieces(|z| haar_kernel_unchecked(r, z) * z, &breaks)
                .unwrap()
                .value;
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn haar_normalizer_matches_catalan_closed_form() {
        let closed = 8.0 * CATALAN / PI;
        assert_abs_diff_eq!(CyclicKernel::haar().normalizer(), closed, epsilon = 1e-12);
        assert_abs_diff_eq!(2.0 * haar_si_limit(), closed, epsilon = 1e-12);
        assert_eq!(CyclicKernel::sin().normalizer(), PI);
    }

    #[test]
    fn haar_si_matches_quadrature() {
        let q = Quadrature {
            rel_tol: 1e-14,
            abs_tol: 1e-15,
            max_intervals: 100_000,
        };
        for z in [0.3, 1.2, 2.0, 4.9, 10.0, 33.3, 101.0] {
            let mut breaks = vec![0.0];
            let mut k = 0.0;
            while (k + 0.5) * PI < z {
                breaks.push((k + 0.5) * PI);
                k += 1.0;
            }
            breaks.push(z);
            let oracle = q
                .integrate_pieces(
                    |t| if t <= FRAC_PI_2 { 2.0 / PI } else { haar_phi_raw(t) / t },
                    &breaks,
                )
                .unwrap()
                .value;
            assert_abs_diff_eq!(haar_si(z).unwrap(), oracle, epsilon = 1e-12);
            assert_abs_diff_eq!(haar_si(-z).unwrap(), -oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn haar_si_table_meets_tail_expansion() {
        let edge = (HAAR_PIECES as f64 + 0.5) * PI;
        let inside = haar_si_raw(edge - 1e-9);
        let outside = haar_si_limit() - haar_tail(edge + 1e-9);
        assert_abs_diff_eq!(inside, outside, epsilon = 5e-13);
        // far field converges to the limit
        assert_abs_diff_eq!(haar_si_raw(1e9), haar_si_limit(), epsilon = 1e-9);
    }
}
