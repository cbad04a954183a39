//! C ABI over the `fourier-est` estimators.
//!
//! Every fallible function returns an [`FeStatus`]; on failure a message is
//! available from [`fe_last_error`] on the same thread. Objects are opaque
//! handles released with their `_free` function. Arrays are passed as a
//! pointer plus length; multi-column data is row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use fourier_est::distribution::{inverse_sample, sample_batch, CdfEvaluator, SincCdf};
use fourier_est::{
    conditional::conditional_evaluator, markov_impute, mixing_cdf, quantile_estimate, sequential_generate,
    ConditioningSpec, CyclicKernel, Dataset, Error, ErrorCategory, EstimatorParams, KernelKind, MixingParams,
    QuantileRequest,
};

/// Result of every fallible call. The non-zero codes below `FE_NULL_POINTER`
/// match the command-line exit statuses.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeStatus {
    FeOk = 0,
    FeInput = 1,
    FeParameter = 2,
    FeDegenerate = 3,
    FeNumeric = 4,
    FeIo = 5,
    FeNullPointer = 6,
    FePanic = 7,
}

impl From<ErrorCategory> for FeStatus {
    fn from(c: ErrorCategory) -> Self {
        match c {
            ErrorCategory::Input => FeStatus::FeInput,
            ErrorCategory::Parameter => FeStatus::FeParameter,
            ErrorCategory::Degenerate => FeStatus::FeDegenerate,
            ErrorCategory::Numeric => FeStatus::FeNumeric,
            ErrorCategory::Io => FeStatus::FeIo,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeKernel {
    FeKernelSin = 0,
    FeKernelHaar = 1,
}

impl From<FeKernel> for KernelKind {
    fn from(k: FeKernel) -> Self {
        match k {
            FeKernel::FeKernelSin => KernelKind::Sin,
            FeKernel::FeKernelHaar => KernelKind::Haar,
        }
    }
}

/// Parameters of the mixing-distribution estimator.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct FeMixingParams {
    pub h: f64,
    pub r: f64,
    pub r1: f64,
    pub r2: f64,
    /// Monte Carlo size.
    pub n: usize,
    pub seed: u64,
    pub stratified: bool,
    pub isotonic: bool,
}

impl From<FeMixingParams> for MixingParams {
    fn from(p: FeMixingParams) -> Self {
        MixingParams {
            h: p.h,
            r: p.r,
            r1: p.r1,
            r2: p.r2,
            n: p.n,
            seed: p.seed,
            stratified: p.stratified,
            isotonic: p.isotonic,
        }
    }
}

/// A smoothed (possibly conditional) distribution function.
pub struct FeDistribution {
    inner: SincCdf,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FeStatus::FeOk,
        Ok(Err(Failure::Lib(e))) => {
            let status = e.category().into();
            set_error(e.to_string());
            status
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer passed for '{name}'"));
            FeStatus::FeNullPointer
        }
        Err(_) => {
            set_error("internal panic".to_string());
            FeStatus::FePanic
        }
    }
}

unsafe fn input<'a>(p: *const f64, len: usize, name: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(p: *mut f64, len: usize, name: &'static str) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn dataset(data: *const f64, rows: usize, cols: usize) -> Result<Dataset, Failure> {
    let values = input(data, rows.saturating_mul(cols), "data")?;
    Ok(Dataset::new(rows, cols, values.to_vec())?)
}

fn write<T>(out: *mut T, value: T, name: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    unsafe { out.write(value) };
    Ok(())
}

fn handle<'a>(h: *const FeDistribution) -> Result<&'a FeDistribution, Failure> {
    unsafe { h.as_ref() }.ok_or(Failure::Null("handle"))
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fe_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fe_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Sine integral.
#[no_mangle]
pub extern "C" fn fe_si(x: f64, out: *mut f64) -> FeStatus {
    guard(|| write(out, fourier_est::si(x)?, "out"))
}

/// Smoothed distribution function of `n` observations with smoothing `r`.
///
/// # Safety
/// `data` must point to `n` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fe_distribution_new(
    data: *const f64,
    n: usize,
    r: f64,
    kernel: FeKernel,
    out: *mut *mut FeDistribution,
) -> FeStatus {
    guard(|| {
        let values = input(data, n, "data")?;
        let inner = SincCdf::new(values, r, CyclicKernel::new(kernel.into()))?;
        write(out, Box::into_raw(Box::new(FeDistribution { inner })), "out")
    })
}

/// Conditional distribution of column `target` given columns `given_cols`
/// at `given_point`, from a `rows × cols` row-major table.
///
/// # Safety
/// `data` must hold `rows * cols` doubles, `given_cols` and `given_point`
/// `n_given` entries each; `out` must be writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fe_conditional_new(
    data: *const f64,
    rows: usize,
    cols: usize,
    target: usize,
    given_cols: *const usize,
    given_point: *const f64,
    n_given: usize,
    r1: f64,
    r2: f64,
    kernel: FeKernel,
    out: *mut *mut FeDistribution,
) -> FeStatus {
    guard(|| {
        let data = dataset(data, rows, cols)?;
        let given = if n_given == 0 {
            Vec::new()
        } else if given_cols.is_null() {
            return Err(Failure::Null("given_cols"));
        } else {
            slice::from_raw_parts(given_cols, n_given).to_vec()
        };
        let point = input(given_point, n_given, "given_point")?.to_vec();
        let spec = ConditioningSpec::new(target, given, point);
        let params = EstimatorParams::conditional(r1, r2).kernel(kernel.into());
        let inner = conditional_evaluator(&data, &spec, &params)?;
        write(out, Box::into_raw(Box::new(FeDistribution { inner })), "out")
    })
}

/// Releases a handle; NULL is ignored.
///
/// # Safety
/// `h` must come from a constructor in this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fe_distribution_free(h: *mut FeDistribution) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Clamped estimate at `y`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fe_distribution_cdf(h: *const FeDistribution, y: f64, out: *mut f64) -> FeStatus {
    guard(|| {
        let h = handle(h)?;
        if !y.is_finite() {
            return Err(Error::Domain(format!("y must be finite, got {y}")).into());
        }
        write(out, h.inner.cdf(y), "out")
    })
}

/// Clamped estimates at `n` points.
///
/// # Safety
/// `grid` must hold `n` doubles and `out` have room for `n`.
#[no_mangle]
pub unsafe extern "C" fn fe_distribution_evaluate(
    h: *const FeDistribution,
    grid: *const f64,
    n: usize,
    out: *mut f64,
) -> FeStatus {
    guard(|| {
        let h = handle(h)?;
        let grid = input(grid, n, "grid")?;
        if let Some(y) = grid.iter().find(|y| !y.is_finite()) {
            return Err(Error::Domain(format!("grid value {y} is not finite")).into());
        }
        output(out, n, "out")?.copy_from_slice(&h.inner.evaluate(grid));
        Ok(())
    })
}

/// Smallest `y` with `F(y) ≥ u`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fe_distribution_inverse(h: *const FeDistribution, u: f64, out: *mut f64) -> FeStatus {
    guard(|| {
        let h = handle(h)?;
        write(out, inverse_sample(&h.inner, u)?, "out")
    })
}

/// `count` seeded draws.
///
/// # Safety
/// `out` must have room for `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn fe_distribution_sample(
    h: *const FeDistribution,
    count: usize,
    seed: u64,
    out: *mut f64,
) -> FeStatus {
    guard(|| {
        let h = handle(h)?;
        let out = output(out, count, "out")?;
        out.copy_from_slice(&sample_batch(&h.inner, count, seed)?);
        Ok(())
    })
}

/// `count` synthetic rows drawn from the chain of conditionals of a
/// `rows × cols` table, written row-major to `out` (`count * cols` doubles).
///
/// # Safety
/// Buffers must have the stated sizes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fe_generate(
    data: *const f64,
    rows: usize,
    cols: usize,
    count: usize,
    r1: f64,
    r2: f64,
    kernel: FeKernel,
    seed: u64,
    out: *mut f64,
) -> FeStatus {
    guard(|| {
        let data = dataset(data, rows, cols)?;
        let params = EstimatorParams::conditional(r1, r2).kernel(kernel.into()).seed(seed);
        let generated = sequential_generate(&data, count, &params)?;
        output(out, count * cols, "out")?.copy_from_slice(generated.values());
        Ok(())
    })
}

/// `count` draws for entry `m` of a series given its two neighbours.
///
/// # Safety
/// `series` must hold `n` doubles and `out` have room for `count`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fe_markov_impute(
    series: *const f64,
    n: usize,
    m: usize,
    r1: f64,
    r2: f64,
    kernel: FeKernel,
    seed: u64,
    count: usize,
    out: *mut f64,
) -> FeStatus {
    guard(|| {
        let series = input(series, n, "series")?;
        let params = EstimatorParams::conditional(r1, r2).kernel(kernel.into()).seed(seed);
        let draws = markov_impute(series, m, &params, count)?;
        output(out, count, "out")?.copy_from_slice(&draws);
        Ok(())
    })
}

/// Mixing distribution `G(θ|x0)` on `n_theta` points from `n` rows of
/// `(x, y)` pairs.
///
/// # Safety
/// `xy` must hold `2 * n` doubles, `theta` `n_theta`, and `out` `n_theta`.
#[no_mangle]
pub unsafe extern "C" fn fe_mixing_cdf(
    xy: *const f64,
    n: usize,
    x0: f64,
    theta: *const f64,
    n_theta: usize,
    params: *const FeMixingParams,
    out: *mut f64,
) -> FeStatus {
    guard(|| {
        let data = dataset(xy, n, 2)?;
        let params: MixingParams = (*params.as_ref().ok_or(Failure::Null("params"))?).into();
        let theta = input(theta, n_theta, "theta")?;
        let curve = mixing_cdf(&data, x0, theta, &params)?;
        output(out, n_theta, "out")?.copy_from_slice(&curve.values);
        Ok(())
    })
}

/// Conditional quantiles of `y` at `n_u` levels and `n_x` covariate
/// values, one `R` for every smoothing step. `out[k * n_x + j]` holds level
/// `k` at covariate `j`.
///
/// # Safety
/// `xy` must hold `2 * n` doubles, `u` `n_u`, `x` `n_x`, `out` `n_u * n_x`.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn fe_quantile(
    xy: *const f64,
    n: usize,
    u: *const f64,
    n_u: usize,
    x: *const f64,
    n_x: usize,
    r: f64,
    mc_samples: usize,
    seed: u64,
    out: *mut f64,
) -> FeStatus {
    guard(|| {
        let data = dataset(xy, n, 2)?;
        let req = QuantileRequest {
            mc_samples,
            seed,
            ..QuantileRequest::new(input(u, n_u, "u")?.to_vec(), input(x, n_x, "x")?.to_vec(), r)
        };
        let matrix = quantile_estimate(&data, &req)?;
        let out = output(out, n_u * n_x, "out")?;
        for (k, row) in matrix.values.iter().enumerate() {
            out[k * n_x..(k + 1) * n_x].copy_from_slice(row);
        }
        Ok(())
    })
}
