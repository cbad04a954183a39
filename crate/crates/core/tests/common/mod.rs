#![allow(dead_code)]

use fourier_est::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::distribution::{ContinuousCDF, Normal};

/// Test data come from a different generator family than the library's
/// sampling streams.
pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xA5A5)
}

pub fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| StandardNormal.sample(&mut r)).collect()
}

pub fn phi(x: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}

pub fn normal_cdf(x: f64, mean: f64, sd: f64) -> f64 {
    Normal::new(mean, sd).unwrap().cdf(x)
}

/// Stationary Gaussian AR(1) path with unit marginal variance.
pub fn ar1(n: usize, rho: f64, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    let s = (1.0 - rho * rho).sqrt();
    let mut y = Vec::with_capacity(n);
    let mut prev: f64 = StandardNormal.sample(&mut r);
    y.push(prev);
    for _ in 1..n {
        let e: f64 = StandardNormal.sample(&mut r);
        prev = rho * prev + s * e;
        y.push(prev);
    }
    y
}

/// `n` independent rows of a `d`-step Markov chain started at N(0, 1).
pub fn markov_rows(n: usize, d: usize, rho: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let s = (1.0 - rho * rho).sqrt();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let mut row = Vec::with_capacity(d);
            let mut prev: f64 = StandardNormal.sample(&mut r);
            row.push(prev);
            for _ in 1..d {
                let e: f64 = StandardNormal.sample(&mut r);
                prev = rho * prev + s * e;
                row.push(prev);
            }
            row
        })
        .collect();
    Dataset::from_rows(&rows).unwrap()
}

/// `x ~ N(0, 1)`, `θ | x ~ 0.4 N(0, (0.1x)²) + 0.6 N(x, 1)`, `y = θ + h ε`.
pub fn mixture_design(n: usize, h: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut r);
            let z: f64 = StandardNormal.sample(&mut r);
            let theta = if r.random::<f64>() < 0.4 { 0.1 * x.abs() * z } else { x + z };
            let e: f64 = StandardNormal.sample(&mut r);
            vec![x, theta + h * e]
        })
        .collect();
    Dataset::from_rows(&rows).unwrap()
}

pub fn mixture_truth(theta: f64, x: f64) -> f64 {
    0.4 * normal_cdf(theta, 0.0, 0.1 * x.abs()) + 0.6 * normal_cdf(theta, x, 1.0)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
}

pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

/// Isotonic regression by the min–max formula
/// `xᵢ = max_{j ≤ i} min_{k ≥ i} mean(v[j..=k])`.
pub fn isotonic_brute_force(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            (0..=i)
                .map(|j| {
                    (i..n)
                        .map(|k| v[j..=k].iter().sum::<f64>() / (k - j + 1) as f64)
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Sine integral from its power series; good to about 1e-13 for |x| ≤ 6.
pub fn si_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = 0.0;
    for k in 0..60 {
        let odd = (2 * k + 1) as f64;
        sum += term / odd;
        term *= -x * x / ((odd + 1.0) * (odd + 2.0));
    }
    sum
}

/// `F̂(y) = ½ + Σ wᵢ Si(R(y − Yᵢ)) / (π Σ wᵢ)` with the series sine integral.
pub fn weighted_cdf_oracle(data: &[f64], weights: &[f64], r: f64, y: f64) -> f64 {
    let total: f64 = weights.iter().sum();
    let s: f64 = data.iter().zip(weights).map(|(&d, &w)| w * si_series(r * (y - d))).sum();
    (0.5 + s / (std::f64::consts::PI * total)).clamp(0.0, 1.0)
}
