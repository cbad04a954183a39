mod common;

use common::*;
use fourier_est::conditional::conditional_evaluator;
use fourier_est::curve::linspace;
use fourier_est::distribution::inverse_sample;
use fourier_est::mixing::MixingEstimator;
use fourier_est::{mixing_cdf, CdfEvaluator, ConditioningSpec, Dataset, ErrorCategory, MixingParams};
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};

/// Every `θ` is `theta0`; responses are `θ + h ε`.
fn point_mass(n: usize, theta0: f64, h: f64, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut r);
            let e: f64 = StandardNormal.sample(&mut r);
            vec![x, theta0 + h * e]
        })
        .collect();
    Dataset::from_rows(&rows).unwrap()
}

fn small_params(h: f64, n: usize, seed: u64) -> MixingParams {
    MixingParams {
        h,
        n,
        seed,
        ..Default::default()
    }
}

#[test]
fn fixed_seed_reproduces_the_curve() {
    let data = mixture_design(400, 0.1, 3);
    let grid = linspace(-3.0, 4.0, 71);
    let p = small_params(0.1, 3000, 8);
    let a = mixing_cdf(&data, 1.0, &grid, &p).unwrap();
    let b = mixing_cdf(&data, 1.0, &grid, &p).unwrap();
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    assert!(a.values.windows(2).all(|w| w[0] <= w[1]));
    assert!(a.values.iter().all(|v| (0.0..=1.0).contains(v)));
    let c = mixing_cdf(&data, 1.0, &grid, &MixingParams { seed: 9, ..p }).unwrap();
    assert_ne!(a.values, c.values);
}

#[test]
fn zero_bandwidth_converges_to_the_conditional() {
    let grid = linspace(-3.0, 4.0, 141);
    let ks_at = |n: usize| {
        let values = (0..5)
            .map(|seed| {
                let data = mixture_design(500, 0.1, seed + 20);
                let p = small_params(0.0, n, seed);
                let g = mixing_cdf(&data, 1.0, &grid, &MixingParams { isotonic: false, ..p }).unwrap();
                let spec = ConditioningSpec::new(1, vec![0], vec![1.0]);
                let pc = conditional_evaluator(&data, &spec, &p.conditional()).unwrap();
                grid.iter().zip(&g.values).map(|(&t, &v)| (v - pc.cdf(t)).abs()).fold(0.0, f64::max)
            })
            .collect();
        median(values)
    };
    let ks: Vec<f64> = [1_000, 10_000, 100_000].into_iter().map(ks_at).collect();
    assert!(ks[0] > ks[1] && ks[1] > ks[2], "{ks:?}");
    assert!(ks[2] <= 0.05, "{ks:?}");
}

#[test]
fn point_mass_truth_gives_a_step_at_the_atom() {
    let h = 0.1;
    for seed in 0..5 {
        let data = point_mass(1000, 0.0, h, seed);
        let grid = linspace(-2.0, 2.0, 401);
        let g = mixing_cdf(&data, 0.0, &grid, &small_params(h, 10_000, seed)).unwrap();
        let median = inverse_sample(&g, 0.5).unwrap();
        assert!(median.abs() <= 0.1, "seed {seed}: median {median}");
    }
}

#[test]
fn bandwidth_guard() {
    let data = point_mass(100, 0.0, 0.1, 1);
    let refused = MixingEstimator::new(&data, 0.0, &MixingParams { h: 1.3, ..small_params(0.0, 1000, 0) });
    assert_eq!(refused.unwrap_err().category(), ErrorCategory::Parameter);
    let noisy = MixingParams { h: 0.7, ..small_params(0.0, 1000, 0) };
    assert!(noisy.variance_warning());
    assert!(!small_params(0.5, 1000, 0).variance_warning());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn estimates_are_finite_within_the_guard(r in 1.0f64..20.0, rh in 0.0f64..12.0, seed in 0u64..100, theta in -5.0f64..5.0) {
        let data = point_mass(80, 0.3, 0.2, seed);
        let p = MixingParams { r, r1: 10.0, r2: 10.0, h: rh / r, n: 1000, seed, ..Default::default() };
        let est = MixingEstimator::new(&data, 0.0, &p).unwrap();
        prop_assert!(est.raw(theta).is_finite());
        prop_assert!((0.0..=1.0).contains(&est.cdf(theta)));
    }
}
