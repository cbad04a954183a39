mod common;

use common::*;
use fourier_est::curve::linspace;
use fourier_est::distribution::{cdf_estimate, inverse_sample, sample_batch, SincCdf};
use fourier_est::isotonic::pava;
use fourier_est::{isotonic_projection, CurveEstimate, CyclicKernel, EstimatorParams};
use proptest::prelude::*;

fn curve_of(values: Vec<f64>) -> CurveEstimate {
    let grid = linspace(0.0, 1.0, values.len());
    CurveEstimate {
        grid,
        values,
        clamped: true,
        isotonic: false,
        params: fourier_est::CurveParams::Distribution(EstimatorParams::default()),
    }
}

fn adversarial_data() -> impl Strategy<Value = Vec<f64>> {
    prop_oneof![
        prop::collection::vec(-1e3f64..1e3, 1..40),
        (-5.0f64..5.0, 1usize..30).prop_map(|(c, n)| vec![c; n]),
        prop::collection::vec(prop::sample::select(vec![-1.0, 0.0, 0.0, 2.5]), 1..40),
        prop::collection::vec(-1e-9f64..1e-9, 2..20),
    ]
}

proptest! {
    #[test]
    fn estimates_stay_in_unit_interval(data in adversarial_data(), r in 0.1f64..60.0, lo in -50.0f64..0.0) {
        let grid = linspace(lo, lo + 60.0, 97);
        let curve = cdf_estimate(&data, &grid, &EstimatorParams::with_r(r)).unwrap();
        prop_assert!(curve.values.iter().all(|v| (0.0..=1.0).contains(v)));
        let projected = isotonic_projection(&curve);
        prop_assert!(projected.values.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(projected.values.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn estimate_matches_series_oracle(
        data in prop::collection::vec(-1.0f64..1.0, 1..25),
        r in 0.5f64..2.0,
        y in -2.0f64..2.0,
    ) {
        let curve = cdf_estimate(&data, &[y], &EstimatorParams::with_r(r)).unwrap();
        let want = weighted_cdf_oracle(&data, &vec![1.0; data.len()], r, y);
        prop_assert!((curve.values[0] - want).abs() < 1e-12, "{} vs {}", curve.values[0], want);
    }

    #[test]
    fn projection_matches_brute_force(values in prop::collection::vec(0.0f64..1.0, 1..=12)) {
        let got = isotonic_projection(&curve_of(values.clone())).values;
        let want = isotonic_brute_force(&values);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent(values in prop::collection::vec(-0.5f64..1.5, 1..60)) {
        let once = isotonic_projection(&curve_of(values));
        let twice = isotonic_projection(&once);
        prop_assert_eq!(once.values, twice.values);
    }

    #[test]
    fn projection_preserves_order(
        pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..0.5), 1..40),
    ) {
        let low: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let high: Vec<f64> = pairs.iter().map(|p| p.0 + p.1).collect();
        let (a, b) = (pava(&low), pava(&high));
        prop_assert!(a.iter().zip(&b).all(|(x, y)| *x <= *y + 1e-12));
    }

    #[test]
    fn inverse_of_isotonic_curve_hits_level(seed in 0u64..1000, u in 0.02f64..0.98) {
        let data = normals(60, seed);
        let grid = linspace(-4.0, 4.0, 401);
        let curve = isotonic_projection(&cdf_estimate(&data, &grid, &EstimatorParams::with_r(5.0)).unwrap());
        let step = curve.values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        let y = inverse_sample(&curve, u).unwrap();
        let f = fourier_est::CdfEvaluator::cdf(&curve, y);
        prop_assert!(f >= u - 1e-6 && f <= u + step, "F = {} at u = {}, step {}", f, u, step);
    }
}

#[test]
fn error_shrinks_with_sample_size() {
    let grid = linspace(-4.0, 4.0, 161);
    let params = EstimatorParams::with_r(5.0);
    let sup = |n: usize| {
        let errors = (0..20)
            .map(|seed| {
                let curve = cdf_estimate(&normals(n, seed + 100), &grid, &params).unwrap();
                grid.iter().zip(&curve.values).map(|(&y, &f)| (f - phi(y)).abs()).fold(0.0, f64::max)
            })
            .collect();
        median(errors)
    };
    let (small, large) = (sup(100), sup(1000));
    assert!(large < small, "n=1000: {large}, n=100: {small}");
}

#[test]
fn draws_follow_the_estimate() {
    let data = normals(200, 7);
    let eval = SincCdf::new(&data, 5.0, CyclicKernel::sin()).unwrap();
    let draws = sample_batch(&eval, 20_000, 3).unwrap();
    let ks = ks_distance(&draws, |y| fourier_est::CdfEvaluator::cdf(&eval, y));
    // Sampling error of a 20000-point empirical distribution.
    assert!(ks < 0.015, "{ks}");
}

#[test]
fn sampling_ignores_thread_count() {
    let data = normals(80, 11);
    let eval = SincCdf::new(&data, 5.0, CyclicKernel::sin()).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| sample_batch(&eval, 3000, 5).unwrap())
    };
    assert_eq!(run(1), run(4));
}
