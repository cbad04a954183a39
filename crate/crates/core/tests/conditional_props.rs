mod common;

use common::*;
use fourier_est::curve::linspace;
use fourier_est::distribution::cdf_estimate;
use fourier_est::{
    conditional_cdf, markov_impute, sequential_generate, ConditioningSpec, Dataset, EstimatorParams,
};
use proptest::prelude::*;

fn table() -> impl Strategy<Value = Dataset> {
    (1usize..30).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), n)
            .prop_map(|rows| Dataset::from_rows(&rows).unwrap())
    })
}

fn sinc_weight(r: f64, d: f64) -> f64 {
    if d == 0.0 {
        r
    } else {
        (r * d).sin() / d
    }
}

proptest! {
    #[test]
    fn no_conditioning_is_the_marginal_estimate(data in table(), target in 0usize..3, r1 in 0.5f64..20.0) {
        let grid = linspace(-3.0, 3.0, 41);
        let params = EstimatorParams { r: r1, ..EstimatorParams::conditional(r1, 6.0) };
        let got = conditional_cdf(&data, &ConditioningSpec::unconditional(target), &grid, &params).unwrap();
        let want = cdf_estimate(&data.column(target).unwrap(), &grid, &params).unwrap();
        let same = got.values.iter().zip(&want.values).all(|(a, b)| a.to_bits() == b.to_bits());
        prop_assert!(same);
    }

    #[test]
    fn conditioning_order_does_not_matter(data in table(), a in -0.5f64..0.5, b in -0.5f64..0.5) {
        let grid = linspace(-2.0, 2.0, 21);
        let params = EstimatorParams::conditional(3.0, 2.0);
        let one = conditional_cdf(&data, &ConditioningSpec::new(0, vec![1, 2], vec![a, b]), &grid, &params);
        let two = conditional_cdf(&data, &ConditioningSpec::new(0, vec![2, 1], vec![b, a]), &grid, &params);
        match (one, two) {
            (Ok(one), Ok(two)) => {
                for (x, y) in one.values.iter().zip(&two.values) {
                    prop_assert!((x - y).abs() < 1e-12);
                }
            }
            (Err(e1), Err(e2)) => prop_assert_eq!(e1.category(), e2.category()),
            (one, two) => prop_assert!(false, "orders disagree: {:?} / {:?}", one.is_ok(), two.is_ok()),
        }
    }

    #[test]
    fn matches_weighted_oracle(data in table(), y in -1.0f64..1.0, a in -0.5f64..0.5, b in -0.5f64..0.5) {
        let (r1, r2) = (2.0, 1.5);
        let spec = ConditioningSpec::new(1, vec![0, 2], vec![a, b]);
        let weights: Vec<f64> = (0..data.rows())
            .map(|i| sinc_weight(r2, a - data.get(i, 0)) * sinc_weight(r2, b - data.get(i, 2)))
            .collect();
        // Near-cancelling weights amplify rounding in both routes.
        prop_assume!(weights.iter().sum::<f64>().abs() > 1e-3);
        let got = conditional_cdf(&data, &spec, &[y], &EstimatorParams::conditional(r1, r2)).unwrap();
        let want = weighted_cdf_oracle(&data.column(1).unwrap(), &weights, r1, y);
        prop_assert!((got.values[0] - want).abs() < 1e-10, "{} vs {}", got.values[0], want);
    }
}

#[test]
fn bivariate_generation_keeps_correlation() {
    let corrs: Vec<f64> = (0..20)
        .map(|seed| {
            let data = markov_rows(1000, 2, 0.6, seed + 40);
            let params = EstimatorParams::conditional(10.0, 6.0).seed(seed);
            let g = sequential_generate(&data, 500, &params).unwrap();
            correlation(&g.column(0).unwrap(), &g.column(1).unwrap())
        })
        .collect();
    assert!(corrs.iter().all(|c| (c - 0.6).abs() <= 0.2), "{corrs:?}");
}

#[test]
fn imputation_never_sees_the_gap() {
    let series = ar1(400, 0.6, 2);
    let params = EstimatorParams::conditional(10.0, 6.0).seed(4);
    let m = 150;
    let base = markov_impute(&series, m, &params, 200).unwrap();
    let mut changed = series.clone();
    changed[m] = 25.0;
    assert_eq!(markov_impute(&changed, m, &params, 200).unwrap(), base);
    let mut far = series.clone();
    far[m + 3] += 1.0;
    assert_ne!(markov_impute(&far, m, &params, 200).unwrap(), base);
}
