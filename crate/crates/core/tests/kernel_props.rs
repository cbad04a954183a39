mod common;

use std::f64::consts::PI;

use common::si_series;
use fourier_est::kernel::{haar_phi, si, sinc_kernel};
use proptest::prelude::*;

#[test]
fn si_is_increasing_on_zero_to_pi() {
    let mut prev = si(0.0).unwrap();
    for k in 1..=2000 {
        let v = si(PI * k as f64 / 2000.0).unwrap();
        assert!(v > prev, "Si not increasing at step {k}");
        prev = v;
    }
}

#[test]
fn si_matches_power_series() {
    for k in -600..=600 {
        let x = k as f64 / 100.0;
        let (got, want) = (si(x).unwrap(), si_series(x));
        assert!((got - want).abs() < 1e-13, "Si({x}) = {got}, series {want}");
    }
}

#[test]
fn haar_phi_has_zero_mean_over_a_period() {
    let n = 200_000;
    let h = 2.0 * PI / n as f64;
    // Midpoint rule is exact enough for a piecewise-linear integrand with
    // kinks on the grid.
    let total: f64 = (0..n).map(|i| haar_phi(-PI + (i as f64 + 0.5) * h).unwrap()).sum::<f64>() * h;
    assert!(total.abs() < 1e-10, "{total}");
}

proptest! {
    #[test]
    fn si_is_bounded_and_odd(x in -1e4f64..1e4) {
        let v = si(x).unwrap();
        prop_assert!(v.abs() <= PI / 2.0 + 0.3);
        prop_assert_eq!(si(-x).unwrap(), -v);
    }

    #[test]
    fn sinc_kernel_scales(r in 0.01f64..100.0, z in -50.0f64..50.0) {
        let lhs = sinc_kernel(r, z).unwrap();
        let rhs = r * sinc_kernel(1.0, r * z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn haar_phi_is_periodic_and_bounded(x in -100.0f64..100.0) {
        let v = haar_phi(x).unwrap();
        prop_assert!(v.abs() <= 1.0 + 1e-12);
        prop_assert!((haar_phi(x + 2.0 * PI).unwrap() - v).abs() < 1e-9);
    }
}
