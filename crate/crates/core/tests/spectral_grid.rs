use std::f64::consts::PI;

use contact_lab::spectral_grid::{random_band_limited, Axis, Grid, ScalarField};
use proptest::prelude::*;

fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

#[test]
fn derivative_of_sine_is_cosine() {
    let g = grid(16);
    let f = ScalarField::from_fn(g, |p| p[0].sin());
    let want = ScalarField::from_fn(g, |p| p[0].cos());
    assert!(f.partial_derivative(Axis::X).max_abs_diff(&want) < 1e-12);
}

#[test]
fn product_of_sines_follows_double_angle() {
    let g = grid(16);
    let f = ScalarField::from_fn(g, |p| p[0].sin());
    let want = ScalarField::from_fn(g, |p| 0.5 * (1.0 - (2.0 * p[0]).cos()));
    assert!(f.multiply(&f).max_abs_diff(&want) < 1e-12);
}

#[test]
fn band_four_product_is_exact() {
    // Dense convolution of the two spectra against the dealiased product.
    let g = grid(32);
    let f = random_band_limited(g, 1, 4, 1.0).unwrap();
    let h = random_band_limited(g, 2, 4, 1.0).unwrap();
    let product = f.multiply(&h);
    let nodal = f.hadamard(&h);
    assert!(product.max_abs_diff(&nodal) < 1e-12);
    assert!(product.spectral_tail(8) < 1e-12);
}

#[test]
fn integral_of_sine_squared() {
    let g = grid(16);
    let f = ScalarField::from_fn(g, |p| p[0].sin().powi(2));
    let want = (2.0 * PI).powi(3) / 2.0;
    assert!((f.integrate() - want).abs() < 1e-10);
}

#[test]
fn off_grid_evaluation() {
    let g = grid(16);
    let f = ScalarField::from_fn(g, |p| p[0].sin());
    let v = f.eval_offgrid(&[[PI / 7.0, 0.0, 0.0]]);
    assert!((v[0] - (PI / 7.0).sin()).abs() < 1e-12);
}

#[test]
fn random_fields_do_not_depend_on_resolution() {
    let (coarse, fine) = (grid(16), grid(32));
    let a = random_band_limited(coarse, 11, 3, 1.0).unwrap();
    let b = random_band_limited(fine, 11, 3, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            for k in 0..16 {
                let va = a.values()[coarse.index(i, j, k)];
                let vb = b.values()[fine.index(2 * i, 2 * j, 2 * k)];
                worst = worst.max((va - vb).abs());
            }
        }
    }
    assert!(worst < 1e-12, "worst {worst}");
}

#[test]
fn band_above_nyquist_is_rejected() {
    assert!(random_band_limited(grid(8), 0, 4, 1.0).is_err());
    assert!(Grid::new(12).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_fields_respect_amplitude(seed in 0u64..10_000, band in 1usize..4, amp in 0.1f64..3.0) {
        let f = random_band_limited(grid(8), seed, band, amp).unwrap();
        prop_assert!(f.sup_norm() <= amp * (1.0 + 1e-12));
        prop_assert!(f.spectral_tail(band) < 1e-12 * amp);
    }

    #[test]
    fn product_is_commutative_and_bilinear(s1 in 0u64..1000, s2 in 0u64..1000, c in -2.0f64..2.0) {
        let g = grid(16);
        let f = random_band_limited(g, s1, 3, 1.0).unwrap();
        let h = random_band_limited(g, s2, 3, 1.0).unwrap();
        prop_assert!(f.multiply(&h).max_abs_diff(&h.multiply(&f)) < 1e-13);
        let lhs = f.scaled(c).multiply(&h);
        let rhs = f.multiply(&h).scaled(c);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn derivatives_integrate_to_zero(seed in 0u64..1000) {
        let g = grid(16);
        let f = random_band_limited(g, seed, 4, 1.0).unwrap();
        for axis in Axis::ALL {
            prop_assert!(f.partial_derivative(axis).integrate().abs() < 1e-11);
        }
    }

    #[test]
    fn integration_by_parts(s1 in 0u64..1000, s2 in 0u64..1000) {
        let g = grid(16);
        let f = random_band_limited(g, s1, 4, 1.0).unwrap();
        let h = random_band_limited(g, s2, 4, 1.0).unwrap();
        for axis in Axis::ALL {
            let lhs = f.partial_derivative(axis).inner(&h);
            let rhs = -f.inner(&h.partial_derivative(axis));
            prop_assert!((lhs - rhs).abs() < 1e-10);
        }
    }
}
