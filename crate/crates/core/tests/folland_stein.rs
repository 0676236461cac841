use contact_lab::contact_model::ContactModel;
use contact_lab::folland_stein::{
    algebra_constant_report, da_derivative, division_ratio, fs_inner, fs_norm, sobolev_ratio_report, sup_norm,
    word_derivative, DAIndex, WordIndex,
};
use contact_lab::spectral_grid::{random_band_limited, Grid, ScalarField};
use proptest::prelude::*;

fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

#[test]
fn word_commutator_is_minus_reeb() {
    let g = grid(16);
    let f = random_band_limited(g, 9, 3, 1.0).unwrap();
    let a = word_derivative(&f, &WordIndex::parse("12").unwrap());
    let b = word_derivative(&f, &WordIndex::parse("21").unwrap());
    let reeb = ContactModel::standard(g).apply_reeb(&f);
    assert!((&(&a - &b) + &reeb).sup_norm() < 1e-10);
}

#[test]
fn reeb_derivatives_count_twice() {
    assert_eq!(DAIndex::new(1, 1, 1).contact_order(), 4);
    assert_eq!(DAIndex::new(0, 0, 3).contact_order(), 6);
}

#[test]
fn double_first_derivative_of_sin_y() {
    // e₁ = sin z ∂x − cos z ∂y, so e₁e₁ sin y = −cos² z sin y.
    let g = grid(16);
    let f = ScalarField::from_fn(g, |p| p[1].sin());
    let (d, order) = da_derivative(&f, DAIndex::new(2, 0, 0));
    let want = ScalarField::from_fn(g, |p| -p[2].cos().powi(2) * p[1].sin());
    assert_eq!(order, 2);
    assert!(d.max_abs_diff(&want) < 1e-10);
}

#[test]
fn norms_do_not_depend_on_resolution() {
    let a = random_band_limited(grid(16), 4, 4, 1.0).unwrap();
    let b = random_band_limited(grid(32), 4, 4, 1.0).unwrap();
    let (na, nb) = (fs_norm(&a, 4).unwrap(), fs_norm(&b, 4).unwrap());
    assert!((na - nb).abs() < 1e-9 * na);
    assert!((sup_norm(&a) - sup_norm(&b)).abs() < 1e-12);
}

#[test]
fn sobolev_ratio_is_finite_and_resolution_free() {
    let coarse = sobolev_ratio_report(grid(16), 100, 50, 3).unwrap();
    assert!(coarse.is_finite());
    let fine = sobolev_ratio_report(grid(32), 100, 5, 3).unwrap();
    for (a, b) in coarse.rows.iter().zip(&fine.rows) {
        assert!((a.ratio - b.ratio).abs() < 1e-9 * a.ratio);
    }
}

#[test]
fn algebra_constant_is_stable_under_refinement() {
    let coarse = algebra_constant_report(grid(16), 200, 50, 3, 4, 2).unwrap();
    let fine = algebra_constant_report(grid(32), 200, 50, 3, 4, 2).unwrap();
    assert!(coarse.is_finite() && fine.is_finite());
    assert!(coarse.drift(&fine) < 0.2);
}

#[test]
fn orders_above_the_cap_are_rejected() {
    let f = ScalarField::zeros(grid(8));
    assert!(fs_norm(&f, 7).is_err());
}

#[test]
fn division_rejects_fields_near_zero() {
    let g = grid(8);
    let f = ScalarField::from_fn(g, |p| p[0].sin());
    assert!(division_ratio(&f, 2).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn norms_increase_with_order(seed in 0u64..1000) {
        let f = random_band_limited(grid(16), seed, 3, 1.0).unwrap();
        let norms: Vec<f64> = (0..=4).map(|s| fs_norm(&f, s).unwrap()).collect();
        prop_assert!((norms[0] - f.l2_norm()).abs() < 1e-12 * norms[0]);
        for w in norms.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn inner_product_is_symmetric_and_polarizes(s1 in 0u64..1000, s2 in 0u64..1000, s in 0usize..4) {
        let g = grid(16);
        let f = random_band_limited(g, s1, 3, 1.0).unwrap();
        let h = random_band_limited(g, s2, 3, 1.0).unwrap();
        let fh = fs_inner(&f, &h, s).unwrap();
        prop_assert!((fh - fs_inner(&h, &f, s).unwrap()).abs() < 1e-12 * (1.0 + fh.abs()));
        let sum = fs_norm(&(&f + &h), s).unwrap().powi(2);
        let diff = fs_norm(&(&f - &h), s).unwrap().powi(2);
        prop_assert!(((sum - diff) / 4.0 - fh).abs() < 1e-10 * (1.0 + sum));
    }

    #[test]
    fn norm_is_homogeneous(seed in 0u64..1000, c in -3.0f64..3.0) {
        let f = random_band_limited(grid(16), seed, 3, 1.0).unwrap();
        let lhs = fs_norm(&f.scaled(c), 3).unwrap();
        prop_assert!((lhs - c.abs() * fs_norm(&f, 3).unwrap()).abs() < 1e-12 * (1.0 + lhs));
    }
}
