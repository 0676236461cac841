use contact_lab::contact_diffeo::{
    contact_field_from_g, dphi0_inverse, ContactChart, GeneratingFunction, PhiValue, PHI_DERIVATIVE_STEP,
};
use contact_lab::contact_model::{FrameVectorField, JChoice, Metric};
use contact_lab::flowmap::{eta_coefficients, lie_derivative, GeodesicConfig};
use contact_lab::hodge::{Hodge, SolverChoice};
use contact_lab::rumin::pi_q;
use contact_lab::spectral_grid::{random_band_limited, CoordOneForm, Grid, ScalarField};
use once_cell::sync::Lazy;

static CHART: Lazy<ContactChart> = Lazy::new(|| {
    let hodge = Hodge::new(Grid::new(16).unwrap(), SolverChoice::default()).unwrap();
    ContactChart::new(hodge, Metric::new(JChoice::Default), GeodesicConfig::default())
});

fn sine(amplitude: f64) -> ScalarField {
    ScalarField::from_fn(CHART.grid(), |p| amplitude * p[0].sin())
}

fn relative(a: &FrameVectorField, b: &FrameVectorField) -> f64 {
    a.minus(b).l2_norm() / b.l2_norm()
}

#[test]
fn contact_field_of_a_sine() {
    let g = CHART.grid();
    let x = contact_field_from_g(&sine(0.05));
    assert!(x.t.max_abs_diff(&sine(0.05)) < 1e-15);
    assert!(x.e1.sup_norm() < 1e-14);
    let e2 = ScalarField::from_fn(g, |p| 0.05 * p[2].sin() * p[0].cos());
    assert!(x.e2.max_abs_diff(&e2) < 1e-14);
    let eta = CoordOneForm::from_fn(g, eta_coefficients);
    assert!(pi_q(&lie_derivative(&x.to_coords(), &eta)).l2_norm() < 1e-10);
}

#[test]
fn generated_fields_pass_the_characterization() {
    for seed in 0..3 {
        let g = random_band_limited(CHART.grid(), seed, 3, 0.05).unwrap();
        let r = CHART.check_contact_field(&contact_field_from_g(&g)).unwrap();
        assert!(r.worst() < 1e-6, "{r:?}");
    }
}

#[test]
fn horizontal_frame_vector_is_flagged() {
    let g = CHART.grid();
    let x = FrameVectorField::new(ScalarField::zeros(g), ScalarField::constant(g, 1.0), ScalarField::zeros(g));
    assert!(CHART.check_contact_field(&x).unwrap().worst() > 1e-3);
}

#[test]
fn inverse_linearization_of_a_pure_function() {
    let g = random_band_limited(CHART.grid(), 4, 3, 0.1).unwrap();
    let x = dphi0_inverse(&PhiValue::from_g(g.clone())).unwrap();
    assert!(relative(&x, &contact_field_from_g(&g)) < 1e-12);
}

#[test]
fn linearization_round_trip() {
    let grid = CHART.grid();
    for seed in [1u64, 2, 3] {
        let [t, a, b] = [0, 1, 2].map(|i| random_band_limited(grid, 10 * seed + i, 2, 0.05).unwrap());
        let y = FrameVectorField::new(t, a, b);
        let v = CHART.phi_derivative_at_zero(&y, PHI_DERIVATIVE_STEP).unwrap();
        let back = dphi0_inverse(&v).unwrap();
        assert!(relative(&back, &y) < 1e-5, "seed {seed}: {}", relative(&back, &y));
        let again = CHART.phi_derivative_at_zero(&back, PHI_DERIVATIVE_STEP).unwrap();
        assert!(again.minus(&v).l2_norm() < 1e-5 * v.l2_norm());
    }
}

#[test]
fn phi_reassembles_the_defect() {
    let x = contact_field_from_g(&sine(0.05));
    let (value, beta) = CHART.phi(&x).unwrap();
    let d_alpha = contact_lab::rumin::d_q0(&contact_lab::rumin::RuminForm::scalar(value.alpha.clone())).unwrap();
    let rebuilt = d_alpha.plus(&value.omega);
    assert!(rebuilt.minus(&beta).l2_norm() < 1e-5 * beta.l2_norm());
}

#[test]
fn solved_sine_is_contact() {
    let g = GeneratingFunction::new(sine(0.05)).unwrap();
    let (x, report) = CHART.solve_psi(&g, 1e-9, 20).unwrap();
    assert!(report.converged);
    assert!(report.final_defect <= 1e-9);
    assert!(report.iterations <= 20);
    for w in report.history.windows(2) {
        assert!(w[1].defect <= 0.5 * w[0].defect);
    }
    let (value, _) = CHART.phi(&x).unwrap();
    assert!(value.alpha.l2_norm() < 1e-6);
    assert!(value.omega.l2_norm() < 1e-6);
}

#[test]
fn constant_function_is_already_contact() {
    let g = GeneratingFunction::new(ScalarField::constant(CHART.grid(), 0.05)).unwrap();
    let (x, report) = CHART.solve_psi(&g, 1e-10, 20).unwrap();
    assert!(report.iterations <= 3);
    assert!(relative(&x, &contact_field_from_g(g.field())) < 1e-8);
}

#[test]
fn zero_function_gives_zero_field() {
    let g = GeneratingFunction::new(ScalarField::zeros(CHART.grid())).unwrap();
    let (x, report) = CHART.solve_psi(&g, 1e-10, 20).unwrap();
    assert_eq!(report.iterations, 0);
    assert!(x.sup_norm() == 0.0);
}

#[test]
fn large_generating_functions_are_rejected() {
    assert!(GeneratingFunction::new(sine(0.5)).is_err());
}

#[test]
fn starved_iteration_reports_failure() {
    let g = GeneratingFunction::new(sine(0.05)).unwrap();
    assert!(CHART.solve_psi(&g, 1e-12, 1).is_err());
}
