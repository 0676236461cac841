use std::f64::consts::PI;

use contact_lab::hodge::{Hodge, SolverChoice};
use contact_lab::rumin::{d_q0, laplacian, random_form, RuminForm};
use contact_lab::spectral_grid::{random_band_limited, Grid};
use once_cell::sync::Lazy;

static WORKING: Lazy<Hodge> = Lazy::new(|| Hodge::new(Grid::new(16).unwrap(), SolverChoice::default()).unwrap());
static DENSE: Lazy<Hodge> = Lazy::new(|| Hodge::new(Grid::new(8).unwrap(), SolverChoice::Dense).unwrap());

fn relative(a: &RuminForm, b: &RuminForm) -> f64 {
    a.minus(b).l2_norm() / b.l2_norm()
}

#[test]
fn harmonic_dimensions() {
    let dims: Vec<usize> = (0..4u8).map(|k| DENSE.setup(k).harmonic_basis().len()).collect();
    assert_eq!(dims, [1, 3, 3, 1]);
    let cg: Vec<usize> = (0..4u8).map(|k| WORKING.setup(k).harmonic_basis().len()).collect();
    assert_eq!(cg, [1, 3, 3, 1]);
}

#[test]
fn harmonic_functions_are_constant() {
    let basis = DENSE.setup(0).harmonic_basis();
    let c = (2.0 * PI).powf(-1.5);
    let f = &basis[0].comps()[0];
    assert!(f.values().iter().all(|v| (v.abs() - c).abs() < 1e-12));
}

#[test]
fn harmonic_part_of_a_function_is_its_mean() {
    let g = WORKING.grid();
    let f = random_band_limited(g, 1, 3, 1.0).unwrap().map(|v| v + 0.7);
    let h = WORKING.h_q(&RuminForm::scalar(f.clone()));
    assert!(h.comps()[0].map(|v| v - f.mean()).sup_norm() < 1e-12);
}

#[test]
fn green_operator_inverts_the_laplacian() {
    let g = WORKING.grid();
    for k in 0..4u8 {
        let w = random_form(g, k, 10 + k as u64, 3, 1.0).unwrap();
        let gw = WORKING.g_q(&w).unwrap();
        let left = laplacian(&gw).plus(&WORKING.h_q(&w));
        assert!(relative(&left, &w) < 1e-6, "degree {k}");
        let right = WORKING.g_q(&laplacian(&w)).unwrap();
        assert!(relative(&right, &w.minus(&WORKING.h_q(&w))) < 1e-6, "degree {k}");
    }
}

#[test]
fn exact_forms_are_detected() {
    let g = WORKING.grid();
    let f = random_band_limited(g, 5, 3, 1.0).unwrap();
    let f = f.map(|v| v - f.mean());
    let w = d_q0(&RuminForm::scalar(f)).unwrap();
    let parts = WORKING.decompose(&w).unwrap();
    assert!(parts.harmonic.l2_norm() < 1e-7 * w.l2_norm());
    assert!(parts.coexact.l2_norm() < 1e-6 * w.l2_norm());
    assert!(relative(&parts.reconstruction(), &w) < 1e-6);
}

#[test]
fn harmonic_projection_kills_exact_forms() {
    let g = WORKING.grid();
    let f = random_form(g, 0, 6, 3, 1.0).unwrap();
    let df = d_q0(&f).unwrap();
    assert!(WORKING.h_q(&df).l2_norm() < 1e-8 * df.l2_norm());
}

#[test]
fn dense_and_iterative_solvers_agree() {
    let cg = Hodge::new(DENSE.grid(), SolverChoice::default()).unwrap();
    for k in 0..4u8 {
        for i in 0..10 {
            let w = random_form(DENSE.grid(), k, 100 * k as u64 + i, 3, 1.0).unwrap();
            let a = DENSE.g_q(&w).unwrap();
            assert!(relative(&cg.g_q(&w).unwrap(), &a) < 1e-7, "degree {k} sample {i}");
        }
    }
}

#[test]
fn dense_assembly_is_limited_to_small_grids() {
    assert!(Hodge::new(Grid::new(16).unwrap(), SolverChoice::Dense).is_err());
}
