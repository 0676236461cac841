use contact_lab::contact_model::{
    flat, sharp, ContactModel, Direction, FrameForm, FrameVectorField, JChoice, LambdaProfile, Metric, QuarterTurn,
};
use contact_lab::spectral_grid::{random_band_limited, CoordOneForm, Grid, ScalarField};
use proptest::prelude::*;

fn model() -> ContactModel {
    ContactModel::standard(Grid::new(16).unwrap())
}

fn anisotropic() -> JChoice {
    JChoice::Anisotropic(LambdaProfile::ExpCos { eps: 0.3 })
}

#[test]
fn horizontal_frame_on_sine() {
    let m = model();
    let g = m.grid();
    let f = ScalarField::from_fn(g, |p| p[0].sin());
    let want = ScalarField::from_fn(g, |p| p[2].sin() * p[0].cos());
    assert!(m.apply_horizontal(&f, Direction::E1).max_abs_diff(&want) < 1e-12);
    let z_only = ScalarField::from_fn(g, |p| (2.0 * p[2]).cos());
    assert!(m.apply_horizontal(&z_only, Direction::E1).sup_norm() < 1e-12);
}

#[test]
fn reeb_field_on_sine() {
    let m = model();
    let g = m.grid();
    let f = ScalarField::from_fn(g, |p| p[0].sin());
    let want = ScalarField::from_fn(g, |p| p[2].cos() * p[0].cos());
    assert!(m.apply_reeb(&f).max_abs_diff(&want) < 1e-12);
}

#[test]
fn frame_bracket_is_minus_reeb() {
    let m = model();
    let f = random_band_limited(m.grid(), 3, 3, 1.0).unwrap();
    let e12 = m.apply_horizontal(&m.apply_horizontal(&f, Direction::E2), Direction::E1);
    let e21 = m.apply_horizontal(&m.apply_horizontal(&f, Direction::E1), Direction::E2);
    let bracket = &e12 - &e21;
    assert!((&m.apply_reeb(&f) + &bracket).sup_norm() < 1e-10);
}

#[test]
fn structure_holds_for_both_complex_structures() {
    let g = Grid::new(16).unwrap();
    for j in [JChoice::Default, anisotropic()] {
        let report = ContactModel::new(g, j).unwrap().verify_structure();
        assert!(report.worst() < 1e-12, "{j:?}: {report:?}");
    }
}

#[test]
fn flat_of_first_frame_vector() {
    let g = Grid::new(8).unwrap();
    let x = FrameVectorField::new(ScalarField::zeros(g), ScalarField::constant(g, 1.0), ScalarField::zeros(g));
    let phi = flat(&x);
    assert!(phi.comps()[0].sup_norm() < 1e-15);
    assert!((phi.comps()[1].values()[0] - 1.0).abs() < 1e-15);
    let back = sharp(&phi).unwrap();
    assert!(back.minus(&x).sup_norm() < 1e-15);
}

#[test]
fn dz_in_the_frame() {
    let g = Grid::new(8).unwrap();
    let dz = CoordOneForm::from_fn(g, |_| [0.0, 0.0, 1.0]);
    let w = FrameForm::from_coord_one(&dz);
    assert!(w.comps()[0].sup_norm() < 1e-15);
    assert!(w.comps()[1].sup_norm() < 1e-15);
    assert!(w.comps()[2].map(|v| v - 1.0).sup_norm() < 1e-15);
}

#[test]
fn star_is_an_involution_and_an_isometry() {
    let m = model();
    let g = m.grid();
    for degree in 0..4u8 {
        let rank = [1, 3, 3, 1][degree as usize];
        let comps = (0..rank)
            .map(|i| random_band_limited(g, 40 + i as u64, 3, 1.0).unwrap())
            .collect();
        let w = FrameForm::new(degree, comps);
        let twice = m.hodge_star(&m.hodge_star(&w));
        for (a, b) in twice.comps().iter().zip(w.comps()) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
        let star = m.hodge_star(&w);
        let lhs = star.l2_inner(&star, &m);
        let rhs = w.l2_inner(&w, &m);
        assert!((lhs - rhs).abs() < 1e-10 * rhs);
    }
}

// Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij) with ∂_z g from central differences.
#[allow(clippy::needless_range_loop)]
fn christoffels_by_differences(metric: &Metric, p: [f64; 3]) -> [[[f64; 3]; 3]; 3] {
    let h = 1e-5;
    let gp = metric.coords(p[2] + h);
    let gm = metric.coords(p[2] - h);
    let dg = |axis: usize, i: usize, j: usize| {
        if axis == 2 {
            (gp[i][j] - gm[i][j]) / (2.0 * h)
        } else {
            0.0
        }
    };
    let inv = metric.inverse(p[2]);
    let mut out = [[[0.0; 3]; 3]; 3];
    for (k, out_k) in out.iter_mut().enumerate() {
        for i in 0..3 {
            for j in 0..3 {
                out_k[i][j] = (0..3)
                    .map(|l| 0.5 * inv[k][l] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)))
                    .sum();
            }
        }
    }
    out
}

#[test]
fn christoffels_match_finite_differences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for (j, tol) in [(anisotropic(), 1e-6), (JChoice::Anisotropic(LambdaProfile::Constant(2.0)), 1e-8)] {
        let metric = Metric::new(j);
        for _ in 0..50 {
            let p = [0, 1, 2].map(|_| rng.random_range(0.0..std::f64::consts::TAU));
            let got = metric.christoffels(p);
            let want = christoffels_by_differences(&metric, p);
            for k in 0..3 {
                for i in 0..3 {
                    for l in 0..3 {
                        assert!((got[k][i][l] - want[k][i][l]).abs() < tol, "{j:?} at {p:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn only_the_default_structure_is_flat() {
    assert!(Metric::new(JChoice::Default).is_flat());
    assert!(!Metric::new(anisotropic()).is_flat());
    assert!(!Metric::new(JChoice::Anisotropic(LambdaProfile::Constant(2.0))).is_flat());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quarter_turns_compose(seed in 0u64..1000, a in -4i64..4, b in -4i64..4) {
        let g = Grid::new(8).unwrap();
        let f = random_band_limited(g, seed, 3, 1.0).unwrap();
        let stepwise = QuarterTurn(b).pull_back(&QuarterTurn(a).pull_back(&f));
        let direct = QuarterTurn(a + b).pull_back(&f);
        prop_assert!(stepwise.max_abs_diff(&direct) < 1e-12);
        prop_assert!((QuarterTurn(a).pull_back(&f).l2_norm() - f.l2_norm()).abs() < 1e-12);
    }

    #[test]
    fn flat_and_sharp_are_inverse(s1 in 0u64..1000, s2 in 0u64..1000) {
        let g = Grid::new(8).unwrap();
        let x = FrameVectorField::new(
            ScalarField::zeros(g),
            random_band_limited(g, s1, 3, 1.0).unwrap(),
            random_band_limited(g, s2, 3, 1.0).unwrap(),
        );
        prop_assert!(sharp(&flat(&x)).unwrap().minus(&x).sup_norm() < 1e-15);
    }
}
