//! The experiment suites. Every check draws its inputs from the configured seed.

use std::cell::OnceCell;

use super::config::ExperimentConfig;
use super::report::{Bound, SuiteReport, Table};
use crate::contact_diffeo::{
    composition_derivative_check, contact_field_from_g, difference_scaling_experiment, group_closure_experiment,
    loglog_slope, mixed_norm_sweep, quadratic_scaling_experiment, ContactChart, GeneratingFunction,
};
use crate::contact_model::{ContactModel, FrameVectorField, JChoice, LambdaProfile, Metric, QuarterTurn};
use crate::error::{Error, Result};
use crate::flowmap::{
    contact_defect, eta_coefficients, exp_map, exp_quadratic_coeff, exp_second_order,
    flow_from_field, lie_derivative, observed_order, quad_remainder, GeodesicConfig, GridMap, OneFormSource,
};
use crate::folland_stein::{
    algebra_constant_report, division_report, fs_norm, sobolev_ratio_report, word_derivative, RatioReport, WordIndex,
};
use crate::hodge::{hypoelliptic_report, regularity_gain_report, Hodge, SolverChoice};
use crate::rumin::{
    big_d_q, codifferential, d_q0, d_q2, differential, laplacian, pi_q, random_form, RuminForm,
};
use crate::spectral_grid::{random_band_limited, CoordOneForm, Grid, ScalarField};

/// Suite names in the order `all` runs them.
pub const SUITES: [&str; 9] = [
    "verify-complex",
    "verify-hodge",
    "contact-field",
    "solve-psi",
    "quadratic-scaling",
    "exp-taylor",
    "group-ops",
    "norms-report",
    "comp-derivative",
];

const FINE_HODGE_N: usize = 32;

/// Shared state for the suites of one run.
pub(super) struct Lab<'a> {
    pub cfg: &'a ExperimentConfig,
    hodge: OnceCell<Hodge>,
    fine_hodge: OnceCell<Hodge>,
}

impl<'a> Lab<'a> {
    pub fn new(cfg: &'a ExperimentConfig) -> Self {
        Self {
            cfg,
            hodge: OnceCell::new(),
            fine_hodge: OnceCell::new(),
        }
    }

    fn grid(&self) -> Grid {
        self.cfg.grid()
    }

    fn solver(&self) -> SolverChoice {
        SolverChoice::Cg {
            tolerance: self.cfg.solver_tol,
            max_iterations: self.cfg.cg_max_iterations,
        }
    }

    fn hodge(&self) -> Result<&Hodge> {
        if let Some(h) = self.hodge.get() {
            return Ok(h);
        }
        let h = Hodge::new(self.grid(), self.solver())?;
        Ok(self.hodge.get_or_init(|| h))
    }

    /// Hodge data on a grid of at least 32, where the Galerkin truncation in
    /// `z` no longer spoils relations between Green operators.
    fn fine_hodge(&self) -> Result<&Hodge> {
        if self.grid().n() >= FINE_HODGE_N {
            return self.hodge();
        }
        if let Some(h) = self.fine_hodge.get() {
            return Ok(h);
        }
        let h = Hodge::new(Grid::new(FINE_HODGE_N)?, self.solver())?;
        Ok(self.fine_hodge.get_or_init(|| h))
    }

    fn geodesic(&self) -> GeodesicConfig {
        GeodesicConfig {
            budget: self.cfg.flow_budget,
            ..GeodesicConfig::default()
        }
    }

    fn chart(&self) -> Result<ContactChart> {
        Ok(ContactChart::new(self.hodge()?.clone(), Metric::new(self.cfg.j()), self.geodesic()))
    }

    fn chart_on(&self, grid: Grid) -> Result<ContactChart> {
        if grid == self.grid() {
            return self.chart();
        }
        Ok(ContactChart::new(
            Hodge::new(grid, self.solver())?,
            Metric::new(self.cfg.j()),
            self.geodesic(),
        ))
    }

    /// Seed of the `i`-th sample in stream `stream`. Forms consume up to
    /// four consecutive seeds.
    fn seed(&self, stream: u64, i: u64) -> u64 {
        self.cfg
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(stream << 24)
            .wrapping_add(i << 3)
    }

    fn at_most(&self, name: &str, default: f64) -> Bound {
        Bound::AtMost {
            limit: self.cfg.threshold(name, default),
        }
    }

    fn at_least(&self, name: &str, default: f64) -> Bound {
        Bound::AtLeast {
            limit: self.cfg.threshold(name, default),
        }
    }

    fn near(&self, name: &str, target: f64, default: f64) -> Bound {
        Bound::Near {
            target,
            tolerance: self.cfg.threshold(name, default),
        }
    }

    /// The two band limits compared by the stability reports.
    fn band_pair(&self) -> (usize, usize) {
        let top = self.grid().max_mode().min(4);
        (top - 1, top)
    }
}

fn measure(rep: &mut SuiteReport, name: &str, bound: Bound, f: impl FnOnce() -> Result<f64>) {
    rep.record(name, bound, f());
}

fn sine(grid: Grid, amplitude: f64, axis: usize) -> ScalarField {
    ScalarField::from_fn(grid, |p| amplitude * p[axis].sin())
}

fn relative_inner_defect(lhs: f64, rhs: f64, scale: f64) -> f64 {
    (lhs - rhs).abs() / scale.max(f64::MIN_POSITIVE)
}

pub(super) fn verify_complex(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let band = lab.cfg.band;
    measure(rep, "model_structure", lab.at_most("model_structure", 1e-12), || {
        Ok(ContactModel::new(grid, lab.cfg.j())?.verify_structure().worst())
    });
    measure(rep, "complex_identities", lab.at_most("complex_identities", 1e-8), || {
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let f = random_form(grid, 0, lab.seed(1, i), band, 1.0)?;
            worst = worst.max(big_d_q(&d_q0(&f)?)?.l2_norm() / fs_norm(&f, 2)?);
            let a = random_form(grid, 1, lab.seed(2, i), band, 1.0)?;
            worst = worst.max(d_q2(&big_d_q(&a)?)?.l2_norm() / fs_norm(&a, 2)?);
        }
        Ok(worst)
    });
    measure(rep, "adjointness", lab.at_most("adjointness", 1e-8), || {
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            for k in 0..3u8 {
                let a = random_form(grid, k, lab.seed(3 + k as u64, i), band, 1.0)?;
                let b = random_form(grid, k + 1, lab.seed(6 + k as u64, i), band, 1.0)?;
                let da = differential(&a)?;
                let lhs = da.inner(&b);
                let rhs = a.inner(&codifferential(&b)?);
                worst = worst.max(relative_inner_defect(lhs, rhs, da.l2_norm() * b.l2_norm()));
            }
        }
        Ok(worst)
    });
    let mut rayleigh: f64 = f64::INFINITY;
    let mut symmetry: f64 = 0.0;
    let laplacian_checks = (0..4u8).try_for_each(|k| -> Result<()> {
        for i in 0..10 {
            let a = random_form(grid, k, lab.seed(10 + k as u64, i), band, 1.0)?;
            let b = random_form(grid, k, lab.seed(14 + k as u64, i), band, 1.0)?;
            let la = laplacian(&a);
            rayleigh = rayleigh.min(la.inner(&a) / a.inner(&a));
            let defect = relative_inner_defect(la.inner(&b), a.inner(&laplacian(&b)), la.l2_norm() * b.l2_norm());
            symmetry = symmetry.max(defect);
        }
        Ok(())
    });
    let (r, s) = match laplacian_checks {
        Ok(()) => (Ok(rayleigh), Ok(symmetry)),
        Err(e) => (Err(Error::Config(e.to_string())), Err(e)),
    };
    rep.record("laplacian_rayleigh_min", lab.at_least("laplacian_rayleigh_min", -1e-10), r);
    rep.record("laplacian_self_adjoint", lab.at_most("laplacian_self_adjoint", 1e-8), s);
}

pub(super) fn verify_hodge(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let band = lab.cfg.band;
    measure(rep, "hodge_reconstruction", lab.at_most("hodge_reconstruction", 1e-6), || {
        let hodge = lab.hodge()?;
        let mut worst: f64 = 0.0;
        for k in 0..4u8 {
            let w = random_form(grid, k, lab.seed(20, k as u64), band, 1.0)?;
            let parts = hodge.decompose(&w)?;
            worst = worst.max(parts.reconstruction().minus(&w).l2_norm() / w.l2_norm());
        }
        Ok(worst)
    });
    measure(rep, "hodge_orthogonality", lab.at_most("hodge_orthogonality", 1e-8), || {
        let hodge = lab.fine_hodge()?;
        let fine = hodge.grid();
        let band = band.min(3);
        let mut worst: f64 = 0.0;
        for k in 0..4u8 {
            let w = random_form(fine, k, lab.seed(21, k as u64), band, 1.0)?;
            let p = hodge.decompose(&w)?;
            let n2 = w.inner(&w);
            for (a, b) in [(&p.harmonic, &p.exact), (&p.harmonic, &p.coexact), (&p.exact, &p.coexact)] {
                worst = worst.max(a.inner(b).abs() / n2);
            }
        }
        Ok(worst)
    });
    let small = Grid::new(8).expect("valid");
    measure(rep, "harmonic_dimensions_mismatch", lab.at_most("harmonic_dimensions_mismatch", 0.0), || {
        let dense = Hodge::new(small, SolverChoice::Dense)?;
        let found: Vec<usize> = (0..4u8).map(|k| dense.setup(k).harmonic_basis().len()).collect();
        Ok(found
            .iter()
            .zip([1usize, 3, 3, 1])
            .map(|(&a, b)| a.abs_diff(b))
            .sum::<usize>() as f64)
    });
    measure(rep, "dense_vs_cg", lab.at_most("dense_vs_cg", 1e-7), || {
        let dense = Hodge::new(small, SolverChoice::Dense)?;
        let cg = Hodge::new(small, lab.solver())?;
        let mut worst: f64 = 0.0;
        for k in 0..4u8 {
            for i in 0..10 {
                let w = random_form(small, k, lab.seed(22 + k as u64, i), 3, 1.0)?;
                let a = dense.g_q(&w)?;
                let b = cg.g_q(&w)?;
                worst = worst.max(a.minus(&b).l2_norm() / a.l2_norm().max(f64::MIN_POSITIVE));
            }
        }
        Ok(worst)
    });
    let forms = |grid: Grid, count: u64| -> Result<Vec<[RuminForm; 4]>> {
        (0..count)
            .map(|i| {
                let [a, b, c, d] = [0u8, 1, 2, 3].map(|k| random_form(grid, k, lab.seed(30 + k as u64, i), band, 1.0));
                Ok([a?, b?, c?, d?])
            })
            .collect()
    };
    measure(rep, "harmonic_commutation", lab.at_most("harmonic_commutation", 1e-8), || {
        let c = lab.hodge()?.verify_commutations(&forms(grid, 5)?)?;
        Ok(c.p_after_h.max(c.h_after_p))
    });
    measure(rep, "green_relation", lab.at_most("green_relation", 1e-5), || {
        let hodge = lab.fine_hodge()?;
        Ok(hodge.verify_commutations(&forms(hodge.grid(), 3)?)?.green_relation)
    });
}

pub(super) fn contact_field(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let eta = CoordOneForm::from_fn(grid, eta_coefficients);
    let samples: Result<Vec<ScalarField>> = (0..20)
        .map(|i| random_band_limited(grid, lab.seed(40, i), 3.min(grid.max_mode()), 1.0))
        .collect();
    measure(rep, "lie_contact_identity", lab.at_most("lie_contact_identity", 1e-8), || {
        let mut worst: f64 = 0.0;
        for g in samples.as_ref().map_err(|e| Error::Config(e.to_string()))? {
            let x = contact_field_from_g(g);
            let lie = pi_q(&lie_derivative(&x.to_coords(), &eta));
            worst = worst.max(lie.l2_norm() / fs_norm(g, 2)?);
        }
        Ok(worst)
    });
    measure(rep, "characterization_residuals", lab.at_most("characterization_residuals", 1e-6), || {
        let chart = lab.chart()?;
        let mut worst: f64 = 0.0;
        for g in samples.as_ref().map_err(|e| Error::Config(e.to_string()))? {
            worst = worst.max(chart.check_contact_field(&contact_field_from_g(g))?.worst());
        }
        Ok(worst)
    });
    measure(rep, "non_contact_flagged", lab.at_least("non_contact_flagged", 1e-3), || {
        let chart = lab.chart()?;
        let one = ScalarField::constant(grid, 1.0);
        let x = FrameVectorField::new(ScalarField::zeros(grid), one, ScalarField::zeros(grid));
        Ok(chart.check_contact_field(&x)?.worst())
    });
}

pub(super) fn solve_psi(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let solved = lab.chart().and_then(|chart| {
        let g = GeneratingFunction::with_bound(sine(grid, 0.05, 0), lab.cfg.smallness)?;
        let x0 = contact_field_from_g(g.field());
        let (value, beta) = chart.phi(&x0)?;
        let rebuilt = d_q0(&RuminForm::scalar(value.alpha.clone()))?.plus(&value.omega);
        let reconstruction = rebuilt.minus(&beta).l2_norm() / beta.l2_norm();
        let (_, report) = chart.solve_psi(&g, lab.cfg.psi_tol, lab.cfg.psi_max_iterations)?;
        Ok((reconstruction, report))
    });
    match solved {
        Ok((reconstruction, report)) => {
            rep.record("phi_reconstruction", lab.at_most("phi_reconstruction", 1e-5), Ok(reconstruction));
            rep.record(
                "psi_iterations",
                lab.at_most("psi_iterations", 20.0),
                Ok(report.iterations as f64),
            );
            rep.record("psi_defect", lab.at_most("psi_defect", 1e-9), Ok(report.final_defect));
            let worst_rate = report
                .history
                .windows(2)
                .filter(|w| w[0].defect < 1e-3)
                .map(|w| w[1].defect / w[0].defect)
                .fold(0.0, f64::max);
            rep.record("newton_contraction", lab.at_most("newton_contraction", 0.5), Ok(worst_rate));
            let mut table = Table::new("history", &["iteration", "defect", "defect_fs1", "step"]);
            for r in &report.history {
                table.push(vec![r.iteration as f64, r.defect, r.defect_fs1, r.step]);
            }
            rep.tables.push(table);
            rep.add_detail("solve_report", &report);
        }
        Err(e) => {
            for name in ["phi_reconstruction", "psi_iterations", "psi_defect", "newton_contraction"] {
                rep.record(name, lab.at_most(name, 0.0), Err(Error::Config(e.to_string())));
            }
        }
    }
    measure(rep, "symmetry_control_defect", lab.at_most("symmetry_control_defect", 1e-10), || {
        Ok((1..4)
            .map(|q| contact_defect(&GridMap::quarter_turn(grid, QuarterTurn(q))).l2_norm())
            .fold(0.0, f64::max))
    });
}

pub(super) fn quadratic_scaling(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let (tol, iters) = (lab.cfg.psi_tol, lab.cfg.psi_max_iterations.max(30));
    let chart = match lab.chart() {
        Ok(c) => c,
        Err(e) => {
            rep.record("quadratic_slope_s0", lab.near("quadratic_slope_s0", 2.0, 0.1), Err(e));
            return;
        }
    };
    let direction = GeneratingFunction::with_bound(sine(grid, 1.0, 0), 1.0).expect("sup is one");
    let ts: Vec<f64> = [1.0, 0.5, 0.25, 0.125].iter().map(|f| 0.08 * f).collect();
    match quadratic_scaling_experiment(&chart, &direction, &[0, 1, 2], &ts, tol, iters) {
        Ok(q) => {
            for &(s, slope) in &q.slopes {
                let name = format!("quadratic_slope_s{s}");
                rep.record(&name, lab.near(&name, 2.0, 0.1), Ok(slope));
            }
            let mut table = Table::new("quadratic", &["t", "s", "norm"]);
            for r in &q.rows {
                table.push(vec![r.t, r.s as f64, r.norm]);
            }
            rep.tables.push(table);
        }
        Err(e) => rep.record("quadratic_slope_s0", lab.near("quadratic_slope_s0", 2.0, 0.1), Err(e)),
    }
    let g1 = ScalarField::from_fn(grid, |p| 0.5 * p[0].sin() + 0.25 * p[1].cos());
    let g1 = GeneratingFunction::with_bound(g1, 1.0).expect("sup below one");
    let g2 = g1.scaled(2.0);
    match difference_scaling_experiment(&chart, &g1, &g2, 2, &[0.05, 0.025, 0.0125], tol, iters) {
        Ok(d) => {
            let finite = d.rows.iter().all(|r| r.ratio.is_finite());
            rep.record(
                "difference_ratio_spread",
                lab.at_most("difference_ratio_spread", 0.3),
                Ok(if finite { d.spread } else { f64::NAN }),
            );
            let mut table = Table::new("difference", &["t", "lhs", "rhs", "ratio"]);
            for r in &d.rows {
                table.push(vec![r.t, r.lhs, r.rhs, r.ratio]);
            }
            rep.tables.push(table);
        }
        Err(e) => rep.record("difference_ratio_spread", lab.at_most("difference_ratio_spread", 0.3), Err(e)),
    }
    // Quadratic terms of the mode-4 field sit at twice its frequency, so the
    // sweep runs on the doubled grid.
    let sweep = Grid::new(2 * grid.n())
        .and_then(|g| lab.chart_on(g))
        .and_then(|c| mixed_norm_sweep(&c, &[1, 2, 3, 4], 0.05, 2, tol, iters));
    match sweep {
        Ok(rows) => {
            let ratios: Vec<f64> = rows.iter().map(|r| r.mixed_ratio).collect();
            let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            rep.record("mixed_norm_sweep_spread", lab.at_most("mixed_norm_sweep_spread", 3.0), Ok(max / min));
            let mut table = Table::new("sweep", &["mode", "error", "mixed_ratio", "square_ratio"]);
            for r in &rows {
                table.push(vec![r.mode as f64, r.error, r.mixed_ratio, r.square_ratio]);
            }
            rep.tables.push(table);
        }
        Err(e) => rep.record("mixed_norm_sweep_spread", lab.at_most("mixed_norm_sweep_spread", 3.0), Err(e)),
    }
}

pub(super) fn exp_taylor(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let cfg = lab.geodesic();
    let aniso = Metric::new(JChoice::Anisotropic(LambdaProfile::ExpCos {
        eps: lab.cfg.lambda_eps,
    }));
    let x = [0.3, 1.1, 0.7];
    let v = [0.05, -0.08, 0.06];
    measure(rep, "geodesic_integrator_order", lab.at_least("geodesic_integrator_order", 3.8), || {
        observed_order(&aniso, x, [0.3, -0.2, 0.25], 8)
    });
    measure(rep, "b_consistency", lab.at_most("b_consistency", 1e-6), || {
        let e = exp_map(&aniso, x, v, &cfg)?;
        let b = exp_quadratic_coeff(&aniso, x, v, &cfg)?;
        Ok((0..3).map(|i| (e[i] - x[i] - v[i] - b[i]).abs()).fold(0.0, f64::max))
    });
    let mut remainder = Table::new("exp_remainder", &["t", "remainder"]);
    measure(rep, "exp_remainder_slope", lab.near("exp_remainder_slope", 3.0, 0.2), || {
        let ts = [1.0, 0.5, 0.25, 0.125];
        let mut rs = Vec::new();
        for &t in &ts {
            let vt = v.map(|c| 2.0 * c * t);
            let e = exp_map(&aniso, x, vt, &cfg)?;
            let b = exp_second_order(&aniso, x, vt);
            let r = (0..3).map(|i| (e[i] - x[i] - vt[i] - b[i]).powi(2)).sum::<f64>().sqrt();
            remainder.push(vec![t, r]);
            rs.push(r);
        }
        Ok(loglog_slope(&ts, &rs))
    });
    rep.tables.push(remainder);
    let mut quad = Table::new("quad_eta", &["t", "norm"]);
    measure(rep, "quad_eta_slope", lab.near("quad_eta_slope", 2.0, 0.1), || {
        let metric = Metric::new(lab.cfg.j());
        let comps = (0..3)
            .map(|i| random_band_limited(grid, lab.seed(50, i), 2.min(grid.max_mode()), 1.0))
            .collect::<Result<Vec<_>>>()?;
        let field = FrameVectorField::new(comps[0].clone(), comps[1].clone(), comps[2].clone());
        let eta = OneFormSource::Analytic(&eta_coefficients);
        let ts = [0.1, 0.05, 0.025, 0.0125];
        let mut ns = Vec::new();
        for &t in &ts {
            let n = quad_remainder(&metric, &field.scaled(t), &eta, &cfg)?.l2_norm();
            quad.push(vec![t, n]);
            ns.push(n);
        }
        Ok(loglog_slope(&ts, &ns))
    });
    rep.tables.push(quad);
}

/// Flow of a random band-1 field scaled to `sup = amplitude`.
fn small_flow(lab: &Lab, metric: &Metric, stream: u64, amplitude: f64) -> Result<GridMap> {
    let grid = lab.grid();
    let comps = (0..3)
        .map(|i| random_band_limited(grid, lab.seed(stream, i), 1, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let field = FrameVectorField::new(comps[0].clone(), comps[1].clone(), comps[2].clone());
    let sup = field.sup_norm();
    flow_from_field(metric, &field.scaled(amplitude / sup), &lab.geodesic())
}

pub(super) fn group_ops(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let closure = lab.chart().and_then(|chart| {
        let g1 = GeneratingFunction::with_bound(sine(grid, 0.03, 0), lab.cfg.smallness)?;
        let g2 = ScalarField::from_fn(grid, |p| 0.021 * (p[1] + p[2]).cos());
        let g2 = GeneratingFunction::with_bound(g2, lab.cfg.smallness)?;
        group_closure_experiment(&chart, &g1, &g2, lab.cfg.psi_tol, lab.cfg.psi_max_iterations.max(30))
    });
    match closure {
        Ok(c) => {
            rep.record("composed_defect", lab.at_most("composed_defect", 1e-7), Ok(c.defect_composed));
            rep.record("inverse_defect", lab.at_most("inverse_defect", 1e-7), Ok(c.defect_inverse));
            rep.record(
                "inverse_identity_distance",
                lab.at_most("inverse_identity_distance", 1e-7),
                Ok(c.identity_distance),
            );
            rep.record(
                "symmetry_composed_defect",
                lab.at_most("symmetry_composed_defect", 2e-7),
                Ok(c.defect_with_symmetry),
            );
            rep.add_detail("closure", &c);
        }
        Err(e) => {
            for (name, t) in [
                ("composed_defect", 1e-7),
                ("inverse_defect", 1e-7),
                ("inverse_identity_distance", 1e-7),
                ("symmetry_composed_defect", 2e-7),
            ] {
                rep.record(name, lab.at_most(name, t), Err(Error::Config(e.to_string())));
            }
        }
    }
    let metric = Metric::new(lab.cfg.j());
    let eta = OneFormSource::Analytic(&eta_coefficients);
    measure(rep, "pullback_functoriality", lab.at_most("pullback_functoriality", 1e-8), || {
        let f = small_flow(lab, &metric, 60, 0.05)?;
        let g = small_flow(lab, &metric, 61, 0.05)?;
        let lhs = GridMap::compose(&f, &g).pull_back_one(&eta);
        let inner = g.pull_back_one(&eta);
        let rhs = f.pull_back_one(&OneFormSource::Grid(&inner.comps));
        Ok(lhs.minus(&rhs).l2_norm() / lhs.l2_norm())
    });
}

pub(super) fn comp_derivative(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let result = lab.chart().and_then(|chart| {
        let u = sine(grid, 1.0, 0);
        let h = GeneratingFunction::with_bound(sine(grid, 0.05, 1), lab.cfg.smallness)?;
        composition_derivative_check(
            &chart,
            &u,
            &h,
            &[1.0, 0.5, 0.25, 0.125],
            lab.cfg.psi_tol,
            lab.cfg.psi_max_iterations.max(30),
        )
    });
    match result {
        Ok(c) => {
            rep.record("composition_derivative_order", lab.at_least("composition_derivative_order", 0.9), Ok(c.order));
            let mut table = Table::new("quotient", &["t", "error"]);
            for r in &c.rows {
                table.push(vec![r.t, r.error]);
            }
            rep.tables.push(table);
        }
        Err(e) => rep.record(
            "composition_derivative_order",
            lab.at_least("composition_derivative_order", 0.9),
            Err(e),
        ),
    }
}

fn ratio_table(name: &str, reports: &[&RatioReport]) -> Table {
    let mut t = Table::new(name, &["band", "s", "sample", "ratio"]);
    for r in reports {
        for row in &r.rows {
            t.push(vec![row.band as f64, row.s as f64, row.sample as f64, row.ratio]);
        }
    }
    t
}

fn drift_check(
    lab: &Lab,
    rep: &mut SuiteReport,
    name: &str,
    reports: Result<(RatioReport, RatioReport)>,
) {
    let check = format!("{name}_drift");
    match reports {
        Ok((a, b)) => {
            let drift = if a.is_finite() && b.is_finite() {
                a.drift(&b)
            } else {
                f64::NAN
            };
            rep.record(&check, lab.at_most(&check, 0.3), Ok(drift));
            rep.tables.push(ratio_table(name, &[&a, &b]));
        }
        Err(e) => rep.record(&check, lab.at_most(&check, 0.3), Err(e)),
    }
}

pub(super) fn norms_report(lab: &Lab, rep: &mut SuiteReport) {
    let grid = lab.grid();
    let band = lab.cfg.band;
    let s_max = lab.cfg.s_max;
    measure(rep, "fs_refinement_invariance", lab.at_most("fs_refinement_invariance", 1e-9), || {
        let fine = Grid::new(2 * grid.n())?;
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            let a = random_band_limited(grid, lab.seed(70, i), band, 1.0)?;
            let b = random_band_limited(fine, lab.seed(70, i), band, 1.0)?;
            for s in 0..=s_max {
                let (na, nb) = (fs_norm(&a, s)?, fs_norm(&b, s)?);
                worst = worst.max((na - nb).abs() / na);
            }
        }
        Ok(worst)
    });
    measure(rep, "fs_isometry_invariance", lab.at_most("fs_isometry_invariance", 1e-8), || {
        let mut worst: f64 = 0.0;
        for i in 0..5 {
            let f = random_band_limited(grid, lab.seed(71, i), band, 1.0)?;
            for q in [1, 3] {
                let moved = QuarterTurn(q).pull_back(&f);
                for s in 0..=s_max {
                    let n = fs_norm(&f, s)?;
                    worst = worst.max((fs_norm(&moved, s)? - n).abs() / n);
                }
            }
        }
        Ok(worst)
    });
    measure(rep, "fs_recursive_identity", lab.at_most("fs_recursive_identity", 1e-10), || {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            let f = random_band_limited(grid, lab.seed(72, i), band, 1.0)?;
            // e₁ raises the z frequency by one, so the split is taken on a wider grid
            let wide = f.resample(Grid::new(2 * grid.n())?);
            for s in 1..=s_max {
                // ‖f‖_s² = ‖f‖₀² + Σ_j ‖e_j f‖_{s−1}²
                let mut split = f.l2_norm().powi(2);
                for w in WordIndex::all(1) {
                    split += fs_norm(&word_derivative(&wide, &w), s - 1)?.powi(2);
                }
                let n = fs_norm(&f, s)?;
                worst = worst.max((n * n - split).abs() / split);
            }
        }
        Ok(worst)
    });
    let (lo, hi) = lab.band_pair();
    let samples = lab.cfg.samples;
    let seed = lab.seed(73, 0);
    let pair = |f: &dyn Fn(usize) -> Result<RatioReport>| -> Result<(RatioReport, RatioReport)> { Ok((f(lo)?, f(hi)?)) };
    drift_check(lab, rep, "sobolev", pair(&|b| sobolev_ratio_report(grid, seed, samples, b)));
    drift_check(lab, rep, "algebra", pair(&|b| algebra_constant_report(grid, seed, samples, b, 4, 2)));
    drift_check(lab, rep, "division", pair(&|b| division_report(grid, seed, samples, b, 2)));
    for k in 0..4u8 {
        let n = samples.min(10);
        drift_check(
            lab,
            rep,
            &format!("hypoelliptic_degree{k}"),
            pair(&|b| hypoelliptic_report(grid, seed, n, b, 2, k)),
        );
        let gain = lab
            .hodge()
            .and_then(|h| Ok((regularity_gain_report(h, seed, n, lo, 2, k)?, regularity_gain_report(h, seed, n, hi, 2, k)?)));
        drift_check(lab, rep, &format!("green_gain_degree{k}"), gain);
    }
}
