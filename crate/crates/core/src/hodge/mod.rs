//! Harmonic projectors, Green operators and Hodge decompositions for the
//! Rumin Laplacians.

mod cg;
mod dense;
mod estimates;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DVector;
use once_cell::sync::Lazy;
use serde::Serialize;

pub use cg::{deflated_cg, SolveStats};
pub use dense::{DenseSolver, RealBasis};
pub use estimates::{derivative_gain, hypoelliptic_report, regularity_gain_report};

use crate::error::{Error, Result};
use crate::rumin::{codifferential, d_q0, delta_q, differential, laplacian, laplacian_parts, RuminForm};
use crate::spectral_grid::{Grid, ScalarField};

/// Eigenvalues below this are treated as kernel.
pub const KERNEL_THRESHOLD: f64 = 1e-8;

/// Largest grid for which dense assembly is allowed.
pub const DENSE_LIMIT: usize = 12;

/// Grid on which the harmonic bases are computed before being embedded.
const KERNEL_GRID: usize = 8;

type DenseCache = Mutex<HashMap<(usize, u8), Arc<DenseSolver>>>;

static DENSE_CACHE: Lazy<DenseCache> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached dense eigendecomposition of `Δ_Q` in degree `k` on a small grid.
pub fn dense_solver(grid: Grid, degree: u8) -> Result<Arc<DenseSolver>> {
    if grid.n() > DENSE_LIMIT {
        return Err(Error::DenseTooLarge(grid.n()));
    }
    let key = (grid.n(), degree);
    if let Some(s) = DENSE_CACHE.lock().expect("cache poisoned").get(&key) {
        return Ok(s.clone());
    }
    let solver = Arc::new(DenseSolver::new(grid, degree, KERNEL_THRESHOLD));
    DENSE_CACHE
        .lock()
        .expect("cache poisoned")
        .insert(key, solver.clone());
    Ok(solver)
}

/// How Green operators are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SolverChoice {
    Dense,
    Cg { tolerance: f64, max_iterations: usize },
}

impl Default for SolverChoice {
    fn default() -> Self {
        SolverChoice::Cg {
            tolerance: 1e-10,
            max_iterations: 5000,
        }
    }
}

/// Harmonic basis and Green solver for one degree.
#[derive(Clone, Debug)]
pub struct HodgeSetup {
    degree: u8,
    grid: Grid,
    harmonic: Vec<RuminForm>,
    choice: SolverChoice,
    dense: Option<Arc<DenseSolver>>,
}

impl HodgeSetup {
    pub fn new(grid: Grid, degree: u8, choice: SolverChoice) -> Result<Self> {
        let kernel_grid = Grid::new(KERNEL_GRID)?;
        let kernel_solver = dense_solver(kernel_grid, degree)?;
        let harmonic: Vec<RuminForm> = kernel_solver
            .kernel_vectors()
            .iter()
            .map(|v| kernel_solver.basis.decode(degree, v, grid))
            .collect();
        let dense = match choice {
            SolverChoice::Dense => Some(dense_solver(grid, degree)?),
            SolverChoice::Cg { .. } => None,
        };
        let setup = Self {
            degree,
            grid,
            harmonic,
            choice,
            dense,
        };
        setup.validate()?;
        Ok(setup)
    }

    fn validate(&self) -> Result<()> {
        let gram = self.gram_defect();
        if gram > 1e-10 {
            return Err(Error::HarmonicBasis(format!("degree {}: Gram defect {gram:.3e}", self.degree)));
        }
        let tol = match self.choice {
            SolverChoice::Cg { tolerance, .. } => tolerance,
            SolverChoice::Dense => 1e-10,
        };
        let worst = self.harmonic_residual();
        if worst > 10.0 * tol {
            return Err(Error::HarmonicBasis(format!(
                "degree {}: |Δ h| = {worst:.3e}",
                self.degree
            )));
        }
        Ok(())
    }

    /// Largest deviation of the harmonic Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.harmonic.iter().enumerate() {
            for (j, b) in self.harmonic.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - want).abs());
            }
        }
        worst
    }

    /// Largest `‖Δ_Q h‖₀` over the harmonic basis.
    pub fn harmonic_residual(&self) -> f64 {
        self.harmonic
            .iter()
            .map(|h| laplacian(h).l2_norm())
            .fold(0.0, f64::max)
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn choice(&self) -> SolverChoice {
        self.choice
    }

    pub fn harmonic_basis(&self) -> &[RuminForm] {
        &self.harmonic
    }

    /// `ℋ_Q`: orthogonal projection onto the harmonic forms.
    pub fn harmonic_projection(&self, w: &RuminForm) -> RuminForm {
        let mut out = RuminForm::zero(self.grid, self.degree);
        for h in &self.harmonic {
            out = out.axpby(1.0, h, w.inner(h));
        }
        out
    }

    /// `G_Q`: the solution of `Δ_Q u = (1 − ℋ_Q) w` orthogonal to the kernel.
    pub fn green(&self, w: &RuminForm) -> Result<(RuminForm, SolveStats)> {
        w.expect_degree(self.degree)?;
        match (self.choice, &self.dense) {
            (SolverChoice::Dense, Some(d)) => {
                let v: DVector<f64> = d.basis.encode(&w.dealiased());
                let u = d.green(&v);
                let out = d.basis.decode(self.degree, u.as_slice(), self.grid);
                let out = self.deflate(&out);
                let residual = self
                    .deflate(&w.dealiased())
                    .minus(&laplacian(&out))
                    .l2_norm()
                    / w.l2_norm().max(f64::MIN_POSITIVE);
                Ok((
                    out,
                    SolveStats {
                        iterations: 0,
                        relative_residual: residual,
                    },
                ))
            }
            (SolverChoice::Cg { tolerance, max_iterations }, _) => {
                deflated_cg(w, &self.harmonic, tolerance, max_iterations)
            }
            (SolverChoice::Dense, None) => unreachable!("dense setup without a solver"),
        }
    }

    fn deflate(&self, w: &RuminForm) -> RuminForm {
        w.minus(&self.harmonic_projection(w))
    }
}

/// Harmonic, exact and coexact parts of a form.
#[derive(Clone, Debug)]
pub struct HodgeParts {
    pub harmonic: RuminForm,
    /// Part through the lower degree (`G (dδ)² ω` in degree one).
    pub exact: RuminForm,
    /// Part through the higher degree (`G D*D ω` in degree one).
    pub coexact: RuminForm,
    pub stats: [SolveStats; 2],
}

impl HodgeParts {
    pub fn reconstruction(&self) -> RuminForm {
        self.harmonic.plus(&self.exact).plus(&self.coexact)
    }
}

/// Relation checks among `d_Q`, `δ_Q`, `ℋ_Q` and `G_Q`.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CommutationReport {
    /// `max ‖P ℋ_Q ω‖₀ / ‖ω‖₀` over the operators and samples.
    pub p_after_h: f64,
    /// `max ‖ℋ_Q P ω‖₀ / ‖ω‖₀`.
    pub h_after_p: f64,
    /// `max ‖d_Q G_Q f − ½ G_Q(d_Q δ_Q d_Q) f‖₀ / ‖d_Q G_Q f‖₀`.
    pub green_relation: f64,
}

/// The four Hodge setups of the complex on one grid.
#[derive(Clone, Debug)]
pub struct Hodge {
    setups: Vec<HodgeSetup>,
}

impl Hodge {
    pub fn new(grid: Grid, choice: SolverChoice) -> Result<Self> {
        let setups = (0..4u8)
            .map(|k| HodgeSetup::new(grid, k, choice))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { setups })
    }

    pub fn grid(&self) -> Grid {
        self.setups[0].grid
    }

    pub fn setup(&self, degree: u8) -> &HodgeSetup {
        &self.setups[degree as usize]
    }

    pub fn h_q(&self, w: &RuminForm) -> RuminForm {
        self.setup(w.degree()).harmonic_projection(w)
    }

    pub fn g_q(&self, w: &RuminForm) -> Result<RuminForm> {
        self.setup(w.degree()).green(w).map(|(u, _)| u)
    }

    /// Splits `w = ℋ w + G(low part of Δ) w + G(high part of Δ) w`.
    pub fn decompose(&self, w: &RuminForm) -> Result<HodgeParts> {
        let setup = self.setup(w.degree());
        let (low, high) = laplacian_parts(w);
        let (exact, s1) = setup.green(&low)?;
        let (coexact, s2) = setup.green(&high)?;
        Ok(HodgeParts {
            harmonic: setup.harmonic_projection(w),
            exact,
            coexact,
            stats: [s1, s2],
        })
    }

    /// Checks `P ℋ = ℋ P = 0` for every operator of the complex and its
    /// adjoint, and `d_Q G_Q = ½ G_Q d_Q δ_Q d_Q` on functions.
    pub fn verify_commutations(&self, samples: &[[RuminForm; 4]]) -> Result<CommutationReport> {
        let mut rep = CommutationReport::default();
        for forms in samples {
            for w in forms {
                let k = w.degree();
                let norm = w.l2_norm().max(f64::MIN_POSITIVE);
                let hw = self.h_q(w);
                if k < 3 {
                    rep.p_after_h = rep.p_after_h.max(differential(&hw)?.l2_norm() / norm);
                    rep.h_after_p = rep.h_after_p.max(self.h_q(&differential(w)?).l2_norm() / norm);
                }
                if k > 0 {
                    rep.p_after_h = rep.p_after_h.max(codifferential(&hw)?.l2_norm() / norm);
                    rep.h_after_p = rep.h_after_p.max(self.h_q(&codifferential(w)?).l2_norm() / norm);
                }
            }
            let f = &forms[0];
            let lhs = d_q0(&self.g_q(f)?)?;
            let ddd = d_q0(&delta_q(&d_q0(f)?)?)?;
            let rhs = self.g_q(&ddd)?.scaled(0.5);
            let scale = lhs.l2_norm().max(f64::MIN_POSITIVE);
            rep.green_relation = rep.green_relation.max(lhs.minus(&rhs).l2_norm() / scale);
        }
        Ok(rep)
    }
}

/// The constant function normalized in `L²`, the harmonic 0-form.
pub fn unit_constant(grid: Grid) -> ScalarField {
    ScalarField::constant(grid, std::f64::consts::TAU.powf(-1.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_grid::random_band_limited;

    #[test]
    fn kernel_dimensions_match_torus_cohomology() {
        let g = Grid::new(8).unwrap();
        let dims: Vec<usize> = (0..4u8).map(|k| dense_solver(g, k).unwrap().kernel_dimension()).collect();
        assert_eq!(dims, vec![1, 3, 3, 1]);
        for k in 0..4u8 {
            let d = dense_solver(g, k).unwrap();
            assert!(d.asymmetry < 1e-9, "degree {k} asymmetry {}", d.asymmetry);
            assert!(d.min_eigenvalue() > -1e-10);
            assert!(d.spectral_gap() > 1e-3, "degree {k} gap {}", d.spectral_gap());
        }
    }

    #[test]
    fn zero_form_kernel_is_the_constant() {
        let g = Grid::new(16).unwrap();
        let s = HodgeSetup::new(g, 0, SolverChoice::default()).unwrap();
        let h = &s.harmonic_basis()[0];
        let c = unit_constant(g);
        assert!(h.comps()[0].max_abs_diff(&c).min(h.comps()[0].max_abs_diff(&-&c)) < 1e-12);
    }

    #[test]
    fn cg_green_inverts_laplacian() {
        let g = Grid::new(16).unwrap();
        let s = HodgeSetup::new(g, 1, SolverChoice::default()).unwrap();
        let w = RuminForm::one(
            random_band_limited(g, 1, 3, 1.0).unwrap(),
            random_band_limited(g, 2, 3, 1.0).unwrap(),
        );
        let (u, stats) = s.green(&w).unwrap();
        let back = laplacian(&u).plus(&s.harmonic_projection(&w));
        assert!(back.minus(&w).l2_norm() < 1e-6 * w.l2_norm(), "{stats:?}");
    }
}
