//! Contact diffeomorphisms near the identity, parameterized by generating
//! functions through the map `Φ(X) = (g_X, α_X, ω_X)`.

mod experiments;

pub use experiments::{
    composition_derivative_check, difference_scaling_experiment, group_closure_experiment, loglog_slope,
    mixed_norm_sweep, quadratic_scaling_experiment, CompositionDerivative, DifferenceScaling, GroupClosure,
    QuadraticScaling, SweepRow,
};

use serde::Serialize;

use crate::contact_model::{flat, horizontal, sharp, Direction, FrameVectorField, Metric};
use crate::error::{Error, Result};
use crate::flowmap::{contact_defect, flow_from_field, GeodesicConfig, GridMap};
use crate::folland_stein::fs_norm;
use crate::hodge::Hodge;
use crate::rumin::{big_d_q, big_d_q_star, delta_q, RuminForm};
use crate::spectral_grid::{Grid, ScalarField};

/// Default bound on `sup |g|`.
pub const DEFAULT_SMALLNESS: f64 = 0.1;

/// Step of the central differences for `dΦ₀`.
pub const PHI_DERIVATIVE_STEP: f64 = 1e-4;

/// A generating function within the smallness bound.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunction {
    g: ScalarField,
}

impl GeneratingFunction {
    pub fn new(g: ScalarField) -> Result<Self> {
        Self::with_bound(g, DEFAULT_SMALLNESS)
    }

    pub fn with_bound(g: ScalarField, bound: f64) -> Result<Self> {
        let sup = g.sup_norm();
        if sup > bound {
            return Err(Error::OutsideChart { sup, budget: bound });
        }
        Ok(Self { g })
    }

    pub fn field(&self) -> &ScalarField {
        &self.g
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self { g: self.g.scaled(t) }
    }
}

fn e_apply(f: &ScalarField, dir: Direction) -> ScalarField {
    horizontal(&f.spectrum(), dir).to_field()
}

/// `X_g = g T − (d_Q g)^♯ = g T − e₂g e₁ + e₁g e₂`.
pub fn contact_field_from_g(g: &ScalarField) -> FrameVectorField {
    FrameVectorField::new(g.clone(), -e_apply(g, Direction::E2), e_apply(g, Direction::E1))
}

/// Residuals of the three conditions characterizing contact fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ContactResiduals {
    /// `‖X⁰ − ℋ(X⁰) + 2 G δ(X ⌟ dη)‖₀ / ‖X‖₀`.
    pub reeb_part: f64,
    /// `‖ℋ(X ⌟ dη)‖₀ / ‖X‖₀`.
    pub harmonic: f64,
    /// `‖D_Q(X ⌟ dη)‖₀ / ‖X‖₀`.
    pub middle: f64,
}

impl ContactResiduals {
    pub fn worst(&self) -> f64 {
        self.reeb_part.max(self.harmonic).max(self.middle)
    }
}

/// `Φ(X)` together with the defect `β = π_Q F_X*η` it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiValue {
    pub g: ScalarField,
    pub alpha: ScalarField,
    pub omega: RuminForm,
}

impl PhiValue {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            g: ScalarField::zeros(grid),
            alpha: ScalarField::zeros(grid),
            omega: RuminForm::zero(grid, 1),
        }
    }

    pub fn from_g(g: ScalarField) -> Self {
        let grid = g.grid();
        Self {
            g,
            alpha: ScalarField::zeros(grid),
            omega: RuminForm::zero(grid, 1),
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        Self {
            g: &self.g - &o.g,
            alpha: &self.alpha - &o.alpha,
            omega: self.omega.minus(&o.omega),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            g: self.g.scaled(s),
            alpha: self.alpha.scaled(s),
            omega: self.omega.scaled(s),
        }
    }

    /// `(‖g‖² + ‖α‖² + ‖ω‖²)^{1/2}` in `L²`.
    pub fn l2_norm(&self) -> f64 {
        (self.g.inner(&self.g) + self.alpha.inner(&self.alpha) + self.omega.inner(&self.omega)).sqrt()
    }
}

/// `(g ⊕ α ⊕ ω) ↦ (g + α) T + (ω − d_Q g)^♯`, the inverse of `dΦ` at `0`.
pub fn dphi0_inverse(v: &PhiValue) -> Result<FrameVectorField> {
    let p = &v.omega.comps()[0] - &e_apply(&v.g, Direction::E1);
    let q = &v.omega.comps()[1] - &e_apply(&v.g, Direction::E2);
    let mut x = sharp(&RuminForm::one(p, q))?;
    x.t = &v.g + &v.alpha;
    Ok(x)
}

/// One iteration of the `Ψ` solve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `‖π_Q F_X*η‖₀`.
    pub defect: f64,
    /// `‖π_Q F_X*η‖₁`.
    pub defect_fs1: f64,
    pub step: f64,
}

/// Outcome of [`ContactChart::solve_psi`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
    pub converged: bool,
    pub final_defect: f64,
}

/// The identity-centered chart: model metric, exponential map and Hodge theory.
#[derive(Clone, Debug)]
pub struct ContactChart {
    hodge: Hodge,
    metric: Metric,
    geodesic: GeodesicConfig,
}

impl ContactChart {
    pub fn new(hodge: Hodge, metric: Metric, geodesic: GeodesicConfig) -> Self {
        Self {
            hodge,
            metric,
            geodesic,
        }
    }

    pub fn grid(&self) -> Grid {
        self.hodge.grid()
    }

    pub fn hodge(&self) -> &Hodge {
        &self.hodge
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn geodesic(&self) -> &GeodesicConfig {
        &self.geodesic
    }

    pub fn flow(&self, x: &FrameVectorField) -> Result<GridMap> {
        flow_from_field(&self.metric, x, &self.geodesic)
    }

    /// The doubled grid on which flows and pullbacks are evaluated.
    pub fn fine_grid(&self) -> Grid {
        Grid::new(2 * self.grid().n()).expect("doubling a valid grid")
    }

    /// `F_X` on [`Self::fine_grid`].
    ///
    /// In coordinates the frame components of `X` reach one mode further in
    /// `z`, and the pullback multiplies pointwise. On the working grid both
    /// effects alias onto the retained modes and the defect stops matching
    /// the spectral operators near the edge of the spectrum.
    pub fn fine_flow(&self, x: &FrameVectorField) -> Result<GridMap> {
        let fine = self.fine_grid();
        let r = |f: &ScalarField| f.resample(fine);
        flow_from_field(&self.metric, &FrameVectorField::new(r(&x.t), r(&x.e1), r(&x.e2)), &self.geodesic)
    }

    /// `π_Q F*η` truncated to the working grid.
    pub fn map_defect(&self, map: &GridMap) -> RuminForm {
        let grid = self.grid();
        let beta = contact_defect(map);
        RuminForm::one(beta.comps()[0].resample(grid), beta.comps()[1].resample(grid))
    }

    /// `π_Q F_X*η`.
    pub fn defect(&self, x: &FrameVectorField) -> Result<RuminForm> {
        Ok(self.map_defect(&self.fine_flow(x)?))
    }

    fn green_zero(&self, f: ScalarField) -> Result<ScalarField> {
        let u = self.hodge.g_q(&RuminForm::scalar(f))?;
        Ok(u.into_comps().remove(0))
    }

    fn harmonic_zero(&self, f: &ScalarField) -> ScalarField {
        self.hodge.h_q(&RuminForm::scalar(f.clone())).into_comps().remove(0)
    }

    /// `g_X = −2 G δ(X_H ⌟ dη) + ℋ(X⁰)`.
    fn phi_g(&self, x: &FrameVectorField) -> Result<ScalarField> {
        let div = delta_q(&flat(x))?.into_comps().remove(0);
        Ok(&self.harmonic_zero(&x.t) - &self.green_zero(div)?.scaled(2.0))
    }

    /// `Φ(X)`, with `β = π_Q F_X*η`:
    /// `α = 2 G δ β` and `ω = G D*D β + ℋ β`.
    pub fn phi(&self, x: &FrameVectorField) -> Result<(PhiValue, RuminForm)> {
        let beta = self.defect(x)?;
        let g = self.phi_g(x)?;
        let alpha = self
            .green_zero(delta_q(&beta)?.into_comps().remove(0))?
            .scaled(2.0);
        let high = big_d_q_star(&big_d_q(&beta)?)?;
        let omega = self.hodge.g_q(&high)?.plus(&self.hodge.h_q(&beta));
        Ok((PhiValue { g, alpha, omega }, beta))
    }

    /// `dΦ₀(Y)` by central differences.
    pub fn phi_derivative_at_zero(&self, y: &FrameVectorField, step: f64) -> Result<PhiValue> {
        let (plus, _) = self.phi(&y.scaled(step))?;
        let (minus, _) = self.phi(&y.scaled(-step))?;
        Ok(plus.minus(&minus).scaled(0.5 / step))
    }

    /// Residuals of the contact-field characterization.
    pub fn check_contact_field(&self, x: &FrameVectorField) -> Result<ContactResiduals> {
        let scale = x.l2_norm().max(f64::MIN_POSITIVE);
        let horiz = flat(x);
        let div = delta_q(&horiz)?.into_comps().remove(0);
        let reeb = &(&x.t - &self.harmonic_zero(&x.t)) + &self.green_zero(div)?.scaled(2.0);
        Ok(ContactResiduals {
            reeb_part: reeb.l2_norm() / scale,
            harmonic: self.hodge.h_q(&horiz).l2_norm() / scale,
            middle: big_d_q(&horiz)?.l2_norm() / scale,
        })
    }

    /// `Ψ(X_g)` by Newton iteration with the Jacobian frozen at `0`:
    /// `X_{k+1} = X_k − dΦ₀⁻¹(Φ(X_k) − (g*, 0, 0))`, with `g*` the first
    /// component of `Φ(X_g)`, until `‖π_Q F_X*η‖₀ ≤ tol`.
    pub fn solve_psi(
        &self,
        g: &GeneratingFunction,
        tol: f64,
        max_iterations: usize,
    ) -> Result<(FrameVectorField, SolveReport)> {
        let mut x = contact_field_from_g(g.field());
        let mut history = Vec::new();
        let mut target: Option<ScalarField> = None;
        for iteration in 0..=max_iterations {
            let (value, beta) = self.phi(&x)?;
            let defect = beta.l2_norm();
            if !defect.is_finite() {
                return Err(Error::NonFinite("Psi iteration"));
            }
            let target = target.get_or_insert_with(|| value.g.clone());
            let mut record = IterationRecord {
                iteration,
                defect,
                defect_fs1: fs_norm(&beta, 1)?,
                step: 0.0,
            };
            if defect <= tol {
                history.push(record);
                return Ok((
                    x,
                    SolveReport {
                        iterations: iteration,
                        history,
                        converged: true,
                        final_defect: defect,
                    },
                ));
            }
            if iteration == max_iterations {
                history.push(record);
                break;
            }
            let correction = dphi0_inverse(&value.minus(&PhiValue::from_g(target.clone())))?;
            record.step = correction.l2_norm();
            history.push(record);
            x = x.minus(&correction);
        }
        Err(Error::PsiNotConverged {
            iterations: max_iterations,
            defect: history.last().map_or(f64::NAN, |r| r.defect),
        })
    }
}
