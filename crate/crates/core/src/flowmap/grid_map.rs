//! Maps of the torus sampled on the grid.

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::contact_model::QuarterTurn;
use crate::error::{Error, Result};
use crate::spectral_grid::{unwrap, wrap, Axis, CoordOneForm, CoordTwoForm, Grid, Interpolant, ScalarField};

/// Newton tolerance and iteration cap for [`GridMap::inverse`].
pub const INVERSE_TOLERANCE: f64 = 1e-12;
pub const INVERSE_MAX_ITERATIONS: usize = 50;

/// Smallest Jacobian determinant accepted for near-identity maps.
pub const MIN_JACOBIAN: f64 = 0.1;

/// `F(x) = A x + b + u(x)`, with `A` an integer matrix of determinant ±1,
/// `b` a constant shift and `u` a periodic displacement.
///
/// Near-identity maps have `A = I` and `b = 0`; the quarter-turn symmetries
/// need the linear part.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMap {
    linear: [[i64; 3]; 3],
    shift: [f64; 3],
    displacement: [ScalarField; 3],
}

const IDENTITY: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn mat_vec(a: &[[i64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|j| a[i][j] as f64 * v[j]).sum())
}

fn mat_mat(a: &[[i64; 3]; 3], b: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

fn integer_inverse(a: &[[i64; 3]; 3]) -> Result<[[i64; 3]; 3]> {
    let m = Matrix3::from_fn(|i, j| a[i][j] as f64);
    let det = m.determinant();
    if (det.abs() - 1.0).abs() > 1e-9 {
        return Err(Error::JacobianDegenerate { min_det: det });
    }
    let inv = m.try_inverse().ok_or(Error::JacobianDegenerate { min_det: det })?;
    Ok([0, 1, 2].map(|i| [0, 1, 2].map(|j| inv[(i, j)].round() as i64)))
}

impl GridMap {
    pub fn identity(grid: Grid) -> Self {
        Self::from_displacement([0, 1, 2].map(|_| ScalarField::zeros(grid)))
    }

    pub fn from_displacement(displacement: [ScalarField; 3]) -> Self {
        Self {
            linear: IDENTITY,
            shift: [0.0; 3],
            displacement,
        }
    }

    /// `x ↦ x + v`.
    pub fn translation(grid: Grid, v: [f64; 3]) -> Self {
        Self::from_displacement(v.map(|c| ScalarField::constant(grid, c)))
    }

    pub fn quarter_turn(grid: Grid, q: QuarterTurn) -> Self {
        Self {
            linear: q.linear(),
            shift: [0.0, 0.0, q.angle()],
            displacement: [0, 1, 2].map(|_| ScalarField::zeros(grid)),
        }
    }

    pub fn grid(&self) -> Grid {
        self.displacement[0].grid()
    }

    pub fn linear(&self) -> [[i64; 3]; 3] {
        self.linear
    }

    pub fn shift(&self) -> [f64; 3] {
        self.shift
    }

    pub fn displacement(&self) -> &[ScalarField; 3] {
        &self.displacement
    }

    pub fn is_near_identity(&self) -> bool {
        self.linear == IDENTITY && self.shift == [0.0; 3]
    }

    /// `F` at every grid point, in unreduced coordinates.
    pub fn images(&self) -> Vec<[f64; 3]> {
        let g = self.grid();
        let u = self.displacement.each_ref().map(|c| c.values());
        (0..g.len())
            .map(|idx| {
                let base = mat_vec(&self.linear, g.point(idx));
                [0, 1, 2].map(|i| base[i] + self.shift[i] + u[i][idx])
            })
            .collect()
    }

    /// `F` at an arbitrary point, by interpolating the displacement.
    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let u = Interpolant::new(&self.displacement.each_ref()).eval(p);
        let base = mat_vec(&self.linear, p);
        [0, 1, 2].map(|i| base[i] + self.shift[i] + u[i])
    }

    /// `DF = A + Du`, entry `[i][j] = ∂_j F^i`.
    pub fn jacobian(&self) -> [[ScalarField; 3]; 3] {
        [0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| {
                self.displacement[i]
                    .partial_derivative(Axis::ALL[j])
                    .map(|v| v + self.linear[i][j] as f64)
            })
        })
    }

    pub fn min_jacobian_det(&self) -> f64 {
        let jac = self.jacobian();
        (0..self.grid().len())
            .map(|idx| Matrix3::from_fn(|i, j| jac[i][j].values()[idx]).determinant())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn sup_displacement(&self) -> f64 {
        self.displacement.iter().map(|c| c.sup_norm()).fold(0.0, f64::max)
    }

    /// Checks the near-identity budget and the Jacobian determinant.
    pub fn validate(&self, budget: f64) -> Result<()> {
        let sup = self.sup_displacement();
        if sup > budget {
            return Err(Error::DisplacementTooLarge { sup });
        }
        let min_det = self.min_jacobian_det();
        if min_det < MIN_JACOBIAN {
            return Err(Error::JacobianDegenerate { min_det });
        }
        Ok(())
    }

    /// `sup_x |F(x) − x|`, differences taken mod 2π.
    pub fn distance_from_identity(&self) -> f64 {
        let g = self.grid();
        self.images()
            .iter()
            .enumerate()
            .flat_map(|(idx, y)| {
                let x = g.point(idx);
                (0..3).map(move |i| unwrap(y[i] - x[i]).abs())
            })
            .fold(0.0, f64::max)
    }

    /// `f ∘ F`.
    pub fn pull_back_scalar(&self, f: &ScalarField) -> ScalarField {
        let values = Interpolant::new(&[f])
            .eval_many(&self.images())
            .into_iter()
            .map(|v| v[0])
            .collect();
        ScalarField::from_values(self.grid(), values)
    }

    /// `(F*ψ)_j = ψ_i(F) ∂_j F^i`.
    pub fn pull_back_one(&self, psi: &OneFormSource) -> CoordOneForm {
        let at_image = psi.sample(&self.images());
        let jac = self.jacobian();
        let g = self.grid();
        CoordOneForm::new([0, 1, 2].map(|j| {
            ScalarField::from_values(
                g,
                (0..g.len())
                    .map(|idx| (0..3).map(|i| at_image[idx][i] * jac[i][j].values()[idx]).sum())
                    .collect(),
            )
        }))
    }

    /// Pullback of a 2-form stored as `B` with `β(U, V) = B·(U × V)`:
    /// `F*B = cof(DF)ᵀ B(F)`.
    pub fn pull_back_two(&self, psi: &OneFormSource) -> CoordTwoForm {
        let at_image = psi.sample(&self.images());
        let jac = self.jacobian();
        let g = self.grid();
        let mut out = [0, 1, 2].map(|_| Vec::with_capacity(g.len()));
        for (idx, b) in at_image.iter().enumerate() {
            let m = Matrix3::from_fn(|i, j| jac[i][j].values()[idx]);
            // cof(M) = det(M) M^{-T}, so cof(M)ᵀ = adj(M)
            let adj = m.try_inverse().map(|inv| inv * m.determinant()).unwrap_or_else(Matrix3::zeros);
            for (k, slot) in out.iter_mut().enumerate() {
                slot.push((0..3).map(|i| adj[(k, i)] * b[i]).sum());
            }
        }
        CoordTwoForm::new(out.map(|v| ScalarField::from_values(g, v)))
    }

    /// `second ∘ first`.
    pub fn compose(first: &Self, second: &Self) -> Self {
        let g = first.grid();
        let moved = Interpolant::new(&second.displacement.each_ref()).eval_many(&first.images());
        let inner = mat_vec(&second.linear, first.shift);
        let displacement = [0, 1, 2].map(|i| {
            ScalarField::from_values(
                g,
                (0..g.len())
                    .map(|idx| {
                        let u = [0, 1, 2].map(|k| first.displacement[k].values()[idx]);
                        mat_vec(&second.linear, u)[i] + moved[idx][i]
                    })
                    .collect(),
            )
        });
        Self {
            linear: mat_mat(&second.linear, &first.linear),
            shift: [0, 1, 2].map(|i| inner[i] + second.shift[i]),
            displacement,
        }
    }

    /// `F⁻¹`, by damped Newton on `A y + b + u(y) = x` at every grid point,
    /// started from `y = A⁻¹(x − b − u(x))`.
    pub fn inverse(&self) -> Result<Self> {
        let g = self.grid();
        let a_inv = integer_inverse(&self.linear)?;
        let interp = Interpolant::new(&self.displacement.each_ref());
        let a = Matrix3::from_fn(|i, j| self.linear[i][j] as f64);
        let residual = |y: [f64; 3], x: [f64; 3], vals: &[(f64, [f64; 3])]| {
            let base = mat_vec(&self.linear, y);
            [0, 1, 2].map(|i| unwrap(base[i] + self.shift[i] + vals[i].0 - x[i]))
        };
        let norm = |r: [f64; 3]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));

        let solved: Vec<std::result::Result<[f64; 3], f64>> = (0..g.len())
            .into_par_iter()
            .map(|idx| {
                let x = g.point(idx);
                let u0 = [0, 1, 2].map(|i| self.displacement[i].values()[idx]);
                let mut y = mat_vec(&a_inv, [0, 1, 2].map(|i| x[i] - self.shift[i] - u0[i]));
                let mut vals = interp.eval_with_gradient(y);
                let mut r = residual(y, x, &vals);
                for _ in 0..INVERSE_MAX_ITERATIONS {
                    if norm(r) <= INVERSE_TOLERANCE {
                        return Ok(y);
                    }
                    let jm = a + Matrix3::from_fn(|i, j| vals[i].1[j]);
                    let Some(step) = jm.try_inverse().map(|inv| inv * nalgebra::Vector3::from(r)) else {
                        return Err(norm(r));
                    };
                    let mut damping = 1.0;
                    loop {
                        let trial = [0, 1, 2].map(|i| y[i] - damping * step[i]);
                        let trial_vals = interp.eval_with_gradient(trial);
                        let trial_r = residual(trial, x, &trial_vals);
                        if norm(trial_r) < norm(r) || damping < 1e-3 {
                            y = trial;
                            vals = trial_vals;
                            r = trial_r;
                            break;
                        }
                        damping *= 0.5;
                    }
                }
                if norm(r) <= INVERSE_TOLERANCE {
                    Ok(y)
                } else {
                    Err(norm(r))
                }
            })
            .collect();

        let worst = solved
            .iter()
            .filter_map(|s| s.err())
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        if let Some(worst_residual) = worst {
            return Err(Error::InversionFailed { worst_residual });
        }
        let shift = mat_vec(&a_inv, self.shift).map(|v| -v);
        let displacement = [0, 1, 2].map(|i| {
            ScalarField::from_values(
                g,
                solved
                    .iter()
                    .enumerate()
                    .map(|(idx, y)| {
                        let y = y.expect("checked above");
                        let base = mat_vec(&a_inv, g.point(idx));
                        unwrap(y[i] - base[i] - shift[i])
                    })
                    .collect(),
            )
        });
        Ok(Self {
            linear: a_inv,
            shift,
            displacement,
        })
    }
}

/// A form to be pulled back: closed-form coefficients or a grid form
/// (then sampled through its trigonometric interpolant).
pub enum OneFormSource<'a> {
    Analytic(&'a (dyn Fn([f64; 3]) -> [f64; 3] + Sync)),
    Grid(&'a [ScalarField; 3]),
}

impl OneFormSource<'_> {
    /// Coefficients at arbitrary points.
    pub fn sample(&self, points: &[[f64; 3]]) -> Vec<[f64; 3]> {
        match self {
            Self::Analytic(f) => points.par_iter().map(|&p| f(p.map(wrap))).collect(),
            Self::Grid(c) => Interpolant::new(&c.each_ref())
                .eval_many(points)
                .into_iter()
                .map(|v| [v[0], v[1], v[2]])
                .collect(),
        }
    }

    /// Coefficients on the grid points.
    pub fn on_grid(&self, grid: Grid) -> [ScalarField; 3] {
        match self {
            Self::Analytic(f) => [0, 1, 2].map(|i| ScalarField::from_fn(grid, |p| f(p)[i])),
            Self::Grid(c) => (*c).clone(),
        }
    }
}

/// Coefficients of `η = cos z dx + sin z dy`.
pub fn eta_coefficients(p: [f64; 3]) -> [f64; 3] {
    [p[2].cos(), p[2].sin(), 0.0]
}

/// Coefficients of `dη` in the basis `(dy∧dz, dz∧dx, dx∧dy)`.
pub fn d_eta_coefficients(p: [f64; 3]) -> [f64; 3] {
    [-p[2].cos(), -p[2].sin(), 0.0]
}
