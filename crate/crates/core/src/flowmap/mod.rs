//! The exponential chart: flows of vector fields, pullbacks, Lie derivatives
//! and the nonlinear part of the pullback.

mod exp;
mod grid_map;

pub use exp::{
    exp_map, exp_quadratic_coeff, exp_second_order, metric_length, observed_order, GeodesicConfig, DEFAULT_BUDGET,
    VELOCITY_STEP,
};
pub use grid_map::{
    d_eta_coefficients, eta_coefficients, GridMap, OneFormSource, INVERSE_MAX_ITERATIONS, INVERSE_TOLERANCE,
    MIN_JACOBIAN,
};

use rayon::prelude::*;
use std::f64::consts::FRAC_PI_2;

use crate::contact_model::{FrameVectorField, Metric};
use crate::error::{Error, Result};
use crate::rumin::{pi_q, RuminForm};
use crate::spectral_grid::{curl, unwrap, CoordOneForm, ScalarField};

/// `F_X = exp ∘ X`, evaluated at every grid point.
pub fn flow_from_field(metric: &Metric, x: &FrameVectorField, cfg: &GeodesicConfig) -> Result<GridMap> {
    flow_from_coords(metric, &x.to_coords(), cfg)
}

/// [`flow_from_field`] for a field given in coordinate components.
pub fn flow_from_coords(metric: &Metric, v: &[ScalarField; 3], cfg: &GeodesicConfig) -> Result<GridMap> {
    let g = v[0].grid();
    let ends = (0..g.len())
        .into_par_iter()
        .map(|idx| {
            let p = g.point(idx);
            let end = exp_map(metric, p, [0, 1, 2].map(|i| v[i].values()[idx]), cfg)?;
            Ok([0, 1, 2].map(|i| unwrap(end[i] - p[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    let u = [0, 1, 2].map(|i| ScalarField::from_values(g, ends.iter().map(|e| e[i]).collect()));
    let map = GridMap::from_displacement(u);
    let sup = map.sup_displacement();
    if sup > FRAC_PI_2 {
        return Err(Error::DisplacementTooLarge { sup });
    }
    let min_det = map.min_jacobian_det();
    if min_det < MIN_JACOBIAN {
        return Err(Error::JacobianDegenerate { min_det });
    }
    Ok(map)
}

/// `ℒ_X ψ = X ⌟ dψ + d(X ⌟ ψ)` for a coordinate 1-form, with dealiased products.
pub fn lie_derivative(x: &[ScalarField; 3], psi: &CoordOneForm) -> CoordOneForm {
    let c = curl(&psi.comps);
    let contraction = (0..3)
        .map(|i| x[i].multiply(&psi.comps[i]))
        .reduce(|a, b| a + b)
        .expect("three components");
    // (X ⌟ dψ)_j = (C × X)_j with C = curl ψ
    let interior = [
        &c[1].multiply(&x[2]) - &c[2].multiply(&x[1]),
        &c[2].multiply(&x[0]) - &c[0].multiply(&x[2]),
        &c[0].multiply(&x[1]) - &c[1].multiply(&x[0]),
    ];
    CoordOneForm::new(interior).plus(&CoordOneForm::exact(&contraction))
}

/// `Quad_ψ(X) = F_X*ψ − ψ − ℒ_X ψ`.
pub fn quad_remainder(
    metric: &Metric,
    x: &FrameVectorField,
    psi: &OneFormSource,
    cfg: &GeodesicConfig,
) -> Result<CoordOneForm> {
    let v = x.to_coords();
    let grid_psi = CoordOneForm::new(psi.on_grid(x.grid()));
    let pulled = flow_from_coords(metric, &v, cfg)?.pull_back_one(psi);
    Ok(pulled.minus(&grid_psi).minus(&lie_derivative(&v, &grid_psi)))
}

/// `π_Q(F*η)`, which vanishes exactly when `F` is contact.
pub fn contact_defect(map: &GridMap) -> RuminForm {
    pi_q(&map.pull_back_one(&OneFormSource::Analytic(&eta_coefficients)))
}
