//! Scaling experiments for `Ψ(X) − X`, the derivative of composition and the
//! group operations.

use serde::Serialize;

use super::{contact_field_from_g, ContactChart, GeneratingFunction};
use crate::contact_model::{FrameVectorField, QuarterTurn};
use crate::error::Result;
use crate::flowmap::GridMap;
use crate::folland_stein::fs_norm;
use crate::spectral_grid::{gradient, ScalarField};

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

fn psi_minus_identity(
    chart: &ContactChart,
    g: &GeneratingFunction,
    tol: f64,
    max_iterations: usize,
) -> Result<(FrameVectorField, FrameVectorField)> {
    let x = contact_field_from_g(g.field());
    let (psi, _) = chart.solve_psi(g, tol, max_iterations)?;
    Ok((psi.minus(&x), x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticRow {
    pub t: f64,
    pub s: usize,
    pub norm: f64,
}

/// `‖Ψ(X_{tg}) − X_{tg}‖_s` over `t`, with the fitted log-log slope per `s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadraticScaling {
    pub rows: Vec<QuadraticRow>,
    pub slopes: Vec<(usize, f64)>,
}

pub fn quadratic_scaling_experiment(
    chart: &ContactChart,
    g: &GeneratingFunction,
    s_list: &[usize],
    t_list: &[f64],
    tol: f64,
    max_iterations: usize,
) -> Result<QuadraticScaling> {
    let mut rows = Vec::new();
    for &t in t_list {
        let (diff, _) = psi_minus_identity(chart, &g.scaled(t), tol, max_iterations)?;
        for &s in s_list {
            rows.push(QuadraticRow {
                t,
                s,
                norm: fs_norm(&diff, s)?,
            });
        }
    }
    let slopes = s_list
        .iter()
        .map(|&s| {
            let (ts, ns): (Vec<f64>, Vec<f64>) = rows.iter().filter(|r| r.s == s).map(|r| (r.t, r.norm)).unzip();
            (s, loglog_slope(&ts, &ns))
        })
        .collect();
    Ok(QuadraticScaling { rows, slopes })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub mode: usize,
    pub error: f64,
    /// `‖Ψ(X) − X‖_s / (‖X‖_s ‖X‖_{s−1})`.
    pub mixed_ratio: f64,
    /// `‖Ψ(X) − X‖_s / ‖X‖_s²`.
    pub square_ratio: f64,
}

/// Frequency sweep over `g_m = (amplitude/m) sin(m x)`.
pub fn mixed_norm_sweep(
    chart: &ContactChart,
    modes: &[usize],
    amplitude: f64,
    s: usize,
    tol: f64,
    max_iterations: usize,
) -> Result<Vec<SweepRow>> {
    modes
        .iter()
        .map(|&m| {
            let a = amplitude / m as f64;
            let g = GeneratingFunction::new(ScalarField::from_fn(chart.grid(), |p| a * (m as f64 * p[0]).sin()))?;
            let (diff, x) = psi_minus_identity(chart, &g, tol, max_iterations)?;
            let error = fs_norm(&diff, s)?;
            let top = fs_norm(&x, s)?;
            let below = fs_norm(&x, s.saturating_sub(1))?;
            Ok(SweepRow {
                mode: m,
                error,
                mixed_ratio: error / (top * below),
                square_ratio: error / (top * top),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DifferenceRow {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `‖(Ψ(X₂) − X₂) − (Ψ(X₁) − X₁)‖_s` against
/// `‖X₂ − X₁‖_{s−1}(‖X₂‖_s + ‖X₁‖_s) + ‖X₂ − X₁‖_s(‖X₂‖_{s−1} + ‖X₁‖_{s−1})`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DifferenceScaling {
    pub s: usize,
    pub rows: Vec<DifferenceRow>,
    /// Largest relative deviation of a ratio from their mean.
    pub spread: f64,
}

pub fn difference_scaling_experiment(
    chart: &ContactChart,
    g1: &GeneratingFunction,
    g2: &GeneratingFunction,
    s: usize,
    t_list: &[f64],
    tol: f64,
    max_iterations: usize,
) -> Result<DifferenceScaling> {
    let below = s.saturating_sub(1);
    let mut rows = Vec::new();
    for &t in t_list {
        let (d1, x1) = psi_minus_identity(chart, &g1.scaled(t), tol, max_iterations)?;
        let (d2, x2) = psi_minus_identity(chart, &g2.scaled(t), tol, max_iterations)?;
        let lhs = fs_norm(&d2.minus(&d1), s)?;
        let gap = x2.minus(&x1);
        let rhs = fs_norm(&gap, below)? * (fs_norm(&x2, s)? + fs_norm(&x1, s)?)
            + fs_norm(&gap, s)? * (fs_norm(&x2, below)? + fs_norm(&x1, below)?);
        rows.push(DifferenceRow {
            t,
            lhs,
            rhs,
            ratio: lhs / rhs,
        });
    }
    let mean = rows.iter().map(|r| r.ratio).sum::<f64>() / rows.len() as f64;
    let spread = rows.iter().map(|r| (r.ratio - mean).abs() / mean).fold(0.0, f64::max);
    Ok(DifferenceScaling { s, rows, spread })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositionRow {
    pub t: f64,
    pub error: f64,
}

/// `‖(u ∘ F_{Ψ(X_{th})} − u)/t − X_h ⌟ du‖₀` over `t`, with its convergence order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompositionDerivative {
    pub rows: Vec<CompositionRow>,
    pub order: f64,
}

pub fn composition_derivative_check(
    chart: &ContactChart,
    u: &ScalarField,
    h: &GeneratingFunction,
    t_list: &[f64],
    tol: f64,
    max_iterations: usize,
) -> Result<CompositionDerivative> {
    let xh = contact_field_from_g(h.field()).to_coords();
    let du = gradient(u);
    let target = (0..3)
        .map(|i| xh[i].multiply(&du[i]))
        .reduce(|a, b| a + b)
        .expect("three components");
    let mut rows = Vec::new();
    for &t in t_list {
        let (x, _) = chart.solve_psi(&h.scaled(t), tol, max_iterations)?;
        let moved = chart.flow(&x)?.pull_back_scalar(u);
        let quotient = (&moved - u).scaled(1.0 / t);
        rows.push(CompositionRow {
            t,
            error: (&quotient - &target).l2_norm(),
        });
    }
    let (ts, es): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r.t, r.error)).unzip();
    let order = if es.iter().all(|&e| e > 0.0) {
        loglog_slope(&ts, &es)
    } else {
        f64::INFINITY
    };
    Ok(CompositionDerivative { rows, order })
}

/// Contact defects of products and inverses of solved maps.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GroupClosure {
    pub defect_first: f64,
    pub defect_second: f64,
    /// Defect of `F₂ ∘ F₁`.
    pub defect_composed: f64,
    /// Defect of `F₁⁻¹`.
    pub defect_inverse: f64,
    /// `sup |F₁ ∘ F₁⁻¹ − id|`.
    pub identity_distance: f64,
    /// Defect of `F_c ∘ F₁` for the quarter-turn symmetry.
    pub defect_with_symmetry: f64,
}

pub fn group_closure_experiment(
    chart: &ContactChart,
    g1: &GeneratingFunction,
    g2: &GeneratingFunction,
    tol: f64,
    max_iterations: usize,
) -> Result<GroupClosure> {
    let (x1, _) = chart.solve_psi(g1, tol, max_iterations)?;
    let (x2, _) = chart.solve_psi(g2, tol, max_iterations)?;
    let f1 = chart.fine_flow(&x1)?;
    let f2 = chart.fine_flow(&x2)?;
    let inv = f1.inverse()?;
    let symmetry = GridMap::quarter_turn(chart.fine_grid(), QuarterTurn(1));
    let defect = |m: &GridMap| chart.map_defect(m).l2_norm();
    Ok(GroupClosure {
        defect_first: defect(&f1),
        defect_second: defect(&f2),
        defect_composed: defect(&GridMap::compose(&f1, &f2)),
        defect_inverse: defect(&inv),
        identity_distance: GridMap::compose(&inv, &f1).distance_from_identity(),
        defect_with_symmetry: defect(&GridMap::compose(&f1, &symmetry)),
    })
}
