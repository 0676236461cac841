//! Geodesic exponential map of the adapted metric.

use gauss_quad::GaussLegendre;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use crate::contact_model::Metric;
use crate::error::{Error, Result};

/// Integrator settings for geodesics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeodesicConfig {
    /// RK4 steps per unit of the curve parameter.
    pub steps: usize,
    /// Gauss–Legendre nodes for the remainder integral.
    pub quadrature_nodes: usize,
    /// Largest admissible `|X|_g`.
    pub budget: f64,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self {
            steps: 32,
            quadrature_nodes: 64,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl GeodesicConfig {
    pub fn new(steps: usize, quadrature_nodes: usize) -> Result<Self> {
        if steps < 8 {
            return Err(Error::Config(format!("geodesic step count {steps} is below 8")));
        }
        if quadrature_nodes == 0 {
            return Err(Error::Config("quadrature needs at least one node".into()));
        }
        Ok(Self {
            steps,
            quadrature_nodes,
            ..Self::default()
        })
    }
}

/// Default bound on `|X|_g` and on displacements of near-identity maps.
pub const DEFAULT_BUDGET: f64 = 0.5;

/// Step of the central difference for `∂y/∂X` in the remainder integral.
pub const VELOCITY_STEP: f64 = 1e-4;

fn add(a: [f64; 3], b: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

/// `|X|_g` at `x`.
pub fn metric_length(metric: &Metric, x: [f64; 3], v: [f64; 3]) -> f64 {
    let g = metric.coords(x[2]);
    let mut acc = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            acc += g[i][j] * v[i] * v[j];
        }
    }
    acc.sqrt()
}

/// `γ(1)` for the geodesic with `γ(0) = x`, `γ'(0) = v`, without the budget check.
fn geodesic_end(metric: &Metric, x: [f64; 3], v: [f64; 3], steps: usize) -> Result<[f64; 3]> {
    if metric.is_flat() {
        return Ok(add(x, v, 1.0));
    }
    // state (y, w) with y'' = −Γ(y)(w, w)
    let accel = |y: [f64; 3], w: [f64; 3]| {
        let a = Metric::contract(&metric.christoffels(y), w, w);
        [-a[0], -a[1], -a[2]]
    };
    let h = 1.0 / steps as f64;
    let (mut y, mut w) = (x, v);
    for _ in 0..steps {
        let (k1y, k1w) = (w, accel(y, w));
        let (y2, w2) = (add(y, k1y, h / 2.0), add(w, k1w, h / 2.0));
        let (k2y, k2w) = (w2, accel(y2, w2));
        let (y3, w3) = (add(y, k2y, h / 2.0), add(w, k2w, h / 2.0));
        let (k3y, k3w) = (w3, accel(y3, w3));
        let (y4, w4) = (add(y, k3y, h), add(w, k3w, h));
        let (k4y, k4w) = (w4, accel(y4, w4));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1y[i] + 2.0 * k2y[i] + 2.0 * k3y[i] + k4y[i]);
            w[i] += h / 6.0 * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i]);
        }
    }
    if y.iter().chain(&w).all(|c| c.is_finite()) {
        Ok(y)
    } else {
        Err(Error::Geodesic(format!("non-finite state from x = {x:?}, X = {v:?}")))
    }
}

/// `exp(x, X)`: exactly `x + X` for the flat metric, RK4 otherwise.
/// Coordinates are not reduced mod 2π.
pub fn exp_map(metric: &Metric, x: [f64; 3], v: [f64; 3], cfg: &GeodesicConfig) -> Result<[f64; 3]> {
    let len = metric_length(metric, x, v);
    if len > cfg.budget {
        return Err(Error::OutsideChart {
            sup: len,
            budget: cfg.budget,
        });
    }
    geodesic_end(metric, x, v, cfg.steps)
}

static RULES: Lazy<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn rule(nodes: usize) -> Arc<GaussLegendre> {
    let mut cache = RULES.lock().expect("quadrature cache poisoned");
    cache
        .entry(nodes)
        .or_insert_with(|| Arc::new(GaussLegendre::new(NonZeroUsize::new(nodes).expect("nodes > 0"))))
        .clone()
}

/// `B(x, X)·X·X = −∫₀¹ (1 − t) Γ(γ(t))(γ'(t), γ'(t)) dt` along `γ(t) = exp(x, tX)`,
/// with `γ'` from central differences of the exponential map.
pub fn exp_quadratic_coeff(metric: &Metric, x: [f64; 3], v: [f64; 3], cfg: &GeodesicConfig) -> Result<[f64; 3]> {
    if metric.is_flat() {
        return Ok([0.0; 3]);
    }
    let point = |t: f64| geodesic_end(metric, x, [v[0] * t, v[1] * t, v[2] * t], cfg.steps);
    let mut acc = [0.0; 3];
    for &(node, weight) in rule(cfg.quadrature_nodes).as_node_weight_pairs() {
        let t = 0.5 * (node + 1.0);
        let y = point(t)?;
        let ahead = point(t + VELOCITY_STEP)?;
        let behind = point(t - VELOCITY_STEP)?;
        let vel = [0, 1, 2].map(|i| (ahead[i] - behind[i]) / (2.0 * VELOCITY_STEP));
        let a = Metric::contract(&metric.christoffels(y), vel, vel);
        for i in 0..3 {
            acc[i] -= 0.5 * weight * (1.0 - t) * a[i];
        }
    }
    Ok(acc)
}

/// Leading term of the remainder, `−½ Γ(x)(X, X)`.
pub fn exp_second_order(metric: &Metric, x: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    Metric::contract(&metric.christoffels(x), v, v).map(|a| -0.5 * a)
}

/// Self-convergence order of the integrator at `(x, X)`, from three step counts.
pub fn observed_order(metric: &Metric, x: [f64; 3], v: [f64; 3], steps: usize) -> Result<f64> {
    let coarse = geodesic_end(metric, x, v, steps)?;
    let mid = geodesic_end(metric, x, v, 2 * steps)?;
    let fine = geodesic_end(metric, x, v, 4 * steps)?;
    let dist = |a: [f64; 3], b: [f64; 3]| (0..3).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt();
    Ok((dist(coarse, mid) / dist(mid, fine)).log2())
}
