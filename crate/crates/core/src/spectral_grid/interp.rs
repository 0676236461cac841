use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::wavenumber;
use super::field::ScalarField;
use super::grid::Grid;

/// Direct-summation evaluator for several real fields sharing one grid.
///
/// The Nyquist slot is evaluated as `cos(N x / 2)`, so the interpolant is real
/// and reproduces the grid values to rounding. Gradients treat the Nyquist
/// slot as having zero derivative, matching [`ScalarField::partial_derivative`].
///
/// Lines of coefficients and `z` slots whose entries all sit below
/// [`PRUNE_LEVEL`] times the largest coefficient are skipped.
pub struct Interpolant {
    grid: Grid,
    fields: Vec<Pruned>,
}

/// Relative size below which coefficients are treated as rounding noise.
pub const PRUNE_LEVEL: f64 = 1e-14;

struct Pruned {
    coeffs: Vec<Complex64>,
    /// `(i, j)` pairs of half-spectrum `x` slot and `y` slot worth summing.
    lines: Vec<(usize, usize)>,
    z_slots: Vec<usize>,
}

impl Pruned {
    fn new(coeffs: Vec<Complex64>, n: usize) -> Self {
        let top = coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let floor = top * PRUNE_LEVEL;
        let mut lines = Vec::new();
        let mut z_used = vec![false; n];
        for i in 0..=n / 2 {
            for j in 0..n {
                let base = (i * n + j) * n;
                let mut used = false;
                for (k, c) in coeffs[base..base + n].iter().enumerate() {
                    if c.norm() > floor {
                        used = true;
                        z_used[k] = true;
                    }
                }
                if used {
                    lines.push((i, j));
                }
            }
        }
        let z_slots = (0..n).filter(|&k| z_used[k]).collect();
        Self { coeffs, lines, z_slots }
    }
}

struct AxisTable {
    value: Vec<Complex64>,
    slope: Vec<Complex64>,
}

impl Interpolant {
    pub fn new(fields: &[&ScalarField]) -> Self {
        let grid = fields.first().expect("at least one field").grid();
        let fields = fields
            .iter()
            .map(|f| {
                assert_eq!(f.grid(), grid, "fields live on different grids");
                Pruned::new(f.coefficients(), grid.n())
            })
            .collect();
        Self { grid, fields }
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    fn table(&self, x: f64) -> AxisTable {
        let n = self.grid.n();
        let mut value = Vec::with_capacity(n);
        let mut slope = Vec::with_capacity(n);
        for m in 0..n {
            if m == n / 2 {
                value.push(Complex64::new((x * (n / 2) as f64).cos(), 0.0));
                slope.push(Complex64::default());
            } else {
                let k = wavenumber(m, n) as f64;
                let e = Complex64::from_polar(1.0, k * x);
                value.push(e);
                slope.push(e * Complex64::new(0.0, k));
            }
        }
        AxisTable { value, slope }
    }

    // Real fields pair slot kx with −kx, so only kx ∈ [0, N/2] is summed,
    // interior slots with weight two.
    fn half_weight(&self, i: usize) -> f64 {
        let n = self.grid.n();
        if i == 0 || i == n / 2 {
            1.0
        } else {
            2.0
        }
    }

    /// Values of every field at one point.
    pub fn eval(&self, p: [f64; 3]) -> Vec<f64> {
        let n = self.grid.n();
        let (tx, ty, tz) = (self.table(p[0]), self.table(p[1]), self.table(p[2]));
        self.fields
            .iter()
            .map(|f| {
                let mut total = Complex64::default();
                for &(i, j) in &f.lines {
                    let base = (i * n + j) * n;
                    let line: Complex64 = f.z_slots.iter().map(|&k| f.coeffs[base + k] * tz.value[k]).sum();
                    total += line * ty.value[j] * tx.value[i] * self.half_weight(i);
                }
                total.re
            })
            .collect()
    }

    /// Values and gradients of every field at one point.
    pub fn eval_with_gradient(&self, p: [f64; 3]) -> Vec<(f64, [f64; 3])> {
        let n = self.grid.n();
        let (tx, ty, tz) = (self.table(p[0]), self.table(p[1]), self.table(p[2]));
        self.fields
            .iter()
            .map(|f| {
                let mut acc = [Complex64::default(); 4];
                for &(i, j) in &f.lines {
                    let base = (i * n + j) * n;
                    let mut line = Complex64::default();
                    let mut line_z = Complex64::default();
                    for &k in &f.z_slots {
                        let a = f.coeffs[base + k];
                        line += a * tz.value[k];
                        line_z += a * tz.slope[k];
                    }
                    let w = self.half_weight(i);
                    let (vx, vy) = (tx.value[i] * w, ty.value[j]);
                    acc[0] += line * vy * vx;
                    acc[1] += line * vy * tx.slope[i] * w;
                    acc[2] += line * ty.slope[j] * vx;
                    acc[3] += line_z * vy * vx;
                }
                (acc[0].re, [acc[1].re, acc[2].re, acc[3].re])
            })
            .collect()
    }

    pub fn eval_many(&self, points: &[[f64; 3]]) -> Vec<Vec<f64>> {
        points.par_iter().map(|&p| self.eval(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_grid::{random_band_limited, Axis};

    #[test]
    fn gradient_matches_spectral_derivative() {
        let g = Grid::new(8).unwrap();
        let f = random_band_limited(g, 3, 3, 1.0).unwrap();
        let grads = Axis::ALL.map(|a| f.partial_derivative(a));
        let interp = Interpolant::new(&[&f]);
        let p = [0.3, 2.2, 5.1];
        let (v, d) = interp.eval_with_gradient(p)[0];
        assert!((v - interp.eval(p)[0]).abs() < 1e-13);
        for (axis, grad) in grads.iter().enumerate() {
            let want = Interpolant::new(&[grad]).eval(p)[0];
            assert!((d[axis] - want).abs() < 1e-12);
        }
    }
}
