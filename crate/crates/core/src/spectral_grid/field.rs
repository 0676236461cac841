use std::f64::consts::TAU;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use super::fft::{fft3, slot};
use super::grid::{Axis, Grid};
use super::interp::Interpolant;
use super::spectrum::Spectrum;
use crate::error::{Error, Result};

/// Real function on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn from_values(grid: Grid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "value count does not match grid");
        Self { grid, values }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = (0..grid.len()).map(|idx| f(grid.point(idx))).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Pointwise product of grid values, no dealiasing.
    pub fn hadamard(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    /// Pointwise product with a closed-form function of the position.
    pub fn times_fn(&self, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| v * f(self.grid.point(idx)))
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn check_finite(self, what: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// Fourier coefficients `c_k = N⁻³ Σ f e^{-ik·x}` in FFT slot order.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft3(&mut buf, self.grid.n(), false);
        let scale = 1.0 / self.grid.len() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    fn from_coefficients(grid: Grid, mut buf: Vec<Complex64>) -> Self {
        fft3(&mut buf, grid.n(), true);
        Self {
            grid,
            values: buf.into_iter().map(|c| c.re).collect(),
        }
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_field(self)
    }

    /// Spectral derivative along `axis`; the Nyquist mode is differentiated to zero.
    pub fn partial_derivative(&self, axis: Axis) -> Self {
        let n = self.grid.n();
        let mut buf = self.coefficients();
        for (idx, c) in buf.iter_mut().enumerate() {
            let (i, j, k) = self.grid.unravel(idx);
            let m = [i, j, k][axis.index()];
            let wave = if m == n / 2 {
                0
            } else {
                super::fft::wavenumber(m, n)
            };
            *c *= Complex64::new(0.0, wave as f64);
        }
        Self::from_coefficients(self.grid, buf)
    }

    pub fn gradient(&self) -> [Self; 3] {
        Axis::ALL.map(|a| self.partial_derivative(a))
    }

    /// Alias-free product: both factors are transformed onto a grid padded by 3/2,
    /// multiplied there, and the result is truncated to the retained modes.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let n = self.grid.n();
        let m = 3 * n / 2;
        let k = self.grid.max_mode() as i64;
        let pad = |f: &Self| {
            let c = f.coefficients();
            let mut buf = vec![Complex64::default(); m * m * m];
            for kx in -k..=k {
                for ky in -k..=k {
                    for kz in -k..=k {
                        let src = self.grid.index(slot(kx, n), slot(ky, n), slot(kz, n));
                        buf[(slot(kx, m) * m + slot(ky, m)) * m + slot(kz, m)] = c[src];
                    }
                }
            }
            fft3(&mut buf, m, true);
            buf
        };
        let a = pad(self);
        let b = pad(other);
        let mut prod: Vec<Complex64> = a
            .iter()
            .zip(&b)
            .map(|(x, y)| Complex64::new(x.re * y.re, 0.0))
            .collect();
        fft3(&mut prod, m, false);
        let scale = 1.0 / (m * m * m) as f64;
        let mut out = vec![Complex64::default(); self.grid.len()];
        for kx in -k..=k {
            for ky in -k..=k {
                for kz in -k..=k {
                    let src = (slot(kx, m) * m + slot(ky, m)) * m + slot(kz, m);
                    out[self.grid.index(slot(kx, n), slot(ky, n), slot(kz, n))] = prod[src] * scale;
                }
            }
        }
        Self::from_coefficients(self.grid, out)
    }

    /// Trapezoidal (spectrally exact) quadrature over the torus.
    pub fn integrate(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.grid.len() as f64
    }

    /// `L²` inner product by quadrature.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).sqrt()
    }

    /// Largest absolute grid value.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Evaluates the trigonometric interpolant at arbitrary points.
    pub fn eval_offgrid(&self, points: &[[f64; 3]]) -> Vec<f64> {
        Interpolant::new(&[self])
            .eval_many(points)
            .into_iter()
            .map(|v| v[0])
            .collect()
    }

    /// Same trigonometric polynomial sampled on a grid of another size. Modes that
    /// do not fit the target grid, and the Nyquist planes, are dropped.
    pub fn resample(&self, target: Grid) -> Self {
        if target == self.grid {
            return self.clone();
        }
        let (n, m) = (self.grid.n(), target.n());
        let k = self.grid.max_mode().min(target.max_mode()) as i64;
        let c = self.coefficients();
        let mut buf = vec![Complex64::default(); target.len()];
        for kx in -k..=k {
            for ky in -k..=k {
                for kz in -k..=k {
                    buf[target.index(slot(kx, m), slot(ky, m), slot(kz, m))] =
                        c[self.grid.index(slot(kx, n), slot(ky, n), slot(kz, n))];
                }
            }
        }
        Self::from_coefficients(target, buf)
    }

    /// Largest coefficient modulus with some `|k_i| > band`, relative to the largest overall.
    pub fn spectral_tail(&self, band: usize) -> f64 {
        let n = self.grid.n();
        let c = self.coefficients();
        let mut top: f64 = 0.0;
        let mut tail: f64 = 0.0;
        for (idx, v) in c.iter().enumerate() {
            let (i, j, k) = self.grid.unravel(idx);
            let beyond = [i, j, k]
                .iter()
                .any(|&s| super::fft::wavenumber(s, n).unsigned_abs() as usize > band);
            top = top.max(v.norm());
            if beyond {
                tail = tail.max(v.norm());
            }
        }
        if top == 0.0 {
            0.0
        } else {
            tail / top
        }
    }

    /// Projection onto the modes the spectral operators keep (drops the Nyquist planes).
    pub fn dealiased(&self) -> Self {
        self.spectrum().to_field()
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    /// Pointwise quotient; refuses divisors whose modulus drops below `floor`.
    pub fn divide(&self, divisor: &Self, floor: f64) -> Result<Self> {
        let min_abs = divisor.values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if min_abs < floor {
            return Err(Error::DivisionNearZero { min_abs });
        }
        Ok(self.zip_map(divisor, |a, b| a / b))
    }
}

/// Volume of the torus.
pub fn torus_volume() -> f64 {
    TAU.powi(3)
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: Self) -> ScalarField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: Self) -> ScalarField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(mut self, rhs: Self) -> ScalarField {
        self += &rhs;
        self
    }
}

impl Sub for ScalarField {
    type Output = ScalarField;
    fn sub(mut self, rhs: Self) -> ScalarField {
        self -= &rhs;
        self
    }
}

impl AddAssign<&ScalarField> for ScalarField {
    fn add_assign(&mut self, rhs: &ScalarField) {
        assert_eq!(self.grid, rhs.grid, "fields live on different grids");
        self.values.iter_mut().zip(&rhs.values).for_each(|(a, b)| *a += b);
    }
}

impl SubAssign<&ScalarField> for ScalarField {
    fn sub_assign(&mut self, rhs: &ScalarField) {
        assert_eq!(self.grid, rhs.grid, "fields live on different grids");
        self.values.iter_mut().zip(&rhs.values).for_each(|(a, b)| *a -= b);
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|v| -v)
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(mut self) -> ScalarField {
        self.values.iter_mut().for_each(|v| *v = -*v);
        self
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, s: f64) -> ScalarField {
        self.scaled(s)
    }
}

impl Mul<f64> for ScalarField {
    type Output = ScalarField;
    fn mul(mut self, s: f64) -> ScalarField {
        self.values.iter_mut().for_each(|v| *v *= s);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(16).unwrap()
    }

    #[test]
    fn derivative_of_sine() {
        let g = grid();
        let f = ScalarField::from_fn(g, |[x, _, _]| x.sin());
        let want = ScalarField::from_fn(g, |[x, _, _]| x.cos());
        assert!(f.partial_derivative(Axis::X).max_abs_diff(&want) < 1e-12);
        assert!(f.partial_derivative(Axis::Y).sup_norm() < 1e-12);
    }

    #[test]
    fn constants_have_no_derivative() {
        let f = ScalarField::constant(grid(), 3.5);
        for a in Axis::ALL {
            assert!(f.partial_derivative(a).sup_norm() < 1e-12);
        }
        let f = ScalarField::from_fn(grid(), |[_, _, z]| (3.0 * z).sin());
        assert!(f.partial_derivative(Axis::X).sup_norm() < 1e-12);
    }

    #[test]
    fn product_identities() {
        let g = grid();
        let s = ScalarField::from_fn(g, |[x, _, _]| x.sin());
        let want = ScalarField::from_fn(g, |[x, _, _]| (1.0 - (2.0 * x).cos()) / 2.0);
        assert!(s.multiply(&s).max_abs_diff(&want) < 1e-12);
        let one = ScalarField::constant(g, 1.0);
        let h = ScalarField::from_fn(g, |[x, y, z]| (x + 2.0 * y).cos() * z.sin());
        assert!(one.multiply(&h).max_abs_diff(&h) < 1e-12);
    }

    #[test]
    fn quadrature() {
        let g = grid();
        let vol = torus_volume();
        assert!((ScalarField::constant(g, 1.0).integrate() - vol).abs() < 1e-12);
        assert!(ScalarField::from_fn(g, |[x, _, _]| x.sin()).integrate().abs() < 1e-12);
        let s2 = ScalarField::from_fn(g, |[x, _, _]| x.sin().powi(2));
        assert!((s2.integrate() - vol / 2.0).abs() < 1e-10);
    }

    #[test]
    fn offgrid_evaluation() {
        let g = grid();
        let f = ScalarField::from_fn(g, |[x, _, _]| x.sin());
        let v = f.eval_offgrid(&[[PI / 7.0, 0.0, 0.0]]);
        assert!((v[0] - (PI / 7.0).sin()).abs() < 1e-12);
        let c = ScalarField::constant(g, 2.5).eval_offgrid(&[[0.3, 1.7, 5.9]]);
        assert!((c[0] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn offgrid_reproduces_nodes_even_with_nyquist_content() {
        let g = Grid::new(8).unwrap();
        let f = ScalarField::from_fn(g, |[x, y, z]| (4.0 * x).cos() + (x * 3.0 + y).sin() * z.cos() + (4.0 * y).cos() * (4.0 * z).cos());
        let vals = f.eval_offgrid(&g.points());
        for (a, b) in vals.iter().zip(f.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn resampling_preserves_band_limited_fields() {
        let g = grid();
        let fine = Grid::new(32).unwrap();
        let f = ScalarField::from_fn(g, |[x, y, z]| (2.0 * x + y).sin() * (3.0 * z).cos());
        let up = f.resample(fine);
        let want = ScalarField::from_fn(fine, |[x, y, z]| (2.0 * x + y).sin() * (3.0 * z).cos());
        assert!(up.max_abs_diff(&want) < 1e-12);
        assert!(up.resample(g).max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn division_guards_small_divisors() {
        let g = grid();
        let f = ScalarField::from_fn(g, |[x, _, _]| x.sin());
        assert!(matches!(
            f.divide(&f, 0.1),
            Err(Error::DivisionNearZero { .. })
        ));
        let two = ScalarField::constant(g, 2.0);
        let half = ScalarField::constant(g, 1.0).divide(&two, 0.1).unwrap();
        assert!((half.values()[7] - 0.5).abs() < 1e-15);
    }
}
