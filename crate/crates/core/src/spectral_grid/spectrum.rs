//! Exact Fourier-side algebra for trigonometric polynomials.
//!
//! Horizontal wavenumbers are capped at the grid's `max_mode`; the z range grows
//! whenever a field is multiplied by `cos z` or `sin z`, so chains of frame
//! operators stay exact until [`Spectrum::to_field`] projects back onto the grid.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::fft::{fft3, slot};
use super::grid::{Axis, Grid};
use super::field::ScalarField;

// out(m) = lower * in(m-1) + upper * in(m+1)
const COS_WEIGHTS: (Complex64, Complex64) = (Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0));
// sin z = (e^{iz} - e^{-iz}) / 2i
const SIN_WEIGHTS: (Complex64, Complex64) = (Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5));

fn shift_line(line_in: &[Complex64], line_out: &mut [Complex64], (lower, upper): (Complex64, Complex64)) {
    // in[j] has wavenumber j - kz and feeds out[j + 2] (one up) and out[j] (one down)
    for (j, &c) in line_in.iter().enumerate() {
        line_out[j + 2] += lower * c;
        line_out[j] += upper * c;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    kz: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: Grid, kz: usize) -> Self {
        let w = 2 * grid.max_mode() + 1;
        Self {
            grid,
            kz,
            coeffs: vec![Complex64::default(); w * w * (2 * kz + 1)],
        }
    }

    /// Fourier coefficients of the grid interpolant with the Nyquist planes dropped.
    pub fn from_field(f: &ScalarField) -> Self {
        let grid = f.grid();
        let n = grid.n();
        let mut buf: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft3(&mut buf, n, false);
        let scale = 1.0 / grid.len() as f64;
        let k = grid.max_mode() as i64;
        let mut out = Self::zeros(grid, k as usize);
        for kx in -k..=k {
            for ky in -k..=k {
                for kz in -k..=k {
                    let v = buf[grid.index(slot(kx, n), slot(ky, n), slot(kz, n))] * scale;
                    out.set(kx, ky, kz, v);
                }
            }
        }
        out
    }

    /// Projects onto the retained modes of the grid and transforms back.
    pub fn to_field(&self) -> ScalarField {
        let grid = self.grid;
        let n = grid.n();
        let k = grid.max_mode() as i64;
        let kz_max = (self.kz as i64).min(k);
        let mut buf = vec![Complex64::default(); grid.len()];
        for kx in -k..=k {
            for ky in -k..=k {
                for kz in -kz_max..=kz_max {
                    buf[grid.index(slot(kx, n), slot(ky, n), slot(kz, n))] = self.get(kx, ky, kz);
                }
            }
        }
        fft3(&mut buf, n, true);
        ScalarField::from_values(grid, buf.into_iter().map(|c| c.re).collect())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Current half-width of the z wavenumber range.
    pub fn kz_extent(&self) -> usize {
        self.kz
    }

    fn width(&self) -> usize {
        2 * self.grid.max_mode() + 1
    }

    fn depth(&self) -> usize {
        2 * self.kz + 1
    }

    fn offset(&self, kx: i64, ky: i64, kz: i64) -> Option<usize> {
        let k = self.grid.max_mode() as i64;
        if kx.abs() > k || ky.abs() > k || kz.abs() > self.kz as i64 {
            return None;
        }
        let ix = (kx + k) as usize;
        let iy = (ky + k) as usize;
        let iz = (kz + self.kz as i64) as usize;
        Some((ix * self.width() + iy) * self.depth() + iz)
    }

    pub fn get(&self, kx: i64, ky: i64, kz: i64) -> Complex64 {
        self.offset(kx, ky, kz)
            .map(|o| self.coeffs[o])
            .unwrap_or_default()
    }

    /// Panics if the mode lies outside the stored box.
    pub fn set(&mut self, kx: i64, ky: i64, kz: i64, v: Complex64) {
        let o = self
            .offset(kx, ky, kz)
            .expect("mode outside spectrum box");
        self.coeffs[o] = v;
    }

    pub fn add_to(&mut self, kx: i64, ky: i64, kz: i64, v: Complex64) {
        let o = self
            .offset(kx, ky, kz)
            .expect("mode outside spectrum box");
        self.coeffs[o] += v;
    }

    /// Iterates `(kx, ky, kz, coefficient)` over the stored box.
    pub fn modes(&self) -> impl Iterator<Item = (i64, i64, i64, Complex64)> + '_ {
        let k = self.grid.max_mode() as i64;
        let w = self.width();
        let d = self.depth();
        let kz = self.kz as i64;
        self.coeffs.iter().enumerate().map(move |(o, &c)| {
            let iz = (o % d) as i64 - kz;
            let iy = ((o / d) % w) as i64 - k;
            let ix = (o / (d * w)) as i64 - k;
            (ix, iy, iz, c)
        })
    }

    /// Same polynomial stored in a box of z half-width `kz >= self.kz`.
    pub fn widened(&self, kz: usize) -> Self {
        if kz <= self.kz {
            return self.clone();
        }
        let mut out = Self::zeros(self.grid, kz);
        let shift = kz - self.kz;
        let (d_in, d_out) = (self.depth(), out.depth());
        for (line_in, line_out) in self.coeffs.chunks(d_in).zip(out.coeffs.chunks_mut(d_out)) {
            line_out[shift..shift + d_in].copy_from_slice(line_in);
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.grid, other.grid, "spectra live on different grids");
        let kz = self.kz.max(other.kz);
        let a = self.widened(kz);
        let b = other.widened(kz);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f(x, y)).collect();
        Self {
            grid: self.grid,
            kz,
            coeffs,
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            grid: self.grid,
            kz: self.kz,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    fn shift_z(&self, weights: (Complex64, Complex64)) -> Self {
        let mut out = Self::zeros(self.grid, self.kz + 1);
        let (d_in, d_out) = (self.depth(), out.depth());
        for (line_in, line_out) in self.coeffs.chunks(d_in).zip(out.coeffs.chunks_mut(d_out)) {
            shift_line(line_in, line_out, weights);
        }
        out
    }

    /// Exact product with `cos z`.
    pub fn mul_cos_z(&self) -> Self {
        self.shift_z(COS_WEIGHTS)
    }

    /// Exact product with `sin z`.
    pub fn mul_sin_z(&self) -> Self {
        self.shift_z(SIN_WEIGHTS)
    }

    /// The z-line of coefficients at horizontal wavenumber `(kx, ky)`.
    pub fn column(&self, kx: i64, ky: i64) -> ZColumn {
        let k = self.grid.max_mode() as i64;
        let start = (((kx + k) as usize) * self.width() + (ky + k) as usize) * self.depth();
        ZColumn {
            kx,
            ky,
            kz: self.kz,
            coeffs: self.coeffs[start..start + self.depth()].to_vec(),
        }
    }

    /// Overwrites the column at the column's wavenumber, keeping only modes
    /// that fit this box.
    pub fn set_column(&mut self, col: &ZColumn) {
        let top = self.kz.min(col.kz) as i64;
        for m in -top..=top {
            self.set(col.kx, col.ky, m, col.get(m));
        }
    }

    pub fn partial(&self, axis: Axis) -> Self {
        let mut out = self.clone();
        let k = self.grid.max_mode() as i64;
        let w = self.width();
        let d = self.depth();
        let kz = self.kz as i64;
        for (o, c) in out.coeffs.iter_mut().enumerate() {
            let wave = match axis {
                Axis::Z => (o % d) as i64 - kz,
                Axis::Y => ((o / d) % w) as i64 - k,
                Axis::X => (o / (d * w)) as i64 - k,
            };
            *c *= Complex64::new(0.0, wave as f64);
        }
        out
    }

    /// `L²(T³)` inner product of the two (real) trigonometric polynomials.
    pub fn inner(&self, other: &Self) -> f64 {
        let kz = self.kz.max(other.kz);
        let a = self.widened(kz);
        let b = other.widened(kz);
        let s: f64 = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x * y.conj()).re).sum();
        s * TAU.powi(3)
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() * TAU.powi(3)
    }

    /// Largest coefficient modulus with `|kz| > kz`.
    pub fn max_beyond_z(&self, kz: usize) -> f64 {
        self.modes()
            .filter(|m| m.2.unsigned_abs() as usize > kz)
            .map(|m| m.3.norm())
            .fold(0.0, f64::max)
    }
}

/// Fourier coefficients along z at one horizontal wavenumber.
///
/// The frame coefficients depend on `z` only, so every Rumin operator maps
/// each column to itself; solvers can work column by column.
#[derive(Clone, Debug, PartialEq)]
pub struct ZColumn {
    kx: i64,
    ky: i64,
    kz: usize,
    coeffs: Vec<Complex64>,
}

impl ZColumn {
    pub fn zeros(kx: i64, ky: i64, kz: usize) -> Self {
        Self {
            kx,
            ky,
            kz,
            coeffs: vec![Complex64::default(); 2 * kz + 1],
        }
    }

    pub fn wavenumbers(&self) -> (i64, i64) {
        (self.kx, self.ky)
    }

    pub fn kz_extent(&self) -> usize {
        self.kz
    }

    pub fn get(&self, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > self.kz {
            Complex64::default()
        } else {
            self.coeffs[(m + self.kz as i64) as usize]
        }
    }

    /// Drops modes with `|m| > kz`, or pads with zeros.
    pub fn resized(&self, kz: usize) -> Self {
        let mut out = Self::zeros(self.kx, self.ky, kz);
        let top = kz.min(self.kz) as i64;
        for m in -top..=top {
            out.coeffs[(m + kz as i64) as usize] = self.get(m);
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        debug_assert_eq!((self.kx, self.ky), (other.kx, other.ky));
        let kz = self.kz.max(other.kz);
        let a = self.resized(kz);
        let b = other.resized(kz);
        Self {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| f(x, y)).collect(),
            ..a
        }
    }

    /// `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Self {
        self.zip_with(other, |x, y| x * a + y * b)
    }

    /// Contribution of this column to the `L²(T³)` inner product.
    pub fn inner(&self, other: &Self) -> f64 {
        let kz = self.kz.min(other.kz) as i64;
        (-kz..=kz)
            .map(|m| (self.get(m) * other.get(m).conj()).re)
            .sum::<f64>()
            * TAU.powi(3)
    }

    fn shift(&self, weights: (Complex64, Complex64)) -> Self {
        let mut out = Self::zeros(self.kx, self.ky, self.kz + 1);
        shift_line(&self.coeffs, &mut out.coeffs, weights);
        out
    }
}

impl super::forms::FieldAlgebra for ZColumn {
    fn plus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }
    fn minus(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }
    fn scaled(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
            ..self.clone()
        }
    }
    fn times_cos_z(&self) -> Self {
        self.shift(COS_WEIGHTS)
    }
    fn times_sin_z(&self) -> Self {
        self.shift(SIN_WEIGHTS)
    }
    fn d(&self, axis: Axis) -> Self {
        let kz = self.kz as i64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let wave = match axis {
                    Axis::X => self.kx,
                    Axis::Y => self.ky,
                    Axis::Z => j as i64 - kz,
                };
                c * Complex64::new(0.0, wave as f64)
            })
            .collect();
        Self {
            coeffs,
            ..self.clone()
        }
    }
    fn zeros_like(&self) -> Self {
        Self::zeros(self.kx, self.ky, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(16).unwrap()
    }

    #[test]
    fn round_trip_through_grid() {
        let g = grid();
        let f = ScalarField::from_fn(g, |[x, y, z]| (2.0 * x - y).sin() + (3.0 * z + y).cos());
        let back = Spectrum::from_field(&f).to_field();
        assert!(f.max_abs_diff(&back) < 1e-13);
    }

    #[test]
    fn cos_shift_matches_nodal_product() {
        let g = grid();
        let f = ScalarField::from_fn(g, |[x, _, z]| x.sin() * (2.0 * z).cos());
        let want = ScalarField::from_fn(g, |[x, _, z]| x.sin() * (2.0 * z).cos() * z.cos());
        let got = Spectrum::from_field(&f).mul_cos_z().to_field();
        assert!(want.max_abs_diff(&got) < 1e-13);
        let want = ScalarField::from_fn(g, |[x, _, z]| x.sin() * (2.0 * z).cos() * z.sin());
        let got = Spectrum::from_field(&f).mul_sin_z().to_field();
        assert!(want.max_abs_diff(&got) < 1e-13);
    }

    #[test]
    fn inner_matches_quadrature() {
        let g = grid();
        let f = ScalarField::from_fn(g, |[x, y, z]| (x + y).sin() + z.cos());
        let h = ScalarField::from_fn(g, |[x, y, z]| (x + y).sin() * 0.5 + (x - z).cos());
        let a = Spectrum::from_field(&f).inner(&Spectrum::from_field(&h));
        assert!((a - f.inner(&h)).abs() < 1e-10);
    }

    #[test]
    fn columns_follow_the_box() {
        use super::super::forms::FieldAlgebra;
        let g = grid();
        let f = ScalarField::from_fn(g, |[x, y, z]| (2.0 * x - y + z).sin() + (2.0 * x - y - 3.0 * z).cos());
        let s = Spectrum::from_field(&f);
        let whole = s.mul_sin_z().partial(Axis::X);
        let col = s.column(2, -1).times_sin_z().d(Axis::X);
        for m in -5..=5 {
            assert!((whole.get(2, -1, m) - col.get(m)).norm() < 1e-15);
        }
    }

    #[test]
    fn growth_beyond_grid_is_kept_until_projection() {
        let g = Grid::new(8).unwrap();
        let f = ScalarField::from_fn(g, |[_, _, z]| (3.0 * z).cos());
        let s = Spectrum::from_field(&f).mul_cos_z();
        assert_eq!(s.kz_extent(), 4);
        assert!((s.get(0, 0, 4).re - 0.25).abs() < 1e-15);
        assert!(s.max_beyond_z(3) > 0.2);
    }
}
