//! Dense assembly of Rumin operators in a real orthonormal Fourier basis.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::rumin::{rank, RuminForm};
use crate::spectral_grid::{Grid, Spectrum};

/// One real basis function: the constant, `cos(k·x)` or `sin(k·x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Mode {
    Constant,
    Cos([i64; 3]),
    Sin([i64; 3]),
}

/// `L²`-orthonormal real trigonometric basis of the retained modes of a grid.
#[derive(Clone, Debug)]
pub struct RealBasis {
    grid: Grid,
    modes: Vec<Mode>,
}

fn constant_amplitude() -> f64 {
    TAU.powf(-1.5)
}

fn wave_amplitude() -> f64 {
    2f64.sqrt() * TAU.powf(-1.5)
}

impl RealBasis {
    pub fn new(grid: Grid) -> Self {
        let k = grid.max_mode() as i64;
        let mut modes = vec![Mode::Constant];
        for kx in -k..=k {
            for ky in -k..=k {
                for kz in -k..=k {
                    let w = [kx, ky, kz];
                    let lead = w.iter().find(|&&v| v != 0).copied().unwrap_or(0);
                    if lead > 0 {
                        modes.push(Mode::Cos(w));
                        modes.push(Mode::Sin(w));
                    }
                }
            }
        }
        Self { grid, modes }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Spectrum of basis function `i` on `target` (which must resolve the modes).
    fn spectrum(&self, i: usize, target: Grid) -> Spectrum {
        let mut s = Spectrum::zeros(target, target.max_mode());
        self.add_into(&mut s, i, 1.0);
        s
    }

    fn add_into(&self, s: &mut Spectrum, i: usize, weight: f64) {
        let a = wave_amplitude() * weight;
        match self.modes[i] {
            Mode::Constant => s.add_to(0, 0, 0, Complex64::new(constant_amplitude() * weight, 0.0)),
            Mode::Cos([x, y, z]) => {
                s.add_to(x, y, z, Complex64::new(a / 2.0, 0.0));
                s.add_to(-x, -y, -z, Complex64::new(a / 2.0, 0.0));
            }
            Mode::Sin([x, y, z]) => {
                s.add_to(x, y, z, Complex64::new(0.0, -a / 2.0));
                s.add_to(-x, -y, -z, Complex64::new(0.0, a / 2.0));
            }
        }
    }

    /// `⟨f, φ_i⟩` for every basis function, read off the spectrum.
    fn coefficients(&self, s: &Spectrum) -> Vec<f64> {
        let vol = TAU.powi(3);
        self.modes
            .iter()
            .map(|m| match *m {
                Mode::Constant => vol * constant_amplitude() * s.get(0, 0, 0).re,
                Mode::Cos([x, y, z]) => vol * wave_amplitude() * s.get(x, y, z).re,
                Mode::Sin([x, y, z]) => -vol * wave_amplitude() * s.get(x, y, z).im,
            })
            .collect()
    }

    /// Coefficient vector of a Rumin form living on this basis' grid.
    pub fn encode(&self, w: &RuminForm) -> DVector<f64> {
        let mut out = Vec::with_capacity(self.len() * w.comps().len());
        for c in w.comps() {
            out.extend(self.coefficients(&c.spectrum()));
        }
        DVector::from_vec(out)
    }

    /// Rumin form with the given coefficients, sampled on `target`.
    pub fn decode(&self, degree: u8, v: &[f64], target: Grid) -> RuminForm {
        assert!(target.max_mode() >= self.grid.max_mode(), "target grid too coarse");
        let m = self.len();
        let comps: Vec<Spectrum> = (0..rank(degree))
            .map(|c| {
                let mut s = Spectrum::zeros(target, target.max_mode());
                for (i, &w) in v[c * m..(c + 1) * m].iter().enumerate() {
                    if w != 0.0 {
                        self.add_into(&mut s, i, w);
                    }
                }
                s
            })
            .collect();
        RuminForm::from_spectra(degree, &comps)
    }

    /// Matrix of a linear operator on `R^k` spectra in this basis.
    pub fn assemble<F>(&self, degree: u8, op: F) -> DMatrix<f64>
    where
        F: Fn(&[Spectrum]) -> Vec<Spectrum> + Sync,
    {
        let r = rank(degree);
        let m = self.len();
        let zero = Spectrum::zeros(self.grid, 0);
        let columns: Vec<Vec<f64>> = (0..r * m)
            .into_par_iter()
            .map(|col| {
                let (comp, i) = (col / m, col % m);
                let input: Vec<Spectrum> = (0..r)
                    .map(|c| if c == comp { self.spectrum(i, self.grid) } else { zero.clone() })
                    .collect();
                op(&input)
                    .iter()
                    .flat_map(|s| self.coefficients(s))
                    .collect()
            })
            .collect();
        let rows = columns.first().map(|c| c.len()).unwrap_or(0);
        DMatrix::from_fn(rows, r * m, |i, j| columns[j][i])
    }
}

/// Eigendecomposition of an assembled Laplacian.
#[derive(Clone, Debug)]
pub struct DenseSolver {
    pub basis: RealBasis,
    pub degree: u8,
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
    pub threshold: f64,
    /// Largest `|A − Aᵀ|` entry before symmetrization.
    pub asymmetry: f64,
}

impl DenseSolver {
    pub fn new(grid: Grid, degree: u8, threshold: f64) -> Self {
        let basis = RealBasis::new(grid);
        let a = basis.assemble(degree, |w| crate::rumin::spectral::laplacian(degree, w));
        let asymmetry = (&a - a.transpose()).abs().max();
        let sym = (&a + a.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        Self {
            basis,
            degree,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
            threshold,
            asymmetry,
        }
    }

    fn kernel_columns(&self) -> Vec<usize> {
        (0..self.eigenvalues.len())
            .filter(|&i| self.eigenvalues[i].abs() < self.threshold)
            .collect()
    }

    pub fn kernel_dimension(&self) -> usize {
        self.kernel_columns().len()
    }

    /// Smallest eigenvalue above the kernel threshold.
    pub fn spectral_gap(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|v| v.abs() >= self.threshold)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.min()
    }

    /// Coefficient vectors of an orthonormal kernel basis.
    pub fn kernel_vectors(&self) -> Vec<Vec<f64>> {
        self.kernel_columns()
            .into_iter()
            .map(|i| self.eigenvectors.column(i).iter().copied().collect())
            .collect()
    }

    /// Pseudo-inverse applied to a coefficient vector.
    pub fn green(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for i in 0..self.eigenvalues.len() {
            let lam = self.eigenvalues[i];
            if lam.abs() < self.threshold {
                continue;
            }
            let col = self.eigenvectors.column(i);
            out.axpy(col.dot(v) / lam, &col, 1.0);
        }
        out
    }
}
