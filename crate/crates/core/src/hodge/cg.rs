use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rumin::{laplacian, spectral, RuminForm};
use crate::spectral_grid::{FieldAlgebra, Spectrum, ZColumn};

/// Iteration count and final relative residual of one solve.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct SolveStats {
    /// Largest iteration count over the independent z-columns.
    pub iterations: usize,
    pub relative_residual: f64,
}

type ColumnForm = Vec<ZColumn>;

fn inner(a: &[ZColumn], b: &[ZColumn]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.inner(y)).sum()
}

fn axpby(x: &[ZColumn], a: f64, y: &[ZColumn], b: f64) -> ColumnForm {
    x.iter().zip(y).map(|(p, q)| p.axpby(a, q, b)).collect()
}

fn deflate(w: &[ZColumn], basis: &[ColumnForm]) -> ColumnForm {
    let mut out = w.to_vec();
    for h in basis {
        out = axpby(&out, 1.0, h, -inner(w, h));
    }
    out
}

/// Galerkin Laplacian on one column: exact operator, then truncation back
/// to the box.
fn apply(degree: u8, w: &[ZColumn], kz: usize) -> ColumnForm {
    spectral::laplacian(degree, w)
        .into_iter()
        .map(|c| c.resized(kz))
        .collect()
}

/// Orthonormal basis of the restrictions of `kernel` to one column.
fn column_kernel(kernel: &[Vec<Spectrum>], kx: i64, ky: i64) -> Vec<ColumnForm> {
    let mut basis: Vec<ColumnForm> = Vec::new();
    for h in kernel {
        let col: ColumnForm = h.iter().map(|s| s.column(kx, ky)).collect();
        let col = deflate(&col, &basis);
        let norm = inner(&col, &col).sqrt();
        if norm > 1e-8 {
            basis.push(col.iter().map(|c| c.scaled(1.0 / norm)).collect());
        }
    }
    basis
}

fn column_cg(
    degree: u8,
    b: ColumnForm,
    kernel: &[ColumnForm],
    target: f64,
    kz: usize,
    max_iterations: usize,
) -> std::result::Result<(ColumnForm, usize), f64> {
    let mut x: ColumnForm = b.iter().map(|c| c.scaled(0.0)).collect();
    let mut r = b;
    let mut p = r.clone();
    let mut rr = inner(&r, &r);
    let mut iterations = 0;
    while rr.sqrt() > target {
        if iterations == max_iterations {
            return Err(rr.sqrt());
        }
        let ap = apply(degree, &p, kz);
        let alpha = rr / inner(&p, &ap);
        x = axpby(&x, 1.0, &p, alpha);
        r = deflate(&axpby(&r, 1.0, &ap, -alpha), kernel);
        let rr_next = inner(&r, &r);
        p = axpby(&r, 1.0, &p, rr_next / rr);
        rr = rr_next;
        iterations += 1;
    }
    Ok((deflate(&x, kernel), iterations))
}

/// Solves `Δ_Q u = b` for `u ⊥ ker Δ_Q`, with `b` first deflated against the
/// orthonormal `kernel` basis.
///
/// `Δ_Q` maps each z-column of Fourier coefficients to itself, so conjugate
/// gradients run on every column independently and in parallel.
pub fn deflated_cg(
    rhs: &RuminForm,
    kernel: &[RuminForm],
    tolerance: f64,
    max_iterations: usize,
) -> Result<(RuminForm, SolveStats)> {
    let degree = rhs.degree();
    let grid = rhs.grid();
    let b_full = rhs.dealiased();
    let b_full = kernel
        .iter()
        .fold(b_full.clone(), |acc, h| acc.axpby(1.0, h, -b_full.inner(h)));
    let b_norm = b_full.l2_norm();
    if b_norm == 0.0 {
        return Ok((RuminForm::zero(grid, degree), SolveStats::default()));
    }
    let kernel: Vec<Vec<Spectrum>> = kernel.iter().map(|h| h.spectra()).collect();
    let spectra = b_full.spectra();
    let k = grid.max_mode() as i64;
    let kz = grid.max_mode();
    let columns: Vec<(i64, i64)> = (-k..=k).flat_map(|kx| (-k..=k).map(move |ky| (kx, ky))).collect();
    let floor = 1e-4 * b_norm / (columns.len() as f64).sqrt();

    let solved = columns
        .par_iter()
        .map(|&(kx, ky)| {
            let col: ColumnForm = spectra.iter().map(|s| s.column(kx, ky)).collect();
            let col_norm = inner(&col, &col).sqrt();
            if col_norm == 0.0 {
                return Ok((col, 0));
            }
            let basis = column_kernel(&kernel, kx, ky);
            let col = deflate(&col, &basis);
            column_cg(degree, col, &basis, tolerance * col_norm.max(floor), kz, max_iterations)
        })
        .collect::<Vec<_>>();

    let mut out: Vec<Spectrum> = (0..spectra.len()).map(|_| Spectrum::zeros(grid, kz)).collect();
    let mut iterations = 0;
    for result in solved {
        let (col, its) = result.map_err(|residual| Error::SolverDiverged {
            iterations: max_iterations,
            residual: residual / b_norm,
        })?;
        iterations = iterations.max(its);
        for (s, c) in out.iter_mut().zip(&col) {
            s.set_column(c);
        }
    }
    let x = RuminForm::from_spectra(degree, &out);
    let residual = b_full.minus(&laplacian(&x)).l2_norm() / b_norm;
    Ok((
        x,
        SolveStats {
            iterations,
            relative_residual: residual,
        },
    ))
}
