use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Coordinate axis of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Uniform `N × N × N` grid on `[0, 2π)³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grid {
    n: usize,
}

impl Grid {
    /// `n` must be a power of two no smaller than 8.
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points, `N³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    /// Quadrature weight of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Largest wavenumber kept by the spectral operators (the Nyquist mode is dropped).
    pub fn max_mode(&self) -> usize {
        self.n / 2 - 1
    }

    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    pub fn unravel(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.n;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    pub fn point(&self, idx: usize) -> [f64; 3] {
        let (i, j, k) = self.unravel(idx);
        [self.coord(i), self.coord(j), self.coord(k)]
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|idx| self.point(idx)).collect()
    }

    /// Rejects bands that reach the Nyquist limit.
    pub fn check_band(&self, band: usize) -> Result<()> {
        if band >= self.n / 2 {
            Err(Error::BandTooHigh {
                band,
                limit: self.n / 2,
            })
        } else {
            Ok(())
        }
    }
}

/// Reduces a coordinate into `[0, 2π)`.
pub fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle difference into `(-π, π]`.
pub fn unwrap(d: f64) -> f64 {
    let r = (d + std::f64::consts::PI).rem_euclid(TAU) - std::f64::consts::PI;
    if r <= -std::f64::consts::PI {
        r + TAU
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(4).is_err());
        assert!(Grid::new(12).is_err());
        assert!(Grid::new(16).is_ok());
    }

    #[test]
    fn points_sit_on_the_lattice() {
        let g = Grid::new(8).unwrap();
        let p = g.point(g.index(1, 2, 3));
        let h = TAU / 8.0;
        assert_eq!(p, [h, 2.0 * h, 3.0 * h]);
    }

    #[test]
    fn unwrap_lands_in_half_open_interval() {
        assert!((unwrap(TAU + 0.1) - 0.1).abs() < 1e-15);
        assert!((unwrap(-0.1) + 0.1).abs() < 1e-15);
        assert!(unwrap(std::f64::consts::PI) > 0.0);
    }
}
