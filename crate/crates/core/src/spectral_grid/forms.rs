//! Coordinate differential forms and the exterior derivative.

use super::field::ScalarField;
use super::grid::{Axis, Grid};
use super::spectrum::Spectrum;

/// Operations shared by grid fields (nodal products) and spectra (exact products),
/// so frame conversions and exterior derivatives are written once.
pub trait FieldAlgebra: Clone {
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn scaled(&self, s: f64) -> Self;
    fn times_cos_z(&self) -> Self;
    fn times_sin_z(&self) -> Self;
    fn d(&self, axis: Axis) -> Self;
    fn zeros_like(&self) -> Self;
}

impl FieldAlgebra for ScalarField {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn scaled(&self, s: f64) -> Self {
        ScalarField::scaled(self, s)
    }
    fn times_cos_z(&self) -> Self {
        self.times_fn(|p| p[2].cos())
    }
    fn times_sin_z(&self) -> Self {
        self.times_fn(|p| p[2].sin())
    }
    fn d(&self, axis: Axis) -> Self {
        self.partial_derivative(axis)
    }
    fn zeros_like(&self) -> Self {
        ScalarField::zeros(self.grid())
    }
}

impl FieldAlgebra for Spectrum {
    fn plus(&self, other: &Self) -> Self {
        Spectrum::plus(self, other)
    }
    fn minus(&self, other: &Self) -> Self {
        Spectrum::minus(self, other)
    }
    fn scaled(&self, s: f64) -> Self {
        Spectrum::scaled(self, s)
    }
    fn times_cos_z(&self) -> Self {
        self.mul_cos_z()
    }
    fn times_sin_z(&self) -> Self {
        self.mul_sin_z()
    }
    fn d(&self, axis: Axis) -> Self {
        self.partial(axis)
    }
    fn zeros_like(&self) -> Self {
        Spectrum::zeros(self.grid(), 0)
    }
}

pub fn gradient<F: FieldAlgebra>(f: &F) -> [F; 3] {
    [f.d(Axis::X), f.d(Axis::Y), f.d(Axis::Z)]
}

/// `d` of a 1-form, returned in the `(dy∧dz, dz∧dx, dx∧dy)` basis.
pub fn curl<F: FieldAlgebra>(v: &[F; 3]) -> [F; 3] {
    [
        v[2].d(Axis::Y).minus(&v[1].d(Axis::Z)),
        v[0].d(Axis::Z).minus(&v[2].d(Axis::X)),
        v[1].d(Axis::X).minus(&v[0].d(Axis::Y)),
    ]
}

/// `d` of a 2-form, as the coefficient of `dx∧dy∧dz`.
pub fn divergence<F: FieldAlgebra>(b: &[F; 3]) -> F {
    b[0].d(Axis::X).plus(&b[1].d(Axis::Y)).plus(&b[2].d(Axis::Z))
}

/// 1-form `β_x dx + β_y dy + β_z dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordOneForm {
    pub comps: [ScalarField; 3],
}

/// 2-form in the basis `dy∧dz, dz∧dx, dx∧dy`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordTwoForm {
    pub comps: [ScalarField; 3],
}

/// 3-form `h dx∧dy∧dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordThreeForm {
    pub coeff: ScalarField,
}

fn combine(a: &[ScalarField; 3], b: &[ScalarField; 3], f: impl Fn(&ScalarField, &ScalarField) -> ScalarField) -> [ScalarField; 3] {
    [f(&a[0], &b[0]), f(&a[1], &b[1]), f(&a[2], &b[2])]
}

impl CoordOneForm {
    pub fn new(comps: [ScalarField; 3]) -> Self {
        Self { comps }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        Self::new([0, 1, 2].map(|i| ScalarField::from_fn(grid, |p| f(p)[i])))
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::new([0, 1, 2].map(|_| ScalarField::zeros(grid)))
    }

    pub fn exact(f: &ScalarField) -> Self {
        Self::new(gradient(f))
    }

    pub fn grid(&self) -> Grid {
        self.comps[0].grid()
    }

    pub fn d(&self) -> CoordTwoForm {
        CoordTwoForm::new(curl(&self.comps))
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(combine(&self.comps, &other.comps, |a, b| a + b))
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self::new(combine(&self.comps, &other.comps, |a, b| a - b))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.comps.clone().map(|c| c * s))
    }

    /// `Σ ‖β_i‖²`, square-rooted.
    pub fn l2_norm(&self) -> f64 {
        self.comps.iter().map(|c| c.inner(c)).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.comps.iter().map(|c| c.sup_norm()).fold(0.0, f64::max)
    }

    /// `β ∧ γ` in the 2-form basis (the cross product of component vectors).
    pub fn wedge(&self, other: &Self) -> CoordTwoForm {
        let [a0, a1, a2] = &self.comps;
        let [b0, b1, b2] = &other.comps;
        CoordTwoForm::new([
            &a1.hadamard(b2) - &a2.hadamard(b1),
            &a2.hadamard(b0) - &a0.hadamard(b2),
            &a0.hadamard(b1) - &a1.hadamard(b0),
        ])
    }
}

impl CoordTwoForm {
    pub fn new(comps: [ScalarField; 3]) -> Self {
        Self { comps }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::new([0, 1, 2].map(|_| ScalarField::zeros(grid)))
    }

    pub fn d(&self) -> CoordThreeForm {
        CoordThreeForm {
            coeff: divergence(&self.comps),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self::new(combine(&self.comps, &other.comps, |a, b| a - b))
    }

    pub fn l2_norm(&self) -> f64 {
        self.comps.iter().map(|c| c.inner(c)).sum::<f64>().sqrt()
    }

    /// `β ∧ γ` with a 1-form, as the `dx∧dy∧dz` coefficient.
    pub fn wedge_one(&self, one: &CoordOneForm) -> CoordThreeForm {
        let mut acc = self.comps[0].hadamard(&one.comps[0]);
        acc += &self.comps[1].hadamard(&one.comps[1]);
        acc += &self.comps[2].hadamard(&one.comps[2]);
        CoordThreeForm { coeff: acc }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_vanishes() {
        let g = Grid::new(16).unwrap();
        let f = ScalarField::from_fn(g, |[x, y, z]| (x + 2.0 * y).sin() * z.cos() + (3.0 * z).sin());
        let ddf = CoordOneForm::exact(&f).d();
        assert!(ddf.l2_norm() < 1e-11);
        let beta = CoordOneForm::from_fn(g, |[x, y, z]| [(y + z).sin(), x.cos() * z.sin(), (x - y).cos()]);
        assert!(beta.d().d().coeff.sup_norm() < 1e-11);
    }

    #[test]
    fn wedge_of_coordinate_forms() {
        let g = Grid::new(8).unwrap();
        let dx = CoordOneForm::from_fn(g, |_| [1.0, 0.0, 0.0]);
        let dy = CoordOneForm::from_fn(g, |_| [0.0, 1.0, 0.0]);
        let w = dx.wedge(&dy);
        assert!((w.comps[2].values()[0] - 1.0).abs() < 1e-15);
        assert!(w.comps[0].sup_norm() == 0.0);
    }
}
