//! The model contact manifold `T³` with `η = cos z dx + sin z dy`.
//!
//! Frame: `T = cos z ∂x + sin z ∂y`, `e₁ = sin z ∂x − cos z ∂y`, `e₂ = ∂z`, with dual
//! coframe `η`, `ε¹ = sin z dx − cos z dy`, `ε² = dz`. Then `dη = ε¹∧ε²`,
//! `[e₁, e₂] = −T`, and the volume `dV = η∧ε¹∧ε² = −dx∧dy∧dz`.

use crate::error::{Error, Result};
use crate::rumin::RuminForm;
use crate::spectral_grid::{
    Axis, CoordOneForm, CoordThreeForm, CoordTwoForm, FieldAlgebra, Grid, ScalarField,
};

/// Horizontal frame direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    E1,
    E2,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::E1, Direction::E2];
}

/// `T f`.
pub fn reeb<F: FieldAlgebra>(f: &F) -> F {
    f.d(Axis::X).times_cos_z().plus(&f.d(Axis::Y).times_sin_z())
}

/// `e₁ f` or `e₂ f`.
pub fn horizontal<F: FieldAlgebra>(f: &F, dir: Direction) -> F {
    match dir {
        Direction::E1 => f.d(Axis::X).times_sin_z().minus(&f.d(Axis::Y).times_cos_z()),
        Direction::E2 => f.d(Axis::Z),
    }
}

/// Swaps 1-form (or vector) components between the frame `(η, ε¹, ε²)` and
/// coordinates `(dx, dy, dz)`; the change of basis is an involution.
pub fn swap_one<F: FieldAlgebra>(v: &[F; 3]) -> [F; 3] {
    [
        v[0].times_cos_z().plus(&v[1].times_sin_z()),
        v[0].times_sin_z().minus(&v[1].times_cos_z()),
        v[2].clone(),
    ]
}

/// Swaps 2-form components between the frame basis `(ε¹∧ε², ε²∧η, η∧ε¹)` and
/// the coordinate basis `(dy∧dz, dz∧dx, dx∧dy)`; also an involution.
pub fn swap_two<F: FieldAlgebra>(v: &[F; 3]) -> [F; 3] {
    [
        v[0].times_cos_z().plus(&v[1].times_sin_z()).scaled(-1.0),
        v[1].times_cos_z().minus(&v[0].times_sin_z()),
        v[2].scaled(-1.0),
    ]
}

/// Positive profile of the anisotropic complex structure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaProfile {
    /// `λ(z) = exp(ε cos z)`.
    ExpCos { eps: f64 },
    Constant(f64),
}

impl LambdaProfile {
    pub fn value(&self, z: f64) -> f64 {
        match *self {
            LambdaProfile::ExpCos { eps } => (eps * z.cos()).exp(),
            LambdaProfile::Constant(v) => v,
        }
    }

    pub fn derivative(&self, z: f64) -> f64 {
        match *self {
            LambdaProfile::ExpCos { eps } => -eps * z.sin() * (eps * z.cos()).exp(),
            LambdaProfile::Constant(_) => 0.0,
        }
    }
}

/// Compatible complex structure on the contact distribution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JChoice {
    /// `J e₁ = e₂`, `J e₂ = −e₁`: orthonormal frame, flat metric.
    Default,
    /// `J e₁ = λ e₂`, `J e₂ = −e₁/λ`: frame metric `diag(1, λ, 1/λ)`.
    Anisotropic(LambdaProfile),
}

impl JChoice {
    pub fn lambda(&self, z: f64) -> f64 {
        match self {
            JChoice::Default => 1.0,
            JChoice::Anisotropic(p) => p.value(z),
        }
    }

    fn lambda_prime(&self, z: f64) -> f64 {
        match self {
            JChoice::Default => 0.0,
            JChoice::Anisotropic(p) => p.derivative(z),
        }
    }

    /// `J` on `H` as a matrix in the basis `(e₁, e₂)`.
    pub fn matrix(&self, z: f64) -> [[f64; 2]; 2] {
        let l = self.lambda(z);
        [[0.0, -1.0 / l], [l, 0.0]]
    }
}

/// Vector field `f⁰ T + f¹ e₁ + f² e₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameVectorField {
    pub t: ScalarField,
    pub e1: ScalarField,
    pub e2: ScalarField,
}

impl FrameVectorField {
    pub fn new(t: ScalarField, e1: ScalarField, e2: ScalarField) -> Self {
        Self { t, e1, e2 }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::new(ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid))
    }

    pub fn grid(&self) -> Grid {
        self.t.grid()
    }

    pub fn components(&self) -> [&ScalarField; 3] {
        [&self.t, &self.e1, &self.e2]
    }

    /// Coordinate components `(X^x, X^y, X^z)`, pointwise.
    pub fn to_coords(&self) -> [ScalarField; 3] {
        swap_one(&[self.t.clone(), self.e1.clone(), self.e2.clone()])
    }

    pub fn from_coords(v: &[ScalarField; 3]) -> Self {
        let [t, e1, e2] = swap_one(v);
        Self::new(t, e1, e2)
    }

    /// `X_H`, dropping the Reeb component.
    pub fn horizontal_part(&self) -> Self {
        Self::new(ScalarField::zeros(self.grid()), self.e1.clone(), self.e2.clone())
    }

    pub fn is_horizontal(&self, tol: f64) -> bool {
        self.t.sup_norm() <= tol
    }

    pub fn plus(&self, o: &Self) -> Self {
        Self::new(&self.t + &o.t, &self.e1 + &o.e1, &self.e2 + &o.e2)
    }

    pub fn minus(&self, o: &Self) -> Self {
        Self::new(&self.t - &o.t, &self.e1 - &o.e1, &self.e2 - &o.e2)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(&self.t * s, &self.e1 * s, &self.e2 * s)
    }

    /// Frame `L²` norm (the frame is orthonormal for the default metric).
    pub fn l2_norm(&self) -> f64 {
        self.components().iter().map(|c| c.inner(c)).sum::<f64>().sqrt()
    }

    /// Largest Euclidean length over the grid.
    pub fn sup_norm(&self) -> f64 {
        (0..self.grid().len())
            .map(|i| {
                let a = self.t.values()[i];
                let b = self.e1.values()[i];
                let c = self.e2.values()[i];
                (a * a + b * b + c * c).sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Full exterior form in the coframe: degree 0 `{1}`, degree 1 `(η, ε¹, ε²)`,
/// degree 2 `(ε¹∧ε², ε²∧η, η∧ε¹)`, degree 3 `{η∧ε¹∧ε²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameForm {
    degree: u8,
    comps: Vec<ScalarField>,
}

impl FrameForm {
    pub fn new(degree: u8, comps: Vec<ScalarField>) -> Self {
        let want = match degree {
            0 | 3 => 1,
            1 | 2 => 3,
            _ => panic!("degree {degree} out of range"),
        };
        assert_eq!(comps.len(), want, "component count does not match degree");
        Self { degree, comps }
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn comps(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn from_coord_one(b: &CoordOneForm) -> Self {
        Self::new(1, swap_one(&b.comps).to_vec())
    }

    pub fn from_coord_two(b: &CoordTwoForm) -> Self {
        Self::new(2, swap_two(&b.comps).to_vec())
    }

    pub fn from_coord_three(b: &CoordThreeForm) -> Self {
        Self::new(3, vec![-&b.coeff])
    }

    fn triple(&self) -> [ScalarField; 3] {
        [self.comps[0].clone(), self.comps[1].clone(), self.comps[2].clone()]
    }

    pub fn to_coord_one(&self) -> Result<CoordOneForm> {
        self.expect_degree(1)?;
        Ok(CoordOneForm::new(swap_one(&self.triple())))
    }

    pub fn to_coord_two(&self) -> Result<CoordTwoForm> {
        self.expect_degree(2)?;
        Ok(CoordTwoForm::new(swap_two(&self.triple())))
    }

    pub fn to_coord_three(&self) -> Result<CoordThreeForm> {
        self.expect_degree(3)?;
        Ok(CoordThreeForm {
            coeff: -&self.comps[0],
        })
    }

    fn expect_degree(&self, d: u8) -> Result<()> {
        if self.degree == d {
            Ok(())
        } else {
            Err(Error::DegreeMismatch {
                expected: d,
                got: self.degree,
            })
        }
    }

    /// Pointwise `⟨·,·⟩` integrated, with the metric of `j`.
    pub fn l2_inner(&self, other: &Self, model: &ContactModel) -> f64 {
        let weights = model.coframe_weights(self.degree);
        self.comps
            .iter()
            .zip(&other.comps)
            .zip(weights)
            .map(|((a, b), w)| a.hadamard(b).hadamard(&w).integrate())
            .sum()
    }
}

/// Evaluation of `(η∧dη)(T, e₁, e₂)` and the other structure checks.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub eta_on_reeb: f64,
    pub reeb_into_d_eta: f64,
    pub eta_on_horizontal: f64,
    pub d_eta_on_frame: f64,
    pub volume: f64,
    pub j_squared: f64,
    pub j_positivity: f64,
    pub bracket: f64,
}

impl StructureReport {
    /// Worst deviation among the checks (positivity enters as its violation).
    pub fn worst(&self) -> f64 {
        [
            self.eta_on_reeb,
            self.reeb_into_d_eta,
            self.eta_on_horizontal,
            self.d_eta_on_frame,
            self.volume,
            self.j_squared,
            (-self.j_positivity).max(0.0),
        ]
        .into_iter()
        .fold(self.bracket, f64::max)
    }
}

/// Christoffel symbols `Γ^k_{ij}` indexed `[k][i][j]`.
pub type Christoffels = [[[f64; 3]; 3]; 3];

/// Adapted metric `g = η⊗η + dη(·, J·)` in coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric {
    j: JChoice,
}

impl Metric {
    pub fn new(j: JChoice) -> Self {
        Self { j }
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.j, JChoice::Default)
    }

    /// `g_ij` at height `z`.
    pub fn coords(&self, z: f64) -> [[f64; 3]; 3] {
        let l = self.j.lambda(z);
        let (s, c) = z.sin_cos();
        [
            [c * c + l * s * s, c * s * (1.0 - l), 0.0],
            [c * s * (1.0 - l), s * s + l * c * c, 0.0],
            [0.0, 0.0, 1.0 / l],
        ]
    }

    /// `∂_z g_ij`, differentiated by hand.
    pub fn coords_dz(&self, z: f64) -> [[f64; 3]; 3] {
        let l = self.j.lambda(z);
        let lp = self.j.lambda_prime(z);
        let (s, c) = z.sin_cos();
        let xx = -2.0 * c * s + lp * s * s + 2.0 * l * s * c;
        let xy = (c * c - s * s) * (1.0 - l) - c * s * lp;
        let yy = 2.0 * s * c + lp * c * c - 2.0 * l * c * s;
        let zz = -lp / (l * l);
        [[xx, xy, 0.0], [xy, yy, 0.0], [0.0, 0.0, zz]]
    }

    pub fn inverse(&self, z: f64) -> [[f64; 3]; 3] {
        let g = self.coords(z);
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        [
            [g[1][1] / det, -g[0][1] / det, 0.0],
            [-g[1][0] / det, g[0][0] / det, 0.0],
            [0.0, 0.0, 1.0 / g[2][2]],
        ]
    }

    /// `Γ^k_{ij} = ½ g^{kl}(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij})`; only `∂_z` survives.
    #[allow(clippy::needless_range_loop)]
    pub fn christoffels(&self, p: [f64; 3]) -> Christoffels {
        let mut out = [[[0.0; 3]; 3]; 3];
        if self.is_flat() {
            return out;
        }
        let z = p[2];
        let ginv = self.inverse(z);
        let dg = self.coords_dz(z);
        let partial = |a: usize, l: usize, j: usize| if a == 2 { dg[l][j] } else { 0.0 };
        for (k, out_k) in out.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for l in 0..3 {
                        acc += ginv[k][l] * (partial(i, l, j) + partial(j, l, i) - partial(l, i, j));
                    }
                    out_k[i][j] = 0.5 * acc;
                }
            }
        }
        out
    }

    /// `Γ^k_{ij} u^i v^j`.
    pub fn contract(gamma: &Christoffels, u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    out[k] += gamma[k][i][j] * u[i] * v[j];
                }
            }
        }
        out
    }
}

/// The model manifold on a grid, with a chosen `J`.
#[derive(Clone, Debug)]
pub struct ContactModel {
    grid: Grid,
    j: JChoice,
}

impl ContactModel {
    /// Builds the model and verifies its structure identities to `1e-12`.
    pub fn new(grid: Grid, j: JChoice) -> Result<Self> {
        if let JChoice::Anisotropic(p) = j {
            let bad = (0..64).any(|i| {
                let v = p.value(i as f64 * std::f64::consts::TAU / 64.0);
                !(v.is_finite() && v > 0.0)
            });
            if bad {
                return Err(Error::Config("λ must be finite and positive".into()));
            }
        }
        let model = Self { grid, j };
        let report = model.verify_structure();
        if report.worst() > 1e-12 {
            return Err(Error::StructureCheck(format!("{report:?}")));
        }
        Ok(model)
    }

    pub fn standard(grid: Grid) -> Self {
        Self::new(grid, JChoice::Default).expect("default model is consistent")
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn j(&self) -> JChoice {
        self.j
    }

    pub fn metric(&self) -> Metric {
        Metric::new(self.j)
    }

    /// `η`, `dη`, frame and `J` evaluated pointwise against one another.
    pub fn verify_structure(&self) -> StructureReport {
        let mut r = StructureReport {
            eta_on_reeb: 0.0,
            reeb_into_d_eta: 0.0,
            eta_on_horizontal: 0.0,
            d_eta_on_frame: 0.0,
            volume: 0.0,
            j_squared: 0.0,
            j_positivity: f64::INFINITY,
            bracket: 0.0,
        };
        let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
        };
        for idx in 0..self.grid.len() {
            let z = self.grid.point(idx)[2];
            let (s, c) = z.sin_cos();
            let eta = [c, s, 0.0];
            // dη = −sin z dz∧dx + cos z dz∧dy in the (dy∧dz, dz∧dx, dx∧dy) basis
            let d_eta = [-c, -s, 0.0];
            let t = [c, s, 0.0];
            let e1 = [s, -c, 0.0];
            let e2 = [0.0, 0.0, 1.0];
            let two = |u: [f64; 3], v: [f64; 3]| dot(d_eta, cross(u, v));
            r.eta_on_reeb = r.eta_on_reeb.max((dot(eta, t) - 1.0).abs());
            r.reeb_into_d_eta = r
                .reeb_into_d_eta
                .max(two(t, e1).abs())
                .max(two(t, e2).abs());
            r.eta_on_horizontal = r
                .eta_on_horizontal
                .max(dot(eta, e1).abs())
                .max(dot(eta, e2).abs());
            r.d_eta_on_frame = r.d_eta_on_frame.max((two(e1, e2) - 1.0).abs());
            // (η∧dη)(T,e₁,e₂) = η(T)dη(e₁,e₂) − η(e₁)dη(T,e₂) + η(e₂)dη(T,e₁)
            let vol = dot(eta, t) * two(e1, e2) - dot(eta, e1) * two(t, e2) + dot(eta, e2) * two(t, e1);
            r.volume = r.volume.max((vol - 1.0).abs());
            let m = self.j.matrix(z);
            let m2 = [
                [m[0][0] * m[0][0] + m[0][1] * m[1][0], m[0][0] * m[0][1] + m[0][1] * m[1][1]],
                [m[1][0] * m[0][0] + m[1][1] * m[1][0], m[1][0] * m[0][1] + m[1][1] * m[1][1]],
            ];
            r.j_squared = r
                .j_squared
                .max((m2[0][0] + 1.0).abs())
                .max((m2[1][1] + 1.0).abs())
                .max(m2[0][1].abs())
                .max(m2[1][0].abs());
            // dη(X, JX) for X = a e₁ + b e₂ is the quadratic form of [[m10, m11],[-m00,-m01]]
            for (a, b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] {
                let jx = [m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b];
                let q = a * jx[1] - b * jx[0];
                r.j_positivity = r.j_positivity.min(q);
            }
        }
        let f = ScalarField::from_fn(self.grid, |[x, y, z]| (x + 2.0 * z).sin() * y.cos() + (y - z).cos());
        let s = f.spectrum();
        let lhs = horizontal(&horizontal(&s, Direction::E2), Direction::E1)
            .minus(&horizontal(&horizontal(&s, Direction::E1), Direction::E2));
        let bracket = lhs.plus(&reeb(&s));
        r.bracket = bracket.norm_sq().sqrt() / s.norm_sq().sqrt();
        r
    }

    /// `e_i f`, computed exactly in Fourier space and projected back to the grid.
    pub fn apply_horizontal(&self, f: &ScalarField, dir: Direction) -> ScalarField {
        horizontal(&f.spectrum(), dir).to_field()
    }

    /// `T f`.
    pub fn apply_reeb(&self, f: &ScalarField) -> ScalarField {
        reeb(&f.spectrum()).to_field()
    }

    /// `η` as a coordinate form.
    pub fn eta(&self) -> CoordOneForm {
        CoordOneForm::from_fn(self.grid, |[_, _, z]| [z.cos(), z.sin(), 0.0])
    }

    /// Hodge star with the metric of `J`, satisfying `α∧*β = ⟨α,β⟩ dV`.
    pub fn hodge_star(&self, w: &FrameForm) -> FrameForm {
        let c = w.comps();
        match (self.j, w.degree()) {
            (JChoice::Default, d) => FrameForm::new(3 - d, c.to_vec()),
            (_, 0) => FrameForm::new(3, c.to_vec()),
            (_, 3) => FrameForm::new(0, c.to_vec()),
            (_, 1) => {
                let l = self.lambda_field();
                FrameForm::new(
                    2,
                    vec![c[0].clone(), c[1].divide(&l, 0.0).expect("λ > 0"), c[2].hadamard(&l)],
                )
            }
            (_, _) => {
                let l = self.lambda_field();
                FrameForm::new(
                    1,
                    vec![c[0].clone(), c[1].hadamard(&l), c[2].divide(&l, 0.0).expect("λ > 0")],
                )
            }
        }
    }

    pub fn lambda_field(&self) -> ScalarField {
        let j = self.j;
        ScalarField::from_fn(self.grid, move |p| j.lambda(p[2]))
    }

    /// Pointwise squared lengths of the coframe basis of the given degree.
    fn coframe_weights(&self, degree: u8) -> Vec<ScalarField> {
        let one = ScalarField::constant(self.grid, 1.0);
        let l = self.lambda_field();
        let inv = l.map(|v| 1.0 / v);
        match degree {
            0 | 3 => vec![one],
            // |η| = 1, |ε¹|² = 1/λ, |ε²|² = λ
            1 => vec![one, inv, l],
            // |ε¹∧ε²| = 1, |ε²∧η|² = λ, |η∧ε¹|² = 1/λ
            _ => vec![one, l, inv],
        }
    }

    /// `π_H β = β − β(T) η` on a coordinate 1-form.
    pub fn project_horizontal(&self, b: &CoordOneForm) -> CoordOneForm {
        let frame = FrameForm::from_coord_one(b);
        let zero = ScalarField::zeros(self.grid);
        FrameForm::new(1, vec![zero, frame.comps()[1].clone(), frame.comps()[2].clone()])
            .to_coord_one()
            .expect("degree one")
    }

    /// `T ⌟ (η ∧ β)`, computed in coordinates.
    pub fn reeb_into_eta_wedge(&self, b: &CoordOneForm) -> CoordOneForm {
        let two = self.eta().wedge(b);
        // (T ⌟ B)(V) = B·(T × V) = (B × T)·V
        let t = [ScalarField::from_fn(self.grid, |p| p[2].cos()), ScalarField::from_fn(self.grid, |p| p[2].sin())];
        let [bx, by, bz] = &two.comps;
        CoordOneForm::new([
            -bz.hadamard(&t[1]),
            bz.hadamard(&t[0]),
            &bx.hadamard(&t[1]) - &by.hadamard(&t[0]),
        ])
    }
}

/// The contact symmetry `F_c(x, y, z) = (x cos c − y sin c, x sin c + y cos c, z + c)`
/// for `c = turns·π/2`, the values of `c` for which it is a map of the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuarterTurn(pub i64);

impl QuarterTurn {
    pub fn angle(&self) -> f64 {
        self.0 as f64 * std::f64::consts::FRAC_PI_2
    }

    /// Integer linear part of the map.
    pub fn linear(&self) -> [[i64; 3]; 3] {
        let (c, s) = match self.0.rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        [[c, -s, 0], [s, c, 0], [0, 0, 1]]
    }

    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let a = self.linear();
        let mut out = [0.0; 3];
        for (i, row) in a.iter().enumerate() {
            out[i] = row.iter().zip(p).map(|(&m, v)| m as f64 * v).sum();
        }
        out[2] += self.angle();
        out
    }

    /// `f ∘ F_c`, an exact permutation of grid values.
    pub fn pull_back(&self, f: &ScalarField) -> ScalarField {
        let g = f.grid();
        let n = g.n() as i64;
        let a = self.linear();
        let shift = self.0 * n / 4;
        let v = f.values();
        ScalarField::from_values(
            g,
            (0..g.len())
                .map(|idx| {
                    let (i, j, k) = g.unravel(idx);
                    let (i, j, k) = (i as i64, j as i64, k as i64);
                    let x = (a[0][0] * i + a[0][1] * j).rem_euclid(n) as usize;
                    let y = (a[1][0] * i + a[1][1] * j).rem_euclid(n) as usize;
                    let z = (k + shift).rem_euclid(n) as usize;
                    v[g.index(x, y, z)]
                })
                .collect(),
        )
    }
}

/// `X ⌟ dη` on `H`: `flat(a e₁ + b e₂) = −b ε¹ + a ε²`.
pub fn flat(x: &FrameVectorField) -> RuminForm {
    RuminForm::one(-&x.e2, x.e1.clone())
}

/// Inverse of [`flat`]: `sharp(p ε¹ + q ε²) = q e₁ − p e₂`.
pub fn sharp(phi: &RuminForm) -> Result<FrameVectorField> {
    phi.expect_degree(1)?;
    let [p, q] = [&phi.comps()[0], &phi.comps()[1]];
    Ok(FrameVectorField::new(ScalarField::zeros(p.grid()), q.clone(), -p))
}
