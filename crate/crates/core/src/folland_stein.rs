//! Folland–Stein norms: `‖f‖_s² = Σ_{|I| ≤ s} ‖e_I f‖²`, the sum running over all
//! words in the horizontal frame.
//!
//! Words are applied to exact Fourier spectra, so the norm of a band-limited
//! field is computed without truncation and does not depend on the grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::contact_model::{horizontal, reeb, Direction, FrameVectorField};
use crate::error::{Error, Result};
use crate::rumin::RuminForm;
use crate::spectral_grid::{random_band_limited, Grid, ScalarField, Spectrum};

/// Default cap on derivative orders.
pub const S_MAX: usize = 6;

/// Resolution of the grid on which sup norms are sampled.
pub const SUP_GRID: usize = 32;

/// A word `I = (i₁, …, i_t)` over the horizontal frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordIndex {
    letters: Vec<Direction>,
}

impl WordIndex {
    pub fn new(letters: Vec<Direction>) -> Result<Self> {
        if letters.len() > S_MAX {
            return Err(Error::OrderTooHigh {
                order: letters.len(),
                limit: S_MAX,
            });
        }
        Ok(Self { letters })
    }

    /// Parses a word such as `"121"`; the empty string is the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                '1' => Ok(Direction::E1),
                '2' => Ok(Direction::E2),
                _ => Err(Error::Config(format!("bad letter `{c}` in word `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    pub fn letters(&self) -> &[Direction] {
        &self.letters
    }

    pub fn order(&self) -> usize {
        self.letters.len()
    }

    /// All words of length exactly `order`, in lexicographic order.
    pub fn all(order: usize) -> Vec<Self> {
        (0..1usize << order)
            .map(|bits| Self {
                letters: (0..order)
                    .map(|i| {
                        if bits >> (order - 1 - i) & 1 == 0 {
                            Direction::E1
                        } else {
                            Direction::E2
                        }
                    })
                    .collect(),
            })
            .collect()
    }
}

/// The ordered derivative `e₁^{a₁} e₂^{a₂} T^{a₃}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DAIndex {
    pub a1: usize,
    pub a2: usize,
    pub a3: usize,
}

impl DAIndex {
    pub fn new(a1: usize, a2: usize, a3: usize) -> Self {
        Self { a1, a2, a3 }
    }

    /// Reeb derivatives count twice.
    pub fn contact_order(&self) -> usize {
        self.a1 + self.a2 + 2 * self.a3
    }
}

/// Order of a Folland–Stein norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FSNormConfig {
    s: usize,
}

impl FSNormConfig {
    pub fn new(s: usize) -> Result<Self> {
        check_order(s)?;
        Ok(Self { s })
    }

    pub fn s(&self) -> usize {
        self.s
    }
}

fn check_order(s: usize) -> Result<()> {
    if s > S_MAX {
        Err(Error::OrderTooHigh { order: s, limit: S_MAX })
    } else {
        Ok(())
    }
}

/// `e_{i₁} e_{i₂} … e_{i_t} f`; the last letter acts first.
pub fn word_derivative(f: &ScalarField, word: &WordIndex) -> ScalarField {
    word_spectrum(&f.spectrum(), word).to_field()
}

fn word_spectrum(f: &Spectrum, word: &WordIndex) -> Spectrum {
    word.letters
        .iter()
        .rev()
        .fold(f.clone(), |acc, &dir| horizontal(&acc, dir))
}

/// `e₁^{a₁} e₂^{a₂} T^{a₃} f` together with its contact order.
pub fn da_derivative(f: &ScalarField, index: DAIndex) -> (ScalarField, usize) {
    let mut s = f.spectrum();
    for _ in 0..index.a3 {
        s = reeb(&s);
    }
    for _ in 0..index.a2 {
        s = horizontal(&s, Direction::E2);
    }
    for _ in 0..index.a1 {
        s = horizontal(&s, Direction::E1);
    }
    (s.to_field(), index.contact_order())
}

/// Objects measured componentwise in the global frame.
pub trait FrameComponents {
    fn frame_components(&self) -> Vec<&ScalarField>;
}

impl FrameComponents for ScalarField {
    fn frame_components(&self) -> Vec<&ScalarField> {
        vec![self]
    }
}

impl FrameComponents for FrameVectorField {
    fn frame_components(&self) -> Vec<&ScalarField> {
        self.components().to_vec()
    }
}

impl FrameComponents for RuminForm {
    fn frame_components(&self) -> Vec<&ScalarField> {
        self.comps().iter().collect()
    }
}

impl FrameComponents for [ScalarField] {
    fn frame_components(&self) -> Vec<&ScalarField> {
        self.iter().collect()
    }
}

// Σ_{|I| ≤ s} ⟨e_I a, e_I b⟩ = ⟨a, b⟩ + Σ_j (e_j a, e_j b)_{s−1}
fn inner_spectra(a: &Spectrum, b: &Spectrum, s: usize) -> f64 {
    let base = a.inner(b);
    if s == 0 {
        return base;
    }
    let branch = |dir| inner_spectra(&horizontal(a, dir), &horizontal(b, dir), s - 1);
    let (x, y) = if s >= 4 {
        rayon::join(|| branch(Direction::E1), || branch(Direction::E2))
    } else {
        (branch(Direction::E1), branch(Direction::E2))
    };
    base + x + y
}

fn norm_sq_spectrum(a: &Spectrum, s: usize) -> f64 {
    let base = a.norm_sq();
    if s == 0 {
        return base;
    }
    let branch = |dir| norm_sq_spectrum(&horizontal(a, dir), s - 1);
    let (x, y) = if s >= 4 {
        rayon::join(|| branch(Direction::E1), || branch(Direction::E2))
    } else {
        (branch(Direction::E1), branch(Direction::E2))
    };
    base + x + y
}

/// `(a, b)_s`, summed over frame components.
pub fn fs_inner<A: FrameComponents + ?Sized>(a: &A, b: &A, s: usize) -> Result<f64> {
    check_order(s)?;
    Ok(a.frame_components()
        .iter()
        .zip(b.frame_components())
        .map(|(x, y)| inner_spectra(&x.spectrum(), &y.spectrum(), s))
        .sum())
}

/// `‖a‖_s`, summed over frame components.
pub fn fs_norm<A: FrameComponents + ?Sized>(a: &A, s: usize) -> Result<f64> {
    check_order(s)?;
    Ok(a.frame_components()
        .iter()
        .map(|x| norm_sq_spectrum(&x.spectrum(), s))
        .sum::<f64>()
        .sqrt())
}

/// `sup |f|` sampled on the trigonometric interpolant over a fixed fine grid,
/// so the value does not depend on the working resolution.
pub fn sup_norm(f: &ScalarField) -> f64 {
    let n = f.grid().n().max(SUP_GRID);
    f.resample(Grid::new(n).expect("power of two")).sup_norm()
}

/// One measured ratio.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub sample: usize,
    pub band: usize,
    pub s: usize,
    pub ratio: f64,
}

/// Ratios over a sample set with their extremes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub name: String,
    pub rows: Vec<RatioRow>,
    pub max: f64,
    pub min: f64,
}

impl RatioReport {
    pub fn new(name: impl Into<String>, rows: Vec<RatioRow>) -> Self {
        let max = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        let min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        Self {
            name: name.into(),
            rows,
            max,
            min,
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.ratio.is_finite())
    }

    /// Relative change of the maximum ratio against another report.
    pub fn drift(&self, other: &Self) -> f64 {
        (self.max - other.max).abs() / self.max.abs().max(other.max.abs())
    }
}

fn sample_rows(
    samples: usize,
    band: usize,
    s: usize,
    ratio: impl Fn(usize) -> Result<f64> + Sync,
) -> Result<Vec<RatioRow>> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            Ok(RatioRow {
                sample: i,
                band,
                s,
                ratio: ratio(i)?,
            })
        })
        .collect()
}

/// `sup|f| / ‖f‖₃` over random band-limited fields.
pub fn sobolev_ratio_report(grid: Grid, seed: u64, samples: usize, band: usize) -> Result<RatioReport> {
    let s = 3;
    let rows = sample_rows(samples, band, s, |i| {
        let f = random_band_limited(grid, seed.wrapping_add(i as u64), band, 1.0)?;
        Ok(sup_norm(&f) / fs_norm(&f, s)?)
    })?;
    Ok(RatioReport::new("sobolev", rows))
}

/// `‖fg‖_k / (‖f‖_s ‖g‖_k)` over random pairs.
pub fn algebra_constant_report(
    grid: Grid,
    seed: u64,
    samples: usize,
    band: usize,
    s: usize,
    k: usize,
) -> Result<RatioReport> {
    let rows = sample_rows(samples, band, s, |i| {
        let base = seed.wrapping_add(2 * i as u64);
        let f = random_band_limited(grid, base, band, 1.0)?;
        let g = random_band_limited(grid, base + 1, band, 1.0)?;
        Ok(fs_norm(&f.multiply(&g), k)? / (fs_norm(&f, s)? * fs_norm(&g, k)?))
    })?;
    Ok(RatioReport::new("algebra", rows))
}

/// Smallest admissible `min |f|` for [`division_ratio`].
pub const DIVISION_FLOOR: f64 = 0.1;

/// `‖1/f‖_s / (1 + ‖f‖_s)^s`.
pub fn division_ratio(f: &ScalarField, s: usize) -> Result<f64> {
    let one = ScalarField::constant(f.grid(), 1.0);
    let inv = one.divide(f, DIVISION_FLOOR)?;
    Ok(fs_norm(&inv, s)? / (1.0 + fs_norm(f, s)?).powi(s as i32))
}

/// [`division_ratio`] over fields `1 + h` with `sup|h| ≤ 1/2`.
pub fn division_report(grid: Grid, seed: u64, samples: usize, band: usize, s: usize) -> Result<RatioReport> {
    let rows = sample_rows(samples, band, s, |i| {
        let h = random_band_limited(grid, seed.wrapping_add(i as u64), band, 0.5)?;
        division_ratio(&h.map(|v| 1.0 + v), s)
    })?;
    Ok(RatioReport::new("division", rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_enumerate() {
        assert_eq!(WordIndex::all(0).len(), 1);
        let w = WordIndex::all(3);
        assert_eq!(w.len(), 8);
        assert_eq!(w[1], WordIndex::parse("112").unwrap());
        assert!(WordIndex::parse("1234").is_err());
        assert!(WordIndex::parse("1212121").is_err());
    }

    #[test]
    fn norm_matches_word_sum() {
        let g = Grid::new(16).unwrap();
        let f = random_band_limited(g, 5, 2, 1.0).unwrap();
        let direct: f64 = (0..=3)
            .flat_map(WordIndex::all)
            .map(|w| word_derivative(&f, &w).l2_norm().powi(2))
            .sum();
        let n = fs_norm(&f, 3).unwrap();
        assert!((n * n - direct).abs() < 1e-10 * direct);
    }
}
