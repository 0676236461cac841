//! Witness ratios for the hypoelliptic estimate of `Δ_Q` and the regularity
//! gain of `G_Q`, over random band-limited forms.

use rayon::prelude::*;

use super::Hodge;
use crate::error::Result;
use crate::folland_stein::{fs_norm, RatioReport, RatioRow};
use crate::rumin::{laplacian, random_form};
use crate::spectral_grid::Grid;

/// Folland–Stein derivatives gained by inverting `Δ_Q` in `degree`: its
/// order, two at the ends of the complex and four in the middle.
pub fn derivative_gain(degree: u8) -> usize {
    if degree == 1 || degree == 2 {
        4
    } else {
        2
    }
}

fn rows(samples: usize, band: usize, s: usize, ratio: impl Fn(u64) -> Result<f64> + Sync) -> Result<Vec<RatioRow>> {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            Ok(RatioRow {
                sample: i,
                band,
                s,
                ratio: ratio(i as u64)?,
            })
        })
        .collect()
}

/// `‖w‖_{s+gain} / (‖Δ_Q w‖_s + ‖w‖₀)`.
pub fn hypoelliptic_report(
    grid: Grid,
    seed: u64,
    samples: usize,
    band: usize,
    s: usize,
    degree: u8,
) -> Result<RatioReport> {
    let gain = derivative_gain(degree);
    let rows = rows(samples, band, s, |i| {
        let w = random_form(grid, degree, seed.wrapping_add(4 * i), band, 1.0)?;
        Ok(fs_norm(&w, s + gain)? / (fs_norm(&laplacian(&w), s)? + fs_norm(&w, 0)?))
    })?;
    Ok(RatioReport::new(format!("hypoelliptic_degree{degree}"), rows))
}

/// `‖G_Q w‖_{s+gain} / ‖w‖_s`.
pub fn regularity_gain_report(
    hodge: &Hodge,
    seed: u64,
    samples: usize,
    band: usize,
    s: usize,
    degree: u8,
) -> Result<RatioReport> {
    let gain = derivative_gain(degree);
    let grid = hodge.grid();
    let rows = rows(samples, band, s, |i| {
        let w = random_form(grid, degree, seed.wrapping_add(4 * i), band, 1.0)?;
        Ok(fs_norm(&hodge.g_q(&w)?, s + gain)? / fs_norm(&w, s)?)
    })?;
    Ok(RatioReport::new(format!("green_gain_degree{degree}"), rows))
}
