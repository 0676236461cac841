use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::fft::slot;
use super::field::ScalarField;
use super::grid::Grid;
use crate::error::Result;

/// Width of the Gaussian spectral envelope `exp(-|k|² / ENVELOPE)`.
pub const ENVELOPE: f64 = 4.0;

/// Wavenumbers with `max |k_i| == shell` and first nonzero component positive,
/// in lexicographic order.
fn shell_half(shell: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for kx in -shell..=shell {
        for ky in -shell..=shell {
            for kz in -shell..=shell {
                let k = [kx, ky, kz];
                if k.iter().map(|v| v.abs()).max() != Some(shell) {
                    continue;
                }
                let lead = k.iter().find(|&&v| v != 0).copied().unwrap_or(0);
                if lead > 0 {
                    out.push(k);
                }
            }
        }
    }
    out
}

/// Real field whose spectrum lives in `max |k_i| <= band`.
///
/// Modes are drawn shell by shell from a seeded stream, so the same seed gives
/// the same trigonometric polynomial on every grid and a band-`b` field is a
/// prefix of the band-`b+1` draw. The result is scaled so that the sum of
/// coefficient moduli, an upper bound for the supremum, equals `amplitude`.
pub fn random_band_limited(grid: Grid, seed: u64, band: usize, amplitude: f64) -> Result<ScalarField> {
    grid.check_band(band)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> f64 { StandardNormal.sample(rng) };

    let mut modes: Vec<([i64; 3], Complex64)> = vec![([0, 0, 0], Complex64::new(draw(&mut rng), 0.0))];
    for shell in 1..=band as i64 {
        for k in shell_half(shell) {
            let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
            let env = (-k2 / ENVELOPE).exp();
            let re = draw(&mut rng);
            let im = draw(&mut rng);
            modes.push((k, Complex64::new(re, im) * env));
        }
    }

    let total: f64 = modes
        .iter()
        .map(|(k, c)| if *k == [0, 0, 0] { c.norm() } else { 2.0 * c.norm() })
        .sum();
    let scale = if total > 0.0 { amplitude / total } else { 0.0 };

    let n = grid.n();
    let mut buf = vec![Complex64::default(); grid.len()];
    for (k, c) in modes {
        let c = c * scale;
        buf[grid.index(slot(k[0], n), slot(k[1], n), slot(k[2], n))] = c;
        if k != [0, 0, 0] {
            buf[grid.index(slot(-k[0], n), slot(-k[1], n), slot(-k[2], n))] = c.conj();
        }
    }
    super::fft::fft3(&mut buf, n, true);
    Ok(ScalarField::from_values(grid, buf.into_iter().map(|c| c.re).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let g = Grid::new(16).unwrap();
        let a = random_band_limited(g, 11, 3, 1.0).unwrap();
        let b = random_band_limited(g, 11, 3, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn band_zero_is_constant() {
        let g = Grid::new(8).unwrap();
        let f = random_band_limited(g, 5, 0, 0.7).unwrap();
        let v0 = f.values()[0];
        assert!((v0.abs() - 0.7).abs() < 1e-14);
        assert!(f.values().iter().all(|v| (v - v0).abs() < 1e-14));
    }

    #[test]
    fn rejects_nyquist_band() {
        let g = Grid::new(8).unwrap();
        assert!(random_band_limited(g, 1, 4, 1.0).is_err());
    }

    #[test]
    fn refinement_invariant() {
        let coarse = Grid::new(16).unwrap();
        let fine = Grid::new(32).unwrap();
        let a = random_band_limited(coarse, 3, 3, 1.0).unwrap();
        let b = random_band_limited(fine, 3, 3, 1.0).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                for k in 0..16 {
                    let va = a.values()[coarse.index(i, j, k)];
                    let vb = b.values()[fine.index(2 * i, 2 * j, 2 * k)];
                    assert!((va - vb).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn supported_in_band_and_bounded() {
        let g = Grid::new(16).unwrap();
        let f = random_band_limited(g, 9, 4, 0.3).unwrap();
        assert!(f.spectral_tail(4) < 1e-12);
        assert!(f.sup_norm() <= 0.3 + 1e-12);
    }
}
