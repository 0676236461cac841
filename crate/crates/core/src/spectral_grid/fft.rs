//! Cached rustfft plans and a row-major 3-D transform.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};

type PlanCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

static PLANS: Lazy<PlanCache> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut cache = PLANS.lock().expect("fft plan cache poisoned");
    cache
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// Unnormalized in-place transform of an `n³` buffer stored row-major (x slowest).
pub(crate) fn fft3(buf: &mut [Complex64], n: usize, inverse: bool) {
    debug_assert_eq!(buf.len(), n * n * n);
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    // z lines are contiguous
    fft.process_with_scratch(buf, &mut scratch);

    let mut line = vec![Complex64::default(); n];
    // y lines
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                line[j] = buf[(i * n + j) * n + k];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for j in 0..n {
                buf[(i * n + j) * n + k] = line[j];
            }
        }
    }
    // x lines
    for j in 0..n {
        for k in 0..n {
            for i in 0..n {
                line[i] = buf[(i * n + j) * n + k];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for i in 0..n {
                buf[(i * n + j) * n + k] = line[i];
            }
        }
    }
}

/// Signed wavenumber of FFT slot `m` on an axis of length `n` (Nyquist reported as `-n/2`).
pub(crate) fn wavenumber(m: usize, n: usize) -> i64 {
    if m < n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

/// FFT slot holding wavenumber `k` on an axis of length `n`.
pub(crate) fn slot(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}
