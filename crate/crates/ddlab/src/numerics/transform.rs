//! Discrete Fourier transforms.
//!
//! Convention: the forward transform is unnormalized,
//! `X[k] = sum_n x[n] exp(-j 2 pi k n / N)`, and the inverse carries the
//! full `1/N`. This is the usual OFDM convention and keeps per-subcarrier
//! channel coefficients unscaled.
//!
//! The heavy lifting is delegated to `rustfft`; plans are cached per thread
//! so repeated transforms of the same length are cheap and deterministic.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// DFT of `x`; `inverse` selects the `1/N`-scaled inverse transform.
pub fn dft(x: &[Complex64], inverse: bool) -> Result<Vec<Complex64>> {
    if x.is_empty() {
        return Err(Error::EmptyInput("dft input"));
    }
    let n = x.len();
    let mut buf = x.to_vec();
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let plan = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        plan.process(&mut buf);
    });
    if inverse {
        let scale = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
    Ok(buf)
}

/// Inverse DFT, `x[n] = (1/N) sum_k X[k] exp(+j 2 pi k n / N)`.
pub fn idft(x: &[Complex64]) -> Result<Vec<Complex64>> {
    dft(x, true)
}
