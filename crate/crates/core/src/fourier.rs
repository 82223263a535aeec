//! Discrete Fourier helpers on the uniform periodic t-grid `t_i = 2πi/N`.
//!
//! Coefficients use the normalization `ĉ(k) = N⁻¹ Σ_i c(t_i) e^{-ikt_i}`, so
//! `c(t_i) = Σ_k ĉ(k) e^{ikt_i}` and `ĉ(0)` is the mean. Coefficient arrays are
//! stored in FFT order: index `j` holds wavenumber `j` for `j <= N/2` and
//! `j - N` above.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn check_grid_len(n: usize) -> Result<()> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::BadGridLength(n))
    }
}

/// Grid nodes `2πi/N`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

/// Signed wavenumber held at FFT index `j`.
#[inline]
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// FFT index holding wavenumber `k` (aliased modulo `n`).
#[inline]
pub fn index_of(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

pub fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

pub fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
    buf
}

/// Spectral derivative of a periodic grid function. The Nyquist mode is dropped.
pub fn derivative(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut c = forward(samples);
    for (j, v) in c.iter_mut().enumerate() {
        if 2 * j == n {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= Complex64::new(0.0, wavenumber(j, n) as f64);
        }
    }
    inverse(&c)
}

/// Spectral antiderivative vanishing at `t = 0`, ignoring the mean:
/// `Σ_{k≠0} ĉ(k)(e^{ikt} - 1)/(ik)`.
pub fn periodic_antiderivative(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut c = forward(samples);
    c[0] = Complex64::new(0.0, 0.0);
    let mut offset = Complex64::new(0.0, 0.0);
    for (j, v) in c.iter_mut().enumerate() {
        if j == 0 {
            continue;
        }
        if 2 * j == n {
            *v = Complex64::new(0.0, 0.0);
            continue;
        }
        *v /= Complex64::new(0.0, wavenumber(j, n) as f64);
        offset += *v;
    }
    inverse(&c).into_iter().map(|v| v - offset).collect()
}

/// Evaluate the trigonometric interpolant at an arbitrary `t`.
/// The Nyquist term is split symmetrically between `±N/2`.
pub fn interpolate(coeffs: &[Complex64], t: f64) -> Complex64 {
    let n = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            if 2 * j == n {
                c * (n as f64 / 2.0 * t).cos()
            } else {
                c * Complex64::from_polar(1.0, wavenumber(j, n) as f64 * t)
            }
        })
        .sum()
}

/// Values of the trigonometric interpolant on the grid refined `factor` times.
pub fn upsample(samples: &[Complex64], factor: usize) -> Vec<Complex64> {
    let n = samples.len();
    let m = n * factor;
    let c = forward(samples);
    let mut padded = vec![Complex64::new(0.0, 0.0); m];
    for (j, &v) in c.iter().enumerate() {
        if 2 * j == n && factor > 1 {
            padded[n / 2] += 0.5 * v;
            padded[m - n / 2] += 0.5 * v;
        } else {
            padded[index_of(wavenumber(j, n), m)] += v;
        }
    }
    inverse(&padded)
}

pub fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}
