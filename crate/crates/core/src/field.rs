//! Partial Fourier representation `û(t_i, ξ)` of a function on `T × T^n`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fourier;
use crate::symbols::{LatticePoint, LatticeWindow};

/// Samples `û(t_i, ξ)` on the t-grid for every `ξ` of a window, stored mode-major.
#[derive(Clone, Debug)]
pub struct SpectralField {
    window: LatticeWindow,
    n_t: usize,
    data: Vec<Complex64>,
    partial: bool,
}

impl SpectralField {
    pub fn zeros(window: LatticeWindow, n_t: usize) -> Result<Self> {
        fourier::check_grid_len(n_t)?;
        let data = vec![Complex64::new(0.0, 0.0); window.len() * n_t];
        Ok(Self {
            window,
            n_t,
            data,
            partial: false,
        })
    }

    pub fn from_fn(
        window: LatticeWindow,
        n_t: usize,
        f: impl Fn(&LatticePoint, f64) -> Complex64,
    ) -> Result<Self> {
        let mut out = Self::zeros(window, n_t)?;
        let grid = fourier::grid(n_t);
        for m in 0..out.window.len() {
            let xi = out.window.points()[m].clone();
            for (v, &t) in out.mode_mut(m).iter_mut().zip(&grid) {
                *v = f(&xi, t);
            }
        }
        Ok(out)
    }

    /// Random t-bandlimited field: each mode is `Σ_{|k|<=bandwidth} a_k e^{ikt}`
    /// with `a_k` uniform in the unit square. The origin mode is zero when
    /// `zero_origin` is set.
    pub fn random_bandlimited(
        window: LatticeWindow,
        n_t: usize,
        bandwidth: i64,
        seed: u64,
        zero_origin: bool,
    ) -> Result<Self> {
        if 2 * bandwidth >= n_t as i64 {
            return Err(Error::InvalidArgument(format!(
                "bandwidth {bandwidth} not resolved on {n_t} points"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Self::zeros(window, n_t)?;
        let origin = out.window.origin_index();
        for m in 0..out.window.len() {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); n_t];
            for k in -bandwidth..=bandwidth {
                coeffs[fourier::index_of(k, n_t)] =
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            if zero_origin && m == origin {
                continue;
            }
            out.mode_mut(m).copy_from_slice(&fourier::inverse(&coeffs));
        }
        Ok(out)
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mode(&self, m: usize) -> &[Complex64] {
        &self.data[m * self.n_t..(m + 1) * self.n_t]
    }

    pub fn mode_mut(&mut self, m: usize) -> &mut [Complex64] {
        &mut self.data[m * self.n_t..(m + 1) * self.n_t]
    }

    pub fn mode_at(&self, xi: &LatticePoint) -> Option<&[Complex64]> {
        self.window.index_of(xi).map(|m| self.mode(m))
    }

    pub fn set_mode(&mut self, xi: &LatticePoint, values: &[Complex64]) -> Result<()> {
        let m = self
            .window
            .index_of(xi)
            .ok_or_else(|| Error::InvalidArgument(format!("ξ = {xi} outside the window")))?;
        if values.len() != self.n_t {
            return Err(Error::GridMismatch(format!(
                "mode of length {} on a {}-point grid",
                values.len(),
                self.n_t
            )));
        }
        self.mode_mut(m).copy_from_slice(values);
        Ok(())
    }

    /// Iterator over `(ξ, û(·, ξ))`.
    pub fn modes(&self) -> impl Iterator<Item = (&LatticePoint, &[Complex64])> {
        self.window
            .points()
            .iter()
            .zip(self.data.chunks_exact(self.n_t))
    }

    pub(crate) fn from_modes(
        window: LatticeWindow,
        n_t: usize,
        modes: Vec<Vec<Complex64>>,
    ) -> Self {
        debug_assert_eq!(modes.len(), window.len());
        Self {
            window,
            n_t,
            data: modes.into_iter().flatten().collect(),
            partial: false,
        }
    }

    /// Set when some modes could not be solved and were zero-filled.
    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub(crate) fn mark_partial(&mut self) {
        self.partial = true;
    }

    pub fn sup_norm(&self) -> f64 {
        fourier::sup_norm(&self.data)
    }

    pub fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.n_t != other.n_t || self.window != other.window {
            return Err(Error::GridMismatch(format!(
                "fields on (N_t={}, Ξ={}) and (N_t={}, Ξ={})",
                self.n_t,
                self.window.radius(),
                other.n_t,
                other.window.radius()
            )));
        }
        Ok(())
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        out.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, &b)| *a = f(*a, b));
        out.partial = self.partial || other.partial;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= k);
        out
    }

    /// `‖self − other‖_∞ / max(‖other‖_∞, 1e-30)`.
    pub fn relative_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.sup_norm() / other.sup_norm().max(1e-30))
    }
}
