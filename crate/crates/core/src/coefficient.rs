//! Smooth 2π-periodic complex coefficients `c(t)` held as grid samples together
//! with their discrete Fourier coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::QuadraticReal;
use crate::fourier;

/// Default number of t-grid points.
pub const DEFAULT_GRID: usize = 256;

/// Relative Fourier tail below which a sampled coefficient counts as constant.
pub const CONSTANT_TAIL_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct PeriodicCoefficient {
    samples: Vec<Complex64>,
    fourier: Vec<Complex64>,
    exact_mean: Option<QuadraticReal>,
}

impl PeriodicCoefficient {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        fourier::check_grid_len(samples.len())?;
        let fourier = fourier::forward(&samples);
        Ok(Self {
            samples,
            fourier,
            exact_mean: None,
        })
    }

    /// Builds `c(t) = Σ ĉ(k) e^{ikt}` on an `n`-point grid; `|k| <= n/2`.
    pub fn from_fourier(n: usize, modes: &[(i64, Complex64)]) -> Result<Self> {
        fourier::check_grid_len(n)?;
        let limit = (n / 2) as i64;
        let mut fourier = vec![Complex64::new(0.0, 0.0); n];
        for &(k, c) in modes {
            if k.abs() > limit {
                return Err(Error::NotBandlimited { k, limit });
            }
            fourier[fourier::index_of(k, n)] += c;
        }
        let samples = fourier::inverse(&fourier);
        Ok(Self {
            samples,
            fourier,
            exact_mean: None,
        })
    }

    pub fn constant(n: usize, value: Complex64) -> Result<Self> {
        Self::from_fourier(n, &[(0, value)])
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        fourier::check_grid_len(n)?;
        Self::from_samples(fourier::grid(n).into_iter().map(f).collect())
    }

    /// Attach an exact declaration of the mean. Fails if it disagrees with the
    /// sampled mean by more than `1e-9` relative.
    pub fn with_exact_mean(mut self, mean: QuadraticReal) -> Result<Self> {
        let declared = mean.to_f64();
        let actual = self.mean();
        if (actual - Complex64::new(declared, 0.0)).norm() > 1e-9 * declared.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "declared exact mean {mean} disagrees with sampled mean {actual}"
            )));
        }
        self.exact_mean = Some(mean);
        Ok(self)
    }

    pub fn exact_mean(&self) -> Option<&QuadraticReal> {
        self.exact_mean.as_ref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Fourier coefficients in FFT order.
    pub fn fourier(&self) -> &[Complex64] {
        &self.fourier
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.fourier[fourier::index_of(k, self.len())]
    }

    /// `c₀ = ĉ(0)`.
    pub fn mean(&self) -> Complex64 {
        self.fourier[0]
    }

    /// `a(t) = Re c(t)` at the grid points.
    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.re).collect()
    }

    /// `b(t) = Im c(t)` at the grid points.
    pub fn imag_part(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.im).collect()
    }

    /// Trigonometric interpolant at arbitrary `t`.
    pub fn eval(&self, t: f64) -> Complex64 {
        fourier::interpolate(&self.fourier, t)
    }

    /// Relative size of the non-constant Fourier content.
    pub fn tail_ratio(&self) -> f64 {
        let total = fourier::sup_norm(&self.fourier);
        if total == 0.0 {
            return 0.0;
        }
        let tail = self.fourier[1..].iter().fold(0.0f64, |m, c| m.max(c.norm()));
        tail / total
    }

    pub fn is_constant(&self) -> bool {
        self.tail_ratio() <= CONSTANT_TAIL_TOL
    }

    /// Same coefficient with every sample replaced by the mean.
    pub fn frozen(&self) -> Self {
        let mut out = Self::constant(self.len(), self.mean()).expect("grid already validated");
        out.exact_mean = self.exact_mean.clone();
        out
    }

    pub fn derivative(&self) -> Self {
        Self::from_samples(fourier::derivative(&self.samples)).expect("grid already validated")
    }

    pub fn antiderivative(&self) -> Antiderivative {
        Antiderivative::new(self)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::from_samples(self.samples.iter().map(|c| c * k).collect())
            .expect("grid already validated")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch(format!(
                "coefficients on {} and {} points",
                self.len(),
                other.len()
            )));
        }
        Self::from_samples(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

/// `Φ_c(t) = c₀ t + Σ_{k≠0} ĉ(k)(e^{ikt} − 1)/(ik)`.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    mean: Complex64,
    /// Fourier coefficients of the periodic part, with its value at 0 folded
    /// into the zero mode so that `Φ_c(0) = 0`.
    periodic: Vec<Complex64>,
}

impl Antiderivative {
    fn new(c: &PeriodicCoefficient) -> Self {
        let n = c.len();
        let mut periodic = vec![Complex64::new(0.0, 0.0); n];
        let mut offset = Complex64::new(0.0, 0.0);
        for j in 1..n {
            if 2 * j == n {
                continue;
            }
            let k = fourier::wavenumber(j, n) as f64;
            periodic[j] = c.fourier()[j] / Complex64::new(0.0, k);
            offset += periodic[j];
        }
        periodic[0] = -offset;
        Self {
            mean: c.mean(),
            periodic,
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.mean * t + fourier::interpolate(&self.periodic, t)
    }

    /// Periodic part `Φ_c(t) − c₀ t` at the grid points.
    pub fn periodic_part(&self) -> Vec<Complex64> {
        fourier::inverse(&self.periodic)
    }

    /// `Φ_c` at the grid points.
    pub fn on_grid(&self) -> Vec<Complex64> {
        let n = self.periodic.len();
        self.periodic_part()
            .into_iter()
            .zip(fourier::grid(n))
            .map(|(p, t)| p + self.mean * t)
            .collect()
    }

    pub fn mean(&self) -> Complex64 {
        self.mean
    }
}

/// A closed interval `[lo, hi] ⊂ [0, 2π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 2.0 * PI || lo >= hi {
            return Err(Error::BadInterval(format!("[{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Mollifier profile `exp(1 − 1/(1 − x²))`, peak 1 at the midpoint.
    pub fn bump(&self, t: f64) -> f64 {
        let half = 0.5 * (self.hi - self.lo);
        let x = (t.rem_euclid(2.0 * PI) - self.midpoint()) / half;
        if x.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - x * x)).exp()
        }
    }

    /// Distance between intervals on the circle.
    fn circle_gap(&self, other: &Self) -> f64 {
        let (first, second) = if self.lo <= other.lo {
            (self, other)
        } else {
            (other, self)
        };
        let direct = second.lo - first.hi;
        let wrap = first.lo + 2.0 * PI - second.hi;
        direct.min(wrap)
    }
}

/// Two real nonnegative bump coefficients with disjoint supports.
#[derive(Clone, Debug)]
pub struct BumpPair {
    pub support_a: Interval,
    pub support_b: Interval,
    pub a: PeriodicCoefficient,
    pub b: PeriodicCoefficient,
}

impl BumpPair {
    pub fn profile_a(&self, t: f64) -> f64 {
        self.support_a.bump(t)
    }

    pub fn profile_b(&self, t: f64) -> f64 {
        self.support_b.bump(t)
    }

    /// `c(t) = a(t) + i b(t)`.
    pub fn combined(&self) -> PeriodicCoefficient {
        let samples = self
            .a
            .samples()
            .iter()
            .zip(self.b.samples())
            .map(|(a, b)| Complex64::new(a.re, b.re))
            .collect();
        PeriodicCoefficient::from_samples(samples).expect("grid already validated")
    }
}

pub fn bump_pair(n: usize, support_a: Interval, support_b: Interval) -> Result<BumpPair> {
    let gap = support_a.circle_gap(&support_b);
    if gap <= 0.0 {
        return Err(Error::OverlappingSupports(format!(
            "[{}, {}] and [{}, {}]",
            support_a.lo, support_a.hi, support_b.lo, support_b.hi
        )));
    }
    let a = PeriodicCoefficient::from_fn(n, |t| Complex64::new(support_a.bump(t), 0.0))?;
    let b = PeriodicCoefficient::from_fn(n, |t| Complex64::new(support_b.bump(t), 0.0))?;
    Ok(BumpPair {
        support_a,
        support_b,
        a,
        b,
    })
}
