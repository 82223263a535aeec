use rayon::prelude::*;

use crate::error::Result;
use crate::fourier;
use crate::operators::CauchyFactor;
use crate::symbols::{LatticePoint, LatticeWindow};

const SIGN_TOL: f64 = 1e-12;

/// Lower bound of `Im M(t, ξ)` over a t-grid and a lattice window.
#[derive(Clone, Debug, PartialEq)]
pub struct HoermanderReport {
    /// `η̂ = −min Im M`.
    pub eta_hat: f64,
    pub worst_point: LatticePoint,
    pub worst_t: f64,
    /// Modes where `Im M(·, ξ)` exceeds `1e-12` somewhere and falls below
    /// `−1e-12` elsewhere.
    pub sign_changing_modes: Vec<LatticePoint>,
    /// Always true on a finite scan; reported together with the window.
    pub bounded_below: bool,
    pub radius: i64,
    /// `min Im M` over each dyadic shell `j >= 0` meeting the window.
    pub shell_minima: Vec<(u32, f64)>,
    /// The outermost shell does not reach below the inner shells.
    pub scan_consistent: bool,
}

pub fn hoermander_scan(factor: &CauchyFactor, window: &LatticeWindow) -> Result<HoermanderReport> {
    let grid = fourier::grid(factor.n_t());
    let per_mode = window
        .points()
        .par_iter()
        .map(|xi| {
            let m = factor.multiplier(xi)?;
            let (mut lo, mut hi, mut at) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
            for (i, v) in m.iter().enumerate() {
                if v.im < lo {
                    lo = v.im;
                    at = i;
                }
                hi = hi.max(v.im);
            }
            Ok((lo, hi, at))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut worst = (f64::INFINITY, 0usize, 0usize);
    let mut sign_changing_modes = Vec::new();
    let mut shells = std::collections::BTreeMap::<u32, f64>::new();
    for (m, (xi, &(lo, hi, at))) in window.points().iter().zip(&per_mode).enumerate() {
        if lo < worst.0 {
            worst = (lo, m, at);
        }
        if lo < -SIGN_TOL && hi > SIGN_TOL {
            sign_changing_modes.push(xi.clone());
        }
        if let Some(j) = xi.shell() {
            let e = shells.entry(j).or_insert(lo);
            *e = e.min(lo);
        }
    }
    let shell_minima: Vec<(u32, f64)> = shells.into_iter().collect();
    let scan_consistent = match shell_minima.split_last() {
        Some((&(_, outer), inner)) if !inner.is_empty() => {
            let inner_min = inner.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            outer >= inner_min - SIGN_TOL
        }
        _ => true,
    };
    Ok(HoermanderReport {
        eta_hat: -worst.0,
        worst_point: window.points()[worst.1].clone(),
        worst_t: grid[worst.2],
        sign_changing_modes,
        bounded_below: true,
        radius: window.radius(),
        shell_minima,
        scan_consistent,
    })
}
