use crate::field::SpectralField;
use crate::fourier;

/// Shells needed before a classification is attempted.
pub const MIN_SHELLS: usize = 4;
/// Slope at or below which a derivative order counts as rapidly decaying.
pub const RAPID_SLOPE: f64 = -10.0;
const VANISH_RATIO: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayClass {
    RapidDecay,
    PolynomialDecay(f64),
    NoDecay,
    Growth(f64),
    Inconclusive { shells: usize },
}

impl DecayClass {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RapidDecay => "RAPID_DECAY",
            Self::PolynomialDecay(_) => "POLYNOMIAL_DECAY",
            Self::NoDecay => "NO_DECAY",
            Self::Growth(_) => "GROWTH",
            Self::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    pub fn is_rapid(&self) -> bool {
        matches!(self, Self::RapidDecay)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecayOptions {
    /// Magnitude against which values count as vanished, in addition to the
    /// field's own maximum. Lets a roundoff-level image read as zero. For
    /// `∂_t^α` it is scaled by `(N_t/2)^α`.
    pub reference_scale: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    /// Shell radii `R = 2^j` with `R <= Ξ`.
    pub radii: Vec<f64>,
    /// `sup[α][j] = max_{R/2 < |ξ| <= R, t} |∂_t^α û(t, ξ)|`, `α = 0, 1, 2`.
    pub sup: [Vec<f64>; 3],
    /// Least-squares slope of `ln s_α` against `ln R`; absent when the last
    /// shell has vanished.
    pub slopes: [Option<f64>; 3],
    pub classification: DecayClass,
}

fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Classify smoothness from the decay of `û(t, ξ)` over dyadic shells.
///
/// A derivative order is rapid when its last shell has vanished (below
/// `1e-12` of the largest value) or its fitted slope is at most −10. The field
/// is `RAPID_DECAY` when all three orders are; otherwise the `α = 0` slope
/// `s` decides: `s <= −1/2` is polynomial decay of order `−s`, `|s| < 1/2` is
/// no decay, and `s >= 1/2` is growth of order `s`.
pub fn decay_classify(field: &SpectralField, options: &DecayOptions) -> DecayReport {
    let radius = field.window().radius();
    let mut radii = Vec::new();
    let mut r = 2i64;
    while r <= radius {
        radii.push(r as f64);
        r *= 2;
    }
    let shells = radii.len();
    let mut sup: [Vec<f64>; 3] = [vec![0.0; shells], vec![0.0; shells], vec![0.0; shells]];
    for (xi, mode) in field.modes() {
        let Some(j) = xi.shell() else { continue };
        if j == 0 || j as usize > shells {
            continue;
        }
        let d1 = fourier::derivative(mode);
        let d2 = fourier::derivative(&d1);
        for (alpha, values) in [mode, &d1[..], &d2[..]].into_iter().enumerate() {
            let s = &mut sup[alpha][j as usize - 1];
            *s = s.max(fourier::sup_norm(values));
        }
    }
    let mut report = DecayReport {
        radii,
        sup,
        slopes: [None; 3],
        classification: DecayClass::Inconclusive { shells },
    };
    if shells < MIN_SHELLS {
        return report;
    }
    if report.sup[0].iter().all(|&v| v == 0.0) {
        report.classification = DecayClass::RapidDecay;
        return report;
    }

    let bandwidth = (field.n_t() / 2) as f64;
    let logs: Vec<f64> = report.radii.iter().map(|r| r.ln()).collect();
    let mut rapid = [false; 3];
    for alpha in 0..3 {
        let s = &report.sup[alpha];
        let own = s.iter().fold(0.0f64, |m, &v| m.max(v));
        // Bernstein bound on the grid: ‖∂^α v‖ <= (N_t/2)^α ‖v‖
        let reference = options.reference_scale.unwrap_or(0.0) * bandwidth.powi(alpha as i32);
        let floor = VANISH_RATIO * own.max(reference);
        if s[shells - 1] <= floor {
            rapid[alpha] = true;
            continue;
        }
        let take = 3.max(shells.div_ceil(2));
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..shells)
            .rev()
            .filter(|&j| s[j] > floor)
            .take(take)
            .map(|j| (logs[j], s[j].ln()))
            .unzip();
        let slope = if xs.len() >= 2 { fit_slope(&xs, &ys) } else { f64::NEG_INFINITY };
        report.slopes[alpha] = Some(slope);
        rapid[alpha] = slope <= RAPID_SLOPE;
    }
    report.classification = if rapid.iter().all(|&r| r) {
        DecayClass::RapidDecay
    } else {
        let slope = report.slopes.iter().flatten().next().copied().unwrap_or(0.0);
        if slope <= -0.5 {
            DecayClass::PolynomialDecay(-slope)
        } else if slope < 0.5 {
            DecayClass::NoDecay
        } else {
            DecayClass::Growth(slope)
        }
    };
    report
}
