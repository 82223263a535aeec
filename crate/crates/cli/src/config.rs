//! JSON run configuration: schema, defaults and semantic validation.

use std::fmt;

use num_complex::Complex64;
use serde::Deserialize;
use toruscauchy_core::coefficient::{bump_pair, Interval, PeriodicCoefficient, DEFAULT_GRID};
use toruscauchy_core::diophantine::{liouville_number, ScanPoint, SequenceSource};
use toruscauchy_core::solver::{Integrator, Orientation};
use toruscauchy_core::symbols::{LatticePoint, LatticeWindow, ToroidalSymbol};
use toruscauchy_core::{CauchyFactor, ProductOperator, QuadraticReal};

pub const DEFAULT_WINDOW: i64 = 64;

/// A complex number written as `1.5` or `[re, im]`.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexSpec {
    pub fn value(self) -> Complex64 {
        match self {
            Self::Real(re) => Complex64::new(re, 0.0),
            Self::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

/// An integer coordinate; strings allow values beyond the JSON number range.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum WideInt {
    Int(i64),
    Text(String),
}

impl WideInt {
    fn value(&self) -> Result<i128, String> {
        match self {
            Self::Int(v) => Ok(*v as i128),
            Self::Text(s) => s
                .trim()
                .parse::<i128>()
                .map_err(|_| format!("`{s}` is not an integer")),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub k: i64,
    pub value: ComplexSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientSpec {
    Constant { value: ComplexSpec },
    Fourier { modes: Vec<ModeSpec> },
    Samples { values: Vec<ComplexSpec> },
    BumpPair { support_a: [f64; 2], support_b: [f64; 2] },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub xi: Vec<i64>,
    pub value: ComplexSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolSpec {
    Coordinate {
        axis: usize,
    },
    Power {
        exponent: f64,
    },
    SqrtLaplacian,
    Laplacian,
    /// Explicit values on a window of the given radius; unlisted points are 0.
    Table {
        radius: i64,
        order: f64,
        entries: Vec<TableEntry>,
    },
    PiecewiseAlpha,
    PiecewiseBeta,
    PiecewiseExample,
    Scaled {
        #[serde(default)]
        factor: Option<ComplexSpec>,
        /// Exact real factor such as `"1/2"` or `"sqrt(2)"`.
        #[serde(default)]
        exact: Option<String>,
        inner: Box<SymbolSpec>,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub coefficient: CoefficientSpec,
    pub symbol: SymbolSpec,
    /// Exact value of the coefficient mean, e.g. `"1/2"` or `"sqrt(2)"`.
    #[serde(default)]
    pub exact_mean: Option<String>,
    #[serde(default)]
    pub assume_hormander: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhsEntry {
    pub xi: Vec<i64>,
    pub modes: Vec<ModeSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RhsSpec {
    /// `f̂(t, ξ) = Σ_k c_k e^{ikt}` on the listed modes, zero elsewhere.
    Table { entries: Vec<RhsEntry> },
    /// `f = L u` for a seeded random t-bandlimited `u`.
    Manufactured {
        bandwidth: i64,
        #[serde(default = "default_true")]
        zero_origin: bool,
    },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceSpec {
    /// `c(ξ) = λ ξ₁` with an exact slope.
    Linear { slope: String },
    /// `c(ξ) = λ ξ₁` with `λ = Σ_{k<=depth} base^{−k!}`.
    Liouville { base: u64, depth: u32 },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default = "default_tol_z")]
    pub tol_z: f64,
    #[serde(default = "default_tol_compat")]
    pub tol_compat: f64,
    #[serde(default = "default_tol_resonance")]
    pub tol_resonance: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            tol_z: default_tol_z(),
            tol_compat: default_tol_compat(),
            tol_resonance: default_tol_resonance(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorSpec {
    #[default]
    Auto,
    Spectral,
    Simpson,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum OrientationSpec {
    #[default]
    Forward,
    Reverse,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default)]
    pub integrator: IntegratorSpec,
    #[serde(default)]
    pub orientation: OrientationSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularSpec {
    /// 1-based factor carrying the seed; defaults to the rightmost factor.
    #[serde(default)]
    pub factor: Option<usize>,
    #[serde(default = "default_sparsity")]
    pub sparsity: f64,
    #[serde(default)]
    pub include_zero: bool,
}

impl Default for SingularSpec {
    fn default() -> Self {
        Self {
            factor: None,
            sparsity: default_sparsity(),
            include_zero: false,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(default = "default_n_t")]
    pub n_t: usize,
    #[serde(default = "default_window")]
    pub window: i64,
    #[serde(default)]
    pub factors: Vec<FactorSpec>,
    /// Monic polynomial coefficients `p_1, …, p_m` in `τ^m + Σ p_j(ξ)τ^{m−j}`.
    #[serde(default)]
    pub polynomial: Vec<SymbolSpec>,
    #[serde(default)]
    pub rhs: Option<RhsSpec>,
    #[serde(default)]
    pub extra_points: Vec<Vec<WideInt>>,
    #[serde(default)]
    pub sequence: Option<SequenceSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub singular: SingularSpec,
}

fn default_true() -> bool {
    true
}
fn default_dimension() -> usize {
    1
}
fn default_n_t() -> usize {
    DEFAULT_GRID
}
fn default_window() -> i64 {
    DEFAULT_WINDOW
}
fn default_tol_z() -> f64 {
    toruscauchy_core::solver::DEFAULT_TOL_Z
}
fn default_tol_compat() -> f64 {
    toruscauchy_core::solver::DEFAULT_TOL_COMPAT
}
fn default_tol_resonance() -> f64 {
    toruscauchy_core::diophantine::DEFAULT_RESONANCE_TOL
}
fn default_sparsity() -> f64 {
    1.0
}

/// Every problem found in a configuration, each with its JSON path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration:")?;
        for e in &self.0 {
            writeln!(f, "  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

/// Validated configuration with constructed operator data.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub dimension: usize,
    pub n_t: usize,
    pub window: LatticeWindow,
    pub operator: ProductOperator,
    /// Polynomial coefficients when the operator was given as a polynomial.
    pub polynomial: Option<Vec<ToroidalSymbol>>,
    pub rhs: Option<RhsSpec>,
    pub extra_points: Vec<ScanPoint>,
    pub sequence: Option<SequenceSource>,
    pub seed: u64,
    pub tol_z: f64,
    pub tol_compat: f64,
    pub tol_resonance: f64,
    pub integrator: Integrator,
    pub orientation: Orientation,
    pub singular: SingularSpec,
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigErrors(vec![format!("{path}: {}", e.into_inner())])
    })?;
    validate(raw)
}

struct Collector(Vec<String>);

impl Collector {
    fn push(&mut self, path: &str, msg: impl fmt::Display) {
        self.0.push(format!("{path}: {msg}"));
    }

    fn take<T, E: fmt::Display>(&mut self, path: &str, r: Result<T, E>) -> Option<T> {
        r.map_err(|e| self.push(path, e)).ok()
    }
}

fn build_symbol(spec: &SymbolSpec, dimension: usize, path: &str, errs: &mut Collector) -> Option<ToroidalSymbol> {
    match spec {
        SymbolSpec::Coordinate { axis } => {
            if *axis == 0 || *axis > dimension {
                errs.push(&format!("{path}.axis"), format!("axis {axis} outside 1..={dimension}"));
                return None;
            }
            Some(ToroidalSymbol::coordinate(*axis))
        }
        SymbolSpec::Power { exponent } => {
            if !exponent.is_finite() {
                errs.push(&format!("{path}.exponent"), "must be finite");
                return None;
            }
            Some(ToroidalSymbol::power(*exponent))
        }
        SymbolSpec::SqrtLaplacian => Some(ToroidalSymbol::sqrt_laplacian()),
        SymbolSpec::Laplacian => Some(ToroidalSymbol::laplacian()),
        SymbolSpec::PiecewiseAlpha | SymbolSpec::PiecewiseBeta | SymbolSpec::PiecewiseExample => {
            if dimension != 1 {
                errs.push(path, "piecewise symbols need dimension 1");
                return None;
            }
            Some(match spec {
                SymbolSpec::PiecewiseAlpha => ToroidalSymbol::piecewise_alpha(),
                SymbolSpec::PiecewiseBeta => ToroidalSymbol::piecewise_beta(),
                _ => ToroidalSymbol::piecewise_example(),
            })
        }
        SymbolSpec::Table { radius, order, entries } => {
            let window = errs.take(&format!("{path}.radius"), LatticeWindow::new(dimension, *radius))?;
            let mut values = vec![Complex64::new(0.0, 0.0); window.len()];
            let mut ok = true;
            for (i, e) in entries.iter().enumerate() {
                let p = LatticePoint::new(e.xi.clone());
                match window.index_of(&p) {
                    Some(m) if e.xi.len() == dimension => values[m] = e.value.value(),
                    _ => {
                        errs.push(&format!("{path}.entries[{i}].xi"), format!("{p} outside the table window"));
                        ok = false;
                    }
                }
            }
            if !ok {
                return None;
            }
            errs.take(path, ToroidalSymbol::table(window, values, *order))
        }
        SymbolSpec::Scaled { factor, exact, inner } => {
            let inner = build_symbol(inner, dimension, &format!("{path}.inner"), errs);
            let exact = match exact {
                Some(text) => Some(errs.take(&format!("{path}.exact"), text.parse::<QuadraticReal>())?),
                None => None,
            };
            let inner = inner?;
            match (factor, exact) {
                (None, Some(q)) => Some(ToroidalSymbol::scaled_exact(q, inner)),
                (Some(c), None) => Some(ToroidalSymbol::scaled(c.value(), inner)),
                (Some(c), Some(q)) => {
                    if (c.value() - Complex64::new(q.to_f64(), 0.0)).norm() > 1e-9 {
                        errs.push(path, "factor and exact disagree");
                        return None;
                    }
                    Some(ToroidalSymbol::scaled_exact(q, inner))
                }
                (None, None) => {
                    errs.push(path, "scaled symbol needs `factor` or `exact`");
                    None
                }
            }
        }
    }
}

fn build_coefficient(spec: &CoefficientSpec, n_t: usize, path: &str, errs: &mut Collector) -> Option<PeriodicCoefficient> {
    match spec {
        CoefficientSpec::Constant { value } => errs.take(path, PeriodicCoefficient::constant(n_t, value.value())),
        CoefficientSpec::Fourier { modes } => {
            let modes: Vec<(i64, Complex64)> = modes.iter().map(|m| (m.k, m.value.value())).collect();
            errs.take(path, PeriodicCoefficient::from_fourier(n_t, &modes))
        }
        CoefficientSpec::Samples { values } => {
            if values.len() != n_t {
                errs.push(&format!("{path}.values"), format!("expected {n_t} samples, found {}", values.len()));
                return None;
            }
            errs.take(path, PeriodicCoefficient::from_samples(values.iter().map(|v| v.value()).collect()))
        }
        CoefficientSpec::BumpPair { support_a, support_b } => {
            let a = errs.take(&format!("{path}.support_a"), Interval::new(support_a[0], support_a[1]));
            let b = errs.take(&format!("{path}.support_b"), Interval::new(support_b[0], support_b[1]));
            let pair = errs.take(path, bump_pair(n_t, a?, b?))?;
            Some(pair.combined())
        }
    }
}

fn validate(raw: RawConfig) -> Result<RunConfig, ConfigErrors> {
    let mut errs = Collector(Vec::new());
    let dimension = raw.dimension;
    if !(1..=3).contains(&dimension) {
        errs.push("dimension", format!("{dimension} outside 1..=3"));
    }
    let n_t = raw.n_t;
    if toruscauchy_core::fourier::check_grid_len(n_t).is_err() {
        errs.push("n_t", format!("{n_t} is not a power of two >= 8"));
    }
    if raw.window < 1 {
        errs.push("window", format!("radius {} must be positive", raw.window));
    }
    for (name, v) in [
        ("tolerances.tol_z", raw.tolerances.tol_z),
        ("tolerances.tol_compat", raw.tolerances.tol_compat),
        ("tolerances.tol_resonance", raw.tolerances.tol_resonance),
        ("singular.sparsity", raw.singular.sparsity),
    ] {
        if !(v.is_finite() && v > 0.0) {
            errs.push(name, format!("{v} must be positive"));
        }
    }
    if !errs.0.is_empty() {
        return Err(ConfigErrors(errs.0));
    }
    let window = errs.take("window", LatticeWindow::new(dimension, raw.window));

    let mut factors = Vec::new();
    let mut polynomial = None;
    match (raw.factors.is_empty(), raw.polynomial.is_empty()) {
        (true, true) => errs.push("factors", "declare `factors` or `polynomial`"),
        (false, false) => errs.push("polynomial", "`factors` and `polynomial` are exclusive"),
        (false, true) => {
            for (i, f) in raw.factors.iter().enumerate() {
                let path = format!("factors[{i}]");
                let c = build_coefficient(&f.coefficient, n_t, &format!("{path}.coefficient"), &mut errs);
                let s = build_symbol(&f.symbol, dimension, &format!("{path}.symbol"), &mut errs);
                let exact = match &f.exact_mean {
                    Some(text) => errs.take(&format!("{path}.exact_mean"), text.parse::<QuadraticReal>()).map(Some),
                    None => Some(None),
                };
                if let (Some(mut c), Some(s), Some(exact)) = (c, s, exact) {
                    if let Some(q) = exact {
                        match c.with_exact_mean(q) {
                            Ok(with) => c = with,
                            Err(e) => {
                                errs.push(&format!("{path}.exact_mean"), e);
                                continue;
                            }
                        }
                    }
                    factors.push(CauchyFactor::new(c, s).with_hormander(f.assume_hormander));
                }
            }
        }
        (true, false) => {
            let symbols: Vec<_> = raw
                .polynomial
                .iter()
                .enumerate()
                .filter_map(|(i, s)| build_symbol(s, dimension, &format!("polynomial[{i}]"), &mut errs))
                .collect();
            if symbols.len() == raw.polynomial.len() {
                if let Some(op) = errs.take("polynomial", ProductOperator::from_polynomial(n_t, &symbols)) {
                    factors = op.factors().to_vec();
                    polynomial = Some(symbols);
                }
            }
        }
    }

    let mut extra_points = Vec::new();
    for (i, p) in raw.extra_points.iter().enumerate() {
        if p.len() != dimension {
            errs.push(&format!("extra_points[{i}]"), format!("expected {dimension} coordinates"));
            continue;
        }
        let coords: Result<Vec<i128>, String> = p.iter().map(WideInt::value).collect();
        if let Some(c) = errs.take(&format!("extra_points[{i}]"), coords) {
            extra_points.push(ScanPoint(c));
        }
    }

    let sequence = match &raw.sequence {
        None => None,
        Some(SequenceSpec::Linear { slope }) => errs
            .take("sequence.slope", slope.parse::<QuadraticReal>())
            .map(SequenceSource::Linear),
        Some(SequenceSpec::Liouville { base, depth }) => errs
            .take("sequence", liouville_number(*base, *depth))
            .map(|r| SequenceSource::Linear(QuadraticReal::rational(r))),
    };

    if let Some(RhsSpec::Table { entries }) = &raw.rhs {
        for (i, e) in entries.iter().enumerate() {
            let p = LatticePoint::new(e.xi.clone());
            let inside = e.xi.len() == dimension && window.as_ref().is_some_and(|w| w.index_of(&p).is_some());
            if !inside {
                errs.push(&format!("rhs.entries[{i}].xi"), format!("{p} outside the window"));
            }
            for (j, m) in e.modes.iter().enumerate() {
                if 2 * m.k.unsigned_abs() >= n_t as u64 {
                    errs.push(&format!("rhs.entries[{i}].modes[{j}].k"), format!("{} not resolved on {n_t} points", m.k));
                }
            }
        }
    }
    if let Some(RhsSpec::Manufactured { bandwidth, .. }) = &raw.rhs {
        if *bandwidth < 0 || 2 * bandwidth >= n_t as i64 {
            errs.push("rhs.bandwidth", format!("{bandwidth} not resolved on {n_t} points"));
        }
    }
    if let Some(k) = raw.singular.factor {
        let m = if factors.is_empty() { raw.factors.len().max(raw.polynomial.len()) } else { factors.len() };
        if k == 0 || k > m {
            errs.push("singular.factor", format!("{k} outside 1..={m}"));
        }
    }

    if !errs.0.is_empty() {
        return Err(ConfigErrors(errs.0));
    }
    Ok(RunConfig {
        dimension,
        n_t,
        window: window.expect("validated window"),
        operator: ProductOperator::new(factors),
        polynomial,
        rhs: raw.rhs,
        extra_points,
        sequence,
        seed: raw.seed,
        tol_z: raw.tolerances.tol_z,
        tol_compat: raw.tolerances.tol_compat,
        tol_resonance: raw.tolerances.tol_resonance,
        integrator: match raw.solver.integrator {
            IntegratorSpec::Auto => Integrator::Auto,
            IntegratorSpec::Spectral => Integrator::Spectral,
            IntegratorSpec::Simpson => Integrator::Simpson,
        },
        orientation: match raw.solver.orientation {
            OrientationSpec::Forward => Orientation::Forward,
            OrientationSpec::Reverse => Orientation::Reverse,
        },
        singular: raw.singular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "factors": [{"coefficient": {"kind": "constant", "value": -0.5},
                     "symbol": {"kind": "coordinate", "axis": 1}}]
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.n_t, 256);
        assert_eq!(c.window.radius(), 64);
        assert_eq!(c.operator.len(), 1);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn exact_mean_declaration() {
        let text = r#"{"factors": [{"coefficient": {"kind": "constant", "value": 0.5},
            "symbol": {"kind": "coordinate", "axis": 1}, "exact_mean": "1/2"}]}"#;
        let c = parse_config(text).unwrap();
        assert!(c.operator.factors()[0].has_exact_data());
    }

    #[test]
    fn overlapping_bumps_are_rejected() {
        let text = r#"{"factors": [{"coefficient": {"kind": "bump_pair", "support_a": [0.5, 2.0], "support_b": [1.5, 3.0]},
            "symbol": {"kind": "piecewise_example"}}]}"#;
        let e = parse_config(text).unwrap_err();
        assert!(e.to_string().contains("supports must be disjoint"), "{e}");
    }

    #[test]
    fn unknown_keys_report_their_path() {
        let text = r#"{"factors": [{"coefficient": {"kind": "constant", "value": 1.0, "bogus": 1},
            "symbol": {"kind": "coordinate", "axis": 1}}]}"#;
        let e = parse_config(text).unwrap_err();
        assert!(e.0[0].starts_with("factors[0].coefficient"), "{e}");
        assert!(parse_config(r#"{"windw": 3}"#).is_err());
    }

    #[test]
    fn all_semantic_errors_at_once() {
        let text = r#"{"window": 16, "tolerances": {"tol_z": -1.0}, "n_t": 100,
            "factors": [{"coefficient": {"kind": "constant", "value": 1.0}, "symbol": {"kind": "coordinate", "axis": 1}}]}"#;
        let e = parse_config(text).unwrap_err();
        assert_eq!(e.0.len(), 2, "{e}");
        let text = r#"{"dimension": 1, "factors": [
            {"coefficient": {"kind": "samples", "values": [1.0]}, "symbol": {"kind": "coordinate", "axis": 2}},
            {"coefficient": {"kind": "constant", "value": 1.0}, "symbol": {"kind": "scaled", "inner": {"kind": "laplacian"}}}]}"#;
        let e = parse_config(text).unwrap_err();
        assert_eq!(e.0.len(), 3, "{e}");
    }

    #[test]
    fn wide_probe_points() {
        let text = r#"{"factors": [{"coefficient": {"kind": "constant", "value": 1.0}, "symbol": {"kind": "coordinate", "axis": 1}}],
            "extra_points": [[100], ["1000000000000000000000000"]],
            "sequence": {"kind": "liouville", "base": 10, "depth": 5}}"#;
        let c = parse_config(text).unwrap();
        assert_eq!(c.extra_points[1].0[0], 10i128.pow(24));
        assert!(c.sequence.is_some());
    }
}
