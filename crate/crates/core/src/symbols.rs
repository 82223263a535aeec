//! Lattice points, finite lattice windows and toroidal symbols `p(ξ)`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::QuadraticReal;
use crate::poly;

/// A point `ξ ∈ Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn origin(dimension: usize) -> Self {
        Self(vec![0; dimension])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// `max(|ξ|, 1)`; used wherever a log or a negative power of `|ξ|` appears.
    pub fn norm_guard(&self) -> f64 {
        self.norm().max(1.0)
    }

    /// Dyadic shell `j` with `2^{j-1} < |ξ| <= 2^j`; `None` at the origin.
    pub fn shell(&self) -> Option<u32> {
        dyadic_shell_sq(self.norm_sq() as u128)
    }
}

impl From<Vec<i64>> for LatticePoint {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Shell index from a squared norm, exact for integer inputs.
pub fn dyadic_shell_sq(norm_sq: u128) -> Option<u32> {
    if norm_sq == 0 {
        return None;
    }
    let mut j = 0u32;
    while (1u128 << (2 * j)) < norm_sq {
        j += 1;
    }
    Some(j)
}

/// All `ξ ∈ Z^n` with `|ξ| <= radius`, in lexicographic order.
#[derive(Clone, Debug)]
pub struct LatticeWindow {
    dimension: usize,
    radius: i64,
    points: Vec<LatticePoint>,
    // dense index over the cube [-radius, radius]^n
    lookup: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl PartialEq for LatticeWindow {
    fn eq(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.radius == other.radius
    }
}

impl LatticeWindow {
    pub fn new(dimension: usize, radius: i64) -> Result<Self> {
        if !(1..=3).contains(&dimension) {
            return Err(Error::InvalidArgument(format!(
                "dimension {dimension} not in 1..=3"
            )));
        }
        if radius < 1 {
            return Err(Error::InvalidArgument(format!("window radius {radius} < 1")));
        }
        let side = (2 * radius + 1) as usize;
        let cube = side.pow(dimension as u32);
        if cube > 50_000_000 {
            return Err(Error::InvalidArgument(format!(
                "window radius {radius} too large for dimension {dimension}"
            )));
        }
        let r2 = radius * radius;
        let mut points = Vec::new();
        let mut lookup = vec![ABSENT; cube];
        let mut coords = vec![-radius; dimension];
        for (slot, entry) in lookup.iter_mut().enumerate() {
            let mut rem = slot;
            for d in (0..dimension).rev() {
                coords[d] = (rem % side) as i64 - radius;
                rem /= side;
            }
            if coords.iter().map(|c| c * c).sum::<i64>() <= r2 {
                *entry = points.len() as u32;
                points.push(LatticePoint(coords.clone()));
            }
        }
        Ok(Self {
            dimension,
            radius,
            points,
            lookup,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, xi: &LatticePoint) -> Option<usize> {
        if xi.dimension() != self.dimension || xi.0.iter().any(|c| c.abs() > self.radius) {
            return None;
        }
        let side = 2 * self.radius + 1;
        let slot = xi.0.iter().fold(0i64, |acc, c| acc * side + c + self.radius) as usize;
        match self.lookup[slot] {
            ABSENT => None,
            i => Some(i as usize),
        }
    }

    pub fn origin_index(&self) -> usize {
        self.index_of(&LatticePoint::origin(self.dimension))
            .expect("window contains the origin")
    }

    /// Number of dyadic shells `(2^{j-1}, 2^j]` meeting the window, `j >= 1`.
    pub fn shell_count(&self) -> u32 {
        dyadic_shell_sq((self.radius * self.radius) as u128).unwrap_or(0)
    }
}

/// Explicit symbol values on a window.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    pub window: LatticeWindow,
    pub values: Vec<Complex64>,
}

#[derive(Clone, Debug)]
pub enum SymbolKind {
    /// `|ξ|^ν`, with `p(0) = 0`.
    Power { exponent: f64 },
    /// `ξ_k` with a 1-based axis.
    Coordinate { axis: usize },
    /// `|ξ|`
    SqrtLaplacian,
    /// `|ξ|²`
    Laplacian,
    Table(SymbolTable),
    /// Root `σ_index(ξ)` of `τ^m + Σ p_j(ξ) τ^{m-j}`.
    PolyRoot {
        coefficients: Vec<ToroidalSymbol>,
        index: usize,
    },
    /// Real part of the sign-changing example symbol on `Z`.
    PiecewiseAlpha,
    /// Imaginary part of the sign-changing example symbol on `Z`.
    PiecewiseBeta,
    /// `α(ξ) + iβ(ξ)`.
    PiecewiseExample,
    Scaled {
        factor: Complex64,
        exact_factor: Option<QuadraticReal>,
        inner: Box<ToroidalSymbol>,
    },
}

/// `p(ξ)` with declared order `ν` and bound constant `C`: `|p(ξ)| <= C max(|ξ|,1)^ν`.
#[derive(Clone, Debug)]
pub struct ToroidalSymbol {
    kind: SymbolKind,
    order: f64,
    bound_constant: f64,
}

/// Exact value of a symbol: real and imaginary parts as quadratic surds.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactComplex {
    pub re: QuadraticReal,
    pub im: QuadraticReal,
}

impl ExactComplex {
    pub fn real(re: QuadraticReal) -> Self {
        Self {
            re,
            im: QuadraticReal::integer(0),
        }
    }

    pub fn scale_real(&self, k: &QuadraticReal) -> Self {
        Self {
            re: self.re.mul(k),
            im: self.im.mul(k),
        }
    }

    pub fn is_integer(&self) -> bool {
        self.im.is_zero() && self.re.is_integer()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

fn int_q(n: i64) -> QuadraticReal {
    QuadraticReal::integer(n)
}

fn piecewise_alpha(x: i64) -> f64 {
    if x < 0 {
        if x % 2 != 0 {
            1.0 / x as f64
        } else {
            x.unsigned_abs() as f64
        }
    } else {
        0.0
    }
}

fn piecewise_beta(x: i64) -> f64 {
    if x < 0 {
        1.0
    } else {
        x as f64
    }
}

fn piecewise_alpha_exact(x: i64) -> QuadraticReal {
    if x < 0 && x % 2 != 0 {
        QuadraticReal::rational(BigRational::new(BigInt::one(), BigInt::from(x)))
    } else if x < 0 {
        int_q(-x)
    } else {
        int_q(0)
    }
}

fn piecewise_beta_exact(x: i64) -> QuadraticReal {
    if x < 0 {
        int_q(1)
    } else {
        int_q(x)
    }
}

impl ToroidalSymbol {
    pub fn new(kind: SymbolKind, order: f64, bound_constant: f64) -> Self {
        Self {
            kind,
            order,
            bound_constant,
        }
    }

    pub fn power(exponent: f64) -> Self {
        Self::new(SymbolKind::Power { exponent }, exponent, 1.0)
    }

    pub fn coordinate(axis: usize) -> Self {
        Self::new(SymbolKind::Coordinate { axis }, 1.0, 1.0)
    }

    pub fn sqrt_laplacian() -> Self {
        Self::new(SymbolKind::SqrtLaplacian, 1.0, 1.0)
    }

    pub fn laplacian() -> Self {
        Self::new(SymbolKind::Laplacian, 2.0, 1.0)
    }

    /// Table symbol; the bound constant is the smallest one valid on the table.
    pub fn table(window: LatticeWindow, values: Vec<Complex64>, order: f64) -> Result<Self> {
        if values.len() != window.len() {
            return Err(Error::InvalidArgument(format!(
                "table has {} values for a window of {} points",
                values.len(),
                window.len()
            )));
        }
        let bound = window
            .points()
            .iter()
            .zip(&values)
            .map(|(xi, v)| v.norm() / xi.norm_guard().powf(order))
            .fold(0.0, f64::max);
        Ok(Self::new(
            SymbolKind::Table(SymbolTable { window, values }),
            order,
            bound,
        ))
    }

    /// Root `index` of `τ^m + Σ p_j(ξ) τ^{m-j}`. Order `max ν_j/j` and a Fujiwara
    /// bound constant `2 max C_j^{1/j}`.
    pub fn poly_root(coefficients: Vec<ToroidalSymbol>, index: usize) -> Result<Self> {
        if coefficients.is_empty() || index >= coefficients.len() {
            return Err(Error::InvalidArgument(format!(
                "root index {index} for a degree-{} polynomial",
                coefficients.len()
            )));
        }
        let (order, bound) = coefficients.iter().enumerate().fold(
            (f64::NEG_INFINITY, 0.0f64),
            |(nu, c), (j, s)| {
                let j = (j + 1) as f64;
                (nu.max(s.order / j), c.max(s.bound_constant.powf(1.0 / j)))
            },
        );
        Ok(Self::new(
            SymbolKind::PolyRoot {
                coefficients,
                index,
            },
            order.max(0.0),
            2.0 * bound,
        ))
    }

    pub fn piecewise_alpha() -> Self {
        Self::new(SymbolKind::PiecewiseAlpha, 1.0, 1.0)
    }

    pub fn piecewise_beta() -> Self {
        Self::new(SymbolKind::PiecewiseBeta, 1.0, 1.0)
    }

    pub fn piecewise_example() -> Self {
        Self::new(SymbolKind::PiecewiseExample, 1.0, std::f64::consts::SQRT_2)
    }

    pub fn scaled(factor: Complex64, inner: ToroidalSymbol) -> Self {
        let order = inner.order;
        let bound = inner.bound_constant * factor.norm();
        Self::new(
            SymbolKind::Scaled {
                factor,
                exact_factor: None,
                inner: Box::new(inner),
            },
            order,
            bound,
        )
    }

    pub fn scaled_exact(factor: QuadraticReal, inner: ToroidalSymbol) -> Self {
        let mut s = Self::scaled(Complex64::new(factor.to_f64(), 0.0), inner);
        if let SymbolKind::Scaled { exact_factor, .. } = &mut s.kind {
            *exact_factor = Some(factor);
        }
        s
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn bound_constant(&self) -> f64 {
        self.bound_constant
    }

    /// True when `p(ξ)` is real for every `ξ`.
    pub fn is_real(&self) -> bool {
        match &self.kind {
            SymbolKind::Table(t) => t.values.iter().all(|v| v.im == 0.0),
            SymbolKind::PolyRoot { .. } | SymbolKind::PiecewiseExample => false,
            SymbolKind::Scaled { factor, inner, .. } => factor.im == 0.0 && inner.is_real(),
            _ => true,
        }
    }

    pub fn eval(&self, xi: &LatticePoint) -> Result<Complex64> {
        let real = |v: f64| Ok(Complex64::new(v, 0.0));
        match &self.kind {
            SymbolKind::Power { exponent } => {
                if xi.is_origin() {
                    real(0.0)
                } else {
                    real(xi.norm().powf(*exponent))
                }
            }
            SymbolKind::Coordinate { axis } => match xi.coords().get(axis.wrapping_sub(1)) {
                Some(&c) => real(c as f64),
                None => Err(Error::AxisOutOfRange {
                    axis: *axis,
                    dimension: xi.dimension(),
                }),
            },
            SymbolKind::SqrtLaplacian => real(xi.norm()),
            SymbolKind::Laplacian => real(xi.norm_sq() as f64),
            SymbolKind::Table(t) => t
                .window
                .index_of(xi)
                .map(|i| t.values[i])
                .ok_or_else(|| Error::SymbolUndefined(xi.coords().to_vec())),
            SymbolKind::PolyRoot {
                coefficients,
                index,
            } => {
                let coeffs = coefficients
                    .iter()
                    .map(|s| s.eval(xi))
                    .collect::<Result<Vec<_>>>()?;
                Ok(poly::monic_roots(&coeffs)[*index])
            }
            SymbolKind::PiecewiseAlpha => real(piecewise_alpha(Self::scalar(xi)?)),
            SymbolKind::PiecewiseBeta => real(piecewise_beta(Self::scalar(xi)?)),
            SymbolKind::PiecewiseExample => {
                let x = Self::scalar(xi)?;
                Ok(Complex64::new(piecewise_alpha(x), piecewise_beta(x)))
            }
            SymbolKind::Scaled { factor, inner, .. } => Ok(factor * inner.eval(xi)?),
        }
    }

    fn scalar(xi: &LatticePoint) -> Result<i64> {
        match xi.coords() {
            [x] => Ok(*x),
            _ => Err(Error::SymbolUndefined(xi.coords().to_vec())),
        }
    }

    /// Exact value, for kinds whose values are quadratic surds.
    pub fn eval_exact(&self, xi: &LatticePoint) -> Result<ExactComplex> {
        let not_exact = |what: &str| Err(Error::NotExact(what.to_string()));
        match &self.kind {
            SymbolKind::Power { exponent } => {
                if exponent.fract() != 0.0 || exponent.abs() > 64.0 {
                    return not_exact("power symbol with a non-integer exponent");
                }
                if xi.is_origin() {
                    return Ok(ExactComplex::real(int_q(0)));
                }
                let e = *exponent as i64;
                let n2 = BigRational::from_integer(BigInt::from(xi.norm_sq()));
                // |ξ|^e = (|ξ|²)^{⌊e/2⌋}·√(|ξ|²)^{e mod 2}
                let base = num_traits::pow::pow(n2.clone(), (e.unsigned_abs() / 2) as usize);
                let v = match (e < 0, e % 2 != 0) {
                    (false, false) => QuadraticReal::rational(base),
                    (false, true) => QuadraticReal::sqrt_of(n2).scale(&base),
                    (true, false) => QuadraticReal::rational(base.recip()),
                    // 1/(b√s) = √s/(b s)
                    (true, true) => QuadraticReal::sqrt_of(n2.clone()).scale(&(base * n2).recip()),
                };
                Ok(ExactComplex::real(v))
            }
            SymbolKind::Coordinate { axis } => match xi.coords().get(axis.wrapping_sub(1)) {
                Some(&c) => Ok(ExactComplex::real(int_q(c))),
                None => Err(Error::AxisOutOfRange {
                    axis: *axis,
                    dimension: xi.dimension(),
                }),
            },
            SymbolKind::SqrtLaplacian => Ok(ExactComplex::real(QuadraticReal::sqrt_of(
                BigRational::from_integer(BigInt::from(xi.norm_sq())),
            ))),
            SymbolKind::Laplacian => Ok(ExactComplex::real(int_q(xi.norm_sq()))),
            SymbolKind::Table(_) => not_exact("table symbol"),
            SymbolKind::PolyRoot { .. } => not_exact("polynomial-root symbol"),
            SymbolKind::PiecewiseAlpha => {
                Ok(ExactComplex::real(piecewise_alpha_exact(Self::scalar(xi)?)))
            }
            SymbolKind::PiecewiseBeta => {
                Ok(ExactComplex::real(piecewise_beta_exact(Self::scalar(xi)?)))
            }
            SymbolKind::PiecewiseExample => {
                let x = Self::scalar(xi)?;
                Ok(ExactComplex {
                    re: piecewise_alpha_exact(x),
                    im: piecewise_beta_exact(x),
                })
            }
            SymbolKind::Scaled {
                exact_factor,
                inner,
                ..
            } => match exact_factor {
                Some(k) => Ok(inner.eval_exact(xi)?.scale_real(k)),
                None => not_exact("scaled symbol without an exact factor"),
            },
        }
    }

    /// Whether `eval_exact` is supported for this kind.
    pub fn has_exact_form(&self) -> bool {
        match &self.kind {
            SymbolKind::Power { exponent } => exponent.fract() == 0.0,
            SymbolKind::Table(_) | SymbolKind::PolyRoot { .. } => false,
            SymbolKind::Scaled {
                exact_factor,
                inner,
                ..
            } => exact_factor.is_some() && inner.has_exact_form(),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub holds: bool,
    pub worst_point: LatticePoint,
    pub worst_ratio: f64,
}

/// Check `|p(ξ)| <= C max(|ξ|,1)^ν` over the window.
pub fn verify_symbol_bound(
    symbol: &ToroidalSymbol,
    window: &LatticeWindow,
    bound_constant: f64,
    order: f64,
) -> Result<BoundReport> {
    let mut worst = (LatticePoint::origin(window.dimension()), f64::NEG_INFINITY);
    for xi in window.points() {
        let ratio = symbol.eval(xi)?.norm() / xi.norm_guard().powf(order);
        if ratio > worst.1 {
            worst = (xi.clone(), ratio);
        }
    }
    // relative slack for the rounding in powf
    let holds = worst.1 <= bound_constant * (1.0 + 1e-12);
    Ok(BoundReport {
        holds,
        worst_point: worst.0,
        worst_ratio: worst.1,
    })
}

/// Declared bound of the symbol checked on the window.
pub fn verify_declared_bound(symbol: &ToroidalSymbol, window: &LatticeWindow) -> Result<BoundReport> {
    verify_symbol_bound(symbol, window, symbol.bound_constant, symbol.order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> LatticePoint {
        LatticePoint::new(c.to_vec())
    }

    #[test]
    fn window_enumeration() {
        let w = LatticeWindow::new(2, 2).unwrap();
        assert_eq!(w.len(), 13);
        assert_eq!(w.points()[0], pt(&[-2, 0]));
        assert!(w.index_of(&pt(&[0, 0])).is_some());
        assert_eq!(w.index_of(&pt(&[2, 1])), None);
        for (i, p) in w.points().iter().enumerate() {
            assert_eq!(w.index_of(p), Some(i));
        }
        let mut sorted = w.points().to_vec();
        sorted.sort();
        assert_eq!(sorted, w.points());
    }

    #[test]
    fn shells() {
        assert_eq!(pt(&[0]).shell(), None);
        assert_eq!(pt(&[1]).shell(), Some(0));
        assert_eq!(pt(&[2]).shell(), Some(1));
        assert_eq!(pt(&[3]).shell(), Some(2));
        assert_eq!(pt(&[4]).shell(), Some(2));
        assert_eq!(pt(&[5]).shell(), Some(3));
        assert_eq!(pt(&[3, 4]).shell(), Some(3));
        assert_eq!(LatticeWindow::new(1, 100).unwrap().shell_count(), 7);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ToroidalSymbol::coordinate(1).eval(&pt(&[5])).unwrap(), Complex64::new(5.0, 0.0));
        assert_eq!(ToroidalSymbol::sqrt_laplacian().eval(&pt(&[3, 4])).unwrap().re, 5.0);
        let a = ToroidalSymbol::piecewise_alpha();
        assert_eq!(a.eval(&pt(&[-3])).unwrap().re, -1.0 / 3.0);
        assert_eq!(a.eval(&pt(&[-2])).unwrap().re, 2.0);
        assert_eq!(a.eval(&pt(&[7])).unwrap().re, 0.0);
        assert!(ToroidalSymbol::coordinate(2).eval(&pt(&[5])).is_err());
    }

    #[test]
    fn table_miss_is_an_error() {
        let w = LatticeWindow::new(1, 2).unwrap();
        let t = ToroidalSymbol::table(w, vec![Complex64::new(1.0, 0.0); 5], 0.0).unwrap();
        assert!(t.eval(&pt(&[2])).is_ok());
        assert_eq!(t.eval(&pt(&[3])), Err(Error::SymbolUndefined(vec![3])));
    }

    #[test]
    fn bound_examples() {
        let w = LatticeWindow::new(1, 64).unwrap();
        let r = verify_symbol_bound(&ToroidalSymbol::sqrt_laplacian(), &w, 1.0, 1.0).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_ratio, 1.0);
        let r = verify_symbol_bound(&ToroidalSymbol::laplacian(), &w, 1.0, 1.0).unwrap();
        assert!(!r.holds);
        assert_eq!(r.worst_point.norm(), 64.0);
        // exhaustive: β(ξ) ∈ {1, ξ}, so |β| <= max(|ξ|,1)
        let r = verify_symbol_bound(&ToroidalSymbol::piecewise_beta(), &w, 1.0, 1.0).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn exact_values() {
        let s = ToroidalSymbol::sqrt_laplacian();
        assert!(s.eval_exact(&pt(&[3, 4])).unwrap().is_integer());
        assert!(!s.eval_exact(&pt(&[1, 1])).unwrap().is_integer());
        let p = ToroidalSymbol::power(3.0).eval_exact(&pt(&[1, 1])).unwrap();
        assert!((p.re.to_f64() - 8f64.sqrt()).abs() < 1e-15);
        let p = ToroidalSymbol::power(-1.0).eval_exact(&pt(&[1, 1])).unwrap();
        assert!((p.re.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
        let p = ToroidalSymbol::power(-2.0).eval_exact(&pt(&[2])).unwrap();
        assert_eq!(p.re.to_f64(), 0.25);
        assert!(ToroidalSymbol::power(1.5).eval_exact(&pt(&[2])).is_err());
    }

    #[test]
    fn poly_root_wave_roots() {
        // τ² + β²|ξ|² with β = 1
        let s = ToroidalSymbol::poly_root(
            vec![ToroidalSymbol::scaled(Complex64::new(0.0, 0.0), ToroidalSymbol::sqrt_laplacian()), ToroidalSymbol::laplacian()],
            0,
        )
        .unwrap();
        let r = s.eval(&pt(&[3, 4])).unwrap();
        assert!((r - Complex64::new(0.0, 5.0)).norm() < 1e-12);
        assert_eq!(s.order(), 1.0);
    }
}
