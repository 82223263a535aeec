//! Exact reals of the form `q·√s` with rational `q`, `s` and high-precision
//! distance-to-integer evaluation for them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Fraction bits used when an irrational surd is expanded to fixed point.
pub const FIXED_BITS: u64 = 384;

/// `q·√s`, kept normalized: `s = 1` whenever `√s` is rational or `q = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticReal {
    q: BigRational,
    s: BigRational,
}

fn rational_sqrt(s: &BigRational) -> Option<BigRational> {
    let (n, d) = (s.numer(), s.denom());
    if n.is_negative() {
        return None;
    }
    let rn = n.sqrt();
    let rd = d.sqrt();
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

impl QuadraticReal {
    /// `q·√s`. Panics if `s < 0`.
    pub fn new(q: BigRational, s: BigRational) -> Self {
        assert!(!s.is_negative(), "surd radicand must be nonnegative");
        if q.is_zero() || s.is_zero() {
            return Self::rational(BigRational::zero());
        }
        match rational_sqrt(&s) {
            Some(r) => Self::rational(q * r),
            None => Self { q, s },
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Self {
            q,
            s: BigRational::one(),
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn sqrt_of(s: BigRational) -> Self {
        Self::new(BigRational::one(), s)
    }

    pub fn is_rational(&self) -> bool {
        self.s.is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    /// Exact integrality test: an irrational surd is never an integer.
    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.q.is_integer()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.q * &other.q, &self.s * &other.s)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.q * k, self.s.clone())
    }

    pub fn neg(&self) -> Self {
        Self {
            q: -self.q.clone(),
            s: self.s.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let q = rational_to_f64(&self.q);
        if self.is_rational() {
            q
        } else {
            q * rational_to_f64(&self.s).sqrt()
        }
    }

    /// Nearest integer (ties to even) and the exact distance to it.
    pub fn integer_gap(&self) -> ExactGap {
        if let Some(r) = self.as_rational() {
            return rational_gap(r);
        }
        fixed_gap(&self.fixed_point(FIXED_BITS), FIXED_BITS)
    }

    /// `x·2^bits` truncated toward zero.
    pub fn fixed_point(&self, bits: u64) -> BigInt {
        // floor(|q|·√s·2^B) by integer square root of s·q²·2^{2B}
        let radicand = &self.s * &self.q * &self.q;
        let scaled = radicand.numer() << (2 * bits);
        let mant = (scaled / radicand.denom()).sqrt();
        if self.q.is_negative() {
            -mant
        } else {
            mant
        }
    }
}

impl fmt::Display for QuadraticReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.q)
        } else if self.q.is_one() {
            write!(f, "sqrt({})", self.s)
        } else {
            write!(f, "{}*sqrt({})", self.q, self.s)
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::ParseExact(text.to_string());
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Accepts `p`, `p/q`, `sqrt(r)`, `-sqrt(r)` and `p/q*sqrt(r)`.
impl FromStr for QuadraticReal {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self, Error> {
        let bad = || Error::ParseExact(text.to_string());
        let t = text.trim();
        let (coef, rest) = match t.find("sqrt(") {
            None => return Ok(Self::rational(parse_rational(t)?)),
            Some(pos) => (t[..pos].trim(), &t[pos + 5..]),
        };
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let s = parse_rational(inner)?;
        if s.is_negative() {
            return Err(bad());
        }
        let q = match coef {
            "" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rational(c.strip_suffix('*').ok_or_else(bad)?)?,
        };
        Ok(Self::new(q, s))
    }
}

/// Distance from an exact real to the nearest integer.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactGap {
    pub tau: BigInt,
    /// Distance as a double; may underflow to zero for tiny positive gaps.
    pub value: f64,
    /// Natural log of the distance; `None` iff the distance is exactly zero.
    pub ln: Option<f64>,
}

impl ExactGap {
    pub fn is_zero(&self) -> bool {
        self.ln.is_none()
    }
}

/// `ln |n|` for arbitrarily large integers.
pub fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(r: &BigRational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let ln = ln_rational(r);
    if ln.is_finite() && ln.abs() < 700.0 {
        let direct = r.to_f64();
        if let Some(v) = direct.filter(|v| v.is_finite() && *v != 0.0) {
            return v;
        }
    }
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * ln.exp()
}

fn round_half_even(r: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let shifted = r + &half;
    let floor = shifted.numer().div_floor(shifted.denom());
    if shifted.is_integer() && floor.is_odd() {
        floor - 1
    } else {
        floor
    }
}

pub fn rational_gap(r: &BigRational) -> ExactGap {
    let tau = round_half_even(r);
    let dist = (r - BigRational::from_integer(tau.clone())).abs();
    if dist.is_zero() {
        ExactGap {
            tau,
            value: 0.0,
            ln: None,
        }
    } else {
        ExactGap {
            tau,
            value: rational_to_f64(&dist),
            ln: Some(ln_rational(&dist)),
        }
    }
}

/// `n·2^{exp2}` as a double, correctly scaled even when `n` is huge.
fn scaled_to_f64(n: &BigInt, exp2: i64) -> f64 {
    let bits = n.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (n.abs() >> shift as u64).to_f64().unwrap_or(0.0);
    let e = exp2 + shift;
    if e < -1074 - 64 {
        return 0.0;
    }
    // split the power to stay inside the exponent range of powi
    let half = e / 2;
    top * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
}

/// Gap of `mant·2^{-bits}` where the true value is irrational (no ties).
fn fixed_gap(mant: &BigInt, bits: u64) -> ExactGap {
    let one = BigInt::one() << bits;
    let half = BigInt::one() << (bits - 1);
    let tau = (mant + &half).div_floor(&one);
    let mut diff = (mant - &tau * &one).abs();
    if diff.is_zero() {
        // below fixed-point resolution; report the resolution itself
        diff = BigInt::one();
    }
    let ln = ln_bigint(&diff) - bits as f64 * std::f64::consts::LN_2;
    ExactGap {
        tau,
        value: scaled_to_f64(&diff, -(bits as i64)),
        ln: Some(ln),
    }
}

/// `b^e` as a big integer.
pub fn big_pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}
