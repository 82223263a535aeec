use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{big_pow, QuadraticReal, FIXED_BITS};

/// Largest depth accepted by [`liouville_number`]; `10^{7!}` is already a
/// 5040-digit denominator.
const MAX_LIOUVILLE_DEPTH: u32 = 6;

/// `Σ_{k=1..depth} base^{−k!}` as an exact rational.
pub fn liouville_number(base: u64, depth: u32) -> Result<BigRational> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("base {base} must be at least 2")));
    }
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".to_string()));
    }
    if depth > MAX_LIOUVILLE_DEPTH {
        return Err(Error::DepthOverflow(depth));
    }
    let mut sum = BigRational::zero();
    let mut factorial = 1u64;
    for k in 1..=depth as u64 {
        factorial *= k;
        sum += BigRational::new(BigInt::one(), big_pow(base, factorial));
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigInt,
    pub q: BigInt,
}

impl Convergent {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

/// Continued-fraction convergents `p_k/q_k` of `x`, at most `count` of them.
/// The list terminates at `x` itself when `x` is reached.
pub fn best_rational_approximations(x: &BigRational, count: usize) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(count);
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    while out.len() < count {
        let a = rest.numer().div_floor(rest.denom());
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            p: p.clone(),
            q: q.clone(),
        });
        let frac = rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    out
}

/// Convergents of an exact surd, computed from its fixed-point expansion and
/// cut off before the truncation can influence them.
pub fn surd_convergents(x: &QuadraticReal, count: usize) -> Vec<Convergent> {
    if let Some(r) = x.as_rational() {
        return best_rational_approximations(r, count);
    }
    let bits = FIXED_BITS;
    let approx = BigRational::new(x.fixed_point(bits), BigInt::one() << bits);
    let limit = BigInt::one() << (bits / 2 - 16);
    best_rational_approximations(&approx, count)
        .into_iter()
        .take_while(|c| c.q.abs() < limit)
        .collect()
}
