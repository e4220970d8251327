//! Exact rational helpers on top of [`BigRational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact probability and length arithmetic.
pub type Rational = BigRational;

/// `2^-k`.
pub fn pow2_neg(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

pub fn from_ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Always renders as `p/q`, including integers (`2/1`).
pub fn to_fraction(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// If `value == 2^-k` for some `k >= 0`, returns `k`.
pub fn dyadic_exponent(value: &Rational) -> Option<usize> {
    if !value.numer().is_one() {
        return None;
    }
    let den = value.denom();
    let bits = den.bits();
    let tz = den.trailing_zeros()?;
    (tz + 1 == bits).then_some(tz as usize)
}
