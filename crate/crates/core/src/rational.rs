//! Arbitrary-precision rational scalars.
//!
//! The base field of every computation is ℚ; `num_rational::BigRational`
//! already keeps fractions fully reduced with a positive denominator, which
//! is exactly the invariant we need.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rat;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics on zero denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` with optional sign, e.g. `-3/4`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact halving of an integer-valued rational: returns `r/2` when `r` is an
/// even integer, `None` otherwise.
pub fn half_integer(r: &Rat) -> Option<BigInt> {
    if !r.denom().is_one() {
        return None;
    }
    let n = r.numer();
    if (n % 2u8).is_zero() {
        Some(n / 2)
    } else {
        None
    }
}

/// Binomial coefficient as a rational.
pub fn binomial(n: usize, k: usize) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

/// True when the rational is a (possibly negative) integer.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Integer value of an integer rational; panics otherwise.
pub fn to_integer(r: &Rat) -> BigInt {
    debug_assert!(is_integer(r));
    r.numer().clone()
}

/// Sign-agnostic absolute value.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
