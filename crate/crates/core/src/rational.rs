//! Exact rationals used for exponents, valuations and chain values.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `q^k` as an exact rational.
pub fn pow_q(q: u64, k: u32) -> Rat {
    Rat::from_integer(num_traits::pow(BigInt::from(q), k as usize))
}

/// Canonical text form: `a` for integers, `a/b` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a`, `-a`, `a/b`. Denominator must be positive.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() || d.is_negative() {
        return None;
    }
    Some(Rat::new(n, d))
}

pub fn half() -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2))
}
