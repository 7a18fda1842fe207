//! Coefficient arithmetic: finite-field towers over F_p and generalized
//! power series in `u` with rational exponents.
//!
//! The series ring carries the Frobenius twist `x -> x^q`, acting on a
//! term `c u^g` as `c^q u^(q g)`. Its fixed field is F_q.

mod additive;
pub(crate) mod expr;
mod field;
pub mod linalg;
mod series;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use additive::{additive_kernel, additive_solve, eval_additive, AdditiveSolution};
pub use field::{finite_field, is_prime, FieldElem, FiniteField, MAX_FIELD_DEGREE};
pub use series::{HahnSeries, SeriesJson, TermJson};

use crate::syntax::ParseError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field F_{p}^{degree} is outside the supported range")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("series {0} is not invertible with finite support")]
    NotInvertible(String),
    #[error("no solution found in extensions of F_p-degree up to {max_degree}")]
    ExtensionLimit { max_degree: u32 },
    #[error("invalid series data: {0}")]
    InvalidData(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// The characteristic `p` and the Frobenius exponent `q = p^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundConfig {
    p: u32,
    e: u32,
    q: u64,
}

impl GroundConfig {
    pub fn new(p: u32, e: u32) -> Result<Self, CoeffError> {
        if !is_prime(p as u64) {
            return Err(CoeffError::NotPrime(p as u64));
        }
        let q = (p as u64)
            .checked_pow(e)
            .filter(|_| e >= 1)
            .ok_or(CoeffError::FieldTooLarge { p, degree: e })?;
        // Builds (and validates) the base field eagerly.
        finite_field(p, e)?;
        Ok(GroundConfig { p, e, q })
    }

    /// Splits a prime power `q` into `p^e`.
    pub fn from_q(q: u64) -> Result<Self, CoeffError> {
        if q < 2 {
            return Err(CoeffError::NotPrimePower(q));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut rest = q;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(CoeffError::NotPrimePower(q));
        }
        GroundConfig::new(p as u32, e)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn prime_field(&self) -> Arc<FiniteField> {
        finite_field(self.p, 1).expect("prime field")
    }

    /// F_q, the fixed field of the twist.
    pub fn base_field(&self) -> Arc<FiniteField> {
        finite_field(self.p, self.e).expect("validated at construction")
    }

    /// Field of degree `m` over F_q.
    pub fn tower(&self, m: u32) -> Result<Arc<FiniteField>, CoeffError> {
        finite_field(self.p, self.e * m)
    }

    /// Degree over F_q of the smallest F_{q^m} containing F_{p^n}.
    pub fn tower_degree_of(&self, n: u32) -> u32 {
        num_integer::lcm(n, self.e) / self.e
    }

    pub fn elem(&self, v: i64) -> FieldElem {
        FieldElem::from_int(&self.prime_field(), v)
    }

    /// Parses a series in the text syntax, e.g. `u^(1/2) + (w_2 + 1)*u`.
    pub fn parse_series(&self, text: &str) -> Result<HahnSeries, CoeffError> {
        expr::parse_series(self, text)
    }
}

impl Default for GroundConfig {
    fn default() -> Self {
        GroundConfig::new(2, 1).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_from_q() {
        let c = GroundConfig::from_q(4).unwrap();
        assert_eq!((c.p(), c.e(), c.q()), (2, 2, 4));
        let c = GroundConfig::from_q(9).unwrap();
        assert_eq!((c.p(), c.e()), (3, 2));
        assert!(matches!(GroundConfig::from_q(6), Err(CoeffError::NotPrimePower(6))));
        assert!(GroundConfig::new(4, 1).is_err());
        assert_eq!(c.tower_degree_of(1), 1);
        assert_eq!(c.tower_degree_of(4), 2);
        assert_eq!(c.tower_degree_of(3), 3);
    }
}
