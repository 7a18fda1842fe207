//! Exact computations with twisted polynomials `K[t; x -> x^q]` acting on
//! generalized power series in positive characteristic.

pub mod chain;
pub mod coeff;
pub mod logic;
pub mod ore;
pub mod random;
pub mod rational;
pub mod syntax;
pub mod vmod;

#[doc = include_str!("../../../README.md")]
#[cfg(doctest)]
pub struct ReadmeDoctests;
