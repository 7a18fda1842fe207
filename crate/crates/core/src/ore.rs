//! The twisted polynomial ring `R = K[t; phi]` with `a t = t a^phi`.
//!
//! Polynomials are written `sum t^i a_i` with coefficients on the right and
//! act on series from the right: `x.r = sum phi^i(x) a_i`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::chain::TropPoly;
use crate::coeff::expr::{parse_with, ExprAlgebra};
use crate::coeff::{CoeffError, FieldElem, GroundConfig, HahnSeries};
use crate::rational::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OreError {
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("leading coefficient {0} has no finite-support inverse")]
    LeadingNotInvertible(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// `sum t^i a_i`, stored as `a_0, .., a_n` with `a_n != 0`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct OrePoly {
    coeffs: Vec<HahnSeries>,
}

impl OrePoly {
    pub fn zero() -> Self {
        OrePoly::default()
    }

    pub fn from_coeffs(coeffs: Vec<HahnSeries>) -> Self {
        let mut r = OrePoly { coeffs };
        r.trim();
        r
    }

    pub fn constant(a: HahnSeries) -> Self {
        Self::from_coeffs(vec![a])
    }

    pub fn one(cfg: &GroundConfig) -> Self {
        Self::constant(HahnSeries::one(cfg))
    }

    /// The monomial `t^i a`.
    pub fn monomial(i: usize, a: HahnSeries) -> Self {
        let mut coeffs = vec![HahnSeries::zero(); i];
        coeffs.push(a);
        Self::from_coeffs(coeffs)
    }

    pub fn t_pow(cfg: &GroundConfig, i: usize) -> Self {
        Self::monomial(i, HahnSeries::one(cfg))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(HahnSeries::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Option<&HahnSeries> {
        self.coeffs.get(i).filter(|a| !a.is_zero())
    }

    pub fn coeffs(&self) -> &[HahnSeries] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&HahnSeries> {
        self.coeffs.last()
    }

    /// Nonzero monomials `(i, a_i)` in ascending degree.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, &HahnSeries)> {
        self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero())
    }

    pub fn num_monomials(&self) -> usize {
        self.monomials().count()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(HahnSeries::is_exact)
    }

    /// Keeps only the monomials whose degree satisfies `keep`.
    pub fn filter_degrees(&self, keep: impl Fn(usize) -> bool) -> OrePoly {
        OrePoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| if keep(i) { a.clone() } else { HahnSeries::zero() })
                .collect(),
        )
    }

    pub fn add(&self, other: &OrePoly) -> OrePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = HahnSeries::zero();
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a.add(b)
            })
            .collect();
        OrePoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> OrePoly {
        OrePoly {
            coeffs: self.coeffs.iter().map(HahnSeries::neg).collect(),
        }
    }

    pub fn sub(&self, other: &OrePoly) -> OrePoly {
        self.add(&other.neg())
    }

    /// `(sum t^i a_i)(sum t^j b_j) = sum t^(i+j) phi^j(a_i) b_j`.
    pub fn mul(&self, cfg: &GroundConfig, other: &OrePoly) -> OrePoly {
        if self.is_zero() || other.is_zero() {
            return OrePoly::zero();
        }
        let mut coeffs = vec![HahnSeries::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (j, b) in other.monomials() {
            for (i, a) in self.monomials() {
                let term = a.frobenius(cfg, j as i64).mul(b);
                coeffs[i + j] = coeffs[i + j].add(&term);
            }
        }
        OrePoly::from_coeffs(coeffs)
    }

    /// Right multiplication by a scalar: `r a = sum t^i a_i a`.
    pub fn mul_scalar(&self, a: &HahnSeries) -> OrePoly {
        OrePoly::from_coeffs(self.coeffs.iter().map(|c| c.mul(a)).collect())
    }

    /// The action `x.r = sum phi^i(x) a_i`.
    pub fn eval(&self, cfg: &GroundConfig, x: &HahnSeries) -> HahnSeries {
        let mut acc = HahnSeries::zero();
        let mut xi = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xi = xi.frobenius(cfg, 1);
            }
            if !a.is_zero() {
                acc = acc.add(&xi.mul(a));
            }
        }
        acc
    }

    /// Right division `self = quot * d + rem` with `deg rem < deg d`.
    ///
    /// Needs the leading coefficient of `d` to be a monomial, the only
    /// units with finite-support inverses.
    pub fn rdiv(&self, cfg: &GroundConfig, d: &OrePoly) -> Result<(OrePoly, OrePoly), OreError> {
        let m = d.degree().ok_or(OreError::DivisionByZero)?;
        let lead = d.leading_coeff().unwrap();
        let lead_inv = lead
            .inverse()
            .map_err(|_| OreError::LeadingNotInvertible(lead.to_string()))?;
        let mut quot = OrePoly::zero();
        let mut rem = self.clone();
        while let Some(n) = rem.degree().filter(|&n| n >= m) {
            // t^(n-m) c * t^m b = t^n phi^m(c) b, so c = phi^-m(a / b).
            let a = rem.leading_coeff().unwrap();
            let c = a.mul(&lead_inv).frobenius(cfg, -(m as i64));
            let step = OrePoly::monomial(n - m, c);
            rem = rem.sub(&step.mul(cfg, d));
            quot = quot.add(&step);
            debug_assert!(rem.degree().is_none_or(|k| k < n));
        }
        Ok((quot, rem))
    }

    /// `self = t^k s` with `s` having a nonzero constant term.
    pub fn separable_split(&self) -> Result<(usize, OrePoly), OreError> {
        let k = self
            .coeffs
            .iter()
            .position(|a| !a.is_zero())
            .ok_or(OreError::ZeroPolynomial)?;
        Ok((k, OrePoly::from_coeffs(self.coeffs[k..].to_vec())))
    }

    /// `{(i, v(a_i))}` for the nonzero coefficients.
    pub fn tropicalize(&self, cfg: &GroundConfig) -> Result<TropPoly, OreError> {
        if self.is_zero() {
            return Err(OreError::ZeroPolynomial);
        }
        let pairs = self
            .monomials()
            .map(|(i, a)| (i as u32, a.valuation().unwrap().clone()));
        Ok(TropPoly::new(cfg.q(), pairs).expect("nonzero polynomial has monomials"))
    }
}

/// Evaluation context for the expression parser.
pub(crate) struct OreAlgebra<'a>(pub &'a GroundConfig);

impl ExprAlgebra for OreAlgebra<'_> {
    type Elem = OrePoly;

    fn config(&self) -> &GroundConfig {
        self.0
    }

    fn constant(&self, c: FieldElem) -> OrePoly {
        OrePoly::constant(HahnSeries::constant(c))
    }

    fn u_pow(&self, e: Rat) -> OrePoly {
        OrePoly::constant(HahnSeries::u_pow(self.0, e))
    }

    fn t(&self) -> Option<OrePoly> {
        Some(OrePoly::t_pow(self.0, 1))
    }

    fn add(&self, a: &OrePoly, b: &OrePoly) -> OrePoly {
        a.add(b)
    }

    fn neg(&self, a: &OrePoly) -> OrePoly {
        a.neg()
    }

    fn mul(&self, a: &OrePoly, b: &OrePoly) -> OrePoly {
        a.mul(self.0, b)
    }
}

/// Parses e.g. `t^2 + t*(u + u^2) + u^2`. Products follow the twisted
/// rule, so `u*t` reads as `t*u^q`.
pub fn parse_ore(cfg: &GroundConfig, text: &str) -> Result<OrePoly, OreError> {
    parse_with(&OreAlgebra(cfg), text).map_err(|e| OreError::Coeff(e.into()))
}

impl fmt::Display for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, a) in self.monomials().collect::<Vec<_>>().into_iter().rev() {
            let tp = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let is_one = a.is_exact() && a.is_monomial() && a.leading().is_some_and(|(e, c)| e.is_zero() && c.is_one());
            parts.push(if i == 0 {
                a.to_string()
            } else if is_one {
                tp
            } else if a.num_terms() == 1
                && a.is_exact()
                && !a.leading().is_some_and(|(e, c)| e.is_zero() && c.is_compound())
            {
                format!("{tp}*{a}")
            } else {
                format!("{tp}*({a})")
            });
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrePoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> GroundConfig {
        GroundConfig::from_q(2).unwrap()
    }

    fn p(text: &str) -> OrePoly {
        parse_ore(&c2(), text).unwrap()
    }

    fn s(text: &str) -> HahnSeries {
        c2().parse_series(text).unwrap()
    }

    #[test]
    fn square_of_t_plus_u() {
        let c = c2();
        let r = p("t + u");
        let sq = r.mul(&c, &r);
        assert_eq!(sq, p("t^2 + t*(u + u^2) + u^2"));
        assert_eq!(sq.to_string(), "t^2 + t*(u + u^2) + u^2");
    }

    #[test]
    fn commutation_rule() {
        let c = c2();
        assert_eq!(p("u*t"), p("t*u^2"));
        assert_eq!(p("(1+u)*t"), p("t*(1 + u^2)"));
        assert_eq!(p("t + u").mul(&c, &OrePoly::one(&c)), p("t + u"));
    }

    #[test]
    fn evaluation() {
        let c = c2();
        assert_eq!(p("t + 1").eval(&c, &s("u")), s("u^2 + u"));
        assert!(p("t + 1").eval(&c, &s("1")).is_zero());
        assert!(p("t^2 + u").eval(&c, &HahnSeries::zero()).is_zero());
    }

    #[test]
    fn division() {
        let c = c2();
        let d = p("t + u");
        let (q, r) = p("t^2 + t*(u + u^2) + u^2").rdiv(&c, &d).unwrap();
        assert_eq!((q, r), (d.clone(), OrePoly::zero()));
        assert_eq!(d.rdiv(&c, &d).unwrap(), (OrePoly::one(&c), OrePoly::zero()));
        let small = p("u");
        assert_eq!(small.rdiv(&c, &d).unwrap(), (OrePoly::zero(), small));
        assert!(matches!(d.rdiv(&c, &OrePoly::zero()), Err(OreError::DivisionByZero)));
    }

    #[test]
    fn split_and_tropicalize() {
        let c = c2();
        let (k, sep) = p("t^2*u + t^3").separable_split().unwrap();
        assert_eq!(k, 2);
        assert_eq!(sep, p("u + t"));
        assert_eq!(OrePoly::t_pow(&c, k).mul(&c, &sep), p("t^2*u + t^3"));
        assert_eq!(p("t").separable_split().unwrap(), (1, OrePoly::one(&c)));
        let tr = p("t^2 + t*u + u^3").tropicalize(&c).unwrap();
        assert_eq!(tr.to_string(), "{(2,0),(1,1),(0,3)}");
        assert_eq!(p("t*u^2").tropicalize(&c).unwrap().to_string(), "{(1,2)}");
        assert!(OrePoly::zero().tropicalize(&c).is_err());
    }
}
