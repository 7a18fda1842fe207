//! Finite-support generalized power series `sum c_g u^g`, `g` rational.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{finite_field, FieldElem};
use super::{CoeffError, GroundConfig};
use crate::rational::{fmt_rat, parse_rat, pow_q, Rat};

/// A series with finitely many nonzero terms, optionally known only up to
/// `O(u^prec)`.
#[derive(Clone, Default)]
pub struct HahnSeries {
    terms: BTreeMap<Rat, FieldElem>,
    /// `None` means exact.
    prec: Option<Rat>,
}

impl HahnSeries {
    pub fn zero() -> Self {
        HahnSeries::default()
    }

    pub fn monomial(coeff: FieldElem, exp: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        HahnSeries { terms, prec: None }
    }

    pub fn constant(coeff: FieldElem) -> Self {
        Self::monomial(coeff, Rat::zero())
    }

    /// `u^exp` with coefficient 1 in characteristic `p`.
    pub fn u_pow(cfg: &GroundConfig, exp: Rat) -> Self {
        Self::monomial(cfg.elem(1), exp)
    }

    pub fn one(cfg: &GroundConfig) -> Self {
        Self::constant(cfg.elem(1))
    }

    /// Collects terms, summing coefficients of equal exponents.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rat, FieldElem)>) -> Self {
        let mut s = HahnSeries::zero();
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    fn add_term(&mut self, exp: Rat, coeff: &FieldElem) {
        if coeff.is_zero() {
            return;
        }
        if let Some(p) = &self.prec {
            if exp >= *p {
                return;
            }
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                let sum = c.add(coeff);
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(exp, coeff.clone());
            }
        }
    }

    pub fn with_precision(mut self, prec: Option<Rat>) -> Self {
        if let Some(p) = &prec {
            self.terms.retain(|e, _| e < p);
        }
        self.prec = match (self.prec.take(), prec) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }

    pub fn precision(&self) -> Option<&Rat> {
        self.prec.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &Rat) -> Option<&FieldElem> {
        self.terms.get(exp)
    }

    /// Least exponent; `None` stands for the valuation of zero (infinity).
    pub fn valuation(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    pub fn leading(&self) -> Option<(&Rat, &FieldElem)> {
        self.terms.iter().next()
    }

    pub fn leading_coeff(&self) -> Option<&FieldElem> {
        self.terms.values().next()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Lower bound on the valuation of the true element.
    fn reach(&self) -> Option<Rat> {
        match (self.valuation(), &self.prec) {
            (Some(v), Some(p)) => Some(v.clone().min(p.clone())),
            (Some(v), None) => Some(v.clone()),
            (None, p) => p.clone(),
        }
    }

    pub fn add(&self, other: &HahnSeries) -> HahnSeries {
        let prec = match (&self.prec, &other.prec) {
            (Some(a), Some(b)) => Some(a.clone().min(b.clone())),
            (a, b) => a.clone().or(b.clone()),
        };
        let mut out = HahnSeries {
            terms: self.terms.clone(),
            prec: None,
        }
        .with_precision(prec);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> HahnSeries {
        HahnSeries {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
            prec: self.prec.clone(),
        }
    }

    pub fn sub(&self, other: &HahnSeries) -> HahnSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &HahnSeries) -> HahnSeries {
        let prec = match (self.reach(), &self.prec, other.reach(), &other.prec) {
            (_, None, _, None) => None,
            (rx, px, ry, py) => {
                let a = match (rx, py) {
                    (Some(r), Some(p)) => Some(r + p),
                    _ => None,
                };
                let b = match (ry, px) {
                    (Some(r), Some(p)) => Some(r + p),
                    _ => None,
                };
                match (a, b) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            }
        };
        let mut out = HahnSeries::zero().with_precision(prec);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, &c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> HahnSeries {
        let mut out = HahnSeries::zero().with_precision(self.prec.clone());
        for (e, x) in &self.terms {
            out.add_term(e.clone(), &x.mul(c));
        }
        out
    }

    /// Multiplies by `u^shift`.
    pub fn shift(&self, shift: &Rat) -> HahnSeries {
        HahnSeries {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
            prec: self.prec.as_ref().map(|p| p + shift),
        }
    }

    /// Applies the twist `k` times: `c u^g -> c^(q^k) u^(q^k g)`. Negative
    /// `k` applies the inverse twist (the series field is perfect).
    pub fn frobenius(&self, cfg: &GroundConfig, k: i64) -> HahnSeries {
        if k == 0 {
            return self.clone();
        }
        let factor = if k > 0 {
            pow_q(cfg.q(), k as u32)
        } else {
            pow_q(cfg.q(), (-k) as u32).recip()
        };
        let fk = cfg.e() as i64 * k;
        HahnSeries {
            terms: self.terms.iter().map(|(e, c)| (e * &factor, c.frobenius(fk))).collect(),
            prec: self.prec.as_ref().map(|p| p * &factor),
        }
    }

    pub fn pow(&self, n: u64) -> HahnSeries {
        let mut acc = match self.leading_coeff() {
            Some(c) => HahnSeries::constant(FieldElem::one(c.field())),
            None if n == 0 => panic!("0^0"),
            None => return self.clone(),
        };
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a monomial; other units have infinite support.
    pub fn inverse(&self) -> Result<HahnSeries, CoeffError> {
        match self.leading() {
            None => Err(CoeffError::DivisionByZero),
            Some((e, c)) if self.is_monomial() && self.is_exact() => Ok(HahnSeries::monomial(c.inv()?, -e)),
            _ => Err(CoeffError::NotInvertible(self.to_string())),
        }
    }

    /// Removes every term of exponent `>= at` and records the precision.
    pub fn truncate(&self, at: &Rat) -> HahnSeries {
        self.clone().with_precision(Some(at.clone()))
    }

    /// Smallest F_p-degree of a field containing all coefficients.
    pub fn coeff_degree(&self) -> u32 {
        self.terms
            .values()
            .map(|c| c.minimal_degree())
            .fold(1, num_integer::lcm)
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: fmt_rat(e),
                    coeff: c.normalized().coords().to_vec(),
                })
                .collect(),
            prec: self.prec.as_ref().map(fmt_rat),
        }
    }

    pub fn from_json(cfg: &GroundConfig, json: &SeriesJson) -> Result<HahnSeries, CoeffError> {
        let bad = |m: String| CoeffError::InvalidData(m);
        let mut terms = Vec::new();
        for t in &json.terms {
            let exp = parse_rat(&t.exp).ok_or_else(|| bad(format!("bad exponent '{}'", t.exp)))?;
            if t.coeff.is_empty() {
                return Err(bad("empty coefficient".into()));
            }
            if t.coeff.iter().any(|&c| c >= cfg.p()) {
                return Err(bad(format!("coordinate out of range for p = {}", cfg.p())));
            }
            let field = finite_field(cfg.p(), t.coeff.len() as u32)?;
            terms.push((exp, FieldElem::from_coords(&field, &t.coeff)));
        }
        let prec = match &json.prec {
            Some(p) => Some(parse_rat(p).ok_or_else(|| bad(format!("bad precision '{p}'")))?),
            None => None,
        };
        Ok(HahnSeries::from_terms(terms).with_precision(prec))
    }
}

/// JSON form of a series: coefficients as F_p-coordinates in the
/// smallest field containing them (the coordinate count is the degree).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub terms: Vec<TermJson>,
    pub prec: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: String,
    pub coeff: Vec<u32>,
}

impl PartialEq for HahnSeries {
    /// Equality of supports up to the common precision.
    fn eq(&self, other: &Self) -> bool {
        let common = match (&self.prec, &other.prec) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.as_ref().or(b.as_ref()),
        };
        let below = |e: &Rat| common.is_none_or(|c| e < c);
        let a = self.terms.iter().filter(|(e, _)| below(e));
        let b = other.terms.iter().filter(|(e, _)| below(e));
        a.eq(b)
    }
}

impl Eq for HahnSeries {}

fn fmt_u_power(e: &Rat) -> String {
    if e.is_one() {
        "u".to_string()
    } else if e.is_integer() && !e.is_negative() {
        format!("u^{}", e.numer())
    } else {
        format!("u^({})", fmt_rat(e))
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let coeff = if c.is_compound() {
                    format!("({c})")
                } else {
                    c.to_string()
                };
                if e.is_zero() {
                    c.to_string()
                } else if c.is_one() {
                    fmt_u_power(e)
                } else {
                    format!("{coeff}*{}", fmt_u_power(e))
                }
            })
            .collect();
        if let Some(p) = &self.prec {
            parts.push(format!("O({})", fmt_u_power(p)));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HahnSeries({self})")
    }
}
