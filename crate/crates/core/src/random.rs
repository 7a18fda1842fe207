//! Seeded random inputs for tests and benchmarks.

use rand::Rng;

use crate::chain::TropPoly;
use crate::coeff::{FieldElem, GroundConfig, HahnSeries};
use crate::ore::OrePoly;
use crate::rational::{rat, Rat};

/// Shape of random series: up to `max_terms` terms with exponents
/// `n / den` for `n` in `lo..=hi`.
#[derive(Clone, Copy, Debug)]
pub struct SeriesShape {
    pub max_terms: usize,
    pub lo: i64,
    pub hi: i64,
    pub den: i64,
}

impl SeriesShape {
    pub const fn new(max_terms: usize, lo: i64, hi: i64, den: i64) -> Self {
        SeriesShape { max_terms, lo, hi, den }
    }
}

pub fn elem(cfg: &GroundConfig, rng: &mut impl Rng) -> FieldElem {
    let f = cfg.base_field();
    let coords: Vec<u32> = (0..cfg.e()).map(|_| rng.gen_range(0..cfg.p())).collect();
    FieldElem::from_coords(&f, &coords)
}

pub fn nonzero_elem(cfg: &GroundConfig, rng: &mut impl Rng) -> FieldElem {
    loop {
        let c = elem(cfg, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn exponent(shape: &SeriesShape, rng: &mut impl Rng) -> Rat {
    rat(rng.gen_range(shape.lo..=shape.hi), shape.den)
}

/// Possibly zero.
pub fn series(cfg: &GroundConfig, shape: &SeriesShape, rng: &mut impl Rng) -> HahnSeries {
    let n = rng.gen_range(0..=shape.max_terms);
    HahnSeries::from_terms((0..n).map(|_| (exponent(shape, rng), nonzero_elem(cfg, rng))))
}

pub fn nonzero_series(cfg: &GroundConfig, shape: &SeriesShape, rng: &mut impl Rng) -> HahnSeries {
    loop {
        let s = series(cfg, shape, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn monomial(cfg: &GroundConfig, shape: &SeriesShape, rng: &mut impl Rng) -> HahnSeries {
    HahnSeries::monomial(nonzero_elem(cfg, rng), exponent(shape, rng))
}

/// Degree at most `max_deg`; possibly zero.
pub fn ore(cfg: &GroundConfig, max_deg: usize, shape: &SeriesShape, rng: &mut impl Rng) -> OrePoly {
    let d = rng.gen_range(0..=max_deg);
    OrePoly::from_coeffs((0..=d).map(|_| series(cfg, shape, rng)).collect())
}

pub fn nonzero_ore(cfg: &GroundConfig, max_deg: usize, shape: &SeriesShape, rng: &mut impl Rng) -> OrePoly {
    loop {
        let r = ore(cfg, max_deg, shape, rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Nonzero, with a monomial leading coefficient, so it can divide.
pub fn divisor_ore(cfg: &GroundConfig, max_deg: usize, shape: &SeriesShape, rng: &mut impl Rng) -> OrePoly {
    let d = rng.gen_range(0..=max_deg);
    let mut coeffs: Vec<HahnSeries> = (0..d).map(|_| series(cfg, shape, rng)).collect();
    coeffs.push(monomial(cfg, shape, rng));
    OrePoly::from_coeffs(coeffs)
}

/// Between 1 and `max_monomials` monomials of degree at most `max_deg`,
/// with values `n / den` for `n` in `-span..=span`.
pub fn trop(q: u64, max_monomials: usize, max_deg: u32, span: i64, den: i64, rng: &mut impl Rng) -> TropPoly {
    let n = rng.gen_range(1..=max_monomials);
    let pairs: Vec<(u32, Rat)> = (0..n)
        .map(|_| (rng.gen_range(0..=max_deg), rat(rng.gen_range(-span..=span), den)))
        .collect::<std::collections::BTreeMap<_, _>>()
        .into_iter()
        .collect();
    TropPoly::new(q, pairs).expect("distinct degrees")
}
