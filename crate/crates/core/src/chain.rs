//! The chain `Q ∪ {inf}` with `gamma . t^i a = q^i gamma + v(a)`.
//!
//! A polynomial acts through its tropicalization, the minimum of the lines
//! `gamma -> q^i gamma + c_i`. Every such map is a strictly increasing
//! piecewise-linear bijection of `Q`, and its breakpoints are the potential
//! jumps of the polynomial.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{GroundConfig, HahnSeries};
use crate::ore::{OreError, OrePoly};
use crate::rational::{fmt_rat, int, parse_rat, pow_q, rat, Rat};
use crate::syntax::{tokenize, Cursor, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("tropical polynomial without monomials")]
    Empty,
    #[error("degree {0} appears twice")]
    DuplicateDegree(u32),
    #[error("zero input")]
    ZeroInput,
    #[error("the point inf has no sub-polynomial")]
    InfiniteValue,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Ore(#[from] OreError),
    #[error(transparent)]
    Axiom(#[from] AxiomViolation),
}

/// A point of the chain; `Inf` is the top element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainValue {
    Fin(Rat),
    Inf,
}

impl ChainValue {
    pub fn of_valuation(v: Option<&Rat>) -> Self {
        v.map_or(ChainValue::Inf, |r| ChainValue::Fin(r.clone()))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ChainValue::Fin(r) => Some(r),
            ChainValue::Inf => None,
        }
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ChainValue::Inf)
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "inf" => Some(ChainValue::Inf),
            s => parse_rat(s).map(ChainValue::Fin),
        }
    }
}

impl From<Rat> for ChainValue {
    fn from(r: Rat) -> Self {
        ChainValue::Fin(r)
    }
}

impl fmt::Display for ChainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainValue::Fin(r) => f.write_str(&fmt_rat(r)),
            ChainValue::Inf => f.write_str("inf"),
        }
    }
}

/// `min_i (q^i gamma + c_i)` over finitely many distinct degrees `i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TropPoly {
    q: u64,
    terms: BTreeMap<u32, Rat>,
}

impl TropPoly {
    pub fn new(q: u64, pairs: impl IntoIterator<Item = (u32, Rat)>) -> Result<Self, ChainError> {
        let mut terms = BTreeMap::new();
        for (i, c) in pairs {
            if terms.insert(i, c).is_some() {
                return Err(ChainError::DuplicateDegree(i));
            }
        }
        if terms.is_empty() {
            return Err(ChainError::Empty);
        }
        Ok(TropPoly { q, terms })
    }

    pub fn monomial(q: u64, degree: u32, value: Rat) -> Self {
        TropPoly::new(q, [(degree, value)]).unwrap()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `(degree, value)` in ascending degree.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rat)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn value(&self, degree: u32) -> Option<&Rat> {
        self.terms.get(&degree)
    }

    pub fn num_monomials(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn max_degree(&self) -> u32 {
        *self.terms.keys().next_back().unwrap()
    }

    pub fn min_degree(&self) -> u32 {
        *self.terms.keys().next().unwrap()
    }

    /// `q^i gamma + c_i`; panics if `degree` is absent.
    pub fn line(&self, degree: u32, gamma: &Rat) -> Rat {
        pow_q(self.q, degree) * gamma + &self.terms[&degree]
    }

    pub fn eval_rat(&self, gamma: &Rat) -> Rat {
        self.terms.keys().map(|&i| self.line(i, gamma)).min().unwrap()
    }

    pub fn eval(&self, gamma: &ChainValue) -> ChainValue {
        match gamma {
            ChainValue::Fin(g) => ChainValue::Fin(self.eval_rat(g)),
            ChainValue::Inf => ChainValue::Inf,
        }
    }

    /// Degrees whose line attains the minimum at `gamma`, ascending.
    pub fn argmin(&self, gamma: &Rat) -> Vec<u32> {
        let m = self.eval_rat(gamma);
        self.terms
            .keys()
            .copied()
            .filter(|&i| self.line(i, gamma) == m)
            .collect()
    }

    /// Intersection of the lines of degrees `j != k`.
    fn crossing(&self, j: u32, k: u32) -> Rat {
        let (cj, ck) = (&self.terms[&j], &self.terms[&k]);
        (ck - cj) / (pow_q(self.q, j) - pow_q(self.q, k))
    }

    /// The pieces `U_j` of the lower envelope, highest degree first.
    pub fn envelope(&self) -> EnvelopeProfile {
        let mut pieces = Vec::new();
        for &j in self.terms.keys().rev() {
            let lo = self
                .terms
                .keys()
                .filter(|&&k| k > j)
                .map(|&k| self.crossing(j, k))
                .max();
            let hi = self
                .terms
                .keys()
                .filter(|&&k| k < j)
                .map(|&k| self.crossing(j, k))
                .min();
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l > h {
                    continue;
                }
            }
            pieces.push(EnvPiece { degree: j, lo, hi });
        }
        EnvelopeProfile { pieces }
    }

    /// The breakpoints of the envelope, ascending, each tagged with the
    /// highest and lowest degree attaining the minimum there.
    pub fn potential_jumps(&self) -> JumpSet {
        let mut points: Vec<Rat> = self
            .envelope()
            .pieces
            .iter()
            .flat_map(|p| [p.lo.clone(), p.hi.clone()])
            .flatten()
            .collect();
        points.sort();
        points.dedup();
        let jumps = points
            .into_iter()
            .map(|value| {
                let on = self.argmin(&value);
                Jump {
                    high: *on.last().unwrap(),
                    low: on[0],
                    value,
                }
            })
            .collect();
        JumpSet { jumps }
    }

    /// The unique `gamma` with `gamma . r = delta`.
    pub fn inverse(&self, delta: &ChainValue) -> ChainValue {
        let ChainValue::Fin(d) = delta else {
            return ChainValue::Inf;
        };
        for piece in self.envelope().pieces {
            let g = (d - &self.terms[&piece.degree]) / pow_q(self.q, piece.degree);
            if piece.contains(&g) {
                return ChainValue::Fin(g);
            }
        }
        unreachable!("the envelope pieces cover Q")
    }

    /// The action of the composite: `gamma . (self.compose(s)) = (gamma . self) . s`.
    pub fn compose(&self, other: &TropPoly) -> TropPoly {
        assert_eq!(self.q, other.q);
        let mut terms: BTreeMap<u32, Rat> = BTreeMap::new();
        for (j, d) in other.terms() {
            for (i, c) in self.terms() {
                let v = pow_q(self.q, j) * c + d;
                terms
                    .entry(i + j)
                    .and_modify(|old| {
                        if v < *old {
                            *old = v.clone()
                        }
                    })
                    .or_insert(v);
            }
        }
        TropPoly { q: self.q, terms }
    }

    /// Pointwise minimum, the action of a sum without cancellation.
    pub fn min_with(&self, other: &TropPoly) -> TropPoly {
        let mut terms = self.terms.clone();
        for (i, c) in other.terms() {
            terms
                .entry(i)
                .and_modify(|old| {
                    if c < old {
                        *old = c.clone()
                    }
                })
                .or_insert_with(|| c.clone());
        }
        TropPoly { q: self.q, terms }
    }

    /// Drops monomials that never attain the minimum.
    pub fn reduced(&self) -> TropPoly {
        let keep: Vec<u32> = self.envelope().pieces.iter().map(|p| p.degree).collect();
        TropPoly {
            q: self.q,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| keep.contains(i))
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    pub fn parse(q: u64, text: &str) -> Result<Self, ChainError> {
        let toks = tokenize(text)?;
        let mut cur = Cursor::new(&toks, text.len());
        let r = Self::parse_from(q, &mut cur)?;
        cur.expect_end()?;
        Ok(r)
    }

    /// `'{' pair {',' pair} '}'` with `pair := '(' nat ',' rational ')'`.
    pub(crate) fn parse_from(q: u64, cur: &mut Cursor<'_>) -> Result<Self, ChainError> {
        cur.expect_sym("{")?;
        let mut pairs = Vec::new();
        loop {
            cur.expect_sym("(")?;
            let i = cur.natural()?;
            let i = u32::try_from(i).map_err(|_| cur.error("degree too large"))?;
            cur.expect_sym(",")?;
            let c = cur.rational()?;
            cur.expect_sym(")")?;
            if pairs.iter().any(|(j, _)| *j == i) {
                return Err(cur.error(format!("degree {i} appears twice")).into());
            }
            pairs.push((i, c));
            if !cur.eat_sym(",") {
                break;
            }
        }
        cur.expect_sym("}")?;
        TropPoly::new(q, pairs)
    }
}

impl fmt::Display for TropPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(i, c)| format!("({i},{})", fmt_rat(c)))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for TropPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TropPoly(q={}, {self})", self.q)
    }
}

/// `U_degree = [lo, hi]`, with `None` for an infinite end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvPiece {
    pub degree: u32,
    pub lo: Option<Rat>,
    pub hi: Option<Rat>,
}

impl EnvPiece {
    pub fn contains(&self, g: &Rat) -> bool {
        self.lo.as_ref().is_none_or(|l| l <= g) && self.hi.as_ref().is_none_or(|h| g <= h)
    }
}

impl fmt::Display for EnvPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self
            .lo
            .as_ref()
            .map_or("(-inf".to_string(), |l| format!("[{}", fmt_rat(l)));
        let hi = self
            .hi
            .as_ref()
            .map_or("inf)".to_string(), |h| format!("{}]", fmt_rat(h)));
        write!(f, "{lo}, {hi}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeProfile {
    pub pieces: Vec<EnvPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvPieceJson {
    pub degree: u32,
    pub lo: Option<String>,
    pub hi: Option<String>,
}

impl EnvelopeProfile {
    /// Degrees with a nonempty piece, highest first.
    pub fn degrees(&self) -> Vec<u32> {
        self.pieces.iter().map(|p| p.degree).collect()
    }

    pub fn to_json(&self) -> Vec<EnvPieceJson> {
        self.pieces
            .iter()
            .map(|p| EnvPieceJson {
                degree: p.degree,
                lo: p.lo.as_ref().map(fmt_rat),
                hi: p.hi.as_ref().map(fmt_rat),
            })
            .collect()
    }
}

impl fmt::Display for EnvelopeProfile {
    /// One `U_i = interval` line per piece.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pieces {
            writeln!(f, "U_{} = {p}", p.degree)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jump {
    pub value: Rat,
    pub high: u32,
    pub low: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct JumpSet {
    pub jumps: Vec<Jump>,
}

impl JumpSet {
    pub fn values(&self) -> Vec<Rat> {
        self.jumps.iter().map(|j| j.value.clone()).collect()
    }

    pub fn contains(&self, g: &Rat) -> bool {
        self.jumps.iter().any(|j| &j.value == g)
    }

    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }
}

impl fmt::Display for JumpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.jumps.iter().map(|j| fmt_rat(&j.value)).collect();
        f.write_str(&parts.join(", "))
    }
}

/// `r_gamma`: the monomials of `r` attaining `gamma . r`.
pub fn subpoly_at(cfg: &GroundConfig, r: &OrePoly, gamma: &ChainValue) -> Result<OrePoly, ChainError> {
    let g = gamma.finite().ok_or(ChainError::InfiniteValue)?;
    let on = r.tropicalize(cfg)?.argmin(g);
    Ok(r.filter_degrees(|i| on.contains(&(i as u32))))
}

/// `v(a) >= 0`, i.e. `gamma . a >= gamma` for every `gamma`.
pub fn valuation_ring_member(a: &HahnSeries) -> Result<bool, ChainError> {
    let v = a.valuation().ok_or(ChainError::ZeroInput)?;
    Ok(!v.is_negative())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub samples: usize,
    pub checks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("axiom '{axiom}' fails: {witness}")]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub witness: String,
}

fn sample_points(rng: &mut StdRng, polys: &[&TropPoly], samples: usize) -> Vec<Rat> {
    let mut pts = std::collections::BTreeSet::new();
    for j in polys.iter().flat_map(|p| p.potential_jumps().values()) {
        pts.insert(&j - rat(1, 97));
        pts.insert(&j + rat(1, 89));
        pts.insert(j);
    }
    while pts.len() < samples {
        pts.insert(rat(rng.gen_range(-600..=600), rng.gen_range(1..=24)));
    }
    pts.into_iter().collect()
}

fn violation(axiom: &'static str, witness: String) -> Result<(), AxiomViolation> {
    Err(AxiomViolation { axiom, witness })
}

/// Checks the chain axioms for the actions of `r` and `s` on sampled points:
/// monotonicity, composition through the Ore product, the minimum
/// inequality for sums, separation of monomial comparisons, and
/// surjectivity of `t`.
pub fn check_chain_axioms(
    cfg: &GroundConfig,
    r: &OrePoly,
    s: &OrePoly,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport, ChainError> {
    let tr = r.tropicalize(cfg)?;
    let ts = s.tropicalize(cfg)?;
    let rs = r.mul(cfg, s).tropicalize(cfg)?;
    let sums: Vec<(&str, TropPoly)> = [("r+s", r.add(s)), ("r-s", r.sub(s))]
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(n, p)| (n, p.tropicalize(cfg).unwrap()))
        .collect();
    let mut rng = StdRng::seed_from_u64(seed);
    let pts = sample_points(&mut rng, &[&tr, &ts, &rs], samples);
    let t = TropPoly::monomial(cfg.q(), 1, int(0));
    let q = pow_q(cfg.q(), 1);
    let mut checks = 0usize;

    if tr.eval(&ChainValue::Inf) != ChainValue::Inf {
        violation("top element", "inf . r != inf".into())?;
    }
    for w in pts.windows(2) {
        for (name, p) in [("r", &tr), ("s", &ts)] {
            checks += 1;
            if p.eval_rat(&w[0]) >= p.eval_rat(&w[1]) {
                violation(
                    "monotonicity",
                    format!("{name} at {} < {}", fmt_rat(&w[0]), fmt_rat(&w[1])),
                )?;
            }
        }
    }
    for g in &pts {
        checks += 4;
        if ts.eval_rat(&tr.eval_rat(g)) != rs.eval_rat(g) {
            violation("composition", format!("gamma = {}", fmt_rat(g)))?;
        }
        let m = tr.eval_rat(g).min(ts.eval_rat(g));
        for (name, p) in &sums {
            if p.eval_rat(g) < m {
                violation("minimum inequality", format!("{name} at gamma = {}", fmt_rat(g)))?;
            }
        }
        for (d1, _) in tr.terms() {
            for (d2, _) in tr.terms().filter(|(d, _)| *d < d1) {
                if tr.line(d1, g) > tr.line(d2, g) {
                    continue;
                }
                for delta in [g - rat(1, 1000), g - int(1), g - int(50)] {
                    checks += 1;
                    if tr.line(d1, &delta) >= tr.line(d2, &delta) {
                        violation(
                            "separation",
                            format!("degrees {d1} > {d2} at {} and {}", fmt_rat(g), fmt_rat(&delta)),
                        )?;
                    }
                }
            }
        }
        if t.eval_rat(&(g / &q)) != *g {
            violation("fullness", format!("delta = {}", fmt_rat(g)))?;
        }
        if tr.inverse(&ChainValue::Fin(tr.eval_rat(g))) != ChainValue::Fin(g.clone()) {
            violation("inverse", format!("gamma = {}", fmt_rat(g)))?;
        }
    }
    Ok(AxiomReport {
        samples: pts.len(),
        checks,
    })
}
