//! Valued-module computations on series: regularity, jump values, the
//! regular-root solver, kernel strata and regular decompositions.
//!
//! An element `x` is regular for `r` when `v(x.r) = v(x) . r`. Only the
//! leading term of `x` and the monomials of `r` attaining `v(x) . r` decide
//! this, through the reduced additive equation `sum lc(a_i) c^(q^i)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{subpoly_at, ChainError, ChainValue, TropPoly};
use crate::coeff::{additive_kernel, additive_solve, CoeffError, FieldElem, GroundConfig, HahnSeries};
use crate::ore::{OreError, OrePoly};
use crate::rational::{fmt_rat, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VmodError {
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("right-hand side is zero; use the kernel computation instead")]
    ZeroRhs,
    #[error("inputs must be exact series without O(u^..) terms")]
    InexactInput,
    #[error("not a pseudo-Cauchy sequence: v(a_{next} - a_{index}) does not exceed the previous gap", next = .0 + 1, index = .0)]
    NotPseudoCauchy(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Ore(#[from] OreError),
}

fn check_poly(r: &OrePoly) -> Result<(), VmodError> {
    if r.is_zero() {
        return Err(VmodError::ZeroPolynomial);
    }
    if !r.is_exact() {
        return Err(VmodError::InexactInput);
    }
    Ok(())
}

fn check_series(x: &HahnSeries) -> Result<(), VmodError> {
    if x.is_exact() {
        Ok(())
    } else {
        Err(VmodError::InexactInput)
    }
}

fn valuation(x: &HahnSeries) -> ChainValue {
    ChainValue::of_valuation(x.valuation())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub x: HahnSeries,
    pub r: OrePoly,
    /// `v(x.r)`
    pub image: ChainValue,
    /// `v(x) . r`
    pub predicted: ChainValue,
    pub regular: bool,
}

pub fn regularity(cfg: &GroundConfig, x: &HahnSeries, r: &OrePoly) -> Result<RegularityVerdict, VmodError> {
    check_poly(r)?;
    check_series(x)?;
    let trop = r.tropicalize(cfg)?;
    let image = valuation(&r.eval(cfg, x));
    let predicted = trop.eval(&valuation(x));
    Ok(RegularityVerdict {
        x: x.clone(),
        r: r.clone(),
        regular: image == predicted,
        image,
        predicted,
    })
}

/// The equation `sum_{i in I} lc(a_i) c^(q^i)` read off `r` at `gamma`,
/// where `I` are the degrees attaining `gamma . r`.
pub fn reduced_equation(cfg: &GroundConfig, r: &OrePoly, gamma: &Rat) -> Result<Vec<(u32, FieldElem)>, VmodError> {
    let trop = r.tropicalize(cfg)?;
    Ok(trop
        .argmin(gamma)
        .into_iter()
        .map(|i| (i, r.coeff(i as usize).unwrap().leading_coeff().unwrap().clone()))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpValue {
    pub gamma: Rat,
    /// An irregular element `c u^gamma`.
    pub witness: HahnSeries,
    pub tower_degree: u32,
}

/// The potential jumps at which irregular elements exist. The residue
/// field is an algebraic closure of F_q, so every reduced equation with
/// two or more terms has a nonzero root.
pub fn jump_values_in_m(cfg: &GroundConfig, r: &OrePoly) -> Result<Vec<JumpValue>, VmodError> {
    check_poly(r)?;
    let trop = r.tropicalize(cfg)?;
    let mut out = Vec::new();
    for j in trop.potential_jumps().jumps {
        let eq = reduced_equation(cfg, r, &j.value)?;
        let ker = additive_kernel(cfg, &eq)?;
        if let Some(c) = ker.fq_kernel_basis(cfg).first() {
            out.push(JumpValue {
                witness: HahnSeries::monomial(c.normalized(), j.value.clone()),
                tower_degree: ker.tower_degree(),
                gamma: j.value,
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// `v(y.r - z) > prec`.
    PrecisionReached,
    /// `y.r = z` exactly.
    ExactSolution,
    BudgetExhausted,
}

impl Termination {
    pub fn is_success(self) -> bool {
        !matches!(self, Termination::BudgetExhausted)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Termination::PrecisionReached => "precision reached",
            Termination::ExactSolution => "exact solution",
            Termination::BudgetExhausted => "budget exhausted",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub approximant: HahnSeries,
    /// `None` for the initial approximant `0`.
    pub term_added: Option<HahnSeries>,
    /// `v(approximant.r - z)`
    pub residual: ChainValue,
    pub tower_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximationTrace {
    pub steps: Vec<TraceStep>,
    pub termination: Termination,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStepJson {
    pub term_added: Option<String>,
    pub residual_valuation: String,
    pub tower_degree: u32,
}

impl ApproximationTrace {
    pub fn residuals(&self) -> Vec<ChainValue> {
        self.steps.iter().map(|s| s.residual.clone()).collect()
    }

    pub fn approximants(&self) -> Vec<HahnSeries> {
        self.steps.iter().map(|s| s.approximant.clone()).collect()
    }

    pub fn tower_degree(&self) -> u32 {
        self.steps.iter().map(|s| s.tower_degree).max().unwrap_or(1)
    }

    /// Residual valuations strictly increase.
    pub fn is_increasing(&self) -> bool {
        self.steps.windows(2).all(|w| w[0].residual < w[1].residual)
    }

    pub fn to_json(&self) -> Vec<TraceStepJson> {
        self.steps
            .iter()
            .map(|s| TraceStepJson {
                term_added: s.term_added.as_ref().map(ToString::to_string),
                residual_valuation: s.residual.to_string(),
                tower_degree: s.tower_degree,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub y: HahnSeries,
    pub trace: ApproximationTrace,
}

/// Builds a regular `y` with `y.r` approaching `z` term by term.
///
/// Each round inverts the residual valuation through the chain action and
/// cancels the leading residual term with the lexicographically least root
/// of the reduced equation. Stops once `v(y.r - z) > prec`, the residual
/// vanishes, or `budget` terms have been added.
pub fn solve_regular(
    cfg: &GroundConfig,
    r: &OrePoly,
    z: &HahnSeries,
    prec: &Rat,
    budget: usize,
) -> Result<Solution, VmodError> {
    check_poly(r)?;
    check_series(z)?;
    if z.is_zero() {
        return Err(VmodError::ZeroRhs);
    }
    let trop = r.tropicalize(cfg)?;
    let mut y = HahnSeries::zero();
    let mut residual = z.clone();
    let mut steps = vec![TraceStep {
        approximant: y.clone(),
        term_added: None,
        residual: valuation(z),
        tower_degree: 1,
    }];
    let termination = loop {
        let Some((delta, lead)) = residual.leading() else {
            break Termination::ExactSolution;
        };
        if delta > prec {
            break Termination::PrecisionReached;
        }
        if steps.len() > budget {
            break Termination::BudgetExhausted;
        }
        let gamma = trop.inverse(&ChainValue::Fin(delta.clone()));
        let gamma = gamma.finite().unwrap().clone();
        let eq = reduced_equation(cfg, r, &gamma)?;
        let c = additive_solve(cfg, &eq, lead)?.least().normalized();
        let term = HahnSeries::monomial(c, gamma);
        y = y.add(&term);
        residual = residual.sub(&r.eval(cfg, &term));
        steps.push(TraceStep {
            approximant: y.clone(),
            term_added: Some(term),
            residual: valuation(&residual),
            tower_degree: cfg.tower_degree_of(y.coeff_degree()),
        });
    };
    Ok(Solution {
        y,
        trace: ApproximationTrace { steps, termination },
    })
}

/// Corrects `c u^gamma` (with `c` a root of the reduced equation at
/// `gamma`) towards a root of `r`, until `v(x.r) > (gamma + margin) . r`.
fn approximate_root(
    cfg: &GroundConfig,
    r: &OrePoly,
    trop: &TropPoly,
    c: &FieldElem,
    gamma: &Rat,
    margin: &Rat,
    budget: usize,
) -> Result<(HahnSeries, ChainValue), VmodError> {
    let x0 = HahnSeries::monomial(c.normalized(), gamma.clone());
    let img = r.eval(cfg, &x0);
    if img.is_zero() {
        return Ok((x0, ChainValue::Inf));
    }
    let target = trop.eval_rat(&(gamma + margin));
    let fix = solve_regular(cfg, r, &img, &target, budget)?;
    let x = x0.sub(&fix.y);
    let res = valuation(&r.eval(cfg, &x));
    Ok((x, res))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRoot {
    /// Leading coefficient shared by both roots.
    pub residue: FieldElem,
    /// Approximate root of `r` with `v(root.r) = root_residual`.
    pub root: HahnSeries,
    pub root_residual: ChainValue,
    /// Approximate root of `r_gamma` in the same ball.
    pub sub_root: HahnSeries,
    pub sub_residual: ChainValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelStratum {
    pub gamma: Rat,
    pub sub_poly: OrePoly,
    /// Dimension over F_q.
    pub dim: u32,
    pub tower_degree: u32,
    /// One entry per F_q-basis vector.
    pub basis: Vec<StratumRoot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelStratification {
    pub q: u64,
    pub r: OrePoly,
    pub strata: Vec<KernelStratum>,
}

fn fq_elements(cfg: &GroundConfig) -> Vec<FieldElem> {
    let f = cfg.base_field();
    let (p, e) = (cfg.p(), cfg.e());
    (0..cfg.q())
        .map(|mut k| {
            let coords: Vec<u32> = (0..e)
                .map(|_| {
                    let d = (k % p as u64) as u32;
                    k /= p as u64;
                    d
                })
                .collect();
            FieldElem::from_coords(&f, &coords)
        })
        .collect()
}

/// All F_q-combinations of `vs`, the zero combination first.
fn fq_span(cfg: &GroundConfig, vs: &[HahnSeries]) -> Vec<HahnSeries> {
    let scalars = fq_elements(cfg);
    let mut out = vec![HahnSeries::zero()];
    for v in vs {
        let mut next = Vec::with_capacity(out.len() * scalars.len());
        for x in &out {
            for s in &scalars {
                next.push(x.add(&v.scale(s)));
            }
        }
        out = next;
    }
    out
}

impl KernelStratum {
    pub fn count(&self, q: u64) -> u128 {
        (q as u128).pow(self.dim)
    }

    pub fn roots(&self) -> Vec<HahnSeries> {
        self.basis.iter().map(|b| b.root.clone()).collect()
    }

    pub fn sub_roots(&self) -> Vec<HahnSeries> {
        self.basis.iter().map(|b| b.sub_root.clone()).collect()
    }

    /// Every element of the stratum's F_q-span, zero first.
    pub fn elements(&self, cfg: &GroundConfig) -> Vec<HahnSeries> {
        fq_span(cfg, &self.roots())
    }

    /// Distinct elements of the span differ at valuation exactly `gamma`.
    pub fn differences_exact(&self, cfg: &GroundConfig) -> bool {
        let g = ChainValue::Fin(self.gamma.clone());
        self.elements(cfg).iter().skip(1).all(|x| valuation(x) == g)
    }

    /// Each root of `r` in the span has exactly one root of `r_gamma` in
    /// the span within the open ball of radius `gamma`, and the match is
    /// the one built from the same residue.
    pub fn matching_unique(&self, cfg: &GroundConfig) -> bool {
        let roots = self.elements(cfg);
        let subs = fq_span(cfg, &self.sub_roots());
        let g = ChainValue::Fin(self.gamma.clone());
        roots.iter().enumerate().all(|(i, a)| {
            let close: Vec<usize> = subs
                .iter()
                .enumerate()
                .filter(|(_, s)| valuation(&a.sub(s)) > g)
                .map(|(k, _)| k)
                .collect();
            close == [i]
        })
    }
}

impl KernelStratification {
    /// `|A| = prod_gamma |A_gamma|`.
    pub fn count(&self) -> u128 {
        self.strata.iter().map(|s| s.count(self.q)).product()
    }

    /// `q^(deg r - ord r)`, the number of roots over an algebraically
    /// closed residue field.
    pub fn expected_count(&self) -> u128 {
        let (_, sep) = self.r.separable_split().expect("nonzero");
        (self.q as u128).pow(sep.degree().unwrap() as u32)
    }

    pub fn product_formula_holds(&self) -> bool {
        self.count() == self.expected_count()
    }
}

/// Stratified roots of `r`: for every jump value `gamma`, an F_q-basis of
/// roots of valuation `gamma`, each approximated until
/// `v(x.r) > (gamma + prec) . r` or the term budget runs out.
pub fn kernel_basis(
    cfg: &GroundConfig,
    r: &OrePoly,
    prec: &Rat,
    budget: usize,
) -> Result<KernelStratification, VmodError> {
    check_poly(r)?;
    let trop = r.tropicalize(cfg)?;
    let mut strata = Vec::new();
    for j in trop.potential_jumps().jumps {
        let gamma = j.value;
        let eq = reduced_equation(cfg, r, &gamma)?;
        let ker = additive_kernel(cfg, &eq)?;
        let residues = ker.fq_kernel_basis(cfg);
        if residues.is_empty() {
            continue;
        }
        let sub = subpoly_at(cfg, r, &ChainValue::Fin(gamma.clone()))?;
        let sub_trop = sub.tropicalize(cfg)?;
        let mut basis = Vec::new();
        for c in &residues {
            let (root, root_residual) = approximate_root(cfg, r, &trop, c, &gamma, prec, budget)?;
            let (sub_root, sub_residual) = approximate_root(cfg, &sub, &sub_trop, c, &gamma, prec, budget)?;
            basis.push(StratumRoot {
                residue: c.normalized(),
                root,
                root_residual,
                sub_root,
                sub_residual,
            });
        }
        strata.push(KernelStratum {
            dim: residues.len() as u32,
            tower_degree: ker.tower_degree(),
            sub_poly: sub,
            basis,
            gamma,
        });
    }
    Ok(KernelStratification {
        q: cfg.q(),
        r: r.clone(),
        strata,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Sum of approximate roots of `r`.
    pub a: HahnSeries,
    /// `x - a`, regular for `r`.
    pub eps: HahnSeries,
    /// The `(valuation, root)` pairs subtracted, one per round.
    pub rounds: Vec<(Rat, HahnSeries)>,
}

/// Writes `x = a + eps` with `a` a sum of approximate roots of `r` and
/// `eps` regular. Each round removes the leading term of an irregular
/// remainder with the root sharing it; irregular valuations are jumps and
/// strictly increase, so there are at most `|jumps|` rounds.
pub fn regular_decomposition(
    cfg: &GroundConfig,
    x: &HahnSeries,
    r: &OrePoly,
    prec: &Rat,
    budget: usize,
) -> Result<Decomposition, VmodError> {
    check_poly(r)?;
    check_series(x)?;
    if x.is_zero() {
        return Err(VmodError::Precondition("x must be nonzero".into()));
    }
    let trop = r.tropicalize(cfg)?;
    let mut cur = x.clone();
    let mut a = HahnSeries::zero();
    let mut rounds = Vec::new();
    while !cur.is_zero() && !regularity(cfg, &cur, r)?.regular {
        let (gamma, c) = cur.leading().map(|(g, c)| (g.clone(), c.clone())).unwrap();
        let (root, _) = approximate_root(cfg, r, &trop, &c, &gamma, prec, budget)?;
        cur = cur.sub(&root);
        a = a.add(&root);
        rounds.push((gamma, root));
    }
    Ok(Decomposition { a, eps: cur, rounds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PcKind {
    /// `v(a_k.r - b)` strictly increases over the window.
    AffineEvidence,
    /// `v(a_k.r - b)` is constant on a tail of the window.
    Stabilized,
    Inconclusive,
}

/// Finite-window evidence only; no claim about the infinite sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcVerdict {
    pub kind: PcKind,
    pub image_valuations: Vec<ChainValue>,
    pub window: usize,
}

pub fn pc_classify(
    cfg: &GroundConfig,
    seq: &[HahnSeries],
    r: &OrePoly,
    b: &HahnSeries,
) -> Result<PcVerdict, VmodError> {
    check_poly(r)?;
    let gaps: Vec<ChainValue> = seq.windows(2).map(|w| valuation(&w[1].sub(&w[0]))).collect();
    if let Some(k) = gaps.windows(2).position(|w| w[0] >= w[1]) {
        return Err(VmodError::NotPseudoCauchy(k + 1));
    }
    let vals: Vec<ChainValue> = seq.iter().map(|a| valuation(&r.eval(cfg, a).sub(b))).collect();
    let kind = if vals.len() >= 2 && vals.windows(2).all(|w| w[0] < w[1]) {
        PcKind::AffineEvidence
    } else if vals.len() >= 2 && vals[vals.len() - 1] == vals[vals.len() - 2] {
        PcKind::Stabilized
    } else {
        PcKind::Inconclusive
    };
    Ok(PcVerdict {
        kind,
        window: vals.len(),
        image_valuations: vals,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallCheck {
    pub x: RegularityVerdict,
    pub y: RegularityVerdict,
    pub agree: bool,
}

/// For `v(x - y) > v(x)`, `x` and `y` are both regular or both irregular.
pub fn ball_regularity_invariance(
    cfg: &GroundConfig,
    x: &HahnSeries,
    y: &HahnSeries,
    r: &OrePoly,
) -> Result<BallCheck, VmodError> {
    if x.is_zero() || valuation(&x.sub(y)) <= valuation(x) {
        return Err(VmodError::Precondition("need v(x - y) > v(x)".into()));
    }
    let vx = regularity(cfg, x, r)?;
    let vy = regularity(cfg, y, r)?;
    Ok(BallCheck {
        agree: vx.regular == vy.regular,
        x: vx,
        y: vy,
    })
}

/// `a/b` text of a finite valuation ladder, e.g. `1, 3/2, 7/4`.
pub fn format_ladder(vals: &[ChainValue]) -> String {
    vals.iter()
        .map(|v| match v {
            ChainValue::Fin(r) => fmt_rat(r),
            ChainValue::Inf => "inf".to_string(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::parse_ore;
    use crate::rational::{int, rat};

    fn c2() -> GroundConfig {
        GroundConfig::default()
    }

    fn p(cfg: &GroundConfig, s: &str) -> OrePoly {
        parse_ore(cfg, s).unwrap()
    }

    fn s(cfg: &GroundConfig, t: &str) -> HahnSeries {
        cfg.parse_series(t).unwrap()
    }

    #[test]
    fn regular_examples() {
        let c = c2();
        let r = p(&c, "t + 1");
        assert!(regularity(&c, &s(&c, "u"), &r).unwrap().regular);
        let v = regularity(&c, &s(&c, "1"), &r).unwrap();
        assert!(!v.regular);
        assert_eq!(v.image, ChainValue::Inf);
        assert!(regularity(&c, &HahnSeries::zero(), &r).unwrap().regular);
    }

    #[test]
    fn jump_values() {
        let c = c2();
        let j = jump_values_in_m(&c, &p(&c, "t + 1")).unwrap();
        assert_eq!(j.len(), 1);
        assert_eq!(j[0].gamma, int(0));
        assert!(jump_values_in_m(&c, &p(&c, "t*u")).unwrap().is_empty());
        let r = p(&c, "t^2 + t*u + u^3");
        let j = jump_values_in_m(&c, &r).unwrap();
        let gs: Vec<Rat> = j.iter().map(|x| x.gamma.clone()).collect();
        assert_eq!(gs, vec![rat(1, 2), int(2)]);
        for x in &j {
            assert!(!regularity(&c, &x.witness, &r).unwrap().regular);
        }
    }

    #[test]
    fn worked_solver_instance() {
        let c = c2();
        let r = p(&c, "t + u");
        let z = s(&c, "u");
        let sol = solve_regular(&c, &r, &z, &rat(3, 2), 16).unwrap();
        assert_eq!(sol.y.to_string(), "u^(1/2) + u^(3/4)");
        assert_eq!(format_ladder(&sol.trace.residuals()), "1, 3/2, 7/4");
        assert_eq!(sol.trace.termination, Termination::PrecisionReached);
        let sol = solve_regular(&c, &r, &z, &int(2), 8).unwrap();
        assert_eq!(sol.trace.termination, Termination::BudgetExhausted);
        let expect: Vec<ChainValue> = (1..=9).map(|k| ChainValue::Fin(int(2) - rat(2, 1 << k))).collect();
        assert_eq!(sol.trace.residuals(), expect);
    }

    #[test]
    fn frobenius_root() {
        let c = c2();
        let sol = solve_regular(&c, &p(&c, "t"), &s(&c, "u"), &int(5), 4).unwrap();
        assert_eq!(sol.y, s(&c, "u^(1/2)"));
        assert_eq!(sol.trace.termination, Termination::ExactSolution);
        assert_eq!(sol.trace.steps.len(), 2);
        assert_eq!(
            solve_regular(&c, &p(&c, "t+1"), &HahnSeries::zero(), &int(1), 4),
            Err(VmodError::ZeroRhs)
        );
    }

    #[test]
    fn kernel_examples() {
        let c = c2();
        let k = kernel_basis(&c, &p(&c, "t + 1"), &int(4), 16).unwrap();
        assert_eq!(k.strata.len(), 1);
        assert_eq!(k.strata[0].gamma, int(0));
        assert_eq!(k.strata[0].roots(), vec![s(&c, "1")]);
        assert_eq!(k.count(), 2);
        let k = kernel_basis(&c, &p(&c, "t"), &int(4), 16).unwrap();
        assert!(k.strata.is_empty());
        assert_eq!(k.count(), 1);
        let sq = p(&c, "(t + 1)*(t + 1)");
        let k = kernel_basis(&c, &sq, &int(4), 16).unwrap();
        assert_eq!(k.count(), 4);
        assert!(k.product_formula_holds());
        assert!(k.strata[0].differences_exact(&c));
        assert!(k.strata[0].matching_unique(&c));
    }

    #[test]
    fn decomposition_examples() {
        let c = c2();
        let r = p(&c, "t + 1");
        let d = regular_decomposition(&c, &s(&c, "1 + u"), &r, &int(4), 16).unwrap();
        assert_eq!((d.a, d.eps), (s(&c, "1"), s(&c, "u")));
        let d = regular_decomposition(&c, &s(&c, "u"), &r, &int(4), 16).unwrap();
        assert_eq!((d.a, d.eps), (HahnSeries::zero(), s(&c, "u")));
        let d = regular_decomposition(&c, &s(&c, "1"), &r, &int(4), 16).unwrap();
        assert_eq!((d.a, d.eps), (s(&c, "1"), HahnSeries::zero()));
    }

    #[test]
    fn pc_sequences() {
        let c = c2();
        let r = p(&c, "t + u");
        let z = s(&c, "u");
        let sol = solve_regular(&c, &r, &z, &int(2), 6).unwrap();
        let v = pc_classify(&c, &sol.trace.approximants(), &r, &z).unwrap();
        assert_eq!(v.kind, PcKind::AffineEvidence);
        let far = s(&c, "u^(-3)");
        let v = pc_classify(&c, &sol.trace.approximants(), &r, &far).unwrap();
        assert_eq!(v.kind, PcKind::Stabilized);
        let bad = vec![s(&c, "1"), s(&c, "1 + u^2"), s(&c, "1 + u + u^2")];
        assert_eq!(
            pc_classify(&c, &bad, &r, &z).unwrap_err(),
            VmodError::NotPseudoCauchy(1)
        );
    }

    #[test]
    fn ball_invariance() {
        let c = c2();
        let r = p(&c, "t + 1");
        assert!(
            ball_regularity_invariance(&c, &s(&c, "u"), &s(&c, "u + u^2"), &r)
                .unwrap()
                .agree
        );
        let b = ball_regularity_invariance(&c, &s(&c, "1"), &s(&c, "1 + u"), &r).unwrap();
        assert!(b.agree && !b.x.regular);
        assert!(ball_regularity_invariance(&c, &s(&c, "u"), &s(&c, "u^2"), &r).is_err());
    }
}
