//! Terms and formulas over the chain sort, their parser and printer.
//!
//! ```text
//! formula := quant | disj
//! quant   := ("E"|"A") ident "." formula
//! disj    := conj { "|" conj }
//! conj    := lit { "&" lit }
//! lit     := "!" lit | atom | "true" | "false" | "(" formula ")"
//! atom    := term cmp term
//! term    := base { "." (trop | "inv" "(" nat "," rational ")") }
//! base    := ident | rational | "inf"
//! ```

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::plmap::{q_pow, Affine, PlMap};
use crate::chain::{ChainError, ChainValue, TropPoly};
use crate::rational::{fmt_rat, Rat};
use crate::syntax::{tokenize, Cursor, ParseError, Tok};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Cmp {
    pub fn holds(self, o: Ordering) -> bool {
        match self {
            Cmp::Lt => o == Ordering::Less,
            Cmp::Le => o != Ordering::Greater,
            Cmp::Eq => o == Ordering::Equal,
            Cmp::Ne => o != Ordering::Equal,
            Cmp::Ge => o != Ordering::Less,
            Cmp::Gt => o == Ordering::Greater,
        }
    }

    /// `a cmp b` iff `b cmp.flip() a`.
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::Lt => Cmp::Gt,
            Cmp::Le => Cmp::Ge,
            Cmp::Ge => Cmp::Le,
            Cmp::Gt => Cmp::Lt,
            c => c,
        }
    }

    pub fn negate(self) -> Cmp {
        match self {
            Cmp::Lt => Cmp::Ge,
            Cmp::Le => Cmp::Gt,
            Cmp::Eq => Cmp::Ne,
            Cmp::Ne => Cmp::Eq,
            Cmp::Ge => Cmp::Lt,
            Cmp::Gt => Cmp::Le,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Var(String),
    Const(Rat),
    Inf,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Trop(TropPoly),
    /// The inverse of the monomial `(i, c)`: `d -> (d - c) / q^i`.
    Inv(u32, Rat),
}

impl Step {
    fn affine(&self, q: u64) -> Option<Affine> {
        match self {
            Step::Trop(r) if r.is_monomial() => {
                let (k, c) = r.terms().next().unwrap();
                Some(Affine {
                    k: k as i32,
                    c: c.clone(),
                })
            }
            Step::Trop(_) => None,
            Step::Inv(i, c) => Some(inv_affine(q, *i, c)),
        }
    }

    /// The step realizing `a`, or `None` for the identity.
    pub fn from_affine(q: u64, a: &Affine) -> Option<Step> {
        if a.is_identity() {
            None
        } else if a.k >= 0 {
            Some(Step::Trop(TropPoly::monomial(q, a.k as u32, a.c.clone())))
        } else {
            Some(Step::Inv((-a.k) as u32, -(&a.c * q_pow(q, -a.k))))
        }
    }

    pub fn map(&self, q: u64) -> PlMap {
        match self {
            Step::Trop(r) => PlMap::from_trop(r),
            Step::Inv(i, c) => PlMap::affine(q, inv_affine(q, *i, c)),
        }
    }

    pub fn apply(&self, q: u64, v: &ChainValue) -> ChainValue {
        match (self, v) {
            (_, ChainValue::Inf) => ChainValue::Inf,
            (Step::Trop(r), ChainValue::Fin(g)) => ChainValue::Fin(r.eval_rat(g)),
            (Step::Inv(i, c), ChainValue::Fin(g)) => ChainValue::Fin((g - c) / q_pow(q, *i as i32)),
        }
    }
}

/// `d -> (d - c) / q^i`.
fn inv_affine(q: u64, i: u32, c: &Rat) -> Affine {
    let s = q_pow(q, -(i as i32));
    Affine {
        k: -(i as i32),
        c: -(c * s),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub base: Base,
    pub steps: Vec<Step>,
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term {
            base: Base::Var(name.to_string()),
            steps: Vec::new(),
        }
    }

    pub fn constant(r: Rat) -> Term {
        Term {
            base: Base::Const(r),
            steps: Vec::new(),
        }
    }

    pub fn inf() -> Term {
        Term {
            base: Base::Inf,
            steps: Vec::new(),
        }
    }

    pub fn of_value(v: &ChainValue) -> Term {
        match v {
            ChainValue::Fin(r) => Term::constant(r.clone()),
            ChainValue::Inf => Term::inf(),
        }
    }

    pub fn var_name(&self) -> Option<&str> {
        match &self.base {
            Base::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.var_name().is_none()
    }

    pub fn with_step(mut self, s: Step) -> Term {
        self.steps.push(s);
        self
    }

    /// `self` with its base replaced by `base`, i.e. `self[x := base]`.
    pub fn rebase(&self, q: u64, base: &Term) -> Term {
        let mut steps = base.steps.clone();
        steps.extend(self.steps.iter().cloned());
        Term {
            base: base.base.clone(),
            steps,
        }
        .normalized(q)
    }

    /// Value of the base under `env`, then the steps.
    pub fn eval_with(&self, q: u64, base: &ChainValue) -> ChainValue {
        self.steps.iter().fold(base.clone(), |v, s| s.apply(q, &v))
    }

    pub fn eval_ground(&self, q: u64) -> Option<ChainValue> {
        let b = match &self.base {
            Base::Var(_) => return None,
            Base::Const(r) => ChainValue::Fin(r.clone()),
            Base::Inf => ChainValue::Inf,
        };
        Some(self.eval_with(q, &b))
    }

    /// The map applied to the base.
    pub fn map(&self, q: u64) -> PlMap {
        self.steps.iter().fold(PlMap::identity(q), |m, s| m.then(&s.map(q)))
    }

    /// Merges adjacent tropical steps and adjacent monomial steps; ground
    /// terms collapse to their value.
    pub fn normalized(&self, q: u64) -> Term {
        if let Some(v) = self.eval_ground(q) {
            return Term::of_value(&v);
        }
        let mut out: Vec<Step> = Vec::new();
        for s in &self.steps {
            let mut cur = Some(s.clone());
            while let (Some(prev), Some(c)) = (out.last(), cur.as_ref()) {
                let merged = match (prev.affine(q), c.affine(q)) {
                    (Some(a), Some(b)) => Step::from_affine(q, &a.then(q, &b)),
                    _ => match (prev, c) {
                        (Step::Trop(r), Step::Trop(t)) => Some(Step::Trop(r.compose(t).reduced())),
                        _ => break,
                    },
                };
                out.pop();
                cur = merged;
            }
            if let Some(c) = cur {
                if c.affine(q).is_none_or(|a| !a.is_identity()) {
                    out.push(c);
                }
            }
        }
        Term {
            base: self.base.clone(),
            steps: out,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Term, Cmp, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn atom(a: Term, c: Cmp, b: Term) -> Formula {
        Formula::Atom(a, c, b)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a, _, b) => {
                for t in [a, b] {
                    if let Some(v) = t.var_name() {
                        if !bound.iter().any(|x| x == v) {
                            out.insert(v.to_string());
                        }
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Maximal quantifier nesting depth (0 for quantifier-free).
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Every tropical polynomial and inverse step mentioned.
    pub fn steps(&self) -> Vec<Step> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a, _, b| {
            out.extend(a.steps.iter().cloned());
            out.extend(b.steps.iter().cloned());
        });
        out
    }

    /// Every rational constant mentioned.
    pub fn constants(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a, _, b| {
            for t in [a, b] {
                if let Base::Const(r) = &t.base {
                    out.push(r.clone());
                }
            }
            for s in a.steps.iter().chain(b.steps.iter()) {
                match s {
                    Step::Trop(r) => out.extend(r.terms().map(|(_, c)| c.clone())),
                    Step::Inv(_, c) => out.push(c.clone()),
                }
            }
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&Term, Cmp, &Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a, c, b) => f(a, *c, b),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit_atoms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_atoms(f)),
        }
    }

    /// Replaces free occurrences of `x` by `t`.
    pub fn substitute(&self, q: u64, x: &str, t: &Term) -> Formula {
        let sub = |term: &Term| {
            if term.var_name() == Some(x) {
                term.rebase(q, t)
            } else {
                term.clone()
            }
        };
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a, c, b) => Formula::Atom(sub(a), *c, sub(b)),
            Formula::Not(f) => Formula::not(f.substitute(q, x, t)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.substitute(q, x, t)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.substitute(q, x, t)).collect()),
            Formula::Exists(y, _) | Formula::Forall(y, _) if y == x => self.clone(),
            Formula::Exists(y, f) => Formula::exists(y, f.substitute(q, x, t)),
            Formula::Forall(y, f) => Formula::forall(y, f.substitute(q, x, t)),
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Trop(r) => write!(f, "{r}"),
            Step::Inv(i, c) => write!(f, "inv({i},{})", fmt_rat(c)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            Base::Var(v) => f.write_str(v)?,
            Base::Const(r) => f.write_str(&fmt_rat(r))?,
            Base::Inf => f.write_str("inf")?,
        }
        for s in &self.steps {
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

impl Formula {
    fn write(&self, f: &mut fmt::Formatter<'_>, level: u8) -> fmt::Result {
        let paren =
            |f: &mut fmt::Formatter<'_>, needed: bool, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
                if needed {
                    f.write_str("(")?;
                    body(f)?;
                    f.write_str(")")
                } else {
                    body(f)
                }
            };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a, c, b) => write!(f, "{a} {} {b}", c.as_str()),
            Formula::Not(g) => {
                f.write_str("!")?;
                g.write(f, 2)
            }
            Formula::And(gs) => paren(f, level >= 2, &|f| {
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    g.write(f, 2)?;
                }
                Ok(())
            }),
            Formula::Or(gs) => paren(f, level >= 1, &|f| {
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    g.write(f, 1)?;
                }
                Ok(())
            }),
            Formula::Exists(x, g) | Formula::Forall(x, g) => paren(f, level >= 1, &|f| {
                let k = if matches!(self, Formula::Exists(..)) { "E" } else { "A" };
                write!(f, "{k} {x}. ")?;
                g.write(f, 0)
            }),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

const RESERVED: [&str; 6] = ["E", "A", "inf", "true", "false", "inv"];

struct Parser<'a> {
    q: u64,
    cur: Cursor<'a>,
}

impl Parser<'_> {
    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.cur.is_ident("E") || self.cur.is_ident("A") {
            let exists = self.cur.is_ident("E");
            self.cur.next();
            let x = self.ident()?;
            self.cur.expect_sym(".")?;
            let body = self.formula()?;
            return Ok(if exists {
                Formula::exists(&x, body)
            } else {
                Formula::forall(&x, body)
            });
        }
        self.disj()
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.cur.peek() {
            Some(Tok::Ident(s)) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                self.cur.next();
                Ok(s)
            }
            _ => Err(self.cur.error("expected a variable name")),
        }
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conj()?];
        while self.cur.eat_sym("|") {
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.lit()?];
        while self.cur.eat_sym("&") {
            parts.push(self.lit()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn lit(&mut self) -> Result<Formula, ParseError> {
        if self.cur.eat_sym("!") {
            return Ok(Formula::not(self.lit()?));
        }
        if self.cur.eat_sym("(") {
            let f = self.formula()?;
            self.cur.expect_sym(")")?;
            return Ok(f);
        }
        if self.cur.is_ident("true") {
            self.cur.next();
            return Ok(Formula::True);
        }
        if self.cur.is_ident("false") {
            self.cur.next();
            return Ok(Formula::False);
        }
        let a = self.term()?;
        let c = self.cmp()?;
        let b = self.term()?;
        Ok(Formula::Atom(a, c, b))
    }

    fn cmp(&mut self) -> Result<Cmp, ParseError> {
        for (s, c) in [
            ("<=", Cmp::Le),
            (">=", Cmp::Ge),
            ("!=", Cmp::Ne),
            ("<", Cmp::Lt),
            (">", Cmp::Gt),
            ("=", Cmp::Eq),
        ] {
            if self.cur.eat_sym(s) {
                return Ok(c);
            }
        }
        Err(self.cur.error("expected a comparison"))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let base = match self.cur.peek() {
            Some(Tok::Ident(s)) if s == "inf" => {
                self.cur.next();
                Base::Inf
            }
            Some(Tok::Ident(_)) => Base::Var(self.ident()?),
            Some(Tok::Int(_)) | Some(Tok::Sym("-")) => Base::Const(self.cur.rational()?),
            _ => return Err(self.cur.error("expected a term")),
        };
        let mut steps = Vec::new();
        while self.cur.eat_sym(".") {
            if self.cur.is_ident("inv") {
                self.cur.next();
                self.cur.expect_sym("(")?;
                let i = self.cur.natural()?;
                let i = u32::try_from(i).map_err(|_| self.cur.error("degree too large"))?;
                self.cur.expect_sym(",")?;
                let c = self.cur.rational()?;
                self.cur.expect_sym(")")?;
                steps.push(Step::Inv(i, c));
            } else {
                let r = TropPoly::parse_from(self.q, &mut self.cur).map_err(|e| match e {
                    ChainError::Parse(p) => p,
                    other => self.cur.error(other.to_string()),
                })?;
                steps.push(Step::Trop(r));
            }
        }
        Ok(Term { base, steps })
    }
}

/// Parses a formula; tropical literals act with Frobenius exponent `q`.
pub fn parse(q: u64, text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        q,
        cur: Cursor::new(&toks, text.len()),
    };
    let f = p.formula()?;
    p.cur.expect_end()?;
    Ok(f)
}

/// Parses a single term.
pub fn parse_term(q: u64, text: &str) -> Result<Term, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        q,
        cur: Cursor::new(&toks, text.len()),
    };
    let t = p.term()?;
    p.cur.expect_end()?;
    Ok(t)
}
