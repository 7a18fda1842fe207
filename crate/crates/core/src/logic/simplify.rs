//! Equivalence-preserving cleanup: constant folding, flattening, and merging
//! of one-variable atoms into interval constraints.

use std::collections::BTreeMap;

use super::ast::{Cmp, Formula, Term};
use super::interval::{IntervalSet, Lower, Upper};
use super::semantics::{atom_solution_set, Env};
use crate::chain::ChainValue;

pub fn simplify(q: u64, phi: &Formula) -> Formula {
    simp(q, &nnf(phi, false))
}

/// Negation normal form; `neg` says whether an odd number of `!` is pending.
fn nnf(phi: &Formula, neg: bool) -> Formula {
    match (phi, neg) {
        (Formula::True, false) | (Formula::False, true) => Formula::True,
        (Formula::True, true) | (Formula::False, false) => Formula::False,
        (Formula::Atom(a, c, b), _) => Formula::Atom(a.clone(), if neg { c.negate() } else { *c }, b.clone()),
        (Formula::Not(f), _) => nnf(f, !neg),
        (Formula::And(fs), false) | (Formula::Or(fs), true) => Formula::And(fs.iter().map(|f| nnf(f, neg)).collect()),
        (Formula::Or(fs), false) | (Formula::And(fs), true) => Formula::Or(fs.iter().map(|f| nnf(f, neg)).collect()),
        (Formula::Exists(x, f), false) | (Formula::Forall(x, f), true) => Formula::exists(x, nnf(f, neg)),
        (Formula::Forall(x, f), false) | (Formula::Exists(x, f), true) => Formula::forall(x, nnf(f, neg)),
    }
}

fn simp(q: u64, phi: &Formula) -> Formula {
    match phi {
        Formula::Atom(a, c, b) => simp_atom(q, a, *c, b),
        Formula::And(fs) => junction(q, fs, true),
        Formula::Or(fs) => junction(q, fs, false),
        Formula::Exists(x, f) | Formula::Forall(x, f) => {
            let body = simp(q, f);
            if !body.free_vars().contains(x) {
                body
            } else if matches!(phi, Formula::Exists(..)) {
                Formula::exists(x, body)
            } else {
                Formula::forall(x, body)
            }
        }
        Formula::Not(f) => Formula::not(simp(q, f)),
        Formula::True | Formula::False => phi.clone(),
    }
}

fn simp_atom(q: u64, a: &Term, c: Cmp, b: &Term) -> Formula {
    let (a, b) = (a.normalized(q), b.normalized(q));
    if let (Some(u), Some(v)) = (a.eval_ground(q), b.eval_ground(q)) {
        return truth(c.holds(u.cmp(&v)));
    }
    if a == b {
        return truth(c.holds(std::cmp::Ordering::Equal));
    }
    // Steps map finite values to finite values, so only the base matters.
    let strip = |t: &Term| Term {
        base: t.base.clone(),
        steps: Vec::new(),
    };
    match (a.eval_ground(q), b.eval_ground(q)) {
        (_, Some(ChainValue::Inf)) => Formula::Atom(strip(&a), c, Term::inf()),
        (Some(ChainValue::Inf), _) => Formula::Atom(strip(&b), c.flip(), Term::inf()),
        _ => Formula::Atom(a, c, b),
    }
}

fn truth(v: bool) -> Formula {
    if v {
        Formula::True
    } else {
        Formula::False
    }
}

/// The single variable of an atom, if it mentions exactly one.
fn single_var(phi: &Formula) -> Option<String> {
    let Formula::Atom(a, _, b) = phi else { return None };
    match (a.var_name(), b.var_name()) {
        (Some(u), Some(v)) if u == v => Some(u.to_string()),
        (Some(u), None) | (None, Some(u)) => Some(u.to_string()),
        _ => None,
    }
}

/// Variables that some other conjunct forces to be finite.
fn forced_finite(parts: &[Formula]) -> Vec<String> {
    let mut out = Vec::new();
    for p in parts {
        if let Formula::Atom(a, c, b) = p {
            let lesser = match c {
                Cmp::Lt => Some(a),
                Cmp::Gt => Some(b),
                _ => None,
            };
            if let Some(v) = lesser.and_then(|t| t.var_name()) {
                out.push(v.to_string());
            }
        }
    }
    out
}

fn junction(q: u64, fs: &[Formula], conj: bool) -> Formula {
    let (unit, absorbing) = if conj {
        (Formula::True, Formula::False)
    } else {
        (Formula::False, Formula::True)
    };
    let mut flat = Vec::new();
    for f in fs {
        match simp(q, f) {
            Formula::And(gs) if conj => flat.extend(gs),
            Formula::Or(gs) if !conj => flat.extend(gs),
            g => flat.push(g),
        }
    }
    if flat.contains(&absorbing) {
        return absorbing;
    }
    let mut sets: BTreeMap<String, IntervalSet> = BTreeMap::new();
    let mut rest: Vec<Formula> = Vec::new();
    for f in flat {
        if f == unit {
            continue;
        }
        if let Some(v) = single_var(&f) {
            let s = atom_solution_set(q, &f, &Env::new(), &v).expect("one-variable atom");
            let e = sets.entry(v).or_insert_with(|| IntervalSet::of_bool(conj));
            *e = if conj { e.intersect(&s) } else { e.union(&s) };
        } else if !rest.contains(&f) {
            rest.push(f);
        }
    }
    let finite = if conj { forced_finite(&rest) } else { Vec::new() };
    let mut out = Vec::new();
    for (v, s) in &sets {
        let mut e = emit(v, s);
        if finite.contains(v) {
            let alt = emit(v, &s.clone().with_inf(true));
            if size(&alt) < size(&e) {
                e = alt;
            }
        }
        match e {
            f if f == absorbing => return absorbing,
            f if f == unit => {}
            Formula::And(gs) if conj => out.extend(gs),
            Formula::Or(gs) if !conj => out.extend(gs),
            f => out.push(f),
        }
    }
    out.extend(rest);
    match out.len() {
        0 => unit,
        1 => out.pop().unwrap(),
        _ if conj => Formula::And(out),
        _ => Formula::Or(out),
    }
}

fn size(f: &Formula) -> usize {
    match f {
        Formula::True | Formula::False => 0,
        Formula::And(fs) | Formula::Or(fs) => fs.iter().map(size).sum(),
        _ => 1,
    }
}

/// A short formula in `v` whose solution set is `s`.
fn emit(v: &str, s: &IntervalSet) -> Formula {
    let x = Term::var(v);
    let atom = |c: Cmp, t: Term| Formula::Atom(x.clone(), c, t);
    let k = |r: &crate::rational::Rat| Term::constant(r.clone());
    if s.is_all() {
        return Formula::True;
    }
    if s.is_empty() {
        return Formula::False;
    }
    let co = s.complement();
    if co.parts().is_empty() {
        return atom(Cmp::Lt, Term::inf());
    }
    if !co.has_inf() && co.parts().len() == 1 {
        if let Some(p) = co.parts()[0].is_point() {
            return atom(Cmp::Ne, k(p));
        }
    }
    let parts = s.parts();
    let mut disj = Vec::new();
    for (n, i) in parts.iter().enumerate() {
        let mut c = Vec::new();
        if let Some(p) = i.is_point() {
            disj.push(atom(Cmp::Eq, k(p)));
            continue;
        }
        match &i.lo {
            Lower::NegInf => {}
            Lower::Closed(a) => c.push(atom(Cmp::Ge, k(a))),
            Lower::Open(a) => c.push(atom(Cmp::Gt, k(a))),
        }
        match &i.hi {
            // The last part absorbs the top element when it is a member.
            Upper::PosInf if s.has_inf() && n + 1 == parts.len() => {}
            Upper::PosInf => c.push(atom(Cmp::Lt, Term::inf())),
            Upper::Closed(b) => c.push(atom(Cmp::Le, k(b))),
            Upper::Open(b) => c.push(atom(Cmp::Lt, k(b))),
        }
        disj.push(if c.len() == 1 {
            c.pop().unwrap()
        } else {
            Formula::And(c)
        });
    }
    let absorbed = parts.last().is_some_and(|i| i.hi == Upper::PosInf);
    if s.has_inf() && !absorbed {
        disj.push(atom(Cmp::Eq, Term::inf()));
    }
    if disj.len() == 1 {
        disj.pop().unwrap()
    } else {
        Formula::Or(disj)
    }
}
