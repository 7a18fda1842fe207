//! Evaluation over the standard model `Q ∪ {inf}` and the decision procedure.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::ast::{Base, Cmp, Formula, Term};
use super::interval::IntervalSet;
use super::qe::eliminate;
use super::LogicError;
use crate::chain::ChainValue;

pub type Env = BTreeMap<String, ChainValue>;

fn term_value(q: u64, t: &Term, env: &Env) -> Result<ChainValue, LogicError> {
    let base = match &t.base {
        Base::Var(v) => env.get(v).cloned().ok_or_else(|| LogicError::Unbound(v.clone()))?,
        Base::Const(r) => ChainValue::Fin(r.clone()),
        Base::Inf => ChainValue::Inf,
    };
    Ok(t.eval_with(q, &base))
}

/// Truth value of `phi` under `env`; every free variable must be bound.
pub fn eval(q: u64, phi: &Formula, env: &Env) -> Result<bool, LogicError> {
    Ok(match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a, c, b) => c.holds(term_value(q, a, env)?.cmp(&term_value(q, b, env)?)),
        Formula::Not(f) => !eval(q, f, env)?,
        Formula::And(fs) => {
            for f in fs {
                if !eval(q, f, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            for f in fs {
                if eval(q, f, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Exists(x, body) => !quantified_set(q, x, body, env)?.is_empty(),
        Formula::Forall(x, body) => quantified_set(q, x, body, env)?.is_all(),
    })
}

/// `{x : body}` with `env` plugged in and inner quantifiers eliminated.
fn quantified_set(q: u64, x: &str, body: &Formula, env: &Env) -> Result<IntervalSet, LogicError> {
    let mut b = body.clone();
    for (v, val) in env {
        if v != x {
            b = b.substitute(q, v, &Term::of_value(val));
        }
    }
    let b = eliminate(q, &b)?;
    solution_set(q, &b, &Env::new(), x)
}

/// `{x in Q ∪ {inf} : a}` for an atom `a`.
pub fn atom_solution_set(q: u64, atom: &Formula, env: &Env, x: &str) -> Result<IntervalSet, LogicError> {
    let Formula::Atom(a, cmp, b) = atom else {
        return Err(LogicError::NotAnAtom(atom.to_string()));
    };
    let side = |t: &Term| -> Result<Option<ChainValue>, LogicError> {
        if t.var_name() == Some(x) {
            Ok(None)
        } else {
            term_value(q, t, env).map(Some)
        }
    };
    Ok(match (side(a)?, side(b)?) {
        (Some(u), Some(v)) => IntervalSet::of_bool(cmp.holds(u.cmp(&v))),
        (None, Some(v)) => level(q, a, *cmp, &v),
        (Some(u), None) => level(q, b, cmp.flip(), &u),
        (None, None) => a
            .map(q)
            .compare_set(*cmp, &b.map(q))
            .with_inf(cmp.holds(Ordering::Equal)),
    })
}

/// `{x : t(x) cmp v}` where `t` is built on `x`.
fn level(q: u64, t: &Term, cmp: Cmp, v: &ChainValue) -> IntervalSet {
    match v {
        // Finite inputs give finite outputs.
        ChainValue::Inf => IntervalSet::of_bool(cmp.holds(Ordering::Less)).with_inf(cmp.holds(Ordering::Equal)),
        ChainValue::Fin(g) => t.map(q).level_set(cmp, g).with_inf(cmp.holds(Ordering::Greater)),
    }
}

/// `{x : phi}` for quantifier-free `phi`.
pub fn solution_set(q: u64, phi: &Formula, env: &Env, x: &str) -> Result<IntervalSet, LogicError> {
    Ok(match phi {
        Formula::True => IntervalSet::all(),
        Formula::False => IntervalSet::empty(),
        Formula::Atom(..) => atom_solution_set(q, phi, env, x)?,
        Formula::Not(f) => solution_set(q, f, env, x)?.complement(),
        Formula::And(fs) => {
            let mut s = IntervalSet::all();
            for f in fs {
                s = s.intersect(&solution_set(q, f, env, x)?);
            }
            s
        }
        Formula::Or(fs) => {
            let mut s = IntervalSet::empty();
            for f in fs {
                s = s.union(&solution_set(q, f, env, x)?);
            }
            s
        }
        Formula::Exists(..) | Formula::Forall(..) => return Err(LogicError::NotQuantifierFree),
    })
}

/// Truth value of a sentence.
pub fn decide(q: u64, sentence: &Formula) -> Result<bool, LogicError> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(LogicError::FreeVariables(free.into_iter().collect()));
    }
    eval(q, sentence, &Env::new())
}
