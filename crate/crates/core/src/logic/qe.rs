//! One-variable quantifier elimination by substituting finitely many test
//! points: the bottom limit, the top element, each boundary candidate `b`
//! and the right neighbourhood `b + e`.

use std::cmp::Ordering;

use super::ast::{Cmp, Formula, Step, Term};
use super::interval::{IntervalSet, Lower, Upper};
use super::semantics::{atom_solution_set, Env};
use super::simplify::simplify;
use super::LogicError;

enum Point<'a> {
    Bottom,
    Top,
    At(&'a Term),
    After(&'a Term),
}

/// A quantifier-free `psi` with `psi <-> E x. phi` over the standard model.
pub fn qe_exists(q: u64, phi: &Formula, x: &str) -> Result<Formula, LogicError> {
    if !phi.is_quantifier_free() {
        return Err(LogicError::NotQuantifierFree);
    }
    let phi = simplify(q, phi);
    if !phi.free_vars().contains(x) {
        return Ok(phi);
    }
    let cands = candidates(q, &phi, x)?;
    let mut disj = vec![
        substitute_point(q, &phi, x, &Point::Bottom)?,
        substitute_point(q, &phi, x, &Point::Top)?,
    ];
    for b in &cands {
        let finite = Formula::Atom(b.clone(), Cmp::Lt, Term::inf());
        for p in [Point::At(b), Point::After(b)] {
            disj.push(Formula::And(vec![finite.clone(), substitute_point(q, &phi, x, &p)?]));
        }
    }
    Ok(simplify(q, &Formula::Or(disj)))
}

/// Replaces every quantifier, innermost first.
pub fn eliminate(q: u64, phi: &Formula) -> Result<Formula, LogicError> {
    Ok(match phi {
        Formula::True | Formula::False | Formula::Atom(..) => phi.clone(),
        Formula::Not(f) => Formula::not(eliminate(q, f)?),
        Formula::And(fs) => Formula::And(fs.iter().map(|f| eliminate(q, f)).collect::<Result<_, _>>()?),
        Formula::Or(fs) => Formula::Or(fs.iter().map(|f| eliminate(q, f)).collect::<Result<_, _>>()?),
        Formula::Exists(x, f) => qe_exists(q, &eliminate(q, f)?, x)?,
        Formula::Forall(x, f) => {
            let inner = qe_exists(q, &Formula::not(eliminate(q, f)?), x)?;
            simplify(q, &Formula::not(inner))
        }
    })
}

fn on_x(t: &Term, x: &str) -> bool {
    t.var_name() == Some(x)
}

/// Every point where some atom can change truth value in `x`.
fn candidates(q: u64, phi: &Formula, x: &str) -> Result<Vec<Term>, LogicError> {
    let mut out: Vec<Term> = Vec::new();
    let mut err = None;
    phi.visit_atoms(&mut |a, c, b| {
        let push = |out: &mut Vec<Term>, t: Term| {
            if !out.contains(&t) {
                out.push(t);
            }
        };
        match (on_x(a, x), on_x(b, x)) {
            (false, false) => {}
            (true, true) => match atom_solution_set(q, &Formula::Atom(a.clone(), c, b.clone()), &Env::new(), x) {
                Ok(z) => z
                    .endpoints()
                    .into_iter()
                    .for_each(|e| push(&mut out, Term::constant(e))),
                Err(e) => err = Some(e),
            },
            (xa, _) => {
                let (f, s) = if xa { (a, b) } else { (b, a) };
                for piece in f.map(q).pieces() {
                    let mut t = s.clone();
                    if let Some(step) = Step::from_affine(q, &piece.inverse(q)) {
                        t.steps.push(step);
                    }
                    push(&mut out, t.normalized(q));
                }
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `t in z` for a term `t` assumed finite.
fn membership(t: &Term, z: &IntervalSet) -> Formula {
    let parts = z.parts().iter().map(|i| {
        let mut c = Vec::new();
        match &i.lo {
            Lower::NegInf => {}
            Lower::Closed(a) => c.push(Formula::Atom(t.clone(), Cmp::Ge, Term::constant(a.clone()))),
            Lower::Open(a) => c.push(Formula::Atom(t.clone(), Cmp::Gt, Term::constant(a.clone()))),
        }
        match &i.hi {
            Upper::PosInf => {}
            Upper::Closed(b) => c.push(Formula::Atom(t.clone(), Cmp::Le, Term::constant(b.clone()))),
            Upper::Open(b) => c.push(Formula::Atom(t.clone(), Cmp::Lt, Term::constant(b.clone()))),
        }
        Formula::And(c)
    });
    Formula::Or(parts.collect())
}

fn substitute_point(q: u64, phi: &Formula, x: &str, p: &Point<'_>) -> Result<Formula, LogicError> {
    Ok(match phi {
        Formula::True | Formula::False => phi.clone(),
        Formula::Atom(a, c, b) => substitute_atom(q, a, *c, b, x, p)?,
        Formula::Not(f) => Formula::not(substitute_point(q, f, x, p)?),
        Formula::And(fs) => Formula::And(
            fs.iter()
                .map(|f| substitute_point(q, f, x, p))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Or(fs) => Formula::Or(
            fs.iter()
                .map(|f| substitute_point(q, f, x, p))
                .collect::<Result<_, _>>()?,
        ),
        Formula::Exists(..) | Formula::Forall(..) => return Err(LogicError::NotQuantifierFree),
    })
}

fn substitute_atom(q: u64, a: &Term, c: Cmp, b: &Term, x: &str, p: &Point<'_>) -> Result<Formula, LogicError> {
    let truth = |v: bool| if v { Formula::True } else { Formula::False };
    Ok(match (on_x(a, x), on_x(b, x)) {
        (false, false) => Formula::Atom(a.clone(), c, b.clone()),
        (true, true) => {
            let atom = Formula::Atom(a.clone(), c, b.clone());
            let z = atom_solution_set(q, &atom, &Env::new(), x)?;
            match p {
                Point::Bottom => truth(z.left_unbounded()),
                Point::Top => truth(c.holds(Ordering::Equal)),
                Point::At(t) => membership(t, &z),
                Point::After(t) => membership(t, &z.right_limits()),
            }
        }
        (xa, _) => {
            // Orient as f(x) c s.
            let (f, c, s) = if xa { (a, c, b) } else { (b, c.flip(), a) };
            match p {
                Point::Bottom => truth(c.holds(Ordering::Less)),
                Point::Top => Formula::Atom(Term::inf(), c, s.clone()),
                Point::At(t) => Formula::Atom(f.rebase(q, t), c, s.clone()),
                Point::After(t) => {
                    let fb = f.rebase(q, t);
                    match c {
                        Cmp::Lt | Cmp::Le => Formula::Atom(fb, Cmp::Lt, s.clone()),
                        Cmp::Eq => Formula::False,
                        Cmp::Ne => Formula::True,
                        Cmp::Gt | Cmp::Ge => Formula::Atom(fb, Cmp::Ge, s.clone()),
                    }
                }
            }
        }
    })
}
