//! Brute-force semantics: quantifiers range over a finite sample of test
//! points built from the constants, the bound values, line crossings and
//! their images under the term maps.

use std::collections::BTreeSet;

use rand::Rng;

use skewval::chain::ChainValue;
use skewval::logic::{Base, Env, Formula, Step, Term};
use skewval::rational::{int, pow_q, rat, Rat};

fn apply(q: u64, s: &Step, g: &Rat) -> Rat {
    match s {
        Step::Trop(r) => r.terms().map(|(k, c)| pow_q(q, k) * g + c).min().unwrap(),
        Step::Inv(i, c) => (g - c) / pow_q(q, *i),
    }
}

/// The preimage under one strictly increasing step.
fn unapply(q: u64, s: &Step, d: &Rat) -> Rat {
    match s {
        Step::Trop(r) => r.terms().map(|(k, c)| (d - c) / pow_q(q, k)).max().unwrap(),
        Step::Inv(i, c) => pow_q(q, *i) * d + c,
    }
}

fn forward(q: u64, steps: &[Step], g: &Rat) -> Rat {
    steps.iter().fold(g.clone(), |v, s| apply(q, s, &v))
}

fn backward(q: u64, steps: &[Step], d: &Rat) -> Rat {
    steps.iter().rev().fold(d.clone(), |v, s| unapply(q, s, &v))
}

fn base_value(t: &Term, env: &Env) -> Option<ChainValue> {
    match &t.base {
        Base::Var(v) => env.get(v).cloned(),
        Base::Const(r) => Some(ChainValue::Fin(r.clone())),
        Base::Inf => Some(ChainValue::Inf),
    }
}

fn value(q: u64, t: &Term, env: &Env) -> Option<ChainValue> {
    Some(match base_value(t, env)? {
        ChainValue::Fin(g) => ChainValue::Fin(forward(q, &t.steps, &g)),
        ChainValue::Inf => ChainValue::Inf,
    })
}

/// Lines `g -> a g + c` whose minimum is the map of `steps`.
fn lines(q: u64, steps: &[Step]) -> Vec<(Rat, Rat)> {
    let mut out = vec![(int(1), int(0))];
    for s in steps {
        out = match s {
            Step::Trop(r) => out
                .iter()
                .flat_map(|(a, c1)| r.terms().map(move |(k, c2)| (pow_q(q, k) * a, pow_q(q, k) * c1 + c2)))
                .collect(),
            Step::Inv(i, c) => out
                .iter()
                .map(|(a, c1)| (a / pow_q(q, *i), (c1 - c) / pow_q(q, *i)))
                .collect(),
        };
    }
    out
}

pub fn brute_eval(q: u64, f: &Formula, env: &Env) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a, c, b) => {
            let (u, v) = (value(q, a, env).expect("bound"), value(q, b, env).expect("bound"));
            c.holds(u.cmp(&v))
        }
        Formula::Not(g) => !brute_eval(q, g, env),
        Formula::And(gs) => gs.iter().all(|g| brute_eval(q, g, env)),
        Formula::Or(gs) => gs.iter().any(|g| brute_eval(q, g, env)),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let exists = matches!(f, Formula::Exists(..));
            let mut inner = env.clone();
            inner.remove(x);
            test_points(q, g, &inner).into_iter().any(|p| {
                inner.insert(x.clone(), p);
                brute_eval(q, g, &inner) == exists
            }) == exists
        }
    }
}

/// Candidate witnesses for a variable quantified over `body`.
fn test_points(q: u64, body: &Formula, env: &Env) -> Vec<ChainValue> {
    let mut chains: Vec<Vec<Step>> = Vec::new();
    let mut seeds: BTreeSet<Rat> = BTreeSet::new();
    seeds.insert(int(0));
    body.visit_atoms(&mut |a, _, b| {
        let mut atom_lines = Vec::new();
        for t in [a, b] {
            if !chains.contains(&t.steps) {
                chains.push(t.steps.clone());
            }
            for val in [base_value(t, env), value(q, t, env)].into_iter().flatten() {
                if let ChainValue::Fin(g) = val {
                    seeds.insert(g);
                }
            }
            atom_lines.extend(lines(q, &t.steps));
        }
        for (i, (a1, c1)) in atom_lines.iter().enumerate() {
            for (a2, c2) in &atom_lines[i + 1..] {
                if a1 != a2 {
                    seeds.insert((c2 - c1) / (a1 - a2));
                }
            }
        }
    });
    let mut pts = seeds.clone();
    for s in &seeds {
        for c in &chains {
            pts.insert(backward(q, c, s));
        }
    }
    for _ in 0..2 * body.quantifier_depth() {
        let cur: Vec<Rat> = pts.iter().cloned().collect();
        for s in &cur {
            for c in &chains {
                pts.insert(backward(q, c, s));
                pts.insert(forward(q, c, s));
            }
        }
    }
    let sorted: Vec<Rat> = pts.into_iter().collect();
    let mut out = vec![ChainValue::Inf];
    out.push(ChainValue::Fin(&sorted[0] - int(1)));
    out.push(ChainValue::Fin(sorted.last().unwrap() + int(1)));
    for (i, g) in sorted.iter().enumerate() {
        out.push(ChainValue::Fin(g.clone()));
        if let Some(h) = sorted.get(i + 1) {
            out.push(ChainValue::Fin((g + h) / int(2)));
        }
    }
    out
}

/// Constants, breakpoints of every map in `phi`, and their images under
/// those maps and their inverses.
pub fn breakpoint_pool(q: u64, phi: &Formula) -> Vec<ChainValue> {
    let mut seeds: BTreeSet<Rat> = phi.constants().into_iter().collect();
    seeds.insert(int(0));
    let steps = phi.steps();
    for s in &steps {
        if let Step::Trop(r) = s {
            seeds.extend(r.potential_jumps().values());
        }
    }
    let mut pool = seeds.clone();
    for g in &seeds {
        for s in &steps {
            pool.insert(apply(q, s, g));
            pool.insert(unapply(q, s, g));
        }
    }
    pool.into_iter().map(ChainValue::Fin).collect()
}

pub fn sample_value(pool: &[ChainValue], rng: &mut impl Rng) -> ChainValue {
    match rng.gen_range(0..20) {
        0..=1 => ChainValue::Inf,
        2..=11 if !pool.is_empty() => pool[rng.gen_range(0..pool.len())].clone(),
        _ => ChainValue::Fin(rat(rng.gen_range(-40..=40), rng.gen_range(1..=8))),
    }
}
