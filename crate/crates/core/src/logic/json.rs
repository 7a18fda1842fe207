use serde_json::{json, Value};

use super::ast::{Base, Formula, Step, Term};
use crate::rational::fmt_rat;

pub fn term_json(t: &Term) -> Value {
    let base = match &t.base {
        Base::Var(v) => json!({ "var": v }),
        Base::Const(r) => json!({ "const": fmt_rat(r) }),
        Base::Inf => json!("inf"),
    };
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| match s {
            Step::Trop(r) => json!({
                "trop": r.terms().rev().map(|(i, c)| json!([i, fmt_rat(c)])).collect::<Vec<_>>()
            }),
            Step::Inv(i, c) => json!({ "inv": [i, fmt_rat(c)] }),
        })
        .collect();
    json!({ "base": base, "steps": steps })
}

pub fn formula_json(f: &Formula) -> Value {
    match f {
        Formula::True => json!({ "op": "true" }),
        Formula::False => json!({ "op": "false" }),
        Formula::Atom(a, c, b) => json!({
            "op": "atom", "cmp": c.as_str(), "lhs": term_json(a), "rhs": term_json(b)
        }),
        Formula::Not(g) => json!({ "op": "not", "args": [formula_json(g)] }),
        Formula::And(gs) => json!({ "op": "and", "args": gs.iter().map(formula_json).collect::<Vec<_>>() }),
        Formula::Or(gs) => json!({ "op": "or", "args": gs.iter().map(formula_json).collect::<Vec<_>>() }),
        Formula::Exists(x, g) => json!({ "op": "exists", "var": x, "body": formula_json(g) }),
        Formula::Forall(x, g) => json!({ "op": "forall", "var": x, "body": formula_json(g) }),
    }
}
