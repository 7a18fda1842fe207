use std::fmt::Write;

use serde_json::{json, Value};

use skewval::chain::{ChainValue, TropPoly};
use skewval::coeff::HahnSeries;
use skewval::logic::{self, formula_json, Formula};
use skewval::ore::{parse_ore, OrePoly};
use skewval::rational::fmt_rat;
use skewval::vmod::{self, format_ladder, Termination};

use crate::error::Fail;
use crate::{Report, Session};

pub enum TropOp {
    Eval(String),
    Jumps,
    Envelope,
    Inverse(String),
}

fn ore(s: &Session, text: &str) -> Result<OrePoly, Fail> {
    Ok(parse_ore(&s.cfg, text)?)
}

fn series(s: &Session, text: &str) -> Result<HahnSeries, Fail> {
    Ok(s.cfg.parse_series(text)?)
}

fn point(text: &str) -> Result<ChainValue, Fail> {
    ChainValue::parse(text).ok_or_else(|| Fail::Input(format!("expected a rational or `inf`, got `{text}`")))
}

fn braced(items: impl IntoIterator<Item = String>) -> String {
    format!("{{{}}}", items.into_iter().collect::<Vec<_>>().join(", "))
}

fn count_json(n: u128) -> Value {
    u64::try_from(n).map_or_else(|_| Value::String(n.to_string()), Value::from)
}

pub fn trop(s: &Session, text: &str, op: TropOp) -> Result<Report, Fail> {
    let r = if text.trim_start().starts_with('{') {
        TropPoly::parse(s.cfg.q(), text)?
    } else {
        ore(s, text)?.tropicalize(&s.cfg)?
    };
    let name = r.to_string();
    Ok(match op {
        TropOp::Eval(g) => {
            let g = point(&g)?;
            let v = r.eval(&g);
            Report::ok(
                format!("{v}\n"),
                json!({"trop": name, "gamma": g.to_string(), "value": v.to_string()}),
            )
        }
        TropOp::Inverse(d) => {
            let d = point(&d)?;
            let v = r.inverse(&d);
            Report::ok(
                format!("{v}\n"),
                json!({"trop": name, "delta": d.to_string(), "value": v.to_string()}),
            )
        }
        TropOp::Jumps => {
            let jumps = r.potential_jumps();
            let list: Vec<Value> = jumps
                .jumps
                .iter()
                .map(|j| json!({"value": fmt_rat(&j.value), "high": j.high, "low": j.low}))
                .collect();
            Report::ok(format!("{jumps}\n"), json!({"trop": name, "jumps": list}))
        }
        TropOp::Envelope => {
            let env = r.envelope();
            Report::ok(env.to_string(), json!({"trop": name, "pieces": env.to_json()}))
        }
    })
}

pub fn solve(s: &Session, r: &str, z: &str) -> Result<Report, Fail> {
    let (r, z) = (ore(s, r)?, series(s, z)?);
    let sol = vmod::solve_regular(&s.cfg, &r, &z, &s.prec, s.budget)?;
    let trace = &sol.trace;
    let mut text = String::new();
    writeln!(text, "y = {}", sol.y).unwrap();
    writeln!(text, "residuals: {}", format_ladder(&trace.residuals())).unwrap();
    writeln!(text, "termination: {}", trace.termination.as_str()).unwrap();
    writeln!(text, "tower degree: {}", trace.tower_degree()).unwrap();
    let json = json!({
        "y": sol.y.to_string(),
        "y_series": sol.y.to_json(),
        "trace": trace.to_json(),
        "termination": trace.termination,
        "tower_degree": trace.tower_degree(),
    });
    let failure = (trace.termination == Termination::BudgetExhausted).then(|| {
        Fail::Domain(format!(
            "term budget {} exhausted before precision {}",
            s.budget,
            fmt_rat(&s.prec)
        ))
    });
    Ok(Report { text, json, failure })
}

pub fn kernel(s: &Session, r: &str) -> Result<Report, Fail> {
    let r = ore(s, r)?;
    let k = vmod::kernel_basis(&s.cfg, &r, &s.prec, s.budget)?;
    let q = s.cfg.q();
    let mut text = format!("r = {r}\n");
    let mut strata = Vec::new();
    for st in &k.strata {
        let residues = st.basis.iter().map(|b| b.residue.to_string());
        let roots = st.roots().iter().map(ToString::to_string).collect::<Vec<_>>();
        writeln!(
            text,
            "stratum {}: dim {}, |A| = {}, tower degree {}",
            fmt_rat(&st.gamma),
            st.dim,
            st.count(q),
            st.tower_degree
        )
        .unwrap();
        writeln!(text, "  r_gamma = {}", st.sub_poly).unwrap();
        writeln!(text, "  basis {}", braced(residues)).unwrap();
        writeln!(text, "  roots {}", braced(roots)).unwrap();
        writeln!(
            text,
            "  v(root.r) {}",
            braced(st.basis.iter().map(|b| b.root_residual.to_string()))
        )
        .unwrap();
        let basis: Vec<Value> = st
            .basis
            .iter()
            .map(|b| {
                json!({
                    "residue": b.residue.to_string(),
                    "root": b.root.to_string(),
                    "root_residual": b.root_residual.to_string(),
                    "sub_root": b.sub_root.to_string(),
                    "sub_residual": b.sub_residual.to_string(),
                })
            })
            .collect();
        strata.push(json!({
            "gamma": fmt_rat(&st.gamma),
            "sub_poly": st.sub_poly.to_string(),
            "dim": st.dim,
            "count": count_json(st.count(q)),
            "tower_degree": st.tower_degree,
            "differences_exact": st.differences_exact(&s.cfg),
            "matching_unique": st.matching_unique(&s.cfg),
            "basis": basis,
        }));
    }
    let holds = k.product_formula_holds();
    writeln!(
        text,
        "|ker| = {}, q^(deg - ord) = {}, product formula {}",
        k.count(),
        k.expected_count(),
        if holds { "holds" } else { "fails" }
    )
    .unwrap();
    let json = json!({
        "r": r.to_string(),
        "strata": strata,
        "count": count_json(k.count()),
        "expected_count": count_json(k.expected_count()),
        "product_formula_holds": holds,
    });
    Ok(Report::ok(text, json))
}

pub fn decompose(s: &Session, x: &str, r: &str) -> Result<Report, Fail> {
    let (x, r) = (series(s, x)?, ore(s, r)?);
    let d = vmod::regular_decomposition(&s.cfg, &x, &r, &s.prec, s.budget)?;
    let mut text = format!("a = {}\neps = {}\n", d.a, d.eps);
    for (i, (g, root)) in d.rounds.iter().enumerate() {
        writeln!(text, "round {}: gamma = {}, root = {}", i + 1, fmt_rat(g), root).unwrap();
    }
    let rounds: Vec<Value> = d
        .rounds
        .iter()
        .map(|(g, root)| json!({"gamma": fmt_rat(g), "root": root.to_string()}))
        .collect();
    let json = json!({"a": d.a.to_string(), "eps": d.eps.to_string(), "rounds": rounds});
    Ok(Report::ok(text, json))
}

pub fn regular(s: &Session, x: &str, r: &str) -> Result<Report, Fail> {
    let (x, r) = (series(s, x)?, ore(s, r)?);
    let v = vmod::regularity(&s.cfg, &x, &r)?;
    let verdict = if v.regular { "regular" } else { "irregular" };
    let text = format!("{verdict}\nv(x.r) = {}\nv(x).r = {}\n", v.image, v.predicted);
    let json = json!({
        "regular": v.regular,
        "image": v.image.to_string(),
        "predicted": v.predicted.to_string(),
    });
    Ok(Report::ok(text, json))
}

fn formula(s: &Session, text: &str) -> Result<Formula, Fail> {
    Ok(logic::parse(s.cfg.q(), text)?)
}

pub fn decide(s: &Session, text: &str) -> Result<Report, Fail> {
    let f = formula(s, text)?;
    let v = logic::decide(s.cfg.q(), &f)?;
    Ok(Report::ok(
        format!("{v}\n"),
        json!({"formula": formula_json(&f), "value": v}),
    ))
}

pub fn qe(s: &Session, text: &str) -> Result<Report, Fail> {
    let q = s.cfg.q();
    let f = formula(s, text)?;
    let out = match &f {
        Formula::Exists(_, body) | Formula::Forall(_, body) if body.is_quantifier_free() => logic::eliminate(q, &f)?,
        Formula::Exists(..) | Formula::Forall(..) => {
            return Err(Fail::Domain(
                "qe expects one quantifier over a quantifier-free matrix".into(),
            ))
        }
        _ => logic::simplify(q, &f),
    };
    Ok(Report::ok(
        format!("{out}\n"),
        json!({"input": formula_json(&f), "output": formula_json(&out), "text": out.to_string()}),
    ))
}

pub fn simplify(s: &Session, text: &str) -> Result<Report, Fail> {
    let f = formula(s, text)?;
    if !f.is_quantifier_free() {
        return Err(Fail::Domain(
            "simplify expects a quantifier-free formula; use qe".into(),
        ));
    }
    let out = logic::simplify(s.cfg.q(), &f);
    Ok(Report::ok(
        format!("{out}\n"),
        json!({"input": formula_json(&f), "output": formula_json(&out), "text": out.to_string()}),
    ))
}
