//! The acceptance battery. Each check returns a one-line summary or the
//! first counterexample found.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use skewval::chain::ChainValue;
use skewval::coeff::{GroundConfig, HahnSeries};
use skewval::logic::{self, Env, Formula, Term};
use skewval::ore::{parse_ore, OrePoly};
use skewval::random::{self, SeriesShape};
use skewval::rational::{int, pow_q, rat, Rat};
use skewval::vmod::{
    ball_regularity_invariance, jump_values_in_m, kernel_basis, regular_decomposition, regularity, solve_regular,
};

use super::oracle;

pub type Outcome = Result<String, String>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub limit: Option<Duration>,
    pub run: fn() -> Outcome,
}

pub const ALL: [Criterion; 8] = [
    Criterion {
        id: 1,
        name: "ore ring axioms",
        limit: Some(Duration::from_secs(5)),
        run: ring_axioms,
    },
    Criterion {
        id: 2,
        name: "action compatibility",
        limit: Some(Duration::from_secs(5)),
        run: action_compatibility,
    },
    Criterion {
        id: 3,
        name: "envelope oracle",
        limit: None,
        run: envelope_oracle,
    },
    Criterion {
        id: 4,
        name: "regularity dichotomy",
        limit: None,
        run: regularity_dichotomy,
    },
    Criterion {
        id: 5,
        name: "solver certificate",
        limit: Some(Duration::from_secs(10)),
        run: solver_certificate,
    },
    Criterion {
        id: 6,
        name: "kernel structure",
        limit: None,
        run: kernel_structure,
    },
    Criterion {
        id: 7,
        name: "regular decomposition",
        limit: None,
        run: decomposition,
    },
    Criterion {
        id: 8,
        name: "logic",
        limit: Some(Duration::from_secs(10)),
        run: logic_battery,
    },
];

/// Runs `c`, failing it when it overruns its time limit.
pub fn run_timed(c: &Criterion) -> (Outcome, Duration) {
    let start = Instant::now();
    let out = (c.run)();
    let took = start.elapsed();
    let out = match (out, c.limit) {
        (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
        (o, _) => o,
    };
    (out, took)
}

fn cfg(q: u64) -> GroundConfig {
    GroundConfig::from_q(q).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn v(x: &HahnSeries) -> ChainValue {
    ChainValue::of_valuation(x.valuation())
}

const HALVES: SeriesShape = SeriesShape::new(3, -2, 3, 2);

fn ring_axioms() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    for n in 0..500 {
        let k = cfg(if n % 2 == 0 { 2 } else { 4 });
        let [a, b, c] = [(); 3].map(|_| random::ore(&k, 4, &HALVES, &mut rng));
        ensure(a.mul(&k, &b).mul(&k, &c) == a.mul(&k, &b.mul(&k, &c)), || {
            format!("associativity: {a} | {b} | {c}")
        })?;
        ensure(a.mul(&k, &b.add(&c)) == a.mul(&k, &b).add(&a.mul(&k, &c)), || {
            format!("left distributivity: {a} | {b} | {c}")
        })?;
        ensure(a.add(&b).mul(&k, &c) == a.mul(&k, &c).add(&b.mul(&k, &c)), || {
            format!("right distributivity: {a} | {b} | {c}")
        })?;
        let s = random::series(&k, &HALVES, &mut rng);
        let t = OrePoly::t_pow(&k, 1);
        ensure(
            OrePoly::constant(s.clone()).mul(&k, &t) == t.mul(&k, &OrePoly::constant(s.frobenius(&k, 1))),
            || format!("commutation: a = {s}"),
        )?;
    }
    Ok("500 triples over F_2 and F_4: associative, distributive; a.t = t.a^phi".into())
}

fn action_compatibility() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut gammas = 0;
    for n in 0..500 {
        let k = cfg(if n % 2 == 0 { 2 } else { 4 });
        let x = random::series(&k, &HALVES, &mut rng);
        let p = random::nonzero_ore(&k, 3, &HALVES, &mut rng);
        let q = random::nonzero_ore(&k, 3, &HALVES, &mut rng);
        let pq = p.mul(&k, &q);
        ensure(pq.eval(&k, &x) == q.eval(&k, &p.eval(&k, &x)), || {
            format!("x.(pq) != (x.p).q for x = {x}, p = {p}, q = {q}")
        })?;
        if n < 100 {
            let (tp, tq, tpq) = (
                p.tropicalize(&k).unwrap(),
                q.tropicalize(&k).unwrap(),
                pq.tropicalize(&k).unwrap(),
            );
            for _ in 0..10 {
                let g = rat(rng.gen_range(-400..=400), rng.gen_range(1..=12));
                ensure(tq.eval_rat(&tp.eval_rat(&g)) == tpq.eval_rat(&g), || {
                    format!("(g.p).q != g.(pq) at g = {g}, p = {p}, q = {q}")
                })?;
                gammas += 1;
            }
        }
    }
    Ok(format!("500 module triples; {gammas} chain points"))
}

/// Envelope and jumps recomputed from all lines on the grid of pairwise
/// intersections, their midpoints and two far points.
fn envelope_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    for n in 0..200 {
        let q = [2u64, 3, 4][n % 3];
        let r = random::trop(q, 5, 6, 12, rng.gen_range(1..=4), &mut rng);
        let lines: Vec<(u32, Rat)> = r.terms().map(|(k, c)| (k, c.clone())).collect();
        let line = |(k, c): &(u32, Rat), g: &Rat| pow_q(q, *k) * g + c;
        let mut xs = BTreeSet::new();
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                xs.insert((&b.1 - &a.1) / (pow_q(q, a.0) - pow_q(q, b.0)));
            }
        }
        let xs: Vec<Rat> = xs.into_iter().collect();
        let (left, right) = match (xs.first(), xs.last()) {
            (Some(a), Some(b)) => (a - int(1), b + int(1)),
            _ => (int(-1), int(1)),
        };
        let mut grid = vec![left.clone()];
        for (i, x) in xs.iter().enumerate() {
            grid.push(x.clone());
            if let Some(y) = xs.get(i + 1) {
                grid.push((x + y) / int(2));
            }
        }
        grid.push(right.clone());
        let argmins: Vec<Vec<u32>> = grid
            .iter()
            .map(|g| {
                let m = lines.iter().map(|l| line(l, g)).min().unwrap();
                lines.iter().filter(|l| line(l, g) == m).map(|l| l.0).collect()
            })
            .collect();
        let mut want = Vec::new();
        for (k, _) in lines.iter().rev() {
            let at: Vec<&Rat> = grid
                .iter()
                .zip(&argmins)
                .filter(|(_, a)| a.contains(k))
                .map(|(g, _)| g)
                .collect();
            if let (Some(lo), Some(hi)) = (at.first(), at.last()) {
                let lo = (**lo != left).then(|| (*lo).clone());
                let hi = (**hi != right).then(|| (*hi).clone());
                want.push((*k, lo, hi));
            }
        }
        let got: Vec<(u32, Option<Rat>, Option<Rat>)> = r
            .envelope()
            .pieces
            .into_iter()
            .map(|p| (p.degree, p.lo, p.hi))
            .collect();
        ensure(got == want, || format!("envelope of {r} (q={q}): {got:?} vs {want:?}"))?;
        let want_jumps: Vec<(Rat, u32, u32)> = grid
            .iter()
            .zip(&argmins)
            .filter(|(_, a)| a.len() >= 2)
            .map(|(g, a)| (g.clone(), *a.iter().max().unwrap(), *a.iter().min().unwrap()))
            .collect();
        let got_jumps: Vec<(Rat, u32, u32)> = r
            .potential_jumps()
            .jumps
            .into_iter()
            .map(|j| (j.value, j.high, j.low))
            .collect();
        ensure(got_jumps == want_jumps, || {
            format!("jumps of {r}: {got_jumps:?} vs {want_jumps:?}")
        })?;
    }
    Ok("200 polynomials: envelopes and jump sets match".into())
}

/// Keeps residue splitting fields within the search limit.
fn max_degree(k: &GroundConfig) -> usize {
    if k.q() == 2 {
        3
    } else {
        2
    }
}

/// A random series with leading exponent exactly `g`.
fn series_at(k: &GroundConfig, g: &Rat, rng: &mut StdRng) -> HahnSeries {
    let tail = random::series(k, &SeriesShape::new(3, 1, 8, 2), rng).shift(g);
    HahnSeries::monomial(random::nonzero_elem(k, rng), g.clone()).add(&tail)
}

fn regularity_dichotomy() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut at_jumps = 0;
    let mut irregular = 0;
    for n in 0..1000 {
        let k = cfg(if n % 2 == 0 { 2 } else { 4 });
        let r = random::nonzero_ore(&k, max_degree(&k), &HALVES, &mut rng);
        let jumps = r.tropicalize(&k).unwrap().potential_jumps();
        // Residue fields beyond the search limit only cost us the witness.
        let witness = jump_values_in_m(&k, &r).ok().and_then(|v| v.into_iter().next());
        let x = match (n % 4, witness.as_ref()) {
            (0, Some(j)) => j
                .witness
                .add(&random::series(&k, &SeriesShape::new(2, 1, 6, 2), &mut rng).shift(&j.gamma)),
            (1, _) if !jumps.is_empty() => {
                let g = jumps.values()[rng.gen_range(0..jumps.len())].clone();
                series_at(&k, &g, &mut rng)
            }
            _ => random::nonzero_series(&k, &HALVES, &mut rng),
        };
        let verdict = regularity(&k, &x, &r).unwrap();
        ensure(verdict.image >= verdict.predicted, || {
            format!("v(x.r) < v(x).r for x = {x}, r = {r}")
        })?;
        let gx = x.valuation().unwrap();
        if jumps.contains(gx) {
            at_jumps += 1;
        } else {
            ensure(verdict.regular, || format!("irregular off the jumps: x = {x}, r = {r}"))?;
        }
        irregular += usize::from(!verdict.regular);
    }
    let mut pairs = 0;
    while pairs < 200 {
        let k = cfg(if pairs % 2 == 0 { 2 } else { 4 });
        let r = random::nonzero_ore(&k, max_degree(&k), &HALVES, &mut rng);
        let jv = jump_values_in_m(&k, &r).unwrap_or_default();
        let x = match jv.get(pairs % 3) {
            Some(j) => j.witness.clone(),
            None => random::nonzero_series(&k, &HALVES, &mut rng),
        };
        let g = x.valuation().unwrap().clone();
        let y = x.add(&random::nonzero_series(&k, &SeriesShape::new(3, 1, 6, 4), &mut rng).shift(&g));
        let check = ball_regularity_invariance(&k, &x, &y, &r).unwrap();
        ensure(check.agree, || {
            format!("ball invariance fails: x = {x}, y = {y}, r = {r}")
        })?;
        pairs += 1;
    }
    Ok(format!(
        "1000 pairs ({at_jumps} at jumps, {irregular} irregular); 200 ball pairs agree"
    ))
}

/// `sum_i a_i y^(q^i)` through plain powers.
fn substitute(k: &GroundConfig, r: &OrePoly, y: &HahnSeries) -> HahnSeries {
    r.coeffs().iter().enumerate().fold(HahnSeries::zero(), |acc, (i, a)| {
        acc.add(&y.pow(k.q().pow(i as u32)).mul(a))
    })
}

fn solver_certificate() -> Outcome {
    let k = cfg(2);
    let r = parse_ore(&k, "t + u").unwrap();
    let z = k.parse_series("u").unwrap();
    let sol = solve_regular(&k, &r, &z, &int(100), 8).unwrap();
    let got = sol.trace.residuals();
    for kk in 1..=8u32 {
        // 2 - 2^(1-k)
        let exact = ChainValue::Fin(int(2) - int(2) / pow_q(2, kk));
        ensure(got.get(kk as usize - 1) == Some(&exact), || {
            format!("worked instance residual {kk}: {:?}", got.get(kk as usize - 1))
        })?;
    }
    let mut rng = StdRng::seed_from_u64(5);
    let prec = int(3);
    let (mut ok, mut other) = (0, 0);
    for n in 0..100 {
        let k = cfg(if n % 2 == 0 { 2 } else { 4 });
        let r = random::nonzero_ore(&k, 2, &SeriesShape::new(2, -2, 3, 2), &mut rng);
        let z = random::nonzero_series(&k, &SeriesShape::new(3, -2, 4, 2), &mut rng);
        let sol = match solve_regular(&k, &r, &z, &prec, 16) {
            Ok(s) => s,
            Err(_) => {
                other += 1;
                continue;
            }
        };
        if !sol.trace.termination.is_success() {
            other += 1;
            continue;
        }
        let y = &sol.y;
        ensure(regularity(&k, y, &r).unwrap().regular, || {
            format!("y = {y} not regular for r = {r}")
        })?;
        let image = r.eval(&k, y);
        ensure(image == substitute(&k, &r, y), || {
            format!("substitution mismatch for y = {y}, r = {r}")
        })?;
        ensure(v(&image.sub(&z)) > ChainValue::Fin(prec.clone()), || {
            format!("residual too large: y = {y}, r = {r}, z = {z}")
        })?;
        ok += 1;
    }
    ensure(ok >= 50, || format!("only {ok} of 100 random solves succeeded"))?;
    Ok(format!(
        "residuals {}; {ok} random solves certified, {other} stopped on budget or field size",
        skewval::vmod::format_ladder(&got[..8])
    ))
}

/// `t + c u^g`: kernel `{x : x^q = -c u^g x}` of size `q`.
fn factor(k: &GroundConfig, c: i64, w: bool, g: Rat) -> OrePoly {
    let coeff = if w {
        k.parse_series("w").unwrap().mul(&HahnSeries::u_pow(k, g))
    } else {
        HahnSeries::u_pow(k, g).scale(&k.elem(c))
    };
    OrePoly::from_coeffs(vec![coeff, HahnSeries::one(k)])
}

fn kernel_structure() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut total_strata = 0;
    for n in 0..30 {
        let q = if n % 2 == 0 { 2 } else { 4 };
        let k = cfg(q);
        let nf = 2 + n % 2;
        let factors: Vec<OrePoly> = (0..nf)
            .map(|_| {
                factor(
                    &k,
                    1,
                    q == 4 && rng.gen_bool(0.5),
                    rat(rng.gen_range(-3..=4), rng.gen_range(1..=2)),
                )
            })
            .collect();
        let r = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.mul(&k, f));
        let strat = kernel_basis(&k, &r, &int(2), 24).map_err(|e| format!("{r}: {e}"))?;
        let factor_sizes: u128 = factors
            .iter()
            .map(|f| kernel_basis(&k, f, &int(2), 24).unwrap().count())
            .product();
        ensure(strat.count() == factor_sizes, || {
            format!("|ker {r}| = {} but factors give {factor_sizes}", strat.count())
        })?;
        ensure(strat.product_formula_holds(), || {
            format!("product formula fails for {r}")
        })?;
        for s in &strat.strata {
            ensure(s.differences_exact(&k), || {
                format!("stratum {} of {r}: a difference has the wrong valuation", s.gamma)
            })?;
            ensure(s.matching_unique(&k), || {
                format!("stratum {} of {r}: matching not unique", s.gamma)
            })?;
        }
        total_strata += strat.strata.len();
    }
    Ok(format!(
        "30 products over F_2/F_4, {total_strata} strata: counts multiply, matchings unique"
    ))
}

fn decomposition() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut done = 0;
    let mut max_rounds = 0;
    while done < 200 {
        let k = cfg(if done % 2 == 0 { 2 } else { 4 });
        let r = random::nonzero_ore(&k, max_degree(&k), &HALVES, &mut rng);
        let x = if done % 3 == 0 {
            // One root from each stratum, so several rounds are needed.
            let Ok(strat) = kernel_basis(&k, &r, &int(2), 24) else {
                continue;
            };
            let picked: Vec<HahnSeries> = strat
                .strata
                .iter()
                .filter_map(|s| s.basis.get(rng.gen_range(0..s.basis.len())))
                .map(|b| b.root.clone())
                .collect();
            let top = strat.strata.iter().map(|s| s.gamma.clone()).max();
            let Some(top) = top else { continue };
            picked
                .iter()
                .fold(HahnSeries::zero(), |acc, a| acc.add(a))
                .add(&random::series(&k, &SeriesShape::new(2, 4, 12, 4), &mut rng).shift(&top))
        } else {
            let jv = jump_values_in_m(&k, &r).unwrap_or_default();
            if jv.is_empty() {
                continue;
            }
            let j = &jv[rng.gen_range(0..jv.len())];
            j.witness
                .add(&random::series(&k, &SeriesShape::new(3, 1, 12, 4), &mut rng).shift(&j.gamma))
        };
        if regularity(&k, &x, &r).unwrap().regular {
            continue;
        }
        let jumps = r.tropicalize(&k).unwrap().potential_jumps().len();
        let d = regular_decomposition(&k, &x, &r, &int(2), 24).map_err(|e| format!("{x} / {r}: {e}"))?;
        ensure(d.eps.is_zero() || regularity(&k, &d.eps, &r).unwrap().regular, || {
            format!("eps = {} irregular for x = {x}, r = {r}", d.eps)
        })?;
        ensure(d.rounds.len() <= jumps, || {
            format!("{} rounds > {jumps} jumps for x = {x}, r = {r}", d.rounds.len())
        })?;
        ensure(d.a.add(&d.eps) == x, || format!("a + eps != x for x = {x}"))?;
        if !d.eps.is_zero() {
            let again = regular_decomposition(&k, &d.eps, &r, &int(2), 24).unwrap();
            ensure(again.rounds.is_empty() && again.eps == d.eps, || {
                format!("not idempotent on eps = {}", d.eps)
            })?;
        }
        max_rounds = max_rounds.max(d.rounds.len());
        done += 1;
    }
    Ok(format!(
        "200 irregular elements; at most {max_rounds} rounds; idempotent"
    ))
}

pub const CORPUS: &str = include_str!("corpus.txt");
pub const QE_FORMULAS: &str = include_str!("qe_formulas.txt");

/// `(sentence, expected truth value)` pairs.
pub fn corpus() -> Vec<(String, bool)> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (want, s) = l.split_once(' ').expect("truth value then sentence");
            (s.trim().to_string(), want == "T")
        })
        .collect()
}

pub fn qe_formulas() -> Vec<String> {
    QE_FORMULAS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

fn logic_battery() -> Outcome {
    let q = 2;
    let sentences = corpus();
    for (s, want) in &sentences {
        let f = logic::parse(q, s).map_err(|e| format!("{s}: {e}"))?;
        let got = logic::decide(q, &f).map_err(|e| format!("{s}: {e}"))?;
        let brute = oracle::brute_eval(q, &f, &Env::new());
        ensure(got == brute && got == *want, || {
            format!("{s}: decide {got}, brute force {brute}, expected {want}")
        })?;
    }
    let mut rng = StdRng::seed_from_u64(8);
    let formulas = qe_formulas();
    for s in &formulas {
        let phi = logic::parse(q, s).map_err(|e| format!("{s}: {e}"))?;
        let psi = logic::qe_exists(q, &phi, "x").map_err(|e| format!("{s}: {e}"))?;
        let params: Vec<String> = phi.free_vars().into_iter().filter(|v| v != "x").collect();
        let pool = oracle::breakpoint_pool(q, &phi);
        for _ in 0..1000 {
            let env: Env = params
                .iter()
                .map(|p| (p.clone(), oracle::sample_value(&pool, &mut rng)))
                .collect();
            let closed = env
                .iter()
                .fold(phi.clone(), |f, (p, val)| f.substitute(q, p, &Term::of_value(val)));
            let lhs = logic::decide(q, &Formula::exists("x", closed.clone())).unwrap();
            let rhs = logic::eval(q, &psi, &env).unwrap();
            let brute = oracle::brute_eval(q, &Formula::exists("x", closed), &Env::new());
            ensure(lhs == rhs && rhs == brute, || {
                format!("E x. {s} vs {psi} at {env:?}: decide {lhs}, qe {rhs}, brute force {brute}")
            })?;
        }
    }
    Ok(format!(
        "{} corpus sentences agree; {} eliminations checked on 1000 samples each",
        sentences.len(),
        formulas.len()
    ))
}
