//! Polynomial-expression parser shared by series and Ore polynomials.
//!
//! ```text
//! expr  := ['-'] term {('+'|'-') term}
//! term  := power {'*' power}
//! power := atom ['^' exp]
//! atom  := int | 'u' | 't' | 'w' | 'w_N' | '(' expr ')'
//! ```
//! `u` takes rational exponents `u^(a/b)`, `u^(-n)`, `u^-n`; every other
//! atom takes natural-number powers only. A series may end in `+ O(u^k)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::field::{finite_field, FieldElem};
use super::{GroundConfig, HahnSeries};
use crate::rational::Rat;
use crate::syntax::{tokenize, Cursor, ParseError, Tok};

pub(crate) trait ExprAlgebra {
    type Elem: Clone;
    fn config(&self) -> &GroundConfig;
    fn constant(&self, c: FieldElem) -> Self::Elem;
    fn u_pow(&self, e: Rat) -> Self::Elem;
    /// `None` when the variable `t` is not part of the algebra.
    fn t(&self) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
}

struct Parser<'a, 'c, A: ExprAlgebra> {
    alg: &'c A,
    cur: Cursor<'a>,
}

impl<A: ExprAlgebra> Parser<'_, '_, A> {
    fn expr(&mut self) -> Result<A::Elem, ParseError> {
        let negate = self.cur.eat_sym("-");
        let mut acc = self.term()?;
        if negate {
            acc = self.alg.neg(&acc);
        }
        loop {
            if self.cur.is_sym("+") && self.cur.peek_at(1) == Some(&Tok::Ident("O".into())) {
                return Ok(acc);
            }
            if self.cur.eat_sym("+") {
                let t = self.term()?;
                acc = self.alg.add(&acc, &t);
            } else if self.cur.eat_sym("-") {
                let t = self.term()?;
                acc = self.alg.add(&acc, &self.alg.neg(&t));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<A::Elem, ParseError> {
        let mut acc = self.power()?;
        while self.cur.eat_sym("*") {
            let f = self.power()?;
            acc = self.alg.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn u_exponent(&mut self) -> Result<Rat, ParseError> {
        if self.cur.eat_sym("(") {
            let r = self.cur.rational()?;
            self.cur.expect_sym(")")?;
            Ok(r)
        } else if self.cur.eat_sym("-") {
            Ok(-Rat::from_integer(self.cur.natural()?))
        } else {
            Ok(Rat::from_integer(self.cur.natural()?))
        }
    }

    fn nat_exponent(&mut self) -> Result<u32, ParseError> {
        let n = self.cur.natural()?;
        n.to_u32()
            .filter(|&k| k <= 4096)
            .ok_or_else(|| self.cur.error("exponent too large"))
    }

    fn pow(&self, base: &A::Elem, n: u32) -> A::Elem {
        let mut acc = self.alg.constant(self.alg.config().elem(1));
        for _ in 0..n {
            acc = self.alg.mul(&acc, base);
        }
        acc
    }

    fn generator(&self, degree: u32) -> Result<A::Elem, ParseError> {
        let p = self.alg.config().p();
        let field = finite_field(p, degree).map_err(|e| self.cur.error(e.to_string()))?;
        Ok(self.alg.constant(FieldElem::generator(&field)))
    }

    fn power(&mut self) -> Result<A::Elem, ParseError> {
        let base = match self.cur.peek() {
            Some(Tok::Int(n)) => {
                let p = BigInt::from(self.alg.config().p());
                let v = n.mod_floor(&p).to_i64().unwrap();
                self.cur.next();
                self.alg.constant(self.alg.config().elem(v))
            }
            Some(Tok::Ident(id)) if id == "u" => {
                self.cur.next();
                if self.cur.eat_sym("^") {
                    let e = self.u_exponent()?;
                    return Ok(self.alg.u_pow(e));
                }
                return Ok(self.alg.u_pow(Rat::from_integer(1.into())));
            }
            Some(Tok::Ident(id)) if id == "t" => match self.alg.t() {
                Some(t) => {
                    self.cur.next();
                    t
                }
                None => return Err(self.cur.error("'t' is not allowed here")),
            },
            Some(Tok::Ident(id)) if id == "w" => {
                let g = self.generator(self.alg.config().e())?;
                self.cur.next();
                g
            }
            Some(Tok::Ident(id)) if id.starts_with("w_") => {
                let d = id[2..]
                    .parse::<u32>()
                    .ok()
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| self.cur.error("bad generator name"))?;
                let g = self.generator(d)?;
                self.cur.next();
                g
            }
            Some(Tok::Sym("(")) => {
                self.cur.next();
                let e = self.expr()?;
                self.cur.expect_sym(")")?;
                e
            }
            _ => return Err(self.cur.error("expected a term")),
        };
        if self.cur.eat_sym("^") {
            let n = self.nat_exponent()?;
            return Ok(self.pow(&base, n));
        }
        Ok(base)
    }
}

pub(crate) fn parse_with<A: ExprAlgebra>(alg: &A, text: &str) -> Result<A::Elem, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        alg,
        cur: Cursor::new(&toks, text.len()),
    };
    let e = p.expr()?;
    p.cur.expect_end()?;
    Ok(e)
}

impl ExprAlgebra for GroundConfig {
    type Elem = HahnSeries;

    fn config(&self) -> &GroundConfig {
        self
    }

    fn constant(&self, c: FieldElem) -> HahnSeries {
        HahnSeries::constant(c)
    }

    fn u_pow(&self, e: Rat) -> HahnSeries {
        HahnSeries::u_pow(self, e)
    }

    fn t(&self) -> Option<HahnSeries> {
        None
    }

    fn add(&self, a: &HahnSeries, b: &HahnSeries) -> HahnSeries {
        a.add(b)
    }

    fn neg(&self, a: &HahnSeries) -> HahnSeries {
        a.neg()
    }

    fn mul(&self, a: &HahnSeries, b: &HahnSeries) -> HahnSeries {
        a.mul(b)
    }
}

pub(crate) fn parse_series(cfg: &GroundConfig, text: &str) -> Result<HahnSeries, super::CoeffError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        alg: cfg,
        cur: Cursor::new(&toks, text.len()),
    };
    let body = if p.cur.is_ident("O") {
        HahnSeries::zero()
    } else {
        let e = p.expr()?;
        if !p.cur.at_end() {
            p.cur.expect_sym("+")?;
        }
        e
    };
    if p.cur.at_end() {
        return Ok(body);
    }
    if !p.cur.is_ident("O") {
        return Err(p.cur.error("expected 'O'").into());
    }
    p.cur.next();
    p.cur.expect_sym("(")?;
    if !p.cur.is_ident("u") {
        return Err(p.cur.error("expected 'u'").into());
    }
    p.cur.next();
    let k = if p.cur.eat_sym("^") {
        p.u_exponent()?
    } else {
        Rat::from_integer(1.into())
    };
    p.cur.expect_sym(")")?;
    p.cur.expect_end()?;
    Ok(body.truncate(&k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parses_series() {
        let c = GroundConfig::from_q(2).unwrap();
        let x = parse_series(&c, "1*u^(1/2) + 1*u^(3/4)").unwrap();
        assert_eq!(x.to_string(), "u^(1/2) + u^(3/4)");
        let y = parse_series(&c, "(1 + u)^2").unwrap();
        assert_eq!(y.to_string(), "1 + u^2");
        let z = parse_series(&c, "u^-1 + u^(-1/3)").unwrap();
        assert_eq!(z.valuation(), Some(&rat(-1, 1)));
        for text in ["1 + u^(1/2) + O(u^2)", "O(u^(-1/2))", "w_2*u + O(u^2)", "1 + O(u)"] {
            assert_eq!(parse_series(&c, text).unwrap().to_string(), text);
        }
        assert_eq!(parse_series(&c, "u^3 + 1 + O(u^2)").unwrap().to_string(), "1 + O(u^2)");
        assert!(parse_series(&c, "1 + O(t)").is_err());
        assert!(parse_series(&c, "O(u) + 1").is_err());
    }

    #[test]
    fn generators() {
        let c = GroundConfig::from_q(4).unwrap();
        let x = parse_series(&c, "w*w").unwrap();
        assert_eq!(x.to_string(), "w_2 + 1");
        let y = parse_series(&c, "(w_2 + 1)*u").unwrap();
        assert_eq!(y.to_string(), "(w_2 + 1)*u");
        assert_eq!(parse_series(&c, &y.to_string()).unwrap(), y);
    }

    #[test]
    fn errors_carry_positions() {
        let c = GroundConfig::default();
        let e = parse_series(&c, "u + t").unwrap_err();
        assert!(e.to_string().contains("token 3"), "{e}");
        assert!(parse_series(&c, "u^(1/0)").is_err());
        assert!(parse_series(&c, "u +").is_err());
    }
}
