//! Finite fields F_{p^n} with a compatible family of defining polynomials.
//!
//! Each degree `n` is defined by a monic primitive polynomial `f_n` over
//! F_p chosen so that, for every divisor `d | n`, the element
//! `x^((p^n - 1)/(p^d - 1))` of `F_p[x]/f_n` is a root of `f_d`. This is
//! the defining property of Conway polynomials; we search for the first
//! such polynomial in a fixed enumeration order instead of using the
//! published tables. The property makes the embeddings
//! `F_{p^d} -> F_{p^n}` mutually compatible, so any two elements can be
//! combined by lifting both into `F_{p^lcm}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use super::linalg::{inv_mod, pow_mod, FpMatrix};
use super::CoeffError;

/// Largest F_p-degree of a field this crate will construct.
pub const MAX_FIELD_DEGREE: u32 = 24;
/// Largest field order `p^n` (keeps exponent arithmetic inside `u128`).
const MAX_FIELD_ORDER: u128 = 1 << 48;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors((p - 1) as u128);
    (2..p)
        .find(|&g| {
            factors
                .iter()
                .all(|&f| pow_mod(g as u64, ((p - 1) as u128 / f) as u64, p as u64) != 1)
        })
        .expect("every prime has a primitive root")
}

/// The field F_{p^n} = F_p[x]/(f_n).
pub struct FiniteField {
    p: u32,
    degree: u32,
    /// Monic defining polynomial, low coefficient first, length `degree + 1`.
    modulus: Vec<u32>,
    order: u128,
    /// Images of the power basis of each subfield, keyed by subfield degree.
    embeddings: Mutex<HashMap<u32, Arc<Vec<Vec<u32>>>>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree)
    }
}

type Registry = Mutex<HashMap<(u32, u32), Arc<FiniteField>>>;

static REGISTRY: OnceLock<Registry> = OnceLock::new();

/// Returns the (cached) field F_{p^degree}.
pub fn finite_field(p: u32, degree: u32) -> Result<Arc<FiniteField>, CoeffError> {
    if !is_prime(p as u64) {
        return Err(CoeffError::NotPrime(p as u64));
    }
    if degree == 0 {
        return Err(CoeffError::FieldTooLarge { p, degree });
    }
    let order = (p as u128).checked_pow(degree);
    if degree > MAX_FIELD_DEGREE || order.is_none_or(|o| o > MAX_FIELD_ORDER) {
        return Err(CoeffError::FieldTooLarge { p, degree });
    }
    let registry = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = registry.lock().unwrap().get(&(p, degree)) {
        return Ok(f.clone());
    }
    // Built outside the lock: the search recurses into subfields.
    let modulus = if degree == 1 {
        vec![(p - primitive_root(p)) % p, 1]
    } else {
        search_modulus(p, degree)?
    };
    let field = Arc::new(FiniteField {
        p,
        degree,
        modulus,
        order: order.unwrap(),
        embeddings: Mutex::new(HashMap::new()),
    });
    let mut reg = registry.lock().unwrap();
    Ok(reg.entry((p, degree)).or_insert(field).clone())
}

fn search_modulus(p: u32, n: u32) -> Result<Vec<u32>, CoeffError> {
    let order = (p as u128).pow(n);
    let group = order - 1;
    let group_factors = prime_factors(group);
    let maximal_subfields: Vec<Arc<FiniteField>> = prime_factors(n as u128)
        .into_iter()
        .map(|l| finite_field(p, n / l as u32))
        .collect::<Result<_, _>>()?;
    let mut x = vec![0u32; n as usize];
    x[1 % n as usize] = 1;
    for code in 0..order {
        let mut modulus = vec![0u32; n as usize + 1];
        modulus[n as usize] = 1;
        let mut c = code;
        for i in (0..n as usize).rev() {
            modulus[i] = (c % p as u128) as u32;
            c /= p as u128;
        }
        if modulus[0] == 0 {
            continue;
        }
        let ring = RawField { p, modulus: &modulus };
        if !ring.is_one(&ring.pow(&x, group)) {
            continue;
        }
        if group_factors.iter().any(|&l| ring.is_one(&ring.pow(&x, group / l))) {
            continue;
        }
        let compatible = maximal_subfields.iter().all(|sub| {
            let beta = ring.pow(&x, group / (sub.order - 1));
            ring.is_zero(&ring.eval_poly(&sub.modulus, &beta))
        });
        if compatible {
            return Ok(modulus);
        }
    }
    Err(CoeffError::FieldTooLarge { p, degree: n })
}

/// Arithmetic on raw coordinate vectors modulo a given polynomial.
struct RawField<'a> {
    p: u32,
    modulus: &'a [u32],
}

impl RawField<'_> {
    fn n(&self) -> usize {
        self.modulus.len() - 1
    }

    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.n()];
        v[0] = 1;
        v
    }

    fn is_one(&self, a: &[u32]) -> bool {
        a[0] == 1 && a[1..].iter().all(|&c| c == 0)
    }

    fn is_zero(&self, a: &[u32]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.n();
        let p = self.p as u64;
        if n == 1 {
            return vec![(a[0] as u64 * b[0] as u64 % p) as u32];
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce with the monic modulus: x^n = -sum m_i x^i.
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let m = self.modulus[i] as u64;
                prod[k - n + i] = (prod[k - n + i] + (p - c) * m) % p;
            }
        }
        prod.truncate(n);
        prod.into_iter().map(|c| c as u32).collect()
    }

    fn pow(&self, a: &[u32], mut exp: u128) -> Vec<u32> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Evaluates a polynomial over F_p (low coefficient first) at `at`.
    fn eval_poly(&self, poly: &[u32], at: &[u32]) -> Vec<u32> {
        let mut acc = vec![0; self.n()];
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, at);
            acc[0] = (acc[0] + c) % self.p;
        }
        acc
    }
}

impl FiniteField {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    /// Defining polynomial, low coefficient first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn raw(&self) -> RawField<'_> {
        RawField {
            p: self.p,
            modulus: &self.modulus,
        }
    }

    /// Images in this field of `1, a, a^2, ...` where `a` generates the
    /// subfield of degree `d`.
    fn subfield_basis(&self, d: u32) -> Arc<Vec<Vec<u32>>> {
        assert!(self.degree.is_multiple_of(d), "F_p^{d} is not a subfield of {self:?}");
        if let Some(b) = self.embeddings.lock().unwrap().get(&d) {
            return b.clone();
        }
        let raw = self.raw();
        let sub_order = (self.p as u128).pow(d);
        let beta = if d == self.degree {
            let mut x = vec![0; self.degree as usize];
            x[1 % self.degree as usize] = 1;
            if self.degree == 1 {
                x[0] = (self.p - self.modulus[0]) % self.p;
            }
            x
        } else if d == 1 {
            // The prime field embeds as constants.
            let mut g = vec![0; self.degree as usize];
            g[0] = primitive_root(self.p);
            g
        } else {
            let mut x = vec![0; self.degree as usize];
            x[1] = 1;
            raw.pow(&x, (self.order - 1) / (sub_order - 1))
        };
        let mut basis = Vec::with_capacity(d as usize);
        let mut cur = raw.one();
        for _ in 0..d {
            basis.push(cur.clone());
            cur = raw.mul(&cur, &beta);
        }
        let basis = Arc::new(basis);
        self.embeddings.lock().unwrap().insert(d, basis.clone());
        basis
    }
}

/// An element of some F_{p^n}.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<FiniteField>,
    coords: Vec<u32>,
}

impl FieldElem {
    pub fn zero(field: &Arc<FiniteField>) -> Self {
        FieldElem {
            field: field.clone(),
            coords: vec![0; field.degree as usize],
        }
    }

    pub fn one(field: &Arc<FiniteField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<FiniteField>, v: i64) -> Self {
        let mut e = Self::zero(field);
        e.coords[0] = v.rem_euclid(field.p as i64) as u32;
        e
    }

    /// The class of `x` in F_p[x]/(f_n); generates the multiplicative group.
    pub fn generator(field: &Arc<FiniteField>) -> Self {
        let mut e = Self::zero(field);
        if field.degree == 1 {
            e.coords[0] = primitive_root(field.p);
        } else {
            e.coords[1] = 1;
        }
        e
    }

    /// Coordinates over F_p in the power basis of the defining polynomial.
    pub fn from_coords(field: &Arc<FiniteField>, coords: &[u32]) -> Self {
        assert_eq!(coords.len(), field.degree as usize);
        FieldElem {
            field: field.clone(),
            coords: coords.iter().map(|c| c % field.p).collect(),
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn characteristic(&self) -> u32 {
        self.field.p
    }

    pub fn degree(&self) -> u32 {
        self.field.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// Embeds into `F_{p^n}` for a multiple `n` of the current degree.
    pub fn lift(&self, target: &Arc<FiniteField>) -> FieldElem {
        assert_eq!(self.field.p, target.p, "characteristic mismatch");
        if self.field.degree == target.degree {
            return self.clone();
        }
        let basis = target.subfield_basis(self.field.degree);
        let raw = target.raw();
        let mut acc = vec![0u32; target.degree as usize];
        for (c, b) in self.coords.iter().zip(basis.iter()) {
            if *c == 0 {
                continue;
            }
            let scaled: Vec<u32> = b
                .iter()
                .map(|&x| (x as u64 * *c as u64 % target.p as u64) as u32)
                .collect();
            acc = raw.add(&acc, &scaled);
        }
        FieldElem {
            field: target.clone(),
            coords: acc,
        }
    }

    /// Lifts to the field of the given degree (must be a multiple).
    pub fn lift_to_degree(&self, degree: u32) -> Result<FieldElem, CoeffError> {
        let f = finite_field(self.field.p, degree)?;
        Ok(self.lift(&f))
    }

    /// Both operands in their smallest common field.
    pub fn unify(a: &FieldElem, b: &FieldElem) -> (FieldElem, FieldElem) {
        if a.field.degree == b.field.degree {
            return (a.clone(), b.clone());
        }
        let n = a.field.degree.lcm(&b.field.degree);
        let f = finite_field(a.field.p, n).expect("common extension exceeds the field size limit");
        (a.lift(&f), b.lift(&f))
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        let (a, b) = Self::unify(self, other);
        let coords = a.field.raw().add(&a.coords, &b.coords);
        FieldElem { field: a.field, coords }
    }

    pub fn neg(&self) -> FieldElem {
        let p = self.field.p;
        FieldElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|&c| (p - c) % p).collect(),
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        let (a, b) = Self::unify(self, other);
        let coords = a.field.raw().mul(&a.coords, &b.coords);
        FieldElem { field: a.field, coords }
    }

    pub fn scale(&self, k: u32) -> FieldElem {
        let p = self.field.p as u64;
        FieldElem {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .map(|&c| (c as u64 * (k as u64 % p) % p) as u32)
                .collect(),
        }
    }

    pub fn pow(&self, exp: u128) -> FieldElem {
        let coords = self.field.raw().pow(&self.coords, exp);
        FieldElem {
            field: self.field.clone(),
            coords,
        }
    }

    pub fn inv(&self) -> Result<FieldElem, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if self.field.degree == 1 {
            let mut e = self.clone();
            e.coords[0] = inv_mod(self.coords[0], self.field.p);
            return Ok(e);
        }
        Ok(self.pow(self.field.order - 2))
    }

    /// `x^(p^k)`; negative `k` applies the inverse Frobenius.
    pub fn frobenius(&self, k: i64) -> FieldElem {
        let n = self.field.degree as i64;
        let k = k.rem_euclid(n) as u32;
        if k == 0 {
            return self.clone();
        }
        self.pow((self.field.p as u128).pow(k))
    }

    /// Degree of the smallest subfield containing this element.
    pub fn minimal_degree(&self) -> u32 {
        let n = self.field.degree;
        (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| self.frobenius(d as i64) == *self)
            .unwrap_or(n)
    }

    /// The same element expressed in its smallest subfield.
    pub fn normalized(&self) -> FieldElem {
        let d = self.minimal_degree();
        if d == self.field.degree {
            return self.clone();
        }
        let basis = self.field.subfield_basis(d);
        let m = FpMatrix::from_columns(self.field.p, self.field.degree as usize, &basis);
        let coords = m
            .solve(&self.coords)
            .expect("element fixed by Frobenius lies in the subfield");
        let sub = finite_field(self.field.p, d).expect("subfield of an existing field");
        FieldElem { field: sub, coords }
    }

    /// Lexicographic order on coordinates, lowest power first. Only
    /// meaningful for elements of the same field.
    pub fn cmp_coords(&self, other: &FieldElem) -> std::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }

    /// Polynomial in the generator `w_n`, e.g. `w_2 + 1`.
    fn fmt_poly(&self) -> String {
        let e = self.normalized();
        let d = e.field.degree;
        if d == 1 {
            return e.coords[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in e.coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => format!("w_{d}"),
                _ => format!("w_{d}^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }

    /// True when printing needs parentheses as a factor.
    pub fn is_compound(&self) -> bool {
        let e = self.normalized();
        e.coords.iter().filter(|&&c| c != 0).count() > 1
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        if self.field.p != other.field.p {
            return false;
        }
        if self.field.degree == other.field.degree {
            return self.coords == other.coords;
        }
        let (a, b) = Self::unify(self, other);
        a.coords == b.coords
    }
}

impl Eq for FieldElem {}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_poly())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈F_{}^{}", self.fmt_poly(), self.field.p, self.field.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, n: u32) -> Arc<FiniteField> {
        finite_field(p, n).unwrap()
    }

    #[test]
    fn small_moduli() {
        assert_eq!(f(2, 1).modulus(), &[1, 1]);
        assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(f(3, 1).modulus(), &[1, 1]); // x - 2
    }

    #[test]
    fn characteristic_two_addition() {
        let one = FieldElem::one(&f(2, 1));
        assert!(one.add(&one).is_zero());
    }

    #[test]
    fn f4_generator_squared() {
        let w = FieldElem::generator(&f(2, 2));
        let one = FieldElem::one(&f(2, 2));
        assert_eq!(w.mul(&w), w.add(&one));
    }

    #[test]
    fn inverse_of_one_and_zero() {
        let one = FieldElem::one(&f(5, 2));
        assert_eq!(one.inv().unwrap(), one);
        assert!(FieldElem::zero(&f(5, 2)).inv().is_err());
    }

    #[test]
    fn frobenius_period() {
        for (p, n) in [(2, 3), (3, 2), (2, 4), (5, 2)] {
            let field = f(p, n);
            let g = FieldElem::generator(&field);
            assert_eq!(g.pow(field.order()), g);
            assert_eq!(g.frobenius(n as i64), g);
            assert_eq!(g.frobenius(1).frobenius(-1), g);
        }
    }

    #[test]
    fn compatible_embeddings() {
        // F_4 -> F_16 -> F_256 agrees with F_4 -> F_256.
        let w = FieldElem::generator(&f(2, 2));
        let via = w.lift(&f(2, 4)).lift(&f(2, 8));
        let direct = w.lift(&f(2, 8));
        assert_eq!(via.coords(), direct.coords());
        // Embedding is a ring map.
        let a = FieldElem::generator(&f(2, 3));
        let b = a.mul(&a).add(&FieldElem::one(&f(2, 3)));
        let big = f(2, 6);
        assert_eq!(a.mul(&b).lift(&big), a.lift(&big).mul(&b.lift(&big)));
    }

    #[test]
    fn mixed_degree_arithmetic_and_normalization() {
        let w2 = FieldElem::generator(&f(2, 2));
        let w3 = FieldElem::generator(&f(2, 3));
        let s = w2.add(&w3);
        assert_eq!(s.degree(), 6);
        assert_eq!(s.sub(&w3).normalized().degree(), 2);
        assert_eq!(s.sub(&w3), w2);
        let one6 = FieldElem::one(&f(2, 6));
        assert_eq!(one6.normalized().degree(), 1);
        assert_eq!(format!("{}", w2.add(&FieldElem::one(&f(2, 2)))), "w_2 + 1");
    }
}
