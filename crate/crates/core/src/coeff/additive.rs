//! Additive equations `sum_i a_i c^(q^i) = b` over finite-field towers.
//!
//! The left side is F_q-linear in `c`, so in any F_{p^N} it is a linear
//! map of F_p-vector spaces and the equation is solved by Gaussian
//! elimination. When no solution exists in the field generated by the
//! data, successively larger extensions F_{q^(m k)} are tried.

use std::sync::Arc;

use num_integer::Integer;

use super::field::{finite_field, FieldElem, FiniteField, MAX_FIELD_DEGREE};
use super::linalg::{row_reduce, FpMatrix};
use super::{CoeffError, GroundConfig};

/// Solution set of an additive equation inside one finite field.
#[derive(Clone, Debug)]
pub struct AdditiveSolution {
    field: Arc<FiniteField>,
    tower_degree: u32,
    particular: FieldElem,
    /// F_p-basis of the homogeneous solutions, fully row reduced.
    kernel: Vec<FieldElem>,
}

pub fn eval_additive(cfg: &GroundConfig, coeffs: &[(u32, FieldElem)], c: &FieldElem) -> FieldElem {
    let mut acc = FieldElem::zero(c.field());
    for (i, a) in coeffs {
        acc = acc.add(&a.mul(&c.frobenius(cfg.e() as i64 * *i as i64)));
    }
    acc
}

fn base_degree(cfg: &GroundConfig, coeffs: &[(u32, FieldElem)], extra: Option<&FieldElem>) -> u32 {
    coeffs
        .iter()
        .map(|(_, a)| a.degree())
        .chain(extra.map(FieldElem::degree))
        .fold(cfg.e(), |acc, d| acc.lcm(&d))
}

fn extension(p: u32, n: u32) -> Result<Arc<FiniteField>, CoeffError> {
    if n > MAX_FIELD_DEGREE {
        return Err(CoeffError::ExtensionLimit {
            max_degree: MAX_FIELD_DEGREE,
        });
    }
    finite_field(p, n).map_err(|e| match e {
        CoeffError::FieldTooLarge { .. } => CoeffError::ExtensionLimit {
            max_degree: MAX_FIELD_DEGREE,
        },
        other => other,
    })
}

/// Matrix of `c -> sum a_i c^(q^i)` on the power basis of `field`.
fn linear_map(cfg: &GroundConfig, coeffs: &[(u32, FieldElem)], field: &Arc<FiniteField>) -> FpMatrix {
    let n = field.degree() as usize;
    let lifted: Vec<(u32, FieldElem)> = coeffs.iter().map(|(i, a)| (*i, a.lift(field))).collect();
    let columns: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let mut coords = vec![0u32; n];
            coords[j] = 1;
            let basis = FieldElem::from_coords(field, &coords);
            eval_additive(cfg, &lifted, &basis).coords().to_vec()
        })
        .collect();
    FpMatrix::from_columns(field.characteristic(), n, &columns)
}

fn nonzero_terms(coeffs: &[(u32, FieldElem)]) -> Result<Vec<(u32, FieldElem)>, CoeffError> {
    let terms: Vec<(u32, FieldElem)> = coeffs.iter().filter(|(_, a)| !a.is_zero()).cloned().collect();
    if terms.is_empty() {
        return Err(CoeffError::InvalidData(
            "additive equation with no nonzero coefficient".into(),
        ));
    }
    Ok(terms)
}

fn build(
    cfg: &GroundConfig,
    field: &Arc<FiniteField>,
    particular: Vec<u32>,
    kernel: Vec<Vec<u32>>,
) -> AdditiveSolution {
    let p = field.characteristic();
    let kernel = row_reduce(p, &kernel);
    let mut x = particular;
    for row in &kernel {
        let pivot = row.iter().position(|&c| c != 0).unwrap();
        let f = x[pivot] as u64;
        if f != 0 {
            for (xi, &ri) in x.iter_mut().zip(row) {
                *xi = ((*xi as u64 + (p as u64 - f) * ri as u64) % p as u64) as u32;
            }
        }
    }
    AdditiveSolution {
        field: field.clone(),
        tower_degree: cfg.tower_degree_of(field.degree()),
        particular: FieldElem::from_coords(field, &x),
        kernel: kernel.iter().map(|k| FieldElem::from_coords(field, k)).collect(),
    }
}

/// Solves `sum a_i c^(q^i) = target` in the smallest F_{q^m'} (m' a
/// multiple of the degree generated by the data) where a solution exists.
pub fn additive_solve(
    cfg: &GroundConfig,
    coeffs: &[(u32, FieldElem)],
    target: &FieldElem,
) -> Result<AdditiveSolution, CoeffError> {
    let terms = nonzero_terms(coeffs)?;
    let n0 = base_degree(cfg, &terms, Some(target));
    let mut k = 1;
    loop {
        let field = extension(cfg.p(), n0 * k)?;
        let map = linear_map(cfg, &terms, &field);
        if let Some(x) = map.solve(target.lift(&field).coords()) {
            return Ok(build(cfg, &field, x, map.nullspace()));
        }
        k += 1;
    }
}

/// Degree over F_p of the splitting field of `sum a_i c^(q^i)`: the least
/// `m` with `c^(q^m) = c` modulo the equation, found by iterating the
/// q-power on residues `sum_{i < d} b_i c^(q^(i + lo))`.
fn splitting_degree(cfg: &GroundConfig, terms: &[(u32, FieldElem)], n0: u32) -> Result<u32, CoeffError> {
    let field = extension(cfg.p(), n0)?;
    let lo = terms.iter().map(|(i, _)| *i).min().unwrap();
    let d = (terms.iter().map(|(i, _)| *i).max().unwrap() - lo) as usize;
    if d == 0 {
        return Ok(n0);
    }
    let zero = FieldElem::zero(&field);
    let mut a = vec![zero.clone(); d + 1];
    for (i, c) in terms {
        a[(*i - lo) as usize] = c.lift(&field);
    }
    let lead = a[d].inv()?;
    let reduce: Vec<FieldElem> = a[..d].iter().map(|c| c.mul(&lead).neg()).collect();
    let mut b = vec![zero.clone(); d];
    b[0] = FieldElem::one(&field);
    let start = b.clone();
    let e = cfg.e();
    for m in 1u32.. {
        if e * m > MAX_SPLITTING_DEGREE {
            break;
        }
        let top = b[d - 1].frobenius(e as i64);
        let mut next = vec![zero.clone(); d];
        for i in 0..d - 1 {
            next[i + 1] = b[i].frobenius(e as i64);
        }
        for (n, r) in next.iter_mut().zip(&reduce) {
            *n = n.add(&top.mul(r));
        }
        b = next;
        if b == start {
            return Ok(n0.lcm(&(e * m)));
        }
    }
    Err(CoeffError::ExtensionLimit {
        max_degree: MAX_FIELD_DEGREE,
    })
}

/// Bound on the q-power iteration in `splitting_degree`.
const MAX_SPLITTING_DEGREE: u32 = 1 << 12;

/// All roots of `sum a_i c^(q^i) = 0` over the algebraic closure, in the
/// splitting field, where the root space has F_q-dimension `max i - min i`.
pub fn additive_kernel(cfg: &GroundConfig, coeffs: &[(u32, FieldElem)]) -> Result<AdditiveSolution, CoeffError> {
    let terms = nonzero_terms(coeffs)?;
    let lo = terms.iter().map(|(i, _)| *i).min().unwrap();
    let hi = terms.iter().map(|(i, _)| *i).max().unwrap();
    let full = (cfg.e() * (hi - lo)) as usize;
    let n0 = base_degree(cfg, &terms, None);
    let field = extension(cfg.p(), splitting_degree(cfg, &terms, n0)?)?;
    let kernel = linear_map(cfg, &terms, &field).nullspace();
    debug_assert_eq!(kernel.len(), full);
    Ok(build(cfg, &field, vec![0; field.degree() as usize], kernel))
}

impl AdditiveSolution {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Degree of the field used, over F_q.
    pub fn tower_degree(&self) -> u32 {
        self.tower_degree
    }

    /// The lexicographically least solution.
    pub fn least(&self) -> &FieldElem {
        &self.particular
    }

    pub fn kernel_fp_basis(&self) -> &[FieldElem] {
        &self.kernel
    }

    /// Number of solutions in the field, `p^dim`.
    pub fn count(&self) -> u128 {
        (self.field.characteristic() as u128).pow(self.kernel.len() as u32)
    }

    /// Every solution, in lexicographic coordinate order.
    pub fn solutions(&self) -> Vec<FieldElem> {
        let p = self.field.characteristic();
        let mut out = vec![self.particular.clone()];
        for b in &self.kernel {
            let mut next = Vec::with_capacity(out.len() * p as usize);
            for x in &out {
                for k in 0..p {
                    next.push(x.add(&b.scale(k)));
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.cmp_coords(b));
        out
    }

    /// An F_q-basis of the homogeneous solutions (F_q-stable since the
    /// map is F_q-linear).
    pub fn fq_kernel_basis(&self, cfg: &GroundConfig) -> Vec<FieldElem> {
        let p = self.field.characteristic();
        let gen = FieldElem::generator(&cfg.base_field()).lift(&self.field);
        let mut span: Vec<Vec<u32>> = Vec::new();
        let mut basis = Vec::new();
        for v in &self.kernel {
            let mut trial = span.clone();
            trial.push(v.coords().to_vec());
            if row_reduce(p, &trial).len() == span.len() {
                continue;
            }
            basis.push(v.clone());
            let mut mult = v.clone();
            for _ in 0..cfg.e() {
                span.push(mult.coords().to_vec());
                mult = mult.mul(&gen);
            }
            span = row_reduce(p, &span);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(q: u64) -> GroundConfig {
        GroundConfig::from_q(q).unwrap()
    }

    #[test]
    fn artin_schreier_roots_of_zero() {
        let c = cfg(2);
        let one = c.elem(1);
        let sol = additive_solve(&c, &[(1, one.clone()), (0, one.clone())], &c.elem(0)).unwrap();
        let all = sol.solutions();
        assert_eq!(all, vec![c.elem(0), c.elem(1)]);
        assert_eq!(sol.tower_degree(), 1);
    }

    #[test]
    fn frobenius_is_bijective() {
        let c = cfg(2);
        let sol = additive_solve(&c, &[(1, c.elem(1))], &c.elem(1)).unwrap();
        assert_eq!(sol.solutions(), vec![c.elem(1)]);
    }

    #[test]
    fn artin_schreier_needs_f4() {
        let c = cfg(2);
        let one = c.elem(1);
        let sol = additive_solve(&c, &[(1, one.clone()), (0, one.clone())], &one).unwrap();
        assert_eq!(sol.tower_degree(), 2);
        // Oracle: brute-force enumeration of F_4.
        let f4 = finite_field(2, 2).unwrap();
        let mut expected: Vec<FieldElem> = (0..4u32)
            .map(|k| FieldElem::from_coords(&f4, &[k & 1, k >> 1]))
            .filter(|x| x.mul(x).add(x) == one)
            .collect();
        expected.sort_by(|a, b| a.cmp_coords(b));
        assert_eq!(sol.solutions(), expected);
        let w = FieldElem::generator(&f4);
        assert_eq!(sol.least(), &w);
    }

    #[test]
    fn splitting_field_of_kernel() {
        // c^4 + c^2 + c = c (c^3 + c + 1): roots live in F_8.
        let c = cfg(2);
        let one = c.elem(1);
        let ker = additive_kernel(&c, &[(2, one.clone()), (1, one.clone()), (0, one)]).unwrap();
        assert_eq!(ker.tower_degree(), 3);
        assert_eq!(ker.count(), 4);
        assert_eq!(ker.fq_kernel_basis(&c).len(), 2);
    }

    #[test]
    fn fq_basis_over_f4() {
        // c^4 + c = 0 over F_4: the roots are exactly F_4, one-dimensional over F_4.
        let c = cfg(4);
        let one = c.elem(1);
        let ker = additive_kernel(&c, &[(1, one.clone()), (0, one)]).unwrap();
        assert_eq!(ker.tower_degree(), 1);
        assert_eq!(ker.count(), 4);
        assert_eq!(ker.fq_kernel_basis(&c).len(), 1);
    }
}
