//! Strictly increasing piecewise-affine bijections `Q -> Q` whose pieces
//! are `g -> q^k g + c` with `k` an integer.

use std::cmp::Ordering;

use num_traits::Zero;

use super::interval::{Interval, IntervalSet, Lower, Upper};
use super::Cmp;
use crate::chain::TropPoly;
use crate::rational::{int, pow_q, rat, Rat};

/// `g -> q^k g + c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub k: i32,
    pub c: Rat,
}

pub(crate) fn q_pow(q: u64, k: i32) -> Rat {
    if k >= 0 {
        pow_q(q, k as u32)
    } else {
        pow_q(q, (-k) as u32).recip()
    }
}

impl Affine {
    pub fn identity() -> Self {
        Affine { k: 0, c: Rat::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.k == 0 && self.c.is_zero()
    }

    pub fn apply(&self, q: u64, g: &Rat) -> Rat {
        q_pow(q, self.k) * g + &self.c
    }

    /// `other` after `self`.
    pub fn then(&self, q: u64, other: &Affine) -> Affine {
        Affine {
            k: self.k + other.k,
            c: q_pow(q, other.k) * &self.c + &other.c,
        }
    }

    pub fn inverse(&self, q: u64) -> Affine {
        Affine {
            k: -self.k,
            c: -(&self.c * q_pow(q, -self.k)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlMap {
    q: u64,
    /// Ascending; piece `i` covers `[breaks[i-1], breaks[i]]`.
    breaks: Vec<Rat>,
    pieces: Vec<Affine>,
}

impl PlMap {
    pub fn identity(q: u64) -> Self {
        Self::affine(q, Affine::identity())
    }

    pub fn affine(q: u64, a: Affine) -> Self {
        PlMap {
            q,
            breaks: Vec::new(),
            pieces: vec![a],
        }
    }

    pub fn from_trop(r: &TropPoly) -> Self {
        let mut breaks = Vec::new();
        let mut pieces = Vec::new();
        for p in r.envelope().pieces {
            if p.lo.is_some() && p.lo == p.hi {
                continue;
            }
            if let Some(lo) = p.lo {
                breaks.push(lo);
            }
            pieces.push(Affine {
                k: p.degree as i32,
                c: r.value(p.degree).unwrap().clone(),
            });
        }
        PlMap {
            q: r.q(),
            breaks,
            pieces,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn breaks(&self) -> &[Rat] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Affine] {
        &self.pieces
    }

    fn piece_index(&self, g: &Rat) -> usize {
        self.breaks.partition_point(|b| b < g)
    }

    pub fn eval(&self, g: &Rat) -> Rat {
        self.pieces[self.piece_index(g)].apply(self.q, g)
    }

    /// A point strictly inside each segment between consecutive breaks.
    fn samples(breaks: &[Rat]) -> Vec<Rat> {
        if breaks.is_empty() {
            return vec![Rat::zero()];
        }
        let mut out = vec![&breaks[0] - int(1)];
        for w in breaks.windows(2) {
            out.push((&w[0] + &w[1]) * rat(1, 2));
        }
        out.push(breaks.last().unwrap() + int(1));
        out
    }

    fn simplified(q: u64, mut breaks: Vec<Rat>, mut pieces: Vec<Affine>) -> PlMap {
        let mut i = 0;
        while i + 1 < pieces.len() {
            if pieces[i] == pieces[i + 1] {
                pieces.remove(i + 1);
                breaks.remove(i);
            } else {
                i += 1;
            }
        }
        PlMap { q, breaks, pieces }
    }

    /// `other` after `self`.
    pub fn then(&self, other: &PlMap) -> PlMap {
        let inv = self.inverse();
        let mut breaks: Vec<Rat> = self.breaks.clone();
        breaks.extend(other.breaks.iter().map(|b| inv.eval(b)));
        breaks.sort();
        breaks.dedup();
        let pieces = Self::samples(&breaks)
            .iter()
            .map(|s| {
                let a = &self.pieces[self.piece_index(s)];
                let b = &other.pieces[other.piece_index(&a.apply(self.q, s))];
                a.then(self.q, b)
            })
            .collect();
        Self::simplified(self.q, breaks, pieces)
    }

    pub fn inverse(&self) -> PlMap {
        PlMap {
            q: self.q,
            breaks: self.breaks.iter().map(|b| self.eval(b)).collect(),
            pieces: self.pieces.iter().map(|a| a.inverse(self.q)).collect(),
        }
    }

    fn segment(breaks: &[Rat], i: usize) -> Interval {
        let lo = if i == 0 {
            Lower::NegInf
        } else {
            Lower::Closed(breaks[i - 1].clone())
        };
        let hi = if i == breaks.len() {
            Upper::PosInf
        } else {
            Upper::Closed(breaks[i].clone())
        };
        Interval::new(lo, hi)
    }

    /// `{g in Q : self(g) cmp other(g)}`.
    pub fn compare_set(&self, cmp: Cmp, other: &PlMap) -> IntervalSet {
        let mut breaks: Vec<Rat> = self.breaks.iter().chain(other.breaks.iter()).cloned().collect();
        breaks.sort();
        breaks.dedup();
        let mut parts = Vec::new();
        for (i, s) in Self::samples(&breaks).iter().enumerate() {
            let a = &self.pieces[self.piece_index(s)];
            let b = &other.pieces[other.piece_index(s)];
            // d(g) = (sa - sb) g + (ca - cb) on this segment.
            let slope = q_pow(self.q, a.k) - q_pow(self.q, b.k);
            let off = &a.c - &b.c;
            let seg = IntervalSet::new(vec![Self::segment(&breaks, i)], false);
            let sol = if slope.is_zero() {
                IntervalSet::of_bool(cmp.holds(off.cmp(&Rat::zero()))).with_inf(false)
            } else {
                let root = -&off / &slope;
                let (below, above) = if slope > Rat::zero() {
                    (Ordering::Less, Ordering::Greater)
                } else {
                    (Ordering::Greater, Ordering::Less)
                };
                // Sign of d left of the root is `below`, right is `above`.
                let left = IntervalSet::interval(Lower::NegInf, Upper::Open(root.clone()));
                let right = IntervalSet::interval(Lower::Open(root.clone()), Upper::PosInf);
                let mut s = IntervalSet::empty();
                if cmp.holds(below) {
                    s = s.union(&left);
                }
                if cmp.holds(Ordering::Equal) {
                    s = s.union(&IntervalSet::point(root));
                }
                if cmp.holds(above) {
                    s = s.union(&right);
                }
                s
            };
            parts.extend(sol.intersect(&seg).parts().iter().cloned());
        }
        IntervalSet::new(parts, false)
    }

    /// `{g in Q : self(g) cmp v}`.
    pub fn level_set(&self, cmp: Cmp, v: &Rat) -> IntervalSet {
        let b = self.inverse().eval(v);
        let mut s = IntervalSet::empty();
        if cmp.holds(Ordering::Less) {
            s = s.union(&IntervalSet::interval(Lower::NegInf, Upper::Open(b.clone())));
        }
        if cmp.holds(Ordering::Equal) {
            s = s.union(&IntervalSet::point(b.clone()));
        }
        if cmp.holds(Ordering::Greater) {
            s = s.union(&IntervalSet::interval(Lower::Open(b), Upper::PosInf));
        }
        s
    }
}
