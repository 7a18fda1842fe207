//! Finite unions of intervals of `Q`, plus a flag for the top element.

use std::cmp::Ordering;
use std::fmt;

use crate::chain::ChainValue;
use crate::rational::{fmt_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Lower {
    NegInf,
    Closed(Rat),
    Open(Rat),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Upper {
    PosInf,
    Closed(Rat),
    Open(Rat),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Lower,
    pub hi: Upper,
}

fn cmp_lower(a: &Lower, b: &Lower) -> Ordering {
    use Lower::*;
    match (a, b) {
        (NegInf, NegInf) => Ordering::Equal,
        (NegInf, _) => Ordering::Less,
        (_, NegInf) => Ordering::Greater,
        (Closed(x) | Open(x), Closed(y) | Open(y)) => x.cmp(y).then_with(|| {
            let rank = |l: &Lower| matches!(l, Open(_)) as u8;
            rank(a).cmp(&rank(b))
        }),
    }
}

fn cmp_upper(a: &Upper, b: &Upper) -> Ordering {
    use Upper::*;
    match (a, b) {
        (PosInf, PosInf) => Ordering::Equal,
        (PosInf, _) => Ordering::Greater,
        (_, PosInf) => Ordering::Less,
        (Closed(x) | Open(x), Closed(y) | Open(y)) => x.cmp(y).then_with(|| {
            let rank = |u: &Upper| matches!(u, Closed(_)) as u8;
            rank(a).cmp(&rank(b))
        }),
    }
}

impl Interval {
    pub fn new(lo: Lower, hi: Upper) -> Self {
        Interval { lo, hi }
    }

    pub fn point(r: Rat) -> Self {
        Interval::new(Lower::Closed(r.clone()), Upper::Closed(r))
    }

    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Lower::NegInf, _) | (_, Upper::PosInf) => false,
            (Lower::Closed(a), Upper::Closed(b)) => a > b,
            (Lower::Closed(a) | Lower::Open(a), Upper::Closed(b) | Upper::Open(b)) => a >= b,
        }
    }

    pub fn contains(&self, g: &Rat) -> bool {
        let above = match &self.lo {
            Lower::NegInf => true,
            Lower::Closed(a) => a <= g,
            Lower::Open(a) => a < g,
        };
        let below = match &self.hi {
            Upper::PosInf => true,
            Upper::Closed(b) => g <= b,
            Upper::Open(b) => g < b,
        };
        above && below
    }

    /// Whether `self ∪ next` is an interval, given `self.lo <= next.lo`.
    fn reaches(&self, next: &Interval) -> bool {
        match (&self.hi, &next.lo) {
            (Upper::PosInf, _) | (_, Lower::NegInf) => true,
            (Upper::Closed(x) | Upper::Open(x), Lower::Closed(y) | Lower::Open(y)) => match y.cmp(x) {
                Ordering::Less => true,
                Ordering::Equal => matches!(self.hi, Upper::Closed(_)) || matches!(next.lo, Lower::Closed(_)),
                Ordering::Greater => false,
            },
        }
    }

    pub fn is_point(&self) -> Option<&Rat> {
        match (&self.lo, &self.hi) {
            (Lower::Closed(a), Upper::Closed(b)) if a == b => Some(a),
            _ => None,
        }
    }
}

/// Canonical form: nonempty intervals, sorted, pairwise disjoint and not
/// mergeable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    parts: Vec<Interval>,
    inf: bool,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet {
            parts: Vec::new(),
            inf: false,
        }
    }

    /// All of `Q ∪ {inf}`.
    pub fn all() -> Self {
        IntervalSet {
            parts: vec![Interval::new(Lower::NegInf, Upper::PosInf)],
            inf: true,
        }
    }

    pub fn rationals() -> Self {
        IntervalSet {
            parts: vec![Interval::new(Lower::NegInf, Upper::PosInf)],
            inf: false,
        }
    }

    pub fn top() -> Self {
        IntervalSet {
            parts: Vec::new(),
            inf: true,
        }
    }

    pub fn of_bool(b: bool) -> Self {
        if b {
            Self::all()
        } else {
            Self::empty()
        }
    }

    pub fn new(parts: Vec<Interval>, inf: bool) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().filter(|i| !i.is_empty()).collect();
        parts.sort_by(|a, b| cmp_lower(&a.lo, &b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for i in parts {
            match out.last_mut() {
                Some(last) if last.reaches(&i) => {
                    if cmp_upper(&i.hi, &last.hi) == Ordering::Greater {
                        last.hi = i.hi;
                    }
                }
                _ => out.push(i),
            }
        }
        IntervalSet { parts: out, inf }
    }

    pub fn interval(lo: Lower, hi: Upper) -> Self {
        Self::new(vec![Interval::new(lo, hi)], false)
    }

    pub fn point(r: Rat) -> Self {
        Self::new(vec![Interval::point(r)], false)
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn has_inf(&self) -> bool {
        self.inf
    }

    pub fn with_inf(mut self, inf: bool) -> Self {
        self.inf = inf;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty() && !self.inf
    }

    pub fn is_all(&self) -> bool {
        *self == Self::all()
    }

    pub fn contains(&self, v: &ChainValue) -> bool {
        match v {
            ChainValue::Inf => self.inf,
            ChainValue::Fin(g) => self.parts.iter().any(|i| i.contains(g)),
        }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Self::new(parts, self.inf || other.inf)
    }

    /// Complement within `Q ∪ {inf}`.
    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = Some(Lower::NegInf);
        for i in &self.parts {
            let gap_hi = match &i.lo {
                Lower::NegInf => None,
                Lower::Closed(a) => Some(Upper::Open(a.clone())),
                Lower::Open(a) => Some(Upper::Closed(a.clone())),
            };
            if let (Some(lo), Some(hi)) = (cursor.take(), gap_hi) {
                out.push(Interval::new(lo, hi));
            }
            cursor = match &i.hi {
                Upper::PosInf => None,
                Upper::Closed(b) => Some(Lower::Open(b.clone())),
                Upper::Open(b) => Some(Lower::Closed(b.clone())),
            };
        }
        if let Some(lo) = cursor {
            out.push(Interval::new(lo, Upper::PosInf));
        }
        Self::new(out, !self.inf)
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        self.complement().union(&other.complement()).complement()
    }

    pub fn left_unbounded(&self) -> bool {
        self.parts.first().is_some_and(|i| i.lo == Lower::NegInf)
    }

    /// `{g in Q : g + e in self for all small e > 0}`.
    pub fn right_limits(&self) -> IntervalSet {
        let parts = self
            .parts
            .iter()
            .map(|i| {
                let lo = match &i.lo {
                    Lower::NegInf => Lower::NegInf,
                    Lower::Closed(a) | Lower::Open(a) => Lower::Closed(a.clone()),
                };
                let hi = match &i.hi {
                    Upper::PosInf => Upper::PosInf,
                    Upper::Closed(b) | Upper::Open(b) => Upper::Open(b.clone()),
                };
                Interval::new(lo, hi)
            })
            .collect();
        Self::new(parts, false)
    }

    /// Finite endpoints, ascending and deduplicated.
    pub fn endpoints(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = Vec::new();
        for i in &self.parts {
            if let Lower::Closed(a) | Lower::Open(a) = &i.lo {
                out.push(a.clone());
            }
            if let Upper::Closed(b) | Upper::Open(b) = &i.hi {
                out.push(b.clone());
            }
        }
        out.dedup();
        out
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(a) = self.is_point() {
            return write!(f, "{{{}}}", fmt_rat(a));
        }
        match &self.lo {
            Lower::NegInf => f.write_str("(-inf")?,
            Lower::Closed(a) => write!(f, "[{}", fmt_rat(a))?,
            Lower::Open(a) => write!(f, "({}", fmt_rat(a))?,
        }
        match &self.hi {
            Upper::PosInf => f.write_str(", inf)"),
            Upper::Closed(b) => write!(f, ", {}]", fmt_rat(b)),
            Upper::Open(b) => write!(f, ", {})", fmt_rat(b)),
        }
    }
}

impl fmt::Display for IntervalSet {
    /// e.g. `(-inf, 0) ∪ {inf}`; `∅` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        if self.inf {
            parts.push("{inf}".into());
        }
        if parts.is_empty() {
            return f.write_str("∅");
        }
        f.write_str(&parts.join(" ∪ "))
    }
}
