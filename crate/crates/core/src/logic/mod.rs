//! First-order logic of the valuation chain `Q ∪ {inf}` with the tropical
//! actions: parsing, evaluation, decision and quantifier elimination.

mod ast;
mod interval;
mod json;
mod plmap;
mod qe;
mod semantics;
mod simplify;

pub use ast::{parse, parse_term, Base, Cmp, Formula, Step, Term};
pub use interval::{Interval, IntervalSet, Lower, Upper};
pub use json::{formula_json, term_json};
pub use plmap::{Affine, PlMap};
pub use qe::{eliminate, qe_exists};
pub use semantics::{atom_solution_set, decide, eval, solution_set, Env};
pub use simplify::simplify;

use crate::syntax::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum LogicError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("sentence has free variables: {}", .0.join(", "))]
    FreeVariables(Vec<String>),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("not an atom: {0}")]
    NotAnAtom(String),
}
