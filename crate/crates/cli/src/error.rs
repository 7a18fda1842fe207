use std::process::ExitCode;

use skewval::chain::ChainError;
use skewval::coeff::CoeffError;
use skewval::logic::LogicError;
use skewval::ore::OreError;
use skewval::syntax::ParseError;
use skewval::vmod::VmodError;

/// `Input` exits with 2, `Domain` with 3.
#[derive(Debug)]
pub enum Fail {
    Input(String),
    Domain(String),
}

impl Fail {
    pub fn report(&self) -> ExitCode {
        let (msg, code) = match self {
            Fail::Input(m) => (m, 2),
            Fail::Domain(m) => (m, 3),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

impl From<CoeffError> for Fail {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::Parse(_) | CoeffError::NotPrime(_) | CoeffError::NotPrimePower(_) => Fail::Input(e.to_string()),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

impl From<OreError> for Fail {
    fn from(e: OreError) -> Self {
        match e {
            OreError::Coeff(c) => c.into(),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

impl From<ChainError> for Fail {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::Parse(_) | ChainError::Empty | ChainError::DuplicateDegree(_) => Fail::Input(e.to_string()),
            ChainError::Ore(o) => o.into(),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

impl From<VmodError> for Fail {
    fn from(e: VmodError) -> Self {
        match e {
            VmodError::Coeff(c) => c.into(),
            VmodError::Ore(o) => o.into(),
            VmodError::Chain(c) => c.into(),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

impl From<LogicError> for Fail {
    fn from(e: LogicError) -> Self {
        match e {
            LogicError::Parse(_) => Fail::Input(e.to_string()),
            _ => Fail::Domain(e.to_string()),
        }
    }
}

impl From<ParseError> for Fail {
    fn from(e: ParseError) -> Self {
        Fail::Input(e.to_string())
    }
}
