use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use skewval::coeff::GroundConfig;
use skewval::rational::{parse_rat, Rat};

mod commands;
mod error;

use error::Fail;

#[derive(Parser)]
#[command(
    name = "skewval",
    version,
    about = "Twisted polynomials over Hahn series: tropical analysis, solving and logic"
)]
struct Cli {
    /// Frobenius exponent q = p^e
    #[arg(long, global = true, default_value_t = 2)]
    q: u64,
    /// Target precision `a` or `a/b`
    #[arg(long, global = true, default_value = "2", value_parser = parse_prec, allow_hyphen_values = true)]
    prec: Rat,
    /// Maximum number of series terms added per approximation
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    budget: u32,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tropical analysis of an Ore polynomial or of `{(deg,value),..}`
    Trop {
        poly: String,
        op: TropOp,
        /// The point for `eval` and `inverse`
        #[arg(allow_hyphen_values = true)]
        value: Option<String>,
    },
    /// Regular approximate solution of `y.r = z`
    Solve { r: String, z: String },
    /// Stratified roots of `r`
    Kernel { r: String },
    /// Split `x` as a sum of roots of `r` plus a regular remainder
    Decompose { x: String, r: String },
    /// Whether `v(x.r) = v(x).r`
    Regular { x: String, r: String },
    /// Decision procedure and quantifier elimination
    Logic {
        #[command(subcommand)]
        op: LogicOp,
    },
    #[command(flatten)]
    Direct(LogicOp),
}

#[derive(Clone, Copy, ValueEnum)]
enum TropOp {
    Eval,
    Jumps,
    Envelope,
    Inverse,
}

#[derive(Subcommand)]
enum LogicOp {
    /// Truth value of a sentence
    Decide { formula: String },
    /// Eliminate the quantifier of `E x. matrix` or `A x. matrix`
    Qe { formula: String },
    /// Simplify a quantifier-free formula
    Simplify { formula: String },
}

fn parse_prec(s: &str) -> Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("expected a rational `a` or `a/b`, got `{s}`"))
}

pub struct Session {
    pub cfg: GroundConfig,
    pub prec: Rat,
    pub budget: usize,
    pub json: bool,
}

/// Text and JSON renderings of a result, plus a domain failure that should
/// still be reported after the output.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub failure: Option<Fail>,
}

impl Report {
    pub fn ok(text: String, json: serde_json::Value) -> Self {
        Report {
            text,
            json,
            failure: None,
        }
    }
}

fn run(cli: Cli) -> Result<Report, Fail> {
    let cfg = GroundConfig::from_q(cli.q).map_err(|e| Fail::Input(e.to_string()))?;
    let s = Session {
        cfg,
        prec: cli.prec,
        budget: cli.budget as usize,
        json: cli.json,
    };
    match cli.command {
        Command::Trop { poly, op, value } => {
            let op = match op {
                TropOp::Eval => commands::TropOp::Eval(value.ok_or(Fail::Input("eval needs a point".into()))?),
                TropOp::Inverse => commands::TropOp::Inverse(value.ok_or(Fail::Input("inverse needs a point".into()))?),
                _ if value.is_some() => return Err(Fail::Input("unexpected extra argument".into())),
                TropOp::Jumps => commands::TropOp::Jumps,
                TropOp::Envelope => commands::TropOp::Envelope,
            };
            commands::trop(&s, &poly, op)
        }
        Command::Solve { r, z } => commands::solve(&s, &r, &z),
        Command::Kernel { r } => commands::kernel(&s, &r),
        Command::Decompose { x, r } => commands::decompose(&s, &x, &r),
        Command::Regular { x, r } => commands::regular(&s, &x, &r),
        Command::Logic { op } | Command::Direct(op) => match op {
            LogicOp::Decide { formula } => commands::decide(&s, &formula),
            LogicOp::Qe { formula } => commands::qe(&s, &formula),
            LogicOp::Simplify { formula } => commands::simplify(&s, &formula),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let report = match run(cli) {
        Ok(r) => r,
        Err(f) => return f.report(),
    };
    let mut out = std::io::stdout().lock();
    let body = if json {
        serde_json::to_string_pretty(&report.json).expect("serializable") + "\n"
    } else {
        report.text
    };
    // A closed pipe is not worth a panic.
    let _ = out.write_all(body.as_bytes());
    let _ = out.flush();
    match report.failure {
        Some(f) => f.report(),
        None => ExitCode::SUCCESS,
    }
}
