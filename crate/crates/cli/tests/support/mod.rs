//! Golden-file runner shared by the test targets.
//!
//! `golden/NAME.args` holds the expected exit code on its first line and
//! one argument per following line; `NAME.out` and `NAME.err` hold the
//! expected stdout and stderr. Set `SKEWVAL_BLESS=1` to rewrite them.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub name: String,
    pub code: i32,
    pub args: Vec<String>,
    dir: PathBuf,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

pub fn cases() -> Vec<Case> {
    let dir = golden_dir();
    let mut names: Vec<String> = fs::read_dir(&dir)
        .expect("golden directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "args").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let text = fs::read_to_string(dir.join(format!("{name}.args"))).unwrap();
            let mut lines = text.lines();
            let code = lines
                .next()
                .and_then(|l| l.strip_prefix("exit "))
                .and_then(|c| c.parse().ok());
            Case {
                code: code.unwrap_or_else(|| panic!("{name}.args must start with `exit N`")),
                args: lines.map(str::to_string).collect(),
                name,
                dir: dir.clone(),
            }
        })
        .collect()
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[String]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_skewval"))
        .args(args)
        .output()
        .expect("spawn skewval");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

impl Case {
    fn file(&self, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{ext}", self.name))
    }

    /// `Err` describes the first mismatch.
    pub fn check(&self) -> Result<(), String> {
        let got = run(&self.args);
        if std::env::var_os("SKEWVAL_BLESS").is_some() {
            let args: Vec<String> = std::iter::once(format!("exit {}", got.code))
                .chain(self.args.clone())
                .collect();
            fs::write(self.file("args"), args.join("\n") + "\n").unwrap();
            fs::write(self.file("out"), &got.stdout).unwrap();
            fs::write(self.file("err"), &got.stderr).unwrap();
            return Ok(());
        }
        let want_out = fs::read_to_string(self.file("out")).map_err(|e| format!("{}: {e}", self.name))?;
        let want_err = fs::read_to_string(self.file("err")).unwrap_or_default();
        if got.code != self.code {
            return Err(format!(
                "{}: exit {} (want {})\n{}",
                self.name, got.code, self.code, got.stderr
            ));
        }
        if got.stdout != want_out {
            return Err(format!(
                "{}: stdout differs\n--- want\n{want_out}--- got\n{}",
                self.name, got.stdout
            ));
        }
        if got.stderr != want_err {
            return Err(format!(
                "{}: stderr differs\n--- want\n{want_err}--- got\n{}",
                self.name, got.stderr
            ));
        }
        Ok(())
    }

    /// The schema for a `--json` case, named after its subcommand.
    pub fn schema(&self) -> Option<PathBuf> {
        if !self.args.iter().any(|a| a == "--json") || self.code != 0 {
            return None;
        }
        let sub = self.args.iter().find(|a| SUBCOMMANDS.contains(&a.as_str()))?;
        let file = match sub.as_str() {
            "decide" | "qe" | "simplify" | "logic" => "logic",
            s => s,
        };
        Some(schema_dir().join(format!("{file}.schema.json")))
    }
}

const SUBCOMMANDS: [&str; 9] = [
    "trop",
    "solve",
    "kernel",
    "decompose",
    "regular",
    "logic",
    "decide",
    "qe",
    "simplify",
];
