//! Tokenizer and error type shared by the text front ends.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based index of the offending token (one past the end at EOF).
    pub token: usize,
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at token {} (offset {}): {}",
            self.token, self.offset, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Ident(s) => write!(f, "{s}"),
            Tok::Sym(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub offset: usize,
}

const SYMBOLS: [&str; 22] = [
    "<=", ">=", "!=", "+", "-", "*", "^", "(", ")", "{", "}", ",", "/", ".", "<", "=", ">", "&", "|", "!", "~", ";",
];

pub fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Int(input[start..i].parse().unwrap()),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(input[start..i].to_string()),
                offset: start,
            });
            continue;
        }
        let rest = &input[i..];
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Token {
                    tok: Tok::Sym(s),
                    offset: i,
                });
                i += s.len();
            }
            None => {
                return Err(ParseError {
                    token: out.len() + 1,
                    offset: i,
                    message: format!("unexpected character '{}'", rest.chars().next().unwrap()),
                })
            }
        }
    }
    Ok(out)
}

/// Cursor over a token stream with position-aware errors.
pub struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    len: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], input_len: usize) -> Self {
        Cursor {
            toks,
            pos: 0,
            len: input_len,
        }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    pub fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{s}'")))
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let message = message.into();
        let offset = self.toks.get(self.pos).map_or(self.len, |t| t.offset);
        let found = match self.peek() {
            Some(t) => format!(", found '{t}'"),
            None => ", found end of input".to_string(),
        };
        ParseError {
            token: self.pos + 1,
            offset,
            message: message + &found,
        }
    }

    pub fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == name)
    }

    pub fn natural(&mut self) -> Result<BigInt, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected a natural number")),
        }
    }

    /// `['-'] int ['/' nat]`
    pub fn rational(&mut self) -> Result<Rat, ParseError> {
        let neg = self.eat_sym("-");
        let n = self.natural()?;
        let mut r = Rat::from_integer(n);
        if self.eat_sym("/") {
            let d = self.natural()?;
            if d.is_zero() {
                return Err(self.error("zero denominator"));
            }
            r /= Rat::from_integer(d);
        }
        Ok(if neg { -r } else { r })
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}
