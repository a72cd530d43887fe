//! Text presentations, one statement per line:
//!
//! ```text
//! # M_3(2,1)
//! prime 3
//! gen b order 3
//! gen a order 9
//! comm a b = a^3
//! ```
//!
//! * `prime P` must come first.
//! * `gen NAME order N` declares the next generator; `N` is a power of `P`
//!   greater than 1. Generators are listed in pc order.
//! * `pow NAME = WORD` sets `NAME^N` where `N` is its relative order.
//! * `comm X Y = WORD` sets `[X, Y]`, either orientation.
//! * `conj X Y = WORD` sets `X^Y`.
//!
//! Words use the expression syntax of `mhk_core::words`, e.g. `a^-3*[a, b]`.
//! This is the format printed by `PcPresentation`'s `Display`.

use mhk_core::words::parse_expr;
use mhk_core::{Error, PcBuilder, PcPresentation, Result};

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

pub fn parse_presentation(text: &str) -> Result<PcPresentation> {
    let mut builder: Option<PcBuilder> = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        if head == "prime" {
            if builder.is_some() {
                return Err(err(n, "prime given twice"));
            }
            let p: u64 = rest.parse().map_err(|_| err(n, format!("bad prime '{rest}'")))?;
            builder = Some(PcBuilder::new(p));
            continue;
        }
        let b = builder
            .as_mut()
            .ok_or_else(|| err(n, "the first statement must be 'prime P'"))?;
        match head {
            "gen" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, "order", ord] = parts[..] else {
                    return Err(err(n, "expected 'gen NAME order N'"));
                };
                if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    || !name.starts_with(|c: char| c.is_ascii_alphabetic())
                {
                    return Err(err(n, format!("bad generator name '{name}'")));
                }
                let ord: u64 = ord.parse().map_err(|_| err(n, format!("bad order '{ord}'")))?;
                let exp = prime_power_exponent(ord, b.prime())
                    .ok_or_else(|| err(n, format!("{ord} is not a power of the prime above 1")))?;
                b.gen(name, exp);
            }
            "pow" | "comm" | "conj" => {
                let (lhs, rhs) = rest
                    .split_once('=')
                    .ok_or_else(|| err(n, "missing '='"))?;
                let names: Vec<&str> = lhs.split_whitespace().collect();
                let idx = |s: &str| {
                    b.index_of(s)
                        .ok_or_else(|| err(n, format!("unknown generator '{s}'")))
                };
                let word = parse_expr(rhs.trim())
                    .map_err(|e| err(n, e))?
                    .to_word(&|s| b.index_of(s))
                    .map_err(|e| err(n, e))?;
                match (head, &names[..]) {
                    ("pow", [g]) => {
                        let g = idx(g)?;
                        b.power(g, word);
                    }
                    ("comm", [x, y]) => {
                        let (x, y) = (idx(x)?, idx(y)?);
                        b.comm(x, y, word);
                    }
                    ("conj", [x, y]) => {
                        let (x, y) = (idx(x)?, idx(y)?);
                        b.conj(x, y, word);
                    }
                    _ => return Err(err(n, format!("wrong number of generators for '{head}'"))),
                }
            }
            _ => return Err(err(n, format!("unknown statement '{head}'"))),
        }
    }
    builder
        .ok_or_else(|| Error::Parse("empty presentation".into()))?
        .build()
}

fn prime_power_exponent(n: u64, p: u64) -> Option<u32> {
    if p < 2 || n < p {
        return None;
    }
    let (mut n, mut e) = (n, 0);
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some(e)
}
