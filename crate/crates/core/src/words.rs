//! Group-word expressions such as `a1^-3*[a3^3, b]*c^b`.
//!
//! ```text
//! expr := term ('*' term)*
//! term := atom ('^' exp)*
//! exp  := ['-'] INT | '(' ['-'] INT ')' | NAME        (NAME conjugates)
//! atom := '1' | NAME | '[' expr ',' expr ']' | '(' expr ')'
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::pc::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    One,
    Gen(String),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, i64),
    /// `x^y = y^{-1} x y`
    Conj(Box<Expr>, Box<Expr>),
    /// `[x, y] = x^{-1} y^{-1} x y`
    Comm(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::One => write!(f, "1"),
            Expr::Gen(n) => write!(f, "{n}"),
            Expr::Prod(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            Expr::Pow(e, k) => match **e {
                Expr::Gen(_) | Expr::Comm(..) => write!(f, "{e}^{k}"),
                _ => write!(f, "({e})^{k}"),
            },
            Expr::Conj(x, y) => write!(f, "{x}^{y}"),
            Expr::Comm(x, y) => write!(f, "[{x}, {y}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Int(
                t.parse()
                    .map_err(|_| Error::Parse(format!("integer {t} out of range")))?,
            ));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Name(cs[st..i].iter().collect()));
        } else if "*^[](),-=".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.eat('*') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Prod(terms)
        })
    }

    fn signed_int(&mut self) -> Result<Option<i64>> {
        let neg = self.eat('-');
        match self.peek() {
            Some(Tok::Int(k)) => {
                let k = *k;
                self.pos += 1;
                Ok(Some(if neg { -k } else { k }))
            }
            _ if neg => Err(Error::Parse("expected integer after '-'".into())),
            _ => Ok(None),
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        while self.eat('^') {
            if let Some(k) = self.signed_int()? {
                e = Expr::Pow(Box::new(e), k);
                continue;
            }
            if self.eat('(') {
                let k = self
                    .signed_int()?
                    .ok_or_else(|| Error::Parse("expected integer exponent".into()))?;
                self.expect(')')?;
                e = Expr::Pow(Box::new(e), k);
                continue;
            }
            match self.peek().cloned() {
                Some(Tok::Name(n)) => {
                    self.pos += 1;
                    e = Expr::Conj(Box::new(e), Box::new(Expr::Gen(n)));
                }
                _ => return Err(Error::Parse("expected exponent after '^'".into())),
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Ok(Expr::One)
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                Ok(Expr::Gen(n))
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(',')?;
                let y = self.expr()?;
                self.expect(']')?;
                Ok(Expr::Comm(Box::new(x), Box::new(y)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(')')?;
                Ok(x)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "trailing input at token {:?}",
                self.toks[self.pos]
            )))
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.done()?;
    Ok(e)
}

/// `lhs = rhs`.
pub fn parse_relation(s: &str) -> Result<(Expr, Expr)> {
    let (l, r) = s
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("relation '{s}' has no '='")))?;
    Ok((parse_expr(l)?, parse_expr(r)?))
}

impl Expr {
    /// Free-group word over generator indices.
    pub fn to_word(&self, index: &dyn Fn(&str) -> Option<usize>) -> Result<Word> {
        let inv = |w: Word| -> Word { w.into_iter().rev().map(|(g, e)| (g, -e)).collect() };
        Ok(match self {
            Expr::One => Vec::new(),
            Expr::Gen(n) => {
                vec![(index(n).ok_or_else(|| Error::Parse(format!("unknown generator {n}")))?, 1)]
            }
            Expr::Prod(v) => {
                let mut w = Vec::new();
                for e in v {
                    w.extend(e.to_word(index)?);
                }
                w
            }
            Expr::Pow(e, k) => {
                if let Expr::Gen(n) = &**e {
                    let g = index(n).ok_or_else(|| Error::Parse(format!("unknown generator {n}")))?;
                    vec![(g, *k)]
                } else {
                    let base = e.to_word(index)?;
                    let base = if *k < 0 { inv(base) } else { base };
                    let mut w = Vec::new();
                    for _ in 0..k.unsigned_abs() {
                        w.extend(base.iter().copied());
                    }
                    w
                }
            }
            Expr::Conj(x, y) => {
                let (x, y) = (x.to_word(index)?, y.to_word(index)?);
                let mut w = inv(y.clone());
                w.extend(x);
                w.extend(y);
                w
            }
            Expr::Comm(x, y) => {
                let (x, y) = (x.to_word(index)?, y.to_word(index)?);
                let mut w = inv(x.clone());
                w.extend(inv(y.clone()));
                w.extend(x);
                w.extend(y);
                w
            }
        })
    }

    /// Value in `g`, with generator names resolved by `lookup`.
    pub fn eval(&self, g: &Group, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<usize> {
        Ok(match self {
            Expr::One => g.identity(),
            Expr::Gen(n) => lookup(n).ok_or_else(|| Error::Parse(format!("unknown generator {n}")))?,
            Expr::Prod(v) => {
                let mut acc = g.identity();
                for e in v {
                    acc = g.mul(acc, e.eval(g, lookup)?);
                }
                acc
            }
            Expr::Pow(e, k) => g.pow(e.eval(g, lookup)?, *k),
            Expr::Conj(x, y) => g.conj(x.eval(g, lookup)?, y.eval(g, lookup)?),
            Expr::Comm(x, y) => g.comm(x.eval(g, lookup)?, y.eval(g, lookup)?),
        })
    }

    /// Name of a bare generator.
    pub fn as_gen(&self) -> Option<&str> {
        match self {
            Expr::Gen(n) => Some(n),
            _ => None,
        }
    }
}
