//! Spec strings: `C3[p=3,m1=2,m2=1,m3=1;A=3]`, `MC[p=3,r=1,s=1,t=0,u=1]`,
//! `F5[p=2,r=3,t=0,u=2;t_i=1;r_i=2]`.
//!
//! ```text
//! spec    := LABEL [ '[' section (';' section)* ']' ]
//! section := params | 'A=' list | 't_i=' list | 'r_i=' list
//! params  := [ NAME '=' INT (',' NAME '=' INT)* ]
//! list    := [ INT (',' INT)* ]
//! ```
//!
//! `p` may be omitted for families with a fixed prime. `A` lists the cyclic
//! factor orders of the abelian direct factor; empty means trivial.

use std::fmt;
use std::str::FromStr;

use super::{family, FamilySpec};
use crate::error::{Error, Result};

fn list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer '{t}'")))
        })
        .collect()
}

pub fn parse_spec(s: &str) -> Result<FamilySpec> {
    let s = s.trim();
    let (label, body) = match s.find('[') {
        Some(i) => {
            let body = s[i + 1..]
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("missing ']' in '{s}'")))?;
            (&s[..i], body)
        }
        None => (s, ""),
    };
    let label = label.trim();
    let info = family(label).ok_or_else(|| Error::Parse(format!("unknown family '{label}'")))?;
    let mut p: Option<u64> = None;
    let mut params: Vec<(String, i64)> = Vec::new();
    let mut abelian: Vec<i64> = Vec::new();
    let (mut t_i, mut r_i) = (Vec::new(), Vec::new());
    for section in body.split(';').map(str::trim) {
        if let Some(rest) = section.strip_prefix("A=") {
            abelian = list(rest)?;
        } else if let Some(rest) = section.strip_prefix("t_i=") {
            t_i = list(rest)?;
        } else if let Some(rest) = section.strip_prefix("r_i=") {
            r_i = list(rest)?;
        } else {
            for kv in section.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected name=value, got '{kv}'")))?;
                let (k, v) = (k.trim(), v.trim());
                let v: i64 = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer '{v}' for {k}")))?;
                if k == "p" {
                    if v < 2 {
                        return Err(Error::Parse(format!("bad prime {v}")));
                    }
                    p = Some(v as u64);
                } else if params.iter().any(|(n, _)| n == k) {
                    return Err(Error::Parse(format!("{label}: repeated parameter {k}")));
                } else {
                    params.push((k.to_string(), v));
                }
            }
        }
    }
    let p = p
        .or(info.fixed_p)
        .ok_or_else(|| Error::Parse(format!("{label}: p is required")))?;
    let named: Vec<(&str, i64)> = params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    if abelian.iter().any(|&o| o < 1) {
        return Err(Error::Parse(format!("{label}: abelian factor orders are positive")));
    }
    let orders: Vec<u64> = abelian.iter().map(|&o| o as u64).collect();
    Ok(FamilySpec::new(label, p, &named)?
        .with_abelian(&orders)
        .with_lists(&t_i, &r_i))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[p={}", self.label, self.p)?;
        for (k, v) in &self.params {
            write!(f, ",{k}={v}")?;
        }
        if self.info().lists {
            write!(f, ";t_i={};r_i={}", join(&self.t_i), join(&self.r_i))?;
        }
        if !self.abelian.is_empty() {
            write!(f, ";A={}", join(&self.abelian))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for s in [
            "C3[p=3,m1=2,m2=1,m3=1;A=3]",
            "MC[p=3,r=1,s=1,t=0,u=1]",
            "F5[p=3,r=2,t=0,u=2;t_i=1;r_i=2]",
            "Q8[p=2]",
            "A.Mp1[p=2,m=2,n=1;A=4,2,2]",
        ] {
            let spec = parse_spec(s).unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(parse_spec(&spec.to_string()).unwrap(), spec);
        }
    }

    #[test]
    fn defaults_and_normalization() {
        assert_eq!(parse_spec("Q8").unwrap().to_string(), "Q8[p=2]");
        assert_eq!(parse_spec("B4").unwrap().p, 3);
        let s = parse_spec("C3[m3=1, m2=1, p=3, m1=1; A=3,9]").unwrap();
        assert_eq!(s.to_string(), "C3[p=3,m1=1,m2=1,m3=1;A=9,3]");
        let s = parse_spec("F5[p=3,r=2,t=0,u=2;t_i=1;r_i=2;A=]").unwrap();
        assert!(s.abelian.is_empty());
    }

    #[test]
    fn parse_errors() {
        for s in ["Z9[p=3]", "MC[r=1,s=1,t=0,u=1]", "MC[p=3,r=1]", "C3[p=3,m1=x]", "Q8[p=2"] {
            assert!(matches!(parse_spec(s), Err(Error::Parse(_))), "{s}");
        }
    }
}
