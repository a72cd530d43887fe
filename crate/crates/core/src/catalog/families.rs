//! One recipe per family: side conditions, pc generators and relations, and
//! the literal relations checked on the built group.
//!
//! Generators whose literal order is `p^{m+1}` with `a^{p^m}` appearing in a
//! commutator get an auxiliary central generator `z = a^{p^m}` so that every
//! pc relation only involves later generators.

use super::FamilySpec;
use crate::error::{Error, Result};
use crate::numtheory::{pow_mod, smallest_nonresidue, smallest_primitive_root, smallest_valid_l};

pub(crate) struct Recipe {
    pub gens: Vec<(String, u32)>,
    pub pc: Vec<String>,
    pub printed: Vec<String>,
    pub log_order: u32,
    /// `exp(A) <= p^bound`; `None` when unbounded or no factor is allowed.
    pub a_bound: Option<i64>,
}

/// Largest pc length accepted before relation words are formed.
const MAX_LOG2_ORDER: f64 = 40.0;

struct R<'a> {
    spec: &'a FamilySpec,
    p: i64,
    rec: Recipe,
}

impl<'a> R<'a> {
    fn new(spec: &'a FamilySpec) -> Self {
        R {
            spec,
            p: spec.p as i64,
            rec: Recipe {
                gens: Vec::new(),
                pc: Vec::new(),
                printed: Vec::new(),
                log_order: 0,
                a_bound: None,
            },
        }
    }

    fn need(&self, ok: bool, clause: &str) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::param(&self.spec.label, clause))
        }
    }

    fn v(&self, name: &str) -> i64 {
        self.spec.get(name)
    }

    fn q(&self, k: i64) -> i64 {
        self.p.pow(k as u32)
    }

    fn gen(&mut self, name: &str, e: i64) {
        self.rec.gens.push((name.to_string(), e as u32));
    }

    /// Declares the generators and checks the resulting order is in range.
    fn gens(&mut self, gens: &[(&str, i64)]) -> Result<()> {
        for &(n, e) in gens {
            if e < 1 {
                return Err(Error::param(&self.spec.label, format!("o({n}) > 1")));
            }
            self.gen(n, e);
        }
        let log: i64 = gens.iter().map(|g| g.1).sum();
        if log as f64 * (self.p as f64).log2() > MAX_LOG2_ORDER {
            return Err(Error::BudgetExceeded(format!(
                "{}: order p^{log} is too large",
                self.spec.label
            )));
        }
        self.rec.log_order = log as u32;
        Ok(())
    }

    fn pc(&mut self, s: String) {
        self.rec.pc.push(s);
    }

    fn lit(&mut self, s: String) {
        self.rec.printed.push(s);
    }

    fn bound(&mut self, b: i64) {
        self.rec.a_bound = Some(b);
    }

    fn nonneg(&self, names: &[&str]) -> Result<()> {
        for n in names {
            self.need(self.v(n) >= 0, &format!("{n} >= 0"))?;
        }
        Ok(())
    }
}

pub(crate) fn recipe(spec: &FamilySpec) -> Result<Recipe> {
    let mut r = R::new(spec);
    let label = spec.label.as_str();
    match label {
        "Q8" | "A.Q8" => q8(&mut r)?,
        "Mp" | "A.Mp" => mp(&mut r)?,
        "Mp1" | "A.Mp1" => mp1(&mut r)?,
        "MC" => {
            r.need(r.p > 2, "p > 2")?;
            ordinary(&mut r)?
        }
        "MC2II" => {
            r.need(r.v("r") >= 2, "r >= 2")?;
            ordinary(&mut r)?
        }
        "MC2III" => exceptional(&mut r)?,
        "MC2I.D" | "MC2I.SD" | "MC2I.Q" | "MC2I.M" => cyclic_maximal(&mut r)?,
        "B1" | "B2" | "B3" | "B4" => b_first(&mut r)?,
        "B5" | "B6" | "B7" | "B8" => b_second(&mut r)?,
        "C1" | "C2" => c_small(&mut r)?,
        "C3" | "C4" | "C5" | "C6" | "C7" | "C8" | "C9" | "C10" => c_family(&mut r)?,
        "D1" | "D2" | "D3" | "D4" | "D5" | "D6" => d_family(&mut r)?,
        "D7" => d7(&mut r)?,
        "E1" => e1(&mut r)?,
        "E2" | "E3" | "E4" => e_dihedral(&mut r)?,
        "F1" | "F2" | "F3" | "F4" => f_family(&mut r)?,
        "F5" => f5(&mut r)?,
        "G1" | "G2" => g_family(&mut r)?,
        _ => return Err(Error::Parse(format!("unknown family {label}"))),
    }
    Ok(r.rec)
}

fn q8(r: &mut R) -> Result<()> {
    r.gens(&[("a", 1), ("b", 1), ("c", 1)])?;
    r.pc("a^2 = c".into());
    r.pc("b^2 = c".into());
    r.pc("[b,a] = c".into());
    r.lit("a^4 = 1".into());
    r.lit("b^2 = a^2".into());
    r.lit("a^b = a^-1".into());
    Ok(())
}

fn mp(r: &mut R) -> Result<()> {
    let (m, n) = (r.v("m"), r.v("n"));
    r.need(m >= 2, "m >= 2")?;
    r.need(n >= 1, "n >= 1")?;
    r.gens(&[("b", n), ("a", m)])?;
    let k = 1 + r.q(m - 1);
    r.pc(format!("a^b = a^{k}"));
    r.lit(format!("a^{} = 1", r.q(m)));
    r.lit(format!("b^{} = 1", r.q(n)));
    r.lit(format!("a^b = a^{k}"));
    Ok(())
}

fn mp1(r: &mut R) -> Result<()> {
    let (m, n) = (r.v("m"), r.v("n"));
    r.need(n >= 1, "n >= 1")?;
    r.need(m >= n, "m >= n")?;
    if r.p == 2 {
        r.need(m + n >= 3, "m + n >= 3 for p = 2")?;
    }
    r.gens(&[("a", m), ("b", n), ("c", 1)])?;
    r.pc("[a,b] = c".into());
    r.lit(format!("a^{} = 1", r.q(m)));
    r.lit(format!("b^{} = 1", r.q(n)));
    r.lit(format!("c^{} = 1", r.p));
    r.lit("[a,b] = c".into());
    r.lit("[c,a] = 1".into());
    r.lit("[c,b] = 1".into());
    Ok(())
}

/// `a^{p^{r+s+u}} = 1, b^{p^{r+s+t}} = a^{p^{r+s}}, a^b = a^{1+p^r}`.
fn metacyclic_rels(r: &mut R, rr: i64, s: i64, t: i64, u: i64) -> Result<()> {
    r.gens(&[("b", rr + s + t), ("a", rr + s + u)])?;
    let (ea, eb, w, k) = (r.q(rr + s + u), r.q(rr + s + t), r.q(rr + s), 1 + r.q(rr));
    r.pc(format!("b^{eb} = a^{w}"));
    r.pc(format!("a^b = a^{k}"));
    r.lit(format!("a^{ea} = 1"));
    r.lit(format!("b^{eb} = a^{w}"));
    r.lit(format!("a^b = a^{k}"));
    Ok(())
}

fn ordinary(r: &mut R) -> Result<()> {
    r.nonneg(&["r", "s", "t", "u"])?;
    let (rr, s, t, u) = (r.v("r"), r.v("s"), r.v("t"), r.v("u"));
    r.need(rr >= 1, "r >= 1")?;
    r.need(u <= rr, "u <= r")?;
    metacyclic_rels(r, rr, s, t, u)
}

fn exceptional(r: &mut R) -> Result<()> {
    r.nonneg(&["r", "s", "v", "t", "tp", "u"])?;
    let (rr, s, v, t, tp, u) = (r.v("r"), r.v("s"), r.v("v"), r.v("t"), r.v("tp"), r.v("u"));
    r.need(rr >= 2, "r >= 2")?;
    r.need(tp <= rr, "t' <= r")?;
    r.need(u <= 1, "u <= 1")?;
    r.need(t * tp == 0 && s * v == 0 && t * v == 0, "tt' = sv = tv = 0")?;
    r.need(tp < rr - 1 || u == 0, "if t' >= r-1 then u = 0")?;
    r.gens(&[("b", rr + s + t), ("a", rr + s + v + tp + u)])?;
    let (ea, eb, w, k) = (
        r.q(rr + s + v + tp + u),
        r.q(rr + s + t),
        r.q(rr + s + v + tp),
        -1 + r.q(rr + v),
    );
    r.pc(format!("b^{eb} = a^{w}"));
    r.pc(format!("a^b = a^{k}"));
    r.lit(format!("a^{ea} = 1"));
    r.lit(format!("b^{eb} = a^{w}"));
    r.lit(format!("a^b = a^{k}"));
    Ok(())
}

fn cyclic_maximal(r: &mut R) -> Result<()> {
    let n = r.v("n");
    let kind = &r.spec.label[5..];
    let least = if matches!(kind, "D" | "Q") { 3 } else { 4 };
    r.need(n >= least, &format!("n >= {least}"))?;
    r.gens(&[("b", 1), ("a", n - 1)])?;
    let (oa, half) = (r.q(n - 1), r.q(n - 2));
    let k = match kind {
        "D" | "Q" => -1,
        "SD" => -1 + half,
        _ => 1 + half,
    };
    r.pc(format!("a^b = a^{k}"));
    r.lit(format!("a^{oa} = 1"));
    r.lit(format!("a^b = a^{k}"));
    if kind == "Q" {
        r.pc(format!("b^2 = a^{half}"));
        r.lit(format!("b^2 = a^{half}"));
    } else {
        r.lit("b^2 = 1".into());
    }
    Ok(())
}

fn b_first(r: &mut R) -> Result<()> {
    let p = r.p;
    let label = r.spec.label.clone();
    if label != "B4" {
        let m = r.v("m");
        r.need(p >= 3, "p >= 3")?;
        r.need(m >= 1, "m >= 1")?;
    }
    match label.as_str() {
        "B1" => {
            let m = r.v("m");
            r.need(m >= 2 || p >= 5, "p >= 5 for m = 1")?;
            r.gens(&[("b", m), ("a1", 1), ("a2", 1), ("a3", 1)])?;
            r.pc("[a1,b] = a2".into());
            r.pc("[a2,b] = a3".into());
            for a in ["a1", "a2", "a3"] {
                r.lit(format!("{a}^{p} = 1"));
            }
            r.lit(format!("b^{} = 1", r.q(m)));
            r.lit("[a1,b] = a2".into());
            r.lit("[a2,b] = a3".into());
            r.lit("[a3,b] = 1".into());
            r.lit("[a1,a2] = 1".into());
            r.lit("[a1,a3] = 1".into());
            r.lit("[a2,a3] = 1".into());
        }
        "B2" => {
            let m = r.v("m");
            r.gens(&[("b", m), ("a1", 1), ("a2", 1), ("z", 1)])?;
            r.pc(format!("b^{} = z", r.q(m)));
            r.pc("[a1,b] = a2".into());
            r.pc("[a2,b] = z".into());
            r.lit(format!("a1^{p} = 1"));
            r.lit(format!("a2^{p} = 1"));
            r.lit(format!("b^{} = 1", r.q(m + 1)));
            r.lit("[a1,b] = a2".into());
            r.lit(format!("[a2,b] = b^{}", r.q(m)));
            r.lit("[a1,a2] = 1".into());
        }
        "B3" => {
            let (m, nu) = (r.v("m"), r.v("nu"));
            let nr = smallest_nonresidue(p as u64)? as i64;
            r.need(nu == 1 || nu == nr, "nu = 1 or a fixed quadratic non-residue")?;
            r.gens(&[("b", m), ("a1", 1), ("a2", 1), ("y", 1)])?;
            r.pc(format!("a1^{p} = y"));
            r.pc("[a1,b] = a2".into());
            r.pc(format!("[a2,b] = y^{nu}"));
            r.lit(format!("a1^{} = 1", p * p));
            r.lit(format!("a2^{p} = 1"));
            r.lit(format!("b^{} = 1", r.q(m)));
            r.lit("[a1,b] = a2".into());
            r.lit(format!("[a2,b] = a1^{}", nu * p));
            r.lit("[a1,a2] = 1".into());
        }
        _ => {
            r.gens(&[("b", 1), ("a1", 1), ("a2", 1), ("y", 1)])?;
            r.pc("b^3 = y".into());
            r.pc("a1^3 = y".into());
            r.pc("[a1,b] = a2".into());
            r.pc("[a2,b] = y^-1".into());
            r.lit("a1^9 = 1".into());
            r.lit("a2^3 = 1".into());
            r.lit("b^3 = a1^3".into());
            r.lit("[a1,b] = a2".into());
            r.lit("[a2,b] = a1^-3".into());
            r.lit("[a2,a1] = 1".into());
        }
    }
    Ok(())
}

/// (B5)-(B8): `a^{p^2} = b^{p^2} = c^p = 1, [a,b] = c` with `x = a^p`, `y = b^p`.
fn b_second(r: &mut R) -> Result<()> {
    let p = r.p;
    let label = r.spec.label.clone();
    // exponents of (x, y) in [c,a] and [c,b]
    let (ca, cb): ((i64, i64), (i64, i64)) = match label.as_str() {
        "B5" => {
            r.need(p >= 5, "p >= 5")?;
            let nu = smallest_nonresidue(p as u64)? as i64;
            ((0, nu), (1, 0))
        }
        "B6" => {
            r.need(p >= 5, "p >= 5")?;
            let k = r.v("r");
            r.need(k >= 1 && k <= (p - 1) / 2, "r = 1, 2, ..., (p-1)/2")?;
            let l = b6_l(p as u64, k as u64)? as i64;
            ((-1, -l), (-1, 0))
        }
        "B7" => ((0, -1), (1, 0)),
        _ => ((0, -1), (-1, 0)),
    };
    r.gens(&[("a", 1), ("b", 1), ("c", 1), ("x", 1), ("y", 1)])?;
    r.pc(format!("a^{p} = x"));
    r.pc(format!("b^{p} = y"));
    r.pc("[a,b] = c".into());
    r.pc(format!("[c,a] = x^{}*y^{}", ca.0, ca.1));
    r.pc(format!("[c,b] = x^{}*y^{}", cb.0, cb.1));
    r.lit(format!("a^{} = 1", p * p));
    r.lit(format!("b^{} = 1", p * p));
    r.lit(format!("c^{p} = 1"));
    r.lit("[a,b] = c".into());
    r.lit(format!("[c,a] = a^{}*b^{}", ca.0 * p, ca.1 * p));
    r.lit(format!("[c,b] = a^{}*b^{}", cb.0 * p, cb.1 * p));
    Ok(())
}

/// `l` with `4l = rho^{2r+1} - 1` modulo `p`.
pub(crate) fn b6_l(p: u64, r: u64) -> Result<u64> {
    let rho = smallest_primitive_root(p)?;
    let x = (pow_mod(rho, 2 * r + 1, p) + p - 1) % p;
    let inv4 = pow_mod(4, p - 2, p);
    Ok(x * inv4 % p)
}

fn c_small(r: &mut R) -> Result<()> {
    let two = r.spec.label == "C2";
    if two {
        r.gens(&[("d", 1), ("b", 1), ("a1", 1), ("a2", 1), ("z1", 1), ("z2", 1)])?;
    } else {
        r.gens(&[("b", 1), ("a1", 1), ("a2", 1), ("z1", 1), ("z2", 1)])?;
    }
    r.bound(1);
    for s in ["b^2 = z1", "a1^2 = z1", "a2^2 = z2", "[a1,b] = z2", "[a2,b] = z1"] {
        r.pc(s.into());
    }
    for s in [
        "a1^4 = 1",
        "a2^4 = 1",
        "b^2 = a1^2",
        "[a1,a2] = 1",
        "[a1,b] = a2^2",
        "[a2,b] = a1^2",
    ] {
        r.lit(s.into());
    }
    if two {
        for s in ["d^2 = z2", "[a1,d] = z1", "[a2,d] = z1*z2"] {
            r.pc(s.into());
        }
        for s in [
            "d^2 = a2^2",
            "[a1,d] = a1^2",
            "[a2,d] = a1^2*a2^2",
            "[b,d] = 1",
        ] {
            r.lit(s.into());
        }
    }
    Ok(())
}

/// Declares `a1, a2, a3` with relative exponents `m_i` and an auxiliary
/// `z_i = a_i^{p^{m_i}}` for each `i` in `with_z`; the literal order of `a_i`
/// is then `p^{m_i+1}`.
fn three_gens(r: &mut R, m: [i64; 3], with_z: [bool; 3]) -> Result<()> {
    for (i, &mi) in m.iter().enumerate() {
        r.need(mi >= 1, &format!("m{} >= 1", i + 1))?;
    }
    let mut gens: Vec<(String, i64)> = (0..3).map(|i| (format!("a{}", i + 1), m[i])).collect();
    for i in 0..3 {
        if with_z[i] {
            gens.push((format!("z{}", i + 1), 1));
        }
    }
    let refs: Vec<(&str, i64)> = gens.iter().map(|(n, e)| (n.as_str(), *e)).collect();
    r.gens(&refs)?;
    for i in 0..3 {
        let e = if with_z[i] { m[i] + 1 } else { m[i] };
        r.lit(format!("a{}^{} = 1", i + 1, r.q(e)));
        if with_z[i] {
            r.pc(format!("a{}^{} = z{}", i + 1, r.q(m[i]), i + 1));
        }
    }
    Ok(())
}

/// Literal form of `z_1^{e_1} z_2^{e_2} z_3^{e_3}`.
fn zlit(r: &R, m: [i64; 3], e: [i64; 3]) -> String {
    let parts: Vec<String> = (0..3)
        .filter(|&i| e[i] != 0)
        .map(|i| format!("a{}^{}", i + 1, e[i] * r.q(m[i])))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn zpc(e: [i64; 3]) -> String {
    let parts: Vec<String> = (0..3)
        .filter(|&i| e[i] != 0)
        .map(|i| format!("z{}^{}", i + 1, e[i]))
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Installs `[x, y] = z^e` both as pc relation and literal relation.
fn central_comm(r: &mut R, m: [i64; 3], x: &str, y: &str, e: [i64; 3]) {
    r.pc(format!("[{x},{y}] = {}", zpc(e)));
    let lit = format!("[{x},{y}] = {}", zlit(r, m, e));
    r.lit(lit);
}

fn kparam(r: &R) -> Result<i64> {
    Ok(if r.p == 2 {
        1
    } else {
        smallest_valid_l(r.spec.p)? as i64
    })
}

fn c_family(r: &mut R) -> Result<()> {
    let m = [r.v("m1"), r.v("m2"), r.v("m3")];
    let [m1, m2, m3] = m;
    let p = r.p;
    let label = r.spec.label.clone();
    let z = match label.as_str() {
        "C3" | "C4" | "C5" | "C6" => [true, true, false],
        "C10" => [true, false, true],
        _ => [false, true, true],
    };
    let mut comms: Vec<(&str, &str, [i64; 3])> = Vec::new();
    match label.as_str() {
        "C3" => {
            r.need(m1 >= m2 && m2 >= m3, "m1 >= m2 >= m3")?;
            if p == 2 {
                r.need(m1 > 1, "m1 > 1 for p = 2")?;
            }
            r.bound(m2);
            comms.push(("a1", "a2", [1, 0, 0]));
            comms.push(("a1", "a3", [0, 1, 0]));
            comms.push(("a2", "a3", [0, 0, 0]));
        }
        "C4" => {
            r.need(p > 2, "p > 2")?;
            r.need(
                (m1 - 1 == m2 || m1 == m2) && m2 >= m3,
                "m1 - 1 = m2 >= m3 or m1 = m2 >= m3",
            )?;
            r.bound(m2);
            let nu = smallest_nonresidue(r.spec.p)? as i64;
            comms.push(("a1", "a2", [0, 0, 0]));
            comms.push(("a1", "a3", [0, 1, 0]));
            comms.push(("a2", "a3", [nu, 0, 0]));
        }
        "C5" => {
            r.need(m1 == m2 && m2 >= m3, "m1 = m2 >= m3")?;
            r.bound(m2);
            let k = kparam(r)?;
            comms.push(("a1", "a2", [0, 0, 0]));
            comms.push(("a1", "a3", [0, 1, 0]));
            comms.push(("a2", "a3", [k, -1, 0]));
        }
        "C6" => {
            r.need(m1 - 1 == m2 && m2 >= m3, "m1 - 1 = m2 >= m3")?;
            r.bound(m2);
            comms.push(("a1", "a2", [0, 0, 0]));
            comms.push(("a1", "a3", [0, 1, 0]));
            comms.push(("a2", "a3", [1, 0, 0]));
        }
        "C7" => {
            r.need(m1 >= m2 && m2 == m3 + 1, "m1 >= m2 = m3 + 1")?;
            r.bound(m3);
            comms.push(("a1", "a2", [0, 0, 1]));
            comms.push(("a1", "a3", [0, 1, 0]));
            comms.push(("a2", "a3", [0, 0, 0]));
        }
        "C8" => {
            r.need(p > 2, "p > 2")?;
            r.need(
                (m1 >= m2 && m2 == m3 + 1) || (m1 > m2 && m2 == m3),
                "m1 >= m2 = m3 + 1 or m1 > m2 = m3",
            )?;
            r.bound(m3);
            let nu = smallest_nonresidue(r.spec.p)? as i64;
            comms.push(("a1", "a2", [0, 0, 1]));
            comms.push(("a1", "a3", [0, nu, 0]));
            comms.push(("a2", "a3", [0, 0, 0]));
        }
        "C9" => {
            r.need(m1 > m2 && m2 == m3, "m1 > m2 = m3")?;
            r.bound(m3);
            let k = kparam(r)?;
            comms.push(("a1", "a2", [0, 0, 1]));
            comms.push(("a1", "a3", [0, k, -1]));
            comms.push(("a2", "a3", [0, 0, 0]));
        }
        _ => {
            r.need(m1 >= m2 && m2 == m3 + 1, "m1 >= m2 = m3 + 1")?;
            r.bound(m3);
            comms.push(("a1", "a2", [0, 0, 1]));
            comms.push(("a1", "a3", [1, 0, 0]));
            comms.push(("a2", "a3", [0, 0, 0]));
        }
    }
    three_gens(r, m, z)?;
    for (x, y, e) in comms {
        central_comm(r, m, x, y, e);
    }
    Ok(())
}

fn d_family(r: &mut R) -> Result<()> {
    let m = [r.v("m1"), r.v("m2"), r.v("m3")];
    let [m1, m2, m3] = m;
    let p = r.p;
    let label = r.spec.label.clone();
    let shape_a = m1 == m2 + 1 && m2 == m3;
    let shape_b = m1 == m2 && m2 == m3 + 1;
    let mut comms: Vec<(&str, &str, [i64; 3])> = Vec::new();
    match label.as_str() {
        "D1" | "D2" | "D3" => r.need(shape_a, "m1 = m2 + 1 = m3 + 1")?,
        _ => r.need(shape_b, "m1 = m2 = m3 + 1")?,
    }
    match label.as_str() {
        "D1" | "D2" | "D4" | "D5" => r.need(p > 2, "p is odd")?,
        _ => {}
    }
    r.bound(m3);
    match label.as_str() {
        "D1" | "D4" => {
            let eta = smallest_nonresidue(r.spec.p)? as i64;
            comms.push(("a2", "a3", [1, 0, 0]));
            comms.push(("a1", "a3", [0, eta, 0]));
            comms.push(("a1", "a2", [0, 0, 1]));
        }
        "D2" => {
            let l = smallest_valid_l(r.spec.p)? as i64;
            comms.push(("a2", "a3", [1, 0, 0]));
            comms.push(("a1", "a3", [0, l, -1]));
            comms.push(("a1", "a2", [0, 0, 1]));
        }
        "D5" => {
            let l = smallest_valid_l(r.spec.p)? as i64;
            comms.push(("a2", "a3", [1, 0, 0]));
            comms.push(("a1", "a3", [1, l, 0]));
            comms.push(("a1", "a2", [0, 0, 1]));
        }
        "D3" => {
            comms.push(("a2", "a3", [1, 0, 0]));
            comms.push(("a3", "a1", [0, 1, 0]));
            comms.push(("a1", "a2", [0, 1, 1]));
        }
        _ => {
            comms.push(("a2", "a3", [1, 1, 0]));
            comms.push(("a3", "a1", [0, 1, 0]));
            comms.push(("a1", "a2", [0, 0, 1]));
        }
    }
    three_gens(r, m, [true, true, true])?;
    for (x, y, e) in comms {
        central_comm(r, m, x, y, e);
    }
    Ok(())
}

fn d7(r: &mut R) -> Result<()> {
    r.gens(&[("a", 1), ("b", 1), ("c", 1), ("za", 1), ("zb", 1), ("zc", 1)])?;
    r.bound(1);
    for s in [
        "a^2 = za",
        "b^2 = zb",
        "c^2 = zc",
        "[b,c] = za*zb",
        "[c,a] = zb*zc",
        "[a,b] = zc",
    ] {
        r.pc(s.into());
    }
    for s in [
        "a^4 = 1",
        "b^4 = 1",
        "c^4 = 1",
        "[b,c] = a^2*b^2",
        "[c,a] = b^2*c^2",
        "[a,b] = c^2",
    ] {
        r.lit(s.into());
    }
    Ok(())
}

fn e1(r: &mut R) -> Result<()> {
    r.nonneg(&["r", "s", "t", "u"])?;
    let (rr, s, t, u) = (r.v("r"), r.v("s"), r.v("t"), r.v("u"));
    r.need(rr >= 1, "r >= 1")?;
    r.need(u <= rr, "u <= r")?;
    r.need(rr + 1 >= s + u && s + u >= 2, "r+1 >= s+u >= 2")?;
    if r.p == 2 {
        r.need(rr >= 2, "if p = 2 then r >= 2")?;
    }
    metacyclic_rels(r, rr, s, t, u)
}

fn e_dihedral(r: &mut R) -> Result<()> {
    let m = r.v("m");
    r.need(m >= 1, "m >= 1")?;
    r.gens(&[("b", m), ("a", 3)])?;
    let eb = r.q(m);
    r.lit("a^8 = 1".into());
    match r.spec.label.as_str() {
        "E2" => {
            r.pc("a^b = a^-1".into());
            r.lit(format!("b^{eb} = 1"));
            r.lit("a^b = a^-1".into());
        }
        "E3" => {
            r.pc(format!("b^{eb} = a^4"));
            r.pc("a^b = a^-1".into());
            r.lit(format!("b^{eb} = a^4"));
            r.lit("a^b = a^-1".into());
        }
        _ => {
            r.pc("a^b = a^3".into());
            r.lit(format!("b^{eb} = 1"));
            r.lit("a^b = a^3".into());
        }
    }
    Ok(())
}

fn f_family(r: &mut R) -> Result<()> {
    let label = r.spec.label.clone();
    // (exponent of b, exponent of a, b-power target exponent, conjugation r-index)
    let (eb, ea, bpow, conj) = match label.as_str() {
        "F1" => {
            r.nonneg(&["r", "s", "u"])?;
            let (rr, s, u) = (r.v("r"), r.v("s"), r.v("u"));
            r.need(u <= rr, "u <= r")?;
            r.need(rr + 1 > s + u && s + u >= 2, "r+1 > s+u >= 2")?;
            r.bound(rr + 1 - (s + u));
            (rr + s, rr + s + u, None, rr)
        }
        "F2" => {
            r.nonneg(&["r", "t", "u"])?;
            let (rr, t, u) = (r.v("r"), r.v("t"), r.v("u"));
            r.need(t >= 1, "t >= 1")?;
            r.need(rr >= u && u >= 2, "r >= u >= 2")?;
            r.bound(t + rr + 1 - u);
            (rr, rr + t + u, None, rr + t)
        }
        "F3" => {
            r.nonneg(&["r", "s", "t"])?;
            let (rr, s, t) = (r.v("r"), r.v("s"), r.v("t"));
            r.need(t >= 1, "t >= 1")?;
            r.need(rr + 1 > s && s >= 2, "r+1 > s >= 2")?;
            r.bound(rr + 1 - s);
            (rr + s + t, rr + s, None, rr)
        }
        _ => {
            r.nonneg(&["r", "s", "t", "u"])?;
            let (rr, s, t, u) = (r.v("r"), r.v("s"), r.v("t"), r.v("u"));
            r.need(s * t * u != 0, "stu != 0")?;
            r.need(rr + 1 > s + u && s + u >= 2, "r+1 > s+u >= 2")?;
            r.bound(rr + 1 - (s + u));
            (rr + s + t, rr + s + u, Some(rr + s), rr)
        }
    };
    r.gens(&[("b", eb), ("a", ea)])?;
    let k = 1 + r.q(conj);
    let (qa, qb) = (r.q(ea), r.q(eb));
    r.lit(format!("a^{qa} = 1"));
    match bpow {
        Some(w) => {
            let w = r.q(w);
            r.pc(format!("b^{qb} = a^{w}"));
            r.lit(format!("b^{qb} = a^{w}"));
        }
        None => r.lit(format!("b^{qb} = 1")),
    }
    r.pc(format!("a^b = a^{k}"));
    r.lit(format!("a^b = a^{k}"));
    Ok(())
}

fn f5(r: &mut R) -> Result<()> {
    r.nonneg(&["r", "t", "u"])?;
    let (rr, t, u) = (r.v("r"), r.v("t"), r.v("u"));
    let (ts, rs) = (r.spec.t_i.clone(), r.spec.r_i.clone());
    r.need(!ts.is_empty(), "f >= 1")?;
    r.need(ts.len() == rs.len(), "t_i and r_i have the same length")?;
    r.need(rr >= u && u >= 2, "r >= u >= 2")?;
    r.need(rs.iter().all(|&x| x >= 1), "r_i >= 1")?;
    r.need(t.max(u - 2) < ts[0], "max{t, u-2} < t_1")?;
    r.need(ts.windows(2).all(|w| w[0] < w[1]), "t_1 < t_2 < ... < t_f")?;
    r.need(*ts.last().unwrap() < t + u, "t_f < t+u")?;
    let sums: Vec<i64> = ts.iter().zip(&rs).map(|(a, b)| a + b).collect();
    r.need(rr + t > sums[0], "r+t > r_1+t_1")?;
    r.need(sums.windows(2).all(|w| w[0] > w[1]), "r_1+t_1 > r_2+t_2 > ... > r_f+t_f")?;
    r.need(*sums.last().unwrap() >= t + u, "r_f+t_f >= t+u")?;
    r.bound(t + rr + 1 - u);
    let names: Vec<String> = (1..=ts.len()).map(|i| format!("b{i}")).collect();
    let mut gens: Vec<(&str, i64)> = vec![("b", rr)];
    for (n, &ri) in names.iter().zip(&rs) {
        gens.push((n.as_str(), ri));
    }
    gens.push(("a", rr + t + u));
    r.gens(&gens)?;
    let k = 1 + r.q(rr + t);
    r.pc(format!("a^b = a^{k}"));
    r.lit(format!("a^{} = 1", r.q(rr + t + u)));
    r.lit(format!("b^{} = 1", r.q(rr)));
    r.lit(format!("a^b = a^{k}"));
    for (i, n) in names.iter().enumerate() {
        let w = r.q(rr + ts[i]);
        r.pc(format!("[a,{n}] = a^{w}"));
        r.lit(format!("{n}^{} = 1", r.q(rs[i])));
        r.lit(format!("[a,{n}] = a^{w}"));
        r.lit(format!("[b,{n}] = 1"));
        for other in &names[i + 1..] {
            r.lit(format!("[{n},{other}] = 1"));
        }
    }
    Ok(())
}

fn g_family(r: &mut R) -> Result<()> {
    let g1 = r.spec.label == "G1";
    let (m1, m2) = (r.v("m1"), r.v("m2"));
    let (m3, k) = if g1 {
        r.need(r.p > 2, "p > 2")?;
        r.need(m1 > m2 && m2 >= 1, "m1 > m2 >= 1")?;
        (1, m2)
    } else {
        let (m3, k) = (r.v("m3"), r.v("k"));
        r.need(m1 >= m2 && m2 >= m3 && m3 >= 1, "m1 >= m2 >= m3")?;
        r.need(
            k >= 1 && k <= (m1 - m3).min(m2 - m3 + 1).min(m2 - 1),
            "1 <= k <= min{m1-m3, m2-m3+1, m2-1}",
        )?;
        r.bound(m2 - k);
        (m3, k)
    };
    r.gens(&[("a3", m3), ("a2", m2 + 1), ("a1", m1 + 1 + k)])?;
    let (w1, w2) = (r.q(m1), r.q(m2));
    r.pc(format!("[a1,a2] = a1^{w1}"));
    r.pc(format!("[a1,a3] = a2^{w2}"));
    r.lit(format!("a1^{} = 1", r.q(m1 + 1 + k)));
    r.lit(format!("a2^{} = 1", r.q(m2 + 1)));
    r.lit(format!("a3^{} = 1", r.q(m3)));
    r.lit(format!("[a1,a2] = a1^{w1}"));
    r.lit(format!("[a1,a3] = a2^{w2}"));
    r.lit("[a2,a3] = 1".into());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b6_parameter() {
        // p = 5: rho = 2, r = 1 gives 4l = 7 = 2, l = 3
        assert_eq!(b6_l(5, 1).unwrap(), 3);
        // r = 2: 2^5 - 1 = 31 = 1, l = 4
        assert_eq!(b6_l(5, 2).unwrap(), 4);
    }
}
