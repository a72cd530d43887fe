//! Named group families: registry, parameter validation and construction.

mod enumerate;
mod families;
mod spec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{build_group, log_p, Group};
use crate::numtheory::is_prime;
use crate::pc::PcBuilder;
use crate::predicates::RedeiType;
use crate::structure::AbelianType;
use crate::words::parse_relation;

pub use enumerate::{abelian_types_up_to, enumerate_specs, OrderBound};
pub use spec::parse_spec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Heading {
    /// Minimal non-abelian groups.
    Redei,
    /// Metacyclic presentations.
    Metacyclic,
    /// `|G'| = p`.
    A,
    /// Class 3, `exp(G') = p`.
    B,
    /// Class 2, `G'` elementary of rank 2.
    C,
    /// Class 2, `G'` elementary of rank 3.
    D,
    /// Metacyclic with `exp(G') > p`.
    E,
    /// Not metacyclic, `G'` cyclic of order at least `p^2`.
    F,
    /// `G'` of type `(p^a, p)`, `a >= 2`.
    G,
}

impl Heading {
    /// `Some(true)` for families with `exp(G') = p`, `Some(false)` for those
    /// with `exp(G') > p`.
    pub fn derived_exponent_is_p(self) -> Option<bool> {
        match self {
            Heading::A | Heading::B | Heading::C | Heading::D => Some(true),
            Heading::E | Heading::F | Heading::G => Some(false),
            Heading::Redei | Heading::Metacyclic => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbelianFactor {
    Forbidden,
    Optional,
    Required,
}

#[derive(Clone, Copy, Debug)]
pub struct FamilyInfo {
    pub label: &'static str,
    pub heading: Heading,
    pub params: &'static [&'static str],
    pub fixed_p: Option<u64>,
    pub factor: AbelianFactor,
    /// Part of the metahamiltonian classification lists (as opposed to the
    /// auxiliary Redei and metacyclic constructors).
    pub listed: bool,
    /// Takes the `t_i` / `r_i` lists.
    pub lists: bool,
}

const fn fam(
    label: &'static str,
    heading: Heading,
    params: &'static [&'static str],
    fixed_p: Option<u64>,
    factor: AbelianFactor,
    listed: bool,
) -> FamilyInfo {
    FamilyInfo {
        label,
        heading,
        params,
        fixed_p,
        factor,
        listed,
        lists: false,
    }
}

use AbelianFactor::{Forbidden as NOA, Optional as OPT, Required as REQ};
use Heading as H;

const M3: &[&str] = &["m1", "m2", "m3"];
const RSTU: &[&str] = &["r", "s", "t", "u"];

pub static FAMILIES: &[FamilyInfo] = &[
    fam("Q8", H::Redei, &[], Some(2), NOA, false),
    fam("Mp", H::Redei, &["m", "n"], None, NOA, false),
    fam("Mp1", H::Redei, &["m", "n"], None, NOA, false),
    fam("MC", H::Metacyclic, RSTU, None, NOA, false),
    fam("MC2I.D", H::Metacyclic, &["n"], Some(2), NOA, false),
    fam("MC2I.SD", H::Metacyclic, &["n"], Some(2), NOA, false),
    fam("MC2I.Q", H::Metacyclic, &["n"], Some(2), NOA, false),
    fam("MC2I.M", H::Metacyclic, &["n"], Some(2), NOA, false),
    fam("MC2II", H::Metacyclic, RSTU, Some(2), NOA, false),
    fam("MC2III", H::Metacyclic, &["r", "s", "v", "t", "tp", "u"], Some(2), NOA, false),
    fam("A.Q8", H::A, &[], Some(2), OPT, true),
    fam("A.Mp", H::A, &["m", "n"], None, OPT, true),
    fam("A.Mp1", H::A, &["m", "n"], None, OPT, true),
    fam("B1", H::B, &["m"], None, NOA, true),
    fam("B2", H::B, &["m"], None, NOA, true),
    fam("B3", H::B, &["m", "nu"], None, NOA, true),
    fam("B4", H::B, &[], Some(3), NOA, true),
    fam("B5", H::B, &[], None, NOA, true),
    fam("B6", H::B, &["r"], None, NOA, true),
    fam("B7", H::B, &[], Some(3), NOA, true),
    fam("B8", H::B, &[], Some(3), NOA, true),
    fam("C1", H::C, &[], Some(2), OPT, true),
    fam("C2", H::C, &[], Some(2), OPT, true),
    fam("C3", H::C, M3, None, OPT, true),
    fam("C4", H::C, M3, None, OPT, true),
    fam("C5", H::C, M3, None, OPT, true),
    fam("C6", H::C, M3, None, OPT, true),
    fam("C7", H::C, M3, None, OPT, true),
    fam("C8", H::C, M3, None, OPT, true),
    fam("C9", H::C, M3, None, OPT, true),
    fam("C10", H::C, M3, None, OPT, true),
    fam("D1", H::D, M3, None, OPT, true),
    fam("D2", H::D, M3, None, OPT, true),
    fam("D3", H::D, M3, Some(2), OPT, true),
    fam("D4", H::D, M3, None, OPT, true),
    fam("D5", H::D, M3, None, OPT, true),
    fam("D6", H::D, M3, Some(2), OPT, true),
    fam("D7", H::D, &[], Some(2), OPT, true),
    fam("E1", H::E, RSTU, None, NOA, true),
    fam("E2", H::E, &["m"], Some(2), NOA, true),
    fam("E3", H::E, &["m"], Some(2), NOA, true),
    fam("E4", H::E, &["m"], Some(2), NOA, true),
    fam("F1", H::F, &["r", "s", "u"], None, REQ, true),
    fam("F2", H::F, &["r", "t", "u"], None, REQ, true),
    fam("F3", H::F, &["r", "s", "t"], None, REQ, true),
    fam("F4", H::F, RSTU, None, REQ, true),
    FamilyInfo {
        lists: true,
        ..fam("F5", H::F, &["r", "t", "u"], None, OPT, true)
    },
    fam("G1", H::G, &["m1", "m2"], None, NOA, true),
    fam("G2", H::G, &["m1", "m2", "m3", "k"], None, OPT, true),
];

pub fn family(label: &str) -> Option<&'static FamilyInfo> {
    FAMILIES.iter().find(|f| f.label == label)
}

/// A family label with a full parameter assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub label: String,
    pub p: u64,
    /// Values in the family's declared parameter order.
    pub params: Vec<(String, i64)>,
    /// Cyclic factor orders of the abelian direct factor, non-increasing.
    pub abelian: Vec<u64>,
    pub t_i: Vec<i64>,
    pub r_i: Vec<i64>,
}

impl FamilySpec {
    /// Spec with parameters given by name, in any order.
    pub fn new(label: &str, p: u64, params: &[(&str, i64)]) -> Result<Self> {
        let info = family(label).ok_or_else(|| Error::Parse(format!("unknown family {label}")))?;
        let mut out = Vec::new();
        for &name in info.params {
            let v = params
                .iter()
                .find(|(k, _)| *k == name)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::Parse(format!("{label}: missing parameter {name}")))?;
            out.push((name.to_string(), v));
        }
        if let Some((k, _)) = params.iter().find(|(k, _)| !info.params.contains(k)) {
            return Err(Error::Parse(format!("{label}: unknown parameter {k}")));
        }
        Ok(FamilySpec {
            label: label.to_string(),
            p,
            params: out,
            abelian: Vec::new(),
            t_i: Vec::new(),
            r_i: Vec::new(),
        })
    }

    pub fn with_abelian(mut self, orders: &[u64]) -> Self {
        let mut a: Vec<u64> = orders.iter().copied().filter(|&o| o > 1).collect();
        a.sort_unstable_by(|x, y| y.cmp(x));
        self.abelian = a;
        self
    }

    pub fn with_lists(mut self, t_i: &[i64], r_i: &[i64]) -> Self {
        self.t_i = t_i.to_vec();
        self.r_i = r_i.to_vec();
        self
    }

    pub fn info(&self) -> &'static FamilyInfo {
        family(&self.label).expect("specs carry registered labels")
    }

    pub fn get(&self, name: &str) -> i64 {
        self.params
            .iter()
            .find(|(k, _)| k == name)
            .map(|&(_, v)| v)
            .unwrap_or_else(|| panic!("{}: no parameter {name}", self.label))
    }

    pub fn abelian_type(&self) -> AbelianType {
        AbelianType::new(self.p, self.abelian.clone())
    }

    /// Validates side conditions without building.
    pub fn validate(&self) -> Result<()> {
        self.check_prime()?;
        let r = families::recipe(self)?;
        self.check_abelian(r.a_bound)
    }

    /// `log_p |G|` implied by the parameters.
    pub fn log_order(&self) -> Result<u32> {
        self.check_prime()?;
        let r = families::recipe(self)?;
        Ok(r.log_order + self.abelian_log())
    }

    fn abelian_log(&self) -> u32 {
        self.abelian.iter().map(|&o| log_p(o, self.p)).sum()
    }

    fn check_prime(&self) -> Result<()> {
        let info = self.info();
        if !is_prime(self.p) {
            return Err(Error::param(&self.label, format!("{} is not a prime", self.p)));
        }
        if let Some(q) = info.fixed_p {
            if self.p != q {
                return Err(Error::param(&self.label, format!("p = {q}")));
            }
        }
        if !info.lists && (!self.t_i.is_empty() || !self.r_i.is_empty()) {
            return Err(Error::param(&self.label, "no t_i / r_i lists"));
        }
        Ok(())
    }

    fn check_abelian(&self, bound: Option<i64>) -> Result<()> {
        let info = self.info();
        for &o in &self.abelian {
            if o < self.p || self.p.pow(log_p(o, self.p)) != o {
                return Err(Error::param(
                    &self.label,
                    format!("abelian factor orders are powers of {}", self.p),
                ));
            }
        }
        match info.factor {
            AbelianFactor::Forbidden if !self.abelian.is_empty() => {
                return Err(Error::param(&self.label, "no abelian direct factor"));
            }
            AbelianFactor::Required if self.abelian.is_empty() => {
                return Err(Error::param(&self.label, "A != 1"));
            }
            _ => {}
        }
        if let (Some(b), Some(&top)) = (bound, self.abelian.first()) {
            if b < 0 || top > self.p.pow(b as u32) {
                return Err(Error::param(
                    &self.label,
                    format!("exp(A) <= p^{b}"),
                ));
            }
        }
        Ok(())
    }
}

/// Builds the group of a spec, checking side conditions, the printed
/// relations and the order.
pub fn mk_family(spec: &FamilySpec) -> Result<Group> {
    mk_family_with(spec, crate::pc::DEFAULT_STEP_BUDGET)
}

/// [`mk_family`] with an explicit collection step budget.
pub fn mk_family_with(spec: &FamilySpec, step_budget: u64) -> Result<Group> {
    spec.check_prime()?;
    let recipe = families::recipe(spec)?;
    spec.check_abelian(recipe.a_bound)?;
    let mut b = PcBuilder::new(spec.p);
    b.step_budget(step_budget);
    for (name, e) in &recipe.gens {
        b.gen(name, *e);
    }
    for (i, &o) in spec.abelian.iter().enumerate() {
        b.gen(&format!("e{}", i + 1), log_p(o, spec.p));
    }
    for rel in &recipe.pc {
        apply_pc_relation(&mut b, rel)?;
    }
    let pres = b.build()?;
    let g = build_group(pres)?.with_label(spec.to_string());
    let lookup = |n: &str| g.presentation().and_then(|p| p.index_of(n)).map(|i| g.gens()[i]);
    for rel in &recipe.printed {
        let (l, r) = parse_relation(rel)?;
        if l.eval(&g, &lookup)? != r.eval(&g, &lookup)? {
            return Err(Error::Consistency(format!(
                "{spec}: relation {rel} does not hold"
            )));
        }
    }
    let expected = recipe.log_order + spec.abelian_log();
    if g.log_order() != expected {
        return Err(Error::Consistency(format!(
            "{spec}: order p^{} instead of p^{expected}",
            g.log_order()
        )));
    }
    Ok(g)
}

/// Installs a relation of the form `x^N = w`, `[x, y] = w` or `x^y = w`.
pub fn apply_pc_relation(b: &mut PcBuilder, rel: &str) -> Result<()> {
    use crate::words::Expr;
    let (l, r) = parse_relation(rel)?;
    let idx = |n: &str| b.index_of(n);
    let w = r.to_word(&idx)?;
    let gen = |e: &Expr| -> Result<usize> {
        e.as_gen()
            .and_then(|n| b.index_of(n))
            .ok_or_else(|| Error::InvalidPresentation(format!("{rel}: expected a generator, got {e}")))
    };
    match &l {
        Expr::Pow(x, _) | Expr::Conj(x, _) | Expr::Comm(x, _) => {
            let _ = gen(x)?;
        }
        _ => {
            return Err(Error::InvalidPresentation(format!(
                "{rel}: left side must be a power, conjugate or commutator"
            )))
        }
    }
    match l {
        Expr::Pow(x, k) => {
            let g = gen(&x)?;
            let _ = k;
            b.power(g, w);
        }
        Expr::Conj(x, y) => {
            let (gx, gy) = (gen(&x)?, gen(&y)?);
            b.conj(gx, gy, w);
        }
        Expr::Comm(x, y) => {
            let (gx, gy) = (gen(&x)?, gen(&y)?);
            b.comm(gx, gy, w);
        }
        _ => unreachable!(),
    }
    Ok(())
}

pub fn mk_minimal_nonabelian(t: RedeiType, p: u64) -> Result<Group> {
    let spec = match t {
        RedeiType::Q8 => FamilySpec::new("Q8", p, &[])?,
        RedeiType::Mp { m, n } => FamilySpec::new("Mp", p, &[("m", m as i64), ("n", n as i64)])?,
        RedeiType::Mp1 { m, n } => {
            FamilySpec::new("Mp1", p, &[("m", m as i64), ("n", n as i64)])?
        }
    };
    mk_family(&spec)
}

/// Metacyclic constructors (`MC`, `MC2I.*`, `MC2II`, `MC2III`).
pub fn mk_metacyclic(spec: &FamilySpec) -> Result<Group> {
    if spec.info().heading != Heading::Metacyclic {
        return Err(Error::param(&spec.label, "metacyclic family label"));
    }
    mk_family(spec)
}

pub fn mk_abelian(t: &AbelianType) -> Result<Group> {
    let mut b = PcBuilder::new(t.p);
    for (i, &o) in t.partition.iter().enumerate() {
        let e = log_p(o, t.p);
        if t.p.pow(e) != o {
            return Err(Error::param("abelian", format!("factor {o} is a power of {}", t.p)));
        }
        b.gen(&format!("e{}", i + 1), e);
    }
    Ok(build_group(b.build()?)?.with_label(format!("abelian{t}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predicates::is_minimal_nonabelian;
    use crate::structure::{derived_subgroup, nilpotency_class};

    #[test]
    fn redei_constructors() {
        let q = mk_minimal_nonabelian(RedeiType::Q8, 2).unwrap();
        assert_eq!(q.order(), 8);
        let m = mk_minimal_nonabelian(RedeiType::Mp { m: 2, n: 1 }, 3).unwrap();
        assert_eq!(m.order(), 27);
        assert_eq!(derived_subgroup(&m).order(), 3);
        assert_eq!(is_minimal_nonabelian(&m).1, Some(RedeiType::Mp { m: 2, n: 1 }));
        assert!(matches!(
            mk_minimal_nonabelian(RedeiType::Mp1 { m: 1, n: 1 }, 2),
            Err(Error::Param { .. })
        ));
        assert!(mk_minimal_nonabelian(RedeiType::Mp { m: 1, n: 1 }, 3).is_err());
    }

    #[test]
    fn metacyclic_orders() {
        let g = mk_metacyclic(
            &FamilySpec::new("MC", 3, &[("r", 1), ("s", 1), ("t", 0), ("u", 1)]).unwrap(),
        )
        .unwrap();
        assert_eq!(g.order(), 243);
        assert_eq!(derived_subgroup(&g).order(), 9);
        let d16 = mk_metacyclic(&FamilySpec::new("MC2I.D", 2, &[("n", 4)]).unwrap()).unwrap();
        assert_eq!(d16.order(), 16);
        let ab = mk_metacyclic(
            &FamilySpec::new("MC", 3, &[("r", 1), ("s", 0), ("t", 0), ("u", 0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(ab.order(), 9);
        assert!(ab.is_abelian());
    }

    #[test]
    fn families_build() {
        let c3 = mk_family(
            &FamilySpec::new("C3", 3, &[("m1", 1), ("m2", 1), ("m3", 1)]).unwrap(),
        )
        .unwrap();
        assert_eq!(c3.order(), 243);
        let b4 = mk_family(&FamilySpec::new("B4", 3, &[]).unwrap()).unwrap();
        assert_eq!(nilpotency_class(&b4), 3);
        let err = mk_family(&FamilySpec::new("C4", 2, &[("m1", 1), ("m2", 1), ("m3", 1)]).unwrap());
        match err {
            Err(Error::Param { clause, .. }) => assert_eq!(clause, "p > 2"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn abelian_factor_rules() {
        let s = FamilySpec::new("C3", 3, &[("m1", 1), ("m2", 1), ("m3", 1)])
            .unwrap()
            .with_abelian(&[9]);
        assert!(matches!(s.validate(), Err(Error::Param { .. })));
        let s = FamilySpec::new("F1", 2, &[("r", 2), ("s", 0), ("u", 2)]).unwrap();
        assert!(matches!(s.validate(), Err(Error::Param { clause, .. }) if clause == "A != 1"));
        let g = mk_family(&s.with_abelian(&[2])).unwrap();
        assert_eq!(g.order(), 128);
    }
}
