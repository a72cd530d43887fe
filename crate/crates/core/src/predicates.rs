//! Metahamiltonian deciders, minimal non-abelian recognition, A_t index,
//! metacyclic and Hamiltonian tests.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{log_p, Group};
use crate::structure::{
    abelian_type, derived_of, derived_subgroup, frattini, lower_central_series,
    minimal_generating_set, quotient,
};
use crate::subgroups::{
    cyclic_subgroups, enumerate_subgroups_with, is_abelian, is_normal, join, join_elements,
    EnumBudget, Subgroup,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RedeiType {
    Q8,
    /// `<a, b | a^{p^m} = b^{p^n} = 1, a^b = a^{1+p^{m-1}}>`
    Mp { m: u32, n: u32 },
    /// `<a, b, c | a^{p^m} = b^{p^n} = c^p = 1, [a, b] = c, c central>`
    Mp1 { m: u32, n: u32 },
}

impl fmt::Display for RedeiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RedeiType::Q8 => write!(f, "Q8"),
            RedeiType::Mp { m, n } => write!(f, "Mp({m},{n})"),
            RedeiType::Mp1 { m, n } => write!(f, "Mp({m},{n},1)"),
        }
    }
}

/// Every proper subgroup is abelian or normal, by full enumeration.
pub fn is_metahamiltonian_def(g: &Group, budget: EnumBudget) -> Result<bool> {
    if g.is_abelian() {
        return Ok(false);
    }
    let subs = enumerate_subgroups_with(g, budget)?;
    Ok(subs
        .iter()
        .filter(|h| h.order() < g.order())
        .all(|h| is_abelian(g, h) || is_normal(g, h)))
}

/// Representatives `x` of the conjugacy classes of non-central cyclic
/// subgroups. Any 2-generated subgroup `<x, y>` is conjugate to one with `x`
/// among these, and conjugation fixes `G'`.
fn cyclic_class_reps(g: &Group) -> Vec<usize> {
    let p = g.p();
    let mut done = BitSet::new(g.order());
    let mut reps = Vec::new();
    for x in g.elements() {
        if done.contains(x) {
            continue;
        }
        // orbit of x under conjugation
        let mut orbit = vec![x];
        let mut seen = BitSet::from_indices(g.order(), [x]);
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for &s in g.gens() {
                let c = g.conj(y, s);
                if seen.insert(c) {
                    orbit.push(c);
                }
            }
            i += 1;
        }
        for &y in &orbit {
            let o = g.order_of(y);
            let mut z = y;
            for k in 1..=o {
                if k % p != 0 {
                    done.insert(z);
                }
                z = g.mul(z, y);
            }
        }
        let central = g.gens().iter().all(|&s| g.commute(x, s));
        if !central {
            reps.push(x);
        }
    }
    reps
}

/// Calls `visit(y)` for one `y` from each class `{y^j x^k : p does not divide j}`
/// among elements not commuting with `x`; those classes generate the same
/// subgroup together with `x`. Stops early when `visit` returns false.
fn for_each_partner(g: &Group, x: usize, mut visit: impl FnMut(usize) -> bool) -> bool {
    let p = g.p();
    let cx: Vec<usize> = {
        let mut v = vec![g.identity()];
        let mut z = x;
        while z != g.identity() {
            v.push(z);
            z = g.mul(z, x);
        }
        v
    };
    let mut done = BitSet::new(g.order());
    for y in g.elements() {
        if done.contains(y) || g.commute(x, y) {
            continue;
        }
        if !visit(y) {
            return false;
        }
        let o = g.order_of(y);
        let mut yj = y;
        for j in 1..=o {
            if j % p != 0 {
                for &c in &cx {
                    done.insert(g.mul(yj, c));
                }
            }
            yj = g.mul(yj, y);
        }
    }
    true
}

/// Whether `<x, y>` contains all of `target`, stopping as soon as it does.
fn closure_covers(g: &Group, x: usize, y: usize, target: &Subgroup) -> bool {
    let need = target.order();
    let mut members = BitSet::new(g.order());
    members.insert(g.identity());
    let mut hit = 1;
    if hit == need {
        return true;
    }
    let mut queue = vec![g.identity()];
    while let Some(h) = queue.pop() {
        for s in [x, y] {
            let z = g.mul(h, s);
            if members.insert(z) {
                if target.contains(z) {
                    hit += 1;
                    if hit == need {
                        return true;
                    }
                }
                queue.push(z);
            }
        }
    }
    false
}

/// `G'` lies in every subgroup generated by a non-commuting pair.
pub fn is_metahamiltonian_pairs(g: &Group) -> bool {
    if g.is_abelian() {
        return false;
    }
    let d = derived_subgroup(g);
    let reps = cyclic_class_reps(g);
    reps.par_iter()
        .all(|&x| for_each_partner(g, x, |y| closure_covers(g, x, y, &d)))
}

/// Pairs `(x, y)` with `[x, y] != 1` and `G'` not inside `<x, y>`, if any.
pub fn metahamiltonian_witness(g: &Group) -> Option<(usize, usize)> {
    let d = derived_subgroup(g);
    cyclic_class_reps(g).into_par_iter().find_map_first(|x| {
        let mut found = None;
        for_each_partner(g, x, |y| {
            if closure_covers(g, x, y, &d) {
                true
            } else {
                found = Some((x, y));
                false
            }
        });
        found
    })
}

/// Maximal subgroups, one per hyperplane of `G/Phi(G)`.
pub fn maximal_subgroups(g: &Group) -> Vec<Subgroup> {
    let phi = frattini(g);
    let basis = minimal_generating_set(g);
    let d = basis.len();
    let p = g.p();
    let mut out = Vec::new();
    // functionals normalized so the first nonzero coefficient is 1
    let total = p.pow(d as u32);
    for code in 1..total {
        let mut f = vec![0u64; d];
        let mut c = code;
        for fi in f.iter_mut() {
            *fi = c % p;
            c /= p;
        }
        let pivot = f.iter().position(|&v| v != 0).unwrap();
        if f[pivot] != 1 {
            continue;
        }
        let lifts: Vec<usize> = (0..d)
            .filter(|&i| i != pivot)
            .map(|i| {
                let back = g.pow(basis[pivot], -(f[i] as i64));
                g.mul(basis[i], back)
            })
            .collect();
        out.push(join_elements(g, &phi, &lifts));
    }
    out
}

pub fn is_minimal_nonabelian(g: &Group) -> (bool, Option<RedeiType>) {
    if g.is_abelian() {
        return (false, None);
    }
    if !maximal_subgroups(g).iter().all(|m| is_abelian(g, m)) {
        return (false, None);
    }
    (true, Some(redei_type(g)))
}

/// Type of a group already known to be minimal non-abelian.
fn redei_type(g: &Group) -> RedeiType {
    let p = g.p();
    let orders = g.element_orders();
    if g.order() == 8 && orders.iter().filter(|&&o| o == 2).count() == 1 {
        return RedeiType::Q8;
    }
    let d = derived_subgroup(g);
    let t = abelian_type(g, &d).expect("G' is normal with abelian quotient");
    let e = t.exponents();
    let (alpha, beta) = (e[0], e.get(1).copied().unwrap_or(0));
    if is_metacyclic(g) {
        let exp = log_p(g.exponent(), p);
        if alpha == beta || exp == alpha + 1 {
            RedeiType::Mp { m: alpha + 1, n: beta }
        } else {
            RedeiType::Mp { m: beta + 1, n: alpha }
        }
    } else {
        RedeiType::Mp1 { m: alpha, n: beta }
    }
}

/// `t` with `p^{t-1}` the largest index of a non-abelian subgroup.
///
/// Metacyclic groups take `log_p |G'|`; when the group fits in
/// `cross_check_order` the value is confirmed by the pair scan.
pub fn a_index(g: &Group, cross_check_order: usize) -> Result<u32> {
    if g.is_abelian() {
        return Err(Error::Undefined);
    }
    if is_metacyclic(g) {
        let t = log_p(derived_subgroup(g).order() as u64, g.p());
        if g.order() <= cross_check_order {
            let slow = a_index_by_pairs(g)?;
            if slow != t {
                return Err(Error::Consistency(format!(
                    "metacyclic A-index {t} disagrees with pair scan {slow}"
                )));
            }
        }
        return Ok(t);
    }
    a_index_by_pairs(g)
}

/// Every non-abelian subgroup contains a minimal non-abelian one, and those
/// are 2-generated, so the smallest non-abelian subgroup is the smallest
/// `<x, y>` over non-commuting pairs.
pub fn a_index_by_pairs(g: &Group) -> Result<u32> {
    if g.is_abelian() {
        return Err(Error::Undefined);
    }
    let best = cyclic_class_reps(g)
        .par_iter()
        .map(|&x| {
            let mut best = usize::MAX;
            for_each_partner(g, x, |y| {
                let size = g.closure(&BitSet::new(g.order()), &[x, y]).count();
                best = best.min(size);
                true
            });
            best
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(index_to_t(g, best))
}

/// Oracle version over the full subgroup list.
pub fn a_index_by_enumeration(g: &Group, budget: EnumBudget) -> Result<u32> {
    if g.is_abelian() {
        return Err(Error::Undefined);
    }
    let subs = enumerate_subgroups_with(g, budget)?;
    let best = subs
        .iter()
        .filter(|h| !is_abelian(g, h))
        .map(|h| h.order())
        .min()
        .unwrap();
    Ok(index_to_t(g, best))
}

fn index_to_t(g: &Group, smallest: usize) -> u32 {
    log_p((g.order() / smallest) as u64, g.p()) + 1
}

/// A cyclic normal subgroup with cyclic quotient exists.
pub fn is_metacyclic(g: &Group) -> bool {
    let p = g.p();
    let exp = g.exponent() as usize;
    let cyclics = cyclic_subgroups(g);
    cyclics
        .iter()
        .filter(|c| c.order() * exp >= g.order() && is_normal(g, c))
        .any(|c| {
            let idx = g.order() / c.order();
            if idx == 1 {
                return true;
            }
            // G/C is cyclic iff some y has order idx modulo C
            let k = (idx as u64 / p) as i64;
            g.elements().any(|y| !c.contains(g.pow(y, k)))
        })
}

/// Metacyclicity read off `G / Phi(G') gamma_3(G)`.
pub fn is_metacyclic_via_quotient(g: &Group) -> bool {
    let d = derived_subgroup(g);
    let dd = derived_of(g, &d);
    let p = g.p() as i64;
    let powers: Vec<usize> = d.iter().map(|x| g.pow(x, p)).collect();
    let phi_d = join_elements(g, &dd, &powers);
    let lcs = lower_central_series(g);
    let n = match lcs.get(2) {
        Some(g3) => join(g, &phi_d, g3),
        None => phi_d,
    };
    let q = quotient(g, &n).expect("characteristic subgroups are normal");
    is_metacyclic(&q.group)
}

/// Non-abelian with every cyclic subgroup normal.
pub fn is_hamiltonian(g: &Group) -> bool {
    !g.is_abelian() && cyclic_subgroups(g).iter().all(|c| is_normal(g, c))
}
