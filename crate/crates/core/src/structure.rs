//! Series, characteristic subgroups, quotients and abelian invariants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::{log_p, table_group_unchecked, Group};
use crate::subgroups::{
    generated, is_abelian, is_normal, join_elements, normal_closure, normal_closure_in,
    whole, Subgroup,
};

/// Invariant-factor type of a finite abelian p-group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianType {
    pub p: u64,
    /// Non-increasing cyclic factor orders.
    pub partition: Vec<u64>,
}

impl AbelianType {
    pub fn trivial(p: u64) -> Self {
        AbelianType {
            p,
            partition: Vec::new(),
        }
    }

    /// From factor orders in any order; ones are dropped.
    pub fn new(p: u64, mut orders: Vec<u64>) -> Self {
        orders.retain(|&o| o > 1);
        orders.sort_unstable_by(|a, b| b.cmp(a));
        AbelianType {
            p,
            partition: orders,
        }
    }

    pub fn order(&self) -> u64 {
        self.partition.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.partition.first().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.partition.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.partition.is_empty()
    }

    /// Exponents `e_i` with factors `p^{e_i}`.
    pub fn exponents(&self) -> Vec<u32> {
        self.partition.iter().map(|&o| log_p(o, self.p)).collect()
    }
}

impl fmt::Display for AbelianType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.partition.iter().map(|o| o.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn commutators_of(g: &Group, gens: &[usize], with: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for &a in gens {
        for &b in with {
            let c = g.comm(a, b);
            if c != g.identity() {
                out.push(c);
            }
        }
    }
    out
}

pub fn derived_subgroup(g: &Group) -> Subgroup {
    normal_closure(g, &commutators_of(g, g.gens(), g.gens()))
}

/// `[H, H]` for a subgroup `H`.
pub fn derived_of(g: &Group, h: &Subgroup) -> Subgroup {
    normal_closure_in(g, &commutators_of(g, h.gens(), h.gens()), h.gens())
}

/// `G, G', G'', ...` ending with the trivial subgroup.
pub fn derived_series(g: &Group) -> Vec<Subgroup> {
    let mut series = vec![whole(g)];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            return series;
        }
        let next = derived_of(g, last);
        if next.order() == last.order() {
            // perfect subgroup; cannot happen in a p-group
            return series;
        }
        series.push(next);
    }
}

/// `gamma_1 = G, gamma_2, ...` ending with the trivial subgroup.
pub fn lower_central_series(g: &Group) -> Vec<Subgroup> {
    let mut series = vec![whole(g)];
    loop {
        let last = series.last().unwrap();
        if last.is_trivial() {
            return series;
        }
        let next = normal_closure(g, &commutators_of(g, last.gens(), g.gens()));
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn nilpotency_class(g: &Group) -> usize {
    lower_central_series(g).len() - 1
}

pub fn center(g: &Group) -> Subgroup {
    let members = BitSet::from_indices(
        g.order(),
        g.elements()
            .filter(|&x| g.gens().iter().all(|&y| g.commute(x, y))),
    );
    Subgroup::from_members(g, members)
}

/// `Lambda_m = {x : x^{p^m} = 1}`.
pub fn lambda_set(g: &Group, m: u32) -> BitSet {
    let q = g.p().pow(m);
    let orders = g.element_orders();
    BitSet::from_indices(
        g.order(),
        g.elements().filter(|&x| q % orders[x] as u64 == 0),
    )
}

/// `V_m = {x^{p^m}}`.
pub fn v_set(g: &Group, m: u32) -> BitSet {
    let q = g.p().pow(m) as i64;
    BitSet::from_indices(g.order(), g.elements().map(|x| g.pow(x, q)))
}

pub fn omega(g: &Group, m: u32) -> Subgroup {
    let s: Vec<usize> = lambda_set(g, m).iter().collect();
    Subgroup::from_members(g, generated(g, &s).members().clone())
}

pub fn agemo(g: &Group, m: u32) -> Subgroup {
    let s: Vec<usize> = v_set(g, m).iter().collect();
    Subgroup::from_members(g, generated(g, &s).members().clone())
}

/// `Phi(G) = <G', V_1(G)>`.
pub fn frattini(g: &Group) -> Subgroup {
    let d = derived_subgroup(g);
    let mut powers: Vec<usize> = v_set(g, 1).iter().collect();
    powers.retain(|&x| !d.contains(x));
    let j = join_elements(g, &d, &powers);
    Subgroup::from_members(g, j.members().clone())
}

pub fn min_generators(g: &Group) -> usize {
    let f = frattini(g);
    log_p((g.order() / f.order()) as u64, g.p()) as usize
}

/// Generating set of size `d(G)` whose images form a basis of `G/Phi(G)`.
pub fn minimal_generating_set(g: &Group) -> Vec<usize> {
    let f = frattini(g);
    let mut span = f.clone();
    let mut out = Vec::new();
    for x in g.elements() {
        if span.order() == g.order() {
            break;
        }
        if !span.contains(x) {
            out.push(x);
            span = join_elements(g, &span, &[x]);
        }
    }
    out
}

pub fn exponent_of(g: &Group, h: &Subgroup) -> u64 {
    let orders = g.element_orders();
    h.iter().map(|x| orders[x] as u64).max().unwrap_or(1)
}

/// `G/N` on coset ids; coset ids follow the smallest member id.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: Group,
    /// `proj[x]` is the coset id of `x`.
    pub proj: Vec<usize>,
    /// Smallest element of each coset.
    pub reps: Vec<usize>,
}

pub fn quotient(g: &Group, n: &Subgroup) -> Result<Quotient> {
    if !is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    let mut proj = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    let nm: Vec<usize> = n.iter().collect();
    for x in g.elements() {
        if proj[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &y in &nm {
            proj[g.mul(x, y)] = c;
        }
    }
    let rows: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| proj[g.mul(a, b)]).collect())
        .collect();
    let group = table_group_unchecked(g.p(), rows, format!("{} / N", g.label()))?;
    Ok(Quotient { group, proj, reps })
}

/// Type of the abelian group `G/H`.
pub fn abelian_type(g: &Group, h: &Subgroup) -> Result<AbelianType> {
    let q = quotient(g, h)?;
    let qg = &q.group;
    if !qg.is_abelian() {
        return Err(Error::NotAbelianQuotient);
    }
    Ok(abelian_type_of_abelian(qg))
}

/// Type of an abelian group from the sizes of its `V_k` layers.
pub fn abelian_type_of_abelian(g: &Group) -> AbelianType {
    let p = g.p();
    // logs[k] = log_p |V_k(G)|; in an abelian group V_k is a subgroup
    let mut logs = vec![g.log_order()];
    let mut k = 1;
    while *logs.last().unwrap() > 0 {
        logs.push(log_p(v_set(g, k).count() as u64, p));
        k += 1;
    }
    // ranks[k] = number of invariants of order >= p^{k+1}
    let ranks: Vec<u32> = logs.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for (k, &r) in ranks.iter().enumerate() {
        let next = ranks.get(k + 1).copied().unwrap_or(0);
        for _ in 0..r - next {
            parts.push(p.pow(k as u32 + 1));
        }
    }
    AbelianType::new(p, parts)
}

/// Type of an abelian subgroup `H`.
pub fn abelian_type_of_subgroup(g: &Group, h: &Subgroup) -> Result<AbelianType> {
    if !is_abelian(g, h) {
        return Err(Error::NotAbelianQuotient);
    }
    let p = g.p();
    let mut logs = vec![log_p(h.order() as u64, p)];
    let mut q = 1i64;
    while *logs.last().unwrap() > 0 {
        q *= p as i64;
        let image = BitSet::from_indices(g.order(), h.iter().map(|x| g.pow(x, q)));
        logs.push(log_p(image.count() as u64, p));
    }
    let ranks: Vec<u32> = logs.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for (k, &r) in ranks.iter().enumerate() {
        let next = ranks.get(k + 1).copied().unwrap_or(0);
        for _ in 0..r - next {
            parts.push(p.pow(k as u32 + 1));
        }
    }
    Ok(AbelianType::new(p, parts))
}

/// `(xy)^p = x^p y^p` for all pairs.
pub fn is_p_abelian(g: &Group) -> bool {
    let p = g.p() as i64;
    let pth: Vec<usize> = g.elements().map(|x| g.pow(x, p)).collect();
    g.elements().all(|x| {
        g.elements()
            .all(|y| pth[g.mul(x, y)] == g.mul(pth[x], pth[y]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_group, ut_group};
    use crate::pc::PcBuilder;
    use crate::subgroups::trivial;

    fn c4xc2() -> Group {
        let mut b = PcBuilder::new(2);
        b.gen("a", 2);
        b.gen("b", 1);
        build_group(b.build().unwrap()).unwrap()
    }

    fn q8() -> Group {
        let mut b = PcBuilder::new(2);
        let g1 = b.gen("g1", 1);
        let g2 = b.gen("g2", 1);
        let g3 = b.gen("g3", 1);
        b.power(g1, vec![(g3, 1)]);
        b.power(g2, vec![(g3, 1)]);
        b.comm(g2, g1, vec![(g3, 1)]);
        build_group(b.build().unwrap()).unwrap()
    }

    #[test]
    fn abelian_invariants() {
        let g = c4xc2();
        let t = abelian_type(&g, &trivial(&g)).unwrap();
        assert_eq!(t.partition, vec![4, 2]);
        assert_eq!(omega(&g, 1).order(), 4);
        assert_eq!(agemo(&g, 1).order(), 2);
        assert!(omega(&g, 0).is_trivial());
        assert_eq!(agemo(&g, 0).order(), 8);
        assert_eq!(nilpotency_class(&g), 1);
        assert!(derived_subgroup(&g).is_trivial());
    }

    #[test]
    fn q8_structure() {
        let g = q8();
        assert_eq!(center(&g).order(), 2);
        assert_eq!(nilpotency_class(&g), 2);
        assert_eq!(min_generators(&g), 2);
        assert!(!is_p_abelian(&g));
        assert_eq!(minimal_generating_set(&g).len(), 2);
        let d = derived_subgroup(&g);
        assert_eq!(abelian_type(&g, &d).unwrap().partition, vec![2, 2]);
        assert_eq!(abelian_type(&g, &trivial(&g)), Err(Error::NotAbelianQuotient));
    }

    #[test]
    fn ut_series() {
        let g = ut_group(4, 2).unwrap();
        assert_eq!(nilpotency_class(&g), 3);
        assert_eq!(derived_series(&g).len(), 3);
        let h = crate::subgroups::generated(&g, &[1]);
        if !is_normal(&g, &h) {
            assert_eq!(abelian_type(&g, &h), Err(Error::NotNormal));
        }
    }
}
