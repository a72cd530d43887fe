//! Subgroups as id bitsets, closure, normality and full enumeration by cyclic
//! extension.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::Group;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: BitSet,
    gens: Vec<usize>,
    order: usize,
}

impl Subgroup {
    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Subgroup from a member set already known to be closed; generators are
    /// picked greedily.
    pub fn from_members(g: &Group, members: BitSet) -> Subgroup {
        let mut gens = Vec::new();
        let mut span = BitSet::new(g.order());
        span.insert(g.identity());
        let target = members.count();
        let orders = g.element_orders();
        let mut ids: Vec<usize> = members.iter().collect();
        ids.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
        for x in ids {
            if span.count() == target {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = g.closure(&span, &gens);
            }
        }
        Subgroup {
            order: target,
            members,
            gens,
        }
    }
}

pub fn trivial(g: &Group) -> Subgroup {
    Subgroup {
        members: BitSet::from_indices(g.order(), [g.identity()]),
        gens: Vec::new(),
        order: 1,
    }
}

pub fn whole(g: &Group) -> Subgroup {
    Subgroup {
        members: BitSet::full(g.order()),
        gens: g.gens().to_vec(),
        order: g.order(),
    }
}

/// `<S>` by breadth-first closure.
pub fn generated(g: &Group, s: &[usize]) -> Subgroup {
    let gens: Vec<usize> = s.iter().copied().filter(|&x| x != g.identity()).collect();
    let members = g.closure(&BitSet::new(g.order()), &gens);
    Subgroup {
        order: members.count(),
        members,
        gens,
    }
}

/// `<H, S>`.
pub fn join_elements(g: &Group, h: &Subgroup, s: &[usize]) -> Subgroup {
    let mut gens = h.gens.clone();
    gens.extend(s.iter().copied().filter(|&x| !h.contains(x)));
    let members = g.closure(&h.members, &gens);
    Subgroup {
        order: members.count(),
        members,
        gens,
    }
}

pub fn join(g: &Group, a: &Subgroup, b: &Subgroup) -> Subgroup {
    join_elements(g, a, &b.gens)
}

pub fn intersection(g: &Group, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut m = a.members.clone();
    m.intersect_with(&b.members);
    Subgroup::from_members(g, m)
}

/// Smallest subgroup containing `s` that is normalized by `within`.
pub fn normal_closure_in(g: &Group, s: &[usize], within: &[usize]) -> Subgroup {
    let mut gens: Vec<usize> = Vec::new();
    let mut members = BitSet::from_indices(g.order(), [g.identity()]);
    let mut pending: Vec<usize> = s.to_vec();
    while let Some(x) = pending.pop() {
        if members.contains(x) {
            continue;
        }
        gens.push(x);
        members = g.closure(&members, &gens);
        // conjugates of the new generator
        for &y in within {
            let c = g.conj(x, y);
            if !members.contains(c) {
                pending.push(c);
            }
        }
    }
    Subgroup {
        order: members.count(),
        members,
        gens,
    }
}

pub fn normal_closure(g: &Group, s: &[usize]) -> Subgroup {
    normal_closure_in(g, s, g.gens())
}

pub fn conjugate(g: &Group, h: &Subgroup, x: usize) -> Subgroup {
    let members = BitSet::from_indices(g.order(), h.iter().map(|y| g.conj(y, x)));
    Subgroup {
        order: h.order,
        members,
        gens: h.gens.iter().map(|&y| g.conj(y, x)).collect(),
    }
}

#[inline]
pub fn normalizes(g: &Group, h: &Subgroup, x: usize) -> bool {
    h.gens.iter().all(|&y| h.contains(g.conj(y, x)))
}

pub fn is_normal(g: &Group, h: &Subgroup) -> bool {
    g.gens().iter().all(|&x| normalizes(g, h, x))
}

pub fn normalizer(g: &Group, h: &Subgroup) -> Subgroup {
    let members = BitSet::from_indices(g.order(), g.elements().filter(|&x| normalizes(g, h, x)));
    Subgroup::from_members(g, members)
}

pub fn is_abelian(g: &Group, h: &Subgroup) -> bool {
    h.gens
        .iter()
        .enumerate()
        .all(|(i, &a)| h.gens[i + 1..].iter().all(|&b| g.commute(a, b)))
}

/// Budget for complete enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumBudget {
    /// Largest group order accepted.
    pub max_order: usize,
    /// Optional cap on the number of subgroups produced.
    pub max_subgroups: Option<usize>,
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget {
            max_order: 729,
            max_subgroups: None,
        }
    }
}

impl EnumBudget {
    pub fn with_max_order(max_order: usize) -> Self {
        EnumBudget {
            max_order,
            ..Self::default()
        }
    }
}

pub fn enumerate_subgroups(g: &Group) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_with(g, EnumBudget::default())
}

/// Every subgroup exactly once, ordered by order and then by discovery.
///
/// Layer `k + 1` is obtained from layer `k` by adjoining elements `x` that
/// normalize `H` and have `x^p` in `H`; every subgroup of a p-group of order
/// `p^{k+1}` contains a normal subgroup of index `p`, so nothing is missed.
pub fn enumerate_subgroups_with(g: &Group, budget: EnumBudget) -> Result<Vec<Subgroup>> {
    if g.order() > budget.max_order {
        return Err(Error::BudgetExceeded(format!(
            "group order {} exceeds subgroup enumeration bound {}",
            g.order(),
            budget.max_order
        )));
    }
    let p = g.p() as i64;
    let n = g.order();
    let pth: Vec<usize> = g.elements().map(|x| g.pow(x, p)).collect();
    let mut all = vec![trivial(g)];
    let mut layer = vec![trivial(g)];
    while !layer.is_empty() {
        let mut seen: HashSet<BitSet> = HashSet::new();
        let mut next = Vec::new();
        for h in &layer {
            let mut covered = h.members.clone();
            for x in 0..n {
                if covered.contains(x) || !h.contains(pth[x]) || !normalizes(g, h, x) {
                    continue;
                }
                let k = extend(g, h, x);
                covered.union_with(&k.members);
                if seen.insert(k.members.clone()) {
                    next.push(k);
                    if let Some(cap) = budget.max_subgroups {
                        if all.len() + next.len() > cap {
                            return Err(Error::BudgetExceeded(format!(
                                "more than {cap} subgroups"
                            )));
                        }
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    Ok(all)
}

/// `H<x>` for `x` normalizing `H` with `x^p` in `H`.
fn extend(g: &Group, h: &Subgroup, x: usize) -> Subgroup {
    let mut members = h.members.clone();
    let mut coset: Vec<usize> = h.iter().collect();
    for _ in 1..g.p() {
        for y in coset.iter_mut() {
            *y = g.mul(*y, x);
            members.insert(*y);
        }
    }
    let mut gens = h.gens.clone();
    gens.push(x);
    Subgroup {
        order: h.order * g.p() as usize,
        members,
        gens,
    }
}

/// Distinct cyclic subgroups, one generator each (the smallest id).
pub fn cyclic_subgroups(g: &Group) -> Vec<Subgroup> {
    let mut seen = BitSet::new(g.order());
    let mut out = Vec::new();
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        let c = generated(g, &[x]);
        // every generator of <x> is x^k with p not dividing k
        let p = g.p();
        let o = g.order_of(x);
        for k in 1..o {
            if k % p != 0 {
                seen.insert(g.pow(x, k as i64));
            }
        }
        out.push(c);
    }
    out
}

/// Counts of subgroups by order, as `(order, count)` pairs.
pub fn counts_by_order(subs: &[Subgroup]) -> Vec<(usize, usize)> {
    let mut map = std::collections::BTreeMap::new();
    for s in subs {
        *map.entry(s.order()).or_insert(0) += 1;
    }
    map.into_iter().collect()
}
