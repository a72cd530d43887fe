//! Isomorphism invariants and a backtracking isomorphism test.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::group::Group;
use crate::structure::{
    abelian_type, abelian_type_of_subgroup, center, derived_subgroup, frattini, min_generators,
    minimal_generating_set, nilpotency_class,
};
use crate::subgroups::{enumerate_subgroups_with, is_abelian, is_normal, EnumBudget};

pub const DEFAULT_ISO_BUDGET: usize = 512;

/// Label-free data attached to one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementInvariant {
    pub order: u64,
    pub class_size: usize,
    pub in_derived: bool,
    pub in_center: bool,
    pub in_frattini: bool,
    /// Number of `y` with `y^p = x`.
    pub pth_roots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupCounts {
    pub order: usize,
    pub total: usize,
    pub normal: usize,
    pub abelian: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub order: usize,
    pub exponent: u64,
    pub class: usize,
    pub d: usize,
    pub center_order: usize,
    pub abelianization: Vec<u64>,
    pub derived_type: Vec<u64>,
    pub order_histogram: BTreeMap<u64, usize>,
    /// Conjugacy class size to number of classes.
    pub class_sizes: BTreeMap<usize, usize>,
    pub element_profile: Vec<(ElementInvariant, usize)>,
    pub subgroup_counts: Option<Vec<SubgroupCounts>>,
}

impl Fingerprint {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fingerprints serialize")
    }

    /// Hex sha256 of the canonical JSON.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

/// Conjugacy classes as lists of ids, each sorted, ordered by first member.
pub fn conjugacy_classes(g: &Group) -> Vec<Vec<usize>> {
    let mut seen = BitSet::new(g.order());
    let mut out = Vec::new();
    for x in g.elements() {
        if seen.contains(x) {
            continue;
        }
        seen.insert(x);
        let mut class = vec![x];
        let mut i = 0;
        while i < class.len() {
            let y = class[i];
            for &s in g.gens() {
                let c = g.conj(y, s);
                if seen.insert(c) {
                    class.push(c);
                }
            }
            i += 1;
        }
        class.sort_unstable();
        out.push(class);
    }
    out
}

pub fn element_invariants(g: &Group) -> Vec<ElementInvariant> {
    let d = derived_subgroup(g);
    let z = center(g);
    let f = frattini(g);
    let mut class_size = vec![0usize; g.order()];
    for c in conjugacy_classes(g) {
        for &x in &c {
            class_size[x] = c.len();
        }
    }
    let p = g.p() as i64;
    let mut roots = vec![0usize; g.order()];
    for x in g.elements() {
        roots[g.pow(x, p)] += 1;
    }
    let orders = g.element_orders();
    g.elements()
        .map(|x| ElementInvariant {
            order: orders[x] as u64,
            class_size: class_size[x],
            in_derived: d.contains(x),
            in_center: z.contains(x),
            in_frattini: f.contains(x),
            pth_roots: roots[x],
        })
        .collect()
}

pub fn fingerprint(g: &Group) -> Fingerprint {
    fingerprint_with(g, Some(EnumBudget::with_max_order(256)))
}

/// Fingerprint; subgroup counts are included when the budget admits a full
/// enumeration.
pub fn fingerprint_with(g: &Group, budget: Option<EnumBudget>) -> Fingerprint {
    let d = derived_subgroup(g);
    let z = center(g);
    let mut order_histogram = BTreeMap::new();
    for &o in g.element_orders() {
        *order_histogram.entry(o as u64).or_insert(0) += 1;
    }
    let mut class_sizes = BTreeMap::new();
    for c in conjugacy_classes(g) {
        *class_sizes.entry(c.len()).or_insert(0) += 1;
    }
    let mut profile: BTreeMap<ElementInvariant, usize> = BTreeMap::new();
    for inv in element_invariants(g) {
        *profile.entry(inv).or_insert(0) += 1;
    }
    let subgroup_counts = budget
        .and_then(|b| enumerate_subgroups_with(g, b).ok())
        .map(|subs| {
            let mut by: BTreeMap<usize, SubgroupCounts> = BTreeMap::new();
            for h in &subs {
                let e = by.entry(h.order()).or_insert(SubgroupCounts {
                    order: h.order(),
                    total: 0,
                    normal: 0,
                    abelian: 0,
                });
                e.total += 1;
                e.normal += is_normal(g, h) as usize;
                e.abelian += is_abelian(g, h) as usize;
            }
            by.into_values().collect()
        });
    Fingerprint {
        order: g.order(),
        exponent: g.exponent(),
        class: nilpotency_class(g),
        d: min_generators(g),
        center_order: z.order(),
        abelianization: abelian_type(g, &d)
            .expect("G/G' is abelian")
            .partition,
        derived_type: abelian_type_of_subgroup(g, &d)
            .map(|t| t.partition)
            .unwrap_or_default(),
        order_histogram,
        class_sizes,
        element_profile: profile.into_iter().collect(),
        subgroup_counts,
    }
}

pub fn are_isomorphic(g: &Group, h: &Group) -> Result<bool> {
    are_isomorphic_with(g, h, DEFAULT_ISO_BUDGET)
}

/// Decides isomorphism by fingerprints, then by searching images of a fixed
/// minimal generating tuple of `g`.
pub fn are_isomorphic_with(g: &Group, h: &Group, budget: usize) -> Result<bool> {
    if g.order() != h.order() || g.p() != h.p() && g.order() > 1 {
        return Ok(false);
    }
    if g.order() > budget {
        return Err(Error::BudgetExceeded(format!(
            "isomorphism test above order {budget}"
        )));
    }
    if fingerprint_with(g, None) != fingerprint_with(h, None) {
        return Ok(false);
    }
    Ok(find_isomorphism(g, h).is_some())
}

/// Search for an isomorphism; returns the image of every id of `g`.
pub fn find_isomorphism(g: &Group, h: &Group) -> Option<Vec<usize>> {
    if g.order() != h.order() {
        return None;
    }
    if g.order() == 1 {
        return Some(vec![h.identity()]);
    }
    let gens = minimal_generating_set(g);
    let inv_g = element_invariants(g);
    let inv_h = element_invariants(h);
    let mut by_inv: HashMap<ElementInvariant, Vec<usize>> = HashMap::new();
    for y in h.elements() {
        by_inv.entry(inv_h[y]).or_default().push(y);
    }
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| by_inv.get(&inv_g[x]).cloned().unwrap_or_default())
        .collect();
    if cands.iter().any(|c| c.is_empty()) {
        return None;
    }
    cands[0].par_iter().find_map_any(|&first| {
        let mut images = vec![first];
        search(g, h, &gens, &cands, &inv_g, &inv_h, &mut images)
    })
}

fn search(
    g: &Group,
    h: &Group,
    gens: &[usize],
    cands: &[Vec<usize>],
    inv_g: &[ElementInvariant],
    inv_h: &[ElementInvariant],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let k = images.len();
    if k == gens.len() {
        return extend(g, h, gens, images);
    }
    for &y in &cands[k] {
        // products and commutators with earlier generators must match
        let ok = (0..k).all(|i| {
            let (a, b) = (gens[i], gens[k]);
            let (fa, fb) = (images[i], y);
            inv_g[g.mul(a, b)] == inv_h[h.mul(fa, fb)]
                && inv_g[g.comm(a, b)] == inv_h[h.comm(fa, fb)]
        });
        if !ok {
            continue;
        }
        images.push(y);
        if let Some(map) = search(g, h, gens, cands, inv_g, inv_h, images) {
            return Some(map);
        }
        images.pop();
    }
    None
}

/// Extends generator images along the Cayley graph and verifies the result
/// is a bijective homomorphism.
fn extend(g: &Group, h: &Group, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    map[g.identity()] = h.identity();
    let mut queue = vec![g.identity()];
    let mut used = BitSet::new(n);
    used.insert(h.identity());
    while let Some(x) = queue.pop() {
        for (i, &s) in gens.iter().enumerate() {
            let xs = g.mul(x, s);
            let fxs = h.mul(map[x], images[i]);
            if map[xs] == usize::MAX {
                if !used.insert(fxs) {
                    return None;
                }
                map[xs] = fxs;
                queue.push(xs);
            } else if map[xs] != fxs {
                return None;
            }
        }
    }
    if map.iter().any(|&v| v == usize::MAX) {
        return None;
    }
    for x in 0..n {
        for y in 0..n {
            if map[g.mul(x, y)] != h.mul(map[x], map[y]) {
                return None;
            }
        }
    }
    Some(map)
}
