//! Listing every valid spec of the classification families up to an order
//! bound.

use super::{AbelianFactor, FamilySpec, FAMILIES};
use crate::group::log_p;
use crate::numtheory::{is_prime, smallest_nonresidue};

/// Orders up to `p^max_log` for the prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderBound {
    pub p: u64,
    pub max_log: u32,
}

impl OrderBound {
    pub fn new(p: u64, max_log: u32) -> Self {
        OrderBound { p, max_log }
    }

    /// From a maximum order, which must be a power of `p`.
    pub fn from_order(p: u64, max_order: u64) -> Option<Self> {
        let k = log_p(max_order, p);
        (is_prime(p) && p.checked_pow(k) == Some(max_order)).then_some(OrderBound { p, max_log: k })
    }
}

/// Partitions (as non-increasing cyclic orders) with total log at most
/// `max_log` and every part at most `p^max_part`; includes the empty one.
pub fn abelian_types_up_to(p: u64, max_log: u32, max_part: u32) -> Vec<Vec<u64>> {
    fn go(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for e in (1..=cap.min(rest)).rev() {
            cur.push(e);
            go(rest - e, e, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    go(max_log, max_part, &mut Vec::new(), &mut raw);
    raw.sort_by_key(|v| (v.iter().sum::<u32>(), std::cmp::Reverse(v.clone())));
    raw.into_iter()
        .map(|v| v.into_iter().map(|e| p.pow(e)).collect())
        .collect()
}

fn param_values(label: &str, name: &str, p: u64, max: i64) -> Vec<i64> {
    match (label, name) {
        ("B3", "nu") => match smallest_nonresidue(p) {
            Ok(nr) => vec![1, nr as i64],
            Err(_) => vec![1],
        },
        ("B6", "r") => (1..=((p as i64 - 1) / 2)).collect(),
        _ => (0..=max).collect(),
    }
}

fn assignments(label: &str, names: &[&str], p: u64, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for name in names {
        let vals = param_values(label, name, p, max);
        out = out
            .into_iter()
            .flat_map(|a| {
                vals.iter().map(move |&v| {
                    let mut b = a.clone();
                    b.push(v);
                    b
                })
            })
            .collect();
    }
    out
}

/// Strictly increasing lists of length `f` with entries in `lo..=hi`, paired
/// with lists of positive entries of bounded sum.
fn f5_lists(f: usize, t_range: (i64, i64), r_budget: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut ts: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..f {
        ts = ts
            .into_iter()
            .flat_map(|v| {
                let lo = v.last().map_or(t_range.0, |&x| x + 1);
                (lo..=t_range.1).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    let mut rs: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..f {
        rs = rs
            .into_iter()
            .flat_map(|v| {
                let used: i64 = v.iter().sum();
                (1..=(r_budget - used)).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for t in &ts {
        for r in &rs {
            out.push((t.clone(), r.clone()));
        }
    }
    out
}

/// All valid specs of the classification families with `|G| <= p^max_log`,
/// ordered by prime, then family (registry order), then parameters, then
/// abelian factor.
pub fn enumerate_specs(bounds: &[OrderBound]) -> Vec<FamilySpec> {
    let mut bounds = bounds.to_vec();
    bounds.sort_by_key(|b| b.p);
    bounds.dedup_by_key(|b| b.p);
    let mut out = Vec::new();
    for b in bounds {
        if !is_prime(b.p) {
            continue;
        }
        let max = b.max_log as i64;
        for info in FAMILIES.iter().filter(|f| f.listed) {
            if info.fixed_p.is_some_and(|q| q != b.p) {
                continue;
            }
            let mut bases: Vec<FamilySpec> = Vec::new();
            for vals in assignments(info.label, info.params, b.p, max) {
                let named: Vec<(&str, i64)> =
                    info.params.iter().copied().zip(vals.iter().copied()).collect();
                let spec = FamilySpec::new(info.label, b.p, &named).expect("registry params");
                if info.lists {
                    let (r, t, u) = (spec.get("r"), spec.get("t"), spec.get("u"));
                    let budget = max - (2 * r + t + u);
                    if budget < 1 {
                        continue;
                    }
                    for f in 1..=2 {
                        for (ti, ri) in f5_lists(f, (0, t + u), budget) {
                            bases.push(spec.clone().with_lists(&ti, &ri));
                        }
                    }
                } else {
                    bases.push(spec);
                }
            }
            for spec in bases {
                let Ok(recipe) = super::families::recipe(&spec) else {
                    continue;
                };
                if recipe.log_order > b.max_log {
                    continue;
                }
                let room = b.max_log - recipe.log_order;
                let part_cap = match recipe.a_bound {
                    Some(k) if k < 0 => 0,
                    Some(k) => (k as u32).min(room),
                    None => room,
                };
                let factors = match info.factor {
                    AbelianFactor::Forbidden => vec![Vec::new()],
                    _ => abelian_types_up_to(b.p, room, part_cap),
                };
                for a in factors {
                    if info.factor == AbelianFactor::Required && a.is_empty() {
                        continue;
                    }
                    let s = spec.clone().with_abelian(&a);
                    if s.validate().is_ok() {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(specs: &[FamilySpec]) -> Vec<String> {
        specs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn partitions() {
        let t = abelian_types_up_to(2, 3, 2);
        assert_eq!(t, vec![vec![], vec![2], vec![4], vec![2, 2], vec![4, 2], vec![2, 2, 2]]);
    }

    #[test]
    fn small_bounds() {
        let s = labels(&enumerate_specs(&[OrderBound::new(2, 4)]));
        for want in ["E2[p=2,m=1]", "E3[p=2,m=1]", "E4[p=2,m=1]", "A.Q8[p=2]", "A.Q8[p=2;A=2]"] {
            assert!(s.contains(&want.to_string()), "{want}");
        }
        let s = labels(&enumerate_specs(&[OrderBound::new(3, 4)]));
        assert!(s.contains(&"B2[p=3,m=1]".to_string()));
        for p in [2, 3, 5] {
            assert!(enumerate_specs(&[OrderBound::new(p, 2)]).is_empty());
        }
        assert!(enumerate_specs(&[]).is_empty());
    }

    #[test]
    fn from_order() {
        assert_eq!(OrderBound::from_order(3, 729), Some(OrderBound::new(3, 6)));
        assert_eq!(OrderBound::from_order(3, 100), None);
        assert_eq!(OrderBound::from_order(4, 64), None);
    }
}
