//! Materialized finite p-groups over element ids `0..order`.
//!
//! Two backends share one interface: a pc presentation (ids are normal-form
//! ranks, products by table lookup up to [`TABLE_MAX_ORDER`] and by collection
//! above) and a bare multiplication table.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::numtheory::is_prime;
use crate::pc::{Element, PcPresentation};

pub const TABLE_MAX_ORDER: usize = 4096;
/// Exhaustive associativity check for explicit tables up to this order.
pub const EXHAUSTIVE_ASSOC_ORDER: usize = 256;

const DEFAULT_SEED: u64 = 0x6d68_6b5f_7365_6564;

/// Seed for associativity sampling; `MHK_SEED` overrides the default.
pub fn sampling_seed() -> u64 {
    std::env::var("MHK_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone)]
pub struct Group {
    p: u64,
    order: usize,
    identity: usize,
    pres: Option<Arc<PcPresentation>>,
    table: Option<Arc<Vec<u16>>>,
    gens: Vec<usize>,
    label: String,
    inverses: OnceLock<Arc<Vec<u32>>>,
    orders: OnceLock<Arc<Vec<u32>>>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group")
            .field("label", &self.label)
            .field("p", &self.p)
            .field("order", &self.order)
            .field("table", &self.table.is_some())
            .finish()
    }
}

/// Builds and verifies a group from a presentation.
pub fn build_group(pres: PcPresentation) -> Result<Group> {
    build_group_seeded(pres, sampling_seed())
}

pub fn build_group_seeded(pres: PcPresentation, seed: u64) -> Result<Group> {
    pres.check_overlaps()?;
    let order = usize::try_from(pres.order())
        .map_err(|_| Error::InvalidPresentation("order too large".into()))?;
    let n = pres.len();
    let gens: Vec<usize> = (0..n)
        .map(|i| pres.rank(&Element::generator(n, i)))
        .collect();
    let table = if order <= TABLE_MAX_ORDER {
        Some(Arc::new(layered_table(&pres)?))
    } else {
        None
    };
    let g = Group {
        p: pres.p(),
        order,
        identity: 0,
        pres: Some(Arc::new(pres)),
        table,
        gens,
        label: "external".into(),
        inverses: OnceLock::new(),
        orders: OnceLock::new(),
    };
    g.check_relations()?;
    if g.table.is_some() {
        g.cross_check_collector(seed)?;
        g.check_associativity_sampled(seed, 10 * order)
            .map_err(|e| Error::Consistency(e.to_string()))?;
    }
    Ok(g)
}

/// Multiplication table of the presented group, built one generator at a
/// time from the bottom of the series `G_k = <g_k, .., g_{n-1}>`.
///
/// `G_k` is a cyclic extension of `G_{k+1}` by `g = g_k`: with `phi(t) = t^g`
/// and `w = g^{r}`, `(g^a t)(g^b s) = g^{(a+b) mod r} [w] phi^b(t) s`, where
/// `w` appears when `a + b >= r`. The extension is a group exactly when `phi`
/// is an automorphism fixing `w` with `phi^r` conjugation by `w`, which is
/// verified for every layer.
fn layered_table(pres: &PcPresentation) -> Result<Vec<u16>> {
    let n = pres.len();
    let order = pres.order() as usize;
    let mut t = vec![0u16; order * order];
    let at = |t: &[u16], x: usize, y: usize| t[x * order + y] as usize;
    // radix[j] = ids spanned by generators after j
    let radix: Vec<usize> = (0..n)
        .map(|j| pres.rank(&Element::generator(n, j)))
        .collect();
    let mut m = 1usize; // |G_{k+1}|
    for k in (0..n).rev() {
        let r = pres.relative_order(k) as usize;
        let w = pres.rank(pres.power_relation(k));
        // phi on generators of G_{k+1}
        let phi_gen: Vec<usize> = (k + 1..n)
            .map(|j| at(&t, radix[j], pres.rank(pres.commutator_relation(j, k))))
            .collect();
        let mut phi = vec![0usize; m];
        for x in 1..m {
            // strip one letter from the last nonzero exponent of x
            let j = (k + 1..n).rev().find(|&j| (x / radix[j]) % pres.relative_order(j) as usize != 0).unwrap();
            let prev = x - radix[j];
            phi[x] = at(&t, phi[prev], phi_gen[j - k - 1]);
        }
        let fail = |what: &str| {
            Err(Error::Consistency(format!(
                "generator {}: {what}",
                pres.names()[k]
            )))
        };
        for x in 0..m {
            for j in k + 1..n {
                let xg = at(&t, x, radix[j]);
                if phi[xg] != at(&t, phi[x], phi_gen[j - k - 1]) {
                    return fail("conjugation is not a homomorphism");
                }
            }
        }
        if phi[w] != w {
            return fail("power relation is not centralized by the generator");
        }
        // phi^b for b < r, then phi^r against conjugation by w
        let mut phi_pow: Vec<Vec<usize>> = Vec::with_capacity(r);
        phi_pow.push((0..m).collect());
        for b in 1..=r {
            let next: Vec<usize> = phi_pow[b - 1].iter().map(|&x| phi[x]).collect();
            if b == r {
                let w_inv = (0..m).find(|&y| at(&t, w, y) == 0).unwrap();
                for x in 0..m {
                    if next[x] != at(&t, at(&t, w_inv, x), w) {
                        return fail("power of the conjugation map differs from conjugation by the power relation");
                    }
                }
            } else {
                phi_pow.push(next);
            }
        }
        let big = r * m;
        for x in 0..big {
            let (a, tx) = (x / m, x % m);
            for y in 0..big {
                let (b, s) = (y / m, y % m);
                let mut u = phi_pow[b][tx];
                let mut c = a + b;
                if c >= r {
                    c -= r;
                    u = at(&t, w, u);
                }
                t[x * order + y] = (c * m + at(&t, u, s)) as u16;
            }
        }
        m = big;
    }
    Ok(t)
}

impl Group {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn log_order(&self) -> u32 {
        log_p(self.order as u64, self.p)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// A generating set (the pc generators for presentation groups).
    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    pub fn presentation(&self) -> Option<&PcPresentation> {
        self.pres.as_deref()
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element(&self, id: usize) -> Option<Element> {
        self.pres.as_ref().map(|p| p.unrank(id))
    }

    pub fn id_of(&self, e: &Element) -> Option<usize> {
        self.pres.as_ref().map(|p| p.rank(e))
    }

    /// Id of the normal form of a word in the pc generators.
    pub fn word(&self, w: &[(usize, i64)]) -> Result<usize> {
        let pres = self
            .pres
            .as_ref()
            .ok_or_else(|| Error::InvalidPresentation("group has no presentation".into()))?;
        Ok(pres.rank(&pres.normalize(w)?))
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.order + y] as usize,
            None => {
                let pres = self.pres.as_ref().expect("table-less groups have a presentation");
                let z = pres
                    .multiply(&pres.unrank(x), &pres.unrank(y))
                    .expect("collection in a verified presentation");
                pres.rank(&z)
            }
        }
    }

    pub fn inv(&self, x: usize) -> usize {
        if let Some(inv) = self.inverses.get() {
            return inv[x] as usize;
        }
        if self.table.is_some() {
            return self.inverse_table()[x] as usize;
        }
        let pres = self.pres.as_ref().unwrap();
        pres.rank(&pres.inverse(&pres.unrank(x)).expect("collection in a verified presentation"))
    }

    fn inverse_table(&self) -> &Arc<Vec<u32>> {
        self.inverses.get_or_init(|| {
            let mut inv = vec![u32::MAX; self.order];
            for x in 0..self.order {
                if inv[x] != u32::MAX {
                    continue;
                }
                // walk the cyclic subgroup: x^{k} and x^{o-k} are inverse
                let mut powers = vec![self.identity];
                let mut y = x;
                while y != self.identity {
                    powers.push(y);
                    y = self.mul(y, x);
                }
                let o = powers.len();
                for k in 1..o {
                    inv[powers[k]] = powers[o - k] as u32;
                }
                inv[self.identity] = self.identity as u32;
            }
            Arc::new(inv)
        })
    }

    pub fn pow(&self, x: usize, k: i64) -> usize {
        let (mut base, mut e) = if k < 0 {
            (self.inv(x), k.unsigned_abs())
        } else {
            (x, k as u64)
        };
        let mut acc = self.identity;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn comm(&self, x: usize, y: usize) -> usize {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(self.inv(yx), xy)
    }

    pub fn commute(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// Conjugate `x^y = y^{-1} x y`.
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.inv(y), self.mul(x, y))
    }

    pub fn order_of(&self, x: usize) -> u64 {
        if let Some(o) = self.orders.get() {
            return o[x] as u64;
        }
        if self.table.is_some() {
            return self.element_orders()[x] as u64;
        }
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Orders of all elements, cached.
    pub fn element_orders(&self) -> &[u32] {
        self.orders.get_or_init(|| {
            let mut out = vec![0u32; self.order];
            out[self.identity] = 1;
            for x in 0..self.order {
                if out[x] != 0 {
                    continue;
                }
                let mut powers = vec![x];
                let mut y = self.mul(x, x);
                while y != self.identity {
                    powers.push(y);
                    y = self.mul(y, x);
                }
                let o = powers.len() as u64 + 1;
                for (k, &z) in powers.iter().enumerate() {
                    let e = k as u64 + 1;
                    out[z] = (o / crate::numtheory::gcd(o, e)) as u32;
                }
            }
            Arc::new(out)
        })
    }

    pub fn exponent(&self) -> u64 {
        self.element_orders().iter().copied().max().unwrap_or(1) as u64
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .enumerate()
            .all(|(i, &a)| self.gens[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    pub fn format_element(&self, x: usize) -> String {
        match &self.pres {
            Some(p) => p.format_element(&p.unrank(x)),
            None => format!("e{x}"),
        }
    }

    /// Full multiplication table as rows.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|x| (0..self.order).map(|y| self.mul(x, y)).collect())
            .collect()
    }

    fn check_relations(&self) -> Result<()> {
        let pres = self.pres.as_ref().unwrap();
        let n = pres.len();
        for i in 0..n {
            let gi = self.gens[i];
            let lhs = self.pow(gi, pres.relative_order(i) as i64);
            if lhs != pres.rank(pres.power_relation(i)) {
                return Err(Error::Consistency(format!(
                    "power relation of {} does not hold",
                    pres.names()[i]
                )));
            }
            for j in i + 1..n {
                let c = self.comm(self.gens[j], gi);
                if c != pres.rank(pres.commutator_relation(j, i)) {
                    return Err(Error::Consistency(format!(
                        "relation [{}, {}] does not hold",
                        pres.names()[j],
                        pres.names()[i]
                    )));
                }
            }
        }
        Ok(())
    }

    fn cross_check_collector(&self, seed: u64) -> Result<()> {
        let pres = self.pres.as_ref().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for &a in &self.gens {
            for &b in &self.gens {
                pairs.push((a, b));
            }
        }
        for _ in 0..self.order.min(512) {
            pairs.push((rng.gen_range(0..self.order), rng.gen_range(0..self.order)));
        }
        for (x, y) in pairs {
            let z = pres.rank(&pres.multiply(&pres.unrank(x), &pres.unrank(y))?);
            if z != self.mul(x, y) {
                return Err(Error::Consistency(format!(
                    "table and collector disagree on {} * {}",
                    self.format_element(x),
                    self.format_element(y)
                )));
            }
        }
        Ok(())
    }

    fn check_associativity_sampled(&self, seed: u64, samples: usize) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = rng.gen_range(0..self.order);
            let y = rng.gen_range(0..self.order);
            let z = rng.gen_range(0..self.order);
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                return Err(Error::NotAGroup(format!("({x}*{y})*{z} != {x}*({y}*{z})")));
            }
        }
        Ok(())
    }

    fn check_associativity_exhaustive(&self) -> Result<()> {
        for x in 0..self.order {
            for y in 0..self.order {
                let xy = self.mul(x, y);
                for z in 0..self.order {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::NotAGroup(format!(
                            "({x}*{y})*{z} != {x}*({y}*{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Members of `<S>` by breadth-first closure under right multiplication.
    pub fn closure(&self, start: &BitSet, gens: &[usize]) -> BitSet {
        let mut members = start.clone();
        members.insert(self.identity);
        let mut queue: Vec<usize> = members.iter().collect();
        while let Some(h) = queue.pop() {
            for &s in gens {
                let x = self.mul(h, s);
                if members.insert(x) {
                    queue.push(x);
                }
            }
        }
        members
    }

    /// Re-indexes element ids by `perm` (`perm[old] = new`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Group> {
        let n = self.order;
        if perm.len() != n || BitSet::from_indices(n, perm.iter().copied()).count() != n {
            return Err(Error::NotAGroup("relabeling is not a permutation".into()));
        }
        let mut rows = vec![vec![0usize; n]; n];
        for x in 0..n {
            for y in 0..n {
                rows[perm[x]][perm[y]] = perm[self.mul(x, y)];
            }
        }
        let g = table_group_unchecked(self.p, rows, self.label.clone())?;
        Ok(g)
    }

    /// Direct product. Presentation groups concatenate their presentations;
    /// otherwise the product table is formed with ids `x * |H| + y`.
    pub fn direct_product(&self, other: &Group) -> Result<Group> {
        if self.p != other.p && self.order > 1 && other.order > 1 {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if let (Some(a), Some(b)) = (&self.pres, &other.pres) {
            let g = build_group(a.direct_product(b)?)?;
            return Ok(g.with_label(format!("{} x {}", self.label, other.label)));
        }
        let (n, m) = (self.order, other.order);
        let rows: Vec<Vec<usize>> = (0..n * m)
            .map(|u| {
                (0..n * m)
                    .map(|v| self.mul(u / m, v / m) * m + other.mul(u % m, v % m))
                    .collect()
            })
            .collect();
        let p = if self.order > 1 { self.p } else { other.p };
        table_group_unchecked(p, rows, format!("{} x {}", self.label, other.label))
    }
}

pub fn log_p(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

fn prime_of_power(n: usize) -> Option<u64> {
    if n == 1 {
        return None;
    }
    let n = n as u64;
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    (m == 1 && is_prime(p)).then_some(p)
}

fn check_table_shape(table: &[Vec<usize>]) -> Result<usize> {
    let n = table.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty table".into()));
    }
    if n > u16::MAX as usize + 1 {
        return Err(Error::NotAGroup("table too large".into()));
    }
    for row in table {
        if row.len() != n {
            return Err(Error::NotAGroup("table is not square".into()));
        }
        if row.iter().any(|&z| z >= n) {
            return Err(Error::NotAGroup("table is not closed".into()));
        }
    }
    Ok(n)
}

/// Table group without axiom checks, for tables derived from verified groups.
pub(crate) fn table_group_unchecked(
    p: u64,
    table: Vec<Vec<usize>>,
    label: String,
) -> Result<Group> {
    let n = check_table_shape(&table)?;
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    let flat: Vec<u16> = table.into_iter().flatten().map(|z| z as u16).collect();
    let mut g = Group {
        p,
        order: n,
        identity,
        pres: None,
        table: Some(Arc::new(flat)),
        gens: Vec::new(),
        label,
        inverses: OnceLock::new(),
        orders: OnceLock::new(),
    };
    g.gens = greedy_generators(&g);
    Ok(g)
}

/// Generating set chosen greedily among elements of largest order first.
fn greedy_generators(g: &Group) -> Vec<usize> {
    let orders = g.element_orders();
    let mut ids: Vec<usize> = g.elements().collect();
    ids.sort_by_key(|&x| (std::cmp::Reverse(orders[x]), x));
    let mut gens = Vec::new();
    let mut members = BitSet::new(g.order);
    members.insert(g.identity);
    for x in ids {
        if members.count() == g.order {
            break;
        }
        if !members.contains(x) {
            gens.push(x);
            members = g.closure(&members, &gens);
        }
    }
    gens
}

/// Imports an explicit multiplication table, verifying the group axioms.
pub fn group_from_table(table: Vec<Vec<usize>>) -> Result<Group> {
    let n = check_table_shape(&table)?;
    let p = match n {
        1 => 2,
        _ => prime_of_power(n).ok_or_else(|| {
            Error::NotAGroup(format!("order {n} is not a prime power"))
        })?,
    };
    group_from_table_with_prime(p, table)
}

pub fn group_from_table_with_prime(p: u64, table: Vec<Vec<usize>>) -> Result<Group> {
    let n = check_table_shape(&table)?;
    if n > 1 && prime_of_power(n) != Some(p) {
        return Err(Error::NotAGroup(format!("order {n} is not a power of {p}")));
    }
    // Latin square: every equation has unique solutions, so inverses exist.
    for x in 0..n {
        let row = BitSet::from_indices(n, table[x].iter().copied());
        let col = BitSet::from_indices(n, (0..n).map(|y| table[y][x]));
        if row.count() != n || col.count() != n {
            return Err(Error::NotAGroup(format!(
                "element {x} does not act as a bijection"
            )));
        }
    }
    let g = table_group_unchecked(p, table, "external".into())?;
    if n <= EXHAUSTIVE_ASSOC_ORDER {
        g.check_associativity_exhaustive()?;
    } else {
        g.check_associativity_sampled(sampling_seed(), 10 * n)?;
    }
    Ok(g)
}

/// Upper unitriangular `n x n` matrices over `F_p`.
pub fn ut_group(n: usize, p: u64) -> Result<Group> {
    if !(1..=4).contains(&n) || !(p == 2 || p == 3) {
        return Err(Error::param("UT", "n <= 4 and p in {2, 3}"));
    }
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let k = slots.len();
    let order = (p as usize).pow(k as u32);
    let decode = |mut id: usize| {
        let mut m = vec![vec![0u64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for &(i, j) in slots.iter().rev() {
            m[i][j] = (id % p as usize) as u64;
            id /= p as usize;
        }
        m
    };
    let encode = |m: &[Vec<u64>]| {
        slots
            .iter()
            .fold(0usize, |acc, &(i, j)| acc * p as usize + m[i][j] as usize)
    };
    let mats: Vec<Vec<Vec<u64>>> = (0..order).map(decode).collect();
    let rows: Vec<Vec<usize>> = mats
        .iter()
        .map(|a| {
            mats.iter()
                .map(|b| {
                    let mut c = vec![vec![0u64; n]; n];
                    for i in 0..n {
                        for j in 0..n {
                            c[i][j] = (0..n).map(|l| a[i][l] * b[l][j]).sum::<u64>() % p;
                        }
                    }
                    encode(&c)
                })
                .collect()
        })
        .collect();
    Ok(group_from_table_with_prime(p, rows)?.with_label(format!("UT[{n},{p}]")))
}

/// Trivial group for the prime `p`.
pub fn trivial_group(p: u64) -> Group {
    table_group_unchecked(p, vec![vec![0]], "1".into()).expect("trivial table")
}
