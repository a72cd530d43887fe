//! Unit groups modulo prime powers and the residue parameters used by the
//! catalog.

use serde::Serialize;

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::param("numtheory", format!("{p} is not a prime")))
    }
}

/// Order of the unit group modulo `p^n`.
pub fn totient_prime_power(p: u64, n: u32) -> u64 {
    if n == 0 {
        1
    } else {
        p.pow(n - 1) * (p - 1)
    }
}

/// Multiplicative order of `u` modulo `p^n`.
pub fn unit_order(u: u64, p: u64, n: u32) -> Result<u64> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::param("unit_order", "n >= 1"));
    }
    let m = p.pow(n);
    if gcd(u % m, m) != 1 {
        return Err(Error::NotAUnit(u, m));
    }
    // Strip prime factors from the group order while u^d stays 1.
    let mut d = totient_prime_power(p, n);
    for q in prime_factors(d) {
        while d % q == 0 && pow_mod(u, d / q, m) == 1 {
            d /= q;
        }
    }
    debug_assert_eq!(pow_mod(u, d, m), 1);
    Ok(d)
}

/// Structure of `(Z/p^n)^*` with generator witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitGroupInfo {
    pub p: u64,
    pub n: u32,
    /// Orders of the cyclic factors, largest first.
    pub factor_orders: Vec<u64>,
    /// One generator per cyclic factor, in the same order.
    pub generators: Vec<u64>,
}

pub fn unit_group(p: u64, n: u32) -> Result<UnitGroupInfo> {
    check_prime(p)?;
    if n == 0 {
        return Err(Error::param("unit_group", "n >= 1"));
    }
    let m = p.pow(n);
    let info = if p == 2 {
        match n {
            1 => UnitGroupInfo {
                p,
                n,
                factor_orders: vec![],
                generators: vec![],
            },
            2 => UnitGroupInfo {
                p,
                n,
                factor_orders: vec![2],
                generators: vec![m - 1],
            },
            _ => UnitGroupInfo {
                p,
                n,
                factor_orders: vec![1 << (n - 2), 2],
                generators: vec![5, m - 1],
            },
        }
    } else {
        let rho = smallest_primitive_root(p)?;
        // A primitive root mod p lifts to one mod p^n unless rho^{p-1} = 1 mod p^2.
        let g = if n >= 2 && pow_mod(rho, p - 1, p * p) == 1 {
            rho + p
        } else {
            rho
        };
        UnitGroupInfo {
            p,
            n,
            factor_orders: vec![totient_prime_power(p, n)],
            generators: vec![g],
        }
    };
    for (&g, &o) in info.generators.iter().zip(&info.factor_orders) {
        let got = unit_order(g, p, n)?;
        if got != o {
            return Err(Error::Consistency(format!(
                "unit {g} mod {m} has order {got}, expected {o}"
            )));
        }
    }
    Ok(info)
}

/// The layer `{x : x = 1 mod p^{n-i}}` of the unit group mod `p^n`, `p` odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SLayer {
    pub p: u64,
    pub n: u32,
    pub i: u32,
}

impl SLayer {
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn contains(&self, x: u64) -> bool {
        x % self.p.pow(self.n - self.i) == 1 % self.p.pow(self.n - self.i)
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.i)
    }

    pub fn members(&self) -> Vec<u64> {
        let step = self.p.pow(self.n - self.i);
        (0..self.size()).map(|k| (1 + k * step) % self.modulus()).collect()
    }
}

pub fn s_layer(p: u64, n: u32, i: u32) -> Result<SLayer> {
    check_prime(p)?;
    if p == 2 {
        return Err(Error::param("s_layer", "p odd"));
    }
    if i >= n {
        return Err(Error::param("s_layer", "0 <= i < n"));
    }
    Ok(SLayer { p, n, i })
}

/// Whether residue 0 counts as a square when testing `1 + 4l` for
/// non-squareness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZeroSquare {
    #[default]
    Square,
    NonSquare,
}

pub fn is_square_mod(a: u64, p: u64) -> bool {
    let a = a % p;
    (0..p).any(|x| x * x % p == a)
}

fn odd_prime(p: u64, what: &str) -> Result<()> {
    check_prime(p)?;
    if p == 2 {
        Err(Error::param(what, "p > 2"))
    } else {
        Ok(())
    }
}

pub fn smallest_nonresidue(p: u64) -> Result<u64> {
    odd_prime(p, "smallest_nonresidue")?;
    Ok((2..p).find(|&a| !is_square_mod(a, p)).expect("odd prime has non-residues"))
}

pub fn smallest_valid_l(p: u64) -> Result<u64> {
    smallest_valid_l_with(p, ZeroSquare::default())
}

pub fn smallest_valid_l_with(p: u64, zero: ZeroSquare) -> Result<u64> {
    odd_prime(p, "smallest_valid_l")?;
    let ok = |l: u64| {
        let v = (1 + 4 * l) % p;
        if v == 0 {
            zero == ZeroSquare::NonSquare
        } else {
            !is_square_mod(v, p)
        }
    };
    (1..=p)
        .find(|&l| ok(l))
        .ok_or_else(|| Error::param("smallest_valid_l", "1 + 4l non-square for some l"))
}

pub fn smallest_primitive_root(p: u64) -> Result<u64> {
    check_prime(p)?;
    if p == 2 {
        return Ok(1);
    }
    let qs = prime_factors(p - 1);
    Ok((2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("primes have primitive roots"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_orders() {
        assert_eq!(unit_order(1, 7, 3).unwrap(), 1);
        assert_eq!(unit_order(5, 2, 5).unwrap(), 8);
        assert_eq!(unit_order(4, 3, 4).unwrap(), 27);
        assert_eq!(unit_order(6, 3, 2), Err(Error::NotAUnit(6, 9)));
    }

    #[test]
    fn selectors() {
        assert_eq!(smallest_nonresidue(5).unwrap(), 2);
        assert_eq!(smallest_nonresidue(7).unwrap(), 3);
        assert_eq!(smallest_primitive_root(7).unwrap(), 3);
        assert_eq!(smallest_primitive_root(5).unwrap(), 2);
        assert_eq!(smallest_valid_l(3).unwrap(), 1);
        assert_eq!(smallest_valid_l(5).unwrap(), 3);
        assert_eq!(smallest_valid_l_with(5, ZeroSquare::NonSquare).unwrap(), 1);
        assert!(smallest_nonresidue(2).is_err());
    }

    #[test]
    fn layers() {
        let s = s_layer(3, 3, 1).unwrap();
        assert_eq!(s.members(), vec![1, 10, 19]);
        assert!(s.members().iter().all(|&x| s.contains(x)));
        assert_eq!(s_layer(3, 3, 0).unwrap().members(), vec![1]);
        assert!(s_layer(3, 3, 3).is_err());
    }

    #[test]
    fn unit_group_witnesses() {
        let u = unit_group(2, 6).unwrap();
        assert_eq!(u.factor_orders, vec![16, 2]);
        let u = unit_group(5, 3).unwrap();
        assert_eq!(u.factor_orders, vec![100]);
    }
}
