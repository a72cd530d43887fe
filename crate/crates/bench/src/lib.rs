//! Fixtures shared by the benchmarks in `benches/`.

use mhk_core::catalog::{mk_family, parse_spec};
use mhk_core::Group;

/// Catalog groups of increasing order, by spec string.
pub const SPECS: &[&str] = &[
    "E2[p=2,m=1]",
    "A.Mp[p=2,m=2,n=1;A=2]",
    "C3[p=2,m1=2,m2=1,m3=1]",
    "B2[p=3,m=1]",
    "E1[p=3,r=1,s=1,t=0,u=1]",
    "C3[p=3,m1=1,m2=1,m3=1;A=3]",
];

pub fn group(spec: &str) -> Group {
    mk_family(&parse_spec(spec).expect("bench spec parses")).expect("bench spec builds")
}

pub fn groups() -> Vec<(&'static str, Group)> {
    SPECS.iter().map(|&s| (s, group(s))).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_build() {
        for (s, g) in super::groups() {
            assert!(g.order() > 1, "{s}");
        }
    }
}
