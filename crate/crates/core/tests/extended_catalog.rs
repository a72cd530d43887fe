//! Families whose smallest instances lie above the default campaign bounds.

use mhk_core::campaign::check_spec;
use mhk_core::{parse_spec, CheckOptions, Checks};

fn check(spec: &str, a_index: bool) {
    let opts = CheckOptions {
        checks: Checks {
            pairs: true,
            a_index,
            ..Checks::default()
        },
        ..CheckOptions::default()
    };
    let (rec, g) = check_spec(&parse_spec(spec).unwrap(), &opts);
    assert!(g.is_some(), "{spec}: {:?}", rec.error);
    assert!(rec.passed(), "{spec}: {:?}", rec.failures);
    assert_eq!(rec.metahamiltonian, Some(true), "{spec}");
}

#[test]
fn rank_three_derived_families() {
    for s in ["D1[p=3,m1=2,m2=1,m3=1]", "D2[p=3,m1=2,m2=1,m3=1]"] {
        check(s, true);
    }
}

#[test]
fn rank_three_derived_families_equal_exponents() {
    // order 3^8; no multiplication table, so only the pair scan is run
    for s in ["D4[p=3,m1=2,m2=2,m3=1]", "D5[p=3,m1=2,m2=2,m3=1]"] {
        check(s, false);
    }
}

#[test]
fn cyclic_derived_families() {
    for s in [
        "F3[p=2,r=2,s=2,t=1;A=2]",
        "F4[p=2,r=2,s=1,t=1,u=1;A=2]",
        "F5[p=2,r=3,t=0,u=2;t_i=1;r_i=1]",
        "F5[p=2,r=3,t=1,u=2;t_i=2;r_i=1]",
    ] {
        check(s, true);
    }
}

#[test]
fn mixed_derived_family() {
    check("G1[p=3,m1=2,m2=1]", true);
}
