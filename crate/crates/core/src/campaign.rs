//! Catalog verification campaigns and their NDJSON reports.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{enumerate_specs, mk_family_with, FamilySpec, Heading, OrderBound};
use crate::error::{Error, Result};
use crate::group::{log_p, Group};
use crate::iso::{find_isomorphism, fingerprint_with, Fingerprint, DEFAULT_ISO_BUDGET};
use crate::predicates::{a_index, is_metacyclic, is_metahamiltonian_def, is_metahamiltonian_pairs};
use crate::structure::{
    abelian_type_of_subgroup, center, derived_of, derived_subgroup, exponent_of, min_generators,
    nilpotency_class,
};
use crate::subgroups::EnumBudget;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub pairs: bool,
    pub definitional: bool,
    pub a_index: bool,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub bounds: Vec<OrderBound>,
    pub checks: Checks,
    /// Largest order for full subgroup enumeration.
    pub budget_subgroups: usize,
    /// Largest bucket order for isomorphism refutation.
    pub budget_iso: usize,
    pub step_budget: u64,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub timing: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            bounds: Vec::new(),
            checks: Checks {
                pairs: true,
                ..Checks::default()
            },
            budget_subgroups: EnumBudget::default().max_order,
            budget_iso: DEFAULT_ISO_BUDGET,
            step_budget: crate::pc::DEFAULT_STEP_BUDGET,
            jobs: 0,
            timing: false,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.budget_subgroups == 0 || self.budget_iso == 0 || self.step_budget == 0 {
            return Err(Error::Parse("budgets must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub family: String,
    pub spec: String,
    pub p: u64,
    pub params: BTreeMap<String, i64>,
    pub order: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub class: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub derived_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub derived_exponent: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metacyclic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metahamiltonian: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metahamiltonian_def: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a_index: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fingerprint: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub budget_exceeded: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    /// Set when the error is a consistency failure (internal bug class).
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub internal: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl Record {
    fn blank(family: &str, spec: &str, p: u64) -> Self {
        Record {
            family: family.to_string(),
            spec: spec.to_string(),
            p,
            params: BTreeMap::new(),
            order: 0,
            class: None,
            d: None,
            center_order: None,
            derived_order: None,
            derived_exponent: None,
            metacyclic: None,
            metahamiltonian: None,
            metahamiltonian_def: None,
            a_index: None,
            fingerprint: None,
            budget_exceeded: Vec::new(),
            failures: Vec::new(),
            error: None,
            internal: false,
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.error.is_none()
    }

    fn fail(&mut self, what: impl Into<String>) {
        self.failures.push(what.into());
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub summary: bool,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub budget_exceeded: usize,
    pub iso_buckets: usize,
    pub iso_pairs_refuted: usize,
    pub iso_collisions: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn write_ndjson<W: Write>(&self, mut w: W) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            w.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut w, &self.summary)?;
        w.write_all(b"\n")
    }

    pub fn to_ndjson(&self) -> String {
        let mut buf = Vec::new();
        self.write_ndjson(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn parse_ndjson(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        let (last, body) = lines
            .split_last()
            .ok_or_else(|| Error::Parse("empty report".into()))?;
        let records = body
            .iter()
            .map(|l| serde_json::from_str(l).map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<Record>>>()?;
        let summary: Summary =
            serde_json::from_str(last).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(VerificationReport { records, summary })
    }

    /// 0 all pass, 1 verification failure, 3 internal consistency error.
    pub fn exit_code(&self) -> i32 {
        if self.records.iter().any(|r| r.internal) {
            3
        } else if self.summary.failed > 0 || !self.summary.iso_collisions.is_empty() {
            1
        } else {
            0
        }
    }
}

/// Options for checking one group.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub checks: Checks,
    pub budget_subgroups: usize,
    pub step_budget: u64,
    pub timing: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions::from(&CampaignConfig::default())
    }
}

impl From<&CampaignConfig> for CheckOptions {
    fn from(c: &CampaignConfig) -> Self {
        CheckOptions {
            checks: c.checks,
            budget_subgroups: c.budget_subgroups,
            step_budget: c.step_budget,
            timing: c.timing,
        }
    }
}

/// Builds and checks one spec.
pub fn check_spec(spec: &FamilySpec, opts: &CheckOptions) -> (Record, Option<Group>) {
    let start = Instant::now();
    let name = spec.to_string();
    let mut rec = Record::blank(&spec.label, &name, spec.p);
    rec.params = spec.params.iter().cloned().collect();
    let g = match mk_family_with(spec, opts.step_budget) {
        Ok(g) => g,
        Err(e) => {
            rec.internal = matches!(e, Error::Consistency(_) | Error::StepBudgetExceeded(_));
            rec.error = Some(e.to_string());
            return (rec, None);
        }
    };
    fill(&mut rec, &g, Some(spec), opts);
    if opts.timing {
        rec.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    (rec, Some(g))
}

/// Checks a group outside the catalog (controls, user presentations).
pub fn check_group(family: &str, name: &str, g: &Group, opts: &CheckOptions) -> Record {
    let start = Instant::now();
    let mut rec = Record::blank(family, name, g.p());
    fill(&mut rec, g, None, opts);
    if opts.timing {
        rec.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    rec
}

fn fill(rec: &mut Record, g: &Group, spec: Option<&FamilySpec>, opts: &CheckOptions) {
    let p = g.p();
    let d = derived_subgroup(g);
    let class = nilpotency_class(g);
    let dg = min_generators(g);
    let exp_d = exponent_of(g, &d);
    let metacyclic = is_metacyclic(g);
    rec.order = g.order() as u64;
    rec.class = Some(class);
    rec.d = Some(dg);
    rec.center_order = Some(center(g).order() as u64);
    rec.derived_order = Some(d.order() as u64);
    rec.derived_exponent = Some(exp_d);
    rec.metacyclic = Some(metacyclic);
    rec.fingerprint = Some(fingerprint_with(g, None).hash());
    let abelian = g.is_abelian();

    if opts.checks.pairs {
        let mh = is_metahamiltonian_pairs(g);
        rec.metahamiltonian = Some(mh);
        if !mh {
            rec.fail("metahamiltonian");
        }
    }
    if opts.checks.definitional {
        let budget = EnumBudget::with_max_order(opts.budget_subgroups);
        match is_metahamiltonian_def(g, budget) {
            Ok(v) => {
                rec.metahamiltonian_def = Some(v);
                if !v {
                    rec.fail("metahamiltonian_def");
                }
                if rec.metahamiltonian.is_some_and(|pairs| pairs != v) {
                    rec.fail("decider disagreement");
                }
            }
            Err(Error::BudgetExceeded(_)) => rec.budget_exceeded.push("definitional".into()),
            Err(e) => rec.fail(format!("definitional: {e}")),
        }
    }
    if opts.checks.a_index && !abelian {
        match a_index(g, opts.budget_subgroups) {
            Ok(t) => {
                rec.a_index = Some(t);
                if metacyclic && t != log_p(d.order() as u64, p) {
                    rec.fail("a_index != log_p |G'| for metacyclic G");
                }
            }
            Err(Error::BudgetExceeded(_)) => rec.budget_exceeded.push("a_index".into()),
            Err(e) => {
                rec.internal |= matches!(e, Error::Consistency(_));
                rec.fail(format!("a_index: {e}"));
            }
        }
    }
    let Some(spec) = spec else {
        return;
    };
    // structural invariants of metahamiltonian groups
    if class > 3 {
        rec.fail("class > 3");
    }
    if derived_of(g, &d).order() != 1 {
        rec.fail("G'' != 1");
    }
    if dg == 2 && exp_d > p && !metacyclic {
        rec.fail("d = 2 and exp(G') > p but not metacyclic");
    }
    let heading = spec.info().heading;
    match heading.derived_exponent_is_p() {
        Some(true) if exp_d != p => rec.fail("exp(G') != p"),
        Some(false) if exp_d < p * p => rec.fail("exp(G') < p^2"),
        _ => {}
    }
    let dtype = abelian_type_of_subgroup(g, &d).map(|t| t.partition).unwrap_or_default();
    match heading {
        Heading::A => {
            if d.order() as u64 != p {
                rec.fail("|G'| != p");
            }
        }
        Heading::B => {
            if class != 3 || dg != 2 || p == 2 {
                rec.fail("class 3, d = 2, p odd");
            }
            if opts.checks.a_index && rec.a_index.is_some_and(|t| t != 2) {
                rec.fail("a_index != 2");
            }
        }
        Heading::C => {
            if class != 2 || dtype != [p, p] {
                rec.fail("class 2 and G' = C_p^2");
            }
        }
        Heading::D => {
            if class != 2 || dtype != [p, p, p] {
                rec.fail("class 2 and G' = C_p^3");
            }
        }
        Heading::E => {
            if !metacyclic {
                rec.fail("metacyclic");
            }
        }
        Heading::F => {
            if metacyclic || dtype.len() != 1 || d.order() < (p * p) as usize {
                rec.fail("not metacyclic, G' cyclic of order >= p^2");
            }
        }
        Heading::G => {
            if dtype.len() != 2 || dtype[1] != p || dtype[0] < p * p {
                rec.fail("G' of type (p^a, p) with a >= 2");
            }
        }
        Heading::Redei | Heading::Metacyclic => {}
    }
}

/// Fingerprint-equal pairs within each `(p, order)` bucket, split into
/// refuted pairs and isomorphic collisions.
pub fn distinctness(
    groups: &[(String, &Group)],
    max_order: usize,
) -> (usize, usize, Vec<(String, String)>) {
    let mut buckets: BTreeMap<(u64, usize), Vec<(usize, Fingerprint)>> = BTreeMap::new();
    for (i, (_, g)) in groups.iter().enumerate() {
        if g.order() <= max_order {
            buckets
                .entry((g.p(), g.order()))
                .or_default()
                .push((i, fingerprint_with(g, None)));
        }
    }
    let mut ties = Vec::new();
    for v in buckets.values() {
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                if v[a].1 == v[b].1 {
                    ties.push((v[a].0, v[b].0));
                }
            }
        }
    }
    let verdicts: Vec<bool> = ties
        .par_iter()
        .map(|&(i, j)| find_isomorphism(groups[i].1, groups[j].1).is_some())
        .collect();
    let mut refuted = 0;
    let mut collisions = Vec::new();
    for (&(i, j), iso) in ties.iter().zip(verdicts) {
        if iso {
            collisions.push((groups[i].0.clone(), groups[j].0.clone()));
        } else {
            refuted += 1;
        }
    }
    (buckets.len(), refuted, collisions)
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let specs = enumerate_specs(&cfg.bounds);
    let opts = CheckOptions::from(cfg);
    let work = || -> Vec<(Record, Option<Group>)> {
        specs.par_iter().map(|s| check_spec(s, &opts)).collect()
    };
    let results = if cfg.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::Parse(e.to_string()))?
            .install(work)
    } else {
        work()
    };
    let (iso_buckets, refuted, collisions) = if cfg.checks.iso {
        let groups: Vec<(String, &Group)> = results
            .iter()
            .filter_map(|(r, g)| g.as_ref().map(|g| (r.spec.clone(), g)))
            .collect();
        distinctness(&groups, cfg.budget_iso)
    } else {
        (0, 0, Vec::new())
    };
    let records: Vec<Record> = results.into_iter().map(|(r, _)| r).collect();
    let passed = records.iter().filter(|r| r.passed()).count();
    let summary = Summary {
        summary: true,
        total: records.len(),
        passed,
        failed: records.len() - passed,
        errors: records.iter().filter(|r| r.error.is_some()).count(),
        budget_exceeded: records.iter().filter(|r| !r.budget_exceeded.is_empty()).count(),
        iso_buckets,
        iso_pairs_refuted: refuted,
        iso_collisions: collisions,
    };
    Ok(VerificationReport { records, summary })
}
