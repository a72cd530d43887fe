//! `mhk`: build catalog groups, check predicates, verify the catalog.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed, 2 invalid input,
//! 3 internal consistency error.

mod presentation;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use mhk_core::campaign::{check_group, check_spec, CheckOptions};
use mhk_core::catalog::{mk_family_with, parse_spec, OrderBound};
use mhk_core::iso::fingerprint_with;
use mhk_core::structure::{center, derived_subgroup, exponent_of, min_generators, nilpotency_class};
use mhk_core::{build_group, run_campaign, ut_group, CampaignConfig, Checks, Group};

use presentation::parse_presentation;

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] mhk_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use mhk_core::Error as E;
        match self {
            CliError::Core(E::Consistency(_) | E::StepBudgetExceeded(_)) => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "mhk", version, about = "Finite p-group catalog builder and verifier")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a group and print a summary.
    Build {
        #[command(flatten)]
        target: Target,
        /// Also print the pc presentation.
        #[arg(long)]
        presentation: bool,
    },
    /// Run predicates on one group and print a JSON record.
    Check {
        #[command(flatten)]
        target: Target,
        /// Pair-scan metahamiltonian decider.
        #[arg(long)]
        pairs: bool,
        /// Metahamiltonian by full subgroup enumeration.
        #[arg(long)]
        definitional: bool,
        /// A_t index.
        #[arg(long = "a-index")]
        a_index: bool,
        /// Embed the full fingerprint.
        #[arg(long)]
        iso: bool,
        /// Nilpotency class (always reported).
        #[arg(long)]
        class: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Enumerate, build and check every catalog spec within the bounds.
    VerifyCatalog {
        /// Comma-separated primes; an empty list gives an empty report.
        #[arg(long)]
        primes: Option<String>,
        /// Per-prime bound as `p:order`, e.g. `2:256` or `3:3^6`.
        #[arg(long = "max-order")]
        max_order: Vec<String>,
        #[arg(long)]
        pairs: bool,
        #[arg(long)]
        definitional: bool,
        #[arg(long = "a-index")]
        a_index: bool,
        /// Pairwise non-isomorphism inside each (p, order) bucket.
        #[arg(long)]
        iso: bool,
        /// Worker threads (default: all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Report file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest bucket order for isomorphism refutation.
        #[arg(long = "budget-iso", default_value_t = mhk_core::iso::DEFAULT_ISO_BUDGET)]
        budget_iso: usize,
        #[command(flatten)]
        budgets: Budgets,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// Family spec such as `MC[p=3,r=1,s=1,t=0,u=1]`, or a control: `ut3`,
    /// `ut4`, `UT[n,p]`.
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    spec: Option<String>,
    /// Read a pc presentation from a file instead.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Budgets {
    /// Largest group order for full subgroup enumeration.
    #[arg(long = "budget-subgroups", default_value_t = 729)]
    budget_subgroups: usize,
    /// Collection step cap per normalization.
    #[arg(long = "budget-steps", default_value_t = mhk_core::pc::DEFAULT_STEP_BUDGET)]
    budget_steps: u64,
    /// Record elapsed time per entry.
    #[arg(long)]
    timing: bool,
}

enum Resolved {
    Spec(mhk_core::FamilySpec),
    Control(String, Group),
}

fn control(name: &str) -> Option<Result<(String, Group)>> {
    let (n, p) = match name {
        "ut3" => (3, 2),
        "ut4" => (4, 2),
        _ => {
            let inner = name.strip_prefix("UT[")?.strip_suffix(']')?;
            let (n, p) = inner.split_once(',')?;
            match (n.trim().parse(), p.trim().parse()) {
                (Ok(n), Ok(p)) => (n, p),
                _ => return Some(Err(CliError::Usage(format!("bad control '{name}'")))),
            }
        }
    };
    Some(
        ut_group(n, p)
            .map(|g| (format!("UT[{n},{p}]"), g))
            .map_err(CliError::from),
    )
}

fn resolve(t: &Target, steps: u64) -> Result<Resolved> {
    if let Some(path) = &t.file {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let pres = parse_presentation(&text)?.with_step_budget(steps);
        let g = build_group(pres)?;
        return Ok(Resolved::Control(path.display().to_string(), g));
    }
    let s = t.spec.as_deref().unwrap_or_default();
    if let Some(c) = control(s) {
        let (name, g) = c?;
        return Ok(Resolved::Control(name, g));
    }
    Ok(Resolved::Spec(parse_spec(s)?))
}

fn summary_lines(name: &str, g: &Group) -> Vec<String> {
    let d = derived_subgroup(g);
    vec![
        format!("group={name}"),
        format!("order={}", g.order()),
        format!("class={}", nilpotency_class(g)),
        format!("d={}", min_generators(g)),
        format!("|G'|={}", d.order()),
        format!("exp(G')={}", exponent_of(g, &d)),
        format!("|Z|={}", center(g).order()),
    ]
}

fn cmd_build(target: &Target, show_pres: bool) -> Result<u8> {
    let steps = mhk_core::pc::DEFAULT_STEP_BUDGET;
    let (name, g) = match resolve(target, steps)? {
        Resolved::Spec(s) => (s.to_string(), mk_family_with(&s, steps)?),
        Resolved::Control(n, g) => (n, g),
    };
    let mut out = io::stdout().lock();
    for line in summary_lines(&name, &g) {
        writeln!(out, "{line}").ok();
    }
    if show_pres {
        if let Some(p) = g.presentation() {
            write!(out, "{p}").ok();
        }
    }
    Ok(0)
}

fn cmd_check(target: &Target, checks: Checks, budgets: &Budgets) -> Result<u8> {
    let opts = CheckOptions {
        checks,
        budget_subgroups: budgets.budget_subgroups,
        step_budget: budgets.budget_steps,
        timing: budgets.timing,
    };
    let (rec, group) = match resolve(target, budgets.budget_steps)? {
        Resolved::Spec(s) => {
            let (rec, g) = check_spec(&s, &opts);
            if let Some(err) = &rec.error {
                if rec.internal {
                    eprintln!("error: {err}");
                    return Ok(3);
                }
                return Err(CliError::Usage(err.clone()));
            }
            (rec, g)
        }
        Resolved::Control(name, g) => {
            let family = if target.file.is_some() { "external" } else { "control" };
            (check_group(family, &name, &g, &opts), Some(g))
        }
    };
    let mut value = serde_json::to_value(&rec).expect("records serialize");
    if checks.iso {
        if let Some(g) = &group {
            let fp = fingerprint_with(g, None);
            value["fingerprint_data"] = serde_json::to_value(&fp).expect("fingerprints serialize");
        }
    }
    println!("{value}");
    if rec.internal {
        Ok(3)
    } else if rec.passed() {
        Ok(0)
    } else {
        Ok(1)
    }
}

fn parse_bound(s: &str) -> Result<OrderBound> {
    let bad = || CliError::Usage(format!("--max-order expects p:order, got '{s}'"));
    let (p, bound) = s.split_once(':').ok_or_else(bad)?;
    let p: u64 = p.trim().parse().map_err(|_| bad())?;
    let bound = bound.trim();
    let order: u64 = match bound.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            b.checked_pow(e).ok_or_else(bad)?
        }
        None => bound.parse().map_err(|_| bad())?,
    };
    OrderBound::from_order(p, order).ok_or_else(|| {
        CliError::Usage(format!("--max-order {s}: {order} is not a power of the prime {p}"))
    })
}

fn default_bound(p: u64) -> Option<OrderBound> {
    match p {
        2 => Some(OrderBound::new(2, 8)),
        3 => Some(OrderBound::new(3, 6)),
        5 => Some(OrderBound::new(5, 5)),
        _ => None,
    }
}

fn campaign_bounds(primes: Option<&str>, max_order: &[String]) -> Result<Vec<OrderBound>> {
    let explicit: Vec<OrderBound> = max_order.iter().map(|s| parse_bound(s)).collect::<Result<_>>()?;
    let primes: Vec<u64> = match primes {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>()
                    .ok()
                    .filter(|&p| mhk_core::numtheory::is_prime(p))
                    .ok_or_else(|| CliError::Usage(format!("--primes: '{t}' is not a prime")))
            })
            .collect::<Result<_>>()?,
        None if !explicit.is_empty() => explicit.iter().map(|b| b.p).collect(),
        None => vec![2, 3, 5],
    };
    primes
        .into_iter()
        .map(|p| {
            explicit
                .iter()
                .find(|b| b.p == p)
                .copied()
                .or_else(|| default_bound(p))
                .ok_or_else(|| CliError::Usage(format!("no --max-order given for p = {p}")))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    primes: Option<&str>,
    max_order: &[String],
    checks: Checks,
    jobs: usize,
    out: Option<&PathBuf>,
    budget_iso: usize,
    budgets: &Budgets,
) -> Result<u8> {
    let cfg = CampaignConfig {
        bounds: campaign_bounds(primes, max_order)?,
        checks,
        budget_subgroups: budgets.budget_subgroups,
        budget_iso,
        step_budget: budgets.budget_steps,
        jobs,
        timing: budgets.timing,
    };
    let report = run_campaign(&cfg)?;
    match out {
        Some(path) => {
            let io_err = |source| CliError::Io {
                path: path.display().to_string(),
                source,
            };
            let file = fs::File::create(path).map_err(io_err)?;
            report.write_ndjson(io::BufWriter::new(file)).map_err(io_err)?;
        }
        None => {
            report.write_ndjson(io::stdout().lock()).ok();
        }
    }
    let s = &report.summary;
    eprintln!(
        "{} specs: {} passed, {} failed, {} with budget markers; {} iso ties refuted, {} collisions",
        s.total,
        s.passed,
        s.failed,
        s.budget_exceeded,
        s.iso_pairs_refuted,
        s.iso_collisions.len()
    );
    Ok(report.exit_code() as u8)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Command::Build {
            target,
            presentation,
        } => cmd_build(&target, presentation),
        Command::Check {
            target,
            pairs,
            definitional,
            a_index,
            iso,
            class: _,
            budgets,
        } => cmd_check(
            &target,
            Checks {
                pairs,
                definitional,
                a_index,
                iso,
            },
            &budgets,
        ),
        Command::VerifyCatalog {
            primes,
            max_order,
            pairs,
            definitional,
            a_index,
            iso,
            jobs,
            out,
            budget_iso,
            budgets,
        } => cmd_verify(
            primes.as_deref(),
            &max_order,
            Checks {
                pairs,
                definitional,
                a_index,
                iso,
            },
            jobs,
            out.as_ref(),
            budget_iso,
            &budgets,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
