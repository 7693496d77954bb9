//! Command-line surface. Exit codes are a contract shared by every
//! subcommand: 0 for the affirmative outcome (arrows / value found /
//! coloring emitted / all checks pass), 1 for the negative verdict, 2 for
//! usage and hard errors. `color` counts an emitted coloring as the
//! affirmative outcome, so there 1 means the host arrows.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::arrowing::{
    arrows, coloring_is_good, find_good_coloring, refutation_certificate, ArrowingCertificate,
    ArrowingInstance, SearchBudget,
};
use crate::cache::{now_unix, CacheRecord, VerdictCache};
use crate::canon::canonical_form;
use crate::construct::{construct_upper, m_min};
use crate::enumerate::{compute_size_ramsey, enumerate_class, GraphClassQuery};
use crate::error::{
    CacheError, CertificateError, ConstructError, EnumerateError, Graph6Error, InstanceError,
    ProofError, SearchError,
};
use crate::graph6::{parse_graph6, to_graph6};
use crate::proof::proof_color;
use crate::sample::random_sub_budget_host;

#[derive(Parser)]
#[command(
    name = "star-ramsey",
    version,
    about = "Exact arrowing decisions, constructions, and derived colorings for star-forest vs. star instances"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether a host arrows (n K_{1,p}, K_{1,m})
    Arrow(ArrowArgs),
    /// Print the n(m+p)-1-edge arrowing construction as graph6
    Construct(InstanceArgs),
    /// Derive a good coloring of a sub-budget host, with trace
    Color(ColorArgs),
    /// Exact (connected) size Ramsey value by enumeration
    Rc(RcArgs),
    /// Sweep (n, p, m) ranges: construction arrows, sampled colorings hold
    VerifyTheorem(VerifyArgs),
    /// Re-validate a stored certificate without searching
    Check(CheckArgs),
    /// Stream one graph6 line per isomorphism class at an edge count
    Enumerate(EnumArgs),
}

#[derive(Args, Clone, Copy)]
struct InstanceArgs {
    /// Number of disjoint red stars
    #[arg(short)]
    n: usize,
    /// Red star arity (K_{1,p})
    #[arg(short)]
    p: usize,
    /// Blue star arity (K_{1,m})
    #[arg(short)]
    m: usize,
}

impl InstanceArgs {
    fn instance(self) -> Result<ArrowingInstance, InstanceError> {
        ArrowingInstance::new(self.n, self.p, self.m)
    }
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// Search node budget
    #[arg(long, default_value_t = SearchBudget::default().max_nodes)]
    budget_nodes: u64,
}

impl BudgetArgs {
    fn budget(self) -> SearchBudget {
        SearchBudget {
            max_nodes: self.budget_nodes,
        }
    }
}

#[derive(Args)]
struct ArrowArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Host graph in graph6
    #[arg(short)]
    g: String,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the certificate as JSON here
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Verdict cache file (default: $STAR_RAMSEY_CACHE/verdicts.jsonl)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TraceFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ColorArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Host graph in graph6
    #[arg(short)]
    g: String,
    /// Trace output format
    #[arg(long, value_enum, default_value_t = TraceFormat::Text)]
    trace: TraceFormat,
    /// Skip the derivation and search for a coloring directly
    #[arg(long)]
    force_search: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Write the coloring as a refuting certificate here
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Args)]
struct RcArgs {
    #[command(flatten)]
    inst: InstanceArgs,
    /// Largest edge count to enumerate
    #[arg(long, default_value_t = 10)]
    e_max: usize,
    /// Restrict hosts to connected graphs (the default)
    #[arg(long)]
    connected: bool,
    /// Allow disconnected hosts
    #[arg(long, conflicts_with = "connected")]
    any: bool,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Verdict cache file (default: $STAR_RAMSEY_CACHE/verdicts.jsonl)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest n in the sweep
    #[arg(long, default_value_t = 2)]
    n_max: usize,
    /// Largest p in the sweep
    #[arg(long, default_value_t = 2)]
    p_max: usize,
    /// Check m = m_min .. m_min+k for each (n, p)
    #[arg(short, default_value_t = 1)]
    k: usize,
    /// Random connected hosts colored per instance
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Sampling seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct CheckArgs {
    /// Certificate file to re-validate
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Args)]
struct EnumArgs {
    /// Edge count
    #[arg(short, long)]
    edges: usize,
    /// Restrict to connected graphs (the default)
    #[arg(long)]
    connected: bool,
    /// Include disconnected graphs
    #[arg(long, conflicts_with = "connected")]
    any: bool,
    /// Cap on vertex count
    #[arg(long)]
    max_vertices: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("{0}; rerun with --force-search to bypass the derivation preconditions")]
    Precondition(ProofError),
    #[error(transparent)]
    Proof(ProofError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parse the process arguments, run the subcommand, return the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<i32, CliError> {
    match cmd {
        Cmd::Arrow(a) => cmd_arrow(a),
        Cmd::Construct(a) => cmd_construct(a),
        Cmd::Color(a) => cmd_color(a),
        Cmd::Rc(a) => cmd_rc(a),
        Cmd::VerifyTheorem(a) => cmd_verify_theorem(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Enumerate(a) => cmd_enumerate(a),
    }
}

/// `--cache` names the file; otherwise $STAR_RAMSEY_CACHE names a directory
/// holding the default file. No cache when neither is set.
fn open_cache(flag: Option<&Path>) -> Result<Option<VerdictCache>, CliError> {
    let path = match flag {
        Some(p) => p.to_path_buf(),
        None => match std::env::var_os("STAR_RAMSEY_CACHE") {
            Some(dir) => {
                fs::create_dir_all(&dir)?;
                PathBuf::from(dir).join("verdicts.jsonl")
            }
            None => return Ok(None),
        },
    };
    Ok(Some(VerdictCache::open(path)?))
}

fn cmd_arrow(a: ArrowArgs) -> Result<i32, CliError> {
    let inst = a.inst.instance()?;
    let g = parse_graph6(&a.g)?;
    let mut cache = open_cache(a.cache.as_deref())?;
    let g6 = canonical_form(&g);
    if let Some(rec) = cache
        .as_ref()
        .and_then(|c| c.get(&g6, inst.n, inst.p, inst.m))
    {
        println!("arrows: {} (cached)", rec.arrows);
        println!("canonical: {g6}");
        if let Some(ids) = &rec.witness_red_edge_ids {
            println!("witness red edge ids: {ids:?}");
        }
        return Ok(if rec.arrows { 0 } else { 1 });
    }
    let cert = arrows(&g, inst, a.budget.budget())?;
    println!("arrows: {}", cert.arrows);
    println!("canonical: {}", cert.graph6);
    if let Some(ids) = &cert.witness_red_edge_ids {
        println!("witness red edge ids: {ids:?}");
    }
    println!("nodes: {}  prunes: {}", cert.stats.nodes, cert.stats.prunes);
    if let Some(path) = &a.cert {
        fs::write(path, cert.to_json())?;
    }
    if let Some(c) = cache.as_mut() {
        c.put(CacheRecord {
            graph6: cert.graph6.clone(),
            n: inst.n,
            p: inst.p,
            m: inst.m,
            arrows: cert.arrows,
            witness_red_edge_ids: cert.witness_red_edge_ids.clone(),
            timestamp: now_unix(),
        })?;
    }
    Ok(if cert.arrows { 0 } else { 1 })
}

fn cmd_construct(a: InstanceArgs) -> Result<i32, CliError> {
    a.instance()?;
    let g = construct_upper(a.n, a.p, a.m)?;
    println!("{}", to_graph6(&g));
    Ok(0)
}

fn cmd_color(a: ColorArgs) -> Result<i32, CliError> {
    let inst = a.inst.instance()?;
    let g = parse_graph6(&a.g)?;
    if a.force_search {
        return match find_good_coloring(&g, inst, a.budget.budget())? {
            Some(col) => {
                println!("red edge ids: {:?}", col.red_edge_ids());
                println!("search coloring; no derivation trace");
                if let Some(path) = &a.cert {
                    fs::write(path, refutation_certificate(&g, inst, &col).to_json())?;
                }
                Ok(0)
            }
            None => {
                println!("host arrows; no good coloring exists");
                Ok(1)
            }
        };
    }
    let (col, trace) = proof_color(&g, inst).map_err(|e| match e {
        ProofError::Disconnected
        | ProofError::EdgeBudget { .. }
        | ProofError::MBelowThreshold { .. } => CliError::Precondition(e),
        other => CliError::Proof(other),
    })?;
    println!("red edge ids: {:?}", col.red_edge_ids());
    match a.trace {
        TraceFormat::Text => print!("{trace}"),
        TraceFormat::Json => println!("{}", trace.to_json()),
    }
    if let Some(path) = &a.cert {
        fs::write(path, refutation_certificate(&g, inst, &col).to_json())?;
    }
    Ok(0)
}

fn cmd_rc(a: RcArgs) -> Result<i32, CliError> {
    let inst = a.inst.instance()?;
    let mut cache = open_cache(a.cache.as_deref())?;
    let res = compute_size_ramsey(inst, !a.any, a.e_max, a.budget.budget(), cache.as_mut())?;
    for lvl in &res.levels {
        println!(
            "e={}: examined {}, refuted {}",
            lvl.edge_count, lvl.examined, lvl.refuted
        );
    }
    match res.value {
        Some(v) => {
            println!("value = {v}");
            println!(
                "witness = {}",
                res.witness_graph6.expect("value has witness")
            );
            Ok(0)
        }
        None => {
            println!(
                "no arrowing host within e_max = {}; value > {}",
                a.e_max, a.e_max
            );
            Ok(1)
        }
    }
}

fn cmd_verify_theorem(a: VerifyArgs) -> Result<i32, CliError> {
    if a.n_max < 1 || a.p_max < 1 {
        return Err(CliError::Usage("n-max and p-max must be at least 1".into()));
    }
    let budget = a.budget.budget();
    let mut failures = 0usize;
    for n in 1..=a.n_max {
        for p in 1..=a.p_max {
            let lo = m_min(n, p);
            for m in lo..=lo + a.k {
                let inst = ArrowingInstance::new(n, p, m)?;
                let host = construct_upper(n, p, m)?;
                let cert = arrows(&host, inst, budget)?;
                let lower = sample_colorings(&a, inst);
                let (good, fallbacks, first_err) = lower;
                let upper_ok = cert.arrows;
                let lower_ok = good == a.samples && first_err.is_none();
                if upper_ok && lower_ok {
                    println!(
                        "n={n} p={p} m={m}: upper arrows (nodes={}); lower sampled {good}/{} good, fallback {fallbacks}",
                        cert.stats.nodes, a.samples
                    );
                } else {
                    failures += 1;
                    println!(
                        "n={n} p={p} m={m}: FAIL (upper arrows={}, lower {good}/{} good{})",
                        cert.arrows,
                        a.samples,
                        match &first_err {
                            Some(e) => format!(", first error: {e}"),
                            None => String::new(),
                        }
                    );
                }
                // A hard derivation error is a falsification alarm, not a
                // tally entry; surface it as one.
                if let Some(e) = first_err {
                    return Err(CliError::Proof(e));
                }
            }
        }
    }
    if failures == 0 {
        println!("all instances verified");
        Ok(0)
    } else {
        println!("{failures} instances failed");
        Ok(1)
    }
}

/// Color `samples` seeded random sub-budget hosts; returns (good count,
/// fallback count, first hard error). All inputs are immutable, so the
/// samples run in parallel.
fn sample_colorings(a: &VerifyArgs, inst: ArrowingInstance) -> (usize, usize, Option<ProofError>) {
    let outcomes: Vec<Result<bool, ProofError>> = (0..a.samples)
        .into_par_iter()
        .map(|i| {
            let s = a
                .seed
                .wrapping_add(((inst.n * 37 + inst.p) * 41 + inst.m) as u64)
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(i as u64);
            let host = random_sub_budget_host(s, inst.n, inst.p, inst.m);
            let (col, trace) = proof_color(&host, inst)?;
            debug_assert!(coloring_is_good(&col, inst));
            Ok(trace.used_fallback())
        })
        .collect();
    let mut good = 0;
    let mut fallbacks = 0;
    let mut first_err = None;
    for o in outcomes {
        match o {
            Ok(fb) => {
                good += 1;
                fallbacks += usize::from(fb);
            }
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    }
    (good, fallbacks, first_err)
}

fn cmd_check(a: CheckArgs) -> Result<i32, CliError> {
    let raw = fs::read_to_string(&a.cert)?;
    let cert = ArrowingCertificate::from_json(&raw)?;
    match cert.validate() {
        Ok(()) => {
            println!(
                "certificate ok: {} n={} p={} m={} arrows={}",
                cert.graph6, cert.n, cert.p, cert.m, cert.arrows
            );
            Ok(0)
        }
        Err(e) => {
            println!("certificate invalid: {e}");
            Ok(1)
        }
    }
}

fn cmd_enumerate(a: EnumArgs) -> Result<i32, CliError> {
    let mut q = if a.any {
        GraphClassQuery::any(a.edges)
    } else {
        GraphClassQuery::connected(a.edges)
    };
    if let Some(cap) = a.max_vertices {
        if cap == 0 {
            return Err(CliError::Usage("max-vertices must be at least 1".into()));
        }
        q.max_vertices = cap.min(crate::graph::MAX_VERTICES);
    }
    for g in enumerate_class(&q)? {
        println!("{}", to_graph6(&g));
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_args_parse_with_defaults() {
        let cli = Cli::try_parse_from(["star-ramsey", "verify-theorem"]).unwrap();
        match cli.command {
            Cmd::VerifyTheorem(v) => {
                assert_eq!((v.n_max, v.p_max, v.k), (2, 2, 1));
                assert_eq!(v.samples, 100);
                assert_eq!(v.seed, 1);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn connected_and_any_conflict() {
        assert!(Cli::try_parse_from([
            "star-ramsey",
            "rc",
            "-n",
            "2",
            "-p",
            "1",
            "-m",
            "2",
            "--connected",
            "--any"
        ])
        .is_err());
    }

    #[test]
    fn sampled_colorings_all_good_on_smallest_instance() {
        let args = Cli::try_parse_from(["star-ramsey", "verify-theorem", "--samples", "24"]);
        let a = match args.unwrap().command {
            Cmd::VerifyTheorem(v) => v,
            _ => unreachable!(),
        };
        let inst = ArrowingInstance::new(2, 1, 4).unwrap();
        let (good, _, err) = sample_colorings(&a, inst);
        assert_eq!(good, 24);
        assert!(err.is_none());
    }
}
