//! `maschke` — command-line front end for the verification engine.
//!
//! Exit status: 0 when every executed claim passes, 1 on any claim failure
//! or I/O error, 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context as _};
use clap::{Parser, Subcommand, ValueEnum};

use maschke_core::certify::{
    self, build_intersection_graph, catalogue, check_by_id, independent_set_search,
    CertificateReport, Check, Claim, ClaimStatus, VerifyContext,
};
use maschke_core::exactfield::is_odd_prime;
use maschke_core::geom::Line;

const DEFAULT_SEARCH_BUDGET_MS: u64 = 10_000;
const SEARCH_TARGET: usize = 96;

#[derive(Parser)]
#[command(
    name = "maschke",
    version,
    about = "Exact-arithmetic certificates for the 352 lines and the 96 pairwise \
             disjoint lines on the Maschke octic surface",
    after_help = "Exit status is 0 only if every executed claim passes."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Odd prime for the smoothness scan (default: try 5, 7, 11, ... in order)
    #[arg(long, global = true, value_parser = parse_odd_prime)]
    prime: Option<u64>,

    /// Degree for the invariant-dimension computation (0..=12)
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(0..=12))]
    degree: Option<u32>,

    /// Time budget in milliseconds for the independent-set search
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ms: Option<u64>,

    /// Worker threads for the parallel sweeps (default: all cores)
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report or export to this path instead of standard output
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run every claim in the catalogue
    VerifyAll,
    /// Group closure orders (1152 and 46080)
    GroupOrder,
    /// Line orbit sizes, the orbit partition, and incidence with the surface
    Orbits,
    /// Pairwise disjointness of the 96-line family
    Disjoint,
    /// Finite-field smoothness certificate
    Smoothness,
    /// Dimension of the degree-d invariants (default degrees 8 and 1)
    Molien,
    /// Export a line collection as canonical JSON
    ExportLines {
        /// Which collection to export
        #[arg(value_enum)]
        which: WhichLines,
    },
    /// Best-effort search for 96 pairwise disjoint lines in the full
    /// intersection graph (absence is not a proof of nonexistence)
    SearchIndependent,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichLines {
    Orbit160,
    Orbit192,
    Family96,
    All352,
}

fn parse_odd_prime(s: &str) -> Result<u64, String> {
    let n: u64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if is_odd_prime(n) {
        Ok(n)
    } else {
        Err(format!("{n} is not an odd prime"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        // best effort: a later global-pool init (e.g. in tests) is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers as usize)
            .build_global();
    }
    match run(cli) {
        Ok(all_passed) => {
            if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let mut cx = VerifyContext::new();
    if let Some(p) = cli.prime {
        cx = cx.with_smoothness_primes(vec![p]);
    }

    let report = match &cli.command {
        Command::VerifyAll => certify::run_checks(&mut cx, catalogue()),
        Command::GroupOrder => run_ids(&mut cx, &["closure-ab-order", "closure-g31-order"]),
        Command::Orbits => run_ids(
            &mut cx,
            &[
                "orbit-160-size",
                "orbit-192-size",
                "orbit-partition-352",
                "incidence-352-on-surface",
                "family-96-size",
            ],
        ),
        Command::Disjoint => run_ids(&mut cx, &["family-96-disjoint"]),
        Command::Smoothness => run_ids(&mut cx, &["smoothness"]),
        Command::Molien => {
            let ids: Vec<String> = match cli.degree {
                Some(d) => vec![format!("molien-degree-{d}")],
                None => vec!["molien-degree-8".into(), "molien-degree-1".into()],
            };
            let id_refs: Vec<&str> = ids.iter().map(String::as_str).collect();
            run_ids(&mut cx, &id_refs)
        }
        Command::ExportLines { which } => {
            let lines = collect_lines(&mut cx, *which)?;
            let json = serde_json::to_string_pretty(&lines).context("serializing lines")?;
            write_output(cli.output.as_deref(), &json)?;
            return Ok(true);
        }
        Command::SearchIndependent => {
            let budget = Duration::from_millis(cli.budget_ms.unwrap_or(DEFAULT_SEARCH_BUDGET_MS));
            search_report(&mut cx, budget)?
        }
    };

    let rendered = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.render_text(),
    };
    write_output(cli.output.as_deref(), &rendered)?;
    Ok(report.all_passed())
}

fn run_ids(cx: &mut VerifyContext, ids: &[&str]) -> CertificateReport {
    let checks: Vec<Box<dyn Check>> = ids
        .iter()
        .map(|id| check_by_id(id).expect("catalogue id"))
        .collect();
    certify::run_checks(cx, checks)
}

/// Deterministic export order: canonical-form lexicographic.
fn collect_lines(cx: &mut VerifyContext, which: WhichLines) -> anyhow::Result<Vec<Line>> {
    let mut lines = match which {
        WhichLines::Orbit160 => cx.orbit_160()?,
        WhichLines::Orbit192 => cx.orbit_192()?,
        WhichLines::Family96 => cx.family_96()?,
        WhichLines::All352 => cx.all_lines()?,
    };
    lines.sort_unstable();
    Ok(lines)
}

fn search_report(cx: &mut VerifyContext, budget: Duration) -> anyhow::Result<CertificateReport> {
    let started = std::time::Instant::now();
    let mut lines = cx.all_lines()?;
    lines.sort_unstable();
    let graph = build_intersection_graph(&lines);
    let found = independent_set_search(&graph, SEARCH_TARGET, budget);
    let millis = started.elapsed().as_millis() as u64;
    let (status, witness) = match found {
        Some(set) => (
            ClaimStatus::Pass,
            serde_json::json!({
                "summary": format!(
                    "found {} pairwise disjoint lines among {} (graph has {} intersecting pairs)",
                    set.len(), graph.vertex_count(), graph.edge_count()
                ),
                "target": SEARCH_TARGET,
                "vertices": graph.vertex_count(),
                "edges": graph.edge_count(),
                "independent_set": set,
            }),
        ),
        None => (
            ClaimStatus::Fail,
            serde_json::json!({
                "summary": format!(
                    "no independent set of size {SEARCH_TARGET} found within the budget \
                     (not a proof of nonexistence)"
                ),
                "target": SEARCH_TARGET,
                "budget_ms": budget.as_millis() as u64,
            }),
        ),
    };
    Ok(CertificateReport {
        claims: vec![Claim {
            id: "independent-set-search".into(),
            status,
            witness,
            millis,
        }],
        prime: None,
        engine_version: maschke_core::ENGINE_VERSION.into(),
    })
}

fn write_output(path: Option<&std::path::Path>, content: &str) -> anyhow::Result<()> {
    match path {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .with_context(|| anyhow!("creating {}", path.display()))?;
            file.write_all(content.as_bytes())
                .with_context(|| anyhow!("writing {}", path.display()))?;
            if !content.ends_with('\n') {
                file.write_all(b"\n")?;
            }
        }
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
        }
    }
    Ok(())
}
