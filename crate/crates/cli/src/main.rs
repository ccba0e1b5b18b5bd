//! `immlab`: generate digraph families, search for immersions, verify
//! certificates, and run reproduction reports.
//!
//! Exit codes: 0 pass, 1 definite negative, 2 input or precondition error,
//! 3 search budget exhausted, 4 internal error.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use immersion_core::arborescence::build_complete_immersion;
use immersion_core::connectivity::{lambda, strong_edge_connectivity};
use immersion_core::generators::{
    dk_layout, enumerate_cycles_one_chord, gen_complete, gen_con_counterexample, gen_fig3, gen_k22, gen_no_k22,
    gen_odd_cycle_digraph, gen_random_eulerian,
};
use immersion_core::immersion::{
    brute_force_immersion, has_k22, quadratic_pipeline, solve_small_complete, verify_certificate, BruteOutcome,
    ImmersionCertificate, K22Outcome, Verification,
};
use immersion_core::{Digraph, EdgeId, Error};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "immlab", version, about = "Digraph immersion laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a digraph family in edge-list format.
    Gen(GenArgs),
    /// Run structural checks on a digraph.
    Check(CheckArgs),
    /// Find a complete-digraph (or pattern) immersion and write its certificate.
    Immerse(ImmerseArgs),
    /// Verify a certificate against a host digraph.
    Verify(VerifyArgs),
    /// Run a bundled reproduction report and print a pass/fail table.
    Report(report::ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Complete,
    K22,
    Dk,
    NoK22,
    ConCounterexample,
    Fig3,
    OddCycle,
    RandomEulerian,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Defaults to $IMMLAB_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    input: PathBuf,
    #[arg(long)]
    eulerian: bool,
    #[arg(long)]
    simple: bool,
    /// No immersion of two parallel edges in each direction.
    #[arg(long)]
    no_k22: bool,
    /// Every cycle has odd length (cycles closed by one non-tree edge each).
    #[arg(long)]
    odd_cycles: bool,
    /// Number of leading edges forming the spanning arborescence for
    /// `--odd-cycles` (default: n - 1).
    #[arg(long)]
    tree_edges: Option<usize>,
    /// Report λ(x, y) for the pair `x,y`.
    #[arg(long, value_name = "X,Y", value_parser = parse_pair)]
    lambda: Option<(usize, usize)>,
    /// Require strong edge-connectivity at least this value.
    #[arg(long)]
    connectivity: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Auto,
    /// Reduction for t <= 4 on Eulerian hosts.
    #[value(name = "theorem4")]
    Reduction,
    /// Arborescence packing; needs strong t(t-1)-edge-connectivity.
    #[value(name = "corollary1")]
    Packing,
    Quadratic,
    Brute,
}

#[derive(Args)]
struct ImmerseArgs {
    input: PathBuf,
    /// Immerse the complete digraph on this many vertices.
    #[arg(long, conflicts_with = "pattern", required_unless_present = "pattern")]
    t: Option<usize>,
    /// Immerse the digraph in this edge-list file (brute force only).
    #[arg(long)]
    pattern: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    method: Method,
    /// Search-node budget for brute force; accepts forms like `1e7`.
    #[arg(long, value_parser = report::parse_budget, default_value = "1e7")]
    budget: u64,
    /// Exceptional vertex for the small solver.
    #[arg(long)]
    v0: Option<usize>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    host: PathBuf,
    certificate: PathBuf,
}

/// A failure with its exit code.
pub enum Failure {
    Negative(String),
    Input(String),
    Budget(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Negative(m) | Failure::Input(m) | Failure::Budget(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Check(a) => cmd_check(a),
        Command::Immerse(a) => cmd_immerse(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Report(a) => report::cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("immlab: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

/// `--seed`, else `$IMMLAB_SEED`, else `default`.
pub fn resolve_seed(flag: Option<u64>, default: u64) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("IMMLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("IMMLAB_SEED is not an integer: {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (x, y) = s.split_once(',').ok_or("expected two vertices as X,Y")?;
    let v = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((v(x)?, v(y)?))
}

/// Reads an edge list from `path`, or from stdin when `path` is `-`.
fn read_digraph(path: &Path) -> Result<Digraph, Failure> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Digraph::from_edge_list(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Internal(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn need(value: Option<usize>, flag: &str) -> Result<usize, Failure> {
    value.ok_or_else(|| Failure::Input(format!("this family needs --{flag}")))
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let g = match a.family {
        Family::Complete => {
            let t = need(a.t, "t")?;
            if t == 0 {
                return Err(Failure::Input("--t must be at least 1".into()));
            }
            gen_complete(t)
        }
        Family::K22 => gen_k22(),
        Family::Dk => dk_layout(need(a.k, "k")?)?.digraph,
        Family::NoK22 => gen_no_k22(need(a.k, "k")?)?,
        Family::ConCounterexample => gen_con_counterexample(need(a.t, "t")?)?,
        Family::Fig3 => gen_fig3(),
        Family::OddCycle => gen_odd_cycle_digraph(need(a.k, "k")?)?,
        Family::RandomEulerian => {
            let seed = resolve_seed(a.seed, 0)?;
            gen_random_eulerian(need(a.n, "n")?, need(a.d, "d")?, seed)?
        }
    };
    write_or_print(a.out.as_deref(), &g.to_edge_list())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckRow {
    check: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CheckReport {
    schema_version: u32,
    tool_version: &'static str,
    input: String,
    vertices: usize,
    edges: usize,
    checks: Vec<CheckRow>,
}

fn cmd_check(a: CheckArgs) -> Outcome {
    let g = read_digraph(&a.input)?;
    let mut rows = Vec::new();
    let mut row = |check: &str, pass: bool, detail: String| {
        rows.push(CheckRow {
            check: check.into(),
            pass,
            detail,
        })
    };
    if a.eulerian {
        let ok = g.is_eulerian();
        row(
            "eulerian",
            ok,
            if ok {
                "balanced and connected".into()
            } else {
                "not Eulerian".into()
            },
        );
    }
    if a.simple {
        let c = g.classify();
        row(
            "simple",
            c.simple,
            format!(
                "{} parallel classes, loops: {}",
                c.parallel_classes.len(),
                g.has_loops()
            ),
        );
    }
    if a.no_k22 {
        match has_k22(&g) {
            K22Outcome::Absent(pairs) => row("no-k22", true, format!("{} vertex pairs refuted", pairs.len())),
            K22Outcome::Present(c) => row(
                "no-k22",
                false,
                format!("immersion found at terminals {:?}", c.terminals),
            ),
            K22Outcome::Undetermined { pairs } => {
                row("no-k22", false, format!("undetermined for pairs {pairs:?} (budget)"))
            }
        }
    }
    if a.odd_cycles {
        let m = a.tree_edges.unwrap_or(g.vertex_count().saturating_sub(1));
        let tree: Vec<EdgeId> = g.edge_ids().into_iter().take(m).collect();
        match enumerate_cycles_one_chord(&g, &tree) {
            Ok(cycles) => {
                let even: Vec<usize> = cycles.iter().map(|c| c.len()).filter(|l| l % 2 == 0).collect();
                row(
                    "odd-cycles",
                    even.is_empty(),
                    format!("{} cycles, {} of even length", cycles.len(), even.len()),
                );
            }
            Err(e) => row("odd-cycles", false, e.to_string()),
        }
    }
    if let Some((x, y)) = a.lambda {
        let l = lambda(&g, x, y)?;
        row("lambda", true, format!("lambda({x}, {y}) = {}", l.value));
    }
    if let Some(k) = a.connectivity {
        let c = strong_edge_connectivity(&g)?;
        row(
            "connectivity",
            c >= k,
            format!("strong edge-connectivity {c}, required {k}"),
        );
    }
    let all = rows.iter().all(|r| r.pass);
    if a.json {
        let report = CheckReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            input: a.input.display().to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            checks: rows,
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        for r in &rows {
            println!(
                "{:<4} {:<13} {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.check,
                r.detail
            );
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Negative("some checks failed".into()))
    }
}

fn brute(g: &Digraph, pattern: &Digraph, budget: u64) -> Result<ImmersionCertificate, Failure> {
    let r = brute_force_immersion(g, pattern, budget);
    match r.outcome {
        BruteOutcome::Found(c) => Ok(c),
        BruteOutcome::NotFound => Err(Failure::Negative(format!(
            "no immersion exists (exhaustive search, {} nodes)",
            r.nodes
        ))),
        BruteOutcome::BudgetExhausted => Err(Failure::Budget(format!("search budget of {budget} nodes exhausted"))),
    }
}

fn complete_by(method: Method, g: &Digraph, t: usize, a: &ImmerseArgs) -> Result<ImmersionCertificate, Failure> {
    match method {
        Method::Reduction => Ok(solve_small_complete(g, t, a.v0)?),
        Method::Packing => Ok(build_complete_immersion(g, t, None)?),
        Method::Quadratic => Ok(quadratic_pipeline(g, t)?),
        Method::Brute => brute(g, &gen_complete(t), a.budget),
        Method::Auto => {
            if t <= 4 && g.is_eulerian() {
                match solve_small_complete(g, t, a.v0) {
                    Err(Error::Precondition(_)) => {}
                    other => return Ok(other?),
                }
            }
            match quadratic_pipeline(g, t) {
                Err(Error::Precondition(_)) => brute(g, &gen_complete(t), a.budget),
                other => Ok(other?),
            }
        }
    }
}

fn cmd_immerse(a: ImmerseArgs) -> Outcome {
    let g = read_digraph(&a.input)?;
    let cert = match (&a.pattern, a.t) {
        (Some(p), _) => {
            if !matches!(a.method, Method::Auto | Method::Brute) {
                return Err(Failure::Input(
                    "a pattern file is only supported by the brute method".into(),
                ));
            }
            let pattern = read_digraph(p)?;
            brute(&g, &pattern, a.budget)?
        }
        (None, Some(t)) => complete_by(a.method, &g, t, &a)?,
        (None, None) => return Err(Failure::Input("give --t or --pattern".into())),
    };
    let text = cert.to_json();
    // re-read what was written and verify it against a fresh parse of the host
    let written = match &a.out {
        Some(p) => {
            write_or_print(Some(p), &text)?;
            fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        None => text.clone(),
    };
    let host = read_digraph(&a.input)?;
    let reread = ImmersionCertificate::from_json(&written)?;
    if let Verification::Invalid(v) = verify_certificate(&host, &reread) {
        return Err(Failure::Internal(format!("written certificate does not verify: {v}")));
    }
    if a.out.is_none() {
        println!("{text}");
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let host = read_digraph(&a.host)?;
    let text =
        fs::read_to_string(&a.certificate).map_err(|e| Failure::Input(format!("{}: {e}", a.certificate.display())))?;
    let cert = ImmersionCertificate::from_json(&text)?;
    match verify_certificate(&host, &cert) {
        Verification::Valid => {
            println!(
                "valid: {} pattern edges routed over {} host edges",
                cert.pattern.edge_count(),
                cert.edges_used()
            );
            Ok(())
        }
        Verification::Invalid(v) => Err(Failure::Negative(format!("invalid certificate: {v}"))),
    }
}
