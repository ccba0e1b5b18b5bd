//! Reproduction reports: bundled checks printed as a pass/fail table.

use std::time::Instant;

use clap::Args;
use serde::Serialize;

use immersion_core::connectivity::{lambda_capped, strong_edge_connectivity};
use immersion_core::generators::{
    con_counterexample_layout, dk_vertex_count, enumerate_cycles_one_chord, gen_complete, gen_no_k22,
    gen_random_eulerian, gen_random_eulerian_irregular, odd_cycle_layout,
};
use immersion_core::immersion::{
    brute_force_immersion, has_k22, quadratic_pipeline, solve_small_complete, verify_certificate, BruteOutcome,
};
use immersion_core::Digraph;

use crate::{resolve_seed, Failure, Outcome, SCHEMA_VERSION, TOOL_VERSION};

#[derive(Args)]
pub struct ReportArgs {
    /// One of 1, 2, 4, 6, 8.
    #[arg(long)]
    theorem: u8,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Number of random instances where applicable.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_parser = parse_budget, default_value = "1e7")]
    budget: u64,
    /// Defaults to $IMMLAB_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

/// Accepts plain integers and scientific forms such as `1e7` or `2.5e6`.
pub fn parse_budget(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("not a nonnegative integer budget: {s}")),
    }
}

#[derive(Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
enum Status {
    Pass,
    Fail,
    BudgetExhausted,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Row {
    check: String,
    status: Status,
    millis: u128,
    detail: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Report {
    schema_version: u32,
    tool_version: &'static str,
    theorem: u8,
    seed: u64,
    rows: Vec<Row>,
}

struct Table {
    rows: Vec<Row>,
}

impl Table {
    fn run(&mut self, check: impl Into<String>, f: impl FnOnce() -> (Status, String)) {
        let start = Instant::now();
        let (status, detail) = f();
        self.rows.push(Row {
            check: check.into(),
            status,
            millis: start.elapsed().as_millis(),
            detail,
        });
    }
}

fn pass_if(ok: bool, detail: String) -> (Status, String) {
    (if ok { Status::Pass } else { Status::Fail }, detail)
}

pub fn cmd_report(a: ReportArgs) -> Outcome {
    let seed = resolve_seed(a.seed, 0)?;
    let mut table = Table { rows: Vec::new() };
    match a.theorem {
        1 => no_k22_family(&mut table, a.k.unwrap_or(3)),
        2 => quadratic_pipeline_runs(&mut table, a.t.unwrap_or(3), a.count.unwrap_or(3), seed),
        4 => small_reductions(&mut table, a.count.unwrap_or(10), a.budget, seed),
        6 => connected_counterexample(&mut table, a.t.unwrap_or(4), a.budget)?,
        8 => odd_cycle_family(&mut table, a.k.unwrap_or(2)),
        other => {
            return Err(Failure::Input(format!(
                "no report for theorem {other}; use 1, 2, 4, 6 or 8"
            )))
        }
    }
    if a.json {
        let report = Report {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            theorem: a.theorem,
            seed,
            rows: table.rows,
        };
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return summarize(&report.rows);
    }
    for r in &table.rows {
        let label = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::BudgetExhausted => "BUDGET",
        };
        println!("{label:<6} {:>8} ms  {:<40} {}", r.millis, r.check, r.detail);
    }
    summarize(&table.rows)
}

fn summarize(rows: &[Row]) -> Outcome {
    if rows.iter().any(|r| r.status == Status::Fail) {
        Err(Failure::Negative("some checks failed".into()))
    } else if rows.iter().any(|r| r.status == Status::BudgetExhausted) {
        Err(Failure::Budget("some searches exhausted their budget".into()))
    } else {
        Ok(())
    }
}

fn no_k22_family(table: &mut Table, kmax: usize) {
    for k in 1..=kmax {
        let g = match gen_no_k22(k) {
            Ok(g) => g,
            Err(e) => {
                table.run(format!("no-k22({k}) generate"), || (Status::Fail, e.to_string()));
                continue;
            }
        };
        table.run(format!("no-k22({k}) min degrees >= {k}"), || {
            let (o, i) = (g.min_out_degree(), g.min_in_degree());
            pass_if(o >= k && i >= k, format!("min out {o}, min in {i}"))
        });
        table.run(format!("no-k22({k}) has no K2^2 immersion"), || {
            let out = has_k22(&g);
            pass_if(out.is_absent(), format!("{} vertices", g.vertex_count()))
        });
    }
}

fn quadratic_pipeline_runs(table: &mut Table, t: usize, count: usize, seed: u64) {
    let r = t * t.saturating_sub(1);
    let complete = gen_complete(r + 2);
    table.run(
        format!("pipeline on K{} for t = {t}", r + 2),
        || match quadratic_pipeline(&complete, t) {
            Ok(c) => pass_if(
                verify_certificate(&complete, &c).is_valid(),
                format!("{} host edges", c.edges_used()),
            ),
            Err(e) => (Status::Fail, e.to_string()),
        },
    );
    let n = r + 8;
    for i in 0..count as u64 {
        table.run(
            format!("pipeline on random({n}, {r}, seed {})", seed + i),
            || match gen_random_eulerian(n, r.max(1), seed + i).and_then(|g| quadratic_pipeline(&g, t).map(|c| (g, c)))
            {
                Ok((g, c)) => pass_if(
                    verify_certificate(&g, &c).is_valid(),
                    format!("{} host edges", c.edges_used()),
                ),
                Err(e) => (Status::Fail, e.to_string()),
            },
        );
    }
}

fn small_reductions(table: &mut Table, count: usize, budget: u64, seed: u64) {
    for i in 0..count {
        let t = 3 + i % 2;
        let n = 5 + i % 8;
        let s = seed + i as u64;
        let g = match gen_random_eulerian_irregular(n, t - 1, i % 3, s) {
            Ok(g) => g,
            Err(e) => {
                table.run(format!("generate n = {n}, seed {s}"), || (Status::Fail, e.to_string()));
                continue;
            }
        };
        table.run(
            format!("K{t} by reduction, n = {n}, seed {s}"),
            || match solve_small_complete(&g, t, None) {
                Ok(c) => pass_if(
                    verify_certificate(&g, &c).is_valid(),
                    format!("{} host edges", c.edges_used()),
                ),
                Err(e) => (Status::Fail, e.to_string()),
            },
        );
        if n <= 8 {
            table.run(format!("K{t} by exhaustive search, n = {n}, seed {s}"), || {
                let r = brute_force_immersion(&g, &gen_complete(t), budget);
                match r.outcome {
                    BruteOutcome::Found(c) => {
                        pass_if(verify_certificate(&g, &c).is_valid(), format!("{} nodes", r.nodes))
                    }
                    BruteOutcome::NotFound => (Status::Fail, format!("no immersion after {} nodes", r.nodes)),
                    BruteOutcome::BudgetExhausted => (Status::BudgetExhausted, format!("{} nodes", r.nodes)),
                }
            });
        }
    }
}

fn connected_counterexample(table: &mut Table, t: usize, budget: u64) -> Outcome {
    let layout = con_counterexample_layout(t)?;
    let g = layout.digraph.clone();
    let k = layout.k;
    table.run(
        format!("F(t = {t}) strongly {k}-edge-connected"),
        || match strong_edge_connectivity(&g) {
            Ok(c) => pass_if(c >= k, format!("strong edge-connectivity {c}")),
            Err(e) => (Status::Fail, e.to_string()),
        },
    );
    if k >= 1 {
        let half = dk_vertex_count(k);
        // with the matching gone no edge leaves D_k, so λ inside it is λ in F - M
        let inner: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(_, a, b)| a < half && b < half)
            .map(|(_, a, b)| (a, b))
            .collect();
        let unmatched = Digraph::from_edges(half, &inner)?;
        table.run(
            format!("D{k} part of F - M: no pair with lambda >= 2 both ways"),
            || {
                let bad = (0..half)
                    .flat_map(|u| (u + 1..half).map(move |v| (u, v)))
                    .find(|&(u, v)| lambda_capped(&unmatched, u, v, 2) >= 2 && lambda_capped(&unmatched, v, u, 2) >= 2);
                match bad {
                    None => (Status::Pass, format!("{} pairs checked", half * (half - 1) / 2)),
                    Some((u, v)) => (Status::Fail, format!("pair ({u}, {v})")),
                }
            },
        );
    }
    table.run(format!("F(t = {t}) has no K{t} immersion"), || {
        let r = brute_force_immersion(&g, &gen_complete(t), budget);
        match r.outcome {
            BruteOutcome::NotFound => (Status::Pass, format!("exhaustive, {} nodes", r.nodes)),
            BruteOutcome::BudgetExhausted => (Status::BudgetExhausted, format!("{} nodes", r.nodes)),
            BruteOutcome::Found(_) => (Status::Fail, "an immersion was found".into()),
        }
    });
    Ok(())
}

fn odd_cycle_family(table: &mut Table, kmax: usize) {
    for k in 1..=kmax {
        let l = match odd_cycle_layout(k) {
            Ok(l) => l,
            Err(e) => {
                table.run(format!("odd-cycle({k}) generate"), || (Status::Fail, e.to_string()));
                continue;
            }
        };
        let g = &l.digraph;
        table.run(format!("odd-cycle({k}) outdegrees = {k}"), || {
            pass_if(
                g.vertices().all(|v| g.out_degree(v) == k),
                format!("{} vertices", g.vertex_count()),
            )
        });
        table.run(
            format!("odd-cycle({k}) all cycles odd"),
            || match enumerate_cycles_one_chord(g, &l.tree_edges) {
                Ok(cycles) => {
                    let even = cycles.iter().filter(|c| c.len() % 2 == 0).count();
                    pass_if(even == 0, format!("{} cycles, {even} even", cycles.len()))
                }
                Err(e) => (Status::Fail, e.to_string()),
            },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        assert_eq!(parse_budget("1e7"), Ok(10_000_000));
        assert_eq!(parse_budget("2.5e3"), Ok(2500));
        assert_eq!(parse_budget("42"), Ok(42));
        assert!(parse_budget("-1").is_err());
        assert!(parse_budget("1.5").is_err());
        assert!(parse_budget("lots").is_err());
    }
}
