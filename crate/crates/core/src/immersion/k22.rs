//! Deciding whether a digraph immerses two parallel edges in each direction.

use serde::{Deserialize, Serialize};

use crate::connectivity::{lambda, lambda_capped, min_separating_cut};
use crate::digraph::{CutReport, Digraph, EdgeId};
use crate::generators::gen_k22;

use super::brute::{brute_force_immersion_with, BruteOptions, BruteOutcome, DEFAULT_BUDGET};
use super::{verify_certificate, ImmersionCertificate};

/// Why a vertex pair cannot host the two terminals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum PairEvidence {
    /// `d⁺(cut.subset) ≤ 1` separates `from` from `to`.
    Cut { from: usize, to: usize, cut: CutReport },
    /// Both directions have λ ≥ 2, but an exhaustive search with this pair
    /// as terminals found no immersion.
    Exhausted { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRefutation {
    pub u: usize,
    pub v: usize,
    pub evidence: PairEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K22Outcome {
    Present(ImmersionCertificate),
    /// One refutation per unordered pair `u < v`.
    Absent(Vec<PairRefutation>),
    /// Some pair could be neither confirmed nor refuted within the budget.
    Undetermined {
        pairs: Vec<(usize, usize)>,
    },
}

impl K22Outcome {
    pub fn is_present(&self) -> bool {
        matches!(self, K22Outcome::Present(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, K22Outcome::Absent(_))
    }
}

pub fn has_k22(g: &Digraph) -> K22Outcome {
    has_k22_with_budget(g, DEFAULT_BUDGET)
}

/// A pair `u ≠ v` with `λ(u, v) ≥ 2` and `λ(v, u) ≥ 2` is necessary for an
/// immersion. Pairs failing it are refuted by a cut; the remaining pairs are
/// first tried greedily (two paths one way, then two more in what is left)
/// and otherwise settled by exact search with the pair fixed as terminals.
pub fn has_k22_with_budget(g: &Digraph, budget_per_pair: u64) -> K22Outcome {
    let n = g.vertex_count();
    let mut refuted = Vec::new();
    let mut candidates = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let mut evidence = None;
            for (a, b) in [(u, v), (v, u)] {
                if lambda_capped(g, a, b, 2) < 2 {
                    let (_, side) = min_separating_cut(g, &[a], &[b], 2);
                    evidence = Some(PairEvidence::Cut {
                        from: a,
                        to: b,
                        cut: g.cut_report_of_mask(&side),
                    });
                    break;
                }
            }
            match evidence {
                Some(evidence) => refuted.push(PairRefutation { u, v, evidence }),
                None => candidates.push((u, v)),
            }
        }
    }
    let mut open = Vec::new();
    for (u, v) in candidates {
        if let Some(c) = greedy(g, u, v).or_else(|| greedy(g, v, u)) {
            return K22Outcome::Present(c);
        }
        let opts = BruteOptions {
            budget: budget_per_pair,
            terminals: Some(vec![u, v]),
        };
        let r = brute_force_immersion_with(g, &gen_k22(), &opts);
        match r.outcome {
            BruteOutcome::Found(c) => return K22Outcome::Present(c),
            BruteOutcome::NotFound => refuted.push(PairRefutation {
                u,
                v,
                evidence: PairEvidence::Exhausted { nodes: r.nodes },
            }),
            BruteOutcome::BudgetExhausted => open.push((u, v)),
        }
    }
    if open.is_empty() {
        refuted.sort_by_key(|r| (r.u, r.v));
        K22Outcome::Absent(refuted)
    } else {
        K22Outcome::Undetermined { pairs: open }
    }
}

fn greedy(g: &Digraph, x: usize, y: usize) -> Option<ImmersionCertificate> {
    let forward = lambda(g, x, y).ok()?;
    let there: Vec<Vec<EdgeId>> = forward.paths.paths.into_iter().take(2).collect();
    let mut rest = g.clone();
    for p in &there {
        for &e in p {
            rest.remove_edge(e).ok()?;
        }
    }
    let back = lambda(&rest, y, x).ok()?;
    if back.value < 2 {
        return None;
    }
    let pattern = gen_k22();
    // pattern vertex 0 ↦ x, 1 ↦ y
    let mut cert = ImmersionCertificate::new(pattern.clone(), vec![x, y]);
    let mut forward_paths = there.into_iter();
    let mut back_paths = back.paths.paths.into_iter();
    for (pe, a, _) in pattern.edges() {
        let p = if a == 0 {
            forward_paths.next()?
        } else {
            back_paths.next()?
        };
        cert.paths.insert(pe, p);
    }
    cert.simplify_paths(g).ok()?;
    verify_certificate(g, &cert).is_valid().then_some(cert)
}
