//! Splitting off paths of length two, admissible splits that preserve
//! connectivity away from the split vertex, and regularisation.

mod regularize;
mod trace;

pub use regularize::{regularize, Regularized};
pub(crate) use trace::simplify_walk;
pub use trace::{HubRoute, ImmersionTrace, Move, Routing};

use crate::connectivity::lambda_capped;
use crate::digraph::{CutReport, Digraph, EdgeId};
use crate::error::{internal, precondition, Error, Result};

/// Splits off `e1 = x→y`, `e2 = y→z`; a resulting loop is deleted at once.
pub fn split_off(g: &Digraph, e1: EdgeId, e2: EdgeId) -> Result<(Digraph, ImmersionTrace)> {
    let mut h = g.clone();
    let mut trace = ImmersionTrace::new();
    trace.split(&mut h, e1, e2)?;
    Ok((h, trace))
}

/// A nonempty proper subset `X` of `V∖{v}` with `d⁺(X) < k` or `d⁻(X) < k`,
/// if one exists. Probes min cuts from one fixed vertex of `V∖{v}`.
pub fn star_violation(g: &Digraph, v: usize, k: usize) -> Result<Option<CutReport>> {
    g.check_vertex(v)?;
    let others: Vec<usize> = g.vertices().filter(|&x| x != v).collect();
    if others.len() < 2 || k == 0 {
        return Ok(None);
    }
    let r = others[0];
    let n = g.vertex_count();
    for &y in &others[1..] {
        for (a, b) in [(r, y), (y, r)] {
            if lambda_capped(g, a, b, k) < k {
                let (_, side) = crate::connectivity::min_separating_cut(g, &[a], &[b], k);
                // side has d⁺ < k; use it or its complement, whichever avoids v
                let inside: Vec<bool> = if side[v] {
                    (0..n).map(|x| !side[x]).collect()
                } else {
                    side
                };
                return Ok(Some(g.cut_report_of_mask(&inside)));
            }
        }
    }
    Ok(None)
}

fn check_split_vertex(g: &Digraph, v: usize, k: usize) -> Result<()> {
    let (out, inn) = g.degrees(v)?;
    if out != inn {
        return Err(precondition(format!(
            "vertex {v} is unbalanced: out-degree {out}, in-degree {inn}"
        )));
    }
    if let Some(violation) = star_violation(g, v, k)? {
        return Err(Error::CutCondition { k, violation });
    }
    Ok(())
}

/// An out-edge `v→w` such that splitting off `e_in`, `v→w` keeps every
/// nonempty proper `X ⊆ V∖{v}` at `d⁺(X), d⁻(X) ≥ k`. Candidates are tried
/// in ascending id order.
pub fn mader_admissible_split(g: &Digraph, v: usize, e_in: EdgeId, k: usize) -> Result<EdgeId> {
    let (_, head) = g.try_endpoints(e_in)?;
    if head != v {
        return Err(precondition(format!("{e_in} does not enter vertex {v}")));
    }
    if g.out_degree(v) == 0 {
        return Err(precondition(format!("vertex {v} has no out-edges")));
    }
    check_split_vertex(g, v, k)?;
    for &e_out in g.out_edges(v) {
        if e_out == e_in {
            continue;
        }
        let (h, _) = split_off(g, e_in, e_out)?;
        if star_violation(&h, v, k)?.is_none() {
            return Ok(e_out);
        }
    }
    Err(internal(format!(
        "no admissible split at vertex {v} for {e_in} with k = {k}"
    )))
}

#[derive(Clone, Debug)]
pub struct CompleteSplit {
    pub digraph: Digraph,
    pub trace: ImmersionTrace,
    /// Non-loop edges created by the splits, in creation order.
    pub created: Vec<EdgeId>,
}

/// Splits off every edge pair at `v` (after deleting loops at `v`) until `v`
/// is isolated, each split chosen admissibly for `k`.
pub fn complete_split(g: &Digraph, v: usize, k: usize) -> Result<CompleteSplit> {
    let mut h = g.clone();
    let mut trace = ImmersionTrace::new();
    let loops: Vec<EdgeId> = h
        .out_edges(v)
        .iter()
        .copied()
        .filter(|&e| h.endpoints(e) == Some((v, v)))
        .collect();
    for e in loops {
        trace.delete_edge(&mut h, e)?;
    }
    check_split_vertex(&h, v, k)?;
    let mut created = Vec::new();
    while let Some(&e_in) = h.in_edges(v).first() {
        let e_out = mader_admissible_split(&h, v, e_in, k)?;
        if let Some(e) = trace.split(&mut h, e_in, e_out)? {
            created.push(e);
        }
    }
    Ok(CompleteSplit {
        digraph: h,
        trace,
        created,
    })
}

/// A digraph obtained by splitting, with the `(in, out)` edge pairs used.
pub type Splitting = (Digraph, Vec<(EdgeId, EdgeId)>);

/// Every complete splitting at `v`: one digraph per bijection between the
/// in-edges and out-edges of `v` (loops at `v` are deleted first). Loops
/// created by a split are deleted. Intended for small degrees.
pub fn complete_splittings(g: &Digraph, v: usize) -> Result<Vec<Splitting>> {
    let mut base = g.clone();
    let loops: Vec<EdgeId> = base
        .out_edges(v)
        .iter()
        .copied()
        .filter(|&e| base.endpoints(e) == Some((v, v)))
        .collect();
    for e in loops {
        base.remove_edge(e)?;
    }
    let ins = base.in_edges(v).to_vec();
    let outs = base.out_edges(v).to_vec();
    if ins.len() != outs.len() {
        return Err(precondition(format!("vertex {v} is unbalanced")));
    }
    let mut results = Vec::new();
    let mut perm: Vec<usize> = (0..outs.len()).collect();
    loop {
        let pairs: Vec<(EdgeId, EdgeId)> = ins.iter().zip(&perm).map(|(&a, &b)| (a, outs[b])).collect();
        let mut h = base.clone();
        let mut tr = ImmersionTrace::new();
        for &(a, b) in &pairs {
            tr.split(&mut h, a, b)?;
        }
        results.push((h, pairs));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(results)
}

/// Advances to the next lexicographic permutation; false after the last.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
