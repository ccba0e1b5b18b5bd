//! Highly connected immersed cores and the resulting complete immersions.

use std::collections::HashSet;

use crate::arborescence::build_complete_immersion;
use crate::connectivity::{is_strongly_k_edge_connected, lambda, minimal_small_cut_subset};
use crate::digraph::{Digraph, EdgeId};
use crate::error::{internal, precondition, Result};
use crate::generators::gen_complete;
use crate::splitting::{complete_split, HubRoute, ImmersionTrace, Routing};

use super::{verify_certificate, ImmersionCertificate};

#[derive(Clone, Debug)]
pub struct StructuralImmersion {
    /// Strongly `r`-edge-connected Eulerian digraph immersed in the input.
    pub digraph: Digraph,
    /// Edges of `digraph` created by splitting; removing them leaves a
    /// simple digraph.
    pub extra_edges: Vec<EdgeId>,
    pub trace: ImmersionTrace,
    /// The nested sets `X_0 ⊇ X_1 ⊇ … ⊇ X_{r−1}` (input labels), where
    /// `X_k` is inclusion-minimal inside `X_{k−1}` with `d(X_k) ≤ 2k`.
    pub chain: Vec<Vec<usize>>,
}

/// From a simple Eulerian digraph of minimum degree at least `r`, an
/// immersed strongly `r`-edge-connected Eulerian digraph on more than `r`
/// vertices that is simple apart from fewer than `r` edges.
pub fn structural_immersion(g: &Digraph, r: usize) -> Result<StructuralImmersion> {
    if r == 0 {
        return Err(precondition("r must be at least 1"));
    }
    let c = g.classify();
    if !(c.simple && c.eulerian) {
        return Err(precondition("need a simple Eulerian digraph"));
    }
    if g.vertex_count() == 0 || g.min_out_degree() < r {
        return Err(precondition(format!("minimum degree is below {r}")));
    }
    let n = g.vertex_count();
    let mut chain: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut ambient: Vec<usize> = g.vertices().collect();
    for k in 0..r {
        let x = minimal_small_cut_subset(g, &ambient, 2 * k)?;
        chain.push(x.clone());
        ambient = x;
    }
    let last = chain[r - 1].clone();
    let (digraph, extra_edges, trace) = if last == chain[0] {
        (g.clone(), Vec::new(), ImmersionTrace::new())
    } else {
        let j = (0..r).find(|&j| chain[j] == last).unwrap();
        shrink_to_core(g, &last, &chain[j - 1], j, r)?
    };

    // postconditions are checked, not assumed
    let fail = |what: &str| {
        internal(format!(
            "structural immersion for r = {r}: {what}\n{}",
            g.to_edge_list()
        ))
    };
    if !digraph.is_eulerian() {
        return Err(fail("result is not Eulerian"));
    }
    if digraph.vertex_count() <= r {
        return Err(fail("result has too few vertices"));
    }
    if !is_strongly_k_edge_connected(&digraph, r) {
        return Err(fail("result is not strongly r-edge-connected"));
    }
    if extra_edges.len() >= r {
        return Err(fail("too many split edges"));
    }
    let mut rest = digraph.clone();
    for &e in &extra_edges {
        rest.remove_edge(e)?;
    }
    if !rest.is_simple() {
        return Err(fail("result minus the split edges is not simple"));
    }
    debug_assert_eq!(trace.replay(g)?, digraph);
    debug_assert!(chain.iter().all(|x| x.len() <= n));
    Ok(StructuralImmersion {
        digraph,
        extra_edges,
        trace,
        chain,
    })
}

/// Contracts everything outside `core` to one vertex `w`, splits `w` off
/// completely, and deletes it. Routing through `w` uses `j` paths from
/// `x ∈ core` to `y ∈ prev ∖ core` and `j` paths back.
fn shrink_to_core(
    g: &Digraph,
    core: &[usize],
    prev: &[usize],
    j: usize,
    r: usize,
) -> Result<(Digraph, Vec<EdgeId>, ImmersionTrace)> {
    let n = g.vertex_count();
    let inside = {
        let mut m = vec![false; n];
        for &v in core {
            m[v] = true;
        }
        m
    };
    let x = core[0];
    let y = *prev
        .iter()
        .find(|&&v| !inside[v])
        .ok_or_else(|| internal("consecutive chain sets coincide"))?;

    let forward = lambda(g, x, y)?;
    if forward.value < j {
        return Err(internal(format!("lambda({x}, {y}) = {} < {j}", forward.value)));
    }
    let there: Vec<Vec<EdgeId>> = forward.paths.paths.into_iter().take(j).collect();
    let mut residual = g.clone();
    for p in &there {
        for &e in p {
            residual.remove_edge(e)?;
        }
    }
    let backward = lambda(&residual, y, x)?;
    if backward.value < j {
        return Err(internal(format!(
            "residual lambda({y}, {x}) = {} < {j}",
            backward.value
        )));
    }
    let back: Vec<Vec<EdgeId>> = backward.paths.paths.into_iter().take(j).collect();

    // each forward path leaves the core once; its tail end reaches y outside
    let mut inbound = Vec::with_capacity(j);
    for p in &there {
        let cross: Vec<usize> = (0..p.len())
            .filter(|&i| {
                let (a, b) = g.endpoints(p[i]).unwrap();
                inside[a] && !inside[b]
            })
            .collect();
        let &[i] = cross.as_slice() else {
            return Err(internal("a forward path leaves the core more than once"));
        };
        if p[i + 1..].iter().any(|&e| inside[g.endpoints(e).unwrap().1]) {
            return Err(internal("a forward path re-enters the core"));
        }
        inbound.push(HubRoute {
            edge: p[i],
            path: p[i + 1..].to_vec(),
        });
    }
    let mut outbound = Vec::with_capacity(j);
    for p in &back {
        let cross: Vec<usize> = (0..p.len())
            .filter(|&i| {
                let (a, b) = g.endpoints(p[i]).unwrap();
                !inside[a] && inside[b]
            })
            .collect();
        let &[i] = cross.as_slice() else {
            return Err(internal("a backward path enters the core more than once"));
        };
        if p[..i].iter().any(|&e| inside[g.endpoints(e).unwrap().0]) {
            return Err(internal("a backward path starts inside the core"));
        }
        outbound.push(HubRoute {
            edge: p[i],
            path: p[..i].to_vec(),
        });
    }
    let routed: HashSet<EdgeId> = inbound.iter().chain(&outbound).map(|r| r.edge).collect();
    let outside: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
    let mut trace = ImmersionTrace::new();
    let contracted = trace.contract(
        g,
        &outside,
        Routing::Hub {
            hub: y,
            inbound,
            outbound,
        },
    )?;
    if let Some(crate::splitting::Move::ContractSet { crossing_edges, .. }) = trace.moves.last() {
        if crossing_edges.iter().any(|e| !routed.contains(e)) {
            return Err(internal("a crossing edge has no route through the contracted vertex"));
        }
    }
    let w = contracted.vertex_count() - 1;
    let split = complete_split(&contracted, w, r)?;
    trace.extend(split.trace);
    let mut f = split.digraph;
    trace.delete_isolated_vertex(&mut f, w)?;
    Ok((f, split.created, trace))
}

/// A `K_t` immersion in a simple Eulerian digraph of minimum degree at
/// least `t(t−1)`: find a strongly `t(t−1)`-edge-connected immersed core,
/// pack arborescences there, and lift the certificate back.
pub fn quadratic_pipeline(g: &Digraph, t: usize) -> Result<ImmersionCertificate> {
    match t {
        0 => return Err(precondition("t must be at least 1")),
        1 => {
            if g.vertex_count() == 0 {
                return Err(precondition("empty digraph"));
            }
            return Ok(ImmersionCertificate::new(gen_complete(1), vec![0]));
        }
        _ => {}
    }
    let r = t * (t - 1);
    let core = structural_immersion(g, r)?;
    let cert = build_complete_immersion(&core.digraph, t, None)?;
    let lifted = core.trace.lift(g, &cert)?;
    match verify_certificate(g, &lifted) {
        super::Verification::Valid => Ok(lifted),
        super::Verification::Invalid(v) => Err(internal(format!(
            "lifted certificate fails verification: {v}\n{}",
            g.to_edge_list()
        ))),
    }
}
