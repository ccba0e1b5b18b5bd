//! Constructive `K_t` immersions for `t ≤ 4` in Eulerian digraphs whose
//! degrees are at least `t − 1`.
//!
//! The solver works on digraphs where every vertex has degree exactly
//! `t − 1` except one exceptional vertex `v0` of degree at most `t − 1`, and
//! the only parallel class (if any) touches `v0`. Each step either finds a
//! complete subgraph or produces a smaller digraph of the same kind that is
//! immersed in the current one; certificates are lifted back step by step.

use std::collections::VecDeque;

use crate::digraph::{Digraph, EdgeId};
use crate::error::{internal, precondition, Error, Result};
use crate::generators::gen_complete;
use crate::splitting::{regularize, ImmersionTrace};

use super::{verify_certificate, ImmersionCertificate};

/// A `K_t` immersion certificate for `t ≤ 4`. `v0` names the exceptional
/// vertex; without it one is chosen automatically (minimum degree, lowest
/// label). Simple Eulerian inputs with minimum degree at least `t − 1` are
/// first reduced to `(t − 1)`-regular ones.
pub fn solve_small_complete(g: &Digraph, t: usize, v0: Option<usize>) -> Result<ImmersionCertificate> {
    if let Some(v) = v0 {
        g.check_vertex(v)?;
    }
    match t {
        0 => Err(precondition("t must be at least 1")),
        1 => {
            if g.vertex_count() == 0 {
                return Err(precondition("empty digraph"));
            }
            Ok(ImmersionCertificate::new(gen_complete(1), vec![v0.unwrap_or(0)]))
        }
        2 => solve_digon(g),
        3 | 4 => solve_three_or_four(g, t, v0),
        _ => Err(precondition(format!("t = {t} is outside the supported range 1..=4"))),
    }
}

/// Any edge `u→v` of an Eulerian digraph lies on a cycle, which gives the
/// two opposite paths.
fn solve_digon(g: &Digraph) -> Result<ImmersionCertificate> {
    if !g.is_eulerian() {
        return Err(precondition("t = 2 needs an Eulerian digraph"));
    }
    let (e, u, v) = g
        .edges()
        .find(|&(_, u, v)| u != v)
        .ok_or_else(|| precondition("digraph has no non-loop edge"))?;
    let back = bfs_path(g, v, u, Some(e)).ok_or_else(|| internal("edge of an Eulerian digraph lies on no cycle"))?;
    let pattern = gen_complete(2);
    let mut cert = ImmersionCertificate::new(pattern.clone(), vec![u, v]);
    cert.paths.insert(pattern.find_edge(0, 1).unwrap(), vec![e]);
    cert.paths.insert(pattern.find_edge(1, 0).unwrap(), back);
    Ok(cert)
}

fn bfs_path(g: &Digraph, from: usize, to: usize, avoid: Option<EdgeId>) -> Option<Vec<EdgeId>> {
    let mut pred: Vec<Option<EdgeId>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &e in g.out_edges(x) {
            let (_, y) = g.endpoints(e).unwrap();
            if Some(e) != avoid && !seen[y] {
                seen[y] = true;
                pred[y] = Some(e);
                queue.push_back(y);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let e = pred[cur]?;
        path.push(e);
        cur = g.endpoints(e).unwrap().0;
    }
    path.reverse();
    Some(path)
}

/// Why `(g, v0)` is not a valid intermediate instance, if it is not.
pub(crate) fn exceptional_form_violation(g: &Digraph, t: usize, v0: usize) -> Option<String> {
    if g.vertex_count() < 2 {
        return Some("fewer than two vertices".into());
    }
    if v0 >= g.vertex_count() {
        return Some(format!("exceptional vertex {v0} out of range"));
    }
    if !g.is_eulerian() {
        return Some("not Eulerian".into());
    }
    if g.has_loops() {
        return Some("has loops".into());
    }
    for v in g.vertices() {
        let d = g.out_degree(v);
        if (v == v0 && d > t - 1) || (v != v0 && d != t - 1) {
            return Some(format!("vertex {v} has degree {d}"));
        }
    }
    let classes = g.parallel_classes();
    if classes.len() > 1 {
        return Some(format!("{} parallel classes", classes.len()));
    }
    if let Some(c) = classes.first() {
        if c.tail != v0 && c.head != v0 {
            return Some(format!(
                "parallel class {}->{} avoids the exceptional vertex",
                c.tail, c.head
            ));
        }
    }
    None
}

fn solve_three_or_four(g: &Digraph, t: usize, v0: Option<usize>) -> Result<ImmersionCertificate> {
    let auto = |g: &Digraph| -> Option<usize> {
        let mut order: Vec<usize> = g.vertices().collect();
        order.sort_by_key(|&v| (g.out_degree(v), v));
        order
            .into_iter()
            .find(|&v| exceptional_form_violation(g, t, v).is_none())
    };
    if let Some(v) = v0 {
        if exceptional_form_violation(g, t, v).is_none() {
            return reduce(g, t, v);
        }
    } else if let Some(v) = auto(g) {
        return reduce(g, t, v);
    }
    let c = g.classify();
    if !(c.simple && c.eulerian) || g.vertex_count() < 2 || g.min_out_degree() < t - 1 {
        return Err(precondition(format!(
            "need a simple Eulerian digraph with minimum degree at least {} (or one exceptional vertex of lower degree)",
            t - 1
        )));
    }
    let r = regularize(g, t - 1)?;
    let cert = match &r.complete_subgraph {
        Some(clique) => clique_certificate(&r.digraph, &clique[..t])?,
        None => {
            let v = auto(&r.digraph).ok_or_else(|| internal("regularised digraph has no valid exceptional vertex"))?;
            reduce(&r.digraph, t, v)?
        }
    };
    let lifted = r.trace.lift(g, &cert)?;
    check_lifted(g, &lifted)?;
    Ok(lifted)
}

fn check_lifted(g: &Digraph, c: &ImmersionCertificate) -> Result<()> {
    match verify_certificate(g, c) {
        super::Verification::Valid => Ok(()),
        super::Verification::Invalid(v) => Err(internal(format!(
            "lifted certificate fails verification: {v}\n{}",
            g.to_edge_list()
        ))),
    }
}

/// Certificate made of single edges between the given pairwise adjacent vertices.
fn clique_certificate(g: &Digraph, vertices: &[usize]) -> Result<ImmersionCertificate> {
    let mut terms = vertices.to_vec();
    terms.sort_unstable();
    let t = terms.len();
    let pattern = gen_complete(t);
    let mut cert = ImmersionCertificate::new(pattern.clone(), terms.clone());
    for (pe, a, b) in pattern.edges() {
        let e = g.find_edge(terms[a], terms[b]).ok_or_else(|| {
            internal(format!(
                "no edge {}->{} in the claimed complete subgraph",
                terms[a], terms[b]
            ))
        })?;
        cert.paths.insert(pe, vec![e]);
    }
    Ok(cert)
}

enum Step {
    Reduced {
        trace: ImmersionTrace,
        next: Digraph,
        v0: usize,
    },
    Done(ImmersionCertificate),
}

fn reduce(g: &Digraph, t: usize, v0: usize) -> Result<ImmersionCertificate> {
    let mut levels: Vec<(Digraph, ImmersionTrace)> = Vec::new();
    let mut h = g.clone();
    let mut v0 = v0;
    let mut cert = loop {
        if let Some(why) = exceptional_form_violation(&h, t, v0) {
            return Err(internal(format!(
                "reduction left the admissible form ({why}); exceptional vertex {v0}\n{}",
                h.to_edge_list()
            )));
        }
        match step(&h, t, v0)? {
            Step::Done(c) => break c,
            Step::Reduced { trace, next, v0: nv } => {
                levels.push((std::mem::replace(&mut h, next), trace));
                v0 = nv;
            }
        }
    };
    while let Some((before, trace)) = levels.pop() {
        cert = trace.lift(&before, &cert)?;
        check_lifted(&before, &cert)?;
    }
    Ok(cert)
}

fn dump(h: &Digraph, v0: usize, what: &str) -> Error {
    internal(format!("{what}; exceptional vertex {v0}\n{}", h.to_edge_list()))
}

/// Finishes a step: keep the component of `anchor` and translate labels.
fn finish(mut trace: ImmersionTrace, mut h: Digraph, anchor: usize) -> Result<Step> {
    let map = trace.restrict_to_component(&mut h, anchor)?;
    let v0 = map[anchor].ok_or_else(|| internal("anchor vanished"))?;
    Ok(Step::Reduced { trace, next: h, v0 })
}

fn edge(h: &Digraph, u: usize, v: usize) -> Result<EdgeId> {
    h.find_edge(u, v)
        .ok_or_else(|| internal(format!("expected an edge {u}->{v}\n{}", h.to_edge_list())))
}

/// Splits at the middle vertex, refusing if a loop would appear.
fn split(trace: &mut ImmersionTrace, h: &mut Digraph, e1: EdgeId, e2: EdgeId) -> Result<EdgeId> {
    trace
        .split(h, e1, e2)?
        .ok_or_else(|| internal(format!("split of {e1}, {e2} produced a loop")))
}

/// Deletes the given vertices and returns the new label of `keep`.
fn drop_vertices(trace: &mut ImmersionTrace, h: &mut Digraph, vertices: &[usize], keep: usize) -> Result<usize> {
    let map = trace.delete_vertices(h, vertices)?;
    map[keep].ok_or_else(|| internal("kept vertex was deleted"))
}

fn step(g: &Digraph, t: usize, v0: usize) -> Result<Step> {
    let deg = g.out_degree(v0);
    if deg == 0 {
        return Err(dump(g, v0, "exceptional vertex is isolated"));
    }
    let ins = g.in_neighbours(v0);
    let outs = g.out_neighbours(v0);

    // an in-neighbour u and out-neighbour w ≠ u with no edge u→w
    for &u in &ins {
        for &w in &outs {
            if u != w && !g.has_edge(u, w) {
                let mut h = g.clone();
                let mut trace = ImmersionTrace::new();
                split(&mut trace, &mut h, edge(g, u, v0)?, edge(g, v0, w)?)?;
                let map = trace.restrict_to_component(&mut h, u)?;
                // without v0 every remaining vertex has degree t − 1, so any will do
                let v0 = map[v0].unwrap_or(0);
                return Ok(Step::Reduced { trace, next: h, v0 });
            }
        }
    }

    // a parallel class at v0
    if let Some(class) = g.parallel_classes().into_iter().next() {
        let mut h = g.clone();
        let mut trace = ImmersionTrace::new();
        let u = if class.head == v0 {
            let u = class.tail;
            let w = *outs
                .iter()
                .find(|&&w| w != u)
                .ok_or_else(|| dump(g, v0, "parallel in-class without a second out-neighbour"))?;
            split(&mut trace, &mut h, class.edges[0], edge(g, v0, w)?)?;
            u
        } else if class.tail == v0 {
            let u = class.head;
            let w = *ins
                .iter()
                .find(|&&w| w != u)
                .ok_or_else(|| dump(g, v0, "parallel out-class without a second in-neighbour"))?;
            split(&mut trace, &mut h, edge(g, w, v0)?, class.edges[0])?;
            u
        } else {
            return Err(dump(g, v0, "parallel class avoids the exceptional vertex"));
        };
        let u = drop_vertices(&mut trace, &mut h, &[v0], u)?;
        return finish(trace, h, u);
    }

    if deg == 1 {
        let e_in = g.in_edges(v0)[0];
        let e_out = g.out_edges(v0)[0];
        let u = g.endpoints(e_in).unwrap().0;
        let w = g.endpoints(e_out).unwrap().1;
        let mut h = g.clone();
        let mut trace = ImmersionTrace::new();
        if u != w {
            split(&mut trace, &mut h, e_in, e_out)?;
        }
        let u = drop_vertices(&mut trace, &mut h, &[v0], u)?;
        return finish(trace, h, u);
    }

    if deg == t - 1 {
        if ins != outs {
            return Err(dump(g, v0, "in- and out-neighbourhoods differ at full degree"));
        }
        let mut clique = outs.clone();
        clique.push(v0);
        return Ok(Step::Done(clique_certificate(g, &clique).map_err(|e| {
            dump(g, v0, &format!("closed neighbourhood is not complete: {e}"))
        })?));
    }

    if t != 4 || deg != 2 {
        return Err(dump(g, v0, "no reduction applies"));
    }
    let (v1, v2) = (ins[0], ins[1]);
    let common: Vec<usize> = outs.iter().copied().filter(|w| ins.contains(w)).collect();
    match common.len() {
        2 => case_both(g, v0, v1, v2),
        1 => {
            let c = common[0];
            let p = if c == v1 { v2 } else { v1 };
            let q = *outs.iter().find(|&&w| w != c).unwrap();
            case_one(g, v0, p, c, q)
        }
        _ => case_none(g, v0, v1, outs[0], outs[1]),
    }
}

/// The single neighbour of `v` in `neigh` outside `known`.
fn other(neigh: &[usize], known: &[usize], g: &Digraph, v0: usize) -> Result<usize> {
    let rest: Vec<usize> = neigh.iter().copied().filter(|x| !known.contains(x)).collect();
    match rest.as_slice() {
        [x] => Ok(*x),
        _ => Err(dump(g, v0, "unexpected neighbourhood shape")),
    }
}

/// `v0` has in- and out-neighbours `{v1, v2}`: merge `v0, v1, v2` into one
/// vertex (realised by splits at `v2`), or remove them when their outside
/// neighbours coincide.
fn case_both(g: &Digraph, v0: usize, v1: usize, v2: usize) -> Result<Step> {
    let u1 = other(&g.in_neighbours(v1), &[v0, v2], g, v0)?;
    let u2 = other(&g.in_neighbours(v2), &[v0, v1], g, v0)?;
    let w1 = other(&g.out_neighbours(v1), &[v0, v2], g, v0)?;
    let w2 = other(&g.out_neighbours(v2), &[v0, v1], g, v0)?;
    let mut h = g.clone();
    let mut trace = ImmersionTrace::new();
    if u1 != u2 || w1 != w2 {
        split(&mut trace, &mut h, edge(g, u2, v2)?, edge(g, v2, v1)?)?;
        split(&mut trace, &mut h, edge(g, v1, v2)?, edge(g, v2, w2)?)?;
        for (a, b) in [(v0, v1), (v1, v0), (v0, v2), (v2, v0)] {
            let e = edge(&h, a, b)?;
            trace.delete_edge(&mut h, e)?;
        }
        let keep = drop_vertices(&mut trace, &mut h, &[v0, v2], v1)?;
        return finish(trace, h, keep);
    }
    let (a, b) = (u1, w1);
    if a != b {
        split(&mut trace, &mut h, edge(g, a, v1)?, edge(g, v1, b)?)?;
        split(&mut trace, &mut h, edge(g, a, v2)?, edge(g, v2, b)?)?;
    }
    let keep = drop_vertices(&mut trace, &mut h, &[v0, v1, v2], a)?;
    finish(trace, h, keep)
}

/// `v0` has in-neighbours `p, c` and out-neighbours `c, q`.
fn case_one(g: &Digraph, v0: usize, p: usize, c: usize, q: usize) -> Result<Step> {
    let u = other(&g.in_neighbours(c), &[v0, p], g, v0)?;
    let w = other(&g.out_neighbours(c), &[v0, q], g, v0)?;
    let mut h = g.clone();
    let mut trace = ImmersionTrace::new();
    if u != q {
        split(&mut trace, &mut h, edge(g, u, c)?, edge(g, c, q)?)?;
        split(&mut trace, &mut h, edge(g, v0, c)?, edge(g, c, w)?)?;
        split(&mut trace, &mut h, edge(g, p, c)?, edge(g, c, v0)?)?;
        let keep = drop_vertices(&mut trace, &mut h, &[c], v0)?;
        return finish(trace, h, keep);
    }
    if w != p {
        split(&mut trace, &mut h, edge(g, p, c)?, edge(g, c, w)?)?;
        split(&mut trace, &mut h, edge(g, u, c)?, edge(g, c, v0)?)?;
        split(&mut trace, &mut h, edge(g, v0, c)?, edge(g, c, q)?)?;
        let keep = drop_vertices(&mut trace, &mut h, &[c], v0)?;
        return finish(trace, h, keep);
    }
    // {v0, p, c, q} is entered only at p and left only at q: route both
    // entries along the two edge-disjoint p→q paths (p→q and p→c→q)
    let direct = edge(g, p, q)?;
    let via = split(&mut trace, &mut h, edge(g, p, c)?, edge(g, c, q)?)?;
    let set = [v0, p, c, q];
    let entries: Vec<EdgeId> = g
        .in_edges(p)
        .iter()
        .copied()
        .filter(|&e| !set.contains(&g.endpoints(e).unwrap().0))
        .collect();
    if entries.len() != 2 {
        return Err(dump(g, v0, "expected two edges entering the merged set"));
    }
    split(&mut trace, &mut h, entries[0], direct)?;
    split(&mut trace, &mut h, entries[1], via)?;
    let keep = drop_vertices(&mut trace, &mut h, &[v0, p, c], q)?;
    finish(trace, h, keep)
}

/// `v0` has in-neighbours `v1, v2` and disjoint out-neighbours `v3, v4`:
/// split all three paths through `v1` and drop it.
fn case_none(g: &Digraph, v0: usize, v1: usize, v3: usize, v4: usize) -> Result<Step> {
    let ins = g.in_edges(v1).to_vec();
    if ins.len() != 3 {
        return Err(dump(g, v0, "in-neighbour of the exceptional vertex has wrong degree"));
    }
    let targets = [edge(g, v1, v0)?, edge(g, v1, v3)?, edge(g, v1, v4)?];
    let mut perm = vec![0, 1, 2];
    loop {
        let tails: Vec<usize> = perm.iter().map(|&i| g.endpoints(ins[i]).unwrap().0).collect();
        if tails[1] != v3 && tails[2] != v4 {
            let mut h = g.clone();
            let mut trace = ImmersionTrace::new();
            for (k, &i) in perm.iter().enumerate() {
                split(&mut trace, &mut h, ins[i], targets[k])?;
            }
            let keep = drop_vertices(&mut trace, &mut h, &[v1], v0)?;
            let s = finish(trace, h, keep)?;
            if let Step::Reduced { next, v0: nv, .. } = &s {
                if exceptional_form_violation(next, 4, *nv).is_none() {
                    return Ok(s);
                }
            }
        }
        if !crate::splitting::next_permutation(&mut perm) {
            return Err(dump(g, v0, "no valid ordering of the paths through an in-neighbour"));
        }
    }
}
