//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's flow, cut or search code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use immersion_core::arborescence::ArborescencePacking;
use immersion_core::generators::gen_random_eulerian;
use immersion_core::immersion::ImmersionCertificate;
use immersion_core::{Digraph, EdgeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Capacity matrix with edge multiplicities.
pub fn capacities(g: &Digraph, extra: usize) -> Vec<Vec<i64>> {
    let n = g.vertex_count() + extra;
    let mut cap = vec![vec![0i64; n]; n];
    for (_, a, b) in g.edges() {
        if a != b {
            cap[a][b] += 1;
        }
    }
    cap
}

/// Edmonds–Karp on a dense capacity matrix.
pub fn max_flow(mut cap: Vec<Vec<i64>>, s: usize, t: usize) -> i64 {
    let n = cap.len();
    let mut total = 0;
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[s] = s;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[t] == usize::MAX {
            return total;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while v != s {
            bottleneck = bottleneck.min(cap[prev[v]][v]);
            v = prev[v];
        }
        let mut v = t;
        while v != s {
            cap[prev[v]][v] -= bottleneck;
            cap[v][prev[v]] += bottleneck;
            v = prev[v];
        }
        total += bottleneck;
    }
}

pub fn lambda(g: &Digraph, x: usize, y: usize) -> usize {
    max_flow(capacities(g, 0), x, y) as usize
}

pub fn out_cut(g: &Digraph, inside: &[bool]) -> usize {
    g.edges().filter(|&(_, a, b)| inside[a] && !inside[b]).count()
}

pub fn in_cut(g: &Digraph, inside: &[bool]) -> usize {
    g.edges().filter(|&(_, a, b)| !inside[a] && inside[b]).count()
}

pub fn mask_to_set(n: usize, mask: u64) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// `min d⁺(X)` over all `X` with `x ∈ X`, `y ∉ X`, by enumeration.
pub fn lambda_by_cuts(g: &Digraph, x: usize, y: usize) -> usize {
    let n = g.vertex_count();
    (0..1u64 << n)
        .filter(|m| m >> x & 1 == 1 && m >> y & 1 == 0)
        .map(|m| out_cut(g, &mask_to_set(n, m)))
        .min()
        .unwrap()
}

/// Edmonds' condition by enumeration: every proper nonempty `X` has
/// `d⁺(X)` at least the number of roots inside it.
pub fn packing_feasible_by_cuts(g: &Digraph, roots: &[usize]) -> bool {
    let n = g.vertex_count();
    (1..(1u64 << n) - 1).all(|m| {
        let inside = mask_to_set(n, m);
        out_cut(g, &inside) >= roots.iter().filter(|&&r| inside[r]).count()
    })
}

/// Every simple directed cycle, each as a sorted set of edge ids. Cycles
/// are rooted at their smallest vertex to avoid repeats.
pub fn all_cycles(g: &Digraph) -> BTreeSet<Vec<EdgeId>> {
    let n = g.vertex_count();
    let mut found = BTreeSet::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        let mut path: Vec<EdgeId> = Vec::new();
        on_path[start] = true;
        cycles_from(g, start, start, &mut on_path, &mut path, &mut found);
    }
    found
}

fn cycles_from(
    g: &Digraph,
    start: usize,
    v: usize,
    on_path: &mut [bool],
    path: &mut Vec<EdgeId>,
    found: &mut BTreeSet<Vec<EdgeId>>,
) {
    for &e in g.out_edges(v) {
        let (_, w) = g.endpoints(e).unwrap();
        if w == start {
            path.push(e);
            let mut c = path.clone();
            c.sort();
            found.insert(c);
            path.pop();
        } else if w > start && !on_path[w] {
            on_path[w] = true;
            path.push(e);
            cycles_from(g, start, w, on_path, path, found);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Random digraph on `n` vertices, each ordered pair present independently
/// with probability `p` and doubled with probability `p / 4`.
pub fn random_digraph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Digraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                edges.push((a, b));
                if rng.gen_bool(p / 4.0) {
                    edges.push((a, b));
                }
            }
        }
    }
    Digraph::from_edges(n, &edges).unwrap()
}

/// Random Eulerian blobs of degree `d` linked by a few disjoint cycles
/// through one vertex of each blob; simple and Eulerian, with small cuts
/// between the blobs. `None` when a link would duplicate an edge.
pub fn linked_blobs(sizes: &[usize], d: usize, links: usize, seed: u64) -> Option<Digraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut bases = Vec::new();
    let mut base = 0;
    for (i, &s) in sizes.iter().enumerate() {
        let b = gen_random_eulerian(s, d, seed.wrapping_mul(7).wrapping_add(i as u64)).ok()?;
        edges.extend(b.edges().map(|(_, u, v)| (base + u, base + v)));
        bases.push(base);
        base += s;
    }
    for _ in 0..links {
        let cyc: Vec<usize> = sizes
            .iter()
            .zip(&bases)
            .map(|(&s, &b)| b + rng.gen_range(0..s))
            .collect();
        for i in 0..cyc.len() {
            let e = (cyc[i], cyc[(i + 1) % cyc.len()]);
            if edges.contains(&e) {
                return None;
            }
            edges.push(e);
        }
    }
    let g = Digraph::from_edges(base, &edges).ok()?;
    (g.is_simple() && g.is_eulerian()).then_some(g)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Checks a certificate from first principles; `Err` names the first defect.
pub fn certificate_ok(host: &Digraph, c: &ImmersionCertificate) -> Result<(), String> {
    let pattern = &c.pattern;
    if c.terminals.len() != pattern.vertex_count() {
        return Err("terminal count".into());
    }
    let distinct: BTreeSet<usize> = c.terminals.iter().copied().collect();
    if distinct.len() != c.terminals.len() || c.terminals.iter().any(|&v| v >= host.vertex_count()) {
        return Err("terminals are not an injective map into the host".into());
    }
    let mut used = BTreeSet::new();
    for (e, a, b) in pattern.edges() {
        let path = c.paths.get(&e).ok_or(format!("no path for pattern edge {e:?}"))?;
        if path.is_empty() {
            return Err(format!("empty path for {e:?}"));
        }
        let mut at = c.terminals[a];
        for &h in path {
            let (x, y) = host.endpoints(h).ok_or(format!("{h:?} is not a host edge"))?;
            if x != at {
                return Err(format!("path for {e:?} is not contiguous"));
            }
            if !used.insert(h) {
                return Err(format!("{h:?} used twice"));
            }
            at = y;
        }
        if at != c.terminals[b] {
            return Err(format!("path for {e:?} ends at the wrong vertex"));
        }
    }
    if c.paths.len() != pattern.edge_count() {
        return Err("paths for edges that are not in the pattern".into());
    }
    Ok(())
}

/// Checks a packing from first principles against the requested roots.
pub fn packing_ok(g: &Digraph, roots: &[usize], p: &ArborescencePacking) -> Result<(), String> {
    let n = g.vertex_count();
    let mut want: Vec<usize> = roots.to_vec();
    let mut got: Vec<usize> = p.arborescences.iter().map(|a| a.root).collect();
    want.sort();
    got.sort();
    if want != got {
        return Err(format!("roots {got:?}, wanted {want:?}"));
    }
    let mut used = BTreeSet::new();
    for a in &p.arborescences {
        if a.edges.len() + 1 != n {
            return Err(format!("arborescence at {} has {} edges", a.root, a.edges.len()));
        }
        let mut parent = vec![None; n];
        for &e in &a.edges {
            if !used.insert(e) {
                return Err(format!("{e:?} shared"));
            }
            let (x, y) = g.endpoints(e).ok_or("unknown edge")?;
            if y == a.root || parent[y].replace(x).is_some() {
                return Err(format!("bad in-degree at {y}"));
            }
        }
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while cur != a.root {
                cur = parent[cur].ok_or(format!("{v} is not reached from {}", a.root))?;
                steps += 1;
                if steps > n {
                    return Err("cycle in parent pointers".into());
                }
            }
        }
    }
    Ok(())
}
