//! Edge-connectivity: local connectivity λ(x, y) with Menger witnesses,
//! strong edge-connectivity, and inclusion-minimal small-cut subsets.

use serde::{Deserialize, Serialize};

use crate::digraph::{CutReport, Digraph, EdgeId};
use crate::error::{precondition, Error, Result};
use crate::flow::{FlowNetwork, INF};

/// Edge-disjoint directed paths from `source` to `sink`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub source: usize,
    pub sink: usize,
    pub paths: Vec<Vec<EdgeId>>,
}

impl PathSystem {
    /// Checks edge-disjointness and that every path runs from source to sink.
    pub fn validate(&self, g: &Digraph) -> std::result::Result<(), String> {
        let mut used = std::collections::HashSet::new();
        for (i, p) in self.paths.iter().enumerate() {
            let mut at = self.source;
            if p.is_empty() {
                return Err(format!("path {i} is empty"));
            }
            for &e in p {
                let (u, v) = g
                    .endpoints(e)
                    .ok_or_else(|| format!("path {i} uses unknown edge {e}"))?;
                if u != at {
                    return Err(format!("path {i} is discontinuous at {e}"));
                }
                if !used.insert(e) {
                    return Err(format!("edge {e} is used twice"));
                }
                at = v;
            }
            if at != self.sink {
                return Err(format!("path {i} ends at {at}, not {}", self.sink));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Lambda {
    pub value: usize,
    pub paths: PathSystem,
    pub cut: CutReport,
}

/// Maximum number of edge-disjoint `x`→`y` paths, with a path system of that
/// size and a set `X ∋ x`, `X ∌ y` with `d⁺(X)` equal to it.
pub fn lambda(g: &Digraph, x: usize, y: usize) -> Result<Lambda> {
    check_pair(g, x, y)?;
    let mut net = FlowNetwork::from_digraph(g);
    let value = net.max_flow(x, y, INF) as usize;
    let side = net.source_side(x);
    let paths = net.decompose(x, y);
    debug_assert_eq!(paths.len(), value);
    let cut = g.cut_report_of_mask(&side[..g.vertex_count()]);
    debug_assert_eq!(cut.out_degree, value);
    Ok(Lambda {
        value,
        paths: PathSystem {
            source: x,
            sink: y,
            paths,
        },
        cut,
    })
}

pub fn lambda_value(g: &Digraph, x: usize, y: usize) -> Result<usize> {
    check_pair(g, x, y)?;
    Ok(FlowNetwork::from_digraph(g).max_flow(x, y, INF) as usize)
}

/// `min(λ(x, y), cap)`; cheaper than the full value when `cap` is small.
pub fn lambda_capped(g: &Digraph, x: usize, y: usize, cap: usize) -> usize {
    FlowNetwork::from_digraph(g).max_flow(x, y, cap as u32) as usize
}

fn check_pair(g: &Digraph, x: usize, y: usize) -> Result<()> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::SameEndpoints(x));
    }
    Ok(())
}

/// Minimum `d⁺(Y)` over sets containing all `sources` and none of `sinks`,
/// capped at `limit`. Returns the value and a minimising `Y` as a mask.
pub(crate) fn min_separating_cut(g: &Digraph, sources: &[usize], sinks: &[usize], limit: usize) -> (usize, Vec<bool>) {
    let n = g.vertex_count();
    let mut net = FlowNetwork::from_digraph(g);
    let s = net.add_node();
    let t = net.add_node();
    for &v in sources {
        net.add_arc(s, v, INF, None);
    }
    for &v in sinks {
        net.add_arc(v, t, INF, None);
    }
    let value = net.max_flow(s, t, limit as u32) as usize;
    let mut side = net.source_side(s);
    side.truncate(n);
    (value, side)
}

/// Strong edge-connectivity with a minimising ordered pair. Every cut
/// separates vertex 0 from something, so λ from and to 0 suffices.
pub fn strong_edge_connectivity_with_pair(g: &Digraph) -> Result<(usize, (usize, usize))> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(precondition("strong edge-connectivity needs at least 2 vertices"));
    }
    let mut best = usize::MAX;
    let mut pair = (0, 1);
    for y in 1..n {
        for (a, b) in [(0, y), (y, 0)] {
            let cap = if best == usize::MAX { INF as usize } else { best };
            let v = lambda_capped(g, a, b, cap);
            if v < best {
                best = v;
                pair = (a, b);
                if best == 0 {
                    return Ok((0, pair));
                }
            }
        }
    }
    Ok((best, pair))
}

pub fn strong_edge_connectivity(g: &Digraph) -> Result<usize> {
    strong_edge_connectivity_with_pair(g).map(|(k, _)| k)
}

/// Whether every ordered pair has λ ≥ k, checked against one fixed root.
pub fn is_strongly_k_edge_connected(g: &Digraph, k: usize) -> bool {
    let n = g.vertex_count();
    if k == 0 || n <= 1 {
        return true;
    }
    (1..n).all(|v| lambda_capped(g, 0, v, k) >= k && lambda_capped(g, v, 0, k) >= k)
}

/// An inclusion-minimal nonempty `X ⊆ ambient` with `d(X) ≤ bound`, found by
/// shrinking `ambient` along small cuts that stay inside the current set.
pub fn minimal_small_cut_subset(g: &Digraph, ambient: &[usize], bound: usize) -> Result<Vec<usize>> {
    if !g.is_eulerian() {
        return Err(precondition("minimal_small_cut_subset requires an Eulerian digraph"));
    }
    let mut inside = g.mask(ambient)?;
    if !inside.iter().any(|&b| b) {
        return Err(precondition("ambient set must be nonempty"));
    }
    let d = g.out_cut(&inside) + g.in_cut(&inside);
    if d > bound {
        return Err(precondition(format!("ambient set has d = {d} > bound {bound}")));
    }
    // Eulerian: d(Y) = 2 d⁺(Y)
    let half = bound / 2;
    let n = g.vertex_count();
    loop {
        let current: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
        if current.len() == 1 {
            return Ok(current);
        }
        let outside: Vec<usize> = (0..n).filter(|&v| !inside[v]).collect();
        let x0 = current[0];
        let mut found = None;
        for &y in &current[1..] {
            let mut sinks = outside.clone();
            sinks.push(y);
            let (value, side) = min_separating_cut(g, &[x0], &sinks, half + 1);
            if value <= half {
                found = Some(side);
                break;
            }
        }
        if found.is_none() {
            for &x in &current[1..] {
                let mut sinks = outside.clone();
                sinks.push(x0);
                let (value, side) = min_separating_cut(g, &[x], &sinks, half + 1);
                if value <= half {
                    found = Some(side);
                    break;
                }
            }
        }
        match found {
            Some(side) => inside = side,
            None => return Ok(current),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_complete, gen_dk, gen_random_eulerian};

    fn cycle(n: usize) -> Digraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::from_edges(n, &edges).unwrap()
    }

    fn exhaustive_lambda(g: &Digraph, x: usize, y: usize) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|m| m & (1 << x) != 0 && m & (1 << y) == 0)
            .map(|m| {
                let inside: Vec<bool> = (0..n).map(|v| m & (1 << v) != 0).collect();
                g.out_cut(&inside)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn lambda_examples() {
        let c5 = cycle(5);
        for x in 0..5 {
            for y in 0..5 {
                if x != y {
                    assert_eq!(lambda(&c5, x, y).unwrap().value, 1);
                }
            }
        }
        let k3 = gen_complete(3);
        let l = lambda(&k3, 0, 2).unwrap();
        assert_eq!(l.value, 2);
        assert_eq!(l.value, exhaustive_lambda(&k3, 0, 2));
        l.paths.validate(&k3).unwrap();
        assert_eq!(l.cut.out_degree, 2);
        assert!(matches!(lambda(&k3, 1, 1), Err(Error::SameEndpoints(1))));
    }

    #[test]
    fn dk_pairs_have_small_lambda_one_way() {
        let g = gen_dk(3);
        for u in g.vertices() {
            for v in g.vertices() {
                if u < v {
                    let a = lambda_value(&g, u, v).unwrap();
                    let b = lambda_value(&g, v, u).unwrap();
                    assert!(a.min(b) <= 1);
                }
            }
        }
    }

    #[test]
    fn strong_connectivity_examples() {
        assert_eq!(strong_edge_connectivity(&cycle(6)).unwrap(), 1);
        for t in 2..=5 {
            assert_eq!(strong_edge_connectivity(&gen_complete(t)).unwrap(), t - 1);
            assert!(is_strongly_k_edge_connected(&gen_complete(t), t - 1));
            assert!(!is_strongly_k_edge_connected(&gen_complete(t), t));
        }
        assert!(strong_edge_connectivity(&Digraph::new(1)).is_err());
        let two = Digraph::new(2);
        assert_eq!(strong_edge_connectivity(&two).unwrap(), 0);
    }

    #[test]
    fn residual_reverse_paths_in_eulerian() {
        let g = gen_random_eulerian(9, 3, 5).unwrap();
        for (x, y) in [(0, 4), (2, 7), (8, 1)] {
            let l = lambda(&g, x, y).unwrap();
            let mut h = g.clone();
            for p in &l.paths.paths {
                for &e in p {
                    h.remove_edge(e).unwrap();
                }
            }
            assert!(lambda_value(&h, y, x).unwrap() >= l.value);
        }
    }

    fn exhaustive_minimal(g: &Digraph, x: &[usize], bound: usize) -> bool {
        let inside = g.mask(x).unwrap();
        if g.out_cut(&inside) + g.in_cut(&inside) > bound {
            return false;
        }
        let k = x.len();
        (1u32..(1 << k) - 1).all(|m| {
            let sub: Vec<usize> = (0..k).filter(|i| m & (1 << i) != 0).map(|i| x[i]).collect();
            let mk = g.mask(&sub).unwrap();
            g.out_cut(&mk) + g.in_cut(&mk) > bound
        })
    }

    #[test]
    fn minimal_subset_examples() {
        let g = gen_complete(4);
        let all: Vec<usize> = g.vertices().collect();
        assert_eq!(minimal_small_cut_subset(&g, &all, 0).unwrap(), all);
        // singletons have d = 6 in K4
        let x = minimal_small_cut_subset(&g, &all, 6).unwrap();
        assert_eq!(x.len(), 1);

        let g = gen_random_eulerian(8, 2, 11).unwrap();
        let all: Vec<usize> = g.vertices().collect();
        let x = minimal_small_cut_subset(&g, &all, 4).unwrap();
        assert!(exhaustive_minimal(&g, &x, 4));
    }

    #[test]
    fn minimal_subset_rejects_bad_input() {
        let g = gen_complete(4);
        assert!(minimal_small_cut_subset(&g, &[0], 4).is_err());
        assert!(minimal_small_cut_subset(&g, &[], 4).is_err());
        assert!(minimal_small_cut_subset(&gen_dk(2), &[0], 10).is_err());
    }
}
