//! Edge-disjoint spanning arborescences: feasibility, packing, and the
//! complete-digraph immersion built from a packing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::connectivity::is_strongly_k_edge_connected;
use crate::digraph::{CutReport, Digraph, EdgeId};
use crate::error::{internal, precondition, Error, Result};
use crate::flow::{FlowNetwork, INF};
use crate::generators::gen_complete;
use crate::immersion::ImmersionCertificate;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arborescence {
    pub root: usize,
    pub edges: Vec<EdgeId>,
}

impl Arborescence {
    /// The unique path from the root to `to` inside the arborescence.
    pub fn path_to(&self, g: &Digraph, to: usize) -> Option<Vec<EdgeId>> {
        let mut parent = vec![None; g.vertex_count()];
        for &e in &self.edges {
            let (_, v) = g.endpoints(e)?;
            parent[v] = Some(e);
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != self.root {
            let e = parent[cur]?;
            path.push(e);
            cur = g.endpoints(e)?.0;
            if path.len() > g.vertex_count() {
                return None;
            }
        }
        path.reverse();
        Some(path)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArborescencePacking {
    pub arborescences: Vec<Arborescence>,
}

impl ArborescencePacking {
    /// Checks edge-disjointness, spanning, in-degrees and reachability.
    pub fn validate(&self, g: &Digraph) -> std::result::Result<(), String> {
        let n = g.vertex_count();
        let mut used = std::collections::HashSet::new();
        for (i, a) in self.arborescences.iter().enumerate() {
            if a.root >= n {
                return Err(format!("arborescence {i}: root {} is not a vertex", a.root));
            }
            let mut indeg = vec![0usize; n];
            for &e in &a.edges {
                let (_, v) = g
                    .endpoints(e)
                    .ok_or_else(|| format!("arborescence {i}: unknown edge {e}"))?;
                if !used.insert(e) {
                    return Err(format!("edge {e} appears in two arborescences"));
                }
                indeg[v] += 1;
            }
            for (v, &d) in indeg.iter().enumerate() {
                let want = usize::from(v != a.root);
                if d != want {
                    return Err(format!(
                        "arborescence {i}: vertex {v} has in-degree {d} instead of {want}"
                    ));
                }
            }
            for v in 0..n {
                if a.path_to(g, v).is_none() {
                    return Err(format!("arborescence {i}: vertex {v} unreachable from the root"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    /// `violation.out_degree` is smaller than `demand`, the number of roots
    /// inside `violation.subset`.
    Violated {
        violation: CutReport,
        demand: usize,
    },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

/// Looks for `Y ≠ V` with `d⁺(Y) < #{i : sets[i] ⊆ Y}` in `g` without the
/// `removed` edges. Each set gets its own gadget node fed with one unit, so a
/// minimum cut avoiding vertex `u` measures exactly this deficit.
fn root_set_violation(g: &Digraph, removed: &[bool], sets: &[Vec<usize>]) -> Option<(Vec<bool>, usize)> {
    let n = g.vertex_count();
    let ell = sets.len() as u32;
    if n <= 1 || ell == 0 {
        return None;
    }
    let mut net = FlowNetwork::new(n);
    for (e, u, v) in g.edges() {
        if u != v && !removed.get(e.0).copied().unwrap_or(false) {
            net.add_arc(u, v, 1, Some(e));
        }
    }
    let s = net.add_node();
    for set in sets {
        let sigma = net.add_node();
        net.add_arc(s, sigma, 1, None);
        for &x in set {
            net.add_arc(sigma, x, INF, None);
        }
    }
    for u in 0..n {
        let mut probe = net.clone();
        if probe.max_flow(s, u, ell) < ell {
            let mut side = probe.source_side(s);
            side.truncate(n);
            let demand = sets.iter().filter(|set| set.iter().all(|&x| side[x])).count();
            return Some((side, demand));
        }
    }
    None
}

/// Whether `g` has edge-disjoint spanning arborescences rooted at the given
/// multiset of roots: every proper nonempty `X` needs `d⁺(X)` at least the
/// number of roots in `X`.
pub fn edmonds_feasible(g: &Digraph, roots: &[usize]) -> Result<Feasibility> {
    if roots.is_empty() {
        return Err(precondition("root multiset must be nonempty"));
    }
    for &r in roots {
        g.check_vertex(r)?;
    }
    let sets: Vec<Vec<usize>> = roots.iter().map(|&r| vec![r]).collect();
    Ok(match root_set_violation(g, &[], &sets) {
        None => Feasibility::Feasible,
        Some((side, demand)) => Feasibility::Violated {
            violation: g.cut_report_of_mask(&side),
            demand,
        },
    })
}

/// One spanning arborescence per entry of `roots`, pairwise edge-disjoint.
/// Each arborescence is grown edge by edge, always taking the lowest-id edge
/// that leaves the remaining demands feasible.
pub fn pack_arborescences(g: &Digraph, roots: &[usize]) -> Result<ArborescencePacking> {
    if let Feasibility::Violated { violation, demand } = edmonds_feasible(g, roots)? {
        return Err(Error::Infeasible { violation, demand });
    }
    let n = g.vertex_count();
    let mut removed = vec![false; g.next_edge_id().0];
    let mut packing = ArborescencePacking::default();
    for (i, &root) in roots.iter().enumerate() {
        let mut reached = vec![false; n];
        reached[root] = true;
        let mut members = vec![root];
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        while members.len() < n {
            let mut candidates: Vec<(EdgeId, usize)> = members
                .iter()
                .flat_map(|&x| g.out_edges(x).iter().copied())
                .filter(|e| !removed[e.0])
                .filter_map(|e| {
                    let (_, y) = g.endpoints(e).unwrap();
                    (!reached[y]).then_some((e, y))
                })
                .collect();
            candidates.sort_unstable();
            let mut chosen = None;
            for (e, y) in candidates {
                removed[e.0] = true;
                let mut sets: Vec<Vec<usize>> = vec![members.clone()];
                sets[0].push(y);
                sets.extend(roots[i + 1..].iter().map(|&r| vec![r]));
                if root_set_violation(g, &removed, &sets).is_none() {
                    chosen = Some((e, y));
                    break;
                }
                removed[e.0] = false;
            }
            let (e, y) = chosen.ok_or_else(|| internal("no edge keeps the arborescence demands feasible"))?;
            reached[y] = true;
            members.push(y);
            edges.push(e);
        }
        packing.arborescences.push(Arborescence { root, edges });
    }
    Ok(packing)
}

/// The `t` vertices of highest total degree, ties by label, in ascending order.
pub fn auto_terminals(g: &Digraph, t: usize) -> Vec<usize> {
    let mut order: Vec<usize> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.out_degree(v) + g.in_degree(v)), v));
    let mut chosen: Vec<usize> = order.into_iter().take(t).collect();
    chosen.sort_unstable();
    chosen
}

/// A `K_t` immersion in a strongly `t(t−1)`-edge-connected digraph: pack
/// `t−1` arborescences at each terminal and use the `k`-th one rooted at
/// `v_i` for the path to the `k`-th other terminal.
pub fn build_complete_immersion(g: &Digraph, t: usize, terminals: Option<&[usize]>) -> Result<ImmersionCertificate> {
    if t == 0 {
        return Err(precondition("t must be at least 1"));
    }
    if g.vertex_count() < t {
        return Err(precondition(format!(
            "need at least {t} vertices, digraph has {}",
            g.vertex_count()
        )));
    }
    let terms: Vec<usize> = match terminals {
        Some(ts) => {
            for &v in ts {
                g.check_vertex(v)?;
            }
            let mut sorted = ts.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if ts.len() != t || sorted.len() != t {
                return Err(precondition(format!("need {t} distinct terminals")));
            }
            ts.to_vec()
        }
        None => auto_terminals(g, t),
    };
    let need = t * (t - 1);
    if !is_strongly_k_edge_connected(g, need) {
        return Err(precondition(format!("digraph is not strongly {need}-edge-connected")));
    }
    let pattern = gen_complete(t);
    let mut cert = ImmersionCertificate {
        pattern: pattern.clone(),
        terminals: terms.clone(),
        paths: BTreeMap::new(),
    };
    if t == 1 {
        return Ok(cert);
    }
    let roots: Vec<usize> = terms.iter().flat_map(|&v| std::iter::repeat_n(v, t - 1)).collect();
    let packing = pack_arborescences(g, &roots)?;
    for (i, &vi) in terms.iter().enumerate() {
        let mut others: Vec<usize> = (0..t).filter(|&j| j != i).collect();
        others.sort_by_key(|&j| terms[j]);
        for (k, &j) in others.iter().enumerate() {
            let arb = &packing.arborescences[i * (t - 1) + k];
            debug_assert_eq!(arb.root, vi);
            let path = arb
                .path_to(g, terms[j])
                .ok_or_else(|| internal("arborescence misses a terminal"))?;
            let pe = pattern.find_edge(i, j).unwrap();
            cert.paths.insert(pe, path);
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::verify_certificate;

    fn exhaustive_feasible(g: &Digraph, roots: &[usize]) -> bool {
        let n = g.vertex_count();
        (1u32..(1 << n) - 1).all(|m| {
            let inside: Vec<bool> = (0..n).map(|v| m & (1 << v) != 0).collect();
            g.out_cut(&inside) >= roots.iter().filter(|&&r| inside[r]).count()
        })
    }

    #[test]
    fn feasibility_examples() {
        let k3 = gen_complete(3);
        assert!(edmonds_feasible(&k3, &[1, 1]).unwrap().is_feasible());
        assert!(edmonds_feasible(&Digraph::new(1), &[0]).unwrap().is_feasible());
        match edmonds_feasible(&Digraph::new(2), &[0]).unwrap() {
            Feasibility::Violated { violation, demand } => {
                assert_eq!(violation.subset, vec![0]);
                assert_eq!(demand, 1);
            }
            Feasibility::Feasible => panic!("two isolated vertices are infeasible"),
        }
        assert!(edmonds_feasible(&k3, &[]).is_err());
        assert!(exhaustive_feasible(&k3, &[1, 1]));
        assert!(!edmonds_feasible(&k3, &[1, 1, 1]).unwrap().is_feasible());
    }

    #[test]
    fn cycle_packing() {
        let g = Digraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let p = pack_arborescences(&g, &[2]).unwrap();
        p.validate(&g).unwrap();
        let mut e = p.arborescences[0].edges.clone();
        e.sort();
        assert_eq!(e, vec![EdgeId(0), EdgeId(2), EdgeId(3), EdgeId(4)]);
    }

    #[test]
    fn complete_packings() {
        let k3 = gen_complete(3);
        pack_arborescences(&k3, &[1, 1]).unwrap().validate(&k3).unwrap();
        let k7 = gen_complete(7);
        let p = pack_arborescences(&k7, &[1; 6]).unwrap();
        assert_eq!(p.arborescences.len(), 6);
        p.validate(&k7).unwrap();
        assert!(matches!(
            pack_arborescences(&k3, &[0, 0, 0]),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn complete_immersions() {
        let k7 = gen_complete(7);
        let c = build_complete_immersion(&k7, 3, None).unwrap();
        assert_eq!(c.paths.len(), 6);
        assert!(verify_certificate(&k7, &c).is_valid());
        let k3 = gen_complete(3);
        let c = build_complete_immersion(&k3, 2, Some(&[2, 0])).unwrap();
        assert!(verify_certificate(&k3, &c).is_valid());
        let c5 = Digraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(build_complete_immersion(&c5, 3, None).is_err());
    }
}
