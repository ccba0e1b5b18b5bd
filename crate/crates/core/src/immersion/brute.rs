//! Exact backtracking search for immersions.

use std::cmp::Ordering;

use crate::digraph::{Digraph, EdgeId};
use crate::flow::FlowNetwork;

use super::ImmersionCertificate;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteOutcome {
    Found(ImmersionCertificate),
    /// The whole search space was exhausted.
    NotFound,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct BruteResult {
    pub outcome: BruteOutcome,
    /// Search nodes visited (terminal choices plus path extensions).
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct BruteOptions {
    pub budget: u64,
    /// Fix the image of every pattern vertex instead of searching for it.
    pub terminals: Option<Vec<usize>>,
}

impl Default for BruteOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            terminals: None,
        }
    }
}

/// Searches for an immersion of `h` in `d` within `budget` search nodes.
pub fn brute_force_immersion(d: &Digraph, h: &Digraph, budget: u64) -> BruteResult {
    brute_force_immersion_with(
        d,
        h,
        &BruteOptions {
            budget,
            terminals: None,
        },
    )
}

pub fn brute_force_immersion_with(d: &Digraph, h: &Digraph, opts: &BruteOptions) -> BruteResult {
    let mut s = Search::new(d, h, opts);
    let found = match &opts.terminals {
        Some(t) if t.len() != h.vertex_count() => false,
        _ => s.assign(0),
    };
    let outcome = if found {
        let mut cert = ImmersionCertificate::new(h.clone(), s.phi.iter().map(|x| x.unwrap()).collect());
        for (i, &(pe, _, _)) in s.pattern_edges.iter().enumerate() {
            cert.paths.insert(pe, s.routes[i].clone().unwrap());
        }
        BruteOutcome::Found(cert)
    } else if s.exhausted {
        BruteOutcome::BudgetExhausted
    } else {
        BruteOutcome::NotFound
    };
    BruteResult {
        outcome,
        nodes: s.nodes,
    }
}

struct Search<'a> {
    d: &'a Digraph,
    h: &'a Digraph,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    fixed: Option<&'a [usize]>,
    order: Vec<usize>,
    /// Pairs `(a, b)`, `a < b`, whose transposition is an automorphism of `h`.
    twins: Vec<(usize, usize)>,
    phi: Vec<Option<usize>>,
    host_taken: Vec<bool>,
    pattern_edges: Vec<(EdgeId, usize, usize)>,
    routes: Vec<Option<Vec<EdgeId>>>,
    used: Vec<bool>,
}

fn non_loop_degrees(g: &Digraph, v: usize) -> (usize, usize) {
    let out = g
        .out_edges(v)
        .iter()
        .filter(|&&e| g.endpoints(e).unwrap().1 != v)
        .count();
    let inn = g
        .in_edges(v)
        .iter()
        .filter(|&&e| g.endpoints(e).unwrap().0 != v)
        .count();
    (out, inn)
}

impl<'a> Search<'a> {
    fn new(d: &'a Digraph, h: &'a Digraph, opts: &'a BruteOptions) -> Self {
        let k = h.vertex_count();
        let mut order: Vec<usize> = h.vertices().collect();
        order.sort_by_key(|&a| (std::cmp::Reverse(h.out_degree(a) + h.in_degree(a)), a));
        let mut twins = Vec::new();
        if opts.terminals.is_none() {
            for a in 0..k {
                for b in a + 1..k {
                    let swap_ok = h.multiplicity(a, b) == h.multiplicity(b, a)
                        && h.multiplicity(a, a) == h.multiplicity(b, b)
                        && (0..k).filter(|&c| c != a && c != b).all(|c| {
                            h.multiplicity(a, c) == h.multiplicity(b, c) && h.multiplicity(c, a) == h.multiplicity(c, b)
                        });
                    if swap_ok {
                        twins.push((a, b));
                    }
                }
            }
        }
        let pattern_edges: Vec<_> = h.edges().collect();
        Self {
            d,
            h,
            budget: opts.budget,
            nodes: 0,
            exhausted: false,
            fixed: opts.terminals.as_deref(),
            order,
            twins,
            phi: vec![None; k],
            host_taken: vec![false; d.vertex_count()],
            routes: vec![None; pattern_edges.len()],
            pattern_edges,
            used: vec![false; d.next_edge_id().0],
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
        }
        !self.exhausted
    }

    fn twin_ok(&self, a: usize, x: usize) -> bool {
        self.twins.iter().all(|&(p, q)| {
            if p == a {
                self.phi[q].is_none_or(|y| x < y)
            } else if q == a {
                self.phi[p].is_none_or(|y| y < x)
            } else {
                true
            }
        })
    }

    fn assign(&mut self, idx: usize) -> bool {
        if idx == self.order.len() {
            return self.route();
        }
        let a = self.order[idx];
        let (need_out, need_in) = non_loop_degrees(self.h, a);
        let candidates: Vec<usize> = match self.fixed {
            Some(f) => vec![f[a]],
            None => self.d.vertices().collect(),
        };
        for x in candidates {
            if x >= self.d.vertex_count() || self.host_taken[x] || !self.twin_ok(a, x) {
                continue;
            }
            let (out, inn) = non_loop_degrees(self.d, x);
            if out < need_out || inn < need_in {
                continue;
            }
            if !self.tick() {
                return false;
            }
            self.phi[a] = Some(x);
            self.host_taken[x] = true;
            if self.cuts_feasible() && self.assign(idx + 1) {
                return true;
            }
            self.phi[a] = None;
            self.host_taken[x] = false;
            if self.exhausted {
                return false;
            }
        }
        false
    }

    /// For every pair of placed pattern vertices, the unrouted part of the
    /// pattern must not need more edge-disjoint paths than the unused part
    /// of the host provides.
    fn cuts_feasible(&self) -> bool {
        let k = self.h.vertex_count();
        let mut pattern_net = FlowNetwork::new(k);
        for (i, &(_, a, b)) in self.pattern_edges.iter().enumerate() {
            if self.routes[i].is_none() && a != b {
                pattern_net.add_arc(a, b, 1, None);
            }
        }
        let mut host_net = FlowNetwork::new(self.d.vertex_count());
        for (e, u, v) in self.d.edges() {
            if !self.used[e.0] && u != v {
                host_net.add_arc(u, v, 1, Some(e));
            }
        }
        for a in 0..k {
            for b in 0..k {
                let (Some(x), Some(y)) = (self.phi[a], self.phi[b]) else {
                    continue;
                };
                if a == b {
                    continue;
                }
                let need = pattern_net.clone().max_flow(a, b, u32::MAX / 4);
                if need > 0 && host_net.clone().max_flow(x, y, need) < need {
                    return false;
                }
            }
        }
        true
    }

    fn residual_lambda(&self, x: usize, y: usize, cap: u32) -> u32 {
        let mut net = FlowNetwork::new(self.d.vertex_count());
        for (e, u, v) in self.d.edges() {
            if !self.used[e.0] && u != v {
                net.add_arc(u, v, 1, Some(e));
            }
        }
        net.max_flow(x, y, cap)
    }

    fn route(&mut self) -> bool {
        let unrouted: Vec<usize> = (0..self.pattern_edges.len())
            .filter(|&i| self.routes[i].is_none())
            .collect();
        if unrouted.is_empty() {
            return true;
        }
        if !self.cuts_feasible() {
            return false;
        }
        // most constrained first: smallest residual connectivity, then lowest id
        let mut best = None;
        for &i in &unrouted {
            let (_, a, b) = self.pattern_edges[i];
            let (x, y) = (self.phi[a].unwrap(), self.phi[b].unwrap());
            let score = if x == y { 0 } else { self.residual_lambda(x, y, 4) };
            if best.is_none_or(|(s, _)| score < s) {
                best = Some((score, i));
            }
        }
        let (_, i) = best.unwrap();
        let (_, a, b) = self.pattern_edges[i];
        let (x, y) = (self.phi[a].unwrap(), self.phi[b].unwrap());
        let mut visited = vec![false; self.d.vertex_count()];
        visited[x] = true;
        let mut path = Vec::new();
        self.extend(i, x, y, &mut visited, &mut path)
    }

    /// Parallel pattern edges are interchangeable, so their paths are
    /// required to appear in increasing lexicographic order of edge ids.
    fn order_ok(&self, i: usize, path: &[EdgeId]) -> bool {
        let (pe, a, b) = self.pattern_edges[i];
        self.pattern_edges.iter().enumerate().all(|(j, &(qe, c, d))| {
            if j == i || (c, d) != (a, b) {
                return true;
            }
            match &self.routes[j] {
                None => true,
                Some(other) => {
                    let ord = path.cmp(other.as_slice());
                    if pe < qe {
                        ord == Ordering::Less
                    } else {
                        ord == Ordering::Greater
                    }
                }
            }
        })
    }

    fn extend(&mut self, i: usize, at: usize, target: usize, visited: &mut [bool], path: &mut Vec<EdgeId>) -> bool {
        let outs: Vec<EdgeId> = self.d.out_edges(at).to_vec();
        for e in outs {
            if self.used[e.0] {
                continue;
            }
            let (_, v) = self.d.endpoints(e).unwrap();
            if v != target && visited[v] {
                continue;
            }
            if !self.tick() {
                return false;
            }
            self.used[e.0] = true;
            path.push(e);
            if v == target {
                if self.order_ok(i, path) {
                    self.routes[i] = Some(path.clone());
                    if self.route() {
                        return true;
                    }
                    self.routes[i] = None;
                }
            } else {
                visited[v] = true;
                if self.extend(i, v, target, visited, path) {
                    return true;
                }
                visited[v] = false;
            }
            path.pop();
            self.used[e.0] = false;
            if self.exhausted {
                return false;
            }
        }
        false
    }
}
