//! Integer max-flow on small networks (shortest augmenting paths).
//!
//! Host edges become unit arcs tagged with their [`EdgeId`]; auxiliary arcs
//! (super sources, gadgets) are untagged. Arc `2i` is the forward arc and
//! `2i + 1` its reverse.

use std::collections::VecDeque;

use crate::digraph::{Digraph, EdgeId};

pub(crate) const INF: u32 = u32::MAX / 4;

#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork {
    to: Vec<usize>,
    cap: Vec<u32>,
    orig: Vec<u32>,
    adj: Vec<Vec<usize>>,
    tag: Vec<Option<EdgeId>>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            to: Vec::new(),
            cap: Vec::new(),
            orig: Vec::new(),
            adj: vec![Vec::new(); n],
            tag: Vec::new(),
        }
    }

    /// One node per vertex and one unit arc per non-loop edge.
    pub fn from_digraph(g: &Digraph) -> Self {
        let mut net = FlowNetwork::new(g.vertex_count());
        for (e, u, v) in g.edges() {
            if u != v {
                net.add_arc(u, v, 1, Some(e));
            }
        }
        net
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_arc(&mut self, u: usize, v: usize, cap: u32, tag: Option<EdgeId>) -> usize {
        let id = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.orig.push(cap);
        self.tag.push(tag);
        self.adj[u].push(id);
        self.to.push(u);
        self.cap.push(0);
        self.orig.push(0);
        self.tag.push(None);
        self.adj[v].push(id + 1);
        id
    }

    /// Augments from `s` to `t` until no path remains or the flow reaches
    /// `limit`. Returns the total flow pushed by this call.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        if s == t {
            return 0;
        }
        let n = self.adj.len();
        let mut total = 0;
        let mut pred = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        while total < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            pred[s] = usize::MAX - 1;
            queue.clear();
            queue.push_back(s);
            'bfs: while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let w = self.to[a];
                    if self.cap[a] > 0 && pred[w] == usize::MAX {
                        pred[w] = a;
                        if w == t {
                            break 'bfs;
                        }
                        queue.push_back(w);
                    }
                }
            }
            if pred[t] == usize::MAX {
                break;
            }
            let mut bottleneck = limit - total;
            let mut v = t;
            while v != s {
                let a = pred[v];
                bottleneck = bottleneck.min(self.cap[a]);
                v = self.to[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = pred[v];
                self.cap[a] -= bottleneck;
                self.cap[a ^ 1] += bottleneck;
                v = self.to[a ^ 1];
            }
            total += bottleneck;
        }
        total
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let w = self.to[a];
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Splits the current flow on tagged arcs into `s`-`t` paths of host edges.
    /// At each vertex the lowest edge id carrying unused flow is followed;
    /// cycles met on the way are dropped.
    pub fn decompose(&self, s: usize, t: usize) -> Vec<Vec<EdgeId>> {
        let n = self.adj.len();
        let mut outgoing: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); n];
        for (u, out) in outgoing.iter_mut().enumerate() {
            for &a in &self.adj[u] {
                if let Some(e) = self.tag[a] {
                    if self.orig[a] > self.cap[a] {
                        out.push((e, self.to[a]));
                    }
                }
            }
            out.sort_unstable();
            out.reverse();
        }
        let mut paths = Vec::new();
        'outer: loop {
            let mut path: Vec<(EdgeId, usize)> = Vec::new();
            let mut pos = vec![usize::MAX; n];
            pos[s] = 0;
            let mut v = s;
            while v != t {
                let Some((e, w)) = outgoing[v].pop() else {
                    break 'outer;
                };
                path.push((e, w));
                if pos[w] != usize::MAX {
                    let keep = pos[w];
                    for &(_, x) in &path[keep..] {
                        pos[x] = usize::MAX;
                    }
                    path.truncate(keep);
                    pos[w] = keep;
                } else {
                    pos[w] = path.len();
                }
                v = w;
            }
            paths.push(path.into_iter().map(|(e, _)| e).collect());
        }
        paths
    }
}
