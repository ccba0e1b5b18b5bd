//! Constructions of the digraph families used throughout the crate.

mod cycles;
mod random;

pub use cycles::{enumerate_cycles_one_chord, ChordCycle};
pub use random::{gen_random_eulerian, gen_random_eulerian_irregular};

use crate::digraph::{Digraph, EdgeId};
use crate::error::{precondition, Result};

/// Complete digraph: a digon between every pair of `t` vertices.
pub fn gen_complete(t: usize) -> Digraph {
    let mut g = Digraph::new(t);
    for i in 0..t {
        for j in 0..t {
            if i != j {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g.with_name(format!("K{t}"))
}

/// Two vertices with two parallel edges in each direction.
pub fn gen_k22() -> Digraph {
    Digraph::from_edges(2, &[(0, 1), (0, 1), (1, 0), (1, 0)])
        .unwrap()
        .with_name("K2^2")
}

/// The oriented tree behind `D_k` together with the finished digraph.
#[derive(Clone, Debug)]
pub struct DkLayout {
    pub digraph: Digraph,
    /// Distance from the root (vertex 0).
    pub level: Vec<usize>,
    pub parent: Vec<Option<usize>>,
    /// Tree edges, one per non-root vertex, in BFS order.
    pub tree_edges: Vec<EdgeId>,
}

impl DkLayout {
    /// Out-neighbours of the root.
    pub fn level_one(&self) -> Vec<usize> {
        (0..self.level.len()).filter(|&v| self.level[v] == 1).collect()
    }

    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.parent[v];
        while let Some(p) = cur {
            out.push(p);
            cur = self.parent[p];
        }
        out.reverse();
        out
    }
}

/// Builds `D_k`: a rooted tree where the root has `k` children and a vertex
/// on level `j ≥ 1` has `k - j` children, oriented away from the root, plus
/// an edge from every non-root vertex to each of its ancestors.
pub fn dk_layout(k: usize) -> Result<DkLayout> {
    if k == 0 {
        return Err(precondition("D_k needs k >= 1"));
    }
    let mut level = vec![0];
    let mut parent = vec![None];
    let mut tree = Vec::new();
    let mut head = 0;
    while head < level.len() {
        let v = head;
        head += 1;
        let children = if level[v] == 0 { k } else { k - level[v] };
        for _ in 0..children {
            let c = level.len();
            level.push(level[v] + 1);
            parent.push(Some(v));
            tree.push((v, c));
        }
    }
    let n = level.len();
    let mut g = Digraph::new(n);
    let mut tree_edges = Vec::with_capacity(tree.len());
    for (u, v) in tree {
        tree_edges.push(g.add_edge(u, v)?);
    }
    let mut layout = DkLayout {
        digraph: Digraph::new(0),
        level,
        parent,
        tree_edges,
    };
    for v in 1..n {
        for a in layout.ancestors(v) {
            g.add_edge(v, a)?;
        }
    }
    layout.digraph = g.with_name(format!("D{k}"));
    Ok(layout)
}

pub fn gen_dk(k: usize) -> Digraph {
    dk_layout(k).expect("k >= 1").digraph
}

/// Vertex count of `D_k`: the sum of k!/(k-j)! for j = 0..=k.
pub fn dk_vertex_count(k: usize) -> usize {
    let mut total = 0;
    let mut term = 1;
    for j in 0..=k {
        total += term;
        term *= k - j;
    }
    total
}

/// Layout of the two-copy construction: `D_k` on `0..half`, its reverse on
/// `half..2*half`, and every edge from the reversed copy to `D_k`.
#[derive(Clone, Debug)]
pub struct NoK22Layout {
    pub digraph: Digraph,
    pub dk: DkLayout,
    pub half: usize,
}

pub fn no_k22_layout(k: usize) -> Result<NoK22Layout> {
    let dk = dk_layout(k)?;
    let half = dk.digraph.vertex_count();
    let mut g = Digraph::new(2 * half);
    for (_, u, v) in dk.digraph.edges() {
        g.add_edge(u, v)?;
    }
    for (_, u, v) in dk.digraph.edges() {
        g.add_edge(half + v, half + u)?;
    }
    for a in half..2 * half {
        for b in 0..half {
            g.add_edge(a, b)?;
        }
    }
    Ok(NoK22Layout {
        digraph: g.with_name(format!("noK22({k})")),
        dk,
        half,
    })
}

/// Simple digraph with minimum in- and outdegree at least `k` and no
/// immersion of K₂².
pub fn gen_no_k22(k: usize) -> Result<Digraph> {
    no_k22_layout(k).map(|l| l.digraph)
}

#[derive(Clone, Debug)]
pub struct ConCounterexample {
    pub digraph: Digraph,
    /// k = t(t-3)/2
    pub k: usize,
    /// Out-neighbours of the `D_k` root.
    pub x: Vec<usize>,
    /// In-neighbours of the reversed copy's root.
    pub x_prime: Vec<usize>,
    /// Matching edges `x[i] -> x_prime[i]`.
    pub matching: Vec<EdgeId>,
}

/// Strongly `t(t-3)/2`-edge-connected simple digraph without a `K_t`
/// immersion. For `t = 3` the degenerate answer is a single digon.
pub fn con_counterexample_layout(t: usize) -> Result<ConCounterexample> {
    if t < 3 {
        return Err(precondition("con-counterexample needs t >= 3"));
    }
    if t == 3 {
        return Ok(ConCounterexample {
            digraph: gen_complete(2).with_name("con(3)"),
            k: 0,
            x: Vec::new(),
            x_prime: Vec::new(),
            matching: Vec::new(),
        });
    }
    let k = t * (t - 3) / 2;
    let base = no_k22_layout(k)?;
    let half = base.half;
    let x = base.dk.level_one();
    let x_prime: Vec<usize> = x.iter().map(|&v| half + v).collect();
    let mut g = base.digraph;
    let matching = x
        .iter()
        .zip(&x_prime)
        .map(|(&a, &b)| g.add_edge(a, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConCounterexample {
        digraph: g.with_name(format!("con({t})")),
        k,
        x,
        x_prime,
        matching,
    })
}

pub fn gen_con_counterexample(t: usize) -> Result<Digraph> {
    con_counterexample_layout(t).map(|c| c.digraph)
}

/// Vertex names of [`gen_fig3`], indexed by label.
pub const FIG3_LABELS: [&str; 9] = ["v0", "u1", "u2", "w1", "w2", "x1", "x2", "y1", "y2"];

const FIG3_EDGES: [(usize, usize); 34] = [
    // left side: digons x1-u1, u1-w1, w1-y1, y1-x1 and arcs y1->u1, w1->x1
    (5, 1),
    (1, 5),
    (1, 3),
    (3, 1),
    (3, 7),
    (7, 3),
    (7, 5),
    (5, 7),
    (7, 1),
    (3, 5),
    // right side, mirrored
    (6, 2),
    (2, 6),
    (2, 4),
    (4, 2),
    (4, 8),
    (8, 4),
    (8, 6),
    (6, 8),
    (8, 2),
    (4, 6),
    // around v0
    (1, 0),
    (0, 3),
    (2, 0),
    (0, 4),
    (1, 4),
    (2, 3),
    // between the sides
    (5, 2),
    (6, 1),
    (5, 6),
    (6, 5),
    (3, 8),
    (4, 7),
    (7, 8),
    (8, 7),
];

/// The nine-vertex configuration where every vertex except `v0` has degree 4
/// and `v0` has degree 2.
pub fn gen_fig3() -> Digraph {
    Digraph::from_edges(9, &FIG3_EDGES).unwrap().with_name("fig3")
}

#[derive(Clone, Debug)]
pub struct OddCycleLayout {
    pub digraph: Digraph,
    pub depth: Vec<usize>,
    /// Arborescence edges; they are the first `n - 1` edge ids.
    pub tree_edges: Vec<EdgeId>,
}

/// Arborescence of depth `2k` with every non-leaf of outdegree `k`, plus an
/// edge from each leaf to every ancestor at even distance ≥ 2.
pub fn odd_cycle_layout(k: usize) -> Result<OddCycleLayout> {
    if k == 0 {
        return Err(precondition("odd-cycle digraph needs k >= 1"));
    }
    let leaf_depth = 2 * k;
    let mut depth = vec![0];
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut tree = Vec::new();
    let mut head = 0;
    while head < depth.len() {
        let v = head;
        head += 1;
        if depth[v] == leaf_depth {
            continue;
        }
        for _ in 0..k {
            let c = depth.len();
            depth.push(depth[v] + 1);
            parent.push(Some(v));
            tree.push((v, c));
        }
    }
    let n = depth.len();
    let mut g = Digraph::new(n);
    let tree_edges = tree
        .iter()
        .map(|&(u, v)| g.add_edge(u, v))
        .collect::<Result<Vec<_>>>()?;
    for (x, &dx) in depth.iter().enumerate() {
        if dx != leaf_depth {
            continue;
        }
        let mut y = x;
        let mut dist = 0;
        while let Some(p) = parent[y] {
            y = p;
            dist += 1;
            if dist % 2 == 0 {
                g.add_edge(x, y)?;
            }
        }
    }
    Ok(OddCycleLayout {
        digraph: g.with_name(format!("odd-cycle({k})")),
        depth,
        tree_edges,
    })
}

pub fn gen_odd_cycle_digraph(k: usize) -> Result<Digraph> {
    odd_cycle_layout(k).map(|l| l.digraph)
}
