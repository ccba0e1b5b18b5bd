use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, EdgeId};
use crate::error::{precondition, Result};

/// A directed cycle made of one non-tree edge and the tree path it closes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordCycle {
    pub chord: EdgeId,
    /// Tree path from the chord's head to its tail, followed by the chord.
    pub edges: Vec<EdgeId>,
}

impl ChordCycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Lists every directed cycle of `g` when `tree` is a spanning arborescence
/// and each non-tree edge `x→y` has a tree path from `y` to `x`. In that
/// situation each cycle contains exactly one non-tree edge, so there is one
/// cycle per chord.
pub fn enumerate_cycles_one_chord(g: &Digraph, tree: &[EdgeId]) -> Result<Vec<ChordCycle>> {
    let n = g.vertex_count();
    let mut in_tree = vec![false; g.next_edge_id().0];
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    for &e in tree {
        let (_, v) = g.try_endpoints(e)?;
        if in_tree[e.0] {
            return Err(precondition(format!("tree edge {e} listed twice")));
        }
        in_tree[e.0] = true;
        if parent_edge[v].is_some() {
            return Err(precondition(format!("vertex {v} has two tree in-edges")));
        }
        parent_edge[v] = Some(e);
    }
    let roots: Vec<usize> = (0..n).filter(|&v| parent_edge[v].is_none()).collect();
    if roots.len() != 1 {
        return Err(precondition(format!(
            "tree edges do not form an arborescence ({} vertices without a tree in-edge)",
            roots.len()
        )));
    }
    let root = roots[0];
    let mut depth = vec![usize::MAX; n];
    depth[root] = 0;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &e in g.out_edges(u) {
            if in_tree[e.0] {
                let (_, v) = g.endpoints(e).unwrap();
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    stack.push(v);
                }
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(precondition("tree edges do not span the digraph from one root"));
    }

    let mut cycles = Vec::new();
    for (e, x, y) in g.edges() {
        if in_tree[e.0] {
            continue;
        }
        // climb from x to y along parent edges
        let mut path = Vec::new();
        let mut cur = x;
        while cur != y {
            match parent_edge[cur] {
                Some(pe) if depth[cur] > depth[y] => {
                    path.push(pe);
                    cur = g.endpoints(pe).unwrap().0;
                }
                _ => {
                    return Err(precondition(format!(
                        "non-tree edge {e} ({x}->{y}) has no tree path from {y} to {x}"
                    )))
                }
            }
        }
        path.reverse();
        path.push(e);
        cycles.push(ChordCycle { chord: e, edges: path });
    }
    Ok(cycles)
}
