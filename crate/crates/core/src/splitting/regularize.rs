use crate::digraph::Digraph;
use crate::error::{precondition, Result};

use super::ImmersionTrace;

#[derive(Clone, Debug)]
pub struct Regularized {
    pub digraph: Digraph,
    pub trace: ImmersionTrace,
    /// Set when the reduction stopped at a vertex whose closed neighbourhood
    /// spans a complete digraph on at least `t + 1` vertices (labels refer to
    /// `digraph`). In that case `digraph` need not be regular.
    pub complete_subgraph: Option<Vec<usize>>,
}

/// Reduces a simple Eulerian digraph of minimum degree at least `t` to a
/// simple `t`-regular one by splitting at a maximum-degree vertex, keeping
/// the component of that vertex after each split.
pub fn regularize(g: &Digraph, t: usize) -> Result<Regularized> {
    if t == 0 {
        return Err(precondition("t must be at least 1"));
    }
    if !g.is_simple() || !g.is_eulerian() {
        return Err(precondition("regularize needs a simple Eulerian digraph"));
    }
    if g.vertex_count() == 0 || g.min_out_degree() < t {
        return Err(precondition(format!("minimum degree is below {t}")));
    }
    let mut h = g.clone();
    let mut trace = ImmersionTrace::new();
    loop {
        let delta = h.max_out_degree();
        if delta == t {
            return Ok(Regularized {
                digraph: h,
                trace,
                complete_subgraph: None,
            });
        }
        let v = h.vertices().find(|&v| h.out_degree(v) == delta).unwrap();
        let outs = h.out_neighbours(v);
        let pair = h
            .in_neighbours(v)
            .into_iter()
            .flat_map(|u| outs.iter().map(move |&w| (u, w)))
            .find(|&(u, w)| u != w && !h.has_edge(u, w));
        match pair {
            Some((u, w)) => {
                let e1 = h.find_edge(u, v).unwrap();
                let e2 = h.find_edge(v, w).unwrap();
                trace.split(&mut h, e1, e2)?;
                let map = trace.restrict_to_component(&mut h, v)?;
                debug_assert!(map[v].is_some());
            }
            None => {
                let mut clique = outs;
                clique.push(v);
                clique.sort_unstable();
                return Ok(Regularized {
                    digraph: h,
                    trace,
                    complete_subgraph: Some(clique),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_complete, gen_random_eulerian_irregular};

    #[test]
    fn regular_input_is_identity() {
        let g = gen_complete(5);
        let r = regularize(&g, 4).unwrap();
        assert!(r.trace.is_empty());
        assert_eq!(r.digraph, g);
        assert!(r.complete_subgraph.is_none());
    }

    #[test]
    fn k4_to_two_regular_or_flag() {
        let g = gen_complete(4);
        let r = regularize(&g, 2).unwrap();
        assert_eq!(r.trace.replay(&g).unwrap(), r.digraph);
        match r.complete_subgraph {
            Some(c) => assert!(c.len() >= 3),
            None => {
                let c = r.digraph.classify();
                assert!(c.simple && c.eulerian);
                assert!(r.digraph.vertices().all(|v| r.digraph.out_degree(v) == 2));
            }
        }
    }

    #[test]
    fn irregular_inputs() {
        for seed in 0..10 {
            let g = gen_random_eulerian_irregular(9, 2, 3, seed).unwrap();
            let r = regularize(&g, 2).unwrap();
            assert_eq!(r.trace.replay(&g).unwrap(), r.digraph);
            if let Some(c) = &r.complete_subgraph {
                for &a in c {
                    for &b in c {
                        assert!(a == b || r.digraph.has_edge(a, b));
                    }
                }
            } else {
                assert!(r.digraph.is_simple() && r.digraph.is_eulerian());
                assert!(r.digraph.vertices().all(|v| r.digraph.out_degree(v) == 2));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(regularize(&gen_complete(3), 3).is_err());
        let path = Digraph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(regularize(&path, 1).is_err());
    }
}
