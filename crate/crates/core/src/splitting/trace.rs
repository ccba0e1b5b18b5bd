//! Replayable logs of immersion moves and certificate lifting.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, EdgeId};
use crate::error::{internal, precondition, Error, Result};
use crate::immersion::ImmersionCertificate;

/// Paths inside a contracted vertex set used to route certificate paths
/// that pass through the merged vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Routing {
    /// No routing recorded; lifting fails if a path crosses the merged vertex.
    Unrouted,
    /// Every edge entering the set is joined to `hub` by `inbound`, and `hub`
    /// reaches the tail of every leaving edge by `outbound`. All these paths
    /// are pairwise edge-disjoint, so any pairing of entries and exits lifts.
    Hub {
        hub: usize,
        inbound: Vec<HubRoute>,
        outbound: Vec<HubRoute>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HubRoute {
    pub edge: EdgeId,
    pub path: Vec<EdgeId>,
}

/// One elementary immersion move. Vertex labels refer to the digraph the
/// move is applied to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Move {
    #[serde(rename_all = "camelCase")]
    SplitOff {
        in_edge: EdgeId,
        out_edge: EdgeId,
        new_edge: EdgeId,
    },
    DeleteEdge {
        edge: EdgeId,
    },
    DeleteIsolatedVertex {
        vertex: usize,
    },
    #[serde(rename_all = "camelCase")]
    ContractSet {
        vertices: Vec<usize>,
        new_vertex: usize,
        vertex_map: Vec<usize>,
        /// Crossing edges keep their ids; only their endpoints are redirected.
        crossing_edges: Vec<EdgeId>,
        routing: Routing,
    },
}

/// Ordered list of moves turning an original digraph into a derived one.
/// Serialises as a JSON array of move records.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ImmersionTrace {
    pub moves: Vec<Move>,
}

fn apply(g: &mut Digraph, m: &Move) -> Result<()> {
    match m {
        Move::SplitOff {
            in_edge,
            out_edge,
            new_edge,
        } => {
            let got = split_edges(g, *in_edge, *out_edge)?;
            if got != *new_edge {
                return Err(precondition(format!(
                    "replay mismatch: split produced {got}, trace records {new_edge}"
                )));
            }
        }
        Move::DeleteEdge { edge } => {
            g.remove_edge(*edge)?;
        }
        Move::DeleteIsolatedVertex { vertex } => g.remove_isolated_vertex(*vertex)?,
        Move::ContractSet {
            vertices,
            new_vertex,
            vertex_map,
            ..
        } => {
            let (h, c) = g.contract_set(vertices)?;
            if c.new_vertex != *new_vertex || c.vertex_map != *vertex_map {
                return Err(precondition("replay mismatch in contract-set labels"));
            }
            *g = h;
        }
    }
    Ok(())
}

/// Removes `x→y`, `y→z` and adds `x→z`; returns the new edge id.
fn split_edges(g: &mut Digraph, e1: EdgeId, e2: EdgeId) -> Result<EdgeId> {
    if e1 == e2 {
        return Err(precondition(format!("cannot split {e1} with itself")));
    }
    let (x, y) = g.try_endpoints(e1)?;
    let (y2, z) = g.try_endpoints(e2)?;
    if y != y2 {
        return Err(precondition(format!(
            "edges {e1} ({x}->{y}) and {e2} ({y2}->{z}) do not form a path"
        )));
    }
    g.remove_edge(e1)?;
    g.remove_edge(e2)?;
    g.add_edge(x, z)
}

impl ImmersionTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn extend(&mut self, other: ImmersionTrace) {
        self.moves.extend(other.moves);
    }

    /// Splits off `e_in`, `e_out` in place. A loop produced by the split is
    /// deleted immediately; returns the surviving new edge, if any.
    pub fn split(&mut self, g: &mut Digraph, e_in: EdgeId, e_out: EdgeId) -> Result<Option<EdgeId>> {
        let new_edge = split_edges(g, e_in, e_out)?;
        self.moves.push(Move::SplitOff {
            in_edge: e_in,
            out_edge: e_out,
            new_edge,
        });
        let (a, b) = g.endpoints(new_edge).unwrap();
        if a == b {
            g.remove_edge(new_edge)?;
            self.moves.push(Move::DeleteEdge { edge: new_edge });
            Ok(None)
        } else {
            Ok(Some(new_edge))
        }
    }

    pub fn delete_edge(&mut self, g: &mut Digraph, e: EdgeId) -> Result<()> {
        g.remove_edge(e)?;
        self.moves.push(Move::DeleteEdge { edge: e });
        Ok(())
    }

    pub fn delete_isolated_vertex(&mut self, g: &mut Digraph, v: usize) -> Result<()> {
        g.remove_isolated_vertex(v)?;
        self.moves.push(Move::DeleteIsolatedVertex { vertex: v });
        Ok(())
    }

    /// Deletes every edge touching `vertices`, then the vertices themselves
    /// (highest label first). Returns `old → new` labels for the survivors.
    pub fn delete_vertices(&mut self, g: &mut Digraph, vertices: &[usize]) -> Result<Vec<Option<usize>>> {
        let n = g.vertex_count();
        let doomed = g.mask(vertices)?;
        let incident: Vec<EdgeId> = g
            .edges()
            .filter(|&(_, u, v)| doomed[u] || doomed[v])
            .map(|(e, _, _)| e)
            .collect();
        for e in incident {
            self.delete_edge(g, e)?;
        }
        for v in (0..n).rev().filter(|&v| doomed[v]) {
            self.delete_isolated_vertex(g, v)?;
        }
        let mut map = vec![None; n];
        let mut next = 0;
        for v in 0..n {
            if !doomed[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        Ok(map)
    }

    /// Keeps only the weak component of `anchor`.
    pub fn restrict_to_component(&mut self, g: &mut Digraph, anchor: usize) -> Result<Vec<Option<usize>>> {
        let comp = g.weak_components();
        let others: Vec<usize> = g.vertices().filter(|&v| comp[v] != comp[anchor]).collect();
        self.delete_vertices(g, &others)
    }

    /// Contracts `set` to a single vertex and records the move.
    pub fn contract(&mut self, g: &Digraph, set: &[usize], routing: Routing) -> Result<Digraph> {
        let (h, c) = g.contract_set(set)?;
        self.moves.push(Move::ContractSet {
            vertices: c.members,
            new_vertex: c.new_vertex,
            vertex_map: c.vertex_map,
            crossing_edges: c.crossing_edges,
            routing,
        });
        Ok(h)
    }

    /// Applies the moves to `original`.
    pub fn replay(&self, original: &Digraph) -> Result<Digraph> {
        let mut g = original.clone();
        for m in &self.moves {
            apply(&mut g, m)?;
        }
        Ok(g)
    }

    /// The digraph before each move, followed by the final one.
    pub fn snapshots(&self, original: &Digraph) -> Result<Vec<Digraph>> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        let mut g = original.clone();
        for m in &self.moves {
            out.push(g.clone());
            apply(&mut g, m)?;
        }
        out.push(g);
        Ok(out)
    }

    /// Turns a certificate valid in the derived digraph into one valid in
    /// `original`. Paths are shortened to simple paths at the end.
    pub fn lift(&self, original: &Digraph, cert: &ImmersionCertificate) -> Result<ImmersionCertificate> {
        let snaps = self.snapshots(original)?;
        let mut terminals = cert.terminals.clone();
        let mut paths = cert.paths.clone();
        for (i, m) in self.moves.iter().enumerate().rev() {
            let before = &snaps[i];
            match m {
                Move::SplitOff {
                    in_edge,
                    out_edge,
                    new_edge,
                } => {
                    for p in paths.values_mut() {
                        if p.contains(new_edge) {
                            *p = p
                                .iter()
                                .flat_map(|e| {
                                    if e == new_edge {
                                        vec![*in_edge, *out_edge]
                                    } else {
                                        vec![*e]
                                    }
                                })
                                .collect();
                        }
                    }
                }
                Move::DeleteEdge { edge } => {
                    if paths.values().any(|p| p.contains(edge)) {
                        return Err(internal(format!("certificate uses deleted edge {edge}")));
                    }
                }
                Move::DeleteIsolatedVertex { vertex } => {
                    for t in terminals.iter_mut() {
                        if *t >= *vertex {
                            *t += 1;
                        }
                    }
                }
                Move::ContractSet {
                    vertices,
                    new_vertex,
                    vertex_map,
                    routing,
                    ..
                } => {
                    for t in terminals.iter_mut() {
                        if *t == *new_vertex {
                            return Err(internal("a terminal sits on a contracted vertex"));
                        }
                        *t = vertex_map
                            .iter()
                            .position(|&x| x == *t)
                            .ok_or_else(|| internal("terminal outside the contracted digraph"))?;
                    }
                    let inside = before.mask(vertices)?;
                    for p in paths.values_mut() {
                        *p = route_through(before, &inside, routing, p)?;
                    }
                }
            }
        }
        let mut lifted = ImmersionCertificate {
            pattern: cert.pattern.clone(),
            terminals,
            paths,
        };
        lifted.simplify_paths(original)?;
        Ok(lifted)
    }
}

fn route_through(before: &Digraph, inside: &[bool], routing: &Routing, path: &[EdgeId]) -> Result<Vec<EdgeId>> {
    let mut out = Vec::with_capacity(path.len());
    for (i, &e) in path.iter().enumerate() {
        out.push(e);
        let (u, v) = before.try_endpoints(e)?;
        if inside[v] && !inside[u] {
            let Some(&next) = path.get(i + 1) else {
                return Err(internal("certificate path ends inside a contracted set"));
            };
            let Routing::Hub { inbound, outbound, .. } = routing else {
                return Err(Error::Precondition(
                    "path crosses a contracted vertex but the contraction has no routing".into(),
                ));
            };
            let a = inbound
                .iter()
                .find(|r| r.edge == e)
                .ok_or_else(|| internal(format!("no inbound route for {e}")))?;
            let b = outbound
                .iter()
                .find(|r| r.edge == next)
                .ok_or_else(|| internal(format!("no outbound route for {next}")))?;
            out.extend_from_slice(&a.path);
            out.extend_from_slice(&b.path);
        }
    }
    Ok(out)
}

/// Drops closed sub-walks so that no vertex repeats.
pub(crate) fn simplify_walk(g: &Digraph, start: usize, walk: &[EdgeId]) -> Result<Vec<EdgeId>> {
    let mut out: Vec<EdgeId> = Vec::with_capacity(walk.len());
    let mut pos = std::collections::HashMap::new();
    pos.insert(start, 0usize);
    let end = match walk.last() {
        Some(&e) => g.try_endpoints(e)?.1,
        None => return Ok(Vec::new()),
    };
    if end == start {
        return Ok(walk.to_vec());
    }
    for &e in walk {
        let (_, v) = g.try_endpoints(e)?;
        out.push(e);
        if let Some(&p) = pos.get(&v) {
            for &d in &out[p..] {
                pos.remove(&g.endpoints(d).unwrap().1);
            }
            out.truncate(p);
            pos.insert(v, p);
        } else {
            pos.insert(v, out.len());
        }
    }
    Ok(out)
}
