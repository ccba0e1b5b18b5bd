//! Directed multigraph with stable edge identifiers.
//!
//! Vertices are the dense labels `0..n`. Every edge carries an [`EdgeId`]
//! that is never reused inside one `Digraph` value, so parallel edges stay
//! distinguishable in paths, certificates and traces. Loops are allowed; they
//! count once towards both degrees of their vertex and never cross a cut.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Equality compares structure and edge ids; the display name is ignored.
#[derive(Clone, Debug, Default)]
pub struct Digraph {
    n: usize,
    slots: Vec<Option<(usize, usize)>>,
    out_adj: Vec<Vec<EdgeId>>,
    in_adj: Vec<Vec<EdgeId>>,
    live: usize,
    name: Option<String>,
}

/// Edge counts across the boundary of a vertex subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CutReport {
    pub subset: Vec<usize>,
    pub out_degree: usize,
    pub in_degree: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelClass {
    pub tail: usize,
    pub head: usize,
    pub edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Classification {
    pub simple: bool,
    pub eulerian: bool,
    pub digons: usize,
    pub parallel_classes: Vec<ParallelClass>,
}

/// Result of identifying a vertex set to a single new vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Contraction {
    /// Contracted vertices, sorted, in the labels of the input digraph.
    pub members: Vec<usize>,
    /// Label of the merged vertex in the output digraph (always the last one).
    pub new_vertex: usize,
    /// `vertex_map[old] = new` for every input vertex.
    pub vertex_map: Vec<usize>,
    /// Edges with exactly one endpoint in `members`; they keep their ids.
    pub crossing_edges: Vec<EdgeId>,
    /// Edges inside `members`; they would become loops and are retired.
    pub removed_edges: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mutation {
    AddEdge { tail: usize, head: usize },
    DeleteEdge(EdgeId),
    DeleteVertex(usize),
    ContractSet(Vec<usize>),
}

#[derive(Clone, Debug)]
pub struct Mutated {
    pub digraph: Digraph,
    pub added_edge: Option<EdgeId>,
    pub contraction: Option<Contraction>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            slots: Vec::new(),
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            live: 0,
            name: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Digraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.live
    }

    /// The id the next added edge will receive.
    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.slots.len())
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// Live edges as `(id, tail, head)` in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, usize, usize)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|(u, v)| (EdgeId(i), u, v)))
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges().map(|(e, _, _)| e).collect()
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(usize, usize)> {
        self.slots.get(e.0).copied().flatten()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.endpoints(e).is_some()
    }

    pub(crate) fn try_endpoints(&self, e: EdgeId) -> Result<(usize, usize)> {
        self.endpoints(e).ok_or(Error::StaleEdge(e))
    }

    /// Out-edges of `v`, ascending by id.
    pub fn out_edges(&self, v: usize) -> &[EdgeId] {
        &self.out_adj[v]
    }

    /// In-edges of `v`, ascending by id.
    pub fn in_edges(&self, v: usize) -> &[EdgeId] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn degrees(&self, v: usize) -> Result<(usize, usize)> {
        self.check_vertex(v)?;
        Ok((self.out_degree(v), self.in_degree(v)))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    /// Number of edges from `u` to `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.out_adj[u]
            .iter()
            .filter(|&&e| self.slots[e.0].map(|(_, h)| h) == Some(v))
            .count()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u]
            .iter()
            .any(|&e| self.slots[e.0].map(|(_, h)| h) == Some(v))
    }

    /// Lowest-id edge from `u` to `v`.
    pub fn find_edge(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.out_adj[u]
            .iter()
            .copied()
            .find(|&e| self.slots[e.0].map(|(_, h)| h) == Some(v))
    }

    /// Distinct out-neighbours of `v` in ascending order (loops excluded).
    pub fn out_neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.out_adj[v]
            .iter()
            .map(|&e| self.slots[e.0].unwrap().1)
            .filter(|&h| h != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn in_neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.in_adj[v]
            .iter()
            .map(|&e| self.slots[e.0].unwrap().0)
            .filter(|&t| t != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.n - 1
    }

    pub fn add_edge(&mut self, tail: usize, head: usize) -> Result<EdgeId> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        let id = EdgeId(self.slots.len());
        self.slots.push(Some((tail, head)));
        self.out_adj[tail].push(id);
        self.in_adj[head].push(id);
        self.live += 1;
        Ok(id)
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(usize, usize)> {
        let (u, v) = self.try_endpoints(e)?;
        self.slots[e.0] = None;
        self.out_adj[u].retain(|&x| x != e);
        self.in_adj[v].retain(|&x| x != e);
        self.live -= 1;
        Ok((u, v))
    }

    /// Deletes an isolated vertex; labels above it shift down by one.
    pub fn remove_isolated_vertex(&mut self, v: usize) -> Result<()> {
        self.check_vertex(v)?;
        if !self.out_adj[v].is_empty() || !self.in_adj[v].is_empty() {
            return Err(precondition(format!("vertex {v} is not isolated")));
        }
        self.out_adj.remove(v);
        self.in_adj.remove(v);
        self.n -= 1;
        for (u, w) in self.slots.iter_mut().flatten() {
            if *u > v {
                *u -= 1;
            }
            if *w > v {
                *w -= 1;
            }
        }
        Ok(())
    }

    /// Deletes `v` with all incident edges; returns the retired edge ids.
    pub fn remove_vertex(&mut self, v: usize) -> Result<Vec<EdgeId>> {
        self.check_vertex(v)?;
        let mut incident: Vec<EdgeId> = self.out_adj[v].iter().chain(self.in_adj[v].iter()).copied().collect();
        incident.sort_unstable();
        incident.dedup();
        for &e in &incident {
            self.remove_edge(e)?;
        }
        self.remove_isolated_vertex(v)?;
        Ok(incident)
    }

    /// Identifies `set` to one new vertex (labelled last), deleting the edges
    /// inside it. Other vertices keep their relative order; edge ids survive.
    pub fn contract_set(&self, set: &[usize]) -> Result<(Digraph, Contraction)> {
        if set.is_empty() {
            return Err(precondition("contract-set needs a nonempty vertex subset"));
        }
        let mut inside = vec![false; self.n];
        for &v in set {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        let members: Vec<usize> = (0..self.n).filter(|&v| inside[v]).collect();
        let new_n = self.n - members.len() + 1;
        let new_vertex = new_n - 1;
        let mut vertex_map = vec![0; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if inside[v] {
                vertex_map[v] = new_vertex;
            } else {
                vertex_map[v] = next;
                next += 1;
            }
        }
        let mut out = Digraph {
            n: new_n,
            slots: vec![None; self.slots.len()],
            out_adj: vec![Vec::new(); new_n],
            in_adj: vec![Vec::new(); new_n],
            live: 0,
            name: self.name.clone(),
        };
        let mut crossing_edges = Vec::new();
        let mut removed_edges = Vec::new();
        for (e, u, v) in self.edges() {
            match (inside[u], inside[v]) {
                (true, true) => removed_edges.push(e),
                (a, b) => {
                    if a != b {
                        crossing_edges.push(e);
                    }
                    let (nu, nv) = (vertex_map[u], vertex_map[v]);
                    out.slots[e.0] = Some((nu, nv));
                    out.out_adj[nu].push(e);
                    out.in_adj[nv].push(e);
                    out.live += 1;
                }
            }
        }
        Ok((
            out,
            Contraction {
                members,
                new_vertex,
                vertex_map,
                crossing_edges,
                removed_edges,
            },
        ))
    }

    /// Applies one mutation and returns a fresh digraph.
    pub fn mutate(&self, op: &Mutation) -> Result<Mutated> {
        let mut g = self.clone();
        let mut added_edge = None;
        let mut contraction = None;
        match op {
            Mutation::AddEdge { tail, head } => added_edge = Some(g.add_edge(*tail, *head)?),
            Mutation::DeleteEdge(e) => {
                g.remove_edge(*e)?;
            }
            Mutation::DeleteVertex(v) => {
                g.remove_vertex(*v)?;
            }
            Mutation::ContractSet(set) => {
                let (h, c) = self.contract_set(set)?;
                g = h;
                contraction = Some(c);
            }
        }
        Ok(Mutated {
            digraph: g,
            added_edge,
            contraction,
        })
    }

    pub fn reversed(&self) -> Digraph {
        let mut g = Digraph::new(self.n);
        g.name = self.name.clone();
        g.slots = self.slots.iter().map(|s| s.map(|(u, v)| (v, u))).collect();
        g.out_adj = self.in_adj.clone();
        g.in_adj = self.out_adj.clone();
        g.live = self.live;
        g
    }

    /// Copy with edge ids renumbered `0..m` in ascending order of the old ids.
    pub fn compacted(&self) -> Digraph {
        let mut g = Digraph::new(self.n);
        g.name = self.name.clone();
        for (_, u, v) in self.edges() {
            g.add_edge(u, v).expect("endpoints are valid");
        }
        g
    }

    /// Number of edges leaving the marked set.
    pub fn out_cut(&self, inside: &[bool]) -> usize {
        self.edges().filter(|&(_, u, v)| inside[u] && !inside[v]).count()
    }

    pub fn in_cut(&self, inside: &[bool]) -> usize {
        self.edges().filter(|&(_, u, v)| !inside[u] && inside[v]).count()
    }

    pub(crate) fn mask(&self, subset: &[usize]) -> Result<Vec<bool>> {
        let mut inside = vec![false; self.n];
        for &v in subset {
            self.check_vertex(v)?;
            inside[v] = true;
        }
        Ok(inside)
    }

    /// Cut report for a nonempty proper subset.
    pub fn cut_report(&self, subset: &[usize]) -> Result<CutReport> {
        let inside = self.mask(subset)?;
        let size = inside.iter().filter(|&&b| b).count();
        if size == 0 || size == self.n {
            return Err(Error::DegenerateCut);
        }
        Ok(self.cut_report_of_mask(&inside))
    }

    pub(crate) fn cut_report_of_mask(&self, inside: &[bool]) -> CutReport {
        let out_degree = self.out_cut(inside);
        let in_degree = self.in_cut(inside);
        CutReport {
            subset: (0..self.n).filter(|&v| inside[v]).collect(),
            out_degree,
            in_degree,
            total: out_degree + in_degree,
        }
    }

    pub fn has_loops(&self) -> bool {
        self.edges().any(|(_, u, v)| u == v)
    }

    pub fn is_simple(&self) -> bool {
        if self.has_loops() {
            return false;
        }
        (0..self.n).all(|v| {
            let mut heads: Vec<usize> = self.out_adj[v].iter().map(|&e| self.slots[e.0].unwrap().1).collect();
            heads.sort_unstable();
            heads.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.n).all(|v| self.out_degree(v) == self.in_degree(v))
    }

    /// Weak component index of every vertex; components are numbered in
    /// order of their smallest vertex.
    pub fn weak_components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &e in self.out_adj[u].iter().chain(self.in_adj[u].iter()) {
                    let (a, b) = self.slots[e.0].unwrap();
                    let w = if a == u { b } else { a };
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Vertices in the weak component of `v`, ascending.
    pub fn component_of(&self, v: usize) -> Vec<usize> {
        let comp = self.weak_components();
        (0..self.n).filter(|&u| comp[u] == comp[v]).collect()
    }

    /// Balanced, and the non-isolated vertices lie in one weak component.
    pub fn is_eulerian(&self) -> bool {
        if !self.is_balanced() {
            return false;
        }
        let comp = self.weak_components();
        let mut seen = None;
        for (v, &cv) in comp.iter().enumerate() {
            if self.out_degree(v) + self.in_degree(v) == 0 {
                continue;
            }
            match seen {
                None => seen = Some(cv),
                Some(c) if c != cv => return false,
                _ => {}
            }
        }
        true
    }

    /// Minimum outdegree; for Eulerian digraphs this is the minimum degree.
    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    pub fn min_in_degree(&self) -> usize {
        (0..self.n).map(|v| self.in_degree(v)).min().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    pub fn parallel_classes(&self) -> Vec<ParallelClass> {
        let mut by_pair: BTreeMap<(usize, usize), Vec<EdgeId>> = BTreeMap::new();
        for (e, u, v) in self.edges() {
            by_pair.entry((u, v)).or_default().push(e);
        }
        by_pair
            .into_iter()
            .filter(|(_, es)| es.len() >= 2)
            .map(|((tail, head), edges)| ParallelClass { tail, head, edges })
            .collect()
    }

    pub fn digon_count(&self) -> usize {
        let mut count = 0;
        for u in 0..self.n {
            for v in self.out_neighbours(u) {
                if u < v && self.has_edge(v, u) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn classify(&self) -> Classification {
        Classification {
            simple: self.is_simple(),
            eulerian: self.is_eulerian(),
            digons: self.digon_count(),
            parallel_classes: self.parallel_classes(),
        }
    }

    /// Text edge-list: `DIGRAPH n m`, then one `tail head` line per edge in
    /// ascending id order.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("DIGRAPH {} {}\n", self.n, self.live);
        for (_, u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parses the text edge-list format. Blank lines and lines starting with
    /// `#` are ignored. Edge ids are assigned in line order starting at 0.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing `DIGRAPH n m` header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "DIGRAPH" {
            return Err(Error::Parse {
                line: hline,
                message: format!("expected `DIGRAPH n m`, found `{header}`"),
            });
        }
        let parse = |tok: &str, line: usize| -> Result<usize> {
            tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{tok}` is not a nonnegative integer"),
            })
        };
        let n = parse(fields[1], hline)?;
        let m = parse(fields[2], hline)?;
        let mut g = Digraph::new(n);
        for (line, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `tail head`, found `{l}`"),
                });
            }
            let (u, v) = (parse(toks[0], line)?, parse(toks[1], line)?);
            g.add_edge(u, v).map_err(|_| Error::Parse {
                line,
                message: format!("endpoint out of range for {n} vertices"),
            })?;
        }
        if g.edge_count() != m {
            return Err(Error::Parse {
                line: hline,
                message: format!("header announces {m} edges, found {}", g.edge_count()),
            });
        }
        Ok(g)
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.slots == other.slots
    }
}

impl Eq for Digraph {}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Digraph::from_edge_list(s)
    }
}
