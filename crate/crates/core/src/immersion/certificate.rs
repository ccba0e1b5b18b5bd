use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Digraph, EdgeId};
use crate::error::{precondition, Result};
use crate::splitting::simplify_walk;

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// A witness that `pattern` is (weakly) immersed in a host digraph: an
/// injective vertex map and one host path per pattern edge, pairwise
/// edge-disjoint. Paths may run through terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImmersionCertificate {
    pub pattern: Digraph,
    /// `terminals[a]` is the host vertex of pattern vertex `a`.
    pub terminals: Vec<usize>,
    /// Host edge ids keyed by pattern edge id.
    pub paths: BTreeMap<EdgeId, Vec<EdgeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("pattern has {pattern} vertices but {terminals} terminals are given")]
    TerminalCount { pattern: usize, terminals: usize },
    #[error("terminal {0} is not a host vertex")]
    UnknownTerminal(usize),
    #[error("host vertex {0} is used by two pattern vertices")]
    TerminalReused(usize),
    #[error("no path for pattern edge {0}")]
    MissingPath(EdgeId),
    #[error("path given for {0}, which is not a pattern edge")]
    ExtraPath(EdgeId),
    #[error("path for pattern edge {0} is empty")]
    EmptyPath(EdgeId),
    #[error("path for pattern edge {pattern_edge} uses unknown host edge {edge}")]
    UnknownEdge { pattern_edge: EdgeId, edge: EdgeId },
    #[error("path for pattern edge {pattern_edge} starts at {found}, expected {expected}")]
    WrongStart {
        pattern_edge: EdgeId,
        expected: usize,
        found: usize,
    },
    #[error("path for pattern edge {pattern_edge} breaks at host edge {edge}")]
    Discontinuous { pattern_edge: EdgeId, edge: EdgeId },
    #[error("path for pattern edge {pattern_edge} ends at {found}, expected {expected}")]
    WrongEnd {
        pattern_edge: EdgeId,
        expected: usize,
        found: usize,
    },
    #[error("path for pattern edge {pattern_edge} revisits vertex {vertex}")]
    NotSimple { pattern_edge: EdgeId, vertex: usize },
    #[error("host edge {edge} is used by pattern edges {first} and {second}")]
    EdgeReused {
        edge: EdgeId,
        first: EdgeId,
        second: EdgeId,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Valid,
    Invalid(Violation),
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verification::Valid)
    }
}

/// Checks every certificate condition against `d`, reporting the first failure.
pub fn verify_certificate(d: &Digraph, c: &ImmersionCertificate) -> Verification {
    match check(d, c) {
        Ok(()) => Verification::Valid,
        Err(v) => Verification::Invalid(v),
    }
}

fn check(d: &Digraph, c: &ImmersionCertificate) -> std::result::Result<(), Violation> {
    let h = &c.pattern;
    if c.terminals.len() != h.vertex_count() {
        return Err(Violation::TerminalCount {
            pattern: h.vertex_count(),
            terminals: c.terminals.len(),
        });
    }
    let mut seen = HashSet::new();
    for &x in &c.terminals {
        if x >= d.vertex_count() {
            return Err(Violation::UnknownTerminal(x));
        }
        if !seen.insert(x) {
            return Err(Violation::TerminalReused(x));
        }
    }
    for &pe in c.paths.keys() {
        if !h.contains_edge(pe) {
            return Err(Violation::ExtraPath(pe));
        }
    }
    let mut owner: HashMap<EdgeId, EdgeId> = HashMap::new();
    for (pe, a, b) in h.edges() {
        let path = c.paths.get(&pe).ok_or(Violation::MissingPath(pe))?;
        if path.is_empty() {
            return Err(Violation::EmptyPath(pe));
        }
        let (start, end) = (c.terminals[a], c.terminals[b]);
        let mut visited = HashSet::from([start]);
        let mut at = start;
        for (i, &e) in path.iter().enumerate() {
            let (u, v) = d.endpoints(e).ok_or(Violation::UnknownEdge {
                pattern_edge: pe,
                edge: e,
            })?;
            if u != at {
                return Err(if i == 0 {
                    Violation::WrongStart {
                        pattern_edge: pe,
                        expected: start,
                        found: u,
                    }
                } else {
                    Violation::Discontinuous {
                        pattern_edge: pe,
                        edge: e,
                    }
                });
            }
            if let Some(first) = owner.insert(e, pe) {
                return Err(Violation::EdgeReused {
                    edge: e,
                    first,
                    second: pe,
                });
            }
            let closes_loop = i + 1 == path.len() && v == start && a == b;
            if !visited.insert(v) && !closes_loop {
                return Err(Violation::NotSimple {
                    pattern_edge: pe,
                    vertex: v,
                });
            }
            at = v;
        }
        if at != end {
            return Err(Violation::WrongEnd {
                pattern_edge: pe,
                expected: end,
                found: at,
            });
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CertificateJson {
    schema_version: u32,
    pattern: String,
    terminals: Vec<usize>,
    paths: BTreeMap<usize, Vec<EdgeId>>,
}

impl ImmersionCertificate {
    pub fn new(pattern: Digraph, terminals: Vec<usize>) -> Self {
        Self {
            pattern,
            terminals,
            paths: BTreeMap::new(),
        }
    }

    /// Total number of host edges used.
    pub fn edges_used(&self) -> usize {
        self.paths.values().map(Vec::len).sum()
    }

    /// Replaces each path by a simple path with the same endpoints that uses
    /// a subset of its edges.
    pub fn simplify_paths(&mut self, host: &Digraph) -> Result<()> {
        for (pe, path) in self.paths.iter_mut() {
            let (a, _) = self
                .pattern
                .endpoints(*pe)
                .ok_or_else(|| precondition(format!("{pe} is not a pattern edge")))?;
            *path = simplify_walk(host, self.terminals[a], path)?;
        }
        Ok(())
    }

    /// JSON form. The pattern is embedded as edge-list text with compact
    /// edge ids, and path keys are renumbered to match.
    pub fn to_json(&self) -> String {
        let rank: HashMap<EdgeId, usize> = self
            .pattern
            .edge_ids()
            .into_iter()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();
        let wire = CertificateJson {
            schema_version: CERTIFICATE_SCHEMA_VERSION,
            pattern: self.pattern.to_edge_list(),
            terminals: self.terminals.clone(),
            paths: self
                .paths
                .iter()
                .map(|(pe, p)| (rank.get(pe).copied().unwrap_or(pe.0), p.clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: CertificateJson =
            serde_json::from_str(text).map_err(|e| precondition(format!("bad certificate JSON: {e}")))?;
        if wire.schema_version != CERTIFICATE_SCHEMA_VERSION {
            return Err(precondition(format!(
                "unsupported certificate schema version {}",
                wire.schema_version
            )));
        }
        Ok(Self {
            pattern: Digraph::from_edge_list(&wire.pattern)?,
            terminals: wire.terminals,
            paths: wire.paths.into_iter().map(|(k, p)| (EdgeId(k), p)).collect(),
        })
    }
}
