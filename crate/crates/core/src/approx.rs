//! Edge colourings, the q-validity check, and the matching-based
//! approximation for maximum edge 2-colouring.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{components, EdgeId, EdgeSubset, Graph, VertexId};
use crate::matching::{maximum_matching, Matching};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColouringError {
    #[error("colouring covers {colouring} edges but the graph has {graph}")]
    SizeMismatch { colouring: usize, graph: usize },
    #[error("q must be positive")]
    ZeroQ,
    #[error("line {line}: malformed colouring entry, expected \"u v colour\"")]
    Malformed { line: usize },
    #[error("line {line}: {u} {v} is not an edge of the graph")]
    NotAnEdge {
        line: usize,
        u: VertexId,
        v: VertexId,
    },
    #[error("line {line}: edge {u} {v} coloured twice")]
    Repeated {
        line: usize,
        u: VertexId,
        v: VertexId,
    },
    #[error("edge {e} ({u} {v}) has no colour")]
    Missing { e: EdgeId, u: VertexId, v: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("graph has no edges")]
    EmptyGraph,
}

/// A colour per edge id. Colours are always canonical: `0..c` numbered by
/// first appearance in edge-id order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeColouring {
    colour: Vec<usize>,
    palette: usize,
}

impl EdgeColouring {
    /// Relabels arbitrary colour values canonically.
    pub fn new(raw: Vec<usize>) -> Self {
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        let colour: Vec<usize> = raw
            .into_iter()
            .map(|c| {
                let next = relabel.len();
                *relabel.entry(c).or_insert(next)
            })
            .collect();
        EdgeColouring {
            palette: relabel.len(),
            colour,
        }
    }

    pub fn colour(&self, e: EdgeId) -> usize {
        self.colour[e]
    }

    pub fn colours(&self) -> &[usize] {
        &self.colour
    }

    /// Number of distinct colours used.
    pub fn num_colours(&self) -> usize {
        self.palette
    }

    /// Number of edges covered.
    pub fn len(&self) -> usize {
        self.colour.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colour.is_empty()
    }

    /// Edges carrying colour `c`.
    pub fn class(&self, c: usize) -> EdgeSubset {
        EdgeSubset::from_ids(
            self.colour.len(),
            self.colour
                .iter()
                .enumerate()
                .filter_map(|(e, &x)| (x == c).then_some(e)),
        )
    }

    /// Distinct colours on the edges at `u`, ascending.
    pub fn incident_colours(&self, g: &Graph, u: VertexId) -> Vec<usize> {
        let mut cs: Vec<usize> = g
            .neighbours(u)
            .iter()
            .map(|&(_, e)| self.colour[e])
            .collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub vertex: VertexId,
    pub colours: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub q: usize,
    pub colours_used: usize,
    /// Distinct colours seen at each vertex.
    pub incident_colours: Vec<usize>,
    /// Lowest-id vertex that sees more than `q` colours.
    pub first_violation: Option<Violation>,
}

/// Checks that no vertex sees more than `q` distinct colours.
pub fn validate(
    g: &Graph,
    col: &EdgeColouring,
    q: usize,
) -> Result<ValidityReport, ColouringError> {
    if q == 0 {
        return Err(ColouringError::ZeroQ);
    }
    if col.len() != g.m() {
        return Err(ColouringError::SizeMismatch {
            colouring: col.len(),
            graph: g.m(),
        });
    }
    let mut counts = Vec::with_capacity(g.n());
    let mut first_violation = None;
    for u in 0..g.n() {
        let cs = col.incident_colours(g, u);
        if cs.len() > q && first_violation.is_none() {
            first_violation = Some(Violation {
                vertex: u,
                colours: cs.clone(),
            });
        }
        counts.push(cs.len());
    }
    Ok(ValidityReport {
        valid: first_violation.is_none(),
        q,
        colours_used: col.num_colours(),
        incident_colours: counts,
        first_violation,
    })
}

/// Result of the matching-based algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxColouring {
    pub colouring: EdgeColouring,
    pub matching: Matching,
    /// Number of edge-containing components of `G \ M`.
    pub h: usize,
}

impl ApproxColouring {
    pub fn colours(&self) -> usize {
        self.colouring.num_colours()
    }
}

/// Colours a maximum matching with pairwise distinct colours and gives each
/// edge-containing component of the remaining graph one fresh colour.
pub fn matching_based_colouring(g: &Graph) -> Result<ApproxColouring, ApproxError> {
    if g.m() == 0 {
        return Err(ApproxError::EmptyGraph);
    }
    let matching = maximum_matching(g);
    Ok(colour_with_matching(g, matching))
}

/// The same colouring scheme for a caller-supplied matching.
pub fn colour_with_matching(g: &Graph, matching: Matching) -> ApproxColouring {
    let mut raw = vec![usize::MAX; g.m()];
    for (c, e) in matching.edges().iter().enumerate() {
        raw[e] = c;
    }
    let base = matching.size();
    let rest = matching.edges().complement();
    let parts: Vec<_> = components(g, &rest)
        .into_iter()
        .filter(|c| c.has_edges())
        .collect();
    for (i, part) in parts.iter().enumerate() {
        for &e in &part.edges {
            raw[e] = base + i;
        }
    }
    ApproxColouring {
        colouring: EdgeColouring::new(raw),
        matching,
        h: parts.len(),
    }
}

/// Parses `u v colour` lines; every edge of `g` must appear exactly once.
pub fn parse_colouring(g: &Graph, text: &str) -> Result<EdgeColouring, ColouringError> {
    let mut raw: Vec<Option<usize>> = vec![None; g.m()];
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let body = l.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let nums: Result<Vec<usize>, _> = body.split_whitespace().map(str::parse).collect();
        let (u, v, c) = match nums.as_deref() {
            Ok([u, v, c]) => (*u, *v, *c),
            _ => return Err(ColouringError::Malformed { line }),
        };
        let e = (u < g.n() && v < g.n())
            .then(|| g.edge_between(u, v))
            .flatten()
            .ok_or(ColouringError::NotAnEdge { line, u, v })?;
        if raw[e].replace(c).is_some() {
            return Err(ColouringError::Repeated { line, u, v });
        }
    }
    let mut out = Vec::with_capacity(g.m());
    for (e, c) in raw.into_iter().enumerate() {
        let (u, v) = g.edge(e);
        out.push(c.ok_or(ColouringError::Missing { e, u, v })?);
    }
    Ok(EdgeColouring::new(out))
}

pub fn serialize_colouring(g: &Graph, col: &EdgeColouring) -> String {
    let mut s = String::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        writeln!(s, "{u} {v} {}", col.colour(e)).unwrap();
    }
    s
}
