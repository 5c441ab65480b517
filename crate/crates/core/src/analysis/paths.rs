use crate::approx::EdgeColouring;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::matching::Matching;

use super::{mcl_of, violation, AnalysisError};

/// Edges of `path` in `G \ M`, checking each step.
fn path_edges(g: &Graph, m: &Matching, path: &[VertexId]) -> Result<Vec<EdgeId>, AnalysisError> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::with_capacity(path.len().saturating_sub(1));
    for (i, &v) in path.iter().enumerate() {
        if v >= g.n() || std::mem::replace(&mut seen[v], true) {
            return Err(AnalysisError::NotAPath { index: i });
        }
        if i > 0 {
            match g.edge_between(path[i - 1], v) {
                Some(e) if !m.contains(e) => out.push(e),
                _ => return Err(AnalysisError::NotAPath { index: i }),
            }
        }
    }
    Ok(out)
}

/// Two positions `i < j` on a path of `G \ M` whose vertices carry the same
/// matching colour. The path must start and end on edges coloured with the
/// endpoint's matching colour.
///
/// Walks the maximal monochromatic prefix from the current start; if its
/// far end repeats the start's matching colour that is the answer,
/// otherwise the far end becomes the new start.
pub fn path_repetition(
    g: &Graph,
    m: &Matching,
    col: &EdgeColouring,
    path: &[VertexId],
) -> Result<(usize, usize), AnalysisError> {
    if path.len() < 2 {
        return Err(AnalysisError::PathTooShort);
    }
    let edges = path_edges(g, m, path)?;
    let k = edges.len();
    let mcl = |i: usize| mcl_of(m, col, path[i]);
    if mcl(0)? != col.colour(edges[0]) {
        return Err(AnalysisError::EndpointCondition { vertex: path[0] });
    }
    if mcl(k)? != col.colour(edges[k - 1]) {
        return Err(AnalysisError::EndpointCondition { vertex: path[k] });
    }

    let mut s = 0;
    loop {
        let a = col.colour(edges[s]);
        if a != mcl(s)? {
            return Err(violation(
                "path_restart_colour",
                format!("edge leaving vertex {} is not its matching colour", path[s]),
            ));
        }
        let mut j = s + 1;
        while j < k && col.colour(edges[j]) == a {
            j += 1;
        }
        if mcl(j)? == a {
            return Ok((s, j));
        }
        if j == k {
            unreachable!("endpoint condition forces a repeat at the last vertex");
        }
        s = j;
    }
}
