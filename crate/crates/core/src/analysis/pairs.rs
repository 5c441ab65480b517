use std::collections::HashSet;

use serde::Serialize;

use crate::approx::EdgeColouring;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::matching::Matching;

use super::bounds::{lemma as check, LemmaCheck};
use super::cascade::RootedForestSeq;
use super::decomposition::ColourDecomposition;
use super::tree::tree_repetition_pairs;
use super::{mcl_of, AnalysisError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepetitionPair {
    pub lower: VertexId,
    pub upper: VertexId,
    /// Shared matching colour of `lower` and `upper`.
    pub colour: usize,
    pub forest: usize,
    pub tree: usize,
    /// Forest path from `lower` to `upper`.
    pub path: Vec<VertexId>,
    /// `lower upper` is a matching edge.
    pub matched: bool,
}

impl RepetitionPair {
    pub fn interior(&self) -> &[VertexId] {
        &self.path[1..self.path.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LowClass {
    /// Support of at least six vertices.
    L1,
    /// Support of exactly four vertices.
    L2,
    /// Any other support size; never expected.
    Other,
}

/// The pairs of one matching colour `j` and the quantities derived from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColourPairs {
    pub colour: usize,
    /// Indices into [`RepetitionPairs::pairs`].
    pub pairs: Vec<usize>,
    /// Subset of `pairs` joined by a matching edge.
    pub matched: Vec<usize>,
    pub lower: Vec<VertexId>,
    pub upper: Vec<VertexId>,
    /// `lower ∪ upper`, or the ends of one matching edge of this colour when
    /// the colour has no pairs.
    pub support: Vec<VertexId>,
    pub padded: bool,
    pub repetition_content: usize,
    pub high: bool,
    pub low_class: Option<LowClass>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepetitionPairs {
    pub pairs: Vec<RepetitionPair>,
    /// One entry per matching colour, ascending.
    pub by_colour: Vec<ColourPairs>,
}

impl RepetitionPairs {
    pub fn high(&self) -> impl Iterator<Item = &ColourPairs> {
        self.by_colour.iter().filter(|c| c.high)
    }

    pub fn low(&self) -> impl Iterator<Item = &ColourPairs> {
        self.by_colour.iter().filter(|c| !c.high)
    }

    /// Number of matched pairs over high colours.
    pub fn delta(&self) -> usize {
        self.high().map(|c| c.matched.len()).sum()
    }
}

/// `i(S; M) - 1` for an M-monochromatic set `S`, where `i(S; M)` counts the
/// matching edges meeting `S`.
pub fn repetition_content(
    s: &[VertexId],
    m: &Matching,
    col: &EdgeColouring,
) -> Result<usize, AnalysisError> {
    let mut edges: HashSet<EdgeId> = HashSet::new();
    let mut colour = None;
    for &v in s {
        let e = m.edge_at(v).ok_or(AnalysisError::Uncovered { vertex: v })?;
        let c = col.colour(e);
        if *colour.get_or_insert(c) != c {
            return Err(AnalysisError::NotMMonochromatic { vertex: v });
        }
        edges.insert(e);
    }
    edges.len().checked_sub(1).ok_or(AnalysisError::EmptySet)
}

/// Repetition pairs of every tree of every forest, in sequence order.
pub fn forest_pairs(
    g: &Graph,
    m: &Matching,
    col: &EdgeColouring,
    seq: &RootedForestSeq,
) -> Result<Vec<RepetitionPair>, AnalysisError> {
    let mut out = Vec::new();
    for (fi, f) in seq.forests.iter().enumerate() {
        for (ti, t) in f.trees.iter().enumerate() {
            for p in tree_repetition_pairs(g, m, col, t)? {
                out.push(RepetitionPair {
                    colour: mcl_of(m, col, p.lower)?,
                    matched: m.mate(p.lower) == Some(p.upper),
                    lower: p.lower,
                    upper: p.upper,
                    forest: fi,
                    tree: ti,
                    path: p.path,
                });
            }
        }
    }
    Ok(out)
}

/// Forest pairs grouped by matching colour, with supports, repetition
/// content and the high/low split.
pub fn collect_repetition_pairs(
    dec: &ColourDecomposition,
    seq: &RootedForestSeq,
) -> Result<RepetitionPairs, AnalysisError> {
    let (g, m, col) = (dec.graph, dec.matching, dec.colouring);
    let pairs = forest_pairs(g, m, col, seq)?;
    let mut by_colour = Vec::with_capacity(dec.matching_colours.len());
    for &j in &dec.matching_colours {
        let ids: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].colour == j).collect();
        let matched: Vec<usize> = ids.iter().copied().filter(|&i| pairs[i].matched).collect();
        let lower: Vec<VertexId> = ids.iter().map(|&i| pairs[i].lower).collect();
        let upper: Vec<VertexId> = ids.iter().map(|&i| pairs[i].upper).collect();
        let mut support: Vec<VertexId> = lower.iter().chain(&upper).copied().collect();
        support.sort_unstable();
        support.dedup();
        let padded = support.is_empty();
        if padded {
            let e = m
                .edges()
                .iter()
                .find(|&e| col.colour(e) == j)
                .expect("matching colour appears on the matching");
            let (u, v) = g.edge(e);
            support = vec![u.min(v), u.max(v)];
        }
        let rp = repetition_content(&support, m, col)?;
        let high = 2 * rp + matched.len() >= ids.len();
        let low_class = (!high).then_some(match support.len() {
            s if s >= 6 => LowClass::L1,
            4 => LowClass::L2,
            _ => LowClass::Other,
        });
        by_colour.push(ColourPairs {
            colour: j,
            pairs: ids,
            matched,
            lower,
            upper,
            support,
            padded,
            repetition_content: rp,
            high,
            low_class,
        });
    }
    Ok(RepetitionPairs { pairs, by_colour })
}

/// Checks properties (a) to (f) of a pair set straight from their
/// definitions, against the forests the pairs claim to live in.
pub fn check_pair_properties(
    g: &Graph,
    m: &Matching,
    col: &EdgeColouring,
    seq: &RootedForestSeq,
    pairs: &[RepetitionPair],
) -> Vec<LemmaCheck> {
    let mcl = |v: VertexId| m.edge_at(v).map(|e| col.colour(e));
    let mut distinct = Vec::new();
    let mut ordered = Vec::new();
    let mut same = Vec::new();
    let mut mono = Vec::new();
    let mut interior = Vec::new();
    let mut disjoint = Vec::new();

    let mut lowers = HashSet::new();
    for (i, p) in pairs.iter().enumerate() {
        if !lowers.insert(p.lower) {
            distinct.push(format!("vertex {} is the lower end of two pairs", p.lower));
        }
        let tree = seq.forests.get(p.forest).and_then(|f| f.trees.get(p.tree));
        let Some(t) = tree else {
            ordered.push(format!("pair {i} names a missing tree"));
            continue;
        };
        if !t.precedes(p.lower, p.upper) || t.path(p.lower, p.upper).as_ref() != Some(&p.path) {
            ordered.push(format!(
                "pair ({}, {}) is not ordered upward in its tree",
                p.lower, p.upper
            ));
        }
        let a = mcl(p.lower);
        if a.is_none() || a != mcl(p.upper) {
            same.push(format!(
                "pair ({}, {}) has different matching colours",
                p.lower, p.upper
            ));
        }
        for w in p.path.windows(2) {
            let step = g.edge_between(w[0], w[1]).filter(|&e| {
                (t.contains(w[0]) && t.parent(w[0]) == Some(w[1]) && t.parent_edge(w[0]) == Some(e))
                    || (t.contains(w[1])
                        && t.parent(w[1]) == Some(w[0])
                        && t.parent_edge(w[1]) == Some(e))
            });
            if step.map(|e| col.colour(e)) != a || a.is_none() {
                mono.push(format!(
                    "pair ({}, {}) path leaves colour {:?}",
                    p.lower, p.upper, a
                ));
                break;
            }
        }
        if let Some(z) = p.interior().iter().find(|&&z| mcl(z) == a) {
            interior.push(format!(
                "pair ({}, {}) interior vertex {z} repeats the colour",
                p.lower, p.upper
            ));
        }
    }
    let matched: Vec<&RepetitionPair> = pairs
        .iter()
        .filter(|p| m.mate(p.lower) == Some(p.upper))
        .collect();
    for (i, p) in matched.iter().enumerate() {
        let mine: HashSet<&VertexId> = p.interior().iter().collect();
        for q in &matched[i + 1..] {
            if let Some(z) = q.interior().iter().find(|z| mine.contains(z)) {
                disjoint.push(format!(
                    "matched pairs ({}, {}) and ({}, {}) share interior vertex {z}",
                    p.lower, p.upper, q.lower, q.upper
                ));
            }
        }
    }
    vec![
        check("pairs_distinct_lower", distinct),
        check("pairs_ordered", ordered),
        check("pairs_same_matching_colour", same),
        check("pair_paths_monochromatic", mono),
        check("pair_path_interiors_avoid_colour", interior),
        check("matched_pair_paths_disjoint", disjoint),
    ]
}
