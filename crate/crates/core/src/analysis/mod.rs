//! Structural analysis of 2-colourings against a perfect matching: colour
//! decomposition, repetition pairs on paths, trees and cascading forests,
//! repetition content, and the bound chain behind the 5/3 and 8/5 ratios.

mod bounds;
mod cascade;
mod decomposition;
mod pairs;
mod paths;
mod tree;

pub use bounds::{analyze, verify_bound_chain, BoundReport, InequalityCheck, LemmaCheck};
pub use cascade::{build_cascading_sequence, Forest, RootedForestSeq};
pub use decomposition::{decompose, ColourDecomposition, NonMatchingComponent};
pub use pairs::{
    check_pair_properties, collect_repetition_pairs, repetition_content, ColourPairs, LowClass,
    RepetitionPair, RepetitionPairs,
};
pub use paths::path_repetition;
pub use tree::{tree_repetition_pairs, RootedTree, TreePair};

use thiserror::Error;

use crate::approx::{ColouringError, EdgeColouring};
use crate::graph::{EdgeId, VertexId};
use crate::matching::Matching;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Colouring(#[from] ColouringError),
    #[error("vertex {vertex} sees more than two colours")]
    NotTwoColouring { vertex: VertexId },
    #[error("matching is not perfect: vertex {vertex} is exposed")]
    ImperfectMatching { vertex: VertexId },
    #[error("colour class {colour} is disconnected")]
    DisconnectedColourClass { colour: usize },
    #[error("non-matching colour {colour} spans several components of G \\ M")]
    ClassSpansComponents { colour: usize },
    #[error("path needs at least two vertices")]
    PathTooShort,
    #[error("path step {index} is not an edge of G \\ M")]
    NotAPath { index: usize },
    #[error("endpoint condition fails at vertex {vertex}")]
    EndpointCondition { vertex: VertexId },
    #[error("edges do not form a tree rooted at {root}")]
    NotATree { root: VertexId },
    #[error("tree edge {edge} lies in the matching")]
    MatchingEdgeInTree { edge: EdgeId },
    #[error("vertex {vertex} has no matching edge")]
    Uncovered { vertex: VertexId },
    #[error("vertex set is not M-monochromatic at vertex {vertex}")]
    NotMMonochromatic { vertex: VertexId },
    #[error("vertex set is empty")]
    EmptySet,
    #[error("{check} failed: {detail}")]
    LemmaViolation { check: &'static str, detail: String },
}

pub(crate) fn violation(check: &'static str, detail: impl Into<String>) -> AnalysisError {
    AnalysisError::LemmaViolation {
        check,
        detail: detail.into(),
    }
}

/// Matching colour at `v`.
pub(crate) fn mcl_of(
    m: &Matching,
    col: &EdgeColouring,
    v: VertexId,
) -> Result<usize, AnalysisError> {
    m.edge_at(v)
        .map(|e| col.colour(e))
        .ok_or(AnalysisError::Uncovered { vertex: v })
}
