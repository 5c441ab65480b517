use crate::approx::{validate, EdgeColouring};
use crate::graph::{components, Component, EdgeId, EdgeSubset, Graph, VertexId};
use crate::matching::Matching;

use super::{violation, AnalysisError};

/// A connected subgraph spanned by one non-matching colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonMatchingComponent {
    pub colour: usize,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// Index into `gm_components`.
    pub gm_component: usize,
}

#[derive(Debug, Clone)]
pub struct ColourDecomposition<'a> {
    pub graph: &'a Graph,
    pub matching: &'a Matching,
    pub colouring: &'a EdgeColouring,
    pub matching_colours: Vec<usize>,
    pub non_matching_colours: Vec<usize>,
    /// Edges of each colour, indexed by colour.
    pub colour_classes: Vec<EdgeSubset>,
    /// Edge-containing components of `G \ M`, ordered by minimum vertex.
    pub gm_components: Vec<Component>,
    /// Number of non-matching colour components inside each `gm_components[i]`.
    pub k: Vec<usize>,
    /// Matching colour per vertex.
    pub mcl: Vec<usize>,
    /// Ordered by `gm_component`, then by minimum vertex.
    pub nm_components: Vec<NonMatchingComponent>,
    pub nm_of_vertex: Vec<Option<usize>>,
    pub gm_of_vertex: Vec<Option<usize>>,
}

impl ColourDecomposition<'_> {
    pub fn h(&self) -> usize {
        self.gm_components.len()
    }

    pub fn total_colours(&self) -> usize {
        self.colouring.num_colours()
    }

    pub fn is_matching_colour(&self, c: usize) -> bool {
        self.matching_colours.binary_search(&c).is_ok()
    }

    /// Indices into `nm_components` lying in `gm_components[ci]`.
    pub fn nm_in(&self, ci: usize) -> Vec<usize> {
        (0..self.nm_components.len())
            .filter(|&i| self.nm_components[i].gm_component == ci)
            .collect()
    }
}

/// Splits the palette into matching and non-matching colours and locates
/// every non-matching colour class inside the components of `G \ M`.
///
/// Refuses colourings that are not 2-colourings, imperfect matchings, and
/// colourings with a disconnected colour class.
pub fn decompose<'a>(
    g: &'a Graph,
    m: &'a Matching,
    col: &'a EdgeColouring,
) -> Result<ColourDecomposition<'a>, AnalysisError> {
    let report = validate(g, col, 2)?;
    if let Some(v) = report.first_violation {
        return Err(AnalysisError::NotTwoColouring { vertex: v.vertex });
    }
    if let Some(v) = m.uncovered().next() {
        return Err(AnalysisError::ImperfectMatching { vertex: v });
    }

    let c = col.num_colours();
    let classes: Vec<EdgeSubset> = (0..c).map(|i| col.class(i)).collect();
    for (i, class) in classes.iter().enumerate() {
        let parts = components(g, class)
            .into_iter()
            .filter(|p| p.has_edges())
            .count();
        if parts > 1 {
            return Err(AnalysisError::DisconnectedColourClass { colour: i });
        }
    }

    let mut on_matching = vec![false; c];
    for e in m.edges().iter() {
        on_matching[col.colour(e)] = true;
    }
    let matching_colours: Vec<usize> = (0..c).filter(|&i| on_matching[i]).collect();
    let non_matching_colours: Vec<usize> = (0..c).filter(|&i| !on_matching[i]).collect();
    let mcl: Vec<usize> = (0..g.n())
        .map(|v| col.colour(m.edge_at(v).expect("perfect matching")))
        .collect();

    let gm_components: Vec<Component> = components(g, &m.edges().complement())
        .into_iter()
        .filter(|p| p.has_edges())
        .collect();
    let mut gm_of_vertex = vec![None; g.n()];
    let mut gm_of_edge = vec![usize::MAX; g.m()];
    for (i, p) in gm_components.iter().enumerate() {
        for &v in &p.vertices {
            gm_of_vertex[v] = Some(i);
        }
        for &e in &p.edges {
            gm_of_edge[e] = i;
        }
    }

    let mut nm_components = Vec::with_capacity(non_matching_colours.len());
    for &colour in &non_matching_colours {
        let edges: Vec<EdgeId> = classes[colour].iter().collect();
        let home = gm_of_edge[edges[0]];
        if edges.iter().any(|&e| gm_of_edge[e] != home) {
            return Err(AnalysisError::ClassSpansComponents { colour });
        }
        let mut vertices: Vec<VertexId> = edges
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.edge(e);
                [u, v]
            })
            .collect();
        vertices.sort_unstable();
        vertices.dedup();
        nm_components.push(NonMatchingComponent {
            colour,
            vertices,
            edges,
            gm_component: home,
        });
    }
    nm_components.sort_by_key(|h| (h.gm_component, h.vertices[0]));

    let mut k = vec![0; gm_components.len()];
    let mut nm_of_vertex = vec![None; g.n()];
    for (i, h) in nm_components.iter().enumerate() {
        k[h.gm_component] += 1;
        for &v in &h.vertices {
            if let Some(j) = nm_of_vertex[v].replace(i) {
                return Err(violation(
                    "nm_components_disjoint",
                    format!(
                        "vertex {v} lies in colours {} and {}",
                        nm_components[j].colour, h.colour
                    ),
                ));
            }
        }
    }

    Ok(ColourDecomposition {
        graph: g,
        matching: m,
        colouring: col,
        matching_colours,
        non_matching_colours,
        colour_classes: classes,
        gm_components,
        k,
        mcl,
        nm_components,
        nm_of_vertex,
        gm_of_vertex,
    })
}
