//! Simple undirected graphs with stable edge ids, edge-subset views and the
//! edge-list text format.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing header line \"n m\"")]
    MissingHeader,
    #[error("line {line}: malformed header, expected \"n m\"")]
    MalformedHeader { line: usize },
    #[error("line {line}: malformed edge, expected \"u v\"")]
    MalformedEdge { line: usize },
    #[error("line {line}: {source}")]
    InvalidEdge {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("header declares {expected} edges but {found} were listed")]
    EdgeCount { expected: usize, found: usize },
}

/// An immutable simple undirected graph on vertices `0..n`.
///
/// Edges keep the orientation they were given in, so that serialization
/// reproduces the input exactly; all queries treat them as unordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    index: HashMap<(VertexId, VertexId), EdgeId>,
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            index: HashMap::new(),
        }
    }

    /// Builds a graph whose edge ids follow the iteration order of `edges`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.push_edge(u, v)?;
        }
        Ok(g)
    }

    fn push_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let id = self.edges.len();
        if self.index.insert(key(u, v), id).is_some() {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.edges.push((u, v));
        self.adjacency[u].push((v, id));
        self.adjacency[v].push((u, id));
        Ok(id)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// `(neighbour, edge id)` pairs in edge-id order.
    pub fn neighbours(&self, u: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: VertexId) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.index.get(&key(u, v)).copied()
    }

    /// The endpoint of `e` that is not `u`.
    pub fn other_end(&self, e: EdgeId, u: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == u {
            b
        } else {
            debug_assert_eq!(b, u);
            a
        }
    }
}

/// A set of edges of some parent graph, stored as a membership flag per edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSubset {
    member: Vec<bool>,
}

impl EdgeSubset {
    pub fn empty(m: usize) -> Self {
        EdgeSubset {
            member: vec![false; m],
        }
    }

    pub fn full(m: usize) -> Self {
        EdgeSubset {
            member: vec![true; m],
        }
    }

    /// Panics if an id is not below `m`.
    pub fn from_ids<I: IntoIterator<Item = EdgeId>>(m: usize, ids: I) -> Self {
        let mut s = EdgeSubset::empty(m);
        for e in ids {
            s.insert(e);
        }
        s
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.member[e] = true;
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.member.get(e).copied().unwrap_or(false)
    }

    /// Number of edges in the parent graph.
    pub fn universe(&self) -> usize {
        self.member.len()
    }

    pub fn len(&self) -> usize {
        self.member.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&b| b)
    }

    pub fn complement(&self) -> Self {
        EdgeSubset {
            member: self.member.iter().map(|&b| !b).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter_map(|(e, &b)| b.then_some(e))
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// A connected component of a spanning subgraph `(V(g), keep)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Sorted ascending.
    pub vertices: Vec<VertexId>,
    /// Sorted ascending.
    pub edges: Vec<EdgeId>,
}

impl Component {
    pub fn has_edges(&self) -> bool {
        !self.edges.is_empty()
    }

    pub fn min_vertex(&self) -> VertexId {
        self.vertices[0]
    }
}

/// Connected components of the subgraph with all vertices of `g` and the
/// edges in `keep`, ordered by minimum vertex id. Isolated vertices form
/// edgeless components.
pub fn components(g: &Graph, keep: &EdgeSubset) -> Vec<Component> {
    let mut dsu = DisjointSet::new(g.n());
    for e in keep.iter() {
        let (u, v) = g.edge(e);
        dsu.union(u, v);
    }
    let mut slot: Vec<Option<usize>> = vec![None; g.n()];
    let mut out: Vec<Component> = Vec::new();
    for u in 0..g.n() {
        let r = dsu.find(u);
        let idx = *slot[r].get_or_insert_with(|| {
            out.push(Component {
                vertices: Vec::new(),
                edges: Vec::new(),
            });
            out.len() - 1
        });
        out[idx].vertices.push(u);
    }
    for e in keep.iter() {
        let r = dsu.find(g.edge(e).0);
        let idx = slot[r].expect("endpoint has a component");
        out[idx].edges.push(e);
    }
    out
}

/// True iff `g` has no three mutually adjacent vertices.
pub fn is_triangle_free(g: &Graph) -> bool {
    let mut mark = vec![false; g.n()];
    for &(u, v) in g.edges() {
        for &(w, _) in g.neighbours(u) {
            mark[w] = true;
        }
        let hit = g.neighbours(v).iter().any(|&(w, _)| mark[w]);
        for &(w, _) in g.neighbours(u) {
            mark[w] = false;
        }
        if hit {
            return false;
        }
    }
    true
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn two_numbers(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Parses the edge-list format: a header line `n m` followed by `m` lines
/// `u v`. Lines starting with `#` are comments. Edge ids follow file order.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let (n, m) = two_numbers(header).ok_or(ParseError::MalformedHeader { line: hline })?;
    let mut g = Graph::empty(n);
    for (line, body) in lines {
        let (u, v) = two_numbers(body).ok_or(ParseError::MalformedEdge { line })?;
        g.push_edge(u, v)
            .map_err(|source| ParseError::InvalidEdge { line, source })?;
    }
    if g.m() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: g.m(),
        });
    }
    Ok(g)
}

/// Inverse of [`parse_graph`]: header then edges in id order.
pub fn serialize_graph(g: &Graph) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}
