//! Maximum-cardinality matching in general graphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeId, EdgeSubset, Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("edge id {0} out of range")]
    UnknownEdgeId(EdgeId),
    #[error("vertex {0} is covered by two matching edges")]
    SharedVertex(VertexId),
    #[error("line {line}: malformed matching edge, expected \"u v\"")]
    Malformed { line: usize },
    #[error("line {line}: {u} {v} is not an edge of the graph")]
    NotAnEdge {
        line: usize,
        u: VertexId,
        v: VertexId,
    },
    #[error("line {line}: vertex {vertex} is already matched")]
    AlreadyMatched { line: usize, vertex: VertexId },
}

/// A set of pairwise vertex-disjoint edges of a parent graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: EdgeSubset,
    at: Vec<Option<EdgeId>>,
    mate: Vec<Option<VertexId>>,
}

impl Matching {
    pub fn empty(g: &Graph) -> Self {
        Matching {
            edges: EdgeSubset::empty(g.m()),
            at: vec![None; g.n()],
            mate: vec![None; g.n()],
        }
    }

    pub fn from_edge_ids<I>(g: &Graph, ids: I) -> Result<Self, MatchingError>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut mm = Matching::empty(g);
        for e in ids {
            if e >= g.m() {
                return Err(MatchingError::UnknownEdgeId(e));
            }
            mm.add(g, e).map_err(MatchingError::SharedVertex)?;
        }
        Ok(mm)
    }

    fn add(&mut self, g: &Graph, e: EdgeId) -> Result<(), VertexId> {
        let (u, v) = g.edge(e);
        if self.edges.contains(e) {
            return Ok(());
        }
        for w in [u, v] {
            if self.at[w].is_some() {
                return Err(w);
            }
        }
        self.edges.insert(e);
        self.at[u] = Some(e);
        self.at[v] = Some(e);
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &EdgeSubset {
        &self.edges
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().collect()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(e)
    }

    pub fn mate(&self, u: VertexId) -> Option<VertexId> {
        self.mate[u]
    }

    /// The matching edge covering `u`, if any.
    pub fn edge_at(&self, u: VertexId) -> Option<EdgeId> {
        self.at[u]
    }

    pub fn uncovered(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.is_none().then_some(u))
    }
}

const NONE: usize = usize::MAX;

struct Blossom<'g> {
    g: &'g Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'g> Blossom<'g> {
    fn new(g: &'g Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let mv = self.mate[v];
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mv]] = true;
            self.parent[v] = child;
            child = mv;
            v = self.parent[mv];
        }
    }

    /// Grows an alternating tree from `root`; returns the exposed endpoint of
    /// an augmenting path if one exists.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.n();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &(to, _) in self.g.neighbours(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Edmonds' blossom algorithm. Roots are tried in increasing vertex id and
/// neighbours in edge-id order, so the result is a deterministic function
/// of the graph.
pub fn maximum_matching(g: &Graph) -> Matching {
    let mut b = Blossom::new(g);
    for root in 0..g.n() {
        if b.mate[root] == NONE {
            if let Some(end) = b.find_path(root) {
                b.augment(end);
            }
        }
    }
    let ids = (0..g.n()).filter_map(|u| {
        let v = b.mate[u];
        (v != NONE && u < v).then(|| g.edge_between(u, v).expect("matched pair is an edge"))
    });
    let mut ids: Vec<EdgeId> = ids.collect();
    ids.sort_unstable();
    Matching::from_edge_ids(g, ids).expect("blossom output is a matching")
}

/// True iff `m` admits no augmenting path, checked by exhaustive search over
/// simple alternating paths. Exponential in the worst case; intended as an
/// oracle on small graphs.
pub fn is_maximum(g: &Graph, m: &Matching) -> bool {
    let exposed: Vec<VertexId> = m.uncovered().collect();
    if exposed.len() < 2 {
        return true;
    }
    let mut on_path = vec![false; g.n()];
    for &s in &exposed {
        on_path[s] = true;
        let found = alternating_search(g, m, s, s, &mut on_path);
        on_path[s] = false;
        if found {
            return false;
        }
    }
    true
}

/// From `v`, which was reached by a matching edge (or is the start), take a
/// non-matching edge; at an exposed vertex the path augments, otherwise
/// continue along the matching edge.
fn alternating_search(
    g: &Graph,
    m: &Matching,
    start: VertexId,
    v: VertexId,
    on_path: &mut [bool],
) -> bool {
    for &(w, e) in g.neighbours(v) {
        if on_path[w] || m.contains(e) {
            continue;
        }
        match m.mate(w) {
            None => {
                if w != start {
                    return true;
                }
            }
            Some(x) => {
                if on_path[x] {
                    continue;
                }
                on_path[w] = true;
                on_path[x] = true;
                let found = alternating_search(g, m, start, x, on_path);
                on_path[w] = false;
                on_path[x] = false;
                if found {
                    return true;
                }
            }
        }
    }
    false
}

pub fn is_perfect(g: &Graph, m: &Matching) -> bool {
    2 * m.size() == g.n()
}

/// Parses one `u v` line per matched edge, validating against `g`.
pub fn parse_matching(g: &Graph, text: &str) -> Result<Matching, MatchingError> {
    let mut mm = Matching::empty(g);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut it = body.split_whitespace().map(str::parse::<usize>);
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => (u, v),
            _ => return Err(MatchingError::Malformed { line }),
        };
        let in_range = u < g.n() && v < g.n();
        let e = in_range
            .then(|| g.edge_between(u, v))
            .flatten()
            .ok_or(MatchingError::NotAnEdge { line, u, v })?;
        mm.add(g, e)
            .map_err(|vertex| MatchingError::AlreadyMatched { line, vertex })?;
    }
    Ok(mm)
}

pub fn serialize_matching(g: &Graph, m: &Matching) -> String {
    let mut s = String::new();
    for e in m.edges().iter() {
        let (u, v) = g.edge(e);
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}
