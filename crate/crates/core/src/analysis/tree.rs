use std::collections::HashMap;

use crate::approx::EdgeColouring;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::matching::Matching;

use super::{mcl_of, violation, AnalysisError};

/// A rooted tree with a depth-first (preorder) numbering. Children are
/// visited in increasing vertex id, so the local index of a vertex is its
/// preorder index and the root is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    vertices: Vec<VertexId>,
    parent: Vec<Option<usize>>,
    parent_edge: Vec<Option<EdgeId>>,
    children: Vec<Vec<usize>>,
    local: HashMap<VertexId, usize>,
}

impl RootedTree {
    pub fn from_edges(g: &Graph, root: VertexId, edges: &[EdgeId]) -> Result<Self, AnalysisError> {
        let bad = AnalysisError::NotATree { root };
        let mut adj: HashMap<VertexId, Vec<(VertexId, EdgeId)>> = HashMap::new();
        for &e in edges {
            if e >= g.m() {
                return Err(bad);
            }
            let (u, v) = g.edge(e);
            adj.entry(u).or_default().push((v, e));
            adj.entry(v).or_default().push((u, e));
        }
        if root >= g.n() || (!edges.is_empty() && !adj.contains_key(&root)) {
            return Err(bad);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        let mut t = RootedTree {
            vertices: vec![root],
            parent: vec![None],
            parent_edge: vec![None],
            children: vec![Vec::new()],
            local: HashMap::from([(root, 0)]),
        };
        // explicit stack of (local index, next neighbour position)
        let mut stack = vec![(0usize, 0usize)];
        while let Some(&mut (x, ref mut pos)) = stack.last_mut() {
            let nbrs = adj.get(&t.vertices[x]).map(Vec::as_slice).unwrap_or(&[]);
            if *pos == nbrs.len() {
                stack.pop();
                continue;
            }
            let (y, e) = nbrs[*pos];
            *pos += 1;
            if Some(e) == t.parent_edge[x] {
                continue;
            }
            if t.local.contains_key(&y) {
                return Err(bad);
            }
            let i = t.vertices.len();
            t.vertices.push(y);
            t.parent.push(Some(x));
            t.parent_edge.push(Some(e));
            t.children.push(Vec::new());
            t.children[x].push(i);
            t.local.insert(y, i);
            stack.push((i, 0));
        }
        if t.vertices.len() != edges.len() + 1 {
            return Err(bad);
        }
        Ok(t)
    }

    pub fn root(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices in preorder.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.local.contains_key(&v)
    }

    /// Preorder index.
    pub fn dfs(&self, v: VertexId) -> Option<usize> {
        self.local.get(&v).copied()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[self.local[&v]].map(|p| self.vertices[p])
    }

    pub fn edges(&self) -> Vec<EdgeId> {
        self.parent_edge.iter().flatten().copied().collect()
    }

    /// Non-root vertices without children, in preorder.
    pub fn leaves(&self) -> Vec<VertexId> {
        (1..self.len())
            .filter(|&i| self.children[i].is_empty())
            .map(|i| self.vertices[i])
            .collect()
    }

    /// `u` strictly below `v` in the tree order: `u` comes later in preorder.
    pub fn precedes(&self, u: VertexId, v: VertexId) -> bool {
        match (self.dfs(u), self.dfs(v)) {
            (Some(a), Some(b)) => a > b,
            _ => false,
        }
    }

    fn ancestors(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![i];
        while let Some(p) = self.parent[i] {
            out.push(p);
            i = p;
        }
        out
    }

    /// The unique tree path from `u` to `v`, both included.
    pub fn path(&self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        let (a, b) = (self.dfs(u)?, self.dfs(v)?);
        let up_a = self.ancestors(a);
        let up_b = self.ancestors(b);
        let on_b: HashMap<usize, usize> = up_b.iter().enumerate().map(|(d, &x)| (x, d)).collect();
        let (da, depth_b) = up_a
            .iter()
            .enumerate()
            .find_map(|(d, x)| on_b.get(x).map(|&db| (d, db)))?;
        let mut out: Vec<VertexId> = up_a[..=da].iter().map(|&x| self.vertices[x]).collect();
        out.extend(up_b[..depth_b].iter().rev().map(|&x| self.vertices[x]));
        Some(out)
    }

    /// Tree edge joining `v` to its parent.
    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.parent_edge[self.local[&v]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePair {
    pub lower: VertexId,
    pub upper: VertexId,
    /// Tree path from `lower` to `upper`.
    pub path: Vec<VertexId>,
}

struct Work<'t> {
    t: &'t RootedTree,
    edge_colour: Vec<usize>,
    mcl: Vec<usize>,
    alive: Vec<bool>,
    out: Vec<TreePair>,
}

impl Work<'_> {
    fn kids(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.t.children[i]
            .iter()
            .copied()
            .filter(|&c| self.alive[c])
    }

    fn colours_at(&self, i: usize) -> Vec<usize> {
        let mut cs: Vec<usize> = self.kids(i).map(|c| self.edge_colour[c]).collect();
        if i != 0 {
            cs.push(self.edge_colour[i]);
        }
        cs.sort_unstable();
        cs.dedup();
        cs
    }

    fn subtree(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut at = 0;
        while at < out.len() {
            let x = out[at];
            out.extend(self.kids(x));
            at += 1;
        }
        out
    }

    fn kill_below(&mut self, i: usize) {
        for x in self.subtree(i) {
            self.alive[x] = false;
        }
    }

    fn emit(&mut self, lower: usize, upper: usize) {
        let path = self
            .t
            .path(self.t.vertices[lower], self.t.vertices[upper])
            .expect("both in tree");
        self.out.push(TreePair {
            lower: self.t.vertices[lower],
            upper: self.t.vertices[upper],
            path,
        });
    }

    /// Monochromatic case: every leaf among `tops`' descendants pairs with
    /// its nearest ancestor carrying the same matching colour, searching no
    /// higher than `stop`.
    fn mono_pairs(&mut self, starts: &[usize], stop: usize) -> Result<(), AnalysisError> {
        let mut leaves = Vec::new();
        for &s in starts {
            leaves.extend(
                self.subtree(s)
                    .into_iter()
                    .filter(|&x| self.kids(x).next().is_none()),
            );
        }
        leaves.sort_unstable();
        for u in leaves {
            let mut x = u;
            let target = loop {
                if x == stop {
                    break None;
                }
                x = self.t.parent[x].expect("stop is an ancestor");
                if self.mcl[x] == self.mcl[u] {
                    break Some(x);
                }
            };
            match target {
                Some(f) => self.emit(u, f),
                None => {
                    return Err(violation(
                        "tree_monochromatic_ancestor",
                        format!(
                            "no ancestor of leaf {} repeats its matching colour",
                            self.t.vertices[u]
                        ),
                    ))
                }
            }
        }
        Ok(())
    }

    fn height(&self) -> Vec<usize> {
        let mut h = vec![0; self.t.len()];
        for i in (0..self.t.len()).rev() {
            if self.alive[i] {
                h[i] = self.kids(i).map(|c| h[c] + 1).max().unwrap_or(0);
            }
        }
        h
    }

    fn run(&mut self) -> Result<(), AnalysisError> {
        loop {
            let live: Vec<usize> = (0..self.t.len()).filter(|&i| self.alive[i]).collect();
            if live.len() <= 1 {
                return Ok(());
            }
            let height = self.height();
            let bichromatic = live
                .iter()
                .copied()
                .filter(|&i| self.colours_at(i).len() > 1)
                .min_by_key(|&i| (height[i], i));
            let Some(v) = bichromatic else {
                let kids: Vec<usize> = self.kids(0).collect();
                return self.mono_pairs(&kids, 0);
            };
            let cs = self.colours_at(v);
            let a = self.mcl[v];
            if cs.len() != 2 || !cs.contains(&a) {
                return Err(violation(
                    "tree_bichromatic_vertex_colour",
                    format!(
                        "vertex {} sees tree colours {cs:?} with matching colour {a}",
                        self.t.vertices[v]
                    ),
                ));
            }
            let (a_kids, b_kids): (Vec<usize>, Vec<usize>) =
                self.kids(v).partition(|&c| self.edge_colour[c] == a);
            match (a_kids.is_empty(), b_kids.is_empty()) {
                (false, false) => {
                    self.mono_pairs(&a_kids, v)?;
                    for c in a_kids {
                        self.kill_below(c);
                    }
                }
                (false, true) => {
                    self.mono_pairs(&a_kids, v)?;
                    let mut below = v;
                    let mut w = self.t.parent[v].expect("bichromatic vertex has a parent");
                    while w != 0 && self.kids(w).count() < 2 {
                        below = w;
                        w = self.t.parent[w].expect("non-root");
                    }
                    self.kill_below(below);
                }
                (true, _) => {
                    let mut leaves: Vec<usize> = self
                        .subtree(v)
                        .into_iter()
                        .filter(|&x| x != v && self.kids(x).next().is_none())
                        .collect();
                    leaves.sort_unstable();
                    let w = leaves[0];
                    let b = self.edge_colour[b_kids[0]];
                    for &u in &leaves[1..] {
                        let path = self
                            .t
                            .path(self.t.vertices[u], self.t.vertices[w])
                            .expect("both in tree");
                        let g = path[1..]
                            .iter()
                            .map(|x| self.t.local[x])
                            .find(|&x| self.mcl[x] == b);
                        match g {
                            Some(g) => self.emit(u, g),
                            None => {
                                return Err(violation(
                                    "tree_leaf_repeat",
                                    format!(
                                        "leaf {} finds no repeat toward {}",
                                        self.t.vertices[u], self.t.vertices[w]
                                    ),
                                ))
                            }
                        }
                    }
                    for c in b_kids {
                        self.kill_below(c);
                    }
                }
            }
        }
    }
}

/// One repetition pair per leaf of a rooted tree in `G \ M` whose root and
/// leaves meet only tree edges of their own matching colour.
///
/// Follows the inductive construction: a monochromatic tree pairs each leaf
/// with its nearest same-coloured ancestor; otherwise a lowest vertex `v`
/// seeing two tree colours `a = mcl(v)` and `b` is resolved by one of three
/// cases and the remainder is processed again. When `v` has only
/// `b`-coloured children, the leaves below `v` pair toward the one earliest
/// in preorder, which keeps every pair ordered upward.
pub fn tree_repetition_pairs(
    g: &Graph,
    m: &Matching,
    col: &EdgeColouring,
    t: &RootedTree,
) -> Result<Vec<TreePair>, AnalysisError> {
    if t.len() < 2 {
        return Err(AnalysisError::NotATree { root: t.root() });
    }
    let mut edge_colour = vec![usize::MAX; t.len()];
    let mut mcl = Vec::with_capacity(t.len());
    for (i, slot) in edge_colour.iter_mut().enumerate() {
        mcl.push(mcl_of(m, col, t.vertices[i])?);
        if let Some(e) = t.parent_edge[i] {
            if e >= g.m() || m.contains(e) {
                return Err(AnalysisError::MatchingEdgeInTree { edge: e });
            }
            *slot = col.colour(e);
        }
    }
    let root_ok = t.children[0].iter().all(|&c| edge_colour[c] == mcl[0]);
    if !root_ok {
        return Err(AnalysisError::EndpointCondition { vertex: t.root() });
    }
    for i in 1..t.len() {
        if t.children[i].is_empty() && edge_colour[i] != mcl[i] {
            return Err(AnalysisError::EndpointCondition {
                vertex: t.vertices[i],
            });
        }
    }
    let mut w = Work {
        t,
        edge_colour,
        mcl,
        alive: vec![true; t.len()],
        out: Vec::new(),
    };
    w.run()?;
    w.out.sort_by_key(|p| t.local[&p.lower]);
    Ok(w.out)
}
