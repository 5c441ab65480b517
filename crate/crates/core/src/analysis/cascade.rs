use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::graph::{EdgeId, VertexId};

use super::decomposition::ColourDecomposition;
use super::tree::RootedTree;
use super::{violation, AnalysisError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    /// Index of the component of `G \ M` the forest lives in.
    pub component: usize,
    pub trees: Vec<RootedTree>,
}

impl Forest {
    pub fn roots(&self) -> Vec<VertexId> {
        self.trees.iter().map(RootedTree::root).collect()
    }

    pub fn leaves(&self) -> Vec<VertexId> {
        self.trees.iter().flat_map(RootedTree::leaves).collect()
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        self.trees
            .iter()
            .flat_map(|t| t.vertices().to_vec())
            .collect()
    }

    /// Vertices that are neither a root nor a leaf.
    pub fn internal(&self) -> Vec<VertexId> {
        let ends: HashSet<VertexId> = self.roots().into_iter().chain(self.leaves()).collect();
        self.vertices()
            .into_iter()
            .filter(|v| !ends.contains(v))
            .collect()
    }
}

/// Forests over all components of `G \ M`, in construction order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootedForestSeq {
    pub forests: Vec<Forest>,
}

impl RootedForestSeq {
    /// A sequence holding one tree.
    pub fn single(tree: RootedTree) -> Self {
        RootedForestSeq {
            forests: vec![Forest {
                component: 0,
                trees: vec![tree],
            }],
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.forests.iter().map(|f| f.leaves().len()).sum()
    }

    /// Internal vertices over all forests, ascending.
    pub fn internal_vertices(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.forests.iter().flat_map(Forest::internal).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn memberships(&self) -> HashMap<VertexId, Vec<(usize, usize)>> {
        let mut at: HashMap<VertexId, Vec<(usize, usize)>> = HashMap::new();
        for (fi, f) in self.forests.iter().enumerate() {
            for (ti, t) in f.trees.iter().enumerate() {
                for &v in t.vertices() {
                    at.entry(v).or_default().push((fi, ti));
                }
            }
        }
        at
    }

    /// Every `y` with `x ⪯ y`, closing the per-tree orders over shared
    /// root/leaf vertices.
    pub fn upper_set(&self, x: VertexId) -> HashSet<VertexId> {
        let at = self.memberships();
        let mut seen = HashSet::from([x]);
        let mut queue = VecDeque::from([x]);
        while let Some(z) = queue.pop_front() {
            for &(fi, ti) in at.get(&z).map(Vec::as_slice).unwrap_or(&[]) {
                let t = &self.forests[fi].trees[ti];
                let dz = t.dfs(z).expect("member");
                for &w in &t.vertices()[..dz] {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
        }
        seen
    }

    /// `x ≺ y` in the transitive order of the sequence.
    pub fn precedes(&self, x: VertexId, y: VertexId) -> bool {
        x != y && self.upper_set(x).contains(&y)
    }
}

/// Grows, inside every component of `G \ M`, forests linking its
/// non-matching colour components.
///
/// The first forest is rooted in the component containing the smallest
/// vertex id. Each forest is a breadth-first search started simultaneously
/// from every allowed root: vertices of already-visited colour components
/// that no earlier forest used, plus the leaves of the previous forest. It
/// passes only through fresh vertices outside all colour components, and
/// the first vertex reached in each unvisited component becomes a leaf.
/// Branches reaching no leaf are dropped.
pub fn build_cascading_sequence(
    dec: &ColourDecomposition,
) -> Result<RootedForestSeq, AnalysisError> {
    let g = dec.graph;
    let mut seq = RootedForestSeq::default();
    let mut used = vec![false; g.n()];
    let mut visited = vec![false; dec.nm_components.len()];
    for ci in 0..dec.gm_components.len() {
        let hs = dec.nm_in(ci);
        if hs.len() < 2 {
            continue;
        }
        visited[hs[0]] = true;
        let mut prev_leaves: HashSet<VertexId> = HashSet::new();
        while hs.iter().any(|&h| !visited[h]) {
            let mut roots: Vec<VertexId> = hs
                .iter()
                .filter(|&&h| visited[h])
                .flat_map(|&h| dec.nm_components[h].vertices.iter().copied())
                .filter(|v| !used[*v] || prev_leaves.contains(v))
                .collect();
            roots.sort_unstable();

            let mut parent: HashMap<VertexId, (VertexId, EdgeId)> = HashMap::new();
            let mut reached: HashSet<VertexId> = roots.iter().copied().collect();
            let mut claimed: HashSet<usize> = HashSet::new();
            let mut leaves = Vec::new();
            let mut queue: VecDeque<VertexId> = roots.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                let mut nbrs = g.neighbours(x).to_vec();
                nbrs.sort_unstable();
                for (y, e) in nbrs {
                    if dec.matching.contains(e) || used[y] || reached.contains(&y) {
                        continue;
                    }
                    match dec.nm_of_vertex[y] {
                        Some(h) => {
                            if !visited[h] && claimed.insert(h) {
                                parent.insert(y, (x, e));
                                reached.insert(y);
                                leaves.push(y);
                            }
                        }
                        None => {
                            parent.insert(y, (x, e));
                            reached.insert(y);
                            queue.push_back(y);
                        }
                    }
                }
            }
            if leaves.is_empty() {
                return Err(violation(
                    "cascading",
                    format!("component {ci}: no forest reaches the remaining colour components"),
                ));
            }

            let mut by_root: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
            let mut kept: HashSet<EdgeId> = HashSet::new();
            for &leaf in &leaves {
                let mut x = leaf;
                let mut chain = Vec::new();
                while let Some(&(p, e)) = parent.get(&x) {
                    chain.push(e);
                    x = p;
                }
                by_root
                    .entry(x)
                    .or_default()
                    .extend(chain.into_iter().filter(|&e| kept.insert(e)));
            }
            let mut trees = Vec::with_capacity(by_root.len());
            for (root, edges) in by_root {
                trees.push(RootedTree::from_edges(g, root, &edges)?);
            }
            let forest = Forest {
                component: ci,
                trees,
            };
            for v in forest.vertices() {
                used[v] = true;
            }
            for &h in &claimed {
                visited[h] = true;
            }
            prev_leaves = leaves.into_iter().collect();
            seq.forests.push(forest);
        }
    }
    Ok(seq)
}
