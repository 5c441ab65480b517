//! Exact maximum edge q-colouring by branch and bound, plus brute-force
//! oracles and the star anti-Ramsey number.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::approx::{colour_with_matching, EdgeColouring};
use crate::graph::{components, EdgeSubset, Graph};
use crate::matching::maximum_matching;

/// Edge limit for [`oracle_optimal`].
pub const ORACLE_MAX_EDGES: usize = 12;
/// Edge limit for [`direct_anti_ramsey_star`].
pub const DIRECT_AR_MAX_EDGES: usize = 8;
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("q must be positive")]
    ZeroQ,
    #[error("{m} edges exceeds the limit of {limit} for exhaustive enumeration")]
    TooManyEdges { m: usize, limit: usize },
    #[error("star pattern needs at least 2 leaves, got {0}")]
    StarTooSmall(usize),
    #[error("pattern absent: no vertex has degree >= {0}")]
    PatternAbsent(usize),
    #[error("search budget exhausted; best colouring found uses {best} colours")]
    Incomplete { best: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
    /// Only accept colourings whose colour classes are connected.
    pub connected_classes: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            connected_classes: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub opt: usize,
    /// False when the budget ran out; `opt` is then only a lower bound.
    pub complete: bool,
    pub nodes_explored: u64,
    #[serde(serialize_with = "colours_as_array")]
    pub witness: EdgeColouring,
}

fn colours_as_array<S: Serializer>(c: &EdgeColouring, s: S) -> Result<S::Ok, S::Error> {
    c.colours().serialize(s)
}

struct Search<'g> {
    g: &'g Graph,
    q: usize,
    opts: SearchOptions,
    assign: Vec<usize>,
    /// `(colour, multiplicity)` per vertex; never more than `q` entries.
    palette: Vec<Vec<(usize, usize)>>,
    used: usize,
    best: usize,
    best_assign: Vec<usize>,
    nodes: u64,
    aborted: bool,
}

impl<'g> Search<'g> {
    fn fits(&self, v: usize, c: usize) -> bool {
        let p = &self.palette[v];
        p.len() < self.q || p.iter().any(|&(x, _)| x == c)
    }

    fn push(&mut self, v: usize, c: usize) {
        let p = &mut self.palette[v];
        match p.iter_mut().find(|(x, _)| *x == c) {
            Some(entry) => entry.1 += 1,
            None => p.push((c, 1)),
        }
    }

    fn pop(&mut self, v: usize, c: usize) {
        let p = &mut self.palette[v];
        let i = p.iter().position(|&(x, _)| x == c).expect("colour present");
        p[i].1 -= 1;
        if p[i].1 == 0 {
            p.swap_remove(i);
        }
    }

    /// Colours can only be gained on edges whose endpoints both still have
    /// palette room, and each fresh colour consumes room at two vertices.
    fn upper_bound(&self, from: usize) -> usize {
        let mut open = 0;
        let mut slack = vec![false; self.g.n()];
        for e in from..self.g.m() {
            let (u, v) = self.g.edge(e);
            if self.palette[u].len() < self.q && self.palette[v].len() < self.q {
                open += 1;
                slack[u] = true;
                slack[v] = true;
            }
        }
        let room: usize = slack
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(x, _)| self.q - self.palette[x].len())
            .sum();
        self.used + open.min(room / 2)
    }

    fn classes_connected(&self) -> bool {
        let m = self.g.m();
        (0..self.used).all(|c| {
            let class = EdgeSubset::from_ids(m, (0..m).filter(|&e| self.assign[e] == c));
            components(self.g, &class)
                .iter()
                .filter(|p| p.has_edges())
                .count()
                <= 1
        })
    }

    fn run(&mut self, e: usize) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.opts.budget {
            self.aborted = true;
            return;
        }
        if e == self.g.m() {
            if self.used > self.best && (!self.opts.connected_classes || self.classes_connected()) {
                self.best = self.used;
                self.best_assign.clone_from(&self.assign);
            }
            return;
        }
        if self.upper_bound(e) <= self.best {
            return;
        }
        let (u, v) = self.g.edge(e);
        // fresh colour first: reaches good incumbents early
        let fresh = self.used;
        if self.fits(u, fresh) && self.fits(v, fresh) {
            self.assign[e] = fresh;
            self.used += 1;
            self.push(u, fresh);
            self.push(v, fresh);
            self.run(e + 1);
            self.pop(u, fresh);
            self.pop(v, fresh);
            self.used -= 1;
        }
        for c in 0..self.used {
            if self.aborted {
                return;
            }
            if self.fits(u, c) && self.fits(v, c) {
                self.assign[e] = c;
                self.push(u, c);
                self.push(v, c);
                self.run(e + 1);
                self.pop(u, c);
                self.pop(v, c);
            }
        }
    }
}

/// Baseline valid colouring with connected classes: one colour per
/// connected component for q = 1, the matching-based colouring otherwise.
fn seed_colouring(g: &Graph, q: usize) -> EdgeColouring {
    if q == 1 {
        let mut raw = vec![0; g.m()];
        let parts = components(g, &EdgeSubset::full(g.m()));
        for (i, p) in parts.iter().enumerate() {
            for &e in &p.edges {
                raw[e] = i;
            }
        }
        EdgeColouring::new(raw)
    } else {
        colour_with_matching(g, maximum_matching(g)).colouring
    }
}

/// Maximum number of colours in an edge q-colouring of `g`.
///
/// Branches on edges in id order, giving each either a fresh colour or an
/// existing colour that keeps both endpoints within `q`. If the node budget
/// runs out the best colouring found is returned with `complete = false`.
pub fn optimal_colouring(g: &Graph, q: usize, budget: u64) -> Result<ExactResult, ExactError> {
    optimal_colouring_with(
        g,
        q,
        SearchOptions {
            budget,
            ..SearchOptions::default()
        },
    )
}

pub fn optimal_colouring_with(
    g: &Graph,
    q: usize,
    opts: SearchOptions,
) -> Result<ExactResult, ExactError> {
    if q == 0 {
        return Err(ExactError::ZeroQ);
    }
    if g.m() == 0 {
        return Ok(ExactResult {
            opt: 0,
            complete: true,
            nodes_explored: 0,
            witness: EdgeColouring::new(Vec::new()),
        });
    }
    let seed = seed_colouring(g, q);
    let mut s = Search {
        g,
        q,
        opts,
        assign: vec![0; g.m()],
        palette: vec![Vec::with_capacity(q); g.n()],
        used: 0,
        best: seed.num_colours(),
        best_assign: seed.colours().to_vec(),
        nodes: 0,
        aborted: false,
    };
    s.run(0);
    Ok(ExactResult {
        opt: s.best,
        complete: !s.aborted,
        nodes_explored: s.nodes,
        witness: EdgeColouring::new(s.best_assign),
    })
}

/// Ground truth by enumerating every set partition of the edges as a
/// restricted growth string, keeping those where each vertex meets at most
/// `q` parts. A prefix that already breaks the bound is abandoned, since
/// every extension breaks it too; nothing else is pruned.
pub fn oracle_optimal(g: &Graph, q: usize) -> Result<usize, ExactError> {
    if q == 0 {
        return Err(ExactError::ZeroQ);
    }
    let m = g.m();
    if m > ORACLE_MAX_EDGES {
        return Err(ExactError::TooManyEdges {
            m,
            limit: ORACLE_MAX_EDGES,
        });
    }
    let mut rgs = vec![0usize; m];
    let mut best = 0;
    rgs_walk(g, q, &mut rgs, 0, 0, &mut best);
    Ok(best)
}

fn prefix_respects(g: &Graph, q: usize, rgs: &[usize], upto: usize, v: usize) -> bool {
    let mut seen: Vec<usize> = Vec::new();
    for &(_, e) in g.neighbours(v) {
        if e <= upto && !seen.contains(&rgs[e]) {
            seen.push(rgs[e]);
        }
    }
    seen.len() <= q
}

fn rgs_walk(g: &Graph, q: usize, rgs: &mut [usize], e: usize, blocks: usize, best: &mut usize) {
    if e == rgs.len() {
        *best = (*best).max(blocks);
        return;
    }
    let (u, v) = g.edge(e);
    for c in 0..=blocks {
        rgs[e] = c;
        if prefix_respects(g, q, rgs, e, u) && prefix_respects(g, q, rgs, e, v) {
            rgs_walk(g, q, rgs, e + 1, blocks.max(c + 1), best);
        }
    }
}

/// `ar(G, K_{1,t})` through the identity `OPT_{t-1}(G) + 1`.
pub fn anti_ramsey_star(g: &Graph, t: usize, budget: u64) -> Result<usize, ExactError> {
    if t < 2 {
        return Err(ExactError::StarTooSmall(t));
    }
    let r = optimal_colouring(g, t - 1, budget)?;
    if !r.complete {
        return Err(ExactError::Incomplete { best: r.opt });
    }
    Ok(r.opt + 1)
}

/// `ar(G, K_{1,t})` straight from the definition: the least `k` such that
/// every colouring of the edges with exactly `k` colours has a vertex with
/// `t` differently coloured edges.
pub fn direct_anti_ramsey_star(g: &Graph, t: usize) -> Result<usize, ExactError> {
    if t < 2 {
        return Err(ExactError::StarTooSmall(t));
    }
    let m = g.m();
    if m > DIRECT_AR_MAX_EDGES {
        return Err(ExactError::TooManyEdges {
            m,
            limit: DIRECT_AR_MAX_EDGES,
        });
    }
    if g.max_degree() < t {
        return Err(ExactError::PatternAbsent(t));
    }
    for k in 1..=m {
        if !exists_rainbow_free(g, t, k) {
            return Ok(k);
        }
    }
    unreachable!("the all-distinct colouring contains a rainbow star");
}

fn has_rainbow_star(g: &Graph, t: usize, f: &[usize]) -> bool {
    (0..g.n()).any(|v| {
        let mut seen: Vec<usize> = Vec::with_capacity(t);
        for &(_, e) in g.neighbours(v) {
            if !seen.contains(&f[e]) {
                seen.push(f[e]);
                if seen.len() >= t {
                    return true;
                }
            }
        }
        false
    })
}

/// Odometer over all maps `E -> [k]`; edge 0 is pinned to colour 0 since
/// permuting colour names preserves rainbow stars.
fn exists_rainbow_free(g: &Graph, t: usize, k: usize) -> bool {
    let m = g.m();
    let mut f = vec![0usize; m];
    let mut hits = vec![0usize; k];
    loop {
        hits.iter_mut().for_each(|h| *h = 0);
        for &c in &f {
            hits[c] += 1;
        }
        if hits.iter().all(|&h| h > 0) && !has_rainbow_star(g, t, &f) {
            return true;
        }
        let mut i = m;
        loop {
            if i == 1 {
                return false;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < k {
                break;
            }
            f[i] = 0;
        }
    }
}
