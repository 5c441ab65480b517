//! Instance generators: the 72-vertex lower-bound graph with its certified
//! colourings, random graphs with perfect matchings, named graphs, and
//! randomized fixtures for the repetition-pair constructions.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::approx::{colour_with_matching, parse_colouring, EdgeColouring};
use crate::graph::{
    components, is_triangle_free, parse_graph, EdgeId, EdgeSubset, Graph, VertexId,
};
use crate::matching::{maximum_matching, parse_matching, Matching};

const FIG5_GRAPH: &str = include_str!("../data/fig5.graph");
const FIG5_MATCHING: &str = include_str!("../data/fig5.matching");
const FIG5_COLOURING: &str = include_str!("../data/fig5_58.colouring");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("order {0} is odd; a perfect matching needs an even order")]
    OddOrder(usize),
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("fixture needs at least {min} vertices, got {got}")]
    TooSmall { min: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceTags {
    pub generator: String,
    pub seed: Option<u64>,
    pub triangle_free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedInstance {
    pub graph: Graph,
    pub matching: Matching,
    pub alg_colouring: EdgeColouring,
    /// A known valid colouring with many colours, when one is available.
    pub certified_colouring: Option<EdgeColouring>,
    pub tags: InstanceTags,
}

fn certify(graph: Graph, generator: &str, seed: Option<u64>) -> CertifiedInstance {
    let matching = maximum_matching(&graph);
    let alg = colour_with_matching(&graph, matching.clone());
    CertifiedInstance {
        tags: InstanceTags {
            generator: generator.to_string(),
            seed,
            triangle_free: is_triangle_free(&graph),
        },
        alg_colouring: alg.colouring,
        certified_colouring: None,
        matching,
        graph,
    }
}

/// The 72-vertex triangle-free lower-bound graph: the matching-based
/// colouring uses 37 colours while the certified scheme uses 58.
pub fn fig5_lower_bound() -> CertifiedInstance {
    let graph = parse_graph(FIG5_GRAPH).expect("checked-in graph parses");
    let matching = parse_matching(&graph, FIG5_MATCHING).expect("checked-in matching parses");
    let certified = parse_colouring(&graph, FIG5_COLOURING).expect("checked-in colouring parses");
    let alg = colour_with_matching(&graph, matching.clone());
    CertifiedInstance {
        tags: InstanceTags {
            generator: "fig5".into(),
            seed: None,
            triangle_free: is_triangle_free(&graph),
        },
        alg_colouring: alg.colouring,
        certified_colouring: Some(certified),
        matching,
        graph,
    }
}

fn check_params(n: usize, p: f64) -> Result<(), InstanceError> {
    if n % 2 == 1 {
        return Err(InstanceError::OddOrder(n));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(InstanceError::Probability(p));
    }
    Ok(())
}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

/// A random perfect matching on `n` vertices plus every other pair with
/// probability `p`. Matching edges come first in the edge list.
pub fn random_with_perfect_matching(
    n: usize,
    p: f64,
    seed: u64,
) -> Result<CertifiedInstance, InstanceError> {
    check_params(n, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges: Vec<(VertexId, VertexId)> =
        perm.chunks(2).map(|c| ordered(c[0], c[1])).collect();
    let planted: HashSet<(VertexId, VertexId)> = edges.iter().copied().collect();
    for u in 0..n {
        for v in u + 1..n {
            if !planted.contains(&(u, v)) && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("simple by construction");
    Ok(certify(g, "pm", Some(seed)))
}

/// Bipartite graph on sides `0..n/2` and `n/2..n`, with `i` matched to
/// `n/2 + i` and every other cross pair present with probability `p`.
pub fn random_triangle_free_with_pm(
    n: usize,
    p: f64,
    seed: u64,
) -> Result<CertifiedInstance, InstanceError> {
    check_params(n, p)?;
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(VertexId, VertexId)> = (0..half).map(|i| (i, half + i)).collect();
    for i in 0..half {
        for j in 0..half {
            if i != j && rng.gen_bool(p) {
                edges.push((i, half + j));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("simple by construction");
    Ok(certify(g, "tf", Some(seed)))
}

/// Erdős–Rényi graph `G(n, p)`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph, InstanceError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(InstanceError::Probability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, edges).expect("simple by construction"))
}

/// `path_k` (k vertices), `cycle_k`, `complete_k`, `star_k` (`K_{1,k}`),
/// or `petersen`.
pub fn named(name: &str) -> Result<Graph, InstanceError> {
    let unknown = || InstanceError::UnknownName(name.to_string());
    if name == "petersen" {
        let mut es: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        es.extend((0..5).map(|i| (i, i + 5)));
        es.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        return Ok(Graph::from_edges(10, es).expect("petersen"));
    }
    let (family, k) = name.rsplit_once('_').ok_or_else(unknown)?;
    let k: usize = k.parse().map_err(|_| unknown())?;
    let es: Vec<(usize, usize)> = match family {
        "path" if k >= 1 => (1..k).map(|i| (i - 1, i)).collect(),
        "cycle" if k >= 3 => (0..k).map(|i| (i, (i + 1) % k)).collect(),
        "complete" if k >= 1 => (0..k)
            .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
            .collect(),
        "star" if k >= 1 => (1..=k).map(|i| (0, i)).collect(),
        _ => return Err(unknown()),
    };
    let n = if family == "star" { k + 1 } else { k };
    Ok(Graph::from_edges(n, es).expect("simple by construction"))
}

/// Splits every colour class into its connected pieces, keeping validity.
pub fn split_classes(g: &Graph, col: &EdgeColouring) -> EdgeColouring {
    let mut raw = vec![0; g.m()];
    let mut next = 0;
    for c in 0..col.num_colours() {
        for part in components(g, &col.class(c))
            .into_iter()
            .filter(|p| p.has_edges())
        {
            for e in part.edges {
                raw[e] = next;
            }
            next += 1;
        }
    }
    EdgeColouring::new(raw)
}

/// A random valid 2-colouring whose colour classes are connected. Edges are
/// coloured greedily in random order, preferring fresh colours with
/// probability `fresh`; dead ends restart, and after repeated dead ends
/// the matching-based colouring for `m` is returned.
pub fn random_two_colouring(g: &Graph, m: &Matching, fresh: f64, seed: u64) -> EdgeColouring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<EdgeId> = (0..g.m()).collect();
    'attempt: for _ in 0..50 {
        order.shuffle(&mut rng);
        let mut raw = vec![usize::MAX; g.m()];
        let mut seen: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        let mut used = 0;
        for &e in &order {
            let (u, v) = g.edge(e);
            let room = |x: &Vec<usize>, c: usize| x.len() < 2 || x.contains(&c);
            let options: Vec<usize> = (0..used)
                .filter(|&c| room(&seen[u], c) && room(&seen[v], c))
                .collect();
            let can_fresh = seen[u].len() < 2 && seen[v].len() < 2;
            let c = if can_fresh && (options.is_empty() || rng.gen_bool(fresh)) {
                used += 1;
                used - 1
            } else if let Some(&c) = options.choose(&mut rng) {
                c
            } else {
                continue 'attempt;
            };
            raw[e] = c;
            for x in [u, v] {
                if !seen[x].contains(&c) {
                    seen[x].push(c);
                }
            }
        }
        return split_classes(g, &EdgeColouring::new(raw));
    }
    colour_with_matching(g, m.clone()).colouring
}

/// A rooted tree inside `G \ M` satisfying the endpoint colour conditions,
/// with every tree vertex matched either to a pendant vertex or to another
/// tree vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFixture {
    pub graph: Graph,
    pub matching: Matching,
    pub colouring: EdgeColouring,
    pub root: VertexId,
    pub tree_edges: Vec<EdgeId>,
}

/// Random recursive tree on `size` vertices with matching colours drawn
/// from `palette` colours.
pub fn random_tree_fixture(
    size: usize,
    palette: usize,
    seed: u64,
) -> Result<TreeFixture, InstanceError> {
    if size < 2 {
        return Err(InstanceError::TooSmall { min: 2, got: size });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parent: Vec<usize> = (0..size)
        .map(|i| if i == 0 { 0 } else { rng.gen_range(0..i) })
        .collect();
    Ok(tree_fixture(&parent, palette.max(1), &mut rng))
}

/// A path `0 - 1 - ... - (len-1)` rooted at 0, as a one-leaf tree fixture.
pub fn random_path_fixture(
    len: usize,
    palette: usize,
    seed: u64,
) -> Result<TreeFixture, InstanceError> {
    if len < 2 {
        return Err(InstanceError::TooSmall { min: 2, got: len });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parent: Vec<usize> = (0..len).map(|i| i.saturating_sub(1)).collect();
    Ok(tree_fixture(&parent, palette.max(1), &mut rng))
}

fn tree_fixture(parent: &[usize], palette: usize, rng: &mut ChaCha8Rng) -> TreeFixture {
    for _ in 0..200 {
        if let Some(f) = try_tree_fixture(parent, palette, rng, true) {
            return f;
        }
    }
    try_tree_fixture(parent, palette, rng, false).expect("pendant-only fixtures always colour")
}

fn try_tree_fixture(
    parent: &[usize],
    palette: usize,
    rng: &mut ChaCha8Rng,
    inner_pairs: bool,
) -> Option<TreeFixture> {
    let size = parent.len();
    let mut children = vec![Vec::new(); size];
    for i in 1..size {
        children[parent[i]].push(i);
    }
    let adjacent = |a: usize, b: usize| (a != 0 && parent[a] == b) || (b != 0 && parent[b] == a);

    // partner in the tree, or None for a pendant
    let mut mate: Vec<Option<usize>> = vec![None; size];
    let mut mcl: Vec<Option<usize>> = vec![None; size];
    if inner_pairs {
        let mut order: Vec<usize> = (0..size).collect();
        order.shuffle(rng);
        for &v in &order {
            if mate[v].is_some() || !rng.gen_bool(0.4) {
                continue;
            }
            let free: Vec<usize> = (0..size)
                .filter(|&w| w != v && mate[w].is_none() && !adjacent(v, w))
                .collect();
            if let Some(&w) = free.choose(rng) {
                mate[v] = Some(w);
                mate[w] = Some(v);
                let c = rng.gen_range(0..palette);
                mcl[v] = Some(c);
                mcl[w] = Some(c);
            }
        }
    }

    let mut edge_colour = vec![0usize; size];
    for v in 0..size {
        let own = *mcl[v].get_or_insert_with(|| rng.gen_range(0..palette));
        if children[v].is_empty() {
            continue;
        }
        let fixed: HashSet<usize> = children[v]
            .iter()
            .filter(|&&c| children[c].is_empty())
            .filter_map(|&c| mcl[c])
            .filter(|&c| c != own)
            .collect();
        let allowed: Vec<usize> = if v == 0 {
            vec![own]
        } else if edge_colour[v] != own {
            vec![own, edge_colour[v]]
        } else {
            let other = match fixed.len() {
                0 => rng.gen_range(0..palette + 1),
                1 => *fixed.iter().next().unwrap(),
                _ => return None,
            };
            let mut a = vec![own, other];
            a.dedup();
            a
        };
        for &c in &children[v] {
            let colour = match (children[c].is_empty(), mcl[c]) {
                (true, Some(want)) => {
                    if !allowed.contains(&want) {
                        return None;
                    }
                    want
                }
                _ => *allowed.choose(rng).unwrap(),
            };
            edge_colour[c] = colour;
            if children[c].is_empty() {
                mcl[c] = Some(colour);
            }
        }
    }

    let mut edges: Vec<(VertexId, VertexId)> = (1..size).map(|i| (parent[i], i)).collect();
    let mut raw: Vec<usize> = edge_colour[1..].to_vec();
    let mut matching_ids = Vec::new();
    let mut next_pendant = size;
    for v in 0..size {
        match mate[v] {
            Some(w) if w < v => continue,
            Some(w) => edges.push((v, w)),
            None => {
                edges.push((v, next_pendant));
                next_pendant += 1;
            }
        }
        matching_ids.push(edges.len() - 1);
        raw.push(mcl[v].expect("assigned"));
    }
    let graph = Graph::from_edges(next_pendant, edges).expect("simple by construction");
    let matching = Matching::from_edge_ids(&graph, matching_ids).expect("disjoint by construction");
    Some(TreeFixture {
        colouring: EdgeColouring::new(raw),
        matching,
        root: 0,
        tree_edges: (0..size - 1).collect(),
        graph,
    })
}

/// All connected graphs on `n <= 5` vertices, one per isomorphism class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(
        (1..=5).contains(&n),
        "enumeration is limited to 1..=5 vertices"
    );
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    let mut seen: HashSet<u32> = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        let es: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        let g = Graph::from_edges(n, es.iter().copied()).expect("simple");
        if components(&g, &EdgeSubset::full(g.m())).len() != 1 {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                es.iter().fold(0u32, |acc, &(u, v)| {
                    let (a, b) = ordered(p[u], p[v]);
                    acc | 1 << pairs.iter().position(|&x| x == (a, b)).unwrap()
                })
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}
