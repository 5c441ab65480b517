use std::collections::HashSet;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::approx::EdgeColouring;
use crate::graph::{is_triangle_free, Graph, VertexId};
use crate::matching::Matching;

use super::cascade::{build_cascading_sequence, RootedForestSeq};
use super::decomposition::{decompose, ColourDecomposition};
use super::pairs::{check_pair_properties, collect_repetition_pairs, LowClass, RepetitionPairs};
use super::AnalysisError;

type Q = Ratio<i64>;

fn q(x: usize) -> Q {
    Q::from_integer(x as i64)
}

fn frac(p: i64, d: i64) -> Q {
    Q::new(p, d)
}

pub(crate) fn ratio_str<S: Serializer>(r: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// One inequality `lhs <= rhs`, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub inequality_id: &'static str,
    #[serde(serialize_with = "ratio_str")]
    pub lhs: Q,
    #[serde(serialize_with = "ratio_str")]
    pub rhs: Q,
    pub pass: bool,
}

fn leq(inequality_id: &'static str, lhs: Q, rhs: Q) -> InequalityCheck {
    InequalityCheck {
        inequality_id,
        pass: lhs <= rhs,
        lhs,
        rhs,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub id: &'static str,
    pub pass: bool,
    /// First few failures, empty when passing.
    pub detail: String,
}

pub(crate) fn lemma(id: &'static str, failures: Vec<String>) -> LemmaCheck {
    LemmaCheck {
        id,
        pass: failures.is_empty(),
        detail: failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
    }
}

fn expect(id: &'static str, ok: bool, detail: impl FnOnce() -> String) -> LemmaCheck {
    lemma(id, if ok { Vec::new() } else { vec![detail()] })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub matching_size: usize,
    pub h: usize,
    pub colours: usize,
    pub matching_colours: usize,
    pub non_matching_colours: usize,
    pub repetition_content: usize,
    pub delta: usize,
    pub low: usize,
    pub low_six: usize,
    pub low_four: usize,
    pub pairs: usize,
    pub internal_vertices: usize,
    pub triangle_free: bool,
    /// `colours / (|M| + h)`.
    #[serde(serialize_with = "ratio_str")]
    pub ratio: Q,
    pub inequalities: Vec<InequalityCheck>,
    pub lemmas: Vec<LemmaCheck>,
    pub all_pass: bool,
}

impl BoundReport {
    pub fn failures(&self) -> Vec<&'static str> {
        self.inequalities
            .iter()
            .filter(|i| !i.pass)
            .map(|i| i.inequality_id)
            .chain(self.lemmas.iter().filter(|l| !l.pass).map(|l| l.id))
            .collect()
    }
}

/// Decomposes, builds the forests and pairs, and checks the bound chain.
/// `triangle_free = None` decides from the graph.
pub fn analyze(
    g: &Graph,
    m: &Matching,
    col: &EdgeColouring,
    triangle_free: Option<bool>,
) -> Result<BoundReport, AnalysisError> {
    let dec = decompose(g, m, col)?;
    let seq = build_cascading_sequence(&dec)?;
    let rp = collect_repetition_pairs(&dec, &seq)?;
    let tf = triangle_free.unwrap_or_else(|| is_triangle_free(g));
    Ok(verify_bound_chain(&dec, &seq, &rp, tf))
}

fn forest_checks(dec: &ColourDecomposition, seq: &RootedForestSeq) -> Vec<LemmaCheck> {
    let g = dec.graph;
    let expected: usize = dec.k.iter().map(|&k| k.saturating_sub(1)).sum();
    let leaves = seq.leaf_count();
    let mut out = vec![expect("forest_leaf_count", leaves == expected, || {
        format!("{leaves} leaves for {expected} colour components to link")
    })];

    let bad: Vec<String> = seq
        .internal_vertices()
        .into_iter()
        .filter(|&v| dec.nm_of_vertex[v].is_some())
        .map(|v| format!("internal vertex {v} lies in a colour component"))
        .collect();
    out.push(lemma("forest_interiors_avoid_components", bad));

    let mut bad = Vec::new();
    for f in &seq.forests {
        for t in &f.trees {
            let ends = std::iter::once(t.root()).chain(t.leaves());
            for u in ends {
                for &(w, e) in g.neighbours(u) {
                    let in_tree = t.contains(w)
                        && (t.parent(u) == Some(w) && t.parent_edge(u) == Some(e)
                            || t.parent(w) == Some(u) && t.parent_edge(w) == Some(e));
                    if in_tree && dec.colouring.colour(e) != dec.mcl[u] {
                        bad.push(format!(
                            "forest edge {e} at end vertex {u} is not its matching colour"
                        ));
                    }
                }
            }
            if t.edges().iter().any(|&e| dec.matching.contains(e)) {
                bad.push(format!("tree rooted at {} uses a matching edge", t.root()));
            }
        }
    }
    out.push(lemma("forest_endpoint_colours", bad));

    let mut bad = Vec::new();
    let fs = &seq.forests;
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            for a in &fs[i].trees {
                for b in &fs[j].trees {
                    let sa: HashSet<VertexId> = a.vertices().iter().copied().collect();
                    let common: Vec<VertexId> = b
                        .vertices()
                        .iter()
                        .copied()
                        .filter(|v| sa.contains(v))
                        .collect();
                    if common.is_empty() {
                        continue;
                    }
                    let linked =
                        j == i + 1 && common == [b.root()] && a.leaves().contains(&b.root());
                    if !linked {
                        bad.push(format!("forests {i} and {j} overlap in {common:?}"));
                    }
                }
            }
        }
    }
    out.push(lemma("cascading", bad));
    out
}

fn colour_checks(
    dec: &ColourDecomposition,
    seq: &RootedForestSeq,
    rp: &RepetitionPairs,
    triangle_free: bool,
) -> Vec<LemmaCheck> {
    let m = dec.matching;
    let mut support_size = Vec::new();
    let mut support_content = Vec::new();
    let mut matched_high = Vec::new();
    let mut low_closed = Vec::new();
    let mut low_four = Vec::new();
    let mut low_tf = Vec::new();
    for c in &rp.by_colour {
        let j = c.colour;
        let np = c.pairs.len();
        if c.support.len() < np + 1 {
            support_size.push(format!(
                "colour {j}: |S| = {} with {np} pairs",
                c.support.len()
            ));
        }
        if 2 * c.repetition_content + 1 < np {
            support_content.push(format!(
                "colour {j}: rp = {} with {np} pairs",
                c.repetition_content
            ));
        }
        if !c.matched.is_empty() && !c.high {
            matched_high.push(format!("colour {j} has matched pairs but is low"));
        }
        if c.high {
            continue;
        }
        let s: HashSet<VertexId> = c.support.iter().copied().collect();
        let closed = c
            .support
            .iter()
            .all(|&v| m.mate(v).is_some_and(|w| s.contains(&w)));
        let maxima: Vec<VertexId> = c
            .support
            .iter()
            .copied()
            .filter(|&x| c.support.iter().all(|&y| seq.upper_set(y).contains(&x)))
            .collect();
        if c.support.len() != np + 1 || !closed || maxima.len() != 1 {
            low_closed.push(format!(
                "colour {j}: |S| = {}, {np} pairs, closed = {closed}, maxima = {maxima:?}",
                c.support.len()
            ));
        }
        if c.support.len() < 4 {
            low_four.push(format!("colour {j}: |S| = {}", c.support.len()));
        }
        if triangle_free {
            let ok = c.support.len() >= 6
                || c.support.len() == 4
                    && c.pairs.iter().any(|&i| !rp.pairs[i].interior().is_empty());
            if !ok {
                low_tf.push(format!(
                    "colour {j}: |S| = {} without an interior vertex",
                    c.support.len()
                ));
            }
        }
    }

    let mut cross = Vec::new();
    for (i, p) in rp.pairs.iter().enumerate() {
        let mine: HashSet<&VertexId> = p.interior().iter().collect();
        for q in &rp.pairs[i + 1..] {
            if q.colour == p.colour {
                continue;
            }
            if let Some(z) = q.interior().iter().find(|z| mine.contains(z)) {
                cross.push(format!(
                    "pairs ({}, {}) and ({}, {}) share interior vertex {z}",
                    p.lower, p.upper, q.lower, q.upper
                ));
            }
        }
    }

    let mut out = vec![
        lemma("support_size", support_size),
        lemma("support_content", support_content),
        lemma("matched_pairs_high", matched_high),
        lemma("low_support_closed_unique_max", low_closed),
        lemma("low_support_at_least_four", low_four),
    ];
    if triangle_free {
        out.push(lemma("low_support_triangle_free", low_tf));
    }
    out.push(lemma("cross_colour_paths_disjoint", cross));
    out
}

/// Vertices certified inside the forests: interiors of the matched pairs of
/// high colours, plus one interior vertex per four-vertex low colour when
/// the graph is triangle-free. They must be distinct, avoid every colour
/// component, and number at least `Δ` (`2Δ + |L_2|` when triangle-free).
fn internal_supply(
    dec: &ColourDecomposition,
    seq: &RootedForestSeq,
    rp: &RepetitionPairs,
    triangle_free: bool,
) -> LemmaCheck {
    let internal: HashSet<VertexId> = seq.internal_vertices().into_iter().collect();
    let need_each = if triangle_free { 2 } else { 1 };
    let mut bad = Vec::new();
    let mut picked: Vec<VertexId> = Vec::new();
    for c in rp.high() {
        for &i in &c.matched {
            let p = &rp.pairs[i];
            if p.interior().len() < need_each {
                bad.push(format!(
                    "matched pair ({}, {}) has a short path",
                    p.lower, p.upper
                ));
            }
            picked.extend_from_slice(p.interior());
        }
    }
    let mut need = need_each * rp.delta();
    if triangle_free {
        for c in rp.low().filter(|c| c.low_class == Some(LowClass::L2)) {
            need += 1;
            match c.pairs.iter().find_map(|&i| rp.pairs[i].interior().first()) {
                Some(&z) => picked.push(z),
                None => bad.push(format!("colour {} has no interior vertex", c.colour)),
            }
        }
    }
    let distinct: HashSet<VertexId> = picked.iter().copied().collect();
    if distinct.len() != picked.len() {
        bad.push("certified internal vertices repeat".into());
    }
    if distinct.len() < need {
        bad.push(format!(
            "{} certified internal vertices, {need} needed",
            distinct.len()
        ));
    }
    if let Some(v) = distinct
        .iter()
        .find(|v| !internal.contains(v) || dec.nm_of_vertex[**v].is_some())
    {
        bad.push(format!(
            "vertex {v} is not a forest interior outside the colour components"
        ));
    }
    lemma("internal_vertex_supply", bad)
}

/// Evaluates every step of the counting argument on one instance.
pub fn verify_bound_chain(
    dec: &ColourDecomposition,
    seq: &RootedForestSeq,
    rp: &RepetitionPairs,
    triangle_free: bool,
) -> BoundReport {
    let g = dec.graph;
    let n = g.n();
    let mm = dec.matching.size();
    let h = dec.h();
    let c = dec.total_colours();
    let cm = dec.matching_colours.len();
    let cn = dec.non_matching_colours.len();
    let sum_rp: usize = rp.by_colour.iter().map(|x| x.repetition_content).sum();
    let delta = rp.delta();
    let low = rp.low().count();
    let low_six = rp
        .low()
        .filter(|x| x.low_class == Some(LowClass::L1))
        .count();
    let low_four = rp
        .low()
        .filter(|x| x.low_class == Some(LowClass::L2))
        .count();
    let np = rp.pairs.len();

    let (cq, mq, hq, cnq, dq) = (q(c), q(mm), q(h), q(cn), q(delta));
    let half = frac(1, 2);
    let quarter = frac(1, 4);
    let mut inequalities = vec![
        leq("total_vs_repetition_content", cq, mq - q(sum_rp) + cnq),
        leq(
            "repetition_content_lower_bound",
            q(np) * half - dq * half - q(low) * half,
            q(sum_rp),
        ),
        leq(
            "total_vs_pair_count",
            cq,
            cnq + mq - (cnq - hq) * half + dq * half + q(low) * half,
        ),
        leq("internal_vertex_budget", q(2 * cn + delta), q(n)),
        leq(
            "total_vs_internal_budget",
            cq,
            frac(3, 2) * mq + (dq + q(2 * low)) * quarter + hq * half,
        ),
        leq(
            "total_vs_low_colours",
            cq,
            q(2 * mm) - (dq + q(2 * low)) * half,
        ),
        leq("ratio_five_thirds", cq, frac(5, 3) * (mq + hq)),
    ];
    if triangle_free {
        inequalities.extend([
            leq(
                "total_vs_low_split",
                cq,
                q(2 * mm) - q(2 * low_six) - q(low_four),
            ),
            leq(
                "total_vs_pair_count_split",
                cq,
                cnq + mq - (cnq - hq) * half + dq * half + q(low_six + low_four) * half,
            ),
            leq(
                "internal_vertex_budget_triangle_free",
                q(2 * cn + 2 * delta + low_four),
                q(n),
            ),
            leq(
                "total_vs_internal_budget_split",
                cq,
                frac(3, 2) * mq + q(2 * low_six + low_four) * quarter + hq * half,
            ),
            leq("ratio_eight_fifths", cq, frac(8, 5) * (mq + hq)),
        ]);
    }

    let mut lemmas = check_pair_properties(g, dec.matching, dec.colouring, seq, &rp.pairs);
    lemmas.extend(forest_checks(dec, seq));
    let expected: usize = dec.k.iter().map(|&k| k.saturating_sub(1)).sum();
    lemmas.push(expect(
        "pair_count_identity",
        np == expected && np == seq.leaf_count(),
        || {
            format!(
                "{np} pairs, {} forest leaves, {expected} = sum of (k_i - 1); |C_N| - h = {}",
                seq.leaf_count(),
                cn as i64 - h as i64
            )
        },
    ));
    lemmas.push(expect("matching_colour_count", cm + sum_rp <= mm, || {
        format!("|C_M| = {cm}, sum rp = {sum_rp}, |M| = {mm}")
    }));
    lemmas.extend(colour_checks(dec, seq, rp, triangle_free));
    lemmas.push(internal_supply(dec, seq, rp, triangle_free));

    let all_pass = inequalities.iter().all(|i| i.pass) && lemmas.iter().all(|l| l.pass);
    BoundReport {
        n,
        matching_size: mm,
        h,
        colours: c,
        matching_colours: cm,
        non_matching_colours: cn,
        repetition_content: sum_rp,
        delta,
        low,
        low_six,
        low_four,
        pairs: np,
        internal_vertices: seq.internal_vertices().len(),
        triangle_free,
        ratio: Q::new(c as i64, (mm + h).max(1) as i64),
        inequalities,
        lemmas,
        all_pass,
    }
}
