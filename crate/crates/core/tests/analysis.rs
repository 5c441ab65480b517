use num_rational::Ratio;
use qcolour::analysis::{
    analyze, build_cascading_sequence, check_pair_properties, collect_repetition_pairs, decompose,
    path_repetition, tree_repetition_pairs, BoundReport, RepetitionPair, RootedForestSeq,
    RootedTree,
};
use qcolour::approx::{matching_based_colouring, EdgeColouring};
use qcolour::exact::optimal_colouring;
use qcolour::graph::{Graph, VertexId};
use qcolour::instances::{
    fig5_lower_bound, random_path_fixture, random_tree_fixture, random_triangle_free_with_pm,
    random_two_colouring, random_with_perfect_matching,
};
use qcolour::matching::Matching;

fn assert_clean(r: &BoundReport, what: &str) {
    let bad: Vec<String> = r
        .lemmas
        .iter()
        .filter(|l| !l.pass)
        .map(|l| format!("{}: {}", l.id, l.detail))
        .chain(
            r.inequalities
                .iter()
                .filter(|i| !i.pass)
                .map(|i| i.inequality_id.to_string()),
        )
        .collect();
    assert!(bad.is_empty(), "{what}: {bad:?}");
}

/// Every core vertex gets a pendant partner whose matching edge carries
/// `mcl[v]`; `core` lists the remaining edges with their colours.
fn with_pendants(
    mcl: &[usize],
    core: &[(usize, usize, usize)],
) -> (Graph, Matching, EdgeColouring) {
    let n = mcl.len();
    let mut es: Vec<(usize, usize)> = core.iter().map(|&(u, v, _)| (u, v)).collect();
    let mut raw: Vec<usize> = core.iter().map(|&(_, _, c)| c).collect();
    for (v, &c) in mcl.iter().enumerate() {
        es.push((v, n + v));
        raw.push(c);
    }
    let g = Graph::from_edges(2 * n, es).unwrap();
    let m = Matching::from_edge_ids(&g, core.len()..core.len() + n).unwrap();
    (g, m, EdgeColouring::new(raw))
}

#[test]
fn lower_bound_scheme_passes_every_check() {
    let f = fig5_lower_bound();
    let cert = f.certified_colouring.clone().unwrap();
    let r = analyze(&f.graph, &f.matching, &cert, None).unwrap();
    assert_clean(&r, "fig5 58");
    assert!(r.triangle_free);
    assert_eq!((r.colours, r.matching_size, r.h), (58, 36, 1));
    // the seven leftover pieces carry matching edges, so their colours count as matching colours
    assert_eq!((r.matching_colours, r.non_matching_colours), (22, 36));
    assert_eq!(r.ratio, Ratio::new(58, 37));
    assert_eq!(r.pairs, 35);
    let last = r.inequalities.last().unwrap();
    assert_eq!(last.inequality_id, "ratio_eight_fifths");
    assert_eq!(last.rhs, Ratio::new(296, 5));
}

#[test]
fn lower_bound_alg_colouring_passes() {
    let f = fig5_lower_bound();
    let r = analyze(&f.graph, &f.matching, &f.alg_colouring, None).unwrap();
    assert_clean(&r, "fig5 alg");
    assert_eq!(r.colours, 37);
    assert_eq!(r.pairs, 0);
}

#[test]
fn c4_optimal_colouring() {
    let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let m = Matching::from_edge_ids(&g, [0, 2]).unwrap();
    let opt = optimal_colouring(&g, 2, 1_000).unwrap();
    let r = analyze(&g, &m, &opt.witness, None).unwrap();
    assert_clean(&r, "c4");
    assert_eq!(r.colours, 4);
    let five_thirds = r
        .inequalities
        .iter()
        .find(|i| i.inequality_id == "ratio_five_thirds")
        .unwrap();
    assert_eq!(five_thirds.rhs, Ratio::new(20, 3));
}

#[test]
fn report_json_uses_rational_strings() {
    let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let a = matching_based_colouring(&g).unwrap();
    let r = analyze(&g, &a.matching, &a.colouring, Some(false)).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["ratio"], "1/1");
    assert_eq!(
        v["inequalities"][0]["inequality_id"],
        "total_vs_repetition_content"
    );
    assert!(v["inequalities"][0]["lhs"].as_str().unwrap().contains('/'));
    assert_eq!(v["inequalities"].as_array().unwrap().len(), 7);
}

#[test]
fn exact_witnesses_on_random_corpus() {
    for seed in 0..60 {
        for (n, p) in [(4, 0.6), (6, 0.35), (8, 0.2)] {
            let inst = random_with_perfect_matching(n, p, seed).unwrap();
            if inst.graph.m() > 12 {
                continue;
            }
            let opt = optimal_colouring(&inst.graph, 2, 5_000_000).unwrap();
            assert!(opt.complete);
            let r = analyze(&inst.graph, &inst.matching, &opt.witness, None).unwrap();
            assert_clean(&r, &format!("pm n={n} seed={seed}"));
        }
    }
}

#[test]
fn exact_witnesses_on_bipartite_corpus() {
    for seed in 0..60 {
        for (n, p) in [(6, 0.5), (8, 0.3), (10, 0.15)] {
            let inst = random_triangle_free_with_pm(n, p, seed).unwrap();
            if inst.graph.m() > 12 {
                continue;
            }
            let opt = optimal_colouring(&inst.graph, 2, 5_000_000).unwrap();
            let r = analyze(&inst.graph, &inst.matching, &opt.witness, None).unwrap();
            assert!(r.triangle_free);
            assert_clean(&r, &format!("tf n={n} seed={seed}"));
        }
    }
}

#[test]
fn random_connected_colourings_pass() {
    for seed in 0..300 {
        let inst = random_with_perfect_matching(10, 0.3, seed).unwrap();
        let col = random_two_colouring(&inst.graph, &inst.matching, 0.6, seed);
        let r = analyze(&inst.graph, &inst.matching, &col, None).unwrap();
        assert_clean(&r, &format!("random colouring seed={seed}"));
    }
}

#[test]
fn star_of_components_needs_one_forest() {
    // H1 = 0-1, and 0 reaches H2, H3, H4 through 2, 3, 4
    let mcl = [10, 11, 20, 21, 22, 20, 31, 21, 32, 22, 33];
    let core = [
        (0, 1, 1),
        (0, 2, 10),
        (0, 3, 10),
        (0, 4, 10),
        (2, 5, 20),
        (3, 7, 21),
        (4, 9, 22),
        (5, 6, 2),
        (7, 8, 3),
        (9, 10, 4),
    ];
    let (g, m, col) = with_pendants(&mcl, &core);
    let dec = decompose(&g, &m, &col).unwrap();
    assert_eq!(dec.k, vec![4]);
    let seq = build_cascading_sequence(&dec).unwrap();
    assert_eq!(seq.forests.len(), 1);
    assert_eq!(seq.forests[0].trees.len(), 1);
    assert_eq!(seq.leaf_count(), 3);
    let rp = collect_repetition_pairs(&dec, &seq).unwrap();
    assert_eq!(rp.pairs.len(), 3);
    assert!(check_pair_properties(&g, &m, &col, &seq, &rp.pairs)
        .iter()
        .all(|c| c.pass));
}

#[test]
fn two_level_arrangement_needs_two_forests() {
    // H1 = 0-1 reaches H2 = 3-4 via 2; H3 = 6-7 hangs off 4 via 5
    let mcl = [10, 11, 20, 20, 30, 40, 40, 31];
    let core = [
        (0, 1, 1),
        (0, 2, 10),
        (2, 3, 20),
        (3, 4, 2),
        (4, 5, 30),
        (5, 6, 40),
        (6, 7, 3),
    ];
    let (g, m, col) = with_pendants(&mcl, &core);
    let dec = decompose(&g, &m, &col).unwrap();
    assert_eq!(dec.k, vec![3]);
    let seq = build_cascading_sequence(&dec).unwrap();
    assert_eq!(seq.forests.len(), 2);
    assert_eq!(seq.leaf_count(), 2);
    let r = analyze(&g, &m, &col, None).unwrap();
    assert_clean(&r, "two-level");
    assert_eq!(r.pairs, 2);
}

#[test]
fn single_component_gives_empty_sequence() {
    let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let a = matching_based_colouring(&g).unwrap();
    let dec = decompose(&g, &a.matching, &a.colouring).unwrap();
    assert_eq!(dec.k, vec![1]);
    let seq = build_cascading_sequence(&dec).unwrap();
    assert!(seq.forests.is_empty());
    let rp = collect_repetition_pairs(&dec, &seq).unwrap();
    assert!(rp.pairs.is_empty());
    assert!(rp.by_colour.iter().all(|c| c.high && c.padded));
}

fn tree_of(f: &qcolour::instances::TreeFixture) -> RootedTree {
    RootedTree::from_edges(&f.graph, f.root, &f.tree_edges).unwrap()
}

#[test]
fn tree_fixtures_satisfy_pair_properties() {
    for seed in 0..400 {
        let size = 2 + (seed as usize % 20);
        let palette = 2 + (seed as usize % 3);
        let f = random_tree_fixture(size, palette, seed).unwrap();
        let t = tree_of(&f);
        let pairs = tree_repetition_pairs(&f.graph, &f.matching, &f.colouring, &t).unwrap();
        assert_eq!(pairs.len(), t.leaves().len(), "seed {seed}");
        let seq = RootedForestSeq::single(t);
        let wrapped: Vec<RepetitionPair> = pairs
            .into_iter()
            .map(|p| RepetitionPair {
                colour: f.colouring.colour(f.matching.edge_at(p.lower).unwrap()),
                matched: f.matching.mate(p.lower) == Some(p.upper),
                lower: p.lower,
                upper: p.upper,
                forest: 0,
                tree: 0,
                path: p.path,
            })
            .collect();
        for c in check_pair_properties(&f.graph, &f.matching, &f.colouring, &seq, &wrapped) {
            assert!(c.pass, "seed {seed}: {} {}", c.id, c.detail);
        }
    }
}

#[test]
fn path_repetition_agrees_with_exhaustive_scan_and_tree_pairs() {
    for seed in 0..400 {
        let len = 2 + (seed as usize % 12);
        let f = random_path_fixture(len, 3, seed).unwrap();
        let mcl = |v: VertexId| f.colouring.colour(f.matching.edge_at(v).unwrap());
        // start from the leaf so that tree pairs point the same way
        let path: Vec<VertexId> = (0..len).rev().collect();
        let (i, j) = path_repetition(&f.graph, &f.matching, &f.colouring, &path).unwrap();
        assert!(i < j && mcl(path[i]) == mcl(path[j]), "seed {seed}");
        let any = (0..len).any(|a| (a + 1..len).any(|b| mcl(path[a]) == mcl(path[b])));
        assert!(any);

        let t = tree_of(&f);
        let pairs = tree_repetition_pairs(&f.graph, &f.matching, &f.colouring, &t).unwrap();
        assert_eq!(pairs.len(), 1);
        let first_repeat = (i + 1..len)
            .find(|&b| mcl(path[b]) == mcl(path[i]))
            .unwrap();
        assert_eq!(
            (pairs[0].lower, pairs[0].upper),
            (path[i], path[first_repeat]),
            "seed {seed}"
        );
        assert!(first_repeat <= j);
    }
}

#[test]
fn seeded_low_colour_instances() {
    // found by search; low colours are rare under random colourings
    for (n, p, seed) in [
        (12, 0.25, 983),
        (12, 0.25, 2893),
        (16, 0.2, 4661),
        (16, 0.2, 6251),
    ] {
        let inst = random_with_perfect_matching(n, p, seed).unwrap();
        let col = random_two_colouring(&inst.graph, &inst.matching, 0.6, seed);
        let r = analyze(&inst.graph, &inst.matching, &col, None).unwrap();
        assert_clean(&r, &format!("low n={n} seed={seed}"));
        assert_eq!((r.low, r.low_four, r.low_six), (1, 1, 0), "seed {seed}");
    }
}
