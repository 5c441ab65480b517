//! One PASS/FAIL line per acceptance criterion; exits non-zero on any FAIL.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_rational::Ratio;
use qcolour::analysis::{
    analyze, check_pair_properties, path_repetition, tree_repetition_pairs, BoundReport,
    RepetitionPair, RootedForestSeq, RootedTree,
};
use qcolour::approx::{matching_based_colouring, validate, EdgeColouring};
use qcolour::exact::{
    anti_ramsey_star, direct_anti_ramsey_star, optimal_colouring, oracle_optimal,
};
use qcolour::graph::{Graph, VertexId};
use qcolour::instances::{
    connected_graphs, fig5_lower_bound, random_graph, random_path_fixture, random_tree_fixture,
    random_triangle_free_with_pm, random_two_colouring, random_with_perfect_matching,
    CertifiedInstance,
};
use qcolour::matching::{maximum_matching, Matching};

type Q = Ratio<i64>;

const BUDGET: u64 = 20_000_000;
const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    let mut detail = detail;
    if !failures.is_empty() {
        detail = format!(
            "{detail}; {} failures, first: {}",
            failures.len(),
            failures[0]
        );
    }
    Outcome {
        pass: failures.is_empty(),
        detail,
    }
}

/// One solved corpus instance.
struct Solved {
    label: String,
    graph: Graph,
    matching: Matching,
    alg: EdgeColouring,
    h: usize,
    opt: usize,
    witness: EdgeColouring,
}

impl Solved {
    fn ratio(&self) -> Q {
        Q::new(self.opt as i64, (self.matching.size() + self.h) as i64)
    }
}

fn solve(label: String, g: &Graph) -> Result<Solved, String> {
    let a = matching_based_colouring(g).map_err(|e| format!("{label}: {e}"))?;
    let r = optimal_colouring(g, 2, BUDGET).map_err(|e| format!("{label}: {e}"))?;
    if !r.complete {
        return Err(format!("{label}: exact search incomplete"));
    }
    let oracle = oracle_optimal(g, 2).map_err(|e| format!("{label}: {e}"))?;
    if oracle != r.opt {
        return Err(format!("{label}: search {} vs oracle {oracle}", r.opt));
    }
    Ok(Solved {
        label,
        graph: g.clone(),
        matching: a.matching.clone(),
        h: a.h,
        alg: a.colouring,
        opt: r.opt,
        witness: r.witness,
    })
}

/// First `want` instances with at most 12 edges from a fixed schedule of
/// sizes and densities.
fn pm_corpus(
    want: usize,
    generate: fn(usize, f64, u64) -> Result<CertifiedInstance, qcolour::instances::InstanceError>,
    name: &str,
    schedule: &[(usize, f64)],
) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < want {
        for &(n, p) in schedule {
            let inst = generate(n, p, seed).unwrap();
            if inst.graph.m() <= 12 && out.len() < want {
                out.push((format!("{name} n={n} p={p} seed={seed}"), inst.graph));
            }
        }
        seed += 1;
    }
    out
}

fn report_failures(r: &BoundReport, label: &str) -> Option<String> {
    (!r.all_pass).then(|| format!("{label}: {:?}", r.failures()))
}

fn criterion_lower_bound() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::TempDir::new().unwrap();
    let out = dir.path().join("fig5.colouring");
    let bin = env!("CARGO_BIN_EXE_qcolour");
    let graph = format!("{DATA}/fig5.graph");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();

    let mut failures = Vec::new();
    let approx = run(&[
        "approx",
        &graph,
        "--matching",
        &format!("{DATA}/fig5.matching"),
        "--out",
        out.to_str().unwrap(),
    ]);
    let line = String::from_utf8_lossy(&approx.stdout).trim().to_string();
    if !approx.status.success() || !line.ends_with("colours=37") {
        failures.push(format!("approx printed {line:?}"));
    }
    let verify = run(&[
        "verify",
        &graph,
        &format!("{DATA}/fig5_58.colouring"),
        "--q",
        "2",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&verify.stdout).unwrap_or_default();
    if !verify.status.success() || v["valid"] != true || v["colours_used"] != 58 {
        failures.push("58-colour scheme does not validate".into());
    }
    let f = fig5_lower_bound();
    let cert = f.certified_colouring.clone().unwrap();
    let r = analyze(&f.graph, &f.matching, &cert, None).unwrap();
    if r.ratio != Q::new(58, 37) {
        failures.push(format!("ratio {}", r.ratio));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("took {elapsed:?}"));
    }

    // the blossom matching is a different perfect matching with more components left over
    let own = matching_based_colouring(&f.graph).unwrap();
    outcome(
        &failures,
        format!(
            "{line}; verify 58 valid; ratio {}; {:.0?}; own blossom matching gives |M|={} h={} colours={}",
            r.ratio,
            elapsed,
            own.matching.size(),
            own.h,
            own.colours()
        ),
    )
}

fn bound_criterion(solved: &[Solved], bound: Q, skipped: &[String], name: &str) -> Outcome {
    let mut failures: Vec<String> = skipped.to_vec();
    let mut max = Q::new(0, 1);
    for s in solved {
        let r = s.ratio();
        max = max.max(r);
        if r > bound {
            failures.push(format!("{}: ratio {r}", s.label));
        }
    }
    outcome(
        &failures,
        format!("{} {name} instances (optimum confirmed by the oracle), max OPT/(|M|+h) = {max} <= {bound}", solved.len()),
    )
}

fn criterion_analysis(corpora: &[&[Solved]]) -> Outcome {
    let mut failures = Vec::new();
    let mut reports = 0;
    let mut tf = 0;
    for s in corpora.iter().flat_map(|c| c.iter()) {
        for (what, col) in [("opt", &s.witness), ("alg", &s.alg)] {
            match analyze(&s.graph, &s.matching, col, None) {
                Ok(r) => {
                    reports += 1;
                    tf += r.triangle_free as usize;
                    failures.extend(report_failures(&r, &format!("{} {what}", s.label)));
                }
                Err(e) => failures.push(format!("{} {what}: {e}", s.label)),
            }
        }
    }
    let f = fig5_lower_bound();
    for col in [&f.alg_colouring, f.certified_colouring.as_ref().unwrap()] {
        let r = analyze(&f.graph, &f.matching, col, None).unwrap();
        reports += 1;
        tf += 1;
        failures.extend(report_failures(&r, "fig5"));
    }
    outcome(
        &failures,
        format!("{reports} reports ({tf} triangle-free), every inequality and lemma check passes"),
    )
}

fn criterion_oracle() -> Outcome {
    let mut failures = Vec::new();
    let mut graphs: Vec<(String, Graph)> = (1..=5)
        .flat_map(|n| {
            connected_graphs(n)
                .into_iter()
                .map(move |g| (format!("connected n={n}"), g))
        })
        .collect();
    let small = graphs.len();
    let mut seed = 0;
    let mut random = 0;
    while random < 200 {
        let n = 3 + (seed as usize % 8);
        let g = random_graph(n, 0.35, seed).unwrap();
        if g.m() <= 12 {
            graphs.push((format!("random n={n} seed={seed}"), g));
            random += 1;
        }
        seed += 1;
    }
    for (label, g) in &graphs {
        for q in 1..=3 {
            let got = optimal_colouring(g, q, BUDGET).unwrap();
            let want = oracle_optimal(g, q).unwrap();
            if !got.complete || got.opt != want {
                failures.push(format!(
                    "{label} q={q}: search {} vs oracle {want}",
                    got.opt
                ));
            }
            if g.m() > 0 && !validate(g, &got.witness, q).unwrap().valid {
                failures.push(format!("{label} q={q}: invalid witness"));
            }
        }
    }
    outcome(
        &failures,
        format!("{small} connected graphs n<=5 and {random} random graphs m<=12, q in 1..=3"),
    )
}

fn criterion_anti_ramsey(corpus: &[&Graph]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for g in corpus {
        if g.m() > 8 || g.max_degree() < 3 {
            continue;
        }
        for t in 3..=g.max_degree().min(4) {
            let a = anti_ramsey_star(g, t, BUDGET).unwrap();
            let b = direct_anti_ramsey_star(g, t).unwrap();
            checked += 1;
            if a != b {
                failures.push(format!("{:?} t={t}: {a} vs {b}", g.edges()));
            }
        }
    }
    if checked == 0 {
        failures.push("no qualifying graphs".into());
    }
    outcome(
        &failures,
        format!("{checked} (graph, star) cases with m<=8"),
    )
}

fn wrap(
    f: &qcolour::instances::TreeFixture,
    pairs: Vec<qcolour::analysis::TreePair>,
) -> Vec<RepetitionPair> {
    pairs
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
        .collect()
}

fn criterion_constructions() -> Outcome {
    let mut failures = Vec::new();
    const N: u64 = 1000;

    for seed in 0..N {
        let len = 2 + (seed as usize % 14);
        let f = random_path_fixture(len, 2 + (seed as usize % 3), seed).unwrap();
        let mcl = |v: VertexId| f.colouring.colour(f.matching.edge_at(v).unwrap());
        let path: Vec<VertexId> = (0..len).rev().collect();
        match path_repetition(&f.graph, &f.matching, &f.colouring, &path) {
            Ok((i, j)) => {
                let c = mcl(path[i]);
                let mono = (i..j).all(|a| {
                    f.colouring
                        .colour(f.graph.edge_between(path[a], path[a + 1]).unwrap())
                        == c
                });
                if !(i < j && mcl(path[j]) == c && mono) {
                    failures.push(format!("path seed {seed}: ({i}, {j})"));
                }
            }
            Err(e) => failures.push(format!("path seed {seed}: {e}")),
        }
        let t = RootedTree::from_edges(&f.graph, f.root, &f.tree_edges).unwrap();
        match tree_repetition_pairs(&f.graph, &f.matching, &f.colouring, &t) {
            Ok(p) if p.len() == 1 => {
                let seq = RootedForestSeq::single(t);
                for c in
                    check_pair_properties(&f.graph, &f.matching, &f.colouring, &seq, &wrap(&f, p))
                {
                    if !c.pass {
                        failures.push(format!("path-tree seed {seed}: {} {}", c.id, c.detail));
                    }
                }
            }
            other => failures.push(format!("path-tree seed {seed}: {other:?}")),
        }
    }

    let (mut tree_pairs, mut tree_matched) = (0, 0);
    for seed in 0..N {
        let size = 2 + (seed as usize % 24);
        let f = random_tree_fixture(size, 2 + (seed as usize % 4), seed).unwrap();
        let t = RootedTree::from_edges(&f.graph, f.root, &f.tree_edges).unwrap();
        let leaves = t.leaves().len();
        match tree_repetition_pairs(&f.graph, &f.matching, &f.colouring, &t) {
            Ok(p) => {
                if p.len() != leaves {
                    failures.push(format!(
                        "tree seed {seed}: {} pairs for {leaves} leaves",
                        p.len()
                    ));
                }
                let wrapped = wrap(&f, p);
                tree_pairs += wrapped.len();
                tree_matched += wrapped.iter().filter(|p| p.matched).count();
                let seq = RootedForestSeq::single(t);
                for c in check_pair_properties(&f.graph, &f.matching, &f.colouring, &seq, &wrapped)
                {
                    if !c.pass {
                        failures.push(format!("tree seed {seed}: {} {}", c.id, c.detail));
                    }
                }
            }
            Err(e) => failures.push(format!("tree seed {seed}: {e}")),
        }
    }

    let (mut multi_forest, mut low, mut l2, mut l1, mut with_pairs) = (0, 0, 0, 0, 0);
    let mut pipeline = 0;
    let mut run = |g: &Graph, m: &Matching, col: &EdgeColouring, label: String| {
        pipeline += 1;
        match analyze(g, m, col, None) {
            Ok(r) => {
                failures.extend(report_failures(&r, &label));
                with_pairs += (r.pairs > 0) as usize;
                low += r.low;
                l2 += r.low_four;
                l1 += r.low_six;
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    for seed in 0..N {
        let n = [8, 10, 12, 16][seed as usize % 4];
        let p = [0.15, 0.25, 0.2, 0.15][seed as usize % 4];
        let fresh = if seed % 2 == 0 { 0.6 } else { 0.3 };
        let inst = random_with_perfect_matching(n, p, seed).unwrap();
        let col = random_two_colouring(&inst.graph, &inst.matching, fresh, seed);
        let dec = qcolour::analysis::decompose(&inst.graph, &inst.matching, &col);
        if let Ok(d) = &dec {
            if let Ok(s) = qcolour::analysis::build_cascading_sequence(d) {
                multi_forest += (s.forests.len() > 1) as usize;
            }
        }
        run(
            &inst.graph,
            &inst.matching,
            &col,
            format!("pipeline n={n} seed={seed}"),
        );
    }
    // instances found by search that carry a low colour
    for (n, p, seed) in [
        (12, 0.25, 983),
        (12, 0.25, 2893),
        (16, 0.2, 4661),
        (16, 0.2, 6251),
    ] {
        let inst = random_with_perfect_matching(n, p, seed).unwrap();
        let col = random_two_colouring(&inst.graph, &inst.matching, 0.6, seed);
        run(
            &inst.graph,
            &inst.matching,
            &col,
            format!("low n={n} seed={seed}"),
        );
    }
    outcome(
        &failures,
        format!(
            "{N} path, {N} tree ({tree_pairs} pairs, {tree_matched} matched), {pipeline} pipeline \
             ({with_pairs} with pairs, {multi_forest} multi-forest, {low} low colours: {l2} of size four, {l1} of size six or more)"
        ),
    )
}

fn brute_matching(g: &Graph) -> usize {
    fn go(g: &Graph, e: usize, used: &mut [bool], best: &mut usize, size: usize) {
        if size + (g.m() - e) <= *best || e == g.m() {
            *best = (*best).max(size);
            return;
        }
        let (u, v) = g.edge(e);
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            go(g, e + 1, used, best, size + 1);
            used[u] = false;
            used[v] = false;
        }
        go(g, e + 1, used, best, size);
    }
    let mut best = 0;
    go(g, 0, &mut vec![false; g.n()], &mut best, 0);
    best
}

fn criterion_matching() -> Outcome {
    let mut failures = Vec::new();
    for i in 0..300u64 {
        let n = 1 + (i as usize % 10);
        let p = [0.1, 0.3, 0.5, 0.8][(i / 10) as usize % 4];
        let g = random_graph(n, p, i).unwrap();
        let got = maximum_matching(&g).size();
        let want = brute_matching(&g);
        if got != want {
            failures.push(format!("n={n} p={p} seed={i}: {got} vs {want}"));
        }
    }
    outcome(&failures, "300 graphs with n<=10".into())
}

fn criterion_two_approx(corpora: &[&[Solved]]) -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    let mut max = Q::new(0, 1);
    for s in corpora.iter().flat_map(|c| c.iter()) {
        count += 1;
        max = max.max(s.ratio());
        if s.ratio() > Q::from_integer(2) {
            failures.push(format!("{}: {}", s.label, s.ratio()));
        }
    }
    outcome(
        &failures,
        format!("{count} instances, max OPT/(|M|+h) = {max} <= 2"),
    )
}

fn solve_all(graphs: &[(String, Graph)]) -> (Vec<Solved>, Vec<String>) {
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for (label, g) in graphs {
        match solve(label.clone(), g) {
            Ok(s) => ok.push(s),
            Err(e) => bad.push(e),
        }
    }
    (ok, bad)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut all = true;
    let mut line = |id: u32, name: &str, o: Outcome| {
        all &= o.pass;
        println!(
            "{} {id} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    };

    line(1, "lower_bound_instance", criterion_lower_bound());

    let pm_graphs = pm_corpus(
        500,
        random_with_perfect_matching,
        "pm",
        &[
            (4, 0.6),
            (6, 0.3),
            (6, 0.5),
            (8, 0.15),
            (8, 0.25),
            (10, 0.08),
            (10, 0.12),
            (12, 0.05),
        ],
    );
    let (pm, pm_bad) = solve_all(&pm_graphs);
    line(
        2,
        "five_thirds_bound",
        bound_criterion(&pm, Q::new(5, 3), &pm_bad, "perfect-matching"),
    );

    let tf_graphs = pm_corpus(
        500,
        random_triangle_free_with_pm,
        "tf",
        &[
            (4, 0.7),
            (6, 0.4),
            (6, 0.7),
            (8, 0.2),
            (8, 0.35),
            (10, 0.1),
            (10, 0.18),
            (12, 0.08),
        ],
    );
    let (tf, tf_bad) = solve_all(&tf_graphs);
    line(
        3,
        "eight_fifths_bound",
        bound_criterion(&tf, Q::new(8, 5), &tf_bad, "bipartite"),
    );

    line(4, "inequality_chain", criterion_analysis(&[&pm, &tf]));
    line(5, "exact_matches_oracle", criterion_oracle());

    let ar_corpus: Vec<&Graph> = pm_graphs.iter().chain(&tf_graphs).map(|(_, g)| g).collect();
    line(6, "anti_ramsey_identity", criterion_anti_ramsey(&ar_corpus));
    line(7, "lemma_constructions", criterion_constructions());
    line(8, "matching_brute_force", criterion_matching());
    line(9, "two_approximation", criterion_two_approx(&[&pm, &tf]));

    println!("total {:.1?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
