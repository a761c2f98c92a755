mod common;

use num_bigint::BigInt;
use perfmatch::generators::{self, generate};
use perfmatch::graph::{
    are_isomorphic, count_perfect_matchings_enum, for_each_perfect_matching, small,
};
use perfmatch::matching::matching_porosity;
use perfmatch::minors::{
    collapse_model, contains_matching_minor, find_conformal_cross, four_cycle_in_k33_bisubdivision,
    four_cycles, verify_matching_minor_model,
};
use perfmatch::permanent::enumerate_generating_function;
use perfmatch::pfaffian::{
    count_by_determinant, is_pfaffian, kasteleyn_orientation, PfaffianVerdict,
};
use perfmatch::planarity::planar_embed;
use perfmatch::pmw::{
    decomposition_width, exact_pmw, generating_function_dp, heuristic_decomposition,
};
use perfmatch::reduction::{
    chi_weight_sum, sign_crossing_replace, signed_count, CrossingPair, CrossingSpec,
};
use perfmatch::router::{
    count_perfect_matchings, fold_tight_cut, generating_function, weighted_generating_function,
    RouterOptions,
};
use perfmatch::tightcut::{
    same_brace_multiset, tight_cut_decomposition, tight_cut_decomposition_seeded,
};
use perfmatch::{BipartiteGraph, Bounds, EdgeLabeling, IntPolynomial, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// The 200 random matching covered graphs with at most 14 vertices shared by
// several criteria.
fn corpus() -> Vec<BipartiteGraph> {
    let mut rng = common::rng(1);
    (0..200)
        .map(|i| common::random_matching_covered(&mut rng, 2 + i % 6))
        .collect()
}

fn random_weight_labels(rng: &mut rand_chacha::ChaCha8Rng, m: usize) -> EdgeLabeling {
    (0..m)
        .map(|_| IntPolynomial::monomial(1, rng.gen_range(0..=3)))
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let graphs = corpus();
    for g in &graphs {
        let got = count_perfect_matchings(g).map_err(err)?;
        let want = BigInt::from(count_perfect_matchings_enum(g));
        ensure!(
            got == want,
            "router {got} vs enumeration {want} on {:?}",
            g.edges()
        );
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn pfaffian_route() -> Outcome {
    let mut graphs: Vec<(String, BipartiteGraph)> = Vec::new();
    for n in 1..=6 {
        graphs.push((
            format!("grid(2,{n})"),
            generators::grid(2, n).map_err(err)?.graph,
        ));
    }
    graphs.push((
        "grid(4,4)".into(),
        generators::grid(4, 4).map_err(err)?.graph,
    ));
    for k in 1..=3 {
        graphs.push((
            format!("CG{k}"),
            generators::cylindrical_matching_grid(k).map_err(err)?.graph,
        ));
    }
    graphs.push(("Q3".into(), small::cube()));
    for (name, g) in &graphs {
        let rot = planar_embed(g).ok_or(format!("{name} has no planar embedding"))?;
        let o = kasteleyn_orientation(g, &rot).map_err(err)?;
        let det = count_by_determinant(g, &o);
        let want = BigInt::from(count_perfect_matchings_enum(g));
        ensure!(
            det.magnitude() == want.magnitude(),
            "{name}: |det| {det} vs {want}"
        );
        if name == "grid(4,4)" {
            ensure!(want == BigInt::from(36), "grid(4,4) has {want} matchings");
        }
        if name == "grid(2,3)" {
            ensure!(want == BigInt::from(3), "grid(2,3) has {want} matchings");
        }
    }
    Ok(format!("{} planar graphs", graphs.len()))
}

fn dp_route() -> Outcome {
    let c4 = small::cycle(4);
    let labels: EdgeLabeling = (1..=4).map(|k| IntPolynomial::monomial(1, k)).collect();
    let (_, d) = exact_pmw(&c4).map_err(err)?;
    let p = generating_function_dp(&c4, &labels, &d).map_err(err)?;
    ensure!(
        p == IntPolynomial::from_i64s(&[0, 0, 0, 0, 1, 0, 1]),
        "C4 labelled 1..4 gave {p}"
    );
    let mut rng = common::rng(3);
    let mut exact_runs = 0;
    for g in corpus() {
        let labels = random_weight_labels(&mut rng, g.num_edges());
        let want = enumerate_generating_function(&g, &labels).map_err(err)?;
        let h = heuristic_decomposition(&g).map_err(err)?;
        let bounds = Bounds {
            width_cap: usize::MAX,
            ..Bounds::default()
        };
        let got =
            perfmatch::pmw::generating_function_dp_with(&g, &labels, &h, &bounds).map_err(err)?;
        ensure!(
            got == want,
            "heuristic DP {got} vs {want} on {:?}",
            g.edges()
        );
        if g.num_vertices() <= 10 {
            let (_, d) = exact_pmw(&g).map_err(err)?;
            let got = perfmatch::pmw::generating_function_dp_with(&g, &labels, &d, &bounds)
                .map_err(err)?;
            ensure!(got == want, "exact DP {got} vs {want} on {:?}", g.edges());
            exact_runs += 1;
        }
    }
    Ok(format!(
        "200 heuristic and {exact_runs} exact decompositions"
    ))
}

fn splicing() -> Outcome {
    let mut rng = common::rng(4);
    for i in 0..50 {
        let g1 = common::random_brace(&mut rng, 2 + i % 4);
        let g2 = common::random_brace(&mut rng, 2 + (i / 4) % 4);
        let (g, shore) = common::random_splice(&mut rng, &g1, &g2);
        let labels = random_weight_labels(&mut rng, g.num_edges());
        let want = enumerate_generating_function(&g, &labels).map_err(err)?;
        let (folded, _) =
            fold_tight_cut(&g, &labels, &shore, &RouterOptions::default()).map_err(err)?;
        let got = generating_function(&folded.graph, &folded.labels).map_err(err)?;
        ensure!(got == want, "folded {got} vs {want} on {:?}", g.edges());
    }
    Ok("50 splices".into())
}

fn uniqueness() -> Outcome {
    let c6 = tight_cut_decomposition(&small::cycle(6)).map_err(err)?;
    let braces: Vec<_> = c6.braces().cloned().collect();
    ensure!(
        braces.len() == 2 && braces.iter().all(|b| are_isomorphic(b, &small::cycle(4))),
        "C6 gave {} braces",
        braces.len()
    );
    let mut rng = common::rng(5);
    for i in 0..100u64 {
        let g = common::random_matching_covered(&mut rng, 2 + i as usize % 6);
        let a: Vec<_> = tight_cut_decomposition_seeded(&g, Some(2 * i))
            .map_err(err)?
            .braces()
            .cloned()
            .collect();
        let b: Vec<_> = tight_cut_decomposition_seeded(&g, Some(2 * i + 1))
            .map_err(err)?
            .braces()
            .cloned()
            .collect();
        ensure!(
            same_brace_multiset(&a, &b),
            "brace multisets differ on {:?}",
            g.edges()
        );
    }
    Ok("100 graphs".into())
}

fn pfaffian_vs_minor() -> Outcome {
    let mut braces: Vec<BipartiteGraph> = vec![
        generators::heawood().graph,
        small::complete_bipartite(3, 3),
        small::cube(),
    ];
    for g in corpus() {
        braces.extend(tight_cut_decomposition(&g).map_err(err)?.braces().cloned());
    }
    braces.retain(|b| b.num_vertices() <= 14);
    let k33 = small::complete_bipartite(3, 3);
    let (mut decided, mut unknown) = (0, 0);
    for (i, b) in braces.iter().enumerate() {
        let verdict = is_pfaffian(b).map_err(err)?;
        if i == 0 {
            ensure!(verdict == PfaffianVerdict::Pfaffian, "Heawood: {verdict:?}");
        }
        if i == 1 {
            ensure!(verdict == PfaffianVerdict::NonPfaffian, "K3,3: {verdict:?}");
        }
        if verdict == PfaffianVerdict::Unknown {
            unknown += 1;
            continue;
        }
        let minor = contains_matching_minor(b, &k33).map_err(err)?;
        ensure!(
            (verdict == PfaffianVerdict::Pfaffian) == !minor,
            "verdict {verdict:?} but K3,3 minor {minor} on {:?}",
            b.edges()
        );
        decided += 1;
    }
    Ok(format!("{decided} braces decided, {unknown} unknown"))
}

fn cross_iff_k33() -> Outcome {
    let mut rng = common::rng(7);
    let mut braces = vec![
        small::complete_bipartite(3, 3),
        small::cube(),
        small::complete_bipartite(4, 4),
    ];
    while braces.len() < 30 {
        let n = rng.gen_range(3..=6);
        let b = common::random_brace(&mut rng, n);
        if !four_cycles(&b).is_empty() {
            braces.push(b);
        }
    }
    let mut cycles = 0;
    for b in &braces {
        let mut cs = four_cycles(b);
        cs.shuffle(&mut rng);
        for c in cs.into_iter().take(3) {
            let cross = find_conformal_cross(b, &c).map_err(err)?.is_some();
            let k33 = four_cycle_in_k33_bisubdivision(b, c, &Bounds::default()).map_err(err)?;
            ensure!(
                cross == k33,
                "cross {cross} vs K3,3 {k33} at {c:?} in {:?}",
                b.edges()
            );
            cycles += 1;
        }
    }
    Ok(format!("{} braces, {cycles} 4-cycles", braces.len()))
}

fn gadget_identity() -> Outcome {
    let bounds = Bounds::default();
    let two_k2 = small::k2().disjoint_union(&small::k2());
    let spec = CrossingSpec::new(vec![CrossingPair {
        e: [0, 1],
        f: [2, 3],
        mirror: false,
    }]);
    let chi = chi_weight_sum(&two_k2, &spec).map_err(err)?;
    let r = sign_crossing_replace(&two_k2, &spec).map_err(err)?;
    let replaced = signed_count(&r.graph, &r.weights, &bounds).map_err(err)?;
    ensure!(
        chi == BigInt::from(-1) && replaced == chi,
        "two K2: chi {chi}, replaced {replaced}"
    );
    let mut rng = common::rng(8);
    let mut pairs = 1;
    while pairs < 25 {
        let n = rng.gen_range(2..=6);
        let g = common::random_balanced(&mut rng, n, 0.5);
        let mut edges: Vec<usize> = (0..g.num_edges()).collect();
        edges.shuffle(&mut rng);
        let want = rng.gen_range(1..=2);
        let mut used = vec![false; g.num_edges()];
        let mut list = Vec::new();
        for &e in &edges {
            let (eb, ew) = g.edge(e);
            if list.len() == want || used[e] {
                continue;
            }
            if let Some(&f) = edges.iter().find(|&&f| {
                let (fb, fw) = g.edge(f);
                !used[f] && f != e && fb != eb && fw != ew
            }) {
                used[e] = true;
                used[f] = true;
                let (fb, fw) = g.edge(f);
                list.push(CrossingPair {
                    e: [eb, ew],
                    f: [fb, fw],
                    mirror: rng.gen_bool(0.5),
                });
            }
        }
        if list.is_empty() {
            continue;
        }
        let spec = CrossingSpec::new(list);
        let r = sign_crossing_replace(&g, &spec).map_err(err)?;
        let chi = chi_weight_sum(&g, &spec).map_err(err)?;
        let replaced = signed_count(&r.graph, &r.weights, &bounds).map_err(err)?;
        ensure!(
            chi == replaced,
            "chi {chi} vs replaced {replaced} on {:?} with {spec:?}",
            g.edges()
        );
        pairs += 1;
    }
    Ok(format!("{pairs} host/spec pairs"))
}

fn fixture() -> Outcome {
    let (rv, model) = generators::k44_model_in_rv4().map_err(err)?;
    let k44 = small::complete_bipartite(4, 4);
    let check = verify_matching_minor_model(&rv.graph, &k44, &model);
    ensure!(check.is_valid(), "fixture rejected: {:?}", check.violations);
    let collapsed = collapse_model(&rv.graph, &model).map_err(err)?;
    ensure!(
        are_isomorphic(&collapsed, &k44),
        "collapsed model is not K4,4"
    );
    let mut broken = model.clone();
    let t = &mut broken.vertex_trees[0];
    let dropped = t.vertices.pop().expect("nonempty tree");
    t.edges.retain(|e| !e.contains(&dropped));
    t.old.retain(|&v| v != dropped);
    let check = verify_matching_minor_model(&rv.graph, &k44, &broken);
    ensure!(
        !check.is_valid(),
        "model with vertex {dropped} dropped was accepted"
    );
    Ok(format!("control fails {:?}", check.failed_conditions()))
}

fn width() -> Outcome {
    let (w, _) = exact_pmw(&small::cycle(4)).map_err(err)?;
    ensure!(w == 2, "pmw(C4) = {w}");
    let mut rng = common::rng(10);
    for _ in 0..100 {
        let n = rng.gen_range(2..=7);
        let g = common::random_balanced(&mut rng, n, 0.4);
        let n = g.num_vertices();
        let x = VertexSet::from_vertices(n, (0..n).filter(|_| rng.gen_bool(0.5)));
        let a = matching_porosity(&g, &x).map_err(err)?;
        let b = matching_porosity(&g, &x.complement()).map_err(err)?;
        ensure!(a == b, "mp(X) {a} vs mp(complement) {b}");
    }
    let graphs = [
        small::cube(),
        generators::heawood().graph,
        generators::cylindrical_matching_grid(2).map_err(err)?.graph,
        generators::grid(4, 4).map_err(err)?.graph,
    ];
    for g in &graphs {
        let d = heuristic_decomposition(g).map_err(err)?;
        let w = decomposition_width(g, &d).map_err(err)?;
        for t in 0..d.num_nodes() {
            let rw = decomposition_width(g, &d.reroot(t)).map_err(err)?;
            ensure!(rw == w, "rerooting changed width {w} to {rw}");
        }
    }
    Ok("porosity symmetry on 100 sets, rerooting on 4 graphs".into())
}

fn generator_validity() -> Outcome {
    let mut runs: Vec<(&str, Vec<usize>)> = Vec::new();
    for k in 1..=4 {
        for f in ["cg", "scmg", "ioscmg", "cyljump", "rv"] {
            runs.push((f, vec![k]));
        }
    }
    for k in 3..=5 {
        runs.push(("wall", vec![k]));
    }
    for k in 1..=2 {
        runs.push(("svmg", vec![k]));
        runs.push(("cylsc", vec![k]));
    }
    for (s, t) in [(1, 1), (2, 2), (3, 3), (4, 4), (2, 3)] {
        runs.push(("ktt", vec![s, t]));
    }
    for (n, m) in [(2, 2), (2, 5), (3, 4), (4, 4)] {
        runs.push(("grid", vec![n, m]));
    }
    runs.push(("heawood", vec![]));
    runs.push(("cube", vec![]));
    let cylindrical = ["cg", "cyljump", "rv", "svmg", "cylsc"];
    for (family, params) in &runs {
        let gg = generate(family, params).map_err(err)?;
        let g = &gg.graph;
        let mut seen = std::collections::BTreeSet::new();
        for &(b, w) in g.edges() {
            ensure!(
                g.color(b) != g.color(w),
                "{family} {params:?}: monochromatic edge"
            );
            ensure!(seen.insert((b, w)), "{family} {params:?}: parallel edge");
        }
        match &gg.canonical_matching {
            Some(m) => m
                .validate(g)
                .map_err(|e| format!("{family} {params:?}: {e}"))?,
            None => ensure!(
                !cylindrical.contains(family),
                "{family} {params:?}: no canonical matching"
            ),
        }
    }
    for k in 1..=2 {
        let s = generators::shallow_vortex_matching_grid(k).map_err(err)?;
        let cg = generators::cylindrical_matching_grid(2 * k).map_err(err)?;
        let crossing: std::collections::BTreeSet<usize> = generators::svmg_crossing_pairs(k)
            .iter()
            .map(|&(u, v)| s.graph.edge_between(u, v).expect("crossing edge"))
            .collect();
        let keep: Vec<bool> = (0..s.graph.num_edges())
            .map(|e| !crossing.contains(&e))
            .collect();
        let base = s.graph.spanning_subgraph(&keep);
        ensure!(
            are_isomorphic(&base.graph, &cg.graph),
            "SVMG{k} minus crossings is not CG{}",
            2 * k
        );
        let m = s
            .canonical_matching
            .as_ref()
            .ok_or("SVMG without matching")?;
        ensure!(
            m.edges().iter().all(|e| !crossing.contains(e)),
            "canonical matching of SVMG{k} uses a crossing edge"
        );
    }
    Ok(format!("{} generator runs", runs.len()))
}

fn exact_matching_query() -> Outcome {
    let mut rng = common::rng(12);
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let g = common::random_balanced(&mut rng, n, 0.4);
        let w: Vec<u32> = (0..g.num_edges()).map(|_| rng.gen_range(0..=3)).collect();
        let p = weighted_generating_function(&g, &w).map_err(err)?;
        let mut totals = std::collections::BTreeSet::new();
        for_each_perfect_matching(&g, None, |m| {
            totals.insert(m.iter().map(|&e| w[e] as usize).sum::<usize>());
            true
        });
        for k in 0..=3 * g.num_vertices() {
            let nonzero = p.coeff(k) != BigInt::from(0);
            ensure!(
                nonzero == totals.contains(&k),
                "weight {k}: coefficient {nonzero}, enumeration {}",
                totals.contains(&k)
            );
        }
    }
    Ok("50 weighted instances".into())
}

fn main() {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("router equals enumeration", 60, oracle_equivalence),
        (
            "Kasteleyn determinant on planar families",
            10,
            pfaffian_route,
        ),
        ("decomposition DP equals enumeration", 120, dp_route),
        ("tight cut folding", 60, splicing),
        ("brace multiset uniqueness", 60, uniqueness),
        ("Pfaffian verdict vs K3,3 minor", 300, pfaffian_vs_minor),
        ("conformal cross iff K3,3 bisubdivision", 300, cross_iff_k33),
        ("sign-crossing gadget identity", 60, gadget_identity),
        ("K4,4 model in RV4", 5, fixture),
        ("width and porosity", 30, width),
        ("generator validity", 30, generator_validity),
        ("exact-weight matching query", 60, exact_matching_query),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit}s limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} [{:.2}s / {limit}s] {name}: {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
