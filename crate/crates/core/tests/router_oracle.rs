mod common;

use num_bigint::BigInt;
use perfmatch::generators;
use perfmatch::graph::{count_perfect_matchings_enum, for_each_perfect_matching, small};
use perfmatch::permanent::enumerate_generating_function;
use perfmatch::router::{
    count_perfect_matchings, count_perfect_matchings_with, generating_function_with,
    weighted_generating_function, Route, RouterOptions,
};
use perfmatch::{EdgeLabeling, IntPolynomial};
use rand::Rng;

fn weight_labels(w: &[u32]) -> EdgeLabeling {
    w.iter()
        .map(|&k| IntPolynomial::monomial(1, k as usize))
        .collect()
}

#[test]
fn router_matches_enumeration_on_random_matching_covered() {
    let mut rng = common::rng(11);
    for i in 0..200 {
        let g = common::random_matching_covered(&mut rng, 2 + i % 6);
        let want = BigInt::from(count_perfect_matchings_enum(&g));
        assert_eq!(
            count_perfect_matchings(&g).unwrap(),
            want,
            "{:?}",
            g.edges()
        );
        let w: Vec<u32> = (0..g.num_edges()).map(|_| rng.gen_range(0..=3)).collect();
        let p = weighted_generating_function(&g, &w).unwrap();
        assert_eq!(
            p,
            enumerate_generating_function(&g, &weight_labels(&w)).unwrap()
        );
        assert_eq!(p.sum_coeffs(), want);
    }
}

#[test]
fn router_handles_graphs_that_are_not_matching_covered() {
    let mut rng = common::rng(12);
    for i in 0..150 {
        let g = common::random_balanced(&mut rng, 2 + i % 6, 0.25);
        let w: Vec<u32> = (0..g.num_edges()).map(|_| rng.gen_range(0..=3)).collect();
        let want = enumerate_generating_function(&g, &weight_labels(&w)).unwrap();
        assert_eq!(weighted_generating_function(&g, &w).unwrap(), want);
    }
}

#[test]
fn forced_routes_agree_on_planar_braces() {
    let braces = [
        small::cycle(4),
        small::cube(),
        generators::grid(4, 4).unwrap().graph,
        generators::cylindrical_matching_grid(2).unwrap().graph,
    ];
    for g in &braces {
        let labels: EdgeLabeling = (0..g.num_edges())
            .map(|e| IntPolynomial::monomial(1, e % 4))
            .collect();
        let (dp, _) =
            generating_function_with(g, &labels, &RouterOptions::with_route(Route::Dp)).unwrap();
        let (pf, _) =
            generating_function_with(g, &labels, &RouterOptions::with_route(Route::Pfaffian))
                .unwrap();
        assert_eq!(dp, pf);
    }
}

#[test]
fn exact_weight_query_matches_enumeration() {
    let mut rng = common::rng(13);
    for i in 0..50 {
        let g = common::random_balanced(&mut rng, 2 + i % 5, 0.4);
        let w: Vec<u32> = (0..g.num_edges()).map(|_| rng.gen_range(0..=3)).collect();
        let p = weighted_generating_function(&g, &w).unwrap();
        let mut found = std::collections::BTreeSet::new();
        for_each_perfect_matching(&g, None, |m| {
            found.insert(m.iter().map(|&e| w[e] as usize).sum::<usize>());
            true
        });
        for k in 0..=3 * g.num_vertices() {
            assert_eq!(p.coeff(k) != BigInt::from(0), found.contains(&k));
        }
    }
}

#[test]
fn threads_give_the_same_answer() {
    let g = small::cycle(4)
        .disjoint_union(&small::cube())
        .disjoint_union(&small::complete_bipartite(3, 3));
    let one = count_perfect_matchings_with(&g, &RouterOptions::default()).unwrap();
    let opts = RouterOptions {
        threads: 4,
        ..Default::default()
    };
    let four = count_perfect_matchings_with(&g, &opts).unwrap();
    assert_eq!(one, four);
    assert_eq!(one.0, BigInt::from(2 * 9 * 6));
}

#[test]
fn heawood_goes_through_signs() {
    let g = generators::heawood().graph;
    let (n, rep) = count_perfect_matchings_with(&g, &RouterOptions::default()).unwrap();
    assert_eq!(n, BigInt::from(count_perfect_matchings_enum(&g)));
    assert_eq!(rep.braces.len(), 1);
    assert_eq!(rep.braces[0].route, Route::Pfaffian);
}
