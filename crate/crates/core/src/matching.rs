//! Weighted perfect matchings, matching porosity, extendability and braces.

use crate::error::{input, Result};
use crate::graph::{
    count_internally_conformal_paths, find_isomorphism, find_perfect_matching,
    has_perfect_matching, is_matching_covered, small, BipartiteGraph, Color, EdgeId,
    PerfectMatching, VertexSet,
};
use num_bigint::BigInt;

/// A perfect matching of maximum total weight, with that weight, or `None`
/// when `g` has no perfect matching. `weights` is indexed by edge id.
///
/// Hungarian method with black vertices as rows in increasing order, so ties
/// are broken deterministically.
pub fn max_weight_perfect_matching(
    g: &BipartiteGraph,
    weights: &[i64],
) -> Option<(PerfectMatching, BigInt)> {
    assert_eq!(weights.len(), g.num_edges(), "one weight per edge");
    if !has_perfect_matching(g) {
        return None;
    }
    let blacks = g.blacks();
    let whites = g.whites();
    let n = blacks.len();
    if n == 0 {
        return Some((PerfectMatching::new_unchecked(Vec::new()), BigInt::from(0)));
    }
    let mut col_of = vec![usize::MAX; g.num_vertices()];
    for (j, &w) in whites.iter().enumerate() {
        col_of[w] = j;
    }
    // minimise cost = -weight; non-edges cost more than any full edge assignment
    let spread: i128 = weights.iter().map(|&w| (w as i128).abs()).sum::<i128>() + 1;
    let forbidden = spread * (n as i128 + 1);
    let mut cost = vec![vec![forbidden; n]; n];
    for (i, &b) in blacks.iter().enumerate() {
        for &(w, e) in g.incident(b) {
            cost[i][col_of[w]] = -(weights[e] as i128);
        }
    }
    let assignment = hungarian(&cost);
    let mut edges = Vec::with_capacity(n);
    let mut total = BigInt::from(0);
    for (i, &j) in assignment.iter().enumerate() {
        let e = g
            .edge_between(blacks[i], whites[j])
            .expect("perfect matching exists, so no forbidden cell is used");
        total += weights[e];
        edges.push(e);
    }
    Some((PerfectMatching::new_unchecked(edges), total))
}

// Classic O(n^3) potentials formulation; returns the column of each row.
fn hungarian(cost: &[Vec<i128>]) -> Vec<usize> {
    let n = cost.len();
    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut ans = vec![0; n];
    for j in 1..=n {
        ans[p[j] - 1] = j - 1;
    }
    ans
}

fn cut_weights(g: &BipartiteGraph, x: &VertexSet, value: i64) -> Vec<i64> {
    g.edges()
        .iter()
        .map(|&(b, w)| {
            if x.contains(b) != x.contains(w) {
                value
            } else {
                0
            }
        })
        .collect()
}

/// Largest number of edges of the cut around `x` used by one perfect matching.
pub fn matching_porosity(g: &BipartiteGraph, x: &VertexSet) -> Result<usize> {
    match max_weight_perfect_matching(g, &cut_weights(g, x, 1)) {
        Some((_, w)) => Ok(usize::try_from(w).expect("porosity fits in usize")),
        None => input("graph has no perfect matching"),
    }
}

/// Smallest number of cut edges used by one perfect matching.
pub fn min_cut_usage(g: &BipartiteGraph, x: &VertexSet) -> Result<usize> {
    match max_weight_perfect_matching(g, &cut_weights(g, x, -1)) {
        Some((_, w)) => Ok(usize::try_from(-w).expect("usage fits in usize")),
        None => input("graph has no perfect matching"),
    }
}

/// Every matching of size `k` extends to a perfect matching, and `|V| >= 2k+2`.
///
/// Checked through disjoint paths: for one perfect matching M, every black
/// u and white v must be joined by `k` internally disjoint paths whose
/// interiors are covered by M.
pub fn is_k_extendable(g: &BipartiteGraph, k: usize) -> bool {
    assert!(k >= 1, "k must be positive");
    if g.num_vertices() < 2 * k + 2 || !g.is_balanced() {
        return false;
    }
    let Some(m) = find_perfect_matching(g) else {
        return false;
    };
    for u in g.vertices_of(Color::Black) {
        for v in g.vertices_of(Color::White) {
            let c = count_internally_conformal_paths(g, &m, u, v, k).expect("opposite colours");
            if c < k {
                return false;
            }
        }
    }
    true
}

/// Direct check of the definition by listing matchings of size `k`. Only
/// sensible for small graphs and `k <= 2`; kept as a cross-check.
pub fn is_k_extendable_by_enumeration(g: &BipartiteGraph, k: usize) -> bool {
    if g.num_vertices() < 2 * k + 2 || !g.is_balanced() {
        return false;
    }
    let mut chosen: Vec<EdgeId> = Vec::new();
    extend_all(g, k, 0, &mut chosen)
}

fn extend_all(g: &BipartiteGraph, k: usize, from: EdgeId, chosen: &mut Vec<EdgeId>) -> bool {
    if chosen.len() == k {
        let mut alive = vec![true; g.num_vertices()];
        for &e in chosen.iter() {
            let (b, w) = g.edge(e);
            alive[b] = false;
            alive[w] = false;
        }
        return crate::graph::has_perfect_matching_masked(g, Some(&alive), None);
    }
    for e in from..g.num_edges() {
        let (b, w) = g.edge(e);
        let clash = chosen.iter().any(|&f| {
            let (c, x) = g.edge(f);
            c == b || x == w
        });
        if clash {
            continue;
        }
        chosen.push(e);
        let ok = extend_all(g, k, e + 1, chosen);
        chosen.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Matching covered with no non-trivial tight cut: `K2`, `C4`, or 2-extendable.
pub fn is_brace(g: &BipartiteGraph) -> bool {
    match g.num_vertices() {
        2 => g.num_edges() == 1,
        4 => find_isomorphism(g, &small::cycle(4), false).is_some(),
        _ => is_matching_covered(g) && is_k_extendable(g, 2),
    }
}
