#![allow(dead_code)]

use perfmatch::graph::is_matching_covered;
use perfmatch::BipartiteGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Balanced bipartite graph with `n` vertices per side: a planted perfect
/// matching plus each other pair with probability `p`.
pub fn random_balanced(rng: &mut ChaCha8Rng, n: usize, p: f64) -> BipartiteGraph {
    let mut g = BipartiteGraph::with_sides(n, n);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    for b in 0..n {
        for w in 0..n {
            if perm[b] == w || rng.gen_bool(p) {
                g.add_edge(b, n + w).unwrap();
            }
        }
    }
    g
}

/// Random matching covered graph with `n` vertices per side.
pub fn random_matching_covered(rng: &mut ChaCha8Rng, n: usize) -> BipartiteGraph {
    loop {
        let p = rng.gen_range(0.2..0.7);
        let g = random_balanced(rng, n, p);
        if is_matching_covered(&g) {
            return g;
        }
    }
}

/// Random brace with `n` vertices per side.
pub fn random_brace(rng: &mut ChaCha8Rng, n: usize) -> BipartiteGraph {
    loop {
        let g = random_matching_covered(rng, n);
        if perfmatch::matching::is_brace(&g) {
            return g;
        }
    }
}

/// Splices `g1` at a random vertex with `g2` at a random vertex of the other
/// colour, with random cross edges covering both neighbourhoods. Returns the
/// glued graph and the shore coming from `g1`.
pub fn random_splice(
    rng: &mut ChaCha8Rng,
    g1: &BipartiteGraph,
    g2: &BipartiteGraph,
) -> (BipartiteGraph, perfmatch::VertexSet) {
    let v1 = rng.gen_range(0..g1.num_vertices());
    let v2 = loop {
        let v = rng.gen_range(0..g2.num_vertices());
        if g2.color(v) != g1.color(v1) {
            break v;
        }
    };
    let n1: Vec<usize> = g1.neighbors(v1).collect();
    let n2: Vec<usize> = g2.neighbors(v2).collect();
    let mut cross = Vec::new();
    for &a in &n1 {
        cross.push((a, *n2.choose(rng).unwrap()));
    }
    for &b in &n2 {
        cross.push((*n1.choose(rng).unwrap(), b));
    }
    for &a in &n1 {
        for &b in &n2 {
            if rng.gen_bool(0.3) {
                cross.push((a, b));
            }
        }
    }
    cross.sort_unstable();
    cross.dedup();
    let s = perfmatch::tightcut::splice(g1, v1, g2, v2, &cross).unwrap();
    let shore = perfmatch::VertexSet::from_vertices(
        s.graph.num_vertices(),
        s.left.iter().flatten().copied(),
    );
    (s.graph, shore)
}
