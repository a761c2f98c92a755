//! The planar sign-crossing gadget and the signed counting identity it
//! satisfies.

use crate::config::Bounds;
use crate::error::{input, resource, Result};
use crate::graph::{for_each_perfect_matching, BipartiteGraph, Color, EdgeId, VertexId};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Two edges, given by their end vertices, that cross in a drawing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingPair {
    pub e: [VertexId; 2],
    pub f: [VertexId; 2],
    /// Swap the roles of `e` and `f` in the gadget.
    #[serde(default)]
    pub mirror: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingSpec {
    pub pairs: Vec<CrossingPair>,
}

impl CrossingSpec {
    pub fn new(pairs: Vec<CrossingPair>) -> Self {
        CrossingSpec { pairs }
    }

    /// Resolves every pair to edge ids, checking that the edges exist, that
    /// each pair is vertex-disjoint and that no edge is listed twice.
    pub fn resolve(&self, g: &BipartiteGraph) -> Result<Vec<(EdgeId, EdgeId)>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for (i, p) in self.pairs.iter().enumerate() {
            let find = |[u, v]: [VertexId; 2]| -> Result<EdgeId> {
                if u >= g.num_vertices() || v >= g.num_vertices() {
                    return input(format!("pair {i}: vertex out of range"));
                }
                match g.edge_between(u, v) {
                    Some(e) => Ok(e),
                    None => input(format!("pair {i}: {u}-{v} is not an edge")),
                }
            };
            let (mut e, mut f) = (find(p.e)?, find(p.f)?);
            let (eb, ew) = g.edge(e);
            let (fb, fw) = g.edge(f);
            if eb == fb || ew == fw {
                return input(format!("pair {i}: the two edges share a vertex"));
            }
            for x in [e, f] {
                if !seen.insert(x) {
                    return input(format!("pair {i}: edge {x} is listed twice"));
                }
            }
            if p.mirror {
                std::mem::swap(&mut e, &mut f);
            }
            out.push((e, f));
        }
        Ok(out)
    }
}

/// Result of replacing crossings: the new graph and an edge weight of +1 or
/// -1 per edge (the chord of each gadget carries -1).
#[derive(Debug, Clone)]
pub struct ReplacedGraph {
    pub graph: BipartiteGraph,
    pub weights: Vec<i64>,
}

/// Replaces each crossing pair `(e, f)` by the bipartite sign-crossing
/// gadget: a hexagon `B D P A C Q` with chord `PQ`, where the black end of
/// `e` attaches to `A`, its white end to `B`, the white end of `f` to `C` and
/// its black end to `D`. `A, D, Q` are white and `B, C, P` black, so the
/// result stays bipartite. Each pair adds six vertices.
pub fn sign_crossing_replace(g: &BipartiteGraph, spec: &CrossingSpec) -> Result<ReplacedGraph> {
    let pairs = spec.resolve(g)?;
    let removed: HashSet<EdgeId> = pairs.iter().flat_map(|&(e, f)| [e, f]).collect();
    let mut out = BipartiteGraph::new(g.colors().to_vec());
    let mut weights = Vec::new();
    for (e, &(b, w)) in g.edges().iter().enumerate() {
        if !removed.contains(&e) {
            out.add_edge(b, w)?;
            weights.push(1);
        }
    }
    for &(e, f) in &pairs {
        let (eb, ew) = g.edge(e);
        let (fb, fw) = g.edge(f);
        let a = out.add_vertex(Color::White);
        let bb = out.add_vertex(Color::Black);
        let c = out.add_vertex(Color::Black);
        let d = out.add_vertex(Color::White);
        let p = out.add_vertex(Color::Black);
        let q = out.add_vertex(Color::White);
        for (x, y, wt) in [
            (eb, a, 1),
            (ew, bb, 1),
            (fw, c, 1),
            (fb, d, 1),
            (bb, d, 1),
            (d, p, 1),
            (p, a, 1),
            (a, c, 1),
            (c, q, 1),
            (q, bb, 1),
            (p, q, -1),
        ] {
            out.add_edge(x, y)?;
            weights.push(wt);
        }
    }
    Ok(ReplacedGraph {
        graph: out,
        weights,
    })
}

/// `Σ_M Π_i χ_i(M)` over the perfect matchings of `g`, where `χ_i(M)` is -1
/// when `M` contains both edges of pair `i` and +1 otherwise.
pub fn chi_weight_sum(g: &BipartiteGraph, spec: &CrossingSpec) -> Result<BigInt> {
    chi_weight_sum_with(g, spec, &Bounds::default())
}

pub fn chi_weight_sum_with(
    g: &BipartiteGraph,
    spec: &CrossingSpec,
    bounds: &Bounds,
) -> Result<BigInt> {
    let pairs = spec.resolve(g)?;
    if g.num_vertices() > bounds.oracle_bound {
        return resource(format!(
            "enumeration limited to {} vertices",
            bounds.oracle_bound
        ));
    }
    let mut total = BigInt::zero();
    for_each_perfect_matching(g, None, |m| {
        let neg = pairs
            .iter()
            .filter(|(e, f)| m.binary_search(e).is_ok() && m.binary_search(f).is_ok())
            .count();
        total += if neg % 2 == 0 { 1 } else { -1 };
        true
    });
    Ok(total)
}

/// `Σ_M Π_{e∈M} w(e)` over the perfect matchings of `g`, by enumeration.
pub fn signed_count(g: &BipartiteGraph, weights: &[i64], bounds: &Bounds) -> Result<BigInt> {
    if weights.len() != g.num_edges() {
        return input("one weight per edge is required");
    }
    if g.num_vertices() > bounds.oracle_bound {
        return resource(format!(
            "enumeration limited to {} vertices",
            bounds.oracle_bound
        ));
    }
    let mut total = BigInt::zero();
    for_each_perfect_matching(g, None, |m| {
        let mut term = BigInt::from(1);
        for &e in m {
            term *= weights[e];
        }
        total += term;
        true
    });
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::small;

    fn pair(e: [usize; 2], f: [usize; 2]) -> CrossingPair {
        CrossingPair {
            e,
            f,
            mirror: false,
        }
    }

    #[test]
    fn two_k2_gives_minus_one() {
        let g = small::k2().disjoint_union(&small::k2());
        let spec = CrossingSpec::new(vec![pair([0, 1], [2, 3])]);
        assert_eq!(chi_weight_sum(&g, &spec).unwrap(), BigInt::from(-1));
        let r = sign_crossing_replace(&g, &spec).unwrap();
        assert_eq!(r.graph.num_vertices(), g.num_vertices() + 6);
        assert_eq!(
            signed_count(&r.graph, &r.weights, &Bounds::default()).unwrap(),
            BigInt::from(-1)
        );
    }

    #[test]
    fn empty_spec_is_identity() {
        let g = small::cycle(6);
        let r = sign_crossing_replace(&g, &CrossingSpec::default()).unwrap();
        assert_eq!(r.graph.edges(), g.edges());
        assert_eq!(
            chi_weight_sum(&g, &CrossingSpec::default()).unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn invalid_specs() {
        let g = small::complete_bipartite(3, 3);
        assert!(sign_crossing_replace(&g, &CrossingSpec::new(vec![pair([0, 3], [0, 4])])).is_err());
        assert!(sign_crossing_replace(
            &g,
            &CrossingSpec::new(vec![pair([0, 3], [1, 4]), pair([0, 3], [2, 5])])
        )
        .is_err());
        assert!(sign_crossing_replace(
            &small::cycle(6),
            &CrossingSpec::new(vec![pair([0, 3], [2, 5])])
        )
        .is_err());
    }

    #[test]
    fn identity_on_k33_both_orientations() {
        let g = small::complete_bipartite(3, 3);
        for mirror in [false, true] {
            let spec = CrossingSpec::new(vec![CrossingPair {
                e: [0, 3],
                f: [1, 4],
                mirror,
            }]);
            let r = sign_crossing_replace(&g, &spec).unwrap();
            assert_eq!(
                signed_count(&r.graph, &r.weights, &Bounds::default()).unwrap(),
                chi_weight_sum(&g, &spec).unwrap()
            );
        }
    }
}
