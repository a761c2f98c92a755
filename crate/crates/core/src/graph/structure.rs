use super::matching::{find_perfect_matching, has_perfect_matching_masked, PerfectMatching};
use super::{BipartiteGraph, Color, EdgeId, Subgraph, VertexId, VertexSet};
use crate::error::{input, Result};
use crate::flow::UnitFlow;
use serde::{Deserialize, Serialize};

/// Whether some perfect matching contains `e`.
pub fn is_admissible(g: &BipartiteGraph, e: EdgeId) -> Result<bool> {
    if e >= g.num_edges() {
        return input(format!("unknown edge {e}"));
    }
    let (b, w) = g.edge(e);
    let mut alive = vec![true; g.num_vertices()];
    alive[b] = false;
    alive[w] = false;
    Ok(has_perfect_matching_masked(g, Some(&alive), None))
}

/// Admissibility flag of every edge, or `None` when `g` has no perfect matching.
///
/// Works on the digraph D(M) over black vertices: a non-matching edge `bw`
/// becomes the arc `b -> mate(w)`, and it lies in a perfect matching iff the arc
/// closes an alternating cycle, i.e. both ends share a strong component.
pub fn admissible_edges(g: &BipartiteGraph) -> Option<Vec<bool>> {
    let pm = find_perfect_matching(g)?;
    Some(admissible_edges_with(g, &pm))
}

pub(crate) fn admissible_edges_with(g: &BipartiteGraph, pm: &PerfectMatching) -> Vec<bool> {
    let n = g.num_vertices();
    let mates = pm.mates(g);
    let mut arcs: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (e, &(b, w)) in g.edges().iter().enumerate() {
        if !pm.contains(e) {
            arcs[b].push(mates[w]);
        }
    }
    let comp = strong_components(&arcs, g.vertices_of(Color::Black));
    g.edges()
        .iter()
        .enumerate()
        .map(|(e, &(b, w))| pm.contains(e) || comp[b] == comp[mates[w]])
        .collect()
}

// Iterative Tarjan; vertices outside `roots` keep component usize::MAX.
fn strong_components(arcs: &[Vec<VertexId>], roots: impl Iterator<Item = VertexId>) -> Vec<usize> {
    let n = arcs.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for r in roots {
        if index[r] != usize::MAX {
            continue;
        }
        let mut call: Vec<(VertexId, usize)> = vec![(r, 0)];
        index[r] = next_index;
        low[r] = next_index;
        next_index += 1;
        stack.push(r);
        on_stack[r] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < arcs[v].len() {
                let u = arcs[v][*i];
                *i += 1;
                if index[u] == usize::MAX {
                    index[u] = next_index;
                    low[u] = next_index;
                    next_index += 1;
                    stack.push(u);
                    on_stack[u] = true;
                    call.push((u, 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    while let Some(u) = stack.pop() {
                        on_stack[u] = false;
                        comp[u] = next_comp;
                        if u == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// Connected, and every edge lies in a perfect matching.
pub fn is_matching_covered(g: &BipartiteGraph) -> bool {
    if !g.is_connected() {
        return false;
    }
    match admissible_edges(g) {
        Some(adm) => adm.iter().all(|&a| a),
        None => false,
    }
}

/// `g - x` has a perfect matching (the empty graph has one).
pub fn is_conformal(g: &BipartiteGraph, x: &VertexSet) -> bool {
    let alive: Vec<bool> = (0..g.num_vertices()).map(|v| !x.contains(v)).collect();
    has_perfect_matching_masked(g, Some(&alive), None)
}

/// Elementary (Dulmage–Mendelsohn) components of a graph with a perfect matching.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementaryDecomposition {
    /// Vertex sets, each sorted, ordered by smallest vertex.
    pub components: Vec<Vec<VertexId>>,
    /// Arc `(i, j)` whenever an edge joins a black vertex of component `i` to a
    /// white vertex of component `j != i`. Such edges are never admissible, and
    /// the arcs form a DAG encoding the partial order between components.
    pub order: Vec<(usize, usize)>,
    /// Admissibility flag per edge of the host graph.
    pub admissible: Vec<bool>,
}

impl ElementaryDecomposition {
    /// Component `i` with its admissible edges, as a standalone graph.
    pub fn component_graph(&self, g: &BipartiteGraph, i: usize) -> Subgraph {
        let keep = VertexSet::from_vertices(g.num_vertices(), self.components[i].iter().copied());
        let induced = g.induced_subgraph(&keep);
        let mask: Vec<bool> = induced
            .edge_map
            .iter()
            .map(|&e| self.admissible[e])
            .collect();
        let spanning = induced.graph.spanning_subgraph(&mask);
        Subgraph {
            graph: spanning.graph,
            vertex_map: induced.vertex_map,
            edge_map: spanning
                .edge_map
                .iter()
                .map(|&e| induced.edge_map[e])
                .collect(),
        }
    }
}

pub fn elementary_components(g: &BipartiteGraph) -> Result<ElementaryDecomposition> {
    let Some(admissible) = admissible_edges(g) else {
        return input("graph has no perfect matching");
    };
    let components = g.components_masked(Some(&admissible));
    let mut comp_of = vec![0; g.num_vertices()];
    for (i, c) in components.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut order: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|(b, w)| comp_of[*b] != comp_of[*w])
        .map(|&(b, w)| (comp_of[b], comp_of[w]))
        .collect();
    order.sort_unstable();
    order.dedup();
    Ok(ElementaryDecomposition {
        components,
        order,
        admissible,
    })
}

/// Maximum number (capped at `limit`) of pairwise internally disjoint u–v paths
/// whose interior is covered by `m`-edges of the path itself.
pub fn count_internally_conformal_paths(
    g: &BipartiteGraph,
    m: &PerfectMatching,
    u: VertexId,
    v: VertexId,
    limit: usize,
) -> Result<usize> {
    let n = g.num_vertices();
    if u >= n || v >= n {
        return input("path endpoint out of range");
    }
    let (u, v) = match (g.color(u), g.color(v)) {
        (Color::Black, Color::White) => (u, v),
        (Color::White, Color::Black) => (v, u),
        _ => return input("path endpoints must have opposite colours"),
    };
    let mates = m.mates(g);
    // pair node per matching edge not touching u or v; enter via white, leave via black
    let mut pair_of_white = vec![usize::MAX; n];
    let mut pairs = 0;
    for w in g.vertices_of(Color::White) {
        let b = mates[w];
        if w != v && b != u && w != mates[u] && b != mates[v] {
            pair_of_white[w] = pairs;
            pairs += 1;
        }
    }
    let src = 0;
    let sink = 1;
    let node_in = |p: usize| 2 + 2 * p;
    let node_out = |p: usize| 3 + 2 * p;
    let mut flow = UnitFlow::new(2 + 2 * pairs);
    for w in g.vertices_of(Color::White) {
        let p = pair_of_white[w];
        if p == usize::MAX {
            continue;
        }
        flow.add_arc(node_in(p), node_out(p), 1);
        let b = mates[w];
        for x in g.neighbors(b) {
            if x == v {
                flow.add_arc(node_out(p), sink, 1);
            } else if pair_of_white[x] != usize::MAX && x != w {
                flow.add_arc(node_out(p), node_in(pair_of_white[x]), 1);
            }
        }
    }
    for x in g.neighbors(u) {
        if x == v {
            flow.add_arc(src, sink, 1);
        } else if pair_of_white[x] != usize::MAX {
            flow.add_arc(src, node_in(pair_of_white[x]), 1);
        }
    }
    Ok(flow.max_flow(src, sink, limit as u32) as usize)
}

/// Whether `k` such paths exist (see [`count_internally_conformal_paths`]).
pub fn internally_conformal_paths(
    g: &BipartiteGraph,
    m: &PerfectMatching,
    u: VertexId,
    v: VertexId,
    k: usize,
) -> Result<bool> {
    Ok(count_internally_conformal_paths(g, m, u, v, k)? >= k)
}
