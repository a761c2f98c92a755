use super::{BipartiteGraph, Color, EdgeId, VertexId};
use crate::error::{input, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// A perfect matching, stored as its sorted edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PerfectMatching {
    edges: Vec<EdgeId>,
}

impl PerfectMatching {
    /// Validates `edges` against `g`.
    pub fn new(g: &BipartiteGraph, mut edges: Vec<EdgeId>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let pm = PerfectMatching { edges };
        pm.validate(g)?;
        Ok(pm)
    }

    pub(crate) fn new_unchecked(mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        PerfectMatching { edges }
    }

    /// Checks that the edges are disjoint and cover every vertex of `g`.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<()> {
        let mut covered = vec![false; g.num_vertices()];
        for &e in &self.edges {
            if e >= g.num_edges() {
                return input(format!("matching edge {e} is not an edge of the graph"));
            }
            let (b, w) = g.edge(e);
            for v in [b, w] {
                if covered[v] {
                    return input(format!("vertex {v} is covered twice"));
                }
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|&c| !c) {
            return input(format!("vertex {v} is not covered"));
        }
        Ok(())
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Matching edge at each vertex.
    pub fn mate_edges(&self, g: &BipartiteGraph) -> Vec<EdgeId> {
        let mut mate = vec![NONE; g.num_vertices()];
        for &e in &self.edges {
            let (b, w) = g.edge(e);
            mate[b] = e;
            mate[w] = e;
        }
        mate
    }

    /// Partner of each vertex.
    pub fn mates(&self, g: &BipartiteGraph) -> Vec<VertexId> {
        let mut mate = vec![NONE; g.num_vertices()];
        for &e in &self.edges {
            let (b, w) = g.edge(e);
            mate[b] = w;
            mate[w] = b;
        }
        mate
    }
}

/// Maximum matching restricted to live vertices and edges (Hopcroft–Karp).
/// Returns the matched edge at every vertex, `None` where exposed.
pub fn maximum_matching(
    g: &BipartiteGraph,
    vertex_alive: Option<&[bool]>,
    edge_alive: Option<&[bool]>,
) -> Vec<Option<EdgeId>> {
    let n = g.num_vertices();
    let valive = |v: VertexId| vertex_alive.is_none_or(|m| m[v]);
    let ealive = |e: EdgeId| edge_alive.is_none_or(|m| m[e]);
    let blacks: Vec<VertexId> = g.vertices_of(Color::Black).filter(|&v| valive(v)).collect();
    let mut mate = vec![NONE; n];
    let mut mate_edge = vec![NONE; n];

    // greedy start keeps the search short on the easy instances that dominate
    for &b in &blacks {
        for &(w, e) in g.incident(b) {
            if ealive(e) && valive(w) && mate[w] == NONE {
                mate[b] = w;
                mate[w] = b;
                mate_edge[b] = e;
                mate_edge[w] = e;
                break;
            }
        }
    }

    let mut dist = vec![NONE; n];
    loop {
        let mut queue = VecDeque::new();
        for &b in &blacks {
            if mate[b] == NONE {
                dist[b] = 0;
                queue.push_back(b);
            } else {
                dist[b] = NONE;
            }
        }
        let mut found = false;
        while let Some(b) = queue.pop_front() {
            for &(w, e) in g.incident(b) {
                if !ealive(e) || !valive(w) {
                    continue;
                }
                let nb = mate[w];
                if nb == NONE {
                    found = true;
                } else if dist[nb] == NONE {
                    dist[nb] = dist[b] + 1;
                    queue.push_back(nb);
                }
            }
        }
        if !found {
            break;
        }
        let mut any = false;
        for &b in &blacks {
            if mate[b] == NONE
                && augment(g, b, &mut mate, &mut mate_edge, &mut dist, &valive, &ealive)
            {
                any = true;
            }
        }
        if !any {
            break;
        }
    }
    mate_edge
        .into_iter()
        .map(|e| if e == NONE { None } else { Some(e) })
        .collect()
}

fn augment(
    g: &BipartiteGraph,
    b: VertexId,
    mate: &mut [VertexId],
    mate_edge: &mut [EdgeId],
    dist: &mut [usize],
    valive: &impl Fn(VertexId) -> bool,
    ealive: &impl Fn(EdgeId) -> bool,
) -> bool {
    let d = std::mem::replace(&mut dist[b], NONE);
    for &(w, e) in g.incident(b) {
        if !ealive(e) || !valive(w) {
            continue;
        }
        let nb = mate[w];
        let ok = nb == NONE
            || (d != NONE
                && dist[nb] == d + 1
                && augment(g, nb, mate, mate_edge, dist, valive, ealive));
        if ok {
            mate[b] = w;
            mate[w] = b;
            mate_edge[b] = e;
            mate_edge[w] = e;
            return true;
        }
    }
    false
}

/// True iff the live part of `g` has a perfect matching. An empty live part counts.
pub fn has_perfect_matching_masked(
    g: &BipartiteGraph,
    vertex_alive: Option<&[bool]>,
    edge_alive: Option<&[bool]>,
) -> bool {
    let valive = |v: VertexId| vertex_alive.is_none_or(|m| m[v]);
    let nb = g.vertices_of(Color::Black).filter(|&v| valive(v)).count();
    let nw = g.vertices_of(Color::White).filter(|&v| valive(v)).count();
    if nb != nw {
        return false;
    }
    let m = maximum_matching(g, vertex_alive, edge_alive);
    (0..g.num_vertices()).all(|v| !valive(v) || m[v].is_some())
}

pub fn has_perfect_matching(g: &BipartiteGraph) -> bool {
    has_perfect_matching_masked(g, None, None)
}

/// Some perfect matching of `g`, if one exists. Deterministic.
pub fn find_perfect_matching(g: &BipartiteGraph) -> Option<PerfectMatching> {
    if !g.is_balanced() {
        return None;
    }
    let m = maximum_matching(g, None, None);
    let mut edges = Vec::with_capacity(g.num_vertices() / 2);
    for b in g.vertices_of(Color::Black) {
        edges.push(m[b]?);
    }
    let pm = PerfectMatching::new_unchecked(edges);
    debug_assert!(pm.validate(g).is_ok());
    Some(pm)
}

/// Calls `f` on every perfect matching of the live part of `g` (edge ids in
/// black-vertex order). Stops early when `f` returns false.
pub fn for_each_perfect_matching(
    g: &BipartiteGraph,
    edge_alive: Option<&[bool]>,
    mut f: impl FnMut(&[EdgeId]) -> bool,
) {
    if !g.is_balanced() {
        return;
    }
    let n = g.num_vertices();
    let mut used = vec![false; n];
    let mut stack = Vec::with_capacity(n / 2);
    let blacks = g.blacks();
    enumerate(g, &blacks, edge_alive, &mut used, &mut stack, &mut f);
}

fn enumerate(
    g: &BipartiteGraph,
    blacks: &[VertexId],
    edge_alive: Option<&[bool]>,
    used: &mut [bool],
    stack: &mut Vec<EdgeId>,
    f: &mut impl FnMut(&[EdgeId]) -> bool,
) -> bool {
    // pick the uncovered black with the fewest options
    let mut best: Option<(usize, VertexId)> = None;
    for &b in blacks {
        if used[b] {
            continue;
        }
        let opts = g
            .incident(b)
            .iter()
            .filter(|&&(w, e)| !used[w] && edge_alive.is_none_or(|m| m[e]))
            .count();
        if opts == 0 {
            return true;
        }
        if best.is_none_or(|(o, _)| opts < o) {
            best = Some((opts, b));
        }
    }
    let Some((_, b)) = best else {
        let mut sorted = stack.clone();
        sorted.sort_unstable();
        return f(&sorted);
    };
    used[b] = true;
    for &(w, e) in g.incident(b) {
        if used[w] || !edge_alive.is_none_or(|m| m[e]) {
            continue;
        }
        used[w] = true;
        stack.push(e);
        let go_on = enumerate(g, blacks, edge_alive, used, stack, f);
        stack.pop();
        used[w] = false;
        if !go_on {
            used[b] = false;
            return false;
        }
    }
    used[b] = false;
    true
}

/// Number of perfect matchings by enumeration; intended for small graphs.
pub fn count_perfect_matchings_enum(g: &BipartiteGraph) -> u64 {
    let mut count = 0u64;
    for_each_perfect_matching(g, None, |_| {
        count += 1;
        true
    });
    count
}
