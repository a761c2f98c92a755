//! Bipartite graph representation and the perfect-matching vocabulary the
//! rest of the crate is written in.
//!
//! Vertices are dense `0..n` integers, each carrying a [`Color`]. Edges are
//! stored once, as `(black, white)` pairs, and are identified by their
//! insertion index. Adjacency lists are kept sorted by neighbour so that every
//! traversal visits vertices lowest-index first.

mod io;
mod iso;
mod matching;
mod structure;

pub use io::{parse_edge_list, to_edge_list, GraphJson};
pub use iso::{are_isomorphic, find_isomorphism};
pub use matching::{
    count_perfect_matchings_enum, find_perfect_matching, for_each_perfect_matching,
    has_perfect_matching, has_perfect_matching_masked, maximum_matching, PerfectMatching,
};
pub use structure::{
    admissible_edges, count_internally_conformal_paths, elementary_components,
    internally_conformal_paths, is_admissible, is_conformal, is_matching_covered,
    ElementaryDecomposition,
};

use crate::error::{input, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Side of the bipartition. `Black` is the first colour class, `White` the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A simple two-coloured graph in which every edge joins a black and a white vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    colors: Vec<Color>,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    name: Option<String>,
}

impl BipartiteGraph {
    /// Edgeless graph on the given vertex colours.
    pub fn new(colors: Vec<Color>) -> Self {
        let n = colors.len();
        BipartiteGraph {
            colors,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            name: None,
        }
    }

    /// Edgeless graph with `n_black` black vertices `0..n_black` followed by
    /// `n_white` white ones.
    pub fn with_sides(n_black: usize, n_white: usize) -> Self {
        let mut colors = vec![Color::Black; n_black];
        colors.extend(std::iter::repeat_n(Color::White, n_white));
        Self::new(colors)
    }

    pub fn from_edges(colors: Vec<Color>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Self::new(colors);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: Option<String>) {
        self.name = name;
    }

    /// Appends a vertex and returns its id.
    pub fn add_vertex(&mut self, color: Color) -> VertexId {
        self.colors.push(color);
        self.adj.push(Vec::new());
        self.colors.len() - 1
    }

    /// Adds the edge `uv` and returns its id. Rejects loops, parallel edges,
    /// unknown vertices and monochromatic pairs.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        let n = self.num_vertices();
        if u >= n || v >= n {
            return input(format!("edge ({u},{v}) references a vertex outside 0..{n}"));
        }
        if u == v {
            return input(format!("loop at vertex {u}"));
        }
        if self.colors[u] == self.colors[v] {
            return input(format!(
                "edge ({u},{v}) joins two vertices of the same colour"
            ));
        }
        if self.edge_between(u, v).is_some() {
            return input(format!("parallel edge ({u},{v})"));
        }
        let (b, w) = if self.colors[u] == Color::Black {
            (u, v)
        } else {
            (v, u)
        };
        let id = self.edges.len();
        self.edges.push((b, w));
        for (x, y) in [(b, w), (w, b)] {
            let list = &mut self.adj[x];
            let pos = list.partition_point(|&(z, _)| z < y);
            list.insert(pos, (y, id));
        }
        Ok(id)
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn color(&self, v: VertexId) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Edges as `(black, white)` pairs, indexed by edge id.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Neighbours of `v` together with the connecting edge, ascending by neighbour.
    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].iter().map(|&(u, _)| u)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |&(z, _)| z)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (b, w) = self.edges[e];
        if b == v {
            w
        } else {
            b
        }
    }

    pub fn vertices_of(&self, color: Color) -> impl Iterator<Item = VertexId> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == color)
            .map(|(v, _)| v)
    }

    pub fn blacks(&self) -> Vec<VertexId> {
        self.vertices_of(Color::Black).collect()
    }

    pub fn whites(&self) -> Vec<VertexId> {
        self.vertices_of(Color::White).collect()
    }

    pub fn count_color(&self, color: Color) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }

    pub fn is_balanced(&self) -> bool {
        self.count_color(Color::Black) * 2 == self.num_vertices()
    }

    /// Edge cut around `x`: edges with exactly one endpoint in `x`.
    pub fn cut_edges(&self, x: &VertexSet) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(b, w))| x.contains(b) != x.contains(w))
            .map(|(e, _)| e)
            .collect()
    }

    /// Neighbourhood of a vertex set (may intersect the set itself).
    pub fn neighborhood(&self, x: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.num_vertices());
        for v in x.iter() {
            for u in self.neighbors(v) {
                out.insert(u);
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.components_masked(None)
    }

    pub(crate) fn components_masked(&self, edge_alive: Option<&[bool]>) -> Vec<Vec<VertexId>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(u, e) in &self.adj[v] {
                    if edge_alive.is_none_or(|m| m[e]) && !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.num_vertices() > 0 && self.components().len() == 1
    }

    /// Subgraph induced by `keep`, with maps back to this graph.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Subgraph {
        let n = self.num_vertices();
        let mut new_of_old = vec![usize::MAX; n];
        let mut vertex_map = Vec::new();
        let mut colors = Vec::new();
        for v in 0..n {
            if keep.contains(v) {
                new_of_old[v] = vertex_map.len();
                vertex_map.push(v);
                colors.push(self.colors[v]);
            }
        }
        let mut graph = BipartiteGraph::new(colors);
        let mut edge_map = Vec::new();
        for (e, &(b, w)) in self.edges.iter().enumerate() {
            if keep.contains(b) && keep.contains(w) {
                graph
                    .add_edge(new_of_old[b], new_of_old[w])
                    .expect("induced edge of a simple bipartite graph");
                edge_map.push(e);
            }
        }
        Subgraph {
            graph,
            vertex_map,
            edge_map,
        }
    }

    /// `self - drop`.
    pub fn remove_vertices(&self, drop: &VertexSet) -> Subgraph {
        self.induced_subgraph(&drop.complement())
    }

    /// Spanning subgraph keeping the edges flagged in `keep`.
    pub fn spanning_subgraph(&self, keep: &[bool]) -> Subgraph {
        let mut graph = BipartiteGraph::new(self.colors.clone());
        let mut edge_map = Vec::new();
        for (e, &(b, w)) in self.edges.iter().enumerate() {
            if keep[e] {
                graph
                    .add_edge(b, w)
                    .expect("edge of a simple bipartite graph");
                edge_map.push(e);
            }
        }
        Subgraph {
            graph,
            vertex_map: (0..self.num_vertices()).collect(),
            edge_map,
        }
    }

    /// Same graph with the two colour classes exchanged.
    pub fn swap_colors(&self) -> BipartiteGraph {
        let colors = self.colors.iter().map(|c| c.opposite()).collect();
        let mut g = BipartiteGraph::new(colors);
        for &(b, w) in &self.edges {
            g.add_edge(b, w).expect("edge of a simple bipartite graph");
        }
        g.name = self.name.clone();
        g
    }

    /// Disjoint union; vertices of `other` are shifted by `self.num_vertices()`.
    pub fn disjoint_union(&self, other: &BipartiteGraph) -> BipartiteGraph {
        let shift = self.num_vertices();
        let mut colors = self.colors.clone();
        colors.extend_from_slice(&other.colors);
        let mut g = BipartiteGraph::new(colors);
        for &(b, w) in &self.edges {
            g.add_edge(b, w).expect("edge of a simple bipartite graph");
        }
        for &(b, w) in &other.edges {
            g.add_edge(b + shift, w + shift)
                .expect("edge of a simple bipartite graph");
        }
        g
    }
}

/// A subgraph together with the identity of its vertices and edges in the host.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: BipartiteGraph,
    /// Host vertex of each subgraph vertex.
    pub vertex_map: Vec<VertexId>,
    /// Host edge of each subgraph edge.
    pub edge_map: Vec<EdgeId>,
}

impl Subgraph {
    /// Subgraph vertex corresponding to a host vertex, if kept.
    pub fn local_vertex(&self, host: VertexId) -> Option<VertexId> {
        self.vertex_map.binary_search(&host).ok()
    }
}

/// A subset of the vertices of a graph of fixed size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    mask: Vec<bool>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            mask: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            mask: vec![true; n],
        }
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let mut s = Self::new(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        VertexSet { mask }
    }

    pub fn capacity(&self) -> usize {
        self.mask.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: VertexId) {
        self.mask[v] = true;
    }

    pub fn remove(&mut self, v: VertexId) {
        self.mask[v] = false;
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| v)
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet {
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn count_color(&self, g: &BipartiteGraph, color: Color) -> usize {
        self.iter().filter(|&v| g.color(v) == color).count()
    }
}

/// Named small graphs used throughout tests and examples.
pub mod small {
    use super::{BipartiteGraph, Color};

    /// Even cycle `0,1,...,n-1` with even positions black.
    pub fn cycle(n: usize) -> BipartiteGraph {
        assert!(
            n >= 4 && n.is_multiple_of(2),
            "bipartite cycles have even length >= 4"
        );
        let colors = (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    Color::Black
                } else {
                    Color::White
                }
            })
            .collect();
        let mut g = BipartiteGraph::new(colors);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n).unwrap();
        }
        g.with_name(format!("C{n}"))
    }

    /// Path on `n` vertices, even positions black.
    pub fn path(n: usize) -> BipartiteGraph {
        let colors = (0..n)
            .map(|i| {
                if i % 2 == 0 {
                    Color::Black
                } else {
                    Color::White
                }
            })
            .collect();
        let mut g = BipartiteGraph::new(colors);
        for i in 1..n {
            g.add_edge(i - 1, i).unwrap();
        }
        g.with_name(format!("P{n}"))
    }

    /// `K_{s,t}` with blacks `0..s`.
    pub fn complete_bipartite(s: usize, t: usize) -> BipartiteGraph {
        let mut g = BipartiteGraph::with_sides(s, t);
        for b in 0..s {
            for w in 0..t {
                g.add_edge(b, s + w).unwrap();
            }
        }
        g.with_name(format!("K{s},{t}"))
    }

    /// The 3-cube `Q_3`, coloured by popcount parity.
    pub fn cube() -> BipartiteGraph {
        let colors = (0..8u32)
            .map(|v| {
                if v.count_ones() % 2 == 0 {
                    Color::Black
                } else {
                    Color::White
                }
            })
            .collect();
        let mut g = BipartiteGraph::new(colors);
        for v in 0..8usize {
            for bit in 0..3 {
                let u = v ^ (1 << bit);
                if v < u {
                    g.add_edge(v, u).unwrap();
                }
            }
        }
        g.with_name("Q3")
    }

    /// Single edge.
    pub fn k2() -> BipartiteGraph {
        complete_bipartite(1, 1).with_name("K2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_monochromatic_loop_and_parallel_edges() {
        let mut g = BipartiteGraph::with_sides(2, 2);
        assert!(g.add_edge(0, 1).is_err());
        assert!(g.add_edge(0, 0).is_err());
        assert!(g.add_edge(0, 5).is_err());
        g.add_edge(0, 2).unwrap();
        assert!(g.add_edge(2, 0).is_err());
        assert_eq!(g.edge(0), (0, 2));
    }

    #[test]
    fn edges_are_stored_black_first_and_adjacency_sorted() {
        let mut g = BipartiteGraph::with_sides(2, 2);
        g.add_edge(3, 0).unwrap();
        g.add_edge(2, 0).unwrap();
        assert_eq!(g.edge(0), (0, 3));
        assert_eq!(g.neighbors(0).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(g.edge_between(3, 0), Some(0));
    }

    #[test]
    fn cut_and_induced_subgraph() {
        let g = small::cycle(6);
        let x = VertexSet::from_vertices(6, [0, 1, 2]);
        assert_eq!(g.cut_edges(&x).len(), 2);
        let sub = g.induced_subgraph(&x);
        assert_eq!(sub.graph.num_edges(), 2);
        assert_eq!(sub.vertex_map, vec![0, 1, 2]);
        assert_eq!(sub.local_vertex(2), Some(2));
        assert_eq!(sub.local_vertex(4), None);
    }

    #[test]
    fn components_of_disjoint_cycles() {
        let g = small::cycle(4).disjoint_union(&small::cycle(4));
        assert_eq!(g.components().len(), 2);
        assert!(!g.is_connected());
    }
}
