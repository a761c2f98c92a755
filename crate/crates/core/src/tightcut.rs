//! Tight cuts, the tight cut decomposition into braces, and the gluing
//! operations (splicing, 4-cycle sums) that invert it.

use crate::error::{input, Error, Result};
use crate::graph::{
    are_isomorphic, has_perfect_matching_masked, is_conformal, is_matching_covered,
    maximum_matching, BipartiteGraph, Color, VertexId, VertexSet,
};
use crate::matching::{is_brace, matching_porosity, min_cut_usage};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

/// Result of a tight cut test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightCutCheck {
    pub tight: bool,
    /// One shore has fewer than two vertices.
    pub trivial: bool,
}

/// Whether every perfect matching uses exactly one edge of the cut around `x`.
///
/// When both shores have at least three vertices the structural test is used:
/// one colour class of `x` is smaller by one than the other and its whole
/// neighbourhood stays inside `x`. Smaller shores are checked by optimising
/// the number of cut edges in a perfect matching in both directions.
pub fn is_tight_cut(g: &BipartiteGraph, x: &VertexSet) -> Result<TightCutCheck> {
    if !is_matching_covered(g) {
        return input("graph is not matching covered");
    }
    Ok(tight_cut_unchecked(g, x))
}

pub(crate) fn tight_cut_unchecked(g: &BipartiteGraph, x: &VertexSet) -> TightCutCheck {
    let size = x.len();
    let rest = g.num_vertices() - size;
    let trivial = size < 2 || rest < 2;
    if size == 0 || rest == 0 {
        return TightCutCheck {
            tight: false,
            trivial,
        };
    }
    let tight = if size >= 3 && rest >= 3 {
        minority_color(g, x).is_some()
    } else {
        matching_porosity(g, x).ok() == Some(1) && min_cut_usage(g, x).ok() == Some(1)
    };
    TightCutCheck { tight, trivial }
}

/// The colour class of `x` that is one smaller than the other and closed under
/// neighbourhood, if there is one.
pub fn minority_color(g: &BipartiteGraph, x: &VertexSet) -> Option<Color> {
    let nb = x.count_color(g, Color::Black);
    let nw = x.count_color(g, Color::White);
    for (c, small, big) in [(Color::Black, nb, nw), (Color::White, nw, nb)] {
        if small + 1 == big
            && x.iter()
                .filter(|&v| g.color(v) == c)
                .all(|v| g.neighbors(v).all(|u| x.contains(u)))
        {
            return Some(c);
        }
    }
    None
}

/// A shore of a non-trivial tight cut, or `None` iff `g` is a brace.
pub fn find_nontrivial_tight_cut(g: &BipartiteGraph) -> Result<Option<VertexSet>> {
    find_nontrivial_tight_cut_seeded(g, None)
}

/// As [`find_nontrivial_tight_cut`]; with a seed the candidate order is
/// shuffled, so different seeds may find different cuts.
pub fn find_nontrivial_tight_cut_seeded(
    g: &BipartiteGraph,
    seed: Option<u64>,
) -> Result<Option<VertexSet>> {
    if !is_matching_covered(g) {
        return input("graph is not matching covered");
    }
    Ok(nontrivial_cut_unchecked(g, seed))
}

pub(crate) fn nontrivial_cut_unchecked(g: &BipartiteGraph, seed: Option<u64>) -> Option<VertexSet> {
    if g.num_vertices() < 6 {
        return None;
    }
    let mut blacks = g.blacks();
    let mut whites = g.whites();
    if let Some(s) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        blacks.shuffle(&mut rng);
        whites.shuffle(&mut rng);
    }
    let (s1, s2) = violating_pair(g, &blacks, &whites)?;
    let x = hall_shore(g, &s1, &s2);
    debug_assert!(tight_cut_unchecked(g, &x).tight);
    Some(x)
}

// A pair of black and a pair of white vertices whose removal kills every
// perfect matching. For each white pair and first black, one maximum matching
// tells which second blacks can still be left exposed.
fn violating_pair(
    g: &BipartiteGraph,
    blacks: &[VertexId],
    whites: &[VertexId],
) -> Option<([VertexId; 2], [VertexId; 2])> {
    let n = g.num_vertices();
    let half = blacks.len();
    for i in 0..whites.len() {
        for j in i + 1..whites.len() {
            let (w1, w2) = (whites[i], whites[j]);
            for &b1 in blacks {
                let mut alive = vec![true; n];
                alive[w1] = false;
                alive[w2] = false;
                alive[b1] = false;
                let mate = maximum_matching(g, Some(&alive), None);
                let matched = blacks
                    .iter()
                    .filter(|&&b| alive[b] && mate[b].is_some())
                    .count();
                if matched < half - 2 {
                    let b2 = *blacks.iter().find(|&&b| b != b1)?;
                    return Some(([b1, b2], [w1, w2]));
                }
                let exposed = *blacks.iter().find(|&&b| alive[b] && mate[b].is_none())?;
                let reach = alternating_reach(g, &alive, &mate, exposed);
                if let Some(&b2) = blacks.iter().find(|&&b| b != b1 && !reach.contains(&b)) {
                    return Some(([b1, b2], [w1, w2]));
                }
            }
        }
    }
    None
}

// Blacks reachable from `root` along alternating paths (non-matching edge to
// a white, then that white's matching edge back to a black).
fn alternating_reach(
    g: &BipartiteGraph,
    alive: &[bool],
    mate: &[Option<usize>],
    root: VertexId,
) -> BTreeSet<VertexId> {
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(b) = queue.pop_front() {
        for &(w, e) in g.incident(b) {
            if !alive[w] || mate[b] == Some(e) {
                continue;
            }
            if let Some(f) = mate[w] {
                let nb = g.other_end(f, w);
                if seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
    }
    seen
}

// X = R ∪ N(R) for the Hall violator R found after deleting s1 and s2.
fn hall_shore(g: &BipartiteGraph, s1: &[VertexId; 2], s2: &[VertexId; 2]) -> VertexSet {
    let n = g.num_vertices();
    let mut alive = vec![true; n];
    for &v in s1.iter().chain(s2) {
        alive[v] = false;
    }
    debug_assert!(!has_perfect_matching_masked(g, Some(&alive), None));
    let mate = maximum_matching(g, Some(&alive), None);
    let root = g
        .vertices_of(Color::Black)
        .find(|&b| alive[b] && mate[b].is_none())
        .expect("an exposed black vertex exists");
    let r = alternating_reach(g, &alive, &mate, root);
    let mut x = VertexSet::new(n);
    for &b in &r {
        x.insert(b);
        for w in g.neighbors(b) {
            x.insert(w);
        }
    }
    x
}

/// `g` with the shore `x` identified into one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub graph: BipartiteGraph,
    /// Original vertex of each new vertex; `None` for the contracted one.
    pub origin: Vec<Option<VertexId>>,
    /// The vertex standing for `x`.
    pub contracted: VertexId,
}

/// Identifies the shore of a non-trivial tight cut into a single vertex,
/// which takes the majority colour of `x`. The new vertex is appended last.
pub fn contract_shore(g: &BipartiteGraph, x: &VertexSet) -> Result<Contraction> {
    let check = is_tight_cut(g, x)?;
    if !check.tight {
        return input("the shore does not define a tight cut");
    }
    if check.trivial {
        return input("cannot contract a trivial shore");
    }
    Ok(contract_unchecked(g, x))
}

pub(crate) fn contract_unchecked(g: &BipartiteGraph, x: &VertexSet) -> Contraction {
    let nb = x.count_color(g, Color::Black);
    let nw = x.count_color(g, Color::White);
    let color = if nb > nw { Color::Black } else { Color::White };
    let mut origin = Vec::new();
    let mut new_id = vec![usize::MAX; g.num_vertices()];
    let mut colors = Vec::new();
    for v in 0..g.num_vertices() {
        if !x.contains(v) {
            new_id[v] = origin.len();
            origin.push(Some(v));
            colors.push(g.color(v));
        }
    }
    let c = origin.len();
    origin.push(None);
    colors.push(color);
    for v in x.iter() {
        new_id[v] = c;
    }
    let mut graph = BipartiteGraph::new(colors);
    for &(b, w) in g.edges() {
        let (nb, nw) = (new_id[b], new_id[w]);
        if nb == nw || graph.edge_between(nb, nw).is_some() {
            continue;
        }
        graph
            .add_edge(nb, nw)
            .expect("contraction of a tight cut stays bipartite");
    }
    Contraction {
        graph,
        origin,
        contracted: c,
    }
}

/// Vertex identity inside a tight cut decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexLabel {
    /// A vertex of the decomposed graph.
    Original(VertexId),
    /// Contraction vertex of cut `cut`. Side 0 lives in the graph where the
    /// shore was contracted, side 1 where the complement was.
    Marker { cut: usize, side: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightCutNode {
    pub graph: BipartiteGraph,
    pub labels: Vec<VertexLabel>,
}

impl TightCutNode {
    pub fn vertex_of(&self, label: VertexLabel) -> Option<VertexId> {
        self.labels.iter().position(|&l| l == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRecord {
    /// Node holding marker side 0 and node holding marker side 1.
    pub nodes: (usize, usize),
    /// The cut edges, as (label inside the shore, label outside it), in terms
    /// of the labels present when the cut was taken.
    pub cross: Vec<(VertexLabel, VertexLabel)>,
}

/// Tight cut decomposition: brace nodes joined by the cuts that separated them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightCutTree {
    pub nodes: Vec<TightCutNode>,
    pub cuts: Vec<CutRecord>,
}

impl TightCutTree {
    pub fn braces(&self) -> impl Iterator<Item = &BipartiteGraph> {
        self.nodes.iter().map(|n| &n.graph)
    }

    /// Splices all cuts back, latest first. The result carries the original
    /// vertex ids, so it is equal to the decomposed graph up to edge order.
    pub fn reconstruct(&self) -> Result<BipartiteGraph> {
        let mut parts: Vec<Option<TightCutNode>> = self.nodes.iter().cloned().map(Some).collect();
        for (c, rec) in self.cuts.iter().enumerate().rev() {
            let find = |parts: &[Option<TightCutNode>], side: u8| {
                parts.iter().position(|p| {
                    p.as_ref().is_some_and(|p| {
                        p.vertex_of(VertexLabel::Marker { cut: c, side }).is_some()
                    })
                })
            };
            let a = find(&parts, 0)
                .ok_or_else(|| Error::Internal(format!("marker 0 of cut {c} missing")))?;
            let b = find(&parts, 1)
                .ok_or_else(|| Error::Internal(format!("marker 1 of cut {c} missing")))?;
            let pa = parts[a].take().expect("present");
            let pb = parts[b].take().expect("present");
            let merged = splice_labelled(&pa, &pb, c, &rec.cross)?;
            parts[a] = Some(merged);
        }
        let whole: Vec<TightCutNode> = parts.into_iter().flatten().collect();
        if whole.len() != 1 {
            return Err(Error::Internal(
                "decomposition tree is not connected".into(),
            ));
        }
        let node = &whole[0];
        let n = node.graph.num_vertices();
        let mut pos = vec![usize::MAX; n];
        for (i, l) in node.labels.iter().enumerate() {
            match *l {
                VertexLabel::Original(v) if v < n => pos[v] = i,
                _ => return Err(Error::Internal("stray marker after reconstruction".into())),
            }
        }
        let colors = (0..n).map(|v| node.graph.color(pos[v])).collect();
        let mut edges: Vec<(usize, usize)> = node
            .graph
            .edges()
            .iter()
            .map(|&(b, w)| (node_original(node, b), node_original(node, w)))
            .collect();
        edges.sort_unstable();
        BipartiteGraph::from_edges(colors, &edges)
    }

    pub fn to_json(&self) -> TightCutTreeJson {
        TightCutTreeJson {
            nodes: self
                .nodes
                .iter()
                .map(|n| TightCutNodeJson {
                    graph: crate::graph::GraphJson::from_graph(&n.graph),
                    labels: n.labels.clone(),
                })
                .collect(),
            cuts: self.cuts.clone(),
        }
    }
}

fn node_original(node: &TightCutNode, v: VertexId) -> VertexId {
    match node.labels[v] {
        VertexLabel::Original(o) => o,
        VertexLabel::Marker { .. } => unreachable!("checked before"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightCutNodeJson {
    pub graph: crate::graph::GraphJson,
    pub labels: Vec<VertexLabel>,
}

/// Serialised form: nodes with their graphs and vertex labels; cuts name the
/// two nodes they join and the edges they cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightCutTreeJson {
    pub nodes: Vec<TightCutNodeJson>,
    pub cuts: Vec<CutRecord>,
}

fn splice_labelled(
    a: &TightCutNode,
    b: &TightCutNode,
    cut: usize,
    cross: &[(VertexLabel, VertexLabel)],
) -> Result<TightCutNode> {
    let ma = VertexLabel::Marker { cut, side: 0 };
    let mb = VertexLabel::Marker { cut, side: 1 };
    let mut colors = Vec::new();
    let mut labels = Vec::new();
    let mut id_a = vec![usize::MAX; a.graph.num_vertices()];
    let mut id_b = vec![usize::MAX; b.graph.num_vertices()];
    for (v, &l) in a.labels.iter().enumerate() {
        if l != ma {
            id_a[v] = labels.len();
            labels.push(l);
            colors.push(a.graph.color(v));
        }
    }
    for (v, &l) in b.labels.iter().enumerate() {
        if l != mb {
            id_b[v] = labels.len();
            labels.push(l);
            colors.push(b.graph.color(v));
        }
    }
    let mut g = BipartiteGraph::new(colors);
    for (node, ids) in [(a, &id_a), (b, &id_b)] {
        for &(x, y) in node.graph.edges() {
            if ids[x] != usize::MAX && ids[y] != usize::MAX {
                g.add_edge(ids[x], ids[y])?;
            }
        }
    }
    for &(inside, outside) in cross {
        let find = |l: VertexLabel| labels.iter().position(|&m| m == l);
        let (Some(u), Some(v)) = (find(inside), find(outside)) else {
            return Err(Error::Internal(
                "cut edge endpoint missing during reconstruction".into(),
            ));
        };
        g.add_edge(u, v)?;
    }
    Ok(TightCutNode { graph: g, labels })
}

/// Decomposes a matching covered graph into braces. With a seed, the cuts
/// are chosen in a shuffled order; the brace multiset does not depend on it.
pub fn tight_cut_decomposition(g: &BipartiteGraph) -> Result<TightCutTree> {
    tight_cut_decomposition_seeded(g, None)
}

pub fn tight_cut_decomposition_seeded(
    g: &BipartiteGraph,
    seed: Option<u64>,
) -> Result<TightCutTree> {
    if !is_matching_covered(g) {
        return input("graph is not matching covered");
    }
    let mut out: Vec<TightCutNode> = Vec::new();
    let mut cuts: Vec<CutRecord> = Vec::new();
    let start = TightCutNode {
        graph: g.clone(),
        labels: (0..g.num_vertices()).map(VertexLabel::Original).collect(),
    };
    let mut pending = vec![start];
    let mut round = 0u64;
    while let Some(node) = pending.pop() {
        round += 1;
        let cut_seed = seed.map(|s| s.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(round));
        let Some(x) = nontrivial_cut_unchecked(&node.graph, cut_seed) else {
            out.push(node);
            continue;
        };
        let c = cuts.len();
        let cross = node
            .graph
            .cut_edges(&x)
            .into_iter()
            .map(|e| {
                let (u, v) = node.graph.edge(e);
                if x.contains(u) {
                    (node.labels[u], node.labels[v])
                } else {
                    (node.labels[v], node.labels[u])
                }
            })
            .collect();
        cuts.push(CutRecord {
            nodes: (usize::MAX, usize::MAX),
            cross,
        });
        pending.push(relabel(
            &node,
            &x.complement(),
            VertexLabel::Marker { cut: c, side: 1 },
        ));
        pending.push(relabel(&node, &x, VertexLabel::Marker { cut: c, side: 0 }));
    }
    for (c, rec) in cuts.iter_mut().enumerate() {
        let holder = |side: u8| {
            out.iter()
                .position(|n| n.vertex_of(VertexLabel::Marker { cut: c, side }).is_some())
                .expect("every marker ends in a brace")
        };
        rec.nodes = (holder(0), holder(1));
    }
    Ok(TightCutTree { nodes: out, cuts })
}

fn relabel(node: &TightCutNode, shore: &VertexSet, marker: VertexLabel) -> TightCutNode {
    let con = contract_unchecked(&node.graph, shore);
    let labels = con
        .origin
        .iter()
        .map(|o| match o {
            Some(v) => node.labels[*v],
            None => marker,
        })
        .collect();
    TightCutNode {
        graph: con.graph,
        labels,
    }
}

/// Result of [`splice`]: the glued graph and where each input vertex went.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splice {
    pub graph: BipartiteGraph,
    pub left: Vec<Option<VertexId>>,
    pub right: Vec<Option<VertexId>>,
}

/// Disjoint union of `g1 - v1` and `g2 - v2` plus `cross` (pairs of a
/// neighbour of `v1` and a neighbour of `v2`). Every neighbour of either
/// deleted vertex must be touched by `cross`.
pub fn splice(
    g1: &BipartiteGraph,
    v1: VertexId,
    g2: &BipartiteGraph,
    v2: VertexId,
    cross: &[(VertexId, VertexId)],
) -> Result<Splice> {
    if v1 >= g1.num_vertices() || v2 >= g2.num_vertices() {
        return input("splice vertex out of range");
    }
    if g1.color(v1) == g2.color(v2) {
        return input("splice vertices must have opposite colours");
    }
    let mut touched1 = BTreeSet::new();
    let mut touched2 = BTreeSet::new();
    for &(a, b) in cross {
        if g1.edge_between(v1, a).is_none() || g2.edge_between(v2, b).is_none() {
            return input(format!(
                "cross edge ({a},{b}) does not join the two neighbourhoods"
            ));
        }
        touched1.insert(a);
        touched2.insert(b);
    }
    if g1.neighbors(v1).any(|a| !touched1.contains(&a))
        || g2.neighbors(v2).any(|b| !touched2.contains(&b))
    {
        return input("every neighbour of the spliced vertices must be covered by a cross edge");
    }
    let mut colors = Vec::new();
    let mut left = vec![None; g1.num_vertices()];
    let mut right = vec![None; g2.num_vertices()];
    for v in 0..g1.num_vertices() {
        if v != v1 {
            left[v] = Some(colors.len());
            colors.push(g1.color(v));
        }
    }
    for v in 0..g2.num_vertices() {
        if v != v2 {
            right[v] = Some(colors.len());
            colors.push(g2.color(v));
        }
    }
    let mut g = BipartiteGraph::new(colors);
    for &(b, w) in g1.edges() {
        if let (Some(x), Some(y)) = (left[b], left[w]) {
            g.add_edge(x, y)?;
        }
    }
    for &(b, w) in g2.edges() {
        if let (Some(x), Some(y)) = (right[b], right[w]) {
            g.add_edge(x, y)?;
        }
    }
    for &(a, b) in cross {
        g.add_edge(
            left[a].expect("neighbour kept"),
            right[b].expect("neighbour kept"),
        )?;
    }
    Ok(Splice {
        graph: g,
        left,
        right,
    })
}

/// Identifies the 4-cycles of all parts (given as vertices in cyclic order,
/// matched position by position) and drops the cycle edges listed in
/// `forget` (edge `i` joins positions `i` and `i+1 mod 4`). The vertices of
/// the first part keep their ids; other parts follow in order.
pub fn cycle_sum(
    parts: &[(&BipartiteGraph, [VertexId; 4])],
    forget: &[usize],
) -> Result<BipartiteGraph> {
    if parts.is_empty() {
        return input("cycle sum needs at least one part");
    }
    if forget.iter().any(|&i| i >= 4) {
        return input("forgotten edges must be indices 0..4 of the identified cycle");
    }
    let (g0, c0) = parts[0];
    for (g, c) in parts {
        check_conformal_four_cycle(g, c)?;
        for i in 0..4 {
            if g.color(c[i]) != g0.color(c0[i]) {
                return input("cycle identification does not respect colours");
            }
        }
    }
    let mut colors: Vec<Color> = g0.colors().to_vec();
    let mut maps: Vec<Vec<VertexId>> = Vec::new();
    for (k, (g, c)) in parts.iter().enumerate() {
        let mut map = vec![usize::MAX; g.num_vertices()];
        for v in 0..g.num_vertices() {
            if k == 0 {
                map[v] = v;
            } else if let Some(i) = c.iter().position(|&x| x == v) {
                map[v] = c0[i];
            } else {
                map[v] = colors.len();
                colors.push(g.color(v));
            }
        }
        maps.push(map);
    }
    let forgotten: Vec<(VertexId, VertexId)> =
        forget.iter().map(|&i| (c0[i], c0[(i + 1) % 4])).collect();
    let mut out = BipartiteGraph::new(colors);
    for (k, (g, _)) in parts.iter().enumerate() {
        for &(b, w) in g.edges() {
            let (x, y) = (maps[k][b], maps[k][w]);
            if out.edge_between(x, y).is_some() {
                continue;
            }
            if forgotten
                .iter()
                .any(|&(p, q)| (p, q) == (x, y) || (q, p) == (x, y))
            {
                continue;
            }
            out.add_edge(x, y)?;
        }
    }
    Ok(out)
}

/// 4-cycle sum of two graphs.
pub fn four_cycle_sum(
    g1: &BipartiteGraph,
    c1: [VertexId; 4],
    g2: &BipartiteGraph,
    c2: [VertexId; 4],
    forget: &[usize],
) -> Result<BipartiteGraph> {
    cycle_sum(&[(g1, c1), (g2, c2)], forget)
}

/// Trisum: three graphs summed along one common 4-cycle.
pub fn trisum(
    parts: [(&BipartiteGraph, [VertexId; 4]); 3],
    forget: &[usize],
) -> Result<BipartiteGraph> {
    cycle_sum(&parts, forget)
}

fn check_conformal_four_cycle(g: &BipartiteGraph, c: &[VertexId; 4]) -> Result<()> {
    for i in 0..4 {
        if c[i] >= g.num_vertices() || g.edge_between(c[i], c[(i + 1) % 4]).is_none() {
            return input("the given vertices do not form a 4-cycle");
        }
    }
    let x = VertexSet::from_vertices(g.num_vertices(), c.iter().copied());
    if x.len() != 4 || !is_conformal(g, &x) {
        return input("the 4-cycle is not conformal");
    }
    Ok(())
}

/// Whether two brace lists agree as multisets up to isomorphism.
pub fn same_brace_multiset(a: &[BipartiteGraph], b: &[BipartiteGraph]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    'outer: for g in a {
        for (j, h) in b.iter().enumerate() {
            if !used[j] && are_isomorphic(g, h) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Every node of the tree is a brace.
pub fn all_nodes_are_braces(tree: &TightCutTree) -> bool {
    tree.braces().all(is_brace)
}
