//! Perfect matching decompositions, their width, and the generating-function
//! dynamic program over them.

use crate::config::Bounds;
use crate::error::{input, resource, Result};
use crate::graph::{has_perfect_matching, BipartiteGraph, EdgeId, VertexId, VertexSet};
use crate::matching::matching_porosity;
use crate::poly::{EdgeLabeling, IntPolynomial};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// A tree whose leaves are in bijection with the vertices of a graph and
/// whose other nodes have degree three.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectMatchingDecomposition {
    adj: Vec<Vec<usize>>,
    leaf_vertex: Vec<Option<VertexId>>,
}

/// Tree as a parent array rooted at node 0, plus the leaf-to-vertex map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub parent: Vec<Option<usize>>,
    pub leaves: BTreeMap<usize, VertexId>,
}

impl PerfectMatchingDecomposition {
    /// Builds and validates a decomposition for `g` from tree edges and a
    /// leaf map.
    pub fn new(
        g: &BipartiteGraph,
        nodes: usize,
        edges: &[(usize, usize)],
        leaves: &[(usize, VertexId)],
    ) -> Result<Self> {
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            if a >= nodes || b >= nodes || a == b {
                return input(format!("bad tree edge {a}-{b}"));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut leaf_vertex = vec![None; nodes];
        for &(t, v) in leaves {
            if t >= nodes {
                return input(format!("leaf {t} out of range"));
            }
            leaf_vertex[t] = Some(v);
        }
        let d = PerfectMatchingDecomposition { adj, leaf_vertex }.sorted();
        d.validate(g)?;
        Ok(d)
    }

    pub fn validate(&self, g: &BipartiteGraph) -> Result<()> {
        let nodes = self.adj.len();
        let n = g.num_vertices();
        if n == 0 {
            return input("graph has no vertices");
        }
        if nodes == 1 {
            return if n == 1 && self.leaf_vertex[0] == Some(0) {
                Ok(())
            } else {
                input("bad single-node tree")
            };
        }
        let edges: usize = self.adj.iter().map(Vec::len).sum::<usize>() / 2;
        if edges + 1 != nodes {
            return input("decomposition is not a tree");
        }
        let mut seen = vec![false; nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for &u in &self.adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return input("decomposition tree is not connected");
        }
        let mut hit = vec![false; n];
        for t in 0..nodes {
            match (self.adj[t].len(), self.leaf_vertex[t]) {
                (1, Some(v)) if v < n && !hit[v] => hit[v] = true,
                (1, _) => return input(format!("leaf {t} does not map to a distinct vertex")),
                (3, None) => {}
                _ => {
                    return input(format!(
                        "node {t} is neither a mapped leaf nor of degree three"
                    ))
                }
            }
        }
        if hit.iter().any(|&h| !h) {
            return input("some vertex has no leaf");
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, t: usize) -> &[usize] {
        &self.adj[t]
    }

    pub fn leaf_vertex(&self, t: usize) -> Option<VertexId> {
        self.leaf_vertex[t]
    }

    pub fn leaf_of(&self, v: VertexId) -> Option<usize> {
        self.leaf_vertex.iter().position(|&x| x == Some(v))
    }

    /// Tree edges `(a, b)` with `a < b`.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Vertices mapped to leaves on `b`'s side of the tree edge `a-b`.
    pub fn side(&self, n: usize, a: usize, b: usize) -> VertexSet {
        let mut x = VertexSet::new(n);
        let mut stack = vec![(b, a)];
        while let Some((t, from)) = stack.pop() {
            if let Some(v) = self.leaf_vertex[t] {
                x.insert(v);
            }
            for &u in &self.adj[t] {
                if u != from {
                    stack.push((u, t));
                }
            }
        }
        x
    }

    pub fn to_json(&self) -> DecompositionJson {
        let nodes = self.adj.len();
        let mut parent = vec![None; nodes];
        let mut seen = vec![false; nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for &u in &self.adj[t] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(t);
                    stack.push(u);
                }
            }
        }
        let leaves = (0..nodes)
            .filter_map(|t| self.leaf_vertex[t].map(|v| (t, v)))
            .collect();
        DecompositionJson { parent, leaves }
    }

    pub fn from_json(g: &BipartiteGraph, js: &DecompositionJson) -> Result<Self> {
        let edges: Vec<(usize, usize)> = js
            .parent
            .iter()
            .enumerate()
            .filter_map(|(t, p)| p.map(|p| (p, t)))
            .collect();
        let leaves: Vec<(usize, VertexId)> = js.leaves.iter().map(|(&t, &v)| (t, v)).collect();
        Self::new(g, js.parent.len(), &edges, &leaves)
    }

    /// The same tree with nodes renumbered in BFS order from `root`.
    pub fn reroot(&self, root: usize) -> Self {
        let nodes = self.adj.len();
        let mut order = vec![root];
        let mut new_id = vec![usize::MAX; nodes];
        new_id[root] = 0;
        let mut head = 0;
        while head < order.len() {
            let t = order[head];
            head += 1;
            for &u in &self.adj[t] {
                if new_id[u] == usize::MAX {
                    new_id[u] = order.len();
                    order.push(u);
                }
            }
        }
        let adj = order
            .iter()
            .map(|&t| self.adj[t].iter().map(|&u| new_id[u]).collect())
            .collect();
        let leaf_vertex = order.iter().map(|&t| self.leaf_vertex[t]).collect();
        PerfectMatchingDecomposition { adj, leaf_vertex }.sorted()
    }

    fn sorted(mut self) -> Self {
        for nb in &mut self.adj {
            nb.sort_unstable();
        }
        self
    }

    // From a nested binary split; the top split becomes the central edge.
    fn from_split(split: &Split) -> Self {
        let mut d = PerfectMatchingDecomposition {
            adj: Vec::new(),
            leaf_vertex: Vec::new(),
        };
        match split {
            Split::Leaf(v) => {
                d.adj.push(Vec::new());
                d.leaf_vertex.push(Some(*v));
            }
            Split::Node(a, b) => {
                let x = d.build(a);
                let y = d.build(b);
                d.adj[x].push(y);
                d.adj[y].push(x);
            }
        }
        d.sorted()
    }

    fn build(&mut self, s: &Split) -> usize {
        let t = self.adj.len();
        self.adj.push(Vec::new());
        match s {
            Split::Leaf(v) => self.leaf_vertex.push(Some(*v)),
            Split::Node(a, b) => {
                self.leaf_vertex.push(None);
                for child in [a, b] {
                    let c = self.build(child);
                    self.adj[t].push(c);
                    self.adj[c].push(t);
                }
            }
        }
        t
    }
}

#[derive(Debug, Clone)]
enum Split {
    Leaf(VertexId),
    Node(Box<Split>, Box<Split>),
}

fn require_pm(g: &BipartiteGraph) -> Result<()> {
    if !has_perfect_matching(g) {
        return input("graph has no perfect matching");
    }
    Ok(())
}

/// Largest matching porosity over the cuts of the tree edges.
pub fn decomposition_width(g: &BipartiteGraph, d: &PerfectMatchingDecomposition) -> Result<usize> {
    d.validate(g)?;
    require_pm(g)?;
    let mut w = 0;
    for (a, b) in d.tree_edges() {
        w = w.max(matching_porosity(g, &d.side(g.num_vertices(), a, b))?);
    }
    Ok(w)
}

/// Minimum width over all decompositions, with a witness, for graphs of at
/// most `exact_pmw_bound` vertices. Dynamic programming over vertex subsets:
/// a subtree with leaf set `S` costs the porosity of every cut inside it.
pub fn exact_pmw(g: &BipartiteGraph) -> Result<(usize, PerfectMatchingDecomposition)> {
    exact_pmw_with(g, &Bounds::default())
}

pub fn exact_pmw_with(
    g: &BipartiteGraph,
    bounds: &Bounds,
) -> Result<(usize, PerfectMatchingDecomposition)> {
    let n = g.num_vertices();
    if n > bounds.exact_pmw_bound {
        return resource(format!(
            "exact width limited to {} vertices, got {n}",
            bounds.exact_pmw_bound
        ));
    }
    require_pm(g)?;
    let full = (1usize << n) - 1;
    let set_of = |mask: usize| VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1));
    let mut mp = vec![0usize; full + 1];
    for mask in 1..full {
        if mask & 1 == 1 {
            mp[mask] = matching_porosity(g, &set_of(mask))?;
            mp[full ^ mask] = mp[mask];
        }
    }
    // inner[S]: best width of the cuts strictly inside a subtree on S
    let mut inner = vec![usize::MAX; full + 1];
    let mut choice = vec![0usize; full + 1];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            inner[mask] = 0;
            continue;
        }
        let low = mask & mask.wrapping_neg();
        // submasks containing the lowest bit, to count each split once
        let mut sub = (mask - 1) & mask;
        while sub > 0 {
            if sub & low != 0 {
                let other = mask ^ sub;
                let cost = mp[sub].max(mp[other]).max(inner[sub]).max(inner[other]);
                if cost < inner[mask] {
                    inner[mask] = cost;
                    choice[mask] = sub;
                }
            }
            sub = (sub - 1) & mask;
        }
    }
    fn rebuild(mask: usize, choice: &[usize]) -> Split {
        if mask.count_ones() == 1 {
            return Split::Leaf(mask.trailing_zeros() as usize);
        }
        let a = choice[mask];
        Split::Node(
            Box::new(rebuild(a, choice)),
            Box::new(rebuild(mask ^ a, choice)),
        )
    }
    let d = PerfectMatchingDecomposition::from_split(&rebuild(full, &choice));
    // the top split's two parts are joined by one edge, so its cut is counted once
    let width = if n == 1 { 0 } else { inner[full] };
    Ok((width, d))
}

/// A decomposition by recursive bisection of an order that keeps matched
/// pairs adjacent; each split point is chosen near the middle to minimise
/// the porosity of the left part. Deterministic, no width guarantee.
pub fn heuristic_decomposition(g: &BipartiteGraph) -> Result<PerfectMatchingDecomposition> {
    let Some(pm) = crate::graph::find_perfect_matching(g) else {
        return input("graph has no perfect matching");
    };
    let n = g.num_vertices();
    let mates = pm.mates(g);
    // BFS over vertices, emitting each vertex together with its mate
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if placed[v] {
                continue;
            }
            for u in [v, mates[v]] {
                if !placed[u] {
                    placed[u] = true;
                    order.push(u);
                    for x in g.neighbors(u) {
                        if !placed[x] {
                            queue.push_back(x);
                        }
                    }
                }
            }
        }
    }
    fn split(g: &BipartiteGraph, part: &[VertexId]) -> Result<Split> {
        if part.len() == 1 {
            return Ok(Split::Leaf(part[0]));
        }
        let len = part.len();
        let mut best = (usize::MAX, len / 2);
        if len >= 4 {
            let lo = (len / 3).max(1);
            let hi = (2 * len).div_ceil(3).min(len - 1);
            for cut in lo..=hi {
                let x = VertexSet::from_vertices(g.num_vertices(), part[..cut].iter().copied());
                let key = matching_porosity(g, &x)?;
                let dist = cut.abs_diff(len / 2);
                if (key, dist) < (best.0, best.1.abs_diff(len / 2)) {
                    best = (key, cut);
                }
            }
        }
        let cut = best.1.clamp(1, len - 1);
        Ok(Split::Node(
            Box::new(split(g, &part[..cut])?),
            Box::new(split(g, &part[cut..])?),
        ))
    }
    Ok(PerfectMatchingDecomposition::from_split(&split(g, &order)?))
}

/// Boundary matching, as sorted edge ids.
pub type BoundaryMatching = Vec<EdgeId>;

/// Table of one tree edge: for each boundary matching `F` (restricted to
/// those that extend to a perfect matching), the generating function of the
/// matchings of `G[X]` covering exactly the vertices of `X` not met by `F`.
#[derive(Debug, Clone)]
pub struct EdgeTable {
    pub below: VertexSet,
    pub entries: HashMap<BoundaryMatching, IntPolynomial>,
}

/// Per-edge generating functions at `v`: for each edge `uv`, the generating
/// function of `g - u - v` times the label of `uv`. The tree is rooted at the
/// leaf of `v` and tables are merged bottom-up; an edge label is applied at
/// the node where its two ends first meet.
pub fn vertex_gen_dp(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    d: &PerfectMatchingDecomposition,
    v: VertexId,
) -> Result<Vec<(EdgeId, IntPolynomial)>> {
    vertex_gen_dp_with(g, labels, d, v, &Bounds::default())
}

pub fn vertex_gen_dp_with(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    d: &PerfectMatchingDecomposition,
    v: VertexId,
    bounds: &Bounds,
) -> Result<Vec<(EdgeId, IntPolynomial)>> {
    let trace = dp_tables(g, labels, d, v, bounds)?;
    let root = trace.last().expect("root table");
    Ok(g.incident(v)
        .iter()
        .map(|&(_, e)| {
            let val = root.entries.get(&vec![e]).cloned().unwrap_or_default();
            (e, val.mul_ref(&labels[e]))
        })
        .collect())
}

/// `Σ_M Π_{e∈M} p(e)` through [`vertex_gen_dp`] at the lowest-numbered vertex.
pub fn generating_function_dp(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    d: &PerfectMatchingDecomposition,
) -> Result<IntPolynomial> {
    generating_function_dp_with(g, labels, d, &Bounds::default())
}

pub fn generating_function_dp_with(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    d: &PerfectMatchingDecomposition,
    bounds: &Bounds,
) -> Result<IntPolynomial> {
    if !has_perfect_matching(g) {
        return Ok(IntPolynomial::zero());
    }
    let mut total = IntPolynomial::zero();
    for (_, p) in vertex_gen_dp_with(g, labels, d, 0, bounds)? {
        total.add_assign_ref(&p);
    }
    Ok(total)
}

/// All tables of the dynamic program rooted at the leaf of `v`, children
/// before parents; the last one belongs to the edge at the root leaf.
pub fn dp_tables(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    d: &PerfectMatchingDecomposition,
    v: VertexId,
    bounds: &Bounds,
) -> Result<Vec<EdgeTable>> {
    d.validate(g)?;
    if labels.len() != g.num_edges() {
        return input("one label per edge is required");
    }
    require_pm(g)?;
    let width = decomposition_width(g, d)?;
    if width > bounds.width_cap {
        return resource(format!(
            "decomposition width {width} exceeds the cap {}",
            bounds.width_cap
        ));
    }
    let n = g.num_vertices();
    let root = d.leaf_of(v).expect("validated leaf map");
    if n == 1 {
        return input("a single vertex has no perfect matching");
    }
    let top = d.adj[root][0];
    let mut out = Vec::new();
    table_below(g, labels, d, top, root, &mut out)?;
    Ok(out)
}

// Table for the tree edge parent-t, computing child tables first.
fn table_below(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    d: &PerfectMatchingDecomposition,
    t: usize,
    parent: usize,
    out: &mut Vec<EdgeTable>,
) -> Result<usize> {
    let n = g.num_vertices();
    if let Some(u) = d.leaf_vertex[t] {
        let below = VertexSet::from_vertices(n, [u]);
        let entries = g
            .incident(u)
            .iter()
            .map(|&(_, e)| (vec![e], IntPolynomial::one()))
            .collect();
        out.push(EdgeTable { below, entries });
        return Ok(out.len() - 1);
    }
    let kids: Vec<usize> = d.adj[t].iter().copied().filter(|&c| c != parent).collect();
    let i1 = table_below(g, labels, d, kids[0], t, out)?;
    let i2 = table_below(g, labels, d, kids[1], t, out)?;
    let (x1, x2) = (out[i1].below.clone(), out[i2].below.clone());
    let mut below = x1.clone();
    for v in x2.iter() {
        below.insert(v);
    }
    let cap = matching_porosity(g, &below)?;
    // split each child key into its edges across to the sibling and the rest
    let cross = |e: EdgeId, other: &VertexSet| {
        let (b, w) = g.edge(e);
        other.contains(b) || other.contains(w)
    };
    let mut by_cross: HashMap<Vec<EdgeId>, Vec<(Vec<EdgeId>, &IntPolynomial)>> = HashMap::new();
    for (f1, val) in &out[i1].entries {
        let (c, rest): (Vec<EdgeId>, Vec<EdgeId>) = f1.iter().partition(|&&e| cross(e, &x2));
        by_cross.entry(c).or_default().push((rest, val));
    }
    let mut entries: HashMap<BoundaryMatching, IntPolynomial> = HashMap::new();
    for (f2, val2) in &out[i2].entries {
        let (c, rest2): (Vec<EdgeId>, Vec<EdgeId>) = f2.iter().partition(|&&e| cross(e, &x1));
        let Some(list) = by_cross.get(&c) else {
            continue;
        };
        let mut weight = val2.clone();
        for &e in &c {
            weight = weight.mul_ref(&labels[e]);
        }
        for (rest1, val1) in list {
            if rest1.len() + rest2.len() > cap {
                continue;
            }
            // both halves leave X through distinct outside vertices
            let clash = rest1.iter().any(|&a| {
                let (ab, aw) = g.edge(a);
                rest2.iter().any(|&b| {
                    let (bb, bw) = g.edge(b);
                    (!below.contains(ab) && ab == bb) || (!below.contains(aw) && aw == bw)
                })
            });
            if clash {
                continue;
            }
            let mut key: Vec<EdgeId> = rest1.iter().chain(&rest2).copied().collect();
            key.sort_unstable();
            let term = val1.mul_ref(&weight);
            entries.entry(key).or_default().add_assign_ref(&term);
        }
    }
    entries.retain(|_, p| !p.is_zero());
    out.push(EdgeTable { below, entries });
    Ok(out.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::small;
    use crate::permanent::enumerate_generating_function;

    fn unit_x(g: &BipartiteGraph) -> EdgeLabeling {
        vec![IntPolynomial::x(); g.num_edges()]
    }

    #[test]
    fn widths_of_small_graphs() {
        let c4 = small::cycle(4);
        assert_eq!(exact_pmw(&c4).unwrap().0, 2);
        let (w, d) = exact_pmw(&small::k2()).unwrap();
        assert_eq!(w, 1);
        assert_eq!(decomposition_width(&small::k2(), &d).unwrap(), 1);
        let (w6, d6) = exact_pmw(&small::cycle(6)).unwrap();
        assert_eq!(decomposition_width(&small::cycle(6), &d6).unwrap(), w6);
        assert_eq!(w6, 2);
    }

    #[test]
    fn json_round_trip_and_reroot() {
        let g = small::cube();
        let d = heuristic_decomposition(&g).unwrap();
        let back = PerfectMatchingDecomposition::from_json(&g, &d.to_json()).unwrap();
        assert_eq!(back, d);
        let w = decomposition_width(&g, &d).unwrap();
        for t in 0..d.num_nodes() {
            assert_eq!(decomposition_width(&g, &d.reroot(t)).unwrap(), w);
        }
    }

    #[test]
    fn vertex_gen_on_c4() {
        let g = small::cycle(4);
        let d = exact_pmw(&g).unwrap().1;
        for v in 0..4 {
            for (_, p) in vertex_gen_dp(&g, &unit_x(&g), &d, v).unwrap() {
                assert_eq!(p, IntPolynomial::monomial(1, 2));
            }
        }
        let labels: EdgeLabeling = (1..=4).map(|k| IntPolynomial::monomial(1, k)).collect();
        // vertex 0 meets edges 0-1 (label x) and 3-0 (label x^4)
        let vg: HashMap<EdgeId, IntPolynomial> = vertex_gen_dp(&g, &labels, &d, 0)
            .unwrap()
            .into_iter()
            .collect();
        let e01 = g.edge_between(0, 1).unwrap();
        let e30 = g.edge_between(3, 0).unwrap();
        assert_eq!(vg[&e01], IntPolynomial::monomial(1, 4));
        assert_eq!(vg[&e30], IntPolynomial::monomial(1, 6));
        assert_eq!(
            generating_function_dp(&g, &labels, &d).unwrap(),
            IntPolynomial::from_i64s(&[0, 0, 0, 0, 1, 0, 1])
        );
    }

    #[test]
    fn dp_matches_enumeration() {
        for g in [
            small::cycle(6),
            small::cube(),
            small::complete_bipartite(3, 3),
            crate::generators::cylindrical_matching_grid(2)
                .unwrap()
                .graph,
        ] {
            let labels: EdgeLabeling = (0..g.num_edges())
                .map(|e| IntPolynomial::monomial(1, e % 3))
                .collect();
            let want = enumerate_generating_function(&g, &labels).unwrap();
            let d = heuristic_decomposition(&g).unwrap();
            assert_eq!(generating_function_dp(&g, &labels, &d).unwrap(), want);
            if g.num_vertices() <= 10 {
                let d = exact_pmw(&g).unwrap().1;
                assert_eq!(generating_function_dp(&g, &labels, &d).unwrap(), want);
            }
        }
    }

    #[test]
    fn width_cap_is_enforced() {
        let g = small::complete_bipartite(6, 6);
        let d = heuristic_decomposition(&g).unwrap();
        let bounds = Bounds {
            width_cap: 2,
            ..Bounds::default()
        };
        assert!(matches!(
            generating_function_dp_with(&g, &unit_x(&g), &d, &bounds),
            Err(crate::error::Error::Resource(_))
        ));
    }
}
