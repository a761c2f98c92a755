//! Matching minors: bicontraction, model checking and desk-scale searches.

use crate::config::Bounds;
use crate::error::{input, resource, Error, Result};
use crate::graph::{
    are_isomorphic, find_isomorphism, has_perfect_matching, has_perfect_matching_masked,
    maximum_matching, BipartiteGraph, Color, VertexId, VertexSet,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

/// Contracts both edges at the degree-2 vertex `v` into one vertex, coloured
/// like `v`'s neighbours and appended last; parallel edges are merged.
pub fn bicontract(g: &BipartiteGraph, v: VertexId) -> Result<BipartiteGraph> {
    if v >= g.num_vertices() {
        return input(format!("vertex {v} out of range"));
    }
    if g.degree(v) != 2 {
        return input(format!("vertex {v} has degree {}, expected 2", g.degree(v)));
    }
    let nb: Vec<VertexId> = g.neighbors(v).collect();
    let drop = VertexSet::from_vertices(g.num_vertices(), [v, nb[0], nb[1]]);
    let sub = g.remove_vertices(&drop);
    let mut out = sub.graph;
    let c = out.add_vertex(g.color(nb[0]));
    let mut seen = BTreeSet::new();
    for &u in &nb {
        for x in g.neighbors(u) {
            if x != v && seen.insert(x) {
                let lx = sub.vertex_map.binary_search(&x).expect("kept vertex");
                out.add_edge(lx, c)?;
            }
        }
    }
    Ok(out)
}

/// Image of one vertex of `H`: a tree of `G` whose old vertices are joined by
/// paths with an odd number of new vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexTree {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<[VertexId; 2]>,
    pub old: Vec<VertexId>,
}

impl VertexTree {
    pub fn single(v: VertexId) -> Self {
        VertexTree {
            vertices: vec![v],
            edges: Vec::new(),
            old: vec![v],
        }
    }
}

/// A matching-minor model of `H` in `G`: one tree per vertex of `H` (by id),
/// one odd path per edge of `H` (by id), and a perfect matching of what is
/// left of `G`, as vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingMinorModel {
    pub vertex_trees: Vec<VertexTree>,
    pub edge_paths: Vec<Vec<VertexId>>,
    pub residual: Vec<[VertexId; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelViolation {
    /// `"shape"` or one of the conditions `"i"` to `"vi"`.
    pub condition: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelCheck {
    pub violations: Vec<ModelViolation>,
    /// Observations that do not invalidate the model.
    pub notes: Vec<String>,
}

impl ModelCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, condition: &str, detail: String) {
        self.violations.push(ModelViolation {
            condition: condition.into(),
            detail,
        });
    }

    pub fn failed_conditions(&self) -> Vec<&str> {
        let mut c: Vec<&str> = self
            .violations
            .iter()
            .map(|v| v.condition.as_str())
            .collect();
        c.dedup();
        c
    }
}

/// Checks the six model conditions: barycentric trees (i), pairwise disjoint
/// (ii), odd internally disjoint paths avoiding the trees (iii), path ends at
/// old vertices of the right trees (iv), single vertices for degree-one
/// vertices (v) and a perfect matching of the rest (vi).
pub fn verify_matching_minor_model(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
    model: &MatchingMinorModel,
) -> ModelCheck {
    let mut check = ModelCheck::default();
    let n = g.num_vertices();
    if model.vertex_trees.len() != h.num_vertices() || model.edge_paths.len() != h.num_edges() {
        check.fail(
            "shape",
            format!(
                "{} trees and {} paths for {} vertices and {} edges",
                model.vertex_trees.len(),
                model.edge_paths.len(),
                h.num_vertices(),
                h.num_edges()
            ),
        );
        return check;
    }
    let in_range = |v: VertexId| v < n;
    if model
        .vertex_trees
        .iter()
        .flat_map(|t| {
            t.vertices
                .iter()
                .chain(&t.old)
                .chain(t.edges.iter().flatten())
        })
        .chain(model.edge_paths.iter().flatten())
        .chain(model.residual.iter().flatten())
        .any(|&v| !in_range(v))
    {
        check.fail("shape", "vertex id out of range".into());
        return check;
    }

    // (i) and (ii)
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut is_old = vec![false; n];
    let mut tree_color: Vec<Option<Color>> = vec![None; h.num_vertices()];
    for (x, t) in model.vertex_trees.iter().enumerate() {
        if let Err(msg) = barycentric(g, t) {
            check.fail("i", format!("tree of vertex {x}: {msg}"));
        }
        for &v in &t.vertices {
            match owner[v] {
                Some(y) if y != x => {
                    check.fail("ii", format!("trees of {y} and {x} share vertex {v}"))
                }
                _ => owner[v] = Some(x),
            }
        }
        for &v in &t.old {
            is_old[v] = true;
        }
        tree_color[x] = t.old.first().map(|&v| g.color(v));
    }

    // (iii) and (iv)
    let mut interior_owner: Vec<Option<usize>> = vec![None; n];
    for (e, p) in model.edge_paths.iter().enumerate() {
        let (a, b) = h.edge(e);
        if p.len() < 2 || p.len() % 2 != 0 {
            check.fail(
                "iii",
                format!("path of edge {e} has {} vertices, not an odd path", p.len()),
            );
            continue;
        }
        let distinct: HashSet<VertexId> = p.iter().copied().collect();
        if distinct.len() != p.len() {
            check.fail("iii", format!("path of edge {e} repeats a vertex"));
        }
        if let Some(w) = p.windows(2).find(|w| g.edge_between(w[0], w[1]).is_none()) {
            check.fail(
                "iii",
                format!("path of edge {e} uses non-edge {}-{}", w[0], w[1]),
            );
        }
        for &v in &p[1..p.len() - 1] {
            if owner[v].is_some() {
                check.fail(
                    "iii",
                    format!("path of edge {e} passes through tree vertex {v}"),
                );
            }
            match interior_owner[v] {
                Some(f) => check.fail(
                    "iii",
                    format!("paths of edges {f} and {e} share interior vertex {v}"),
                ),
                None => interior_owner[v] = Some(e),
            }
        }
        let (s, t) = (p[0], p[p.len() - 1]);
        let ends_ok = |x: VertexId, y: VertexId| {
            owner[x] == Some(a) && is_old[x] && owner[y] == Some(b) && is_old[y]
        };
        if !ends_ok(s, t) && !ends_ok(t, s) {
            check.fail(
                "iv",
                format!("path of edge {e} does not join old vertices of the trees of {a} and {b}"),
            );
        }
    }

    // (v)
    for x in 0..h.num_vertices() {
        if h.degree(x) == 1 && model.vertex_trees[x].vertices.len() != 1 {
            check.fail(
                "v",
                format!(
                    "vertex {x} has degree one but its tree has {} vertices",
                    model.vertex_trees[x].vertices.len()
                ),
            );
        }
    }

    // (vi)
    let mut covered = vec![false; n];
    for v in 0..n {
        covered[v] = owner[v].is_some() || interior_owner[v].is_some();
    }
    let mut residual_ok = true;
    let mut hit = vec![false; n];
    for &[u, v] in &model.residual {
        if g.edge_between(u, v).is_none() || covered[u] || covered[v] || hit[u] || hit[v] {
            residual_ok = false;
            break;
        }
        hit[u] = true;
        hit[v] = true;
    }
    if residual_ok && (0..n).any(|v| !covered[v] && !hit[v]) {
        residual_ok = false;
    }
    if !residual_ok {
        let alive: Vec<bool> = covered.iter().map(|&c| !c).collect();
        if has_perfect_matching_masked(g, Some(&alive), None) {
            check.fail(
                "vi",
                "given residual is not a perfect matching of the rest (one exists)".into(),
            );
        } else {
            check.fail("vi", "the rest of G has no perfect matching".into());
        }
    }

    // colour roles of old vertices are inferred, not required
    let consistent = |flip: bool| {
        (0..h.num_vertices()).all(|x| match tree_color[x] {
            Some(c) => (c == h.color(x)) != flip,
            None => true,
        })
    };
    if !consistent(false) && !consistent(true) {
        check
            .notes
            .push("old-vertex colours do not follow the colour classes of H".into());
    }
    check
}

fn barycentric(g: &BipartiteGraph, t: &VertexTree) -> std::result::Result<(), String> {
    if t.vertices.is_empty() || t.old.is_empty() {
        return Err("empty tree or no old vertex".into());
    }
    let set: HashSet<VertexId> = t.vertices.iter().copied().collect();
    if set.len() != t.vertices.len() {
        return Err("repeated vertex".into());
    }
    if t.old.iter().any(|v| !set.contains(v)) {
        return Err("old vertex outside the tree".into());
    }
    if t.edges.len() + 1 != t.vertices.len() {
        return Err(format!(
            "{} vertices but {} edges",
            t.vertices.len(),
            t.edges.len()
        ));
    }
    let idx = |v: VertexId| t.vertices.iter().position(|&x| x == v);
    let k = t.vertices.len();
    let mut adj = vec![Vec::new(); k];
    for &[u, v] in &t.edges {
        let (Some(i), Some(j)) = (idx(u), idx(v)) else {
            return Err(format!("edge {u}-{v} leaves the tree"));
        };
        if g.edge_between(u, v).is_none() {
            return Err(format!("{u}-{v} is not an edge of G"));
        }
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err("not connected".into());
    }
    let old: HashSet<VertexId> = t.old.iter().copied().collect();
    let is_new = |i: usize| !old.contains(&t.vertices[i]);
    if let Some(i) = (0..k).find(|&i| is_new(i) && adj[i].len() != 2) {
        return Err(format!(
            "new vertex {} has tree degree {}",
            t.vertices[i],
            adj[i].len()
        ));
    }
    // each run of new vertices between old ones must have odd length
    let mut done = vec![false; k];
    for s in 0..k {
        if !is_new(s) || done[s] {
            continue;
        }
        let mut size = 0;
        let mut stack = vec![s];
        done[s] = true;
        while let Some(i) = stack.pop() {
            size += 1;
            for &j in &adj[i] {
                if is_new(j) && !done[j] {
                    done[j] = true;
                    stack.push(j);
                }
            }
        }
        if size % 2 == 0 {
            return Err(format!("an even run of {size} new vertices"));
        }
    }
    Ok(())
}

/// Contracts every tree and every path of a model, giving a graph on the
/// vertices of `H` (one per tree) with one edge per distinct pair of trees
/// joined by a path. Vertex colours are those of the old vertices.
pub fn collapse_model(g: &BipartiteGraph, model: &MatchingMinorModel) -> Result<BipartiteGraph> {
    let mut owner = vec![usize::MAX; g.num_vertices()];
    let mut colors = Vec::new();
    for (x, t) in model.vertex_trees.iter().enumerate() {
        let Some(&first) = t.old.first() else {
            return input(format!("tree {x} has no old vertex"));
        };
        colors.push(g.color(first));
        for &v in &t.vertices {
            owner[v] = x;
        }
    }
    let mut out = BipartiteGraph::new(colors);
    for p in &model.edge_paths {
        let (Some(&s), Some(&t)) = (p.first(), p.last()) else {
            return input("empty path");
        };
        let (a, b) = (owner[s], owner[t]);
        if a == usize::MAX || b == usize::MAX {
            return input("path end outside every tree");
        }
        if out.edge_between(a, b).is_none() {
            out.add_edge(a, b)?;
        }
    }
    Ok(out)
}

/// Search options for conformal bisubdivisions.
pub struct BisubdivisionQuery<'a> {
    /// Edges of `g` (as vertex pairs) that the bisubdivision must contain.
    pub required_edges: &'a [(VertexId, VertexId)],
}

/// A conformal subgraph of `g` isomorphic to a bisubdivision of `h`
/// (`Δ(h) ≤ 3`), returned as a model with single-vertex trees.
pub fn find_conformal_bisubdivision(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
) -> Result<Option<MatchingMinorModel>> {
    find_conformal_bisubdivision_with(g, h, &Bounds::default())
}

pub fn find_conformal_bisubdivision_with(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
    bounds: &Bounds,
) -> Result<Option<MatchingMinorModel>> {
    search_bisubdivision(
        g,
        h,
        bounds,
        &BisubdivisionQuery {
            required_edges: &[],
        },
    )
}

/// Exhaustive search for a conformal bisubdivision of `h` in `g`. Branch
/// vertices keep colours (both ways round when `h` is not colour-symmetric),
/// twin vertices of `h` get increasing images, and every edge of `h` is routed
/// along a path through unused vertices. Without required edges only paths
/// without chords are tried: a chord cuts off an even segment that can be
/// matched along itself, so the shorter path is conformal whenever the longer
/// one is.
pub fn search_bisubdivision(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
    bounds: &Bounds,
    query: &BisubdivisionQuery,
) -> Result<Option<MatchingMinorModel>> {
    if h.max_degree() > 3 {
        return input("bisubdivision search needs maximum degree at most 3 in the pattern");
    }
    if g.num_vertices() > bounds.search_bound {
        return resource(format!(
            "host has {} vertices, search bound is {}",
            g.num_vertices(),
            bounds.search_bound
        ));
    }
    for &(u, v) in query.required_edges {
        if u >= g.num_vertices() || v >= g.num_vertices() || g.edge_between(u, v).is_none() {
            return input(format!("required pair {u}-{v} is not an edge"));
        }
    }
    if h.num_vertices() > g.num_vertices() || h.num_edges() > g.num_edges() || h.num_vertices() == 0
    {
        return Ok(None);
    }
    let symmetric = find_isomorphism(h, &h.swap_colors(), true).is_some();
    let mut steps = 0u64;
    for flip in [false, true] {
        if flip && symmetric {
            break;
        }
        let mut s = Search::new(g, h, flip, query, bounds.search_steps, &mut steps);
        if let Some(model) = s.run()? {
            return Ok(Some(model));
        }
    }
    Ok(None)
}

struct Search<'a> {
    g: &'a BipartiteGraph,
    h: &'a BipartiteGraph,
    flip: bool,
    order: Vec<VertexId>,
    // edges of h routed right after placing order[i]
    route_after: Vec<Vec<usize>>,
    twin_prev: Vec<Option<VertexId>>,
    phi: Vec<VertexId>,
    used: Vec<bool>,
    paths: Vec<Vec<VertexId>>,
    chordless: bool,
    required: &'a [(VertexId, VertexId)],
    limit: u64,
    steps: &'a mut u64,
}

enum Flow {
    Found,
    Continue,
}

impl<'a> Search<'a> {
    fn new(
        g: &'a BipartiteGraph,
        h: &'a BipartiteGraph,
        flip: bool,
        query: &'a BisubdivisionQuery,
        limit: u64,
        steps: &'a mut u64,
    ) -> Self {
        let k = h.num_vertices();
        // BFS order from a vertex of maximum degree, component by component
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        while order.len() < k {
            let s = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (h.degree(v), usize::MAX - v))
                .unwrap();
            placed[s] = true;
            let mut head = order.len();
            order.push(s);
            while head < order.len() {
                let v = order[head];
                head += 1;
                for u in h.neighbors(v) {
                    if !placed[u] {
                        placed[u] = true;
                        order.push(u);
                    }
                }
            }
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; k];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let mut route_after = vec![Vec::new(); k];
        for (e, &(a, b)) in h.edges().iter().enumerate() {
            route_after[pos[a].max(pos[b])].push(e);
        }
        // twins: same neighbourhood; the later one in the order must map higher
        let mut twin_prev = vec![None; k];
        for (i, &v) in order.iter().enumerate() {
            let nv: Vec<VertexId> = h.neighbors(v).collect();
            twin_prev[v] = order[..i]
                .iter()
                .rev()
                .find(|&&u| h.color(u) == h.color(v) && h.neighbors(u).collect::<Vec<_>>() == nv)
                .copied();
        }
        Search {
            g,
            h,
            flip,
            order,
            route_after,
            twin_prev,
            phi: vec![usize::MAX; k],
            used: vec![false; g.num_vertices()],
            paths: vec![Vec::new(); h.num_edges()],
            chordless: query.required_edges.is_empty(),
            required: query.required_edges,
            limit,
            steps,
        }
    }

    fn tick(&mut self) -> Result<()> {
        *self.steps += 1;
        if *self.steps > self.limit {
            return resource(format!(
                "bisubdivision search exceeded {} steps",
                self.limit
            ));
        }
        Ok(())
    }

    fn run(&mut self) -> Result<Option<MatchingMinorModel>> {
        match self.place(0)? {
            Flow::Found => Ok(Some(self.model())),
            Flow::Continue => Ok(None),
        }
    }

    fn model(&self) -> MatchingMinorModel {
        let alive: Vec<bool> = self.used.iter().map(|&u| !u).collect();
        let m = maximum_matching(self.g, Some(&alive), None);
        let mut residual: Vec<[VertexId; 2]> = Vec::new();
        for (v, e) in m.iter().enumerate() {
            if let Some(e) = e {
                let (b, w) = self.g.edge(*e);
                if v == b {
                    residual.push([b, w]);
                }
            }
        }
        MatchingMinorModel {
            vertex_trees: self.phi.iter().map(|&v| VertexTree::single(v)).collect(),
            edge_paths: self.paths.clone(),
            residual,
        }
    }

    fn place(&mut self, i: usize) -> Result<Flow> {
        if i == self.order.len() {
            return Ok(if self.complete() {
                Flow::Found
            } else {
                Flow::Continue
            });
        }
        self.tick()?;
        let x = self.order[i];
        let want = if self.flip {
            self.h.color(x).opposite()
        } else {
            self.h.color(x)
        };
        let lower = self.twin_prev[x].map(|t| self.phi[t]);
        for v in 0..self.g.num_vertices() {
            if self.used[v] || self.g.color(v) != want || self.g.degree(v) < self.h.degree(x) {
                continue;
            }
            if lower.is_some_and(|l| v <= l) {
                continue;
            }
            // each edge of x needs its own first step out of v
            let free = self
                .g
                .neighbors(v)
                .filter(|&u| !self.used[u] || self.h.neighbors(x).any(|y| self.phi[y] == u))
                .count();
            if free < self.h.degree(x) {
                continue;
            }
            self.phi[x] = v;
            self.used[v] = true;
            if let Flow::Found = self.route(i, 0)? {
                return Ok(Flow::Found);
            }
            self.used[v] = false;
            self.phi[x] = usize::MAX;
        }
        Ok(Flow::Continue)
    }

    fn route(&mut self, i: usize, k: usize) -> Result<Flow> {
        if k == self.route_after[i].len() {
            if !self.branch_degrees_ok() {
                return Ok(Flow::Continue);
            }
            return self.place(i + 1);
        }
        let e = self.route_after[i][k];
        let (a, b) = self.h.edge(e);
        let (s, t) = (self.phi[a], self.phi[b]);
        let mut path = vec![s];
        self.extend_path(i, k, e, t, &mut path)
    }

    fn extend_path(
        &mut self,
        i: usize,
        k: usize,
        e: usize,
        target: VertexId,
        path: &mut Vec<VertexId>,
    ) -> Result<Flow> {
        self.tick()?;
        let tail = *path.last().unwrap();
        let g = self.g;
        let adj_target = g.edge_between(tail, target).is_some();
        for (u, _) in g.incident(tail).to_vec() {
            if u == target {
                if self.chordless
                    && path.len() > 1
                    && path[..path.len() - 1]
                        .iter()
                        .any(|&p| g.edge_between(p, target).is_some())
                {
                    continue;
                }
                path.push(u);
                self.paths[e] = path.clone();
                let r = self.route(i, k + 1)?;
                path.pop();
                if let Flow::Found = r {
                    return Ok(Flow::Found);
                }
                self.paths[e].clear();
                continue;
            }
            if self.used[u] || (self.chordless && adj_target) {
                continue;
            }
            if self.chordless && g.neighbors(u).any(|x| x != tail && path.contains(&x)) {
                continue;
            }
            self.used[u] = true;
            path.push(u);
            let r = self.extend_path(i, k, e, target, path)?;
            path.pop();
            self.used[u] = false;
            if let Flow::Found = r {
                return Ok(Flow::Found);
            }
        }
        Ok(Flow::Continue)
    }

    // placed branch vertices still need free neighbours for their unrouted edges
    fn branch_degrees_ok(&self) -> bool {
        for (x, &v) in self.phi.iter().enumerate() {
            if v == usize::MAX {
                continue;
            }
            let open: Vec<VertexId> = self
                .h
                .incident(x)
                .iter()
                .filter(|&&(_, e)| self.paths[e].is_empty())
                .map(|&(y, _)| y)
                .collect();
            if open.is_empty() {
                continue;
            }
            let free = self
                .g
                .neighbors(v)
                .filter(|&u| !self.used[u] || open.iter().any(|&y| self.phi[y] == u))
                .count();
            if free < open.len() {
                return false;
            }
        }
        true
    }

    fn complete(&self) -> bool {
        for &(u, v) in self.required {
            let inside = self.paths.iter().any(|p| {
                p.windows(2)
                    .any(|w| (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u))
            });
            if !inside {
                return false;
            }
        }
        let alive: Vec<bool> = self.used.iter().map(|&u| !u).collect();
        has_perfect_matching_masked(self.g, Some(&alive), None)
    }
}

/// Whether `h` is a matching minor of `g`. Patterns of maximum degree at most
/// three go through the bisubdivision search; others through an exhaustive
/// search over pair deletions, edge deletions and bicontractions.
pub fn contains_matching_minor(g: &BipartiteGraph, h: &BipartiteGraph) -> Result<bool> {
    contains_matching_minor_with(g, h, &Bounds::default())
}

pub fn contains_matching_minor_with(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
    bounds: &Bounds,
) -> Result<bool> {
    if h.max_degree() <= 3 {
        return Ok(find_conformal_bisubdivision_with(g, h, bounds)?.is_some());
    }
    if g.num_vertices() > bounds.general_minor_bound {
        return resource(format!(
            "host has {} vertices, general minor bound is {}",
            g.num_vertices(),
            bounds.general_minor_bound
        ));
    }
    if !has_perfect_matching(g) || !has_perfect_matching(h) {
        return input("both graphs need perfect matchings");
    }
    let mut seen = HashSet::new();
    let mut steps = 0u64;
    minor_dfs(g.clone(), h, &mut seen, &mut steps, bounds.search_steps)
}

fn graph_key(g: &BipartiteGraph) -> (Vec<Color>, Vec<(VertexId, VertexId)>) {
    let mut e = g.edges().to_vec();
    e.sort_unstable();
    (g.colors().to_vec(), e)
}

fn minor_dfs(
    x: BipartiteGraph,
    h: &BipartiteGraph,
    seen: &mut HashSet<(Vec<Color>, Vec<(VertexId, VertexId)>)>,
    steps: &mut u64,
    limit: u64,
) -> Result<bool> {
    *steps += 1;
    if *steps > limit {
        return Err(Error::Resource(format!(
            "matching minor search exceeded {limit} steps"
        )));
    }
    if x.num_vertices() < h.num_vertices()
        || x.num_edges() < h.num_edges()
        || x.max_degree() < h.max_degree()
    {
        return Ok(false);
    }
    if !seen.insert(graph_key(&x)) {
        return Ok(false);
    }
    if x.num_vertices() == h.num_vertices() && x.num_edges() == h.num_edges() {
        return Ok(are_isomorphic(&x, h));
    }
    let n = x.num_vertices();
    if n > h.num_vertices() {
        for v in 0..n {
            if x.degree(v) == 2 {
                let y = bicontract(&x, v)?;
                if minor_dfs(y, h, seen, steps, limit)? {
                    return Ok(true);
                }
            }
        }
        for &(b, w) in x.edges() {
            let s = VertexSet::from_vertices(n, [b, w]);
            let y = x.remove_vertices(&s).graph;
            if has_perfect_matching(&y) && minor_dfs(y, h, seen, steps, limit)? {
                return Ok(true);
            }
        }
    }
    if x.num_edges() > h.num_edges() {
        for e in 0..x.num_edges() {
            let mut keep = vec![true; x.num_edges()];
            keep[e] = false;
            let y = x.spanning_subgraph(&keep).graph;
            if has_perfect_matching(&y) && minor_dfs(y, h, seen, steps, limit)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Two disjoint paths with ends interleaved on the cycle `c` (listed in
/// cyclic order), internally disjoint from it, such that the cycle plus both
/// paths is conformal.
pub fn find_conformal_cross(
    g: &BipartiteGraph,
    c: &[VertexId],
) -> Result<Option<(Vec<VertexId>, Vec<VertexId>)>> {
    find_conformal_cross_with(g, c, &Bounds::default())
}

pub fn find_conformal_cross_with(
    g: &BipartiteGraph,
    c: &[VertexId],
    bounds: &Bounds,
) -> Result<Option<(Vec<VertexId>, Vec<VertexId>)>> {
    let n = g.num_vertices();
    let l = c.len();
    if l < 4 || c.iter().any(|&v| v >= n) || c.iter().collect::<HashSet<_>>().len() != l {
        return input("cycle must list at least four distinct vertices");
    }
    if (0..l).any(|i| g.edge_between(c[i], c[(i + 1) % l]).is_none()) {
        return input("vertices do not form a cycle in the graph");
    }
    let on_c = VertexSet::from_vertices(n, c.iter().copied());
    if !has_perfect_matching_masked(g, Some(on_c.complement().mask()), None) {
        return input("cycle is not conformal");
    }
    if n > bounds.search_bound {
        return resource(format!(
            "host has {n} vertices, search bound is {}",
            bounds.search_bound
        ));
    }
    let mut steps = 0u64;
    let mut used = on_c.mask().to_vec();
    for a in 0..l {
        for b in a + 1..l {
            for cc in b + 1..l {
                for d in cc + 1..l {
                    let (s1, t1, s2, t2) = (c[a], c[cc], c[b], c[d]);
                    for p1 in chordless_paths(g, &used, s1, t1, &mut steps, bounds.search_steps)? {
                        for &v in &p1[1..p1.len() - 1] {
                            used[v] = true;
                        }
                        let mut hit = None;
                        for p2 in
                            chordless_paths(g, &used, s2, t2, &mut steps, bounds.search_steps)?
                        {
                            let mut alive: Vec<bool> = used.iter().map(|&u| !u).collect();
                            for &v in &p2 {
                                alive[v] = false;
                            }
                            if has_perfect_matching_masked(g, Some(&alive), None) {
                                hit = Some(p2);
                                break;
                            }
                        }
                        for &v in &p1[1..p1.len() - 1] {
                            used[v] = false;
                        }
                        if let Some(p2) = hit {
                            return Ok(Some((p1, p2)));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

// Paths from `s` to `t` without chords whose interiors avoid `used`. A chord
// would cut off an even segment matchable along itself, so these suffice for
// conformality questions.
fn chordless_paths(
    g: &BipartiteGraph,
    used: &[bool],
    s: VertexId,
    t: VertexId,
    steps: &mut u64,
    limit: u64,
) -> Result<Vec<Vec<VertexId>>> {
    fn go(
        g: &BipartiteGraph,
        used: &mut Vec<bool>,
        path: &mut Vec<VertexId>,
        t: VertexId,
        out: &mut Vec<Vec<VertexId>>,
        steps: &mut u64,
        limit: u64,
    ) -> Result<()> {
        *steps += 1;
        if *steps > limit {
            return resource(format!("cross search exceeded {limit} steps"));
        }
        let tail = *path.last().unwrap();
        if g.edge_between(tail, t).is_some() {
            if !path[..path.len() - 1]
                .iter()
                .any(|&p| g.edge_between(p, t).is_some())
            {
                let mut p = path.clone();
                p.push(t);
                out.push(p);
            }
            return Ok(());
        }
        for u in g.neighbors(tail).collect::<Vec<_>>() {
            if used[u] || u == t || g.neighbors(u).any(|x| x != tail && path.contains(&x)) {
                continue;
            }
            used[u] = true;
            path.push(u);
            go(g, used, path, t, out, steps, limit)?;
            path.pop();
            used[u] = false;
        }
        Ok(())
    }
    let mut used = used.to_vec();
    let mut out = Vec::new();
    go(g, &mut used, &mut vec![s], t, &mut out, steps, limit)?;
    Ok(out)
}

/// All 4-cycles of `g` as `[b1, w1, b2, w2]` with `b1 < b2`, `w1 < w2`.
pub fn four_cycles(g: &BipartiteGraph) -> Vec<[VertexId; 4]> {
    let mut out = Vec::new();
    let blacks = g.blacks();
    for (i, &b1) in blacks.iter().enumerate() {
        for &b2 in &blacks[i + 1..] {
            let common: Vec<VertexId> = g
                .neighbors(b1)
                .filter(|&w| g.edge_between(b2, w).is_some())
                .collect();
            for (j, &w1) in common.iter().enumerate() {
                for &w2 in &common[j + 1..] {
                    out.push([b1, w1, b2, w2]);
                }
            }
        }
    }
    out
}

/// Whether some conformal bisubdivision of `K3,3` contains the 4-cycle `c`.
pub fn four_cycle_in_k33_bisubdivision(
    g: &BipartiteGraph,
    c: [VertexId; 4],
    bounds: &Bounds,
) -> Result<bool> {
    let k33 = crate::graph::small::complete_bipartite(3, 3);
    let req = [(c[0], c[1]), (c[1], c[2]), (c[2], c[3]), (c[3], c[0])];
    Ok(search_bisubdivision(
        g,
        &k33,
        bounds,
        &BisubdivisionQuery {
            required_edges: &req,
        },
    )?
    .is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::small;

    fn identity_model(g: &BipartiteGraph) -> MatchingMinorModel {
        MatchingMinorModel {
            vertex_trees: (0..g.num_vertices()).map(VertexTree::single).collect(),
            edge_paths: g.edges().iter().map(|&(b, w)| vec![b, w]).collect(),
            residual: Vec::new(),
        }
    }

    #[test]
    fn bicontraction_shrinks_cycles() {
        let c6 = small::cycle(6);
        let c4 = bicontract(&c6, 0).unwrap();
        assert!(are_isomorphic(&c4, &small::cycle(4)));
        let k2 = bicontract(&small::cycle(4), 1).unwrap();
        assert_eq!((k2.num_vertices(), k2.num_edges()), (2, 1));
        assert!(bicontract(&small::complete_bipartite(3, 3), 0).is_err());
    }

    #[test]
    fn identity_and_broken_models() {
        let g = small::complete_bipartite(3, 3);
        let m = identity_model(&g);
        assert!(verify_matching_minor_model(&g, &g, &m).is_valid());
        let mut bad = m.clone();
        bad.vertex_trees[1] = VertexTree::single(0);
        let check = verify_matching_minor_model(&g, &g, &bad);
        assert!(check.failed_conditions().contains(&"ii"));
    }

    #[test]
    fn barycentric_trees() {
        let g = small::path(5);
        let ok = VertexTree {
            vertices: vec![0, 1, 2],
            edges: vec![[0, 1], [1, 2]],
            old: vec![0, 2],
        };
        assert!(barycentric(&g, &ok).is_ok());
        let even = VertexTree {
            vertices: vec![0, 1, 2, 3],
            edges: vec![[0, 1], [1, 2], [2, 3]],
            old: vec![0, 3],
        };
        assert!(barycentric(&g, &even).is_err());
    }

    #[test]
    fn k33_searches() {
        let k33 = small::complete_bipartite(3, 3);
        let m = find_conformal_bisubdivision(&k33, &k33).unwrap().unwrap();
        assert!(verify_matching_minor_model(&k33, &k33, &m).is_valid());
        assert!(find_conformal_bisubdivision(&small::cube(), &k33)
            .unwrap()
            .is_none());
        let k44 = small::complete_bipartite(4, 4);
        let m = find_conformal_bisubdivision(&k44, &k33).unwrap().unwrap();
        assert!(verify_matching_minor_model(&k44, &k33, &m).is_valid());
        assert!(are_isomorphic(&collapse_model(&k44, &m).unwrap(), &k33));
    }

    #[test]
    fn heawood_has_no_k33_bisubdivision() {
        let h = crate::generators::heawood().graph;
        let k33 = small::complete_bipartite(3, 3);
        assert!(find_conformal_bisubdivision(&h, &k33).unwrap().is_none());
    }

    #[test]
    fn cross_iff_k33_around_four_cycle() {
        let bounds = Bounds::default();
        for g in [
            small::complete_bipartite(3, 3),
            small::cube(),
            small::complete_bipartite(4, 4),
        ] {
            for c in four_cycles(&g) {
                let cross = find_conformal_cross(&g, &c).unwrap().is_some();
                assert_eq!(
                    cross,
                    four_cycle_in_k33_bisubdivision(&g, c, &bounds).unwrap()
                );
            }
        }
    }

    #[test]
    fn general_minor_search() {
        assert!(contains_matching_minor(&small::cycle(6), &small::cycle(4)).unwrap());
        assert!(!contains_matching_minor(&small::cycle(4), &small::cycle(6)).unwrap());
        assert!(contains_matching_minor(
            &small::complete_bipartite(4, 4),
            &small::complete_bipartite(3, 3)
        )
        .unwrap());
        let k44 = small::complete_bipartite(4, 4);
        assert!(contains_matching_minor(&k44, &k44).unwrap());
        assert!(!contains_matching_minor(&small::cube(), &k44).unwrap());
    }

    #[test]
    fn crosses() {
        let k33 = small::complete_bipartite(3, 3);
        assert!(find_conformal_cross(&k33, &[0, 3, 1, 4]).unwrap().is_some());
        let q3 = small::cube();
        assert!(find_conformal_cross(&q3, &[0, 1, 3, 2]).unwrap().is_none());
        let c4 = small::cycle(4);
        assert!(find_conformal_cross(&c4, &[0, 1, 2, 3]).unwrap().is_none());
    }
}
