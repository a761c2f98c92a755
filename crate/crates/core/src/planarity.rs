//! Planarity testing with embedding extraction.
//!
//! Each biconnected block is embedded by path addition (Demoucron, Malgrange
//! and Pertuiset): start from a cycle, and repeatedly route a path of some
//! fragment through a face that contains all of the fragment's attachment
//! vertices, preferring fragments with a single admissible face. Block
//! rotations are then concatenated at cut vertices.

use crate::graph::{BipartiteGraph, EdgeId, VertexId};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};

/// Per vertex, the incident edges in clockwise order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<EdgeId>>,
}

/// A face boundary walk as darts `(tail, edge)`.
pub type Face = Vec<(VertexId, EdgeId)>;

impl RotationSystem {
    /// Checks that every vertex lists exactly its incident edges.
    pub fn is_consistent_with(&self, g: &BipartiteGraph) -> bool {
        if self.rotation.len() != g.num_vertices() {
            return false;
        }
        (0..g.num_vertices()).all(|v| {
            let mut a: Vec<EdgeId> = self.rotation[v].clone();
            let mut b: Vec<EdgeId> = g.incident(v).iter().map(|&(_, e)| e).collect();
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
    }

    /// Face walks: leaving `v` along `e`, the walk continues at the far end
    /// with the edge following `e` in that vertex's rotation.
    pub fn faces(&self, g: &BipartiteGraph) -> Vec<Face> {
        let m = g.num_edges();
        // dart index: 2e for black->white, 2e+1 for white->black
        let mut used = vec![false; 2 * m];
        let mut pos: Vec<HashMap<EdgeId, usize>> = vec![HashMap::new(); g.num_vertices()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &e) in rot.iter().enumerate() {
                pos[v].insert(e, i);
            }
        }
        let dart = |tail: VertexId, e: EdgeId| {
            if g.edge(e).0 == tail {
                2 * e
            } else {
                2 * e + 1
            }
        };
        let mut faces = Vec::new();
        for e in 0..m {
            for tail in [g.edge(e).0, g.edge(e).1] {
                if used[dart(tail, e)] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut t, mut f) = (tail, e);
                while !used[dart(t, f)] {
                    used[dart(t, f)] = true;
                    face.push((t, f));
                    let h = g.other_end(f, t);
                    let rot = &self.rotation[h];
                    let i = pos[h][&f];
                    let next = rot[(i + 1) % rot.len()];
                    t = h;
                    f = next;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Euler characteristic check `V - E + F = 2 * components` on the
    /// non-isolated part. Holds exactly for planar rotation systems.
    pub fn is_planar_embedding(&self, g: &BipartiteGraph) -> bool {
        if !self.is_consistent_with(g) {
            return false;
        }
        let comps = g
            .components()
            .into_iter()
            .filter(|c| c.len() > 1 || g.degree(c[0]) > 0)
            .count();
        let v = (0..g.num_vertices()).filter(|&v| g.degree(v) > 0).count() as i64;
        let f = self.faces(g).len() as i64;
        v - g.num_edges() as i64 + f == 2 * comps as i64
    }
}

/// A planar rotation system of `g`, or `None` if `g` is not planar.
pub fn planar_embed(g: &BipartiteGraph) -> Option<RotationSystem> {
    let n = g.num_vertices();
    let mut rotation: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for block in biconnected_blocks(g) {
        let rot = if block.len() == 1 {
            let (b, w) = g.edge(block[0]);
            HashMap::from([(b, vec![block[0]]), (w, vec![block[0]])])
        } else {
            embed_block(g, &block)?
        };
        let mut keys: Vec<_> = rot.keys().copied().collect();
        keys.sort_unstable();
        for v in keys {
            rotation[v].extend_from_slice(&rot[&v]);
        }
    }
    let rs = RotationSystem { rotation };
    debug_assert!(rs.is_planar_embedding(g));
    Some(rs)
}

pub fn is_planar(g: &BipartiteGraph) -> bool {
    planar_embed(g).is_some()
}

/// Edge sets of the biconnected blocks (bridges form single-edge blocks).
pub fn biconnected_blocks(g: &BipartiteGraph) -> Vec<Vec<EdgeId>> {
    let n = g.num_vertices();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut estack: Vec<EdgeId> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX || g.degree(root) == 0 {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // frame: (vertex, parent edge, next incident index)
        let mut stack: Vec<(VertexId, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, pe, ref mut i)) = stack.last_mut() {
            if *i < g.degree(v) {
                let (u, e) = g.incident(v)[*i];
                *i += 1;
                if e == pe {
                    continue;
                }
                if disc[u] == usize::MAX {
                    estack.push(e);
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    stack.push((u, e, 0));
                } else if disc[u] < disc[v] {
                    estack.push(e);
                    low[v] = low[v].min(disc[u]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

fn embed_block(g: &BipartiteGraph, block: &[EdgeId]) -> Option<HashMap<VertexId, Vec<EdgeId>>> {
    // local adjacency restricted to the block
    let mut adj: HashMap<VertexId, Vec<(VertexId, EdgeId)>> = HashMap::new();
    for &e in block {
        let (b, w) = g.edge(e);
        adj.entry(b).or_default().push((w, e));
        adj.entry(w).or_default().push((b, e));
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    let mut verts: Vec<VertexId> = adj.keys().copied().collect();
    verts.sort_unstable();

    let cycle = find_cycle(&adj, verts[0]);
    let mut in_h: HashMap<VertexId, bool> = verts.iter().map(|&v| (v, false)).collect();
    let mut edge_in_h: HashMap<EdgeId, bool> = block.iter().map(|&e| (e, false)).collect();
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        in_h.insert(a, true);
        edge_in_h.insert(g.edge_between(a, b).expect("cycle edge"), true);
    }
    let mut faces: Vec<Vec<VertexId>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];

    loop {
        let fragments = fragments(g, &adj, &verts, &in_h, &edge_in_h);
        if fragments.is_empty() {
            break;
        }
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("some fragment");
        let path = fragment_path(&adj, &fragments[fi], &in_h);
        for w in path.windows(2) {
            edge_in_h.insert(g.edge_between(w[0], w[1]).expect("path edge"), true);
        }
        for &v in &path {
            in_h.insert(v, true);
        }
        let face = faces.swap_remove(face_idx);
        let (a, b) = (path[0], *path.last().unwrap());
        let ia = face
            .iter()
            .position(|&v| v == a)
            .expect("attachment on face");
        let ib = face
            .iter()
            .position(|&v| v == b)
            .expect("attachment on face");
        let interior = &path[1..path.len() - 1];
        let walk = |from: usize, to: usize| -> Vec<VertexId> {
            let mut out = Vec::new();
            let mut i = from;
            loop {
                out.push(face[i]);
                if i == to {
                    break;
                }
                i = (i + 1) % face.len();
            }
            out
        };
        let mut f1 = walk(ia, ib);
        f1.extend(interior.iter().rev());
        let mut f2 = walk(ib, ia);
        f2.extend(interior.iter());
        faces.push(f1);
        faces.push(f2);
    }

    // successor maps from the oriented faces
    let mut succ: HashMap<VertexId, HashMap<EdgeId, EdgeId>> = HashMap::new();
    for f in &faces {
        let k = f.len();
        for i in 0..k {
            let (u, v, w) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
            let ein = g.edge_between(u, v).expect("face edge");
            let eout = g.edge_between(v, w).expect("face edge");
            succ.entry(v).or_default().insert(ein, eout);
        }
    }
    let mut rot = HashMap::new();
    for &v in &verts {
        let s = &succ[&v];
        let first = adj[&v][0].1;
        let mut order = vec![first];
        let mut cur = s[&first];
        while cur != first {
            order.push(cur);
            cur = s[&cur];
        }
        if order.len() != adj[&v].len() {
            return None;
        }
        rot.insert(v, order);
    }
    Some(rot)
}

fn find_cycle(adj: &HashMap<VertexId, Vec<(VertexId, EdgeId)>>, start: VertexId) -> Vec<VertexId> {
    let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
    let mut depth: HashMap<VertexId, usize> = HashMap::new();
    depth.insert(start, 0);
    let mut order_stack: Vec<(VertexId, usize)> = vec![(start, 0)];
    while let Some(&mut (v, ref mut i)) = order_stack.last_mut() {
        if *i >= adj[&v].len() {
            order_stack.pop();
            continue;
        }
        let (u, _) = adj[&v][*i];
        *i += 1;
        if Some(&u) == parent.get(&v) {
            continue;
        }
        if let Some(&du) = depth.get(&u) {
            if du < depth[&v] {
                let mut cyc = vec![v];
                let mut x = v;
                while x != u {
                    x = parent[&x];
                    cyc.push(x);
                }
                return cyc;
            }
            continue;
        }
        parent.insert(u, v);
        depth.insert(u, depth[&v] + 1);
        order_stack.push((u, 0));
    }
    unreachable!("a biconnected block with two or more edges has a cycle")
}

struct Fragment {
    /// Interior vertices (empty for a single chord edge).
    inner: Vec<VertexId>,
    attachments: Vec<VertexId>,
}

fn fragments(
    g: &BipartiteGraph,
    adj: &HashMap<VertexId, Vec<(VertexId, EdgeId)>>,
    verts: &[VertexId],
    in_h: &HashMap<VertexId, bool>,
    edge_in_h: &HashMap<EdgeId, bool>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    let mut edges: Vec<&EdgeId> = edge_in_h.keys().collect();
    edges.sort_unstable();
    for &e in edges {
        let (b, w) = g.edge(e);
        if !edge_in_h[&e] && in_h[&b] && in_h[&w] {
            out.push(Fragment {
                inner: Vec::new(),
                attachments: vec![b, w],
            });
        }
    }
    let mut seen: HashMap<VertexId, bool> = HashMap::new();
    for &s in verts {
        if in_h[&s] || seen.contains_key(&s) {
            continue;
        }
        let mut inner = vec![s];
        let mut att = Vec::new();
        seen.insert(s, true);
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &(u, _) in &adj[&v] {
                if in_h[&u] {
                    if !att.contains(&u) {
                        att.push(u);
                    }
                } else if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(u) {
                    e.insert(true);
                    inner.push(u);
                    q.push_back(u);
                }
            }
        }
        att.sort_unstable();
        out.push(Fragment {
            inner,
            attachments: att,
        });
    }
    out
}

fn fragment_path(
    adj: &HashMap<VertexId, Vec<(VertexId, EdgeId)>>,
    frag: &Fragment,
    in_h: &HashMap<VertexId, bool>,
) -> Vec<VertexId> {
    if frag.inner.is_empty() {
        return frag.attachments.clone();
    }
    let a = frag.attachments[0];
    let inner: std::collections::HashSet<VertexId> = frag.inner.iter().copied().collect();
    let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
    let mut q = VecDeque::new();
    for &(u, _) in &adj[&a] {
        if inner.contains(&u) && !parent.contains_key(&u) {
            parent.insert(u, a);
            q.push_back(u);
        }
    }
    while let Some(v) = q.pop_front() {
        for &(u, _) in &adj[&v] {
            if in_h[&u] && u != a {
                let mut path = vec![u, v];
                let mut x = v;
                while parent[&x] != a {
                    x = parent[&x];
                    path.push(x);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if inner.contains(&u) && !parent.contains_key(&u) {
                parent.insert(u, v);
                q.push_back(u);
            }
        }
    }
    unreachable!("a fragment of a biconnected block has two attachments")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::small;

    fn grid(r: usize, c: usize) -> BipartiteGraph {
        let colors = (0..r * c)
            .map(|i| {
                if (i / c + i % c).is_multiple_of(2) {
                    crate::Color::Black
                } else {
                    crate::Color::White
                }
            })
            .collect();
        let mut g = BipartiteGraph::new(colors);
        for i in 0..r {
            for j in 0..c {
                if j + 1 < c {
                    g.add_edge(i * c + j, i * c + j + 1).unwrap();
                }
                if i + 1 < r {
                    g.add_edge(i * c + j, (i + 1) * c + j).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn planar_examples() {
        for g in [
            small::cycle(4),
            grid(4, 4),
            small::cube(),
            small::path(5),
            grid(3, 5),
        ] {
            let rot = planar_embed(&g).expect("planar");
            assert!(rot.is_planar_embedding(&g));
        }
        assert!(planar_embed(&small::complete_bipartite(3, 3)).is_none());
        assert!(planar_embed(&small::complete_bipartite(4, 4)).is_none());
        assert!(planar_embed(&small::complete_bipartite(2, 5)).is_some());
    }

    #[test]
    fn grid_face_count() {
        let g = grid(4, 4);
        let rot = planar_embed(&g).unwrap();
        assert_eq!(rot.faces(&g).len(), 10);
    }

    #[test]
    fn blocks_of_two_cycles_sharing_a_vertex() {
        let mut g = small::cycle(4).disjoint_union(&small::cycle(4));
        // glue by an extra path so the graph has a bridge
        g.add_edge(0, 5).unwrap();
        let blocks = biconnected_blocks(&g);
        assert_eq!(blocks.len(), 3);
        assert!(planar_embed(&g).unwrap().is_planar_embedding(&g));
    }
}
