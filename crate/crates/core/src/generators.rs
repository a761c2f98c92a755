//! Constructors for the graph families used in the benchmarks and tests.
//!
//! Cylindrical families number their vertices `v_j^i` (cycle `i`, position
//! `j`, both from 1) as `(i - 1) * cycle_len + (j - 1)`.

use crate::error::{input, Error, Result};
use crate::graph::GraphJson;
use crate::graph::{small, BipartiteGraph, Color, EdgeId, PerfectMatching, VertexId};
use crate::minors::MatchingMinorModel;
use crate::planarity::{planar_embed, RotationSystem};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct GeneratedGraph {
    pub graph: BipartiteGraph,
    pub canonical_matching: Option<PerfectMatching>,
    pub rotation: Option<RotationSystem>,
    pub family: String,
    pub params: Vec<usize>,
}

impl GeneratedGraph {
    fn new(graph: BipartiteGraph, family: &str, params: Vec<usize>) -> Self {
        GeneratedGraph {
            graph,
            canonical_matching: None,
            rotation: None,
            family: family.into(),
            params,
        }
    }

    fn with_matching(mut self, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(u, v)| {
                self.graph.edge_between(u, v).ok_or_else(|| {
                    Error::Internal(format!("canonical pair {u}-{v} is not an edge"))
                })
            })
            .collect::<Result<Vec<EdgeId>>>()?;
        self.canonical_matching = Some(PerfectMatching::new(&self.graph, edges)?);
        Ok(self)
    }

    fn embedded(mut self) -> Self {
        self.rotation = planar_embed(&self.graph);
        self
    }

    pub fn to_json(&self) -> GeneratedJson {
        GeneratedJson {
            family: self.family.clone(),
            params: self.params.clone(),
            graph: GraphJson::from_graph(&self.graph),
            canonical_matching: self.canonical_matching.as_ref().map(|m| {
                m.edges()
                    .iter()
                    .map(|&e| {
                        let (b, w) = self.graph.edge(e);
                        [b, w]
                    })
                    .collect()
            }),
            vertex_naming: self
                .cycle_len()
                .map(|len| format!("v_j^i = (i-1)*{len} + (j-1)")),
            embedding: self.rotation.as_ref().map(|r| r.rotation.clone()),
        }
    }

    /// Cycle length of the cylindrical families, used by the vertex naming.
    pub fn cycle_len(&self) -> Option<usize> {
        let k = *self.params.first()?;
        match self.family.as_str() {
            "cg" | "cyljump" => Some(4 * k),
            "cylsc" => Some(16 * k),
            "svmg" => Some(8 * k),
            "rv" => Some(4 * k),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratedJson {
    pub family: String,
    pub params: Vec<usize>,
    pub graph: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_matching: Option<Vec<[VertexId; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_naming: Option<String>,
    /// Clockwise edge order (by edge index) around each vertex, when planar.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<Vec<Vec<EdgeId>>>,
}

fn need(k: usize, min: usize, what: &str) -> Result<()> {
    if k < min {
        return input(format!(
            "{what} needs a parameter of at least {min}, got {k}"
        ));
    }
    Ok(())
}

// Cycles C_1..C_c of length len, odd positions black; returns the graph and
// the id function for v_j^i (1-based, j taken cyclically).
fn cylinder(cycles: usize, len: usize) -> (BipartiteGraph, impl Fn(usize, usize) -> VertexId) {
    let id = move |i: usize, j: usize| (i - 1) * len + ((j + len - 1) % len);
    let colors = (0..cycles * len)
        .map(|v| {
            if (v % len).is_multiple_of(2) {
                Color::Black
            } else {
                Color::White
            }
        })
        .collect();
    let mut g = BipartiteGraph::new(colors);
    for i in 1..=cycles {
        for j in 1..=len {
            g.add_edge(id(i, j), id(i, j + 1)).expect("cycle edge");
        }
    }
    (g, id)
}

fn cycle_pairs(
    cycles: usize,
    len: usize,
    id: &impl Fn(usize, usize) -> VertexId,
) -> Vec<(VertexId, VertexId)> {
    (1..=cycles)
        .flat_map(|i| (1..=len).step_by(2).map(move |j| (i, j)))
        .map(|(i, j)| (id(i, j), id(i, j + 1)))
        .collect()
}

// The inter-cycle edges of the cylindrical matching grids.
fn add_rungs(
    g: &mut BipartiteGraph,
    cycles: usize,
    len: usize,
    id: &impl Fn(usize, usize) -> VertexId,
) {
    for i in 1..cycles {
        for j in (1..len).step_by(4) {
            g.add_edge(id(i, j), id(i + 1, j + 1)).expect("rung");
        }
    }
    for i in 2..=cycles {
        for j in (3..len).step_by(4) {
            g.add_edge(id(i, j), id(i - 1, j + 1)).expect("rung");
        }
    }
}

/// Cylindrical matching grid `CG_k`: `k` cycles of length `4k` with rungs,
/// canonical matching on odd positions, planar embedding attached.
pub fn cylindrical_matching_grid(k: usize) -> Result<GeneratedGraph> {
    need(k, 1, "cg")?;
    let len = 4 * k;
    let (mut g, id) = cylinder(k, len);
    add_rungs(&mut g, k, len, &id);
    let pairs = cycle_pairs(k, len, &id);
    Ok(
        GeneratedGraph::new(g.with_name(format!("CG{k}")), "cg", vec![k])
            .with_matching(&pairs)?
            .embedded(),
    )
}

/// The alternating matching of `CG_k` (`k` even): the canonical matching
/// with each odd-numbered cycle switched to its other perfect matching.
pub fn alternating_matching(cg: &GeneratedGraph) -> Result<PerfectMatching> {
    if cg.family != "cg" {
        return input("alternating matching is defined on cylindrical matching grids");
    }
    let k = cg.params[0];
    if !k.is_multiple_of(2) {
        return input(format!("alternating matching needs even order, got {k}"));
    }
    let len = 4 * k;
    let id = |i: usize, j: usize| (i - 1) * len + ((j + len - 1) % len);
    let mut edges = Vec::new();
    for i in 1..=k {
        let start = if i % 2 == 1 { 2 } else { 1 };
        for j in (start..=len).step_by(2) {
            edges.push(
                cg.graph
                    .edge_between(id(i, j), id(i, j + 1))
                    .expect("cycle edge"),
            );
        }
    }
    PerfectMatching::new(&cg.graph, edges)
}

/// Glues the two extra vertices of `K3,3` onto the 4-cycle `b1 w1 b2 w2`.
fn glue_k33(
    g: &mut BipartiteGraph,
    b1: VertexId,
    w1: VertexId,
    b2: VertexId,
    w2: VertexId,
) -> (VertexId, VertexId) {
    let b3 = g.add_vertex(Color::Black);
    let w3 = g.add_vertex(Color::White);
    for (u, v) in [(b3, w1), (b3, w2), (b3, w3), (w3, b1), (w3, b2)] {
        g.add_edge(u, v).expect("K3,3 edge");
    }
    (b3, w3)
}

fn grid_graph(n: usize, m: usize) -> (BipartiteGraph, impl Fn(usize, usize) -> VertexId) {
    // (r, c) from 1, black when r + c is even
    let id = move |r: usize, c: usize| (r - 1) * m + (c - 1);
    let colors = (0..n * m)
        .map(|v| {
            if (v / m + v % m).is_multiple_of(2) {
                Color::Black
            } else {
                Color::White
            }
        })
        .collect();
    let mut g = BipartiteGraph::new(colors);
    for r in 1..=n {
        for c in 1..=m {
            if c < m {
                g.add_edge(id(r, c), id(r, c + 1)).expect("row edge");
            }
            if r < n {
                g.add_edge(id(r, c), id(r + 1, c)).expect("column edge");
            }
        }
    }
    (g, id)
}

/// `(n × m)`-grid; vertex `(r, c)` (from 1) is `(r - 1) * m + (c - 1)`.
pub fn grid(n: usize, m: usize) -> Result<GeneratedGraph> {
    need(n.min(m), 1, "grid")?;
    let (g, _) = grid_graph(n, m);
    Ok(GeneratedGraph::new(g.with_name(format!("grid{n}x{m}")), "grid", vec![n, m]).embedded())
}

/// `(2k × 2k)`-grid with `K3,3` glued onto its central 4-cycle.
pub fn single_crossing_matching_grid(k: usize) -> Result<GeneratedGraph> {
    need(k, 1, "scmg")?;
    let (mut g, id) = grid_graph(2 * k, 2 * k);
    // (k,k) is black
    glue_k33(
        &mut g,
        id(k, k),
        id(k, k + 1),
        id(k + 1, k + 1),
        id(k + 1, k),
    );
    Ok(GeneratedGraph::new(
        g.with_name(format!("SCMG{k}")),
        "scmg",
        vec![k],
    ))
}

/// `(2k × 2k)`-grid with a `K3,3` whose 4-cycle sits on the four corners; the
/// cycle's own edges are not added.
pub fn inside_out_scmg(k: usize) -> Result<GeneratedGraph> {
    need(k, 1, "ioscmg")?;
    let n = 2 * k;
    let (mut g, id) = grid_graph(n, n);
    glue_k33(&mut g, id(1, 1), id(1, n), id(n, n), id(n, 1));
    Ok(GeneratedGraph::new(
        g.with_name(format!("IOSCMG{k}")),
        "ioscmg",
        vec![k],
    ))
}

/// `CG_{4k}` plus `v_1^1 v_{8k+4}^1` and `v_{4k+1}^1 v_{12k+4}^1`.
pub fn cylindrical_single_crossing(k: usize) -> Result<GeneratedGraph> {
    need(k, 1, "cylsc")?;
    let base = cylindrical_matching_grid(4 * k)?;
    let len = 16 * k;
    let id = |i: usize, j: usize| (i - 1) * len + ((j + len - 1) % len);
    let mut g = base.graph;
    g.add_edge(id(1, 1), id(1, 8 * k + 4))?;
    g.add_edge(id(1, 4 * k + 1), id(1, 12 * k + 4))?;
    let mut out = GeneratedGraph::new(g.with_name(format!("CYLSC{k}")), "cylsc", vec![k]);
    out.canonical_matching = base.canonical_matching;
    Ok(out)
}

/// `CG_k` plus the edge `v_1^k v_2^1`. For `k = 1` that edge is already a
/// cycle edge and the graph is `CG_1`.
pub fn cylindrical_single_jump(k: usize) -> Result<GeneratedGraph> {
    need(k, 1, "cyljump")?;
    let base = cylindrical_matching_grid(k)?;
    let len = 4 * k;
    let id = |i: usize, j: usize| (i - 1) * len + ((j + len - 1) % len);
    let mut g = base.graph;
    if g.edge_between(id(k, 1), id(1, 2)).is_none() {
        g.add_edge(id(k, 1), id(1, 2))?;
    }
    let mut out = GeneratedGraph::new(g.with_name(format!("CYLJUMP{k}")), "cyljump", vec![k]);
    out.canonical_matching = base.canonical_matching;
    Ok(out)
}

/// Crossing edges of `SVMG_k`: `v_j^1 v_{j+5}^1` for `j = 2, 6, ..., 8k - 2`.
pub fn svmg_crossing_pairs(k: usize) -> Vec<(VertexId, VertexId)> {
    let len = 8 * k;
    let id = |j: usize| (j + len - 1) % len;
    (2..len).step_by(4).map(|j| (id(j), id(j + 5))).collect()
}

/// Shallow vortex matching grid: `2k` cycles of length `8k`, the rungs of a
/// cylindrical matching grid between all consecutive cycles, and `2k`
/// crossing edges on the first cycle. Without the crossings it is `CG_{2k}`.
pub fn shallow_vortex_matching_grid(k: usize) -> Result<GeneratedGraph> {
    need(k, 1, "svmg")?;
    let (cycles, len) = (2 * k, 8 * k);
    let (mut g, id) = cylinder(cycles, len);
    add_rungs(&mut g, cycles, len, &id);
    for (u, v) in svmg_crossing_pairs(k) {
        g.add_edge(u, v)?;
    }
    let pairs = cycle_pairs(cycles, len, &id);
    GeneratedGraph::new(g.with_name(format!("SVMG{k}")), "svmg", vec![k]).with_matching(&pairs)
}

/// Refined vortex: `2k` cycles of length `4k`, all radial edges
/// `v_j^i v_j^{i+1}`, and crossings `v_j^1 v_{j+3}^1` for every even `j`.
/// `v_j^i` is black when `i + j` is even.
pub fn refined_vortex(k: usize) -> Result<GeneratedGraph> {
    need(k, 1, "rv")?;
    let (cycles, len) = (2 * k, 4 * k);
    let id = |i: usize, j: usize| (i - 1) * len + ((j + len - 1) % len);
    let colors = (0..cycles * len)
        .map(|v| {
            if (v / len + v % len) % 2 == 0 {
                Color::Black
            } else {
                Color::White
            }
        })
        .collect();
    let mut g = BipartiteGraph::new(colors);
    for i in 1..=cycles {
        for j in 1..=len {
            g.add_edge(id(i, j), id(i, j + 1))?;
            if i < cycles {
                g.add_edge(id(i, j), id(i + 1, j))?;
            }
        }
    }
    for j in (2..=len).step_by(2) {
        if g.edge_between(id(1, j), id(1, j + 3)).is_none() {
            g.add_edge(id(1, j), id(1, j + 3))?;
        }
    }
    let pairs: Vec<(VertexId, VertexId)> = (1..=cycles)
        .flat_map(|i| (1..=len).step_by(2).map(move |j| (i, j)))
        .map(|(i, j)| (id(i, j), id(i, j + 1)))
        .collect();
    GeneratedGraph::new(g.with_name(format!("RV{k}")), "rv", vec![k]).with_matching(&pairs)
}

/// Incidence graph of the Fano plane: points `0..7` black, lines `7..14`
/// white, line `i` through points `i, i+1, i+3` (mod 7).
pub fn heawood() -> GeneratedGraph {
    let mut g = BipartiteGraph::with_sides(7, 7);
    for line in 0..7 {
        for d in [0, 1, 3] {
            g.add_edge((line + d) % 7, 7 + line).expect("incidence");
        }
    }
    GeneratedGraph::new(g.with_name("Heawood"), "heawood", vec![])
}

pub fn complete_bipartite(s: usize, t: usize) -> Result<GeneratedGraph> {
    need(s.min(t), 1, "ktt")?;
    let g = small::complete_bipartite(s, t);
    let mut out = GeneratedGraph::new(g, "ktt", vec![s, t]);
    if s <= 2 || t <= 2 {
        out = out.embedded();
    }
    Ok(out)
}

pub fn cube() -> GeneratedGraph {
    GeneratedGraph::new(small::cube(), "cube", vec![]).embedded()
}

/// Elementary `n`-wall: the `(2n × n)`-grid without the odd column edges of
/// odd columns and the even column edges of even columns, then with
/// degree-one vertices stripped.
pub fn wall(n: usize) -> Result<GeneratedGraph> {
    need(n, 3, "wall")?;
    let rows = 2 * n;
    let (full, id) = grid_graph(rows, n);
    let mut keep = vec![true; full.num_edges()];
    for c in 1..=n {
        for r in 1..rows {
            // the r-th edge of column c joins rows r and r+1
            if r % 2 == c % 2 {
                keep[full
                    .edge_between(id(r, c), id(r + 1, c))
                    .expect("column edge")] = false;
            }
        }
    }
    let mut g = full.spanning_subgraph(&keep).graph;
    loop {
        let leaves: Vec<VertexId> = (0..g.num_vertices())
            .filter(|&v| g.degree(v) <= 1)
            .collect();
        if leaves.is_empty() {
            break;
        }
        let drop = crate::graph::VertexSet::from_vertices(g.num_vertices(), leaves);
        g = g.remove_vertices(&drop).graph;
    }
    Ok(GeneratedGraph::new(g.with_name(format!("wall{n}")), "wall", vec![n]).embedded())
}

/// Family by CLI name.
pub fn generate(family: &str, params: &[usize]) -> Result<GeneratedGraph> {
    let p = |i: usize| -> Result<usize> {
        params
            .get(i)
            .copied()
            .ok_or_else(|| Error::Input(format!("{family} needs {} parameter(s)", i + 1)))
    };
    match family {
        "cg" => cylindrical_matching_grid(p(0)?),
        "scmg" => single_crossing_matching_grid(p(0)?),
        "ioscmg" => inside_out_scmg(p(0)?),
        "cylsc" => cylindrical_single_crossing(p(0)?),
        "cyljump" => cylindrical_single_jump(p(0)?),
        "svmg" => shallow_vortex_matching_grid(p(0)?),
        "rv" => refined_vortex(p(0)?),
        "heawood" => Ok(heawood()),
        "ktt" => complete_bipartite(p(0)?, p(1)?),
        "grid" => grid(p(0)?, p(1)?),
        "wall" => wall(p(0)?),
        "cube" => Ok(cube()),
        _ => input(format!("unknown family {family:?}")),
    }
}

pub const FAMILIES: &[&str] = &[
    "cg", "scmg", "ioscmg", "cylsc", "cyljump", "svmg", "rv", "heawood", "ktt", "grid", "wall",
    "cube",
];

const K44_FIXTURE: &str = include_str!("../data/k44_in_rv4.json");
const K44_FIXTURE_SHA256: &str = "81015d3dce72e228db5aa26fd62a1da79f34f676d5bd577f1263184cfb2f680b";

/// `RV_4` with a hand-transcribed model of `K4,4` in which every edge of
/// `K4,4` is a single host edge. Vertex `i` of `K4,4` is black for `i < 4`.
pub fn k44_model_in_rv4() -> Result<(GeneratedGraph, MatchingMinorModel)> {
    let digest = Sha256::digest(K44_FIXTURE.as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    if hex != K44_FIXTURE_SHA256 {
        return Err(Error::Internal(
            "K4,4 model fixture checksum mismatch".into(),
        ));
    }
    let model: MatchingMinorModel = serde_json::from_str(K44_FIXTURE)
        .map_err(|e| Error::Internal(format!("bad K4,4 fixture: {e}")))?;
    Ok((refined_vortex(4)?, model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_conformal, is_matching_covered, VertexSet};

    #[test]
    fn cg_sizes() {
        for (k, v, e) in [(1, 4, 4), (2, 16, 20), (4, 64, 88)] {
            let g = cylindrical_matching_grid(k).unwrap();
            assert_eq!((g.graph.num_vertices(), g.graph.num_edges()), (v, e));
            assert!(g.graph.max_degree() <= 3);
            assert!(g.rotation.is_some());
        }
        assert!(cylindrical_matching_grid(0).is_err());
        assert!(is_matching_covered(
            &cylindrical_matching_grid(3).unwrap().graph
        ));
    }

    #[test]
    fn alternating_matching_differs_on_first_cycle() {
        let cg = cylindrical_matching_grid(2).unwrap();
        let alt = alternating_matching(&cg).unwrap();
        let canon = cg.canonical_matching.as_ref().unwrap();
        let differ: Vec<EdgeId> = alt
            .edges()
            .iter()
            .filter(|e| !canon.contains(**e))
            .copied()
            .collect();
        assert_eq!(differ.len(), 4);
        assert!(differ.iter().all(|&e| cg.graph.edge(e).0 < 8));
        assert!(alternating_matching(&cylindrical_matching_grid(3).unwrap()).is_err());
    }

    #[test]
    fn crossing_families() {
        let s1 = single_crossing_matching_grid(1).unwrap().graph;
        assert!(crate::graph::are_isomorphic(
            &s1,
            &small::complete_bipartite(3, 3)
        ));
        assert_eq!(
            single_crossing_matching_grid(4)
                .unwrap()
                .graph
                .num_vertices(),
            66
        );
        assert_eq!(inside_out_scmg(4).unwrap().graph.num_vertices(), 66);
        assert_eq!(
            cylindrical_single_jump(3).unwrap().graph.num_edges(),
            cylindrical_matching_grid(3).unwrap().graph.num_edges() + 1
        );
        assert_eq!(
            cylindrical_single_crossing(1).unwrap().graph.num_edges(),
            cylindrical_matching_grid(4).unwrap().graph.num_edges() + 2
        );
    }

    #[test]
    fn vortex_sizes() {
        let s = shallow_vortex_matching_grid(2).unwrap();
        assert_eq!(s.graph.num_vertices(), 64);
        assert_eq!(svmg_crossing_pairs(2).len(), 4);
        assert_eq!(
            shallow_vortex_matching_grid(1)
                .unwrap()
                .graph
                .num_vertices(),
            16
        );
        let cg = cylindrical_matching_grid(4).unwrap().graph;
        assert_eq!(s.graph.num_edges(), cg.num_edges() + 4);
        assert!(is_conformal(&s.graph, &VertexSet::full(64)));
        assert_eq!(refined_vortex(4).unwrap().graph.num_vertices(), 128);
        assert_eq!(refined_vortex(1).unwrap().graph.num_vertices(), 8);
    }

    #[test]
    fn heawood_and_wall() {
        let h = heawood().graph;
        assert_eq!(
            (h.num_vertices(), h.num_edges(), h.max_degree()),
            (14, 21, 3)
        );
        assert!(planar_embed(&h).is_none());
        let g = grid(4, 4).unwrap().graph;
        assert_eq!((g.num_vertices(), g.num_edges()), (16, 24));
        let w = wall(3).unwrap();
        assert!(w.rotation.is_some());
        assert!(w.graph.max_degree() <= 3);
        assert!((0..w.graph.num_vertices()).all(|v| w.graph.degree(v) >= 2));
    }

    #[test]
    fn k44_fixture_loads() {
        let (rv, model) = k44_model_in_rv4().unwrap();
        let k44 = small::complete_bipartite(4, 4);
        let check = crate::minors::verify_matching_minor_model(&rv.graph, &k44, &model);
        assert!(check.is_valid(), "{:?}", check.violations);
    }
}
