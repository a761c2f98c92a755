//! The counting router: elementary components, tight cut folding and a
//! per-brace choice between Pfaffian signs, the decomposition DP and
//! enumeration.

use crate::config::Bounds;
use crate::error::{input, Error, Result};
use crate::graph::{
    elementary_components, has_perfect_matching, BipartiteGraph, VertexId, VertexSet,
};
use crate::permanent::enumerate_generating_function_with;
use crate::pfaffian::{
    kasteleyn_orientation, pfaffian_generating_function, pfaffian_signs_by_cycles, PfaffianVerdict,
    SignedOrientation,
};
use crate::planarity::planar_embed;
use crate::pmw::{
    decomposition_width, exact_pmw_with, generating_function_dp_with, heuristic_decomposition,
    vertex_gen_dp_with, PerfectMatchingDecomposition,
};
use crate::poly::{EdgeLabeling, IntPolynomial};
use crate::tightcut::{contract_unchecked, nontrivial_cut_unchecked};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    #[default]
    Auto,
    Pfaffian,
    Dp,
    Oracle,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Auto => "auto",
            Route::Pfaffian => "pfaffian",
            Route::Dp => "dp",
            Route::Oracle => "oracle",
        })
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Route::Auto),
            "pfaffian" => Ok(Route::Pfaffian),
            "dp" => Ok(Route::Dp),
            "oracle" => Ok(Route::Oracle),
            _ => input(format!("unknown route {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouterOptions {
    pub route: Route,
    pub bounds: Bounds,
    /// Alternating cycles the sign search may enumerate on a non-planar brace.
    pub max_cycles: u64,
    /// Worker threads for independent elementary components; 1 runs inline.
    pub threads: usize,
}

impl Default for RouterOptions {
    fn default() -> Self {
        RouterOptions {
            route: Route::Auto,
            bounds: Bounds::default(),
            max_cycles: 20_000,
            threads: 1,
        }
    }
}

impl RouterOptions {
    pub fn with_route(route: Route) -> Self {
        RouterOptions {
            route,
            ..Default::default()
        }
    }
}

/// How one brace was counted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceReport {
    pub vertices: usize,
    pub edges: usize,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<PfaffianVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutingReport {
    pub requested: Route,
    pub has_perfect_matching: bool,
    pub elementary_components: usize,
    pub tight_cuts: usize,
    pub braces: Vec<BraceReport>,
}

impl RoutingReport {
    pub fn warnings(&self) -> impl Iterator<Item = &str> {
        self.braces
            .iter()
            .flat_map(|b| b.warnings.iter().map(String::as_str))
    }

    fn absorb(&mut self, other: RoutingReport) {
        self.tight_cuts += other.tight_cuts;
        self.braces.extend(other.braces);
    }
}

/// Number of perfect matchings of `g`.
pub fn count_perfect_matchings(g: &BipartiteGraph) -> Result<BigInt> {
    Ok(count_perfect_matchings_with(g, &RouterOptions::default())?.0)
}

pub fn count_perfect_matchings_with(
    g: &BipartiteGraph,
    opts: &RouterOptions,
) -> Result<(BigInt, RoutingReport)> {
    let ones = vec![IntPolynomial::one(); g.num_edges()];
    let (p, report) = generating_function_with(g, &ones, opts)?;
    Ok((p.sum_coeffs(), report))
}

/// `Σ_M x^{w(M)}` over the perfect matchings of `g`.
pub fn weighted_generating_function(g: &BipartiteGraph, w: &[u32]) -> Result<IntPolynomial> {
    Ok(weighted_generating_function_with(g, w, &RouterOptions::default())?.0)
}

pub fn weighted_generating_function_with(
    g: &BipartiteGraph,
    w: &[u32],
    opts: &RouterOptions,
) -> Result<(IntPolynomial, RoutingReport)> {
    if w.len() != g.num_edges() {
        return input("one weight per edge is required");
    }
    let labels: EdgeLabeling = w
        .iter()
        .map(|&k| IntPolynomial::monomial(1, k as usize))
        .collect();
    generating_function_with(g, &labels, opts)
}

/// `Σ_M Π_{e∈M} p(e)` for arbitrary polynomial labels.
pub fn generating_function(g: &BipartiteGraph, labels: &EdgeLabeling) -> Result<IntPolynomial> {
    Ok(generating_function_with(g, labels, &RouterOptions::default())?.0)
}

pub fn generating_function_with(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    opts: &RouterOptions,
) -> Result<(IntPolynomial, RoutingReport)> {
    if labels.len() != g.num_edges() {
        return input("one label per edge is required");
    }
    let mut report = RoutingReport {
        requested: opts.route,
        ..Default::default()
    };
    if !g.is_balanced() || !has_perfect_matching(g) {
        return Ok((IntPolynomial::zero(), report));
    }
    report.has_perfect_matching = true;
    let ed = elementary_components(g)?;
    report.elementary_components = ed.components.len();
    let run = |i: usize| -> Result<(IntPolynomial, RoutingReport)> {
        let sub = ed.component_graph(g, i);
        let sub_labels: EdgeLabeling = sub.edge_map.iter().map(|&e| labels[e].clone()).collect();
        let mut r = RoutingReport::default();
        let p = matching_covered_gf(&sub.graph, &sub_labels, opts, &mut r)?;
        Ok((p, r))
    };
    let parts: Vec<Result<(IntPolynomial, RoutingReport)>> =
        if opts.threads > 1 && ed.components.len() > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(opts.threads)
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            pool.install(|| (0..ed.components.len()).into_par_iter().map(run).collect())
        } else {
            (0..ed.components.len()).map(run).collect()
        };
    let mut total = IntPolynomial::one();
    for part in parts {
        let (p, r) = part?;
        total = total.mul_ref(&p);
        report.absorb(r);
    }
    Ok((total, report))
}

// Generating function of a graph that may lack perfect matchings or be
// disconnected; used for the pieces left after deleting vertices.
fn general_gf(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    opts: &RouterOptions,
    report: &mut RoutingReport,
) -> Result<IntPolynomial> {
    let (p, r) = generating_function_with(g, labels, opts)?;
    report.absorb(r);
    Ok(p)
}

fn matching_covered_gf(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    opts: &RouterOptions,
    report: &mut RoutingReport,
) -> Result<IntPolynomial> {
    let Some(mut x) = nontrivial_cut_unchecked(g, None) else {
        return brace_gf(g, labels, opts, report);
    };
    // shrink the shore until the side folded away is a brace
    loop {
        let b1 = contract_unchecked(g, &x.complement());
        let Some(y) = nontrivial_cut_unchecked(&b1.graph, None) else {
            break;
        };
        let y = if y.contains(b1.contracted) {
            y.complement()
        } else {
            y
        };
        x = VertexSet::from_vertices(
            g.num_vertices(),
            y.iter().map(|v| b1.origin[v].expect("inside the shore")),
        );
    }
    report.tight_cuts += 1;
    let folded = fold_tight_cut_inner(g, labels, &x, opts, report, true)?;
    matching_covered_gf(&folded.graph, &folded.labels, opts, report)
}

/// `g` with the shore `x` contracted and its matchings folded into the
/// labels of the edges at the contracted vertex.
#[derive(Debug, Clone)]
pub struct FoldedCut {
    pub graph: BipartiteGraph,
    pub labels: EdgeLabeling,
    pub contracted: VertexId,
    /// Original vertex of each vertex of `graph`; `None` for the contracted one.
    pub origin: Vec<Option<VertexId>>,
}

/// Folds the shore `x` of a tight cut: the edge from the contracted vertex to
/// `y` gets label `Σ_x p(xy) · GF(G[X] - x)`. The generating function of the
/// result equals that of `g`.
pub fn fold_tight_cut(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    x: &VertexSet,
    opts: &RouterOptions,
) -> Result<(FoldedCut, RoutingReport)> {
    let check = crate::tightcut::is_tight_cut(g, x)?;
    if !check.tight || check.trivial {
        return input("the shore must define a non-trivial tight cut");
    }
    if labels.len() != g.num_edges() {
        return input("one label per edge is required");
    }
    let mut report = RoutingReport {
        requested: opts.route,
        ..Default::default()
    };
    let b1 = contract_unchecked(g, &x.complement());
    let is_brace = nontrivial_cut_unchecked(&b1.graph, None).is_none();
    let f = fold_tight_cut_inner(g, labels, x, opts, &mut report, is_brace)?;
    Ok((f, report))
}

fn fold_tight_cut_inner(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    x: &VertexSet,
    opts: &RouterOptions,
    report: &mut RoutingReport,
    b1_is_brace: bool,
) -> Result<FoldedCut> {
    let n = g.num_vertices();
    let b1 = contract_unchecked(g, &x.complement());
    let c = b1.contracted;
    let b1_labels = mapped_labels(g, labels, &b1.graph, &b1.origin);
    // GF(G[X] - u) for each u in X seen across the cut
    let mut inner = vec![None; n];
    if b1_is_brace {
        for (u, p) in brace_vertex_gen(&b1.graph, &b1_labels, c, opts, report)? {
            inner[b1.origin[u].expect("shore vertex")] = Some(p);
        }
    } else {
        for u in b1.graph.neighbors(c).collect::<Vec<_>>() {
            let sub = b1
                .graph
                .remove_vertices(&VertexSet::from_vertices(b1.graph.num_vertices(), [c, u]));
            let sl: EdgeLabeling = sub.edge_map.iter().map(|&e| b1_labels[e].clone()).collect();
            inner[b1.origin[u].expect("shore vertex")] =
                Some(general_gf(&sub.graph, &sl, opts, report)?);
        }
    }
    let b2 = contract_unchecked(g, x);
    let c2 = b2.contracted;
    let mut out_labels = mapped_labels(g, labels, &b2.graph, &b2.origin);
    for &(y, e) in b2.graph.incident(c2) {
        let y0 = b2.origin[y].expect("outside vertex");
        let mut sum = IntPolynomial::zero();
        for &(u, f) in g.incident(y0) {
            if x.contains(u) {
                if let Some(p) = &inner[u] {
                    sum.add_assign_ref(&labels[f].mul_ref(p));
                }
            }
        }
        out_labels[e] = sum;
    }
    Ok(FoldedCut {
        graph: b2.graph,
        labels: out_labels,
        contracted: c2,
        origin: b2.origin,
    })
}

// Labels of a contraction: original labels where both ends survive, one on
// edges at the contracted vertex.
fn mapped_labels(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    h: &BipartiteGraph,
    origin: &[Option<VertexId>],
) -> EdgeLabeling {
    h.edges()
        .iter()
        .map(|&(b, w)| match (origin[b], origin[w]) {
            (Some(ob), Some(ow)) => labels[g.edge_between(ob, ow).expect("surviving edge")].clone(),
            _ => IntPolynomial::one(),
        })
        .collect()
}

// The method chosen for one brace, with what it needs.
enum Method {
    Pfaffian(SignedOrientation),
    Dp(PerfectMatchingDecomposition),
    Oracle,
}

fn decomposition(
    g: &BipartiteGraph,
    bounds: &Bounds,
) -> Result<(usize, PerfectMatchingDecomposition)> {
    if g.num_vertices() <= bounds.exact_pmw_bound {
        exact_pmw_with(g, bounds)
    } else {
        let d = heuristic_decomposition(g)?;
        Ok((decomposition_width(g, &d)?, d))
    }
}

fn choose(g: &BipartiteGraph, opts: &RouterOptions, rep: &mut BraceReport) -> Result<Method> {
    let signs = |rep: &mut BraceReport| -> Result<Option<SignedOrientation>> {
        if let Some(rot) = planar_embed(g) {
            rep.verdict = Some(PfaffianVerdict::Pfaffian);
            return kasteleyn_orientation(g, &rot).map(Some);
        }
        match pfaffian_signs_by_cycles(g, opts.max_cycles) {
            Ok(Some(o)) => {
                rep.verdict = Some(PfaffianVerdict::Pfaffian);
                Ok(Some(o))
            }
            Ok(None) => {
                rep.verdict = Some(PfaffianVerdict::NonPfaffian);
                Ok(None)
            }
            Err(Error::Resource(_)) => {
                rep.verdict = Some(PfaffianVerdict::Unknown);
                Ok(None)
            }
            Err(e) => Err(e),
        }
    };
    let dp = |rep: &mut BraceReport| -> Result<Option<PerfectMatchingDecomposition>> {
        let (w, d) = decomposition(g, &opts.bounds)?;
        rep.width = Some(w);
        Ok((w <= opts.bounds.width_cap).then_some(d))
    };
    match opts.route {
        Route::Oracle => Ok(Method::Oracle),
        Route::Pfaffian => match signs(rep)? {
            Some(o) => Ok(Method::Pfaffian(o)),
            None => Err(Error::RouteInfeasible(format!(
                "no Pfaffian sign pattern for a brace on {} vertices ({})",
                g.num_vertices(),
                match rep.verdict {
                    Some(PfaffianVerdict::NonPfaffian) => "not Pfaffian",
                    _ => "sign search exceeded its budget",
                }
            ))),
        },
        Route::Dp => match dp(rep)? {
            Some(d) => Ok(Method::Dp(d)),
            None => Err(Error::RouteInfeasible(format!(
                "brace on {} vertices has decomposition width {} above the cap {}",
                g.num_vertices(),
                rep.width.unwrap_or(0),
                opts.bounds.width_cap
            ))),
        },
        Route::Auto => {
            if let Some(o) = signs(rep)? {
                return Ok(Method::Pfaffian(o));
            }
            if let Some(d) = dp(rep)? {
                return Ok(Method::Dp(d));
            }
            rep.warnings.push(format!(
                "brace on {} vertices is {} and has width {} above the cap {}; counted by enumeration",
                g.num_vertices(),
                match rep.verdict {
                    Some(PfaffianVerdict::NonPfaffian) => "not Pfaffian",
                    _ => "of unknown Pfaffian status",
                },
                rep.width.unwrap_or(0),
                opts.bounds.width_cap
            ));
            Ok(Method::Oracle)
        }
    }
}

fn new_report(g: &BipartiteGraph) -> BraceReport {
    BraceReport {
        vertices: g.num_vertices(),
        edges: g.num_edges(),
        route: Route::Auto,
        verdict: None,
        width: None,
        warnings: Vec::new(),
    }
}

fn route_of(m: &Method) -> Route {
    match m {
        Method::Pfaffian(_) => Route::Pfaffian,
        Method::Dp(_) => Route::Dp,
        Method::Oracle => Route::Oracle,
    }
}

fn brace_gf(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    opts: &RouterOptions,
    report: &mut RoutingReport,
) -> Result<IntPolynomial> {
    let mut rep = new_report(g);
    let method = choose(g, opts, &mut rep)?;
    rep.route = route_of(&method);
    let p = match &method {
        Method::Pfaffian(o) => pfaffian_generating_function(g, o, labels)?,
        Method::Dp(d) => generating_function_dp_with(g, labels, d, &opts.bounds)?,
        Method::Oracle => enumerate_generating_function_with(g, labels, &opts.bounds)?,
    };
    report.braces.push(rep);
    Ok(p)
}

// For each neighbour u of c, GF(g - c - u) (labels at c are ignored).
fn brace_vertex_gen(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    c: VertexId,
    opts: &RouterOptions,
    report: &mut RoutingReport,
) -> Result<Vec<(VertexId, IntPolynomial)>> {
    let mut rep = new_report(g);
    let method = choose(g, opts, &mut rep)?;
    rep.route = route_of(&method);
    let mut out = Vec::new();
    match &method {
        Method::Dp(d) => {
            let mut l = labels.clone();
            for &(_, e) in g.incident(c) {
                l[e] = IntPolynomial::one();
            }
            for (e, p) in vertex_gen_dp_with(g, &l, d, c, &opts.bounds)? {
                out.push((g.other_end(e, c), p));
            }
        }
        _ => {
            for &(u, _) in g.incident(c) {
                let sub = g.remove_vertices(&VertexSet::from_vertices(g.num_vertices(), [c, u]));
                let sl: EdgeLabeling = sub.edge_map.iter().map(|&e| labels[e].clone()).collect();
                let p = match &method {
                    // signs of a Pfaffian graph stay Pfaffian after deleting both ends of an edge
                    Method::Pfaffian(o) => {
                        pfaffian_generating_function(&sub.graph, &o.restrict(&sub.edge_map), &sl)?
                    }
                    _ => enumerate_generating_function_with(&sub.graph, &sl, &opts.bounds)?,
                };
                out.push((u, p));
            }
        }
    }
    report.braces.push(rep);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::{count_perfect_matchings_enum, small};
    use crate::permanent::enumerate_generating_function;

    #[test]
    fn c6_splits_into_two_c4() {
        let (n, rep) =
            count_perfect_matchings_with(&small::cycle(6), &RouterOptions::default()).unwrap();
        assert_eq!(n, BigInt::from(2));
        assert_eq!(rep.tight_cuts, 1);
        assert_eq!(rep.braces.len(), 2);
        assert!(rep.braces.iter().all(|b| b.vertices == 4));
    }

    #[test]
    fn grid_by_pfaffian_route() {
        let g = generators::grid(4, 4).unwrap().graph;
        let (n, rep) =
            count_perfect_matchings_with(&g, &RouterOptions::with_route(Route::Pfaffian)).unwrap();
        assert_eq!(n, BigInt::from(36));
        assert!(rep.braces.iter().all(|b| b.route == Route::Pfaffian));
    }

    #[test]
    fn cg2_by_dp_route() {
        let g = generators::cylindrical_matching_grid(2).unwrap().graph;
        let (n, _) =
            count_perfect_matchings_with(&g, &RouterOptions::with_route(Route::Dp)).unwrap();
        assert_eq!(n, BigInt::from(count_perfect_matchings_enum(&g)));
    }

    #[test]
    fn no_perfect_matching_is_zero() {
        assert_eq!(
            count_perfect_matchings(&small::path(3)).unwrap(),
            BigInt::from(0)
        );
        assert_eq!(
            count_perfect_matchings(&small::path(4)).unwrap(),
            BigInt::from(1)
        );
    }

    #[test]
    fn forced_pfaffian_on_k33_is_infeasible() {
        let g = small::complete_bipartite(3, 3);
        let r = count_perfect_matchings_with(&g, &RouterOptions::with_route(Route::Pfaffian));
        assert!(matches!(r, Err(Error::RouteInfeasible(_))));
        let (n, rep) = count_perfect_matchings_with(&g, &RouterOptions::default()).unwrap();
        assert_eq!(n, BigInt::from(6));
        assert_eq!(rep.braces[0].verdict, Some(PfaffianVerdict::NonPfaffian));
    }

    #[test]
    fn weighted_matches_oracle() {
        let g = small::cube();
        let w: Vec<u32> = (0..g.num_edges() as u32).map(|i| i % 3).collect();
        let labels: EdgeLabeling = w
            .iter()
            .map(|&k| IntPolynomial::monomial(1, k as usize))
            .collect();
        let want = enumerate_generating_function(&g, &labels).unwrap();
        for route in [Route::Auto, Route::Pfaffian, Route::Dp, Route::Oracle] {
            let (p, _) =
                weighted_generating_function_with(&g, &w, &RouterOptions::with_route(route))
                    .unwrap();
            assert_eq!(p, want, "{route}");
        }
    }

    #[test]
    fn route_names_round_trip() {
        for r in [Route::Auto, Route::Pfaffian, Route::Dp, Route::Oracle] {
            assert_eq!(r.to_string().parse::<Route>().unwrap(), r);
        }
        assert!("fast".parse::<Route>().is_err());
    }
}
