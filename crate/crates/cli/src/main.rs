mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use perfmatch::generators::{self, FAMILIES};
use perfmatch::graph::{are_isomorphic, is_matching_covered, small, GraphJson};
use perfmatch::matching::is_brace;
use perfmatch::minors::{contains_matching_minor_with, find_conformal_bisubdivision_with};
use perfmatch::pfaffian::{is_pfaffian_with, pfaffian_signs, PfaffianVerdict};
use perfmatch::pmw::{decomposition_width, exact_pmw_with, heuristic_decomposition};
use perfmatch::reduction::{
    chi_weight_sum_with, sign_crossing_replace, signed_count, CrossingSpec,
};
use perfmatch::router::{
    generating_function_with, weighted_generating_function_with, Route, RouterOptions,
};
use perfmatch::tightcut::tight_cut_decomposition_seeded;
use perfmatch::{BipartiteGraph, Bounds, Error, IntPolynomial};
use report::Output;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "perfmatch",
    version,
    about = "Count and analyse perfect matchings of bipartite graphs"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Seed for every randomised choice.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads for parallel-capable steps.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    threads: u64,
    /// Largest host for minor searches.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    search_bound: Option<u64>,
    /// Largest decomposition width the DP accepts.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    width_cap: Option<u64>,
    /// Largest graph the enumeration oracle accepts.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    oracle_bound: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum RouteArg {
    Auto,
    Pfaffian,
    Dp,
    Oracle,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::Pfaffian => Route::Pfaffian,
            RouteArg::Dp => Route::Dp,
            RouteArg::Oracle => Route::Oracle,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph family member.
    Gen {
        family: String,
        params: Vec<usize>,
        /// Write to this file instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Count perfect matchings, or the weighted generating function.
    Count {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
        /// Edge weights: a JSON array in edge order or an object keyed "u-v".
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Structural summary: matching covered, brace, Pfaffian, braces, width.
    Analyze { input: PathBuf },
    /// Perfect matching width and a decomposition.
    Pmw {
        input: PathBuf,
        /// Search for an optimal decomposition (small graphs only).
        #[arg(long)]
        exact: bool,
    },
    /// Pfaffian verdict and a sign pattern when one is found.
    Pfaffian { input: PathBuf },
    /// Matching minor containment.
    Minor {
        input: PathBuf,
        /// A family name (k33, k44, cube, heawood, c4) or a graph file.
        #[arg(long, default_value = "k33")]
        pattern: String,
    },
    /// Tight cut decomposition into braces.
    Decompose { input: PathBuf },
    /// Replace crossing edge pairs by the sign-crossing gadget.
    Gadget {
        input: PathBuf,
        /// Crossing pairs as JSON: {"pairs": [{"e": [u, v], "f": [x, y]}]}.
        #[arg(long)]
        spec: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.render(cli.run.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) => 2,
        Error::RouteInfeasible(_) => 3,
        Error::Resource(_) => 4,
        Error::Internal(_) => 1,
    }
}

fn bounds(run: &RunConfig) -> Bounds {
    let mut b = Bounds::default();
    if let Some(v) = run.search_bound {
        b.search_bound = v as usize;
        b.general_minor_bound = b.general_minor_bound.min(v as usize);
    }
    if let Some(v) = run.width_cap {
        b.width_cap = v as usize;
    }
    if let Some(v) = run.oracle_bound {
        b.oracle_bound = v as usize;
    }
    b
}

fn run(cli: &Cli) -> perfmatch::Result<Output> {
    let b = bounds(&cli.run);
    let mut out = Output::new(&b, cli.run.seed);
    match &cli.command {
        Command::Gen {
            family,
            params,
            out: path,
        } => {
            let g = generators::generate(family, params).map_err(|e| match e {
                Error::Input(m) => Error::Input(format!("{m} (families: {})", FAMILIES.join(", "))),
                e => e,
            })?;
            let js = serde_json::to_value(g.to_json()).map_err(internal)?;
            if let Some(p) = path {
                let text = serde_json::to_string_pretty(&js).map_err(internal)? + "\n";
                std::fs::write(p, text)
                    .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
                out.set("written", json!(p.display().to_string()));
                out.line(format!(
                    "wrote {} ({} vertices)",
                    p.display(),
                    g.graph.num_vertices()
                ));
            } else {
                out.raw(js);
            }
        }
        Command::Count {
            input: path,
            route,
            weights,
        } => {
            let loaded = input::load(path)?;
            let g = &loaded.graph;
            let opts = RouterOptions {
                route: (*route).into(),
                bounds: b,
                threads: cli.run.threads as usize,
                ..Default::default()
            };
            let (poly, report, mode) = if let Some(wp) = weights {
                let w = input::load_weights(wp, g)?;
                let (p, r) = weighted_generating_function_with(g, &w, &opts)?;
                (p, r, "weighted")
            } else if let Some(labels) = &loaded.labels {
                let (p, r) = generating_function_with(g, labels, &opts)?;
                (p, r, "labelled")
            } else {
                let ones = vec![IntPolynomial::one(); g.num_edges()];
                let (p, r) = generating_function_with(g, &ones, &opts)?;
                (p, r, "count")
            };
            let count = poly.sum_coeffs();
            out.set("count", json!(count.to_string()));
            out.line(format!("count: {count}"));
            if mode != "count" {
                out.set("polynomial", serde_json::to_value(&poly).map_err(internal)?);
                out.line(format!("polynomial: {poly}"));
            }
            out.line(format!(
                "route {}: {} elementary components, {} tight cuts, {} braces",
                report.requested,
                report.elementary_components,
                report.tight_cuts,
                report.braces.len()
            ));
            for br in &report.braces {
                out.line(format!(
                    "  brace {}v/{}e via {}{}{}",
                    br.vertices,
                    br.edges,
                    br.route,
                    br.verdict
                        .map(|v| format!(", {}", verdict_name(v)))
                        .unwrap_or_default(),
                    br.width.map(|w| format!(", width {w}")).unwrap_or_default()
                ));
            }
            for w in report.warnings() {
                out.line(format!("warning: {w}"));
            }
            out.set(
                "routing_report",
                serde_json::to_value(&report).map_err(internal)?,
            );
        }
        Command::Analyze { input: path } => {
            let g = input::load(path)?.graph;
            analyze(&g, &b, cli.run.seed, &mut out)?;
        }
        Command::Pmw { input: path, exact } => {
            let g = input::load(path)?.graph;
            let (w, d, kind) = if *exact {
                let (w, d) = exact_pmw_with(&g, &b)?;
                (w, d, "exact")
            } else {
                let d = heuristic_decomposition(&g)?;
                (decomposition_width(&g, &d)?, d, "heuristic")
            };
            out.set("width", json!(w));
            out.set("kind", json!(kind));
            out.set(
                "decomposition",
                serde_json::to_value(d.to_json()).map_err(internal)?,
            );
            out.line(format!("{kind} perfect matching width: {w}"));
        }
        Command::Pfaffian { input: path } => {
            let g = input::load(path)?.graph;
            pfaffian(&g, &b, cli.run.seed, &mut out)?;
        }
        Command::Minor {
            input: path,
            pattern,
        } => {
            let g = input::load(path)?.graph;
            let h = pattern_graph(pattern)?;
            if h.max_degree() <= 3 {
                let model = find_conformal_bisubdivision_with(&g, &h, &b)?;
                out.set("contains", json!(model.is_some()));
                out.set("method", json!("conformal_bisubdivision"));
                out.line(format!("contains {pattern}: {}", model.is_some()));
                if let Some(m) = model {
                    out.set("model", serde_json::to_value(m).map_err(internal)?);
                }
            } else {
                let found = contains_matching_minor_with(&g, &h, &b)?;
                out.set("contains", json!(found));
                out.set("method", json!("bicontraction_search"));
                out.line(format!("contains {pattern}: {found}"));
            }
        }
        Command::Decompose { input: path } => {
            let g = input::load(path)?.graph;
            let tree = tight_cut_decomposition_seeded(&g, Some(cli.run.seed))?;
            let names: Vec<String> = tree.braces().map(brace_name).collect();
            out.line(format!("{} braces: {}", names.len(), names.join(", ")));
            out.set("braces", json!(names));
            out.set(
                "tree",
                serde_json::to_value(tree.to_json()).map_err(internal)?,
            );
        }
        Command::Gadget { input: path, spec } => {
            let g = input::load(path)?.graph;
            let text = std::fs::read_to_string(spec)
                .map_err(|e| Error::Input(format!("{}: {e}", spec.display())))?;
            let spec: CrossingSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Input(format!("malformed crossing spec: {e}")))?;
            let r = sign_crossing_replace(&g, &spec)?;
            out.set(
                "graph",
                serde_json::to_value(GraphJson::from_graph(&r.graph)).map_err(internal)?,
            );
            out.set("weights", json!(r.weights));
            out.line(format!(
                "replaced {} crossing pairs: {} vertices, {} edges",
                spec.pairs.len(),
                r.graph.num_vertices(),
                r.graph.num_edges()
            ));
            if r.graph.num_vertices() <= b.oracle_bound {
                let chi = chi_weight_sum_with(&g, &spec, &b)?;
                let signed = signed_count(&r.graph, &r.weights, &b)?;
                out.set("chi_weight_sum", json!(chi.to_string()));
                out.set("replaced_signed_count", json!(signed.to_string()));
                out.line(format!(
                    "chi-weighted sum {chi}, signed count of replacement {signed}"
                ));
            } else {
                out.line("identity not checked: replacement exceeds the oracle bound".to_string());
            }
        }
    }
    Ok(out)
}

fn internal(e: serde_json::Error) -> Error {
    Error::Internal(e.to_string())
}

fn verdict_name(v: PfaffianVerdict) -> &'static str {
    match v {
        PfaffianVerdict::Pfaffian => "pfaffian",
        PfaffianVerdict::NonPfaffian => "non_pfaffian",
        PfaffianVerdict::Unknown => "unknown",
    }
}

fn pattern_graph(p: &str) -> perfmatch::Result<BipartiteGraph> {
    Ok(match p {
        "k33" => small::complete_bipartite(3, 3),
        "k44" => small::complete_bipartite(4, 4),
        "cube" | "q3" => small::cube(),
        "heawood" => generators::heawood().graph,
        "c4" => small::cycle(4),
        path => input::load(&PathBuf::from(path))?.graph,
    })
}

fn brace_name(b: &BipartiteGraph) -> String {
    let known = [
        ("C4", small::cycle(4)),
        ("K3,3", small::complete_bipartite(3, 3)),
        ("Q3", small::cube()),
        ("K4,4", small::complete_bipartite(4, 4)),
        ("Heawood", generators::heawood().graph),
    ];
    for (name, h) in &known {
        if h.num_vertices() == b.num_vertices()
            && h.num_edges() == b.num_edges()
            && are_isomorphic(h, b)
        {
            return name.to_string();
        }
    }
    format!("brace({}v,{}e)", b.num_vertices(), b.num_edges())
}

// Verdict of a matching covered graph from those of its braces.
fn combined_verdict(verdicts: &[PfaffianVerdict]) -> PfaffianVerdict {
    if verdicts.contains(&PfaffianVerdict::NonPfaffian) {
        PfaffianVerdict::NonPfaffian
    } else if verdicts.iter().all(|&v| v == PfaffianVerdict::Pfaffian) {
        PfaffianVerdict::Pfaffian
    } else {
        PfaffianVerdict::Unknown
    }
}

fn brace_verdicts(
    braces: &[BipartiteGraph],
    b: &Bounds,
) -> perfmatch::Result<Vec<PfaffianVerdict>> {
    braces
        .iter()
        .map(|x| Ok(is_pfaffian_with(x, b)?.verdict))
        .collect()
}

fn analyze(g: &BipartiteGraph, b: &Bounds, seed: u64, out: &mut Output) -> perfmatch::Result<()> {
    let mc = is_matching_covered(g);
    out.set("vertices", json!(g.num_vertices()));
    out.set("edges", json!(g.num_edges()));
    out.set("matching_covered", json!(mc));
    out.line(format!(
        "{} vertices, {} edges, matching covered: {mc}",
        g.num_vertices(),
        g.num_edges()
    ));
    let brace = mc && is_brace(g);
    out.set("brace", json!(brace));
    out.line(format!("brace: {brace}"));
    if mc {
        let tree = tight_cut_decomposition_seeded(g, Some(seed))?;
        let braces: Vec<BipartiteGraph> = tree.braces().cloned().collect();
        let names: Vec<String> = braces.iter().map(brace_name).collect();
        let verdict = combined_verdict(&brace_verdicts(&braces, b)?);
        out.set("braces", json!(names));
        out.set("pfaffian", json!(verdict_name(verdict)));
        out.line(format!("braces: {}", names.join(", ")));
        out.line(format!("pfaffian: {}", verdict_name(verdict)));
    }
    let mut pmw = serde_json::Map::new();
    if perfmatch::graph::has_perfect_matching(g) {
        let d = heuristic_decomposition(g)?;
        let h = decomposition_width(g, &d)?;
        pmw.insert("heuristic".into(), json!(h));
        out.line(format!("perfect matching width: at most {h}"));
        if g.num_vertices() <= b.exact_pmw_bound {
            let (w, _) = exact_pmw_with(g, b)?;
            pmw.insert("exact".into(), json!(w));
            out.line(format!("perfect matching width: exactly {w}"));
        }
    }
    out.set("pmw", Value::Object(pmw));
    Ok(())
}

fn pfaffian(g: &BipartiteGraph, b: &Bounds, seed: u64, out: &mut Output) -> perfmatch::Result<()> {
    if !is_matching_covered(g) {
        return Err(Error::Input(
            "the Pfaffian test needs a matching covered graph".into(),
        ));
    }
    let braces: Vec<BipartiteGraph> = tight_cut_decomposition_seeded(g, Some(seed))?
        .braces()
        .cloned()
        .collect();
    let mut per = Vec::new();
    for x in &braces {
        let r = is_pfaffian_with(x, b)?;
        per.push(
            json!({"brace": brace_name(x), "verdict": verdict_name(r.verdict), "reason": r.reason}),
        );
    }
    let verdict = combined_verdict(&brace_verdicts(&braces, b)?);
    out.set("verdict", json!(verdict_name(verdict)));
    out.set("braces", Value::Array(per));
    out.line(format!("pfaffian: {}", verdict_name(verdict)));
    if verdict == PfaffianVerdict::Pfaffian {
        match pfaffian_signs(g, 200_000) {
            Ok(Some(o)) => {
                out.set(
                    "signs",
                    serde_json::to_value(o.to_map(g)).map_err(internal)?,
                );
                let neg = o.signs.iter().filter(|&&s| s < 0).count();
                out.line(format!("sign pattern with {neg} negative edges"));
            }
            _ => out.line("no explicit sign pattern within the cycle budget".to_string()),
        }
    }
    Ok(())
}
