use perfmatch::graph::{parse_edge_list, GraphJson};
use perfmatch::permanent::BiadjacencyMatrix;
use perfmatch::{BipartiteGraph, EdgeLabeling, Error, Result};
use serde_json::Value;
use std::io::Read;
use std::path::Path;

pub struct Loaded {
    pub graph: BipartiteGraph,
    pub labels: Option<EdgeLabeling>,
}

fn read(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Graph JSON (bare or wrapped in a generator record), a CSV biadjacency
/// matrix (`.csv`), or the plain edge list.
pub fn load(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "csv") {
        let graph = BiadjacencyMatrix::parse_csv(&text)?.to_graph();
        return Ok(Loaded {
            graph,
            labels: None,
        });
    }
    if text.trim_start().starts_with('{') {
        let mut v: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("malformed graph JSON: {e}")))?;
        if let Some(inner) = v.get_mut("graph") {
            v = inner.take();
        }
        let js: GraphJson = serde_json::from_value(v)
            .map_err(|e| Error::Input(format!("malformed graph JSON: {e}")))?;
        let graph = js.to_graph()?;
        let labels = js.edge_labels(&graph)?;
        return Ok(Loaded { graph, labels });
    }
    Ok(Loaded {
        graph: parse_edge_list(&text)?,
        labels: None,
    })
}

/// Non-negative integer weights, as an array in edge order or an object
/// keyed by `"u-v"` (missing edges weigh 0).
pub fn load_weights(path: &Path, g: &BipartiteGraph) -> Result<Vec<u32>> {
    let text = read(path)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("malformed weights: {e}")))?;
    let weight = |x: &Value| -> Result<u32> {
        x.as_u64()
            .and_then(|w| u32::try_from(w).ok())
            .ok_or_else(|| Error::Input(format!("weight {x} is not a non-negative integer")))
    };
    match v {
        Value::Array(a) => {
            if a.len() != g.num_edges() {
                return Err(Error::Input(format!(
                    "{} weights given for {} edges",
                    a.len(),
                    g.num_edges()
                )));
            }
            a.iter().map(weight).collect()
        }
        Value::Object(m) => {
            let mut w = vec![0; g.num_edges()];
            for (key, x) in &m {
                let (a, b) = key
                    .split_once('-')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| Error::Input(format!("weight key {key:?} is not \"u-v\"")))?;
                let e = g
                    .edge_between(a, b)
                    .ok_or_else(|| Error::Input(format!("weight for non-edge {key}")))?;
                w[e] = weight(x)?;
            }
            Ok(w)
        }
        _ => Err(Error::Input("weights must be an array or an object".into())),
    }
}
