use super::{BipartiteGraph, Color};
use crate::error::{input, Error, Result};
use crate::poly::{EdgeLabeling, IntPolynomial};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Shared JSON graph format. Ids must be dense: `black ∪ white = 0..n`.
/// Labels map `"u-v"` to a coefficient array, constant term first; unlabelled
/// edges default to the constant 1. Unknown fields are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub black: Vec<usize>,
    pub white: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, IntPolynomial>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl GraphJson {
    pub fn from_graph(g: &BipartiteGraph) -> Self {
        GraphJson {
            black: g.blacks(),
            white: g.whites(),
            edges: g.edges().iter().map(|&(b, w)| [b, w]).collect(),
            labels: None,
            name: g.name().map(str::to_string),
        }
    }

    pub fn with_labels(mut self, g: &BipartiteGraph, labels: &EdgeLabeling) -> Self {
        let map = g
            .edges()
            .iter()
            .zip(labels)
            .map(|(&(b, w), p)| (format!("{b}-{w}"), p.clone()))
            .collect();
        self.labels = Some(map);
        self
    }

    pub fn to_graph(&self) -> Result<BipartiteGraph> {
        let n = self.black.len() + self.white.len();
        let mut colors: Vec<Option<Color>> = vec![None; n];
        for (list, c) in [(&self.black, Color::Black), (&self.white, Color::White)] {
            for &v in list.iter() {
                if v >= n {
                    return input(format!("vertex id {v} is not dense in 0..{n}"));
                }
                if colors[v].is_some() {
                    return input(format!("vertex {v} listed twice"));
                }
                colors[v] = Some(c);
            }
        }
        let colors: Vec<Color> = colors.into_iter().map(|c| c.expect("dense ids")).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let mut g = BipartiteGraph::from_edges(colors, &edges)?;
        g.set_name(self.name.clone());
        Ok(g)
    }

    /// Labels aligned with the edge ids of [`GraphJson::to_graph`], if any were given.
    pub fn edge_labels(&self, g: &BipartiteGraph) -> Result<Option<EdgeLabeling>> {
        let Some(map) = &self.labels else {
            return Ok(None);
        };
        let mut labels = vec![IntPolynomial::one(); g.num_edges()];
        for (key, p) in map {
            let (u, v) = parse_edge_key(key)?;
            let Some(e) = g.edge_between(u, v) else {
                return input(format!("label for non-edge {key}"));
            };
            labels[e] = p.clone();
        }
        Ok(Some(labels))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed graph JSON: {e}")))
    }
}

fn parse_edge_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Input(format!("label key {key:?} is not of the form \"u-v\""));
    let (a, b) = key.split_once('-').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// Plain edge list: `n_black n_white m`, then `u v` per line. Blacks are
/// `0..n_black`, whites follow. Blank lines and `#` comments are skipped.
pub fn parse_edge_list(text: &str) -> Result<BipartiteGraph> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Input("empty edge list".into()))?;
    let nums = parse_numbers(header)?;
    if nums.len() != 3 {
        return input("edge list header must be `n_black n_white m`");
    }
    let (nb, nw, m) = (nums[0], nums[1], nums[2]);
    let mut g = BipartiteGraph::with_sides(nb, nw);
    let mut count = 0;
    for line in lines {
        let p = parse_numbers(line)?;
        if p.len() != 2 {
            return input(format!("bad edge line {line:?}"));
        }
        g.add_edge(p[0], p[1])?;
        count += 1;
    }
    if count != m {
        return input(format!("header announces {m} edges, found {count}"));
    }
    Ok(g)
}

fn parse_numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Input(format!("not a number: {t:?}")))
        })
        .collect()
}

/// Edge-list text for graphs whose blacks precede their whites.
pub fn to_edge_list(g: &BipartiteGraph) -> Result<String> {
    let nb = g.count_color(Color::Black);
    if g.blacks() != (0..nb).collect::<Vec<_>>() {
        return input("edge-list format needs blacks numbered before whites");
    }
    let mut s = format!("{} {} {}\n", nb, g.num_vertices() - nb, g.num_edges());
    for &(b, w) in g.edges() {
        s.push_str(&format!("{b} {w}\n"));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::small;

    #[test]
    fn json_round_trip_with_labels() {
        let g = small::cycle(4);
        let labels: EdgeLabeling = (1..=4).map(|d| IntPolynomial::monomial(1, d)).collect();
        let js = GraphJson::from_graph(&g).with_labels(&g, &labels);
        let text = serde_json::to_string(&js).unwrap();
        let back = GraphJson::parse(&text).unwrap();
        let h = back.to_graph().unwrap();
        assert_eq!(h.edges(), g.edges());
        assert_eq!(back.edge_labels(&h).unwrap().unwrap(), labels);
    }

    #[test]
    fn json_rejects_sparse_ids_and_tolerates_extra_fields() {
        let bad = r#"{"black":[0],"white":[5],"edges":[[0,5]]}"#;
        assert!(GraphJson::parse(bad).unwrap().to_graph().is_err());
        let ok = r#"{"black":[0],"white":[1],"edges":[[1,0]],"family":"k2"}"#;
        assert_eq!(
            GraphJson::parse(ok)
                .unwrap()
                .to_graph()
                .unwrap()
                .num_edges(),
            1
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = small::complete_bipartite(2, 3);
        let text = to_edge_list(&g).unwrap();
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(h.edges(), g.edges());
        assert!(parse_edge_list("1 1 2\n0 1\n").is_err());
    }
}
