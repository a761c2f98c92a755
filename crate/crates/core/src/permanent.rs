//! Brute-force oracles: Ryser's formula and explicit enumeration.

use crate::config::Bounds;
use crate::error::{input, resource, Error, Result};
use crate::graph::{for_each_perfect_matching, BipartiteGraph, Color, VertexId};
use crate::poly::{EdgeLabeling, IntPolynomial};
use num_bigint::BigInt;
use num_traits::Zero;

/// Square integer matrix with rows indexed by black vertices and columns by
/// white vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiadjacencyMatrix {
    pub entries: Vec<Vec<i64>>,
    pub row_vertex: Vec<VertexId>,
    pub col_vertex: Vec<VertexId>,
}

impl BiadjacencyMatrix {
    /// The 0/1 biadjacency matrix; needs as many blacks as whites.
    pub fn from_graph(g: &BipartiteGraph) -> Result<Self> {
        if !g.is_balanced() {
            return input("biadjacency matrix needs equally many black and white vertices");
        }
        let rows = g.blacks();
        let cols = g.whites();
        let mut col_of = vec![usize::MAX; g.num_vertices()];
        for (j, &w) in cols.iter().enumerate() {
            col_of[w] = j;
        }
        let mut entries = vec![vec![0; cols.len()]; rows.len()];
        for (i, &b) in rows.iter().enumerate() {
            for w in g.neighbors(b) {
                entries[i][col_of[w]] = 1;
            }
        }
        Ok(BiadjacencyMatrix {
            entries,
            row_vertex: rows,
            col_vertex: cols,
        })
    }

    pub fn from_rows(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return input("matrix is not square");
        }
        Ok(BiadjacencyMatrix {
            entries,
            row_vertex: (0..n).collect(),
            col_vertex: (n..2 * n).collect(),
        })
    }

    /// Comma- or whitespace-separated rows; blank lines and `#` comments skipped.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::Input(format!("not an integer: {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// The bipartite graph of the nonzero pattern, blacks first.
    pub fn to_graph(&self) -> BipartiteGraph {
        let n = self.size();
        let mut g = BipartiteGraph::with_sides(n, n);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a != 0 {
                    g.add_edge(i, n + j).expect("biadjacency edge");
                }
            }
        }
        g
    }
}

/// `perm(A)` by Ryser's inclusion–exclusion over column subsets in Gray-code
/// order, with row sums updated one column at a time.
pub fn ryser_permanent(a: &BiadjacencyMatrix) -> Result<BigInt> {
    ryser_permanent_with(a, &Bounds::default())
}

pub fn ryser_permanent_with(a: &BiadjacencyMatrix, bounds: &Bounds) -> Result<BigInt> {
    let n = a.size();
    if n > bounds.ryser_bound {
        return resource(format!(
            "Ryser permanent limited to n <= {}, got {n}",
            bounds.ryser_bound
        ));
    }
    if n == 0 {
        return Ok(BigInt::from(1));
    }
    let mut sums = vec![0i128; n];
    let mut total = BigInt::zero();
    let mut acc: i128 = 0;
    for k in 1u64..(1u64 << n) {
        // Gray code: flip the lowest set bit of k
        let j = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        let sign: i128 = if gray >> j & 1 == 1 { 1 } else { -1 };
        for (s, row) in sums.iter_mut().zip(&a.entries) {
            *s += sign * row[j] as i128;
        }
        let bits = gray.count_ones() as usize;
        let term_sign: i128 = if (n - bits).is_multiple_of(2) { 1 } else { -1 };
        let mut prod: Option<i128> = Some(term_sign);
        for &s in &sums {
            prod = prod.and_then(|p| p.checked_mul(s));
            if prod == Some(0) {
                break;
            }
        }
        match prod {
            Some(p) => match acc.checked_add(p) {
                Some(v) => acc = v,
                None => {
                    total += acc;
                    acc = p;
                }
            },
            None => {
                let mut big = BigInt::from(term_sign);
                for &s in &sums {
                    big *= s;
                }
                total += big;
            }
        }
    }
    Ok(total + acc)
}

/// `Σ_M Π_{e∈M} p(e)` over all perfect matchings, by enumeration.
pub fn enumerate_generating_function(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
) -> Result<IntPolynomial> {
    enumerate_generating_function_with(g, labels, &Bounds::default())
}

pub fn enumerate_generating_function_with(
    g: &BipartiteGraph,
    labels: &EdgeLabeling,
    bounds: &Bounds,
) -> Result<IntPolynomial> {
    if labels.len() != g.num_edges() {
        return input("one label per edge is required");
    }
    if g.num_vertices() > bounds.oracle_bound {
        return resource(format!(
            "enumeration oracle limited to {} vertices, got {}",
            bounds.oracle_bound,
            g.num_vertices()
        ));
    }
    if g.count_color(Color::Black) != g.count_color(Color::White) {
        return Ok(IntPolynomial::zero());
    }
    let mut total = IntPolynomial::zero();
    for_each_perfect_matching(g, None, |m| {
        let mut term = IntPolynomial::one();
        for &e in m {
            term = term.mul_ref(&labels[e]);
        }
        total.add_assign_ref(&term);
        true
    });
    Ok(total)
}

/// Number of perfect matchings by enumeration, as a big integer.
pub fn enumerate_count(g: &BipartiteGraph, bounds: &Bounds) -> Result<BigInt> {
    if g.num_vertices() > bounds.oracle_bound {
        return resource(format!(
            "enumeration oracle limited to {} vertices, got {}",
            bounds.oracle_bound,
            g.num_vertices()
        ));
    }
    let mut count = BigInt::zero();
    for_each_perfect_matching(g, None, |_| {
        count += 1;
        true
    });
    Ok(count)
}
