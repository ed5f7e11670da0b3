//! k-regular simple graphs with ranked neighbor lists.
//!
//! Neighbor lists are kept strictly ascending; the position of a vertex in
//! its neighbor's row is its rank, which is what the walker transition map
//! uses to turn a uniform rank into a concrete next vertex.

mod generate;
mod girth;
mod nb;
mod spectral;

use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

pub use generate::{
    gen_circulant, gen_complete, gen_cycle, gen_petersen, gen_random_regular,
    gen_random_regular_with_cap, MAX_PAIRING_RESTARTS,
};
pub use girth::{check_girth_assumption, girth, girth_threshold, GirthCheck};
pub use nb::{nb_matrices, uniform_deviation, NbMatrices, NbSeries, DENSE_LIMIT};
pub use spectral::{adjacency_lambda, LambdaEstimate, DEFAULT_LAMBDA_TOL};

/// A simple k-regular graph stored as a flat `n * k` adjacency table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    k: usize,
    adj: Vec<usize>,
}

/// A directed edge `tail -> head`; the walker state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub tail: usize,
    pub head: usize,
}

impl DirectedEdge {
    pub fn new(tail: usize, head: usize) -> Self {
        Self { tail, head }
    }
}

/// Validates neighbor rows and builds a [`Graph`] with ascending rows.
///
/// Rejects ragged, non-symmetric, self-looped, out-of-range or duplicated
/// input, naming the first offending vertex.
pub fn build_graph(rows: Vec<Vec<usize>>) -> Result<Graph> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("graph has no vertices".into()));
    }
    let n = rows.len();
    let k = rows[0].len();
    if k == 0 {
        return Err(Error::InvalidGraph {
            vertex: 0,
            reason: "vertex has no neighbors".into(),
        });
    }
    let mut adj = Vec::with_capacity(n * k);
    for (v, row) in rows.into_iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidGraph {
                vertex: v,
                reason: format!("degree {} differs from k={}", row.len(), k),
            });
        }
        let mut row = row;
        row.sort_unstable();
        for (i, &u) in row.iter().enumerate() {
            if u >= n {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    reason: format!("neighbor {u} out of range [0, {n})"),
                });
            }
            if u == v {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    reason: "self-loop".into(),
                });
            }
            if i > 0 && row[i - 1] == u {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    reason: format!("duplicate neighbor {u}"),
                });
            }
        }
        adj.extend_from_slice(&row);
    }
    let g = Graph { n, k, adj };
    for v in 0..n {
        for &u in g.neighbors(v) {
            if !g.has_edge(u, v) {
                return Err(Error::InvalidGraph {
                    vertex: v,
                    reason: format!("neighbor {u} does not list {v} back"),
                });
            }
        }
    }
    Ok(g)
}

impl Graph {
    /// Builds from a flat table that is already known to satisfy every
    /// invariant. Only generators in this module use it.
    pub(crate) fn from_sorted_unchecked(n: usize, k: usize, adj: Vec<usize>) -> Self {
        debug_assert_eq!(adj.len(), n * k);
        Self { n, k, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Ascending neighbor row of `v`; index in the row is the neighbor rank.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v * self.k..(v + 1) * self.k]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.adj.chunks_exact(self.k)
    }

    pub fn num_directed_edges(&self) -> usize {
        self.n * self.k
    }

    /// Directed edge number `index` in `[0, n*k)`, ordered by tail then rank.
    #[inline]
    pub fn directed_edge(&self, index: usize) -> DirectedEdge {
        DirectedEdge {
            tail: index / self.k,
            head: self.adj[index],
        }
    }

    /// Inverse of [`Graph::directed_edge`].
    pub fn directed_edge_index(&self, e: DirectedEdge) -> Option<usize> {
        let slot = self.neighbors(e.tail).binary_search(&e.head).ok()?;
        Some(e.tail * self.k + slot)
    }

    pub fn is_edge(&self, e: DirectedEdge) -> bool {
        e.tail < self.n && e.head < self.n && self.has_edge(e.tail, e.head)
    }

    /// Serializes to the text format: a `n k` header then one ascending row
    /// per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.adj.len() * 7 + 16);
        let _ = writeln!(out, "{} {}", self.n, self.k);
        for row in self.rows() {
            for (i, u) in row.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{u}");
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Rows must already be strictly ascending,
    /// since file order is the neighbor ranking.
    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let header: Vec<&str> = header.split_whitespace().collect();
        if header.len() != 2 {
            return Err(Error::Parse {
                line: 1,
                msg: "expected header `n k`".into(),
            });
        }
        let parse = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line,
                msg: format!("bad integer `{s}`: {e}"),
            })
        };
        let n = parse(header[0], 1)?;
        let k = parse(header[1], 1)?;
        let mut rows = Vec::with_capacity(n);
        for (idx, line) in lines.by_ref().take(n) {
            let row = line
                .split_whitespace()
                .map(|s| parse(s, idx + 1))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != k {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("expected {k} neighbors, found {}", row.len()),
                });
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "neighbor ids must be strictly ascending".into(),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse {
                line: rows.len() + 2,
                msg: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        if let Some((idx, line)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("trailing content `{line}`"),
            });
        }
        build_graph(rows)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Graph> {
        Graph::parse_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = build_graph(vec![vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        assert_eq!((g.n(), g.k()), (3, 2));
    }

    #[test]
    fn rows_are_sorted() {
        let g = build_graph(vec![vec![2, 1], vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2]);
        assert_eq!(g.neighbors(2), &[0, 1]);
    }

    #[test]
    fn rejects_asymmetric() {
        let err = build_graph(vec![vec![1], vec![0], vec![0]]).unwrap_err();
        assert!(matches!(err, Error::InvalidGraph { vertex: 2, .. }), "{err}");
    }

    #[test]
    fn rejects_duplicate() {
        let err = build_graph(vec![vec![1, 2], vec![0, 2], vec![0, 0]]).unwrap_err();
        match err {
            Error::InvalidGraph { vertex, reason } => {
                assert_eq!(vertex, 2);
                assert!(reason.contains("duplicate"));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn rejects_ragged_and_loops() {
        assert!(matches!(
            build_graph(vec![vec![1, 2], vec![0], vec![0, 1]]),
            Err(Error::InvalidGraph { vertex: 1, .. })
        ));
        assert!(matches!(
            build_graph(vec![vec![0, 1], vec![0, 2], vec![0, 1]]),
            Err(Error::InvalidGraph { vertex: 0, .. })
        ));
        assert!(matches!(
            build_graph(vec![vec![1, 5], vec![0, 2], vec![0, 1]]),
            Err(Error::InvalidGraph { vertex: 0, .. })
        ));
    }

    #[test]
    fn directed_edge_indexing() {
        let g = gen_complete(4).unwrap();
        for i in 0..g.num_directed_edges() {
            let e = g.directed_edge(i);
            assert!(g.is_edge(e));
            assert_eq!(g.directed_edge_index(e), Some(i));
        }
    }

    #[test]
    fn text_round_trip() {
        let g = gen_petersen();
        let text = g.to_text();
        let back = Graph::parse_text(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_text(), text);
        assert!(text.starts_with("10 3\n"));
    }

    #[test]
    fn text_rejects_unsorted_rows() {
        let err = Graph::parse_text("3 2\n2 1\n0 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(Graph::parse_text("3 2\n1 2\n0 2\n").is_err());
        assert!(Graph::parse_text("3 2\n1 2\n0 2\n0 1\n5\n").is_err());
    }
}
