use std::collections::VecDeque;

use serde::Serialize;

use super::Graph;
use crate::{Error, Result};

/// Exact girth by breadth-first search from every vertex.
///
/// Each search stops once its frontier is too deep to close a cycle shorter
/// than the best found so far. `None` means the graph is acyclic, which
/// cannot happen for k >= 2.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut stamp = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        queue.clear();
        stamp[s] = s;
        dist[s] = 0;
        parent[s] = usize::MAX;
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if w == parent[u] {
                    continue;
                }
                if stamp[w] == s {
                    best = best.min(dist[u] + dist[w] + 1);
                    if 2 * dist[u] + 1 >= best {
                        break 'bfs;
                    }
                } else {
                    stamp[w] = s;
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

/// Outcome of testing `girth >= 2*ceil(alpha * log_{k-1} n) + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GirthCheck {
    pub holds: bool,
    pub threshold: usize,
    pub girth: Option<usize>,
}

/// `ceil` that treats values within 1e-9 of an integer as that integer, so
/// `log_2 4` is 2 and not 3.
pub(crate) fn ceil_tol(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x.ceil()
    }
}

/// `2 * ceil(alpha * log_{k-1} n) + 1`.
pub fn girth_threshold(n: usize, k: usize, alpha: f64) -> Result<usize> {
    if k < 3 {
        return Err(Error::Inapplicable(format!(
            "girth assumption needs k >= 3 (log base k-1), got k={k}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let h = ceil_tol(alpha * (n as f64).ln() / ((k - 1) as f64).ln());
    Ok(2 * h as usize + 1)
}

pub fn check_girth_assumption(g: &Graph, alpha: f64) -> Result<GirthCheck> {
    let threshold = girth_threshold(g.n(), g.k(), alpha)?;
    let girth = girth(g);
    Ok(GirthCheck {
        holds: girth.is_some_and(|x| x >= threshold),
        threshold,
        girth,
    })
}
