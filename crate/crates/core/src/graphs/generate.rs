use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_graph, Graph};
use crate::{Error, Result};

/// Restart cap for the pairing-model generator.
pub const MAX_PAIRING_RESTARTS: usize = 1000;

/// Consecutive rejected pairs before checking whether the partial pairing is stuck.
const STUCK_PROBE: usize = 100;

/// The cycle `C_n`.
pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
    }
    let mut adj = Vec::with_capacity(2 * n);
    for v in 0..n {
        let (a, b) = ((v + n - 1) % n, (v + 1) % n);
        adj.push(a.min(b));
        adj.push(a.max(b));
    }
    Ok(Graph::from_sorted_unchecked(n, 2, adj))
}

/// Circulant graph: `v ~ v ± o (mod n)` for every offset `o`.
///
/// Offsets must be distinct, positive and strictly below `n / 2`, so the
/// degree is exactly `2 * offsets.len()`.
pub fn gen_circulant(n: usize, offsets: &[usize]) -> Result<Graph> {
    if offsets.is_empty() {
        return Err(Error::InvalidArgument("circulant needs at least one offset".into()));
    }
    let mut sorted = offsets.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(format!("repeated circulant offset in {offsets:?}")));
    }
    if sorted[0] == 0 {
        return Err(Error::InvalidArgument("circulant offsets must be positive".into()));
    }
    let max = *sorted.last().unwrap();
    if 2 * max >= n {
        return Err(Error::InvalidArgument(format!(
            "offset {max} collides with its negation mod {n}; need every offset < n/2"
        )));
    }
    let k = 2 * sorted.len();
    let mut adj = Vec::with_capacity(n * k);
    let mut row = Vec::with_capacity(k);
    for v in 0..n {
        row.clear();
        for &o in &sorted {
            row.push((v + o) % n);
            row.push((v + n - o) % n);
        }
        row.sort_unstable();
        adj.extend_from_slice(&row);
    }
    Ok(Graph::from_sorted_unchecked(n, k, adj))
}

/// The complete graph `K_n`.
pub fn gen_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("complete graph needs n >= 2, got {n}")));
    }
    let adj = (0..n)
        .flat_map(|v| (0..n).filter(move |&u| u != v))
        .collect();
    Ok(Graph::from_sorted_unchecked(n, n - 1, adj))
}

/// The Petersen graph (3-regular, girth 5, spectrum {3, 1^5, -2^4}).
pub fn gen_petersen() -> Graph {
    let mut rows = vec![Vec::new(); 10];
    let mut link = |a: usize, b: usize| {
        rows[a].push(b);
        rows[b].push(a);
    };
    for i in 0..5 {
        link(i, (i + 1) % 5);
        link(i, i + 5);
        link(5 + i, 5 + (i + 2) % 5);
    }
    build_graph(rows).expect("petersen construction is valid")
}

/// Random simple k-regular graph from the pairing model.
///
/// Half-edges are paired uniformly at random; a pair that would create a
/// loop or a repeated edge is redrawn, and the whole pairing restarts when
/// no admissible pair is left. Deterministic in `seed`.
pub fn gen_random_regular(n: usize, k: usize, seed: u64) -> Result<Graph> {
    gen_random_regular_with_cap(n, k, seed, MAX_PAIRING_RESTARTS)
}

pub fn gen_random_regular_with_cap(
    n: usize,
    k: usize,
    seed: u64,
    max_restarts: usize,
) -> Result<Graph> {
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("need 0 < k < n, got n={n}, k={k}")));
    }
    if (n * k) % 2 == 1 {
        return Err(Error::InvalidArgument(format!("n*k must be even, got n={n}, k={k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<usize>> = vec![Vec::with_capacity(k); n];
    let mut points: Vec<usize> = Vec::with_capacity(n * k);
    for _attempt in 0..=max_restarts {
        rows.iter_mut().for_each(Vec::clear);
        points.clear();
        points.extend((0..n).flat_map(|v| std::iter::repeat_n(v, k)));
        if pair_points(&mut points, &mut rows, &mut rng) {
            for row in rows.iter_mut() {
                row.sort_unstable();
            }
            let adj = rows.concat();
            return Ok(Graph::from_sorted_unchecked(n, k, adj));
        }
    }
    Err(Error::GenerationFailed {
        n,
        k,
        attempts: max_restarts,
    })
}

fn admissible(rows: &[Vec<usize>], u: usize, v: usize) -> bool {
    u != v && !rows[u].contains(&v)
}

/// Pairs all points; false when the partial pairing can no longer be completed.
fn pair_points(points: &mut Vec<usize>, rows: &mut [Vec<usize>], rng: &mut impl Rng) -> bool {
    let mut failures = 0;
    while !points.is_empty() {
        let r = points.len();
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (points[i], points[j]);
        if admissible(rows, u, v) {
            rows[u].push(v);
            rows[v].push(u);
            let (hi, lo) = (i.max(j), i.min(j));
            points.swap_remove(hi);
            points.swap_remove(lo);
            failures = 0;
            continue;
        }
        failures += 1;
        if failures >= STUCK_PROBE {
            let any = (0..r).any(|a| ((a + 1)..r).any(|b| admissible(rows, points[a], points[b])));
            if !any {
                return false;
            }
            failures = 0;
        }
    }
    true
}
