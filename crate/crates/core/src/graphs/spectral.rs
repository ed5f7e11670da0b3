use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Graph;

pub const DEFAULT_LAMBDA_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 100_000;
const START_SEED: u64 = 0x5eed_1a3b_da00_0001;

/// Estimate of `max(lambda_2, |lambda_n|)` for the adjacency matrix.
///
/// The top eigenvalue is exactly `k` with the all-ones eigenvector, so it is
/// deflated rather than estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaEstimate {
    pub lambda: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit; `lambda` is then the last iterate.
    pub converged: bool,
}

fn apply(g: &Graph, x: &[f64], out: &mut [f64]) {
    for (v, o) in out.iter_mut().enumerate() {
        *o = g.neighbors(v).iter().map(|&u| x[u]).sum();
    }
}

fn deflate_and_normalize(x: &mut [f64]) -> f64 {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Largest adjacency eigenvalue magnitude on the complement of the all-ones
/// vector, by power iteration on `A^2` kept orthogonal to the all-ones vector.
///
/// Iterating `A^2` instead of `A` keeps bipartite graphs (where `lambda` and
/// `-lambda` tie) from oscillating. The estimate `|A v|` approaches `lambda`
/// from below. Assumes a connected graph; a disconnected one reports `k`.
pub fn adjacency_lambda(g: &Graph, tol: f64) -> LambdaEstimate {
    let n = g.n();
    if n < 2 {
        return LambdaEstimate {
            lambda: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate_and_normalize(&mut v);
    let mut av = vec![0.0; n];
    let mut prev = f64::NAN;
    for it in 1..=MAX_ITERATIONS {
        apply(g, &v, &mut av);
        let est = av.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (est - prev).abs() < tol {
            return LambdaEstimate {
                lambda: est,
                iterations: it,
                converged: true,
            };
        }
        prev = est;
        apply(g, &av, &mut v);
        if deflate_and_normalize(&mut v) == 0.0 {
            // v landed in the kernel of A^2 restricted to 1-perp: lambda is 0.
            return LambdaEstimate {
                lambda: 0.0,
                iterations: it,
                converged: true,
            };
        }
    }
    LambdaEstimate {
        lambda: prev,
        iterations: MAX_ITERATIONS,
        converged: false,
    }
}
