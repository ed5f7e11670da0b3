//! Exact non-backtracking walk counts and transition matrices.
//!
//! `A^(t)[u][v]` counts non-backtracking walks of length `t` from `u` to `v`
//! (the first step is unrestricted). They satisfy
//!
//! ```text
//! A^(1) = A,  A^(2) = A^2 - k I,  A^(t+1) = A A^(t) - (k-1) A^(t-1)
//! ```
//!
//! and `P^(t) = A^(t) / (k (k-1)^(t-1))` is the t-step transition matrix.
//! Dividing the recurrence through gives the probability-space form
//! `P^(t+1) = (A P^(t) - P^(t-1)) / (k-1)` with `P^(0) = I`, which is used once
//! the integer counts stop fitting in 128 bits.

use super::Graph;
use crate::{Error, Result};

/// Largest vertex count accepted for dense n x n work.
pub const DENSE_LIMIT: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct NbMatrices {
    pub t: usize,
    pub n: usize,
    /// Row-major walk counts; `None` once they overflowed `u128`.
    pub counts: Option<Vec<u128>>,
    /// Row-major transition probabilities.
    pub probs: Vec<f64>,
}

impl NbMatrices {
    pub fn count(&self, u: usize, v: usize) -> Option<u128> {
        self.counts.as_ref().map(|c| c[u * self.n + v])
    }

    pub fn prob(&self, u: usize, v: usize) -> f64 {
        self.probs[u * self.n + v]
    }

    /// True when the probabilities came from the floating-point recurrence.
    pub fn overflowed(&self) -> bool {
        self.counts.is_none()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.probs.chunks_exact(self.n).map(|r| r.iter().sum()).collect()
    }

    /// `max_{u,v} |P^(t)[u][v] - 1/n|`.
    pub fn uniform_deviation(&self) -> f64 {
        let inv = 1.0 / self.n as f64;
        self.probs.iter().map(|p| (p - inv).abs()).fold(0.0, f64::max)
    }
}

/// Successive [`NbMatrices`] for `t = 1, 2, ...`.
pub struct NbSeries<'a> {
    g: &'a Graph,
    t: usize,
    counts: Option<(Vec<u128>, Vec<u128>)>,
    probs: (Vec<f64>, Vec<f64>),
}

impl<'a> NbSeries<'a> {
    pub fn new(g: &'a Graph) -> Result<Self> {
        let n = g.n();
        if n > DENSE_LIMIT {
            return Err(Error::TooLarge { n, limit: DENSE_LIMIT });
        }
        let mut id = vec![0u128; n * n];
        let mut idf = vec![0.0; n * n];
        for v in 0..n {
            id[v * n + v] = 1;
            idf[v * n + v] = 1.0;
        }
        Ok(Self {
            g,
            t: 0,
            counts: Some((Vec::new(), id)),
            probs: (Vec::new(), idf),
        })
    }

    fn next_counts(&self, prev: &[u128], cur: &[u128]) -> Option<Vec<u128>> {
        let (g, n, k) = (self.g, self.g.n(), self.g.k() as u128);
        let mut out = vec![0u128; n * n];
        for u in 0..n {
            let row = &mut out[u * n..(u + 1) * n];
            for &w in g.neighbors(u) {
                for (o, &x) in row.iter_mut().zip(&cur[w * n..(w + 1) * n]) {
                    *o = o.checked_add(x)?;
                }
            }
        }
        let coef = match self.t {
            0 => return Some(out),
            1 => k,
            _ => k - 1,
        };
        for (o, &p) in out.iter_mut().zip(prev) {
            *o = o.checked_sub(p.checked_mul(coef)?)?;
        }
        Some(out)
    }

    fn next_probs(&self) -> Vec<f64> {
        let (g, n) = (self.g, self.g.n());
        let (prev, cur) = &self.probs;
        let mut out = vec![0.0; n * n];
        for u in 0..n {
            let row = &mut out[u * n..(u + 1) * n];
            for &w in g.neighbors(u) {
                for (o, &x) in row.iter_mut().zip(&cur[w * n..(w + 1) * n]) {
                    *o += x;
                }
            }
        }
        if self.t == 0 {
            let k = g.k() as f64;
            out.iter_mut().for_each(|o| *o /= k);
        } else {
            let km1 = (g.k() - 1) as f64;
            for (o, &p) in out.iter_mut().zip(prev) {
                *o = (*o - p) / km1;
            }
        }
        out
    }
}

impl Iterator for NbSeries<'_> {
    type Item = NbMatrices;

    fn next(&mut self) -> Option<NbMatrices> {
        let n = self.g.n();
        let k = self.g.k();
        let next_counts = self
            .counts
            .as_ref()
            .and_then(|(prev, cur)| self.next_counts(prev, cur));
        let probs = match &next_counts {
            Some(c) => {
                // k (k-1)^(t-1) for the new t = self.t + 1
                let denom = k as f64 * ((k - 1) as f64).powi(self.t as i32);
                c.iter().map(|&x| x as f64 / denom).collect()
            }
            None => self.next_probs(),
        };
        self.t += 1;
        self.counts = match (self.counts.take(), &next_counts) {
            (Some((_, cur)), Some(c)) => Some((cur, c.clone())),
            _ => None,
        };
        let cur = std::mem::replace(&mut self.probs.1, probs.clone());
        self.probs.0 = cur;
        Some(NbMatrices {
            t: self.t,
            n,
            counts: next_counts,
            probs,
        })
    }
}

/// `A^(t)` and `P^(t)` for a single `t >= 1`.
pub fn nb_matrices(g: &Graph, t: usize) -> Result<NbMatrices> {
    if t == 0 {
        return Err(Error::InvalidArgument("step count must be >= 1".into()));
    }
    Ok(NbSeries::new(g)?.nth(t - 1).expect("series is infinite"))
}

/// `max_{u,v} |P^(t)[u][v] - 1/n|`.
pub fn uniform_deviation(g: &Graph, t: usize) -> Result<f64> {
    Ok(nb_matrices(g, t)?.uniform_deviation())
}
