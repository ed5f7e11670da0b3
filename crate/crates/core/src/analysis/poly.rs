//! Spectral description of the non-backtracking transition matrices.
//!
//! Every eigenvalue `lambda_i` of `A` gives the eigenvalue
//! `mu_i(t) = q_t(lambda_i / (2 sqrt(k-1))) / sqrt(k (k-1)^(t-1))` of `P^(t)`,
//! where `q_t` is a shifted Chebyshev polynomial of the second kind:
//!
//! ```text
//! q_1(x) = 2x sqrt((k-1)/k)
//! q_2(x) = sqrt((k-1)/k) (4x^2 - 1) - 1/sqrt(k(k-1))
//! q_{t+1}(x) = 2x q_t(x) - q_{t-1}(x)
//! ```

use nalgebra::{DMatrix, SymmetricEigen};

use crate::graphs::{adjacency_lambda, Graph, NbSeries, DEFAULT_LAMBDA_TOL};
use crate::{Error, Result};

/// `1` for `x <= 1`, else `x + sqrt(x^2 - 1)`.
pub fn psi(x: f64) -> f64 {
    if x <= 1.0 {
        1.0
    } else {
        x + (x * x - 1.0).sqrt()
    }
}

fn check_k_t(k: usize, t: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("need k >= 3, got {k}")));
    }
    if t == 0 {
        return Err(Error::InvalidArgument("need t >= 1".into()));
    }
    Ok(())
}

/// `q_t(x)` by the three-term recurrence from the two explicit bases.
pub fn qt_eval(k: usize, t: usize, x: f64) -> Result<f64> {
    check_k_t(k, t)?;
    let kf = k as f64;
    let a = ((kf - 1.0) / kf).sqrt();
    let q1 = 2.0 * x * a;
    if t == 1 {
        return Ok(q1);
    }
    let mut prev = q1;
    let mut cur = a * (4.0 * x * x - 1.0) - 1.0 / (kf * (kf - 1.0)).sqrt();
    for _ in 2..t {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Eigenvalue of `P^(t)` belonging to the adjacency eigenvalue `lambda_i`.
pub fn mu_eigen(k: usize, t: usize, lambda_i: f64) -> Result<f64> {
    check_k_t(k, t)?;
    let km1 = (k - 1) as f64;
    let q = qt_eval(k, t, lambda_i / (2.0 * km1.sqrt()))?;
    Ok(q / (k as f64 * km1.powi(t as i32 - 1)).sqrt())
}

/// Upper bound on `max_{i>=2} |mu_i(t)|` for a graph whose nontrivial
/// adjacency eigenvalues are at most `lambda_tilde` in absolute value:
///
/// `((k-1)/k)(t+1) beta^t + (1/(k(k-1)))(t-1) beta^(t-2)`,
/// `beta = psi(lambda_tilde / (2 sqrt(k-1))) / sqrt(k-1)`.
pub fn mu_analytic(k: usize, lambda_tilde: f64, t: usize) -> Result<f64> {
    check_k_t(k, t)?;
    if !(lambda_tilde >= 0.0) || !lambda_tilde.is_finite() {
        return Err(Error::InvalidArgument(format!("need lambda_tilde >= 0, got {lambda_tilde}")));
    }
    let kf = k as f64;
    let km1 = kf - 1.0;
    let beta = psi(lambda_tilde / (2.0 * km1.sqrt())) / km1.sqrt();
    let tf = t as f64;
    let lead = (km1 / kf) * (tf + 1.0) * beta.powi(t as i32);
    // the second term vanishes at t = 1, where beta^(t-2) would be 1/beta
    let tail = if t == 1 {
        0.0
    } else {
        (tf - 1.0) * beta.powi(t as i32 - 2) / (kf * km1)
    };
    Ok(lead + tail)
}

/// Measured adjacency `lambda` plus `1e-6`.
pub fn default_lambda_tilde(g: &Graph) -> f64 {
    adjacency_lambda(g, DEFAULT_LAMBDA_TOL).lambda + 1e-6
}

fn spectral_norm_centered(n: usize, probs: &[f64]) -> f64 {
    let inv = 1.0 / n as f64;
    let m = DMatrix::from_fn(n, n, |i, j| probs[i * n + j] - inv);
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &x| a.max(x.abs()))
}

/// `mu(t) = ||P^(t) - J/n||_2` for `t = 1..=t_max`, by dense
/// eigendecomposition.
pub fn exact_mu_series(g: &Graph, t_max: usize) -> Result<Vec<f64>> {
    Ok(NbSeries::new(g)?
        .take(t_max)
        .map(|m| spectral_norm_centered(m.n, &m.probs))
        .collect())
}

pub fn exact_mu(g: &Graph, t: usize) -> Result<f64> {
    if t == 0 {
        return Err(Error::InvalidArgument("need t >= 1".into()));
    }
    Ok(*exact_mu_series(g, t)?.last().unwrap())
}
