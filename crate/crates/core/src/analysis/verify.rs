//! Estimators and exact verifiers for the graph assumptions behind the
//! walker schemes.

use rand::RngCore;
use serde::Serialize;

use crate::graphs::{girth, girth_threshold, Graph, NbMatrices, NbSeries, DENSE_LIMIT};
use crate::nbwalk::{spawn_uniform, step_scheme1, IntersectionRule, ResetCause, RngStream};
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at normal quantile
/// `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let nt = trials as f64;
    let p = successes as f64 / nt;
    let z2 = z * z;
    let denom = 1.0 + z2 / nt;
    let centre = (p + z2 / (2.0 * nt)) / denom;
    let half = z * (p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Time and cause of the first reset of two scheme-1 walkers started on
/// uniform directed edges. The timer guarantees a result by step `rho`.
pub fn first_reset_time(
    g: &Graph,
    rho: usize,
    rule: IntersectionRule,
    rng: &mut dyn RngCore,
) -> Result<(usize, ResetCause)> {
    if rho == 0 {
        return Err(Error::InvalidArgument("reset period must be >= 1".into()));
    }
    let mut src = RngStream(rng);
    let mut ens = spawn_uniform(g, 2, &mut src)?;
    loop {
        if step_scheme1(g, &mut ens, &mut src, rho, rule) {
            let r = ens.resets();
            let cause = if r.intersection > 0 {
                ResetCause::Intersection
            } else {
                ResetCause::Timer
            };
            return Ok((ens.time(), cause));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assumption1Estimate {
    pub rho: usize,
    pub trials: u64,
    /// Trials whose first reset was an intersection before step `rho`.
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// `ci_high <= 0.1`.
    pub pass: bool,
}

/// Monte Carlo estimate of `P(T_1 < rho)`, where `T_1` is the first reset
/// time of scheme 1 with two walkers, with a Wilson 95% interval.
pub fn estimate_assumption1(
    g: &Graph,
    rho: usize,
    trials: u64,
    rng: &mut dyn RngCore,
    rule: IntersectionRule,
) -> Result<Assumption1Estimate> {
    if trials < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 trials, got {trials}")));
    }
    let mut hits = 0;
    for _ in 0..trials {
        let (t, _) = first_reset_time(g, rho, rule, rng)?;
        if t < rho {
            hits += 1;
        }
    }
    let (ci_low, ci_high) = wilson_interval(hits, trials, Z95);
    Ok(Assumption1Estimate {
        rho,
        trials,
        hits,
        p_hat: hits as f64 / trials as f64,
        ci_low,
        ci_high,
        pass: ci_high <= 0.1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnGap {
    pub gap: usize,
    /// `max_e P(V(t+gap) = V(t) | (V(t-1), V(t)) = e)`, exact.
    pub conditioned_max: f64,
    /// `(k/(k-1)) max_v P^(gap)[v][v]`, the matrix bound on the above.
    pub matrix_bound: f64,
    /// `diag A^(gap) == 0`.
    pub diag_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReturnStatus {
    Pass,
    Fail,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnVerdict {
    pub status: ReturnStatus,
    pub alpha: f64,
    pub girth: Option<usize>,
    pub threshold: Option<usize>,
    /// `n^-alpha`.
    pub bound: f64,
    pub gaps: Vec<ReturnGap>,
    pub reason: Option<String>,
}

/// Successor table of the non-backtracking walk on directed edges, indexed
/// `tail * k + slot`.
fn edge_successors(g: &Graph) -> Vec<usize> {
    let k = g.k();
    let mut out = Vec::with_capacity(g.num_directed_edges() * (k - 1));
    for tail in 0..g.n() {
        for &head in g.neighbors(tail) {
            for (slot, &w) in g.neighbors(head).iter().enumerate() {
                if w != tail {
                    out.push(head * k + slot);
                }
            }
        }
    }
    out
}

/// Exact check of `P(V(s) = V(t) | V(t), V(t-1)) <= n^-alpha` for every gap
/// `s - t` in `1..=horizon` and every conditioning edge. Graphs that miss
/// the girth threshold `2 ceil(alpha log_{k-1} n) + 1` get an inapplicable
/// verdict. The default horizon is `max(2 * threshold, 20)`.
pub fn return_prob_check(g: &Graph, alpha: f64, horizon: Option<usize>) -> Result<ReturnVerdict> {
    let n = g.n();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge { n, limit: DENSE_LIMIT });
    }
    let bound = (n as f64).powf(-alpha);
    let gi = girth(g);
    let inapplicable = |threshold: Option<usize>, reason: String| ReturnVerdict {
        status: ReturnStatus::Inapplicable,
        alpha,
        girth: gi,
        threshold,
        bound,
        gaps: Vec::new(),
        reason: Some(reason),
    };
    let threshold = match girth_threshold(n, g.k(), alpha) {
        Ok(t) => t,
        Err(Error::Inapplicable(msg)) => return Ok(inapplicable(None, msg)),
        Err(e) => return Err(e),
    };
    if !gi.is_some_and(|x| x >= threshold) {
        let shown = gi.map_or("infinite".to_string(), |x| x.to_string());
        return Ok(inapplicable(
            Some(threshold),
            format!("girth {shown} below threshold {threshold}"),
        ));
    }
    let horizon = horizon.unwrap_or((2 * threshold).max(20));

    let k = g.k();
    let m = g.num_directed_edges();
    let succ = edge_successors(g);
    let step = 1.0 / (k - 1) as f64;
    // into[v * k + s] = index of the edge (N(v)[s], v)
    let into: Vec<usize> = (0..n)
        .flat_map(|v| {
            g.neighbors(v)
                .iter()
                .map(move |&w| w * k + g.neighbors(w).binary_search(&v).unwrap())
        })
        .collect();
    // cond[u-1] = max over start edges of the return probability at gap u
    let mut cond = vec![0.0f64; horizon];
    let mut cur = vec![0.0; m];
    let mut next = vec![0.0; m];
    for start in 0..m {
        let target = g.directed_edge(start).head;
        cur.iter_mut().for_each(|x| *x = 0.0);
        cur[start] = 1.0;
        for slot in cond.iter_mut() {
            next.iter_mut().for_each(|x| *x = 0.0);
            for (e, &p) in cur.iter().enumerate() {
                if p != 0.0 {
                    for &f in &succ[e * (k - 1)..(e + 1) * (k - 1)] {
                        next[f] += p * step;
                    }
                }
            }
            std::mem::swap(&mut cur, &mut next);
            let back: f64 = into[target * k..(target + 1) * k].iter().map(|&e| cur[e]).sum();
            *slot = slot.max(back);
        }
    }

    let gaps: Vec<ReturnGap> = NbSeries::new(g)?
        .take(horizon)
        .zip(cond)
        .map(|(mat, conditioned_max): (NbMatrices, f64)| {
            let diag = (0..n).map(|v| mat.prob(v, v)).fold(0.0, f64::max);
            let diag_zero = match &mat.counts {
                Some(_) => (0..n).all(|v| mat.count(v, v) == Some(0)),
                None => diag == 0.0,
            };
            ReturnGap {
                gap: mat.t,
                conditioned_max,
                matrix_bound: k as f64 / (k - 1) as f64 * diag,
                diag_zero,
            }
        })
        .collect();
    let pass = gaps.iter().all(|r| r.conditioned_max <= bound);
    Ok(ReturnVerdict {
        status: if pass { ReturnStatus::Pass } else { ReturnStatus::Fail },
        alpha,
        girth: gi,
        threshold: Some(threshold),
        bound,
        gaps,
        reason: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingCertificate {
    /// `(1 - 2/k) / n`; a deviation at or below it lifts to the `2/n` kernel
    /// bound after the `k/(k-1)` conditioning factor.
    pub threshold: f64,
    pub certified_t: Option<usize>,
    pub certified_deviation: Option<f64>,
    /// `uniform_deviation(g, t)` for `t = 1..=t_max`.
    pub curve: Vec<f64>,
}

/// Whether `max |P^(t) - 1/n| <= (1 - 2/k)/n`, decided in integers while the
/// walk counts are exact: `|n k A - k D| <= (k - 2) D` with
/// `D = k (k-1)^(t-1)`.
fn within_threshold(m: &NbMatrices, k: usize, threshold: f64) -> bool {
    let exact = m.counts.as_ref().and_then(|counts| {
        let (k, n) = (k as u128, m.n as u128);
        let d = (k - 1).checked_pow(u32::try_from(m.t - 1).ok()?)?.checked_mul(k)?;
        let kd = k.checked_mul(d)?;
        let slack = (k - 2).checked_mul(d)?;
        let nk = n.checked_mul(k)?;
        let mut ok = true;
        for &a in counts {
            let x = nk.checked_mul(a)?;
            ok &= x.abs_diff(kd) <= slack;
        }
        Some(ok)
    });
    exact.unwrap_or_else(|| m.uniform_deviation() <= threshold)
}

/// Scans `t = 1..=t_max` for the first step count whose transition matrix
/// is within `(1 - 2/k)/n` of uniform in every entry.
pub fn mixing_certificate(g: &Graph, t_max: usize) -> Result<MixingCertificate> {
    let k = g.k();
    let n = g.n();
    let threshold = (1.0 - 2.0 / k as f64) / n as f64;
    let mut curve = Vec::with_capacity(t_max);
    let mut certified = None;
    for m in NbSeries::new(g)?.take(t_max) {
        let dev = m.uniform_deviation();
        curve.push(dev);
        if certified.is_none() && within_threshold(&m, k, threshold) {
            certified = Some((m.t, dev));
        }
    }
    Ok(MixingCertificate {
        threshold,
        certified_t: certified.map(|c| c.0),
        certified_deviation: certified.map(|c| c.1),
        curve,
    })
}
