//! Layered-induction bound calculators for the three walker schemes and the
//! low-girth variant.
//!
//! Every calculator walks the same shape of recursion: a starting level with
//! `beta = n / (a e)`, a squaring phase `beta_{i+1} = a e n (beta_i / n)^2` until
//! a threshold index `i*`, an explicit `beta_{i*}`, a second squaring phase up
//! to `i**`, and a final Markov level. Natural logarithms throughout.

use std::f64::consts::E;

use serde::Serialize;

use crate::{Error, Result};

/// Levels explored before a recursion is declared non-contracting.
const MAX_LEVELS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureTerm {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Applicability {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryInputs {
    pub n: f64,
    pub c: f64,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
}

/// Evaluated recursion for one scheme. Field names are part of the JSON
/// interface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryReport {
    pub scheme: &'static str,
    pub inputs: TheoryInputs,
    /// Index of `beta_seq[0]`.
    pub beta_start: usize,
    /// `beta_i` for `i = beta_start ..= i** + 1` (or `i* + 2` for scheme 1).
    pub beta_seq: Vec<f64>,
    pub i_star: usize,
    pub i_star_star: Option<usize>,
    /// Right-hand side of the inequality that defines `i*`.
    pub i_star_threshold: f64,
    pub i_star_star_threshold: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<u64>,
    /// `r_i` for the same indices as `beta_seq`.
    pub r_seq: Vec<u64>,
    /// Load level certified with high probability.
    pub final_bound: u64,
    pub failure_terms: Vec<FailureTerm>,
    pub failure_total: f64,
    pub applicability: Vec<Applicability>,
    pub beta_strictly_decreasing: bool,
}

impl TheoryReport {
    pub fn beta(&self, i: usize) -> Option<f64> {
        i.checked_sub(self.beta_start)
            .and_then(|j| self.beta_seq.get(j).copied())
    }

    pub fn r(&self, i: usize) -> Option<u64> {
        i.checked_sub(self.beta_start)
            .and_then(|j| self.r_seq.get(j).copied())
    }

    /// Re-evaluates the inequalities defining `i*` and `i**`: each holds at
    /// its index and fails one index earlier, where that index is defined.
    pub fn indices_minimal(&self) -> bool {
        let n = self.inputs.n;
        let x = |i: usize| self.beta(i).map(|b| (b / n).powi(2));
        let (scheme1, upper_coef) = match self.scheme {
            "1" => (true, 1.0),
            "2" => (false, 1.0),
            "3" => (false, 4.0),
            _ => (false, 6.0),
        };
        if scheme1 {
            let holds = |i: usize| x(i).map(|v| E * n * v < self.i_star_threshold);
            return holds(self.i_star) == Some(true)
                && (self.i_star == self.beta_start || holds(self.i_star - 1) == Some(false));
        }
        let lower = |i: usize| x(i - 1).map(|v| v < self.i_star_threshold);
        let star_ok = lower(self.i_star) == Some(true)
            && (self.i_star - 1 == self.beta_start || lower(self.i_star - 1) == Some(false));
        let (Some(iss), Some(thr)) = (self.i_star_star, self.i_star_star_threshold) else {
            return false;
        };
        let upper = |i: usize| x(i - 1).map(|v| upper_coef * E * n * v <= thr);
        star_ok
            && iss > self.i_star
            && upper(iss) == Some(true)
            && (iss - 1 == self.i_star || upper(iss - 1) == Some(false))
    }

    fn finish(mut self) -> Self {
        self.failure_total = self.failure_terms.iter().map(|t| t.value).sum();
        self.beta_strictly_decreasing = self.beta_seq.windows(2).all(|w| w[1] < w[0]);
        self
    }
}

fn check_common(n: f64, c: f64) -> Result<f64> {
    if !(n >= 3.0) || !n.is_finite() {
        return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!("need c > 0, got {c}")));
    }
    Ok(n.ln())
}

fn check_k_alpha(k: usize, alpha: f64) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!("need k >= 3, got {k}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("need alpha > 0, got {alpha}")));
    }
    Ok(())
}

/// Scheme 1 (reset on intersection or timer).
///
/// `beta_6 = n/(2e)`, `beta_{i+1} = e n (beta_i/n)^2` until the first `i` with
/// `e n (beta_i/n)^2 < 8 c (ln n)^2`; then `beta_{i*+1} = 8c (ln n)^2`,
/// `beta_{i*+2} = 0.8` and the certified level is `i* + 2`.
pub fn theory_bounds_scheme1(n: f64, c: f64) -> Result<TheoryReport> {
    let ln = check_common(n, c)?;
    let start = 6;
    let thr = 8.0 * c * ln * ln;
    let mut beta = vec![n / (2.0 * E)];
    let i_star = loop {
        let i = start + beta.len() - 1;
        let b = *beta.last().unwrap();
        let next = E * n * (b / n).powi(2);
        if next < thr {
            break i;
        }
        if beta.len() > MAX_LEVELS {
            return Err(Error::Inapplicable(format!("scheme-1 recursion does not reach its threshold at n={n}")));
        }
        beta.push(next);
    };
    beta.push(thr);
    beta.push(0.8);
    let r_seq = (start..start + beta.len()).map(|i| i as u64).collect();
    let alpha = 0.5;
    let report = TheoryReport {
        scheme: "1",
        inputs: TheoryInputs { n, c, k: None, alpha: None },
        beta_start: start,
        beta_seq: beta,
        i_star,
        i_star_star: None,
        i_star_threshold: thr,
        i_star_star_threshold: None,
        l: None,
        r_seq,
        final_bound: (i_star + 2) as u64,
        failure_terms: vec![
            FailureTerm {
                name: "per_level_bernstein",
                value: (i_star as f64 - 4.0) * n.powf(-1.5),
            },
            FailureTerm {
                name: "markov_final_level",
                value: 40.0 * E * c * c * ln.powi(4) / n,
            },
            FailureTerm {
                name: "reset_count_tail",
                value: (-n / (340.0 * c * ln)).exp(),
            },
        ],
        failure_total: 0.0,
        applicability: vec![
            Applicability { name: "n_ge_3", holds: n >= 3.0 },
            Applicability { name: "n_ge_exp_10_over_c", holds: n >= (10.0 / c).exp() },
            Applicability {
                name: "n_ge_40c_over_alpha_e_pow_1_over_1_minus_alpha",
                holds: n >= (40.0 * c / (alpha * E)).powf(1.0 / (1.0 - alpha)),
            },
        ],
        beta_strictly_decreasing: false,
    };
    Ok(report.finish())
}

/// Constants of the two-phase recursion used by schemes 2, 3 and the
/// low-girth variant.
struct TwoPhase {
    scheme: &'static str,
    start: usize,
    /// `beta_start = n / (start_div * e)`.
    start_div: f64,
    lower_coef: f64,
    i_star_threshold: f64,
    beta_i_star: f64,
    upper_coef: f64,
    i_star_star_threshold: f64,
}

struct TwoPhaseOut {
    beta: Vec<f64>,
    i_star: usize,
    i_star_star: usize,
}

impl TwoPhase {
    fn run(&self, n: f64) -> Result<TwoPhaseOut> {
        let stall = |phase: &str| {
            Error::Inapplicable(format!(
                "scheme-{} {phase} recursion does not contract at n={n}; the bound is vacuous here",
                self.scheme
            ))
        };
        let mut beta = vec![n / (self.start_div * E)];
        // i* = smallest i > start with (beta_{i-1}/n)^2 < threshold
        let i_star = loop {
            let i = self.start + beta.len();
            let b = *beta.last().unwrap();
            if (b / n).powi(2) < self.i_star_threshold {
                break i;
            }
            let next = self.lower_coef * E * n * (b / n).powi(2);
            if next >= b || beta.len() > MAX_LEVELS {
                return Err(stall("lower"));
            }
            beta.push(next);
        };
        beta.push(self.beta_i_star);
        // i** = smallest i >= i* + 1 with coef e n (beta_{i-1}/n)^2 <= threshold
        let i_star_star = loop {
            let i = self.start + beta.len();
            let b = *beta.last().unwrap();
            let next = self.upper_coef * E * n * (b / n).powi(2);
            if next <= self.i_star_star_threshold {
                break i;
            }
            if next >= b || beta.len() > MAX_LEVELS {
                return Err(stall("upper"));
            }
            beta.push(next);
        };
        beta.push(self.i_star_star_threshold);
        beta.push(0.8);
        Ok(TwoPhaseOut {
            beta,
            i_star,
            i_star_star,
        })
    }
}

/// `r_i = i` up to `i*`, then `i* + (i - i*)(L + 1)`.
fn linear_r(start: usize, len: usize, i_star: usize, l: u64) -> Vec<u64> {
    (start..start + len)
        .map(|i| {
            if i <= i_star {
                i as u64
            } else {
                i_star as u64 + (i - i_star) as u64 * (l + 1)
            }
        })
        .collect()
}

/// Scheme 2 (periodic reset) under the girth assumption with exponent `alpha`.
pub fn theory_bounds_scheme2(n: f64, c: f64, k: usize, alpha: f64) -> Result<TheoryReport> {
    let ln = check_common(n, c)?;
    check_k_alpha(k, alpha)?;
    let gamma = alpha.min(0.5);
    let spec = TwoPhase {
        scheme: "2",
        start: 9,
        start_div: 3.0,
        lower_coef: 2.0,
        i_star_threshold: 2.0 * c * ln / n.powf(gamma),
        beta_i_star: 4.0 * E * c * n.powf(1.0 - gamma) * ln,
        upper_coef: 1.0,
        i_star_star_threshold: 8.0 * c * ln * ln,
    };
    let out = spec.run(n)?;
    let l = (2.0 * (c * ((k - 1) as f64).ln() / (2.0 * alpha) + 1.0)).floor() as u64;
    let r_seq = linear_r(spec.start, out.beta.len(), out.i_star, l);
    let final_bound = out.i_star as u64 + (out.i_star_star - out.i_star + 1) as u64 * (l + 1);
    debug_assert_eq!(*r_seq.last().unwrap(), final_bound);
    let report = TheoryReport {
        scheme: "2",
        inputs: TheoryInputs { n, c, k: Some(k), alpha: Some(alpha) },
        beta_start: spec.start,
        i_star: out.i_star,
        i_star_star: Some(out.i_star_star),
        i_star_threshold: spec.i_star_threshold,
        i_star_star_threshold: Some(spec.i_star_star_threshold),
        l: Some(l),
        r_seq,
        final_bound,
        failure_terms: vec![
            FailureTerm {
                name: "lower_levels",
                value: (out.i_star as f64 - 9.0) * (-n.sqrt()).exp(),
            },
            FailureTerm {
                name: "upper_levels",
                value: (out.i_star_star - out.i_star) as f64 * n.powf(-1.5),
            },
            FailureTerm {
                name: "markov_final_level",
                value: 40.0 * E * c * c * ln.powi(4) / n,
            },
        ],
        failure_total: 0.0,
        applicability: vec![Applicability {
            name: "i_star_above_start",
            holds: out.i_star > spec.start,
        }],
        beta_seq: out.beta,
        beta_strictly_decreasing: false,
    };
    Ok(report.finish())
}

/// Scheme 3 (no reset) on a high-girth expander with girth exponent `alpha`.
pub fn theory_bounds_scheme3(n: f64, c: f64, k: usize, alpha: f64) -> Result<TheoryReport> {
    let ln = check_common(n, c)?;
    check_k_alpha(k, alpha)?;
    let gamma = alpha.min(0.5);
    let spec = TwoPhase {
        scheme: "3",
        start: 18,
        start_div: 6.0,
        lower_coef: 5.0,
        i_star_threshold: 9.0 * c * ln / n.powf(gamma),
        beta_i_star: 45.0 * E * c * n.powf(1.0 - gamma) * ln,
        upper_coef: 4.0,
        i_star_star_threshold: 16.0 * c * ln * ln,
    };
    let out = spec.run(n)?;
    let l = (2.0 * (c / alpha * ((k - 1) as f64).ln() + 1.0)).floor() as u64;
    let r_seq = linear_r(spec.start, out.beta.len(), out.i_star, l);
    let final_bound = out.i_star as u64 + (out.i_star_star - out.i_star + 1) as u64 * (l + 1);
    debug_assert_eq!(*r_seq.last().unwrap(), final_bound);
    let report = TheoryReport {
        scheme: "3",
        inputs: TheoryInputs { n, c, k: Some(k), alpha: Some(alpha) },
        beta_start: spec.start,
        i_star: out.i_star,
        i_star_star: Some(out.i_star_star),
        i_star_threshold: spec.i_star_threshold,
        i_star_star_threshold: Some(spec.i_star_star_threshold),
        l: Some(l),
        r_seq,
        final_bound,
        failure_terms: vec![
            FailureTerm {
                name: "lower_levels",
                value: (out.i_star as f64 - 18.0) * 2.0 * (-10.0 * n.sqrt()).exp(),
            },
            FailureTerm {
                name: "upper_levels",
                value: (out.i_star_star - out.i_star) as f64 * 2.0 * n.powf(-1.5),
            },
            FailureTerm {
                name: "markov_final_level",
                value: 160.0 * E * c * c * ln.powi(4) / n,
            },
        ],
        failure_total: 0.0,
        applicability: vec![Applicability {
            name: "i_star_above_start",
            holds: out.i_star > spec.start,
        }],
        beta_seq: out.beta,
        beta_strictly_decreasing: false,
    };
    Ok(report.finish())
}

/// `r_{i**+1}` in the closed form stated alongside the low-girth theorem,
/// kept for comparison with the summed sequence.
pub fn lowgirth_published_closed_form(i_star: usize, i_star_star: usize, l: u64) -> u64 {
    i_star_star as u64 + (1u64 << (i_star_star - i_star + 1)) + l - 2
}

/// Scheme 3 when the girth is only `2 ceil(alpha ln n / ln ln n) + 1`.
///
/// `r_i` grows by `2^{i-i*} + 1` between `i*` and `i**` and by `L + 1` after;
/// `final_bound` is `r_{i**+1}` summed from those increments.
pub fn theory_bounds_lowgirth(n: f64, c: f64, k: usize, alpha: f64) -> Result<TheoryReport> {
    let ln = check_common(n, c)?;
    check_k_alpha(k, alpha)?;
    let lnln = ln.ln();
    if !(lnln > 0.0) {
        return Err(Error::InvalidArgument(format!("need ln ln n > 0, got n={n}")));
    }
    let decay = n.powf(-alpha / (2.0 * lnln));
    let spec = TwoPhase {
        scheme: "lowgirth",
        start: 18,
        start_div: 6.0,
        lower_coef: 5.0,
        i_star_threshold: 9.0 * c * ln * decay,
        beta_i_star: 45.0 * E * c * ln * n * decay,
        upper_coef: 6.0,
        i_star_star_threshold: 16.0 * c * ln * ln,
    };
    let out = spec.run(n)?;
    let l = (2.0 * (c / alpha * ((k - 1) as f64).ln() * lnln + 1.0)).floor() as u64;
    let mut r_seq = Vec::with_capacity(out.beta.len());
    for i in spec.start..spec.start + out.beta.len() {
        let r = if i <= out.i_star {
            i as u64
        } else if i <= out.i_star_star {
            r_seq.last().unwrap() + (1u64 << (i - out.i_star)) + 1
        } else {
            r_seq.last().unwrap() + l + 1
        };
        r_seq.push(r);
    }
    let final_bound = *r_seq.last().unwrap();
    let report = TheoryReport {
        scheme: "lowgirth",
        inputs: TheoryInputs { n, c, k: Some(k), alpha: Some(alpha) },
        beta_start: spec.start,
        i_star: out.i_star,
        i_star_star: Some(out.i_star_star),
        i_star_threshold: spec.i_star_threshold,
        i_star_star_threshold: Some(spec.i_star_star_threshold),
        l: Some(l),
        r_seq,
        final_bound,
        failure_terms: vec![
            FailureTerm {
                name: "lower_levels",
                value: (out.i_star as f64 - 18.0)
                    * 2.0
                    * (-(135.0 * E / 32.0) * n.powf(1.0 - alpha / (2.0 * lnln))).exp(),
            },
            FailureTerm {
                name: "upper_levels",
                value: (out.i_star_star - out.i_star) as f64 * 2.0 * n.powf(-1.5),
            },
            FailureTerm {
                name: "markov_final_level",
                value: 160.0 * E * c * c * ln.powi(4) / n,
            },
        ],
        failure_total: 0.0,
        applicability: vec![
            Applicability {
                name: "i_star_above_start",
                holds: out.i_star > spec.start,
            },
            Applicability {
                name: "ln_ln_n_ge_alpha",
                holds: lnln >= alpha,
            },
        ],
        beta_seq: out.beta,
        beta_strictly_decreasing: false,
    };
    Ok(report.finish())
}
