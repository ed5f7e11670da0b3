//! The Bernstein-type corollary for bounded adapted processes and a Monte
//! Carlo harness that checks it.
//!
//! For `0 <= Z_j <= B` with `E[Z_j | F_{j-1}] <= m`, `j = 1..N`, and any
//! `lambda >= 2 N m`: `P(sum Z_j >= lambda) <= exp(-3 lambda / (16 B))`.

use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcentrationSpec {
    /// Almost-sure upper bound on each increment.
    pub b: f64,
    /// Bound on every conditional mean.
    pub m: f64,
    /// Number of summands.
    pub n: usize,
    pub lambda: f64,
}

impl ConcentrationSpec {
    pub fn new(b: f64, m: f64, n: usize, lambda: f64) -> Self {
        Self { b, m, n, lambda }
    }

    fn validate_shape(&self) -> Result<()> {
        if !(self.b > 0.0) || !self.b.is_finite() {
            return Err(Error::InvalidArgument(format!("need B > 0, got {}", self.b)));
        }
        if !(self.m >= 0.0) || !self.m.is_finite() {
            return Err(Error::InvalidArgument(format!("need m >= 0, got {}", self.m)));
        }
        Ok(())
    }

    /// `2 N m`, the smallest threshold the corollary covers.
    pub fn lambda_min(&self) -> f64 {
        2.0 * self.n as f64 * self.m
    }
}

/// `exp(-3 lambda / (16 B))`, or [`Error::Inapplicable`] when `lambda < 2 N m`.
pub fn bernstein_corollary_bound(spec: &ConcentrationSpec) -> Result<f64> {
    spec.validate_shape()?;
    if spec.lambda.is_nan() || spec.lambda < spec.lambda_min() {
        return Err(Error::Inapplicable(format!(
            "corollary needs lambda >= 2Nm = {}, got {}",
            spec.lambda_min(),
            spec.lambda
        )));
    }
    Ok((-3.0 * spec.lambda / (16.0 * spec.b)).exp())
}

/// A process that yields one increment at a time together with the
/// conditional mean of that increment given the past.
pub trait AdaptedProcess {
    /// Starts a fresh path.
    fn restart(&mut self);
    /// Next `(Z_j, E[Z_j | F_{j-1}])`.
    fn next_value(&mut self, rng: &mut dyn rand::RngCore) -> (f64, f64);
}

/// Independent Bernoulli(p) increments.
#[derive(Debug, Clone, Copy)]
pub struct IidBernoulli {
    pub p: f64,
}

impl AdaptedProcess for IidBernoulli {
    fn restart(&mut self) {}

    fn next_value(&mut self, rng: &mut dyn rand::RngCore) -> (f64, f64) {
        let z = if rng.gen_bool(self.p) { 1.0 } else { 0.0 };
        (z, self.p)
    }
}

/// Bernoulli increments whose success probability depends on the previous
/// outcome: `after_one` following a 1, `after_zero` otherwise (and first).
#[derive(Debug, Clone, Copy)]
pub struct MarkovBernoulli {
    pub after_zero: f64,
    pub after_one: f64,
    last: bool,
}

impl MarkovBernoulli {
    pub fn new(after_zero: f64, after_one: f64) -> Self {
        Self {
            after_zero,
            after_one,
            last: false,
        }
    }
}

impl AdaptedProcess for MarkovBernoulli {
    fn restart(&mut self) {
        self.last = false;
    }

    fn next_value(&mut self, rng: &mut dyn rand::RngCore) -> (f64, f64) {
        let p = if self.last { self.after_one } else { self.after_zero };
        self.last = rng.gen_bool(p);
        (if self.last { 1.0 } else { 0.0 }, p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub lambda: f64,
    pub empirical: f64,
    pub std_err: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheck {
    pub spec: ConcentrationSpec,
    pub trials: usize,
    pub rows: Vec<TailRow>,
    pub all_ok: bool,
}

/// Grid points between `max(lambda, 2Nm)` and `N B`.
const GRID_POINTS: usize = 21;

/// Samples `trials` paths of `spec.n` increments and compares the empirical
/// tail of the sum with the corollary on a grid of thresholds. A row is ok
/// when `empirical <= bound + 3 SE`.
///
/// Increments outside `[0, B]` and conditional means above `m` are rejected
/// as a broken process, not counted as a bound failure.
pub fn empirical_tail_check(
    process: &mut dyn AdaptedProcess,
    spec: &ConcentrationSpec,
    trials: usize,
    rng: &mut dyn rand::RngCore,
) -> Result<TailCheck> {
    spec.validate_shape()?;
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let lo = spec.lambda.max(spec.lambda_min());
    let hi = (spec.n as f64 * spec.b).max(lo);
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64)
        .collect();

    let tol = 1e-12 * spec.b.max(1.0);
    let mut sums = Vec::with_capacity(trials);
    let mut step = 0usize;
    for _ in 0..trials {
        process.restart();
        let mut s = 0.0;
        for _ in 0..spec.n {
            let (z, mean) = process.next_value(rng);
            if !(z >= -tol && z <= spec.b + tol) {
                return Err(Error::SampleOutOfRange {
                    step,
                    value: z,
                    bound: spec.b,
                });
            }
            if !(mean <= spec.m + tol) {
                return Err(Error::DeclarationViolated {
                    step,
                    observed: mean,
                    declared: spec.m,
                });
            }
            s += z;
            step += 1;
        }
        sums.push(s);
    }
    sums.sort_unstable_by(f64::total_cmp);

    let t = trials as f64;
    let rows: Vec<TailRow> = grid
        .into_iter()
        .map(|lambda| {
            let below = sums.partition_point(|&s| s < lambda);
            let p = (trials - below) as f64 / t;
            let std_err = (p * (1.0 - p) / t).sqrt();
            let bound = (-3.0 * lambda / (16.0 * spec.b)).exp();
            TailRow {
                lambda,
                empirical: p,
                std_err,
                bound,
                ok: p <= bound + 3.0 * std_err,
            }
        })
        .collect();
    let all_ok = rows.iter().all(|r| r.ok);
    Ok(TailCheck {
        spec: *spec,
        trials,
        rows,
        all_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn corollary_values() {
        let b = bernstein_corollary_bound(&ConcentrationSpec::new(1.0, 0.1, 10, 16.0)).unwrap();
        assert!((b - (-3f64).exp()).abs() < 1e-15);
        assert!((b - 0.04979).abs() < 1e-5);
        // boundary is accepted
        assert!(bernstein_corollary_bound(&ConcentrationSpec::new(1.0, 0.1, 10, 2.0)).is_ok());
        assert!(matches!(
            bernstein_corollary_bound(&ConcentrationSpec::new(1.0, 0.1, 10, 1.999)),
            Err(Error::Inapplicable(_))
        ));
        assert!(bernstein_corollary_bound(&ConcentrationSpec::new(0.0, 0.1, 10, 16.0)).is_err());
    }

    proptest! {
        #[test]
        fn monotone(b in 0.1f64..10.0, db in 0.0f64..5.0, lam in 0.0f64..100.0, dl in 0.0f64..50.0) {
            let f = |b: f64, l: f64| bernstein_corollary_bound(&ConcentrationSpec::new(b, 0.0, 10, l)).unwrap();
            prop_assert!(f(b, lam + dl) <= f(b, lam));
            prop_assert!(f(b + db, lam) >= f(b, lam));
        }
    }

    #[test]
    fn zero_process_never_exceeds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = ConcentrationSpec::new(1.0, 0.0, 50, 0.0);
        let out = empirical_tail_check(&mut IidBernoulli { p: 0.0 }, &spec, 1000, &mut rng).unwrap();
        assert!(out.all_ok);
        // lambda = 0 is hit by every path and the bound is exactly 1 there
        assert_eq!(out.rows[0].empirical, 1.0);
        assert!(out.rows[1..].iter().all(|r| r.empirical == 0.0));
    }

    #[test]
    fn rejects_wrong_declaration() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let spec = ConcentrationSpec::new(1.0, 0.1, 100, 0.0);
        let err = empirical_tail_check(&mut IidBernoulli { p: 0.2 }, &spec, 10, &mut rng).unwrap_err();
        assert!(matches!(err, Error::DeclarationViolated { step: 0, .. }), "{err:?}");
    }

    struct TooBig;
    impl AdaptedProcess for TooBig {
        fn restart(&mut self) {}
        fn next_value(&mut self, _: &mut dyn rand::RngCore) -> (f64, f64) {
            (2.0, 0.0)
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = ConcentrationSpec::new(1.0, 0.5, 5, 0.0);
        assert!(matches!(
            empirical_tail_check(&mut TooBig, &spec, 10, &mut rng),
            Err(Error::SampleOutOfRange { .. })
        ));
    }

    #[test]
    fn markov_means_are_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut p = MarkovBernoulli::new(0.05, 0.1);
        let mut ones = 0;
        for _ in 0..1000 {
            let (z, mean) = p.next_value(&mut rng);
            assert!(mean == 0.05 || mean == 0.1);
            ones += z as usize;
        }
        assert!(ones > 0);
    }
}
