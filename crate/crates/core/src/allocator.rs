//! Balls-into-bins engine driven by the walker schemes or a baseline sampler.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graphs::Graph;
use crate::nbwalk::{
    floor_tol, rho_from_c, spawn_uniform, step_scheme1, step_scheme2, step_scheme3, trace_line,
    IntersectionRule, ResetCause, ResetCounts, RngStream, WalkerEnsemble,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SchemeKind {
    /// Walkers reset on path intersection or after `rho` steps.
    #[serde(rename = "rw-intersect-reset")]
    RwIntersectReset,
    /// Walkers reset every `rho` steps.
    #[serde(rename = "rw-periodic-reset")]
    RwPeriodicReset,
    /// Walkers never reset.
    #[serde(rename = "rw-no-reset")]
    RwNoReset,
    /// d bins drawn independently and uniformly with replacement.
    #[serde(rename = "indep-uniform")]
    IndepUniform,
    /// Every ball goes where a single non-backtracking walker stands.
    #[serde(rename = "single-walk")]
    SingleWalk,
    /// One uniform bin per ball.
    #[serde(rename = "one-choice")]
    OneChoice,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::RwIntersectReset,
        SchemeKind::RwPeriodicReset,
        SchemeKind::RwNoReset,
        SchemeKind::IndepUniform,
        SchemeKind::SingleWalk,
        SchemeKind::OneChoice,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::RwIntersectReset => "rw-intersect-reset",
            SchemeKind::RwPeriodicReset => "rw-periodic-reset",
            SchemeKind::RwNoReset => "rw-no-reset",
            SchemeKind::IndepUniform => "indep-uniform",
            SchemeKind::SingleWalk => "single-walk",
            SchemeKind::OneChoice => "one-choice",
        }
    }

    pub fn uses_walkers(self) -> bool {
        matches!(
            self,
            SchemeKind::RwIntersectReset
                | SchemeKind::RwPeriodicReset
                | SchemeKind::RwNoReset
                | SchemeKind::SingleWalk
        )
    }

    fn single_choice(self) -> bool {
        matches!(self, SchemeKind::SingleWalk | SchemeKind::OneChoice)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme `{s}`")))
    }
}

/// How the reset period `rho` is chosen for a graph on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResetPeriod {
    /// `floor(c ln n)`.
    Log { c: f64 },
    /// A fixed `rho`.
    Fixed(usize),
    /// `floor(n^p)`.
    Power(f64),
}

impl ResetPeriod {
    pub fn rho(&self, n: usize) -> usize {
        match *self {
            ResetPeriod::Log { c } => rho_from_c(n, c),
            ResetPeriod::Fixed(r) => r,
            ResetPeriod::Power(p) => floor_tol((n as f64).powf(p)) as usize,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Among least-loaded candidates, the smallest bin id.
    #[default]
    LowestId,
    /// Among least-loaded candidates, the first in walker order.
    FirstCandidate,
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lowest-id" => Ok(TieBreak::LowestId),
            "first-candidate" => Ok(TieBreak::FirstCandidate),
            _ => Err(Error::InvalidArgument(format!("unknown tie-break rule `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub scheme: SchemeKind,
    /// Choices per ball; ignored (taken as 1) for single-choice schemes.
    pub d: usize,
    pub reset: ResetPeriod,
    pub tie_break: TieBreak,
    pub seed: u64,
    /// Number of balls; `None` means one per bin.
    pub balls: Option<usize>,
    pub intersection_rule: IntersectionRule,
}

impl SchemeConfig {
    pub fn new(scheme: SchemeKind, seed: u64) -> Self {
        Self {
            scheme,
            d: 2,
            reset: ResetPeriod::Log { c: 1.0 },
            tie_break: TieBreak::default(),
            seed,
            balls: None,
            intersection_rule: IntersectionRule::default(),
        }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_reset(mut self, reset: ResetPeriod) -> Self {
        self.reset = reset;
        self
    }

    pub fn with_balls(mut self, balls: usize) -> Self {
        self.balls = Some(balls);
        self
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn with_intersection_rule(mut self, rule: IntersectionRule) -> Self {
        self.intersection_rule = rule;
        self
    }

    pub fn effective_d(&self) -> usize {
        if self.scheme.single_choice() {
            1
        } else {
            self.d
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.effective_d() == 0 {
            return Err(Error::InvalidArgument("d must be >= 1".into()));
        }
        if self.scheme.uses_walkers() && g.k() < 2 {
            return Err(Error::InvalidArgument(format!(
                "walker schemes need k >= 2, graph has k={}",
                g.k()
            )));
        }
        if matches!(self.scheme, SchemeKind::RwIntersectReset | SchemeKind::RwPeriodicReset)
            && self.reset.rho(g.n()) == 0
        {
            return Err(Error::InvalidArgument(format!(
                "reset period {:?} gives rho = 0 at n = {}",
                self.reset,
                g.n()
            )));
        }
        Ok(())
    }
}

/// Bin loads plus the incremental profile counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadState {
    loads: Vec<u32>,
    /// `height_hist[h]` = balls whose height is exactly `h`.
    height_hist: Vec<u64>,
    /// `level_counts[l]` = bins whose load is exactly `l`.
    level_counts: Vec<u64>,
    balls_placed: u64,
}

impl LoadState {
    pub fn new(n: usize) -> Self {
        Self {
            loads: vec![0; n],
            height_hist: vec![0],
            level_counts: vec![n as u64],
            balls_placed: 0,
        }
    }

    /// Builds a state from raw loads, as if the balls arrived in some order.
    pub fn from_loads(loads: &[u32]) -> Self {
        let mut s = Self::new(loads.len());
        for (bin, &l) in loads.iter().enumerate() {
            for _ in 0..l {
                s.place(bin);
            }
        }
        s
    }

    pub fn loads(&self) -> &[u32] {
        &self.loads
    }

    pub fn load(&self, bin: usize) -> u32 {
        self.loads[bin]
    }

    pub fn balls_placed(&self) -> u64 {
        self.balls_placed
    }

    pub fn max_load(&self) -> u32 {
        (self.level_counts.len() - 1) as u32
    }

    /// Bins per exact load level, index 0 through the max load.
    pub fn level_counts(&self) -> &[u64] {
        &self.level_counts
    }

    pub fn height_hist(&self) -> &[u64] {
        &self.height_hist
    }

    /// Bins with load at least `i`.
    pub fn nu(&self, i: usize) -> u64 {
        self.level_counts.iter().skip(i).sum()
    }

    /// Balls with height at least `i`.
    pub fn mu(&self, i: usize) -> u64 {
        if i == 0 {
            return self.balls_placed;
        }
        self.height_hist.iter().skip(i).sum()
    }

    /// `nu(i)` for `i = 0..=max_load + 1`.
    pub fn nu_profile(&self) -> Vec<u64> {
        (0..=self.level_counts.len()).map(|i| self.nu(i)).collect()
    }

    /// `mu(i)` for `i = 0..=max_load + 1`.
    pub fn mu_profile(&self) -> Vec<u64> {
        (0..=self.level_counts.len()).map(|i| self.mu(i)).collect()
    }

    /// Adds one ball to `bin` and returns its height.
    pub fn place(&mut self, bin: usize) -> u32 {
        let old = self.loads[bin] as usize;
        self.loads[bin] += 1;
        self.level_counts[old] -= 1;
        if self.level_counts.len() == old + 1 {
            self.level_counts.push(0);
            self.height_hist.push(0);
        }
        self.level_counts[old + 1] += 1;
        self.height_hist[old + 1] += 1;
        self.balls_placed += 1;
        (old + 1) as u32
    }
}

/// The least-loaded candidate under `tie_break`.
pub fn choose_bin(state: &LoadState, candidates: &[usize], tie_break: TieBreak) -> Result<usize> {
    let n = state.loads.len();
    if let Some(&bad) = candidates.iter().find(|&&c| c >= n) {
        return Err(Error::InvalidArgument(format!("candidate {bad} outside [0, {n})")));
    }
    let pick = match tie_break {
        TieBreak::LowestId => candidates.iter().copied().min_by_key(|&c| (state.loads[c], c)),
        TieBreak::FirstCandidate => candidates
            .iter()
            .copied()
            .reduce(|best, c| if state.loads[c] < state.loads[best] { c } else { best }),
    };
    pick.ok_or_else(|| Error::InvalidArgument("empty candidate list".into()))
}

/// Places one ball in the least-loaded candidate and returns the chosen bin.
pub fn place_ball(state: &mut LoadState, candidates: &[usize], tie_break: TieBreak) -> Result<usize> {
    let bin = choose_bin(state, candidates, tie_break)?;
    state.place(bin);
    Ok(bin)
}

/// 64-bit FNV-1a over `(t, bin)` pairs as little-endian u64s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceDigest(u64);

impl Default for TraceDigest {
    fn default() -> Self {
        TraceDigest(0xcbf2_9ce4_8422_2325)
    }
}

impl TraceDigest {
    pub fn push(&mut self, t: u64, bin: u64) {
        for b in t.to_le_bytes().into_iter().chain(bin.to_le_bytes()) {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialResult {
    pub scheme: SchemeKind,
    pub n: usize,
    pub balls: usize,
    pub rho: Option<usize>,
    pub max_load: u32,
    /// Bins per exact load level.
    pub load_histogram: Vec<u64>,
    pub resets_total: u64,
    pub resets_by_cause: ResetCounts,
    /// Serialized as 16 lowercase hex digits.
    #[serde(serialize_with = "as_hex")]
    pub trace_digest: u64,
    #[serde(serialize_with = "as_millis")]
    pub wall_time: Duration,
}

fn as_hex<S: serde::Serializer>(x: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{x:016x}"))
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// Hooks into a running trial.
pub trait TrialObserver {
    /// Called before ball `t` is placed; `state` does not include it yet.
    fn ball(&mut self, _t: usize, _candidates: &[usize], _chosen: usize, _state: &LoadState) {}
    /// Called after the walkers moved following ball `t`.
    fn step(&mut self, _t: usize, _ens: &WalkerEnsemble, _reset: Option<ResetCause>) {}
}

impl TrialObserver for () {}

/// Records candidates, chosen bins and candidate loads for every ball.
#[derive(Debug, Default, Clone)]
pub struct PlacementRecorder {
    pub candidates: Vec<Vec<usize>>,
    pub candidate_loads: Vec<Vec<u32>>,
    pub chosen: Vec<usize>,
}

impl TrialObserver for PlacementRecorder {
    fn ball(&mut self, _t: usize, candidates: &[usize], chosen: usize, state: &LoadState) {
        self.candidates.push(candidates.to_vec());
        self.candidate_loads
            .push(candidates.iter().map(|&c| state.load(c)).collect());
        self.chosen.push(chosen);
    }
}

/// Writes one debug trace line per walker step.
pub struct TraceWriter<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out, error: None }
    }

    pub fn finish(self) -> std::io::Result<W> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(self.out),
        }
    }
}

impl<W: Write> TrialObserver for TraceWriter<W> {
    fn step(&mut self, t: usize, ens: &WalkerEnsemble, reset: Option<ResetCause>) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "{}", trace_line(t, ens.heads(), reset)) {
                self.error = Some(e);
            }
        }
    }
}

pub fn run_trial(g: &Graph, cfg: &SchemeConfig) -> Result<TrialResult> {
    run_trial_observed(g, cfg, &mut ())
}

/// One non-backtracking walker from a uniform start; ball `t` lands where it
/// stands at time `t`.
pub fn run_baseline_single_walk(g: &Graph, cfg: &SchemeConfig) -> Result<TrialResult> {
    let cfg = SchemeConfig {
        scheme: SchemeKind::SingleWalk,
        ..cfg.clone()
    };
    run_trial(g, &cfg)
}

/// Runs `cfg.balls` (default `n`) placements from empty bins, reporting
/// every ball and walker step to `obs`. Deterministic in `(g, cfg)`.
pub fn run_trial_observed(g: &Graph, cfg: &SchemeConfig, obs: &mut dyn TrialObserver) -> Result<TrialResult> {
    cfg.validate(g)?;
    let start = Instant::now();
    let n = g.n();
    let balls = cfg.balls.unwrap_or(n);
    let d = cfg.effective_d();
    let rho = cfg.reset.rho(n);
    let mut src = RngStream(ChaCha8Rng::seed_from_u64(cfg.seed));
    let mut state = LoadState::new(n);
    let mut digest = TraceDigest::default();
    let mut candidates = Vec::with_capacity(d);
    let mut resets = ResetCounts::default();

    let mut place = |t: usize, candidates: &[usize], state: &mut LoadState, obs: &mut dyn TrialObserver| -> Result<()> {
        let bin = choose_bin(state, candidates, cfg.tie_break)?;
        obs.ball(t, candidates, bin, state);
        state.place(bin);
        digest.push(t as u64, bin as u64);
        Ok(())
    };

    if cfg.scheme.uses_walkers() {
        let mut ens = spawn_uniform(g, d, &mut src)?;
        for t in 0..balls {
            candidates.clear();
            candidates.extend(ens.heads());
            place(t, &candidates, &mut state, obs)?;
            if t + 1 == balls {
                break;
            }
            let before = ens.resets();
            match cfg.scheme {
                SchemeKind::RwIntersectReset => {
                    step_scheme1(g, &mut ens, &mut src, rho, cfg.intersection_rule);
                }
                SchemeKind::RwPeriodicReset => {
                    step_scheme2(g, &mut ens, &mut src, rho);
                }
                _ => step_scheme3(g, &mut ens, &mut src),
            }
            let after = ens.resets();
            let cause = if after.intersection > before.intersection {
                Some(ResetCause::Intersection)
            } else if after.timer > before.timer {
                Some(ResetCause::Timer)
            } else {
                None
            };
            obs.step(t + 1, &ens, cause);
        }
        resets = ens.resets();
    } else {
        for t in 0..balls {
            candidates.clear();
            for _ in 0..d {
                candidates.push(src.0.gen_range(0..n));
            }
            place(t, &candidates, &mut state, obs)?;
        }
    }

    Ok(TrialResult {
        scheme: cfg.scheme,
        n,
        balls,
        rho: matches!(cfg.scheme, SchemeKind::RwIntersectReset | SchemeKind::RwPeriodicReset)
            .then_some(rho),
        max_load: state.max_load(),
        load_histogram: state.level_counts().to_vec(),
        resets_total: resets.total(),
        resets_by_cause: resets,
        trace_digest: digest.value(),
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{gen_cycle, gen_petersen, gen_random_regular};
    use proptest::prelude::*;

    #[test]
    fn place_ball_examples() {
        let mut s = LoadState::from_loads(&[2, 0, 1]);
        assert_eq!(place_ball(&mut s, &[0, 2], TieBreak::LowestId).unwrap(), 2);
        assert_eq!(s.load(2), 2);
        assert_eq!(s.height_hist()[2], 2);

        let mut s = LoadState::from_loads(&[1, 1]);
        assert_eq!(place_ball(&mut s, &[0, 1], TieBreak::LowestId).unwrap(), 0);
        let mut s = LoadState::from_loads(&[1, 1]);
        assert_eq!(place_ball(&mut s, &[1, 0], TieBreak::LowestId).unwrap(), 0);
        let mut s = LoadState::from_loads(&[1, 1]);
        assert_eq!(place_ball(&mut s, &[1, 0], TieBreak::FirstCandidate).unwrap(), 1);

        let mut s = LoadState::new(3);
        assert_eq!(place_ball(&mut s, &[1], TieBreak::LowestId).unwrap(), 1);
        assert!(place_ball(&mut s, &[], TieBreak::LowestId).is_err());
        assert!(place_ball(&mut s, &[7], TieBreak::LowestId).is_err());
    }

    #[test]
    fn profiles_from_state() {
        let s = LoadState::from_loads(&[3, 1, 0, 0]);
        assert_eq!(s.nu_profile(), vec![4, 2, 1, 1, 0]);
        assert_eq!(s.mu_profile(), vec![4, 4, 2, 1, 0]);
        let s = LoadState::from_loads(&[2, 2]);
        assert_eq!(s.mu(2), 2);
        assert_eq!(s.mu(1), 4);
    }

    #[test]
    fn scheme_names_round_trip() {
        for k in SchemeKind::ALL {
            assert_eq!(k.as_str().parse::<SchemeKind>().unwrap(), k);
        }
        assert!("power-of-two".parse::<SchemeKind>().is_err());
    }

    #[test]
    fn reset_periods() {
        assert_eq!(ResetPeriod::Power(0.4).rho(100_000), 100);
        assert_eq!(ResetPeriod::Log { c: 1.0 }.rho(1 << 12), 8);
        assert_eq!(ResetPeriod::Fixed(15).rho(1000), 15);
    }

    #[test]
    fn single_walk_on_cycle_is_round_robin() {
        let g = gen_cycle(101).unwrap();
        for seed in 0..5 {
            let r = run_baseline_single_walk(&g, &SchemeConfig::new(SchemeKind::OneChoice, seed)).unwrap();
            assert_eq!(r.scheme, SchemeKind::SingleWalk);
            assert_eq!(r.max_load, 1);
        }
    }

    #[test]
    fn single_walk_small_graph() {
        let r = run_trial(&gen_petersen(), &SchemeConfig::new(SchemeKind::SingleWalk, 4)).unwrap();
        assert!(r.max_load >= 1);
        assert_eq!(r.load_histogram.iter().sum::<u64>(), 10);
        let balls: u64 = r.load_histogram.iter().enumerate().map(|(l, &c)| l as u64 * c).sum();
        assert_eq!(balls, 10);
    }

    #[test]
    fn validation() {
        let g = gen_cycle(10).unwrap();
        let cfg = SchemeConfig::new(SchemeKind::RwIntersectReset, 0).with_reset(ResetPeriod::Fixed(0));
        assert!(run_trial(&g, &cfg).is_err());
        let cfg = SchemeConfig::new(SchemeKind::IndepUniform, 0).with_d(0);
        assert!(run_trial(&g, &cfg).is_err());
        // single-choice schemes ignore d
        let cfg = SchemeConfig::new(SchemeKind::OneChoice, 0).with_d(0);
        assert!(run_trial(&g, &cfg).is_ok());
    }

    #[test]
    fn trace_writer_lines() {
        let g = gen_cycle(12).unwrap();
        let cfg = SchemeConfig::new(SchemeKind::RwIntersectReset, 1)
            .with_reset(ResetPeriod::Fixed(3))
            .with_balls(8);
        let mut tw = TraceWriter::new(Vec::new());
        run_trial_observed(&g, &cfg, &mut tw).unwrap();
        let text = String::from_utf8(tw.finish().unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        for (i, l) in lines.iter().enumerate() {
            let f: Vec<&str> = l.split(' ').collect();
            assert_eq!(f.len(), 5);
            assert_eq!(f[0], (i + 1).to_string());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn conservation_and_profiles(seed in any::<u64>(), which in 0usize..6, d in 1usize..4, balls in 1usize..400) {
            let g = gen_random_regular(60, 4, seed).unwrap();
            let cfg = SchemeConfig::new(SchemeKind::ALL[which], seed)
                .with_d(d)
                .with_reset(ResetPeriod::Fixed(4))
                .with_balls(balls);
            let mut rec = PlacementRecorder::default();
            let r = run_trial_observed(&g, &cfg, &mut rec).unwrap();
            prop_assert_eq!(rec.chosen.len(), balls);
            prop_assert_eq!(r.load_histogram.iter().sum::<u64>(), 60);
            let placed: u64 = r.load_histogram.iter().enumerate().map(|(l, &c)| l as u64 * c).sum();
            prop_assert_eq!(placed, balls as u64);
            prop_assert_eq!(r.max_load as usize, r.load_histogram.len() - 1);

            // height identity: height >= i+1 iff every candidate had load >= i
            let mut state = LoadState::new(60);
            for ((cands, loads), &bin) in rec.candidates.iter().zip(&rec.candidate_loads).zip(&rec.chosen) {
                let h = state.place(bin);
                prop_assert!(cands.contains(&bin));
                let min = *loads.iter().min().unwrap();
                for i in 0..(h + 2) {
                    prop_assert_eq!(h > i, min >= i);
                }
            }
            let nu = state.nu_profile();
            prop_assert_eq!(nu[0], 60);
            prop_assert!(nu.windows(2).all(|w| w[0] >= w[1]));
            for i in 1..nu.len() {
                prop_assert!(state.mu(i) >= state.nu(i));
            }
        }
    }
}
