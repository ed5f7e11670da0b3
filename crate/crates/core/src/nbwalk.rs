//! Non-backtracking walkers on directed edges and their reset disciplines.
//!
//! A walker is a directed edge `(previous, current)`. One step maps it
//! through [`t_map`] with a rank drawn uniformly from `1..=k-1`, which never
//! returns along the arriving edge. The three schemes differ only in when
//! all walkers are teleported to fresh uniform directed edges:
//!
//! * scheme 1 ([`step_scheme1`]): when a proposed position was already
//!   visited since the last reset, or after `rho` steps without a reset;
//! * scheme 2 ([`step_scheme2`]): every `rho` steps, intersections allowed;
//! * scheme 3 ([`step_scheme3`]): never.
//!
//! Randomness is consumed in a fixed order per step: one rank per walker in
//! walker order, then one fresh edge per walker if the step resets.

use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::graphs::{DirectedEdge, Graph};
use crate::{Error, Result};

/// `floor(x)` that snaps values within 1e-9 of an integer to it.
pub(crate) fn floor_tol(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x.floor()
    }
}

/// Reset period `floor(c ln n)`.
pub fn rho_from_c(n: usize, c: f64) -> usize {
    floor_tol(c * (n as f64).ln()).max(0.0) as usize
}

/// The `l`-th smallest neighbor of `e.head` other than `e.tail`, as the next
/// directed edge. `l` ranges over `1..=k-1`.
pub fn t_map(g: &Graph, e: DirectedEdge, l: usize) -> Result<DirectedEdge> {
    if !g.is_edge(e) {
        return Err(Error::InvalidArgument(format!(
            "({}, {}) is not an edge",
            e.tail, e.head
        )));
    }
    if l == 0 || l >= g.k() {
        return Err(Error::InvalidArgument(format!(
            "rank {l} outside [1, {}]",
            g.k() - 1
        )));
    }
    Ok(t_map_unchecked(g, e, l))
}

#[inline]
pub(crate) fn t_map_unchecked(g: &Graph, e: DirectedEdge, l: usize) -> DirectedEdge {
    let row = g.neighbors(e.head);
    let mut idx = l - 1;
    if row[idx] >= e.tail {
        idx += 1;
    }
    DirectedEdge {
        tail: e.head,
        head: row[idx],
    }
}

/// Source of the per-step rank and fresh-edge draws.
pub trait WalkRandomness {
    /// Uniform on `1..=k-1`.
    fn rank(&mut self, k: usize) -> usize;
    /// Uniform over the `n*k` directed edges.
    fn fresh_edge(&mut self, g: &Graph) -> DirectedEdge;
}

/// Adapts any [`Rng`] into a [`WalkRandomness`].
pub struct RngStream<R>(pub R);

impl<R: Rng> WalkRandomness for RngStream<R> {
    #[inline]
    fn rank(&mut self, k: usize) -> usize {
        if k <= 2 {
            1
        } else {
            self.0.gen_range(1..k)
        }
    }

    #[inline]
    fn fresh_edge(&mut self, g: &Graph) -> DirectedEdge {
        g.directed_edge(self.0.gen_range(0..g.num_directed_edges()))
    }
}

/// Explicit draws for one step: one rank per walker and, if the step resets,
/// one fresh edge per walker.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepRandomness {
    pub ranks: Vec<usize>,
    pub fresh_edges: Vec<DirectedEdge>,
}

impl StepRandomness {
    pub fn new(ranks: Vec<usize>, fresh_edges: Vec<DirectedEdge>) -> Self {
        Self { ranks, fresh_edges }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        if let Some(&r) = self.ranks.iter().find(|&&r| r == 0 || r >= g.k()) {
            return Err(Error::InvalidArgument(format!("rank {r} outside [1, {}]", g.k() - 1)));
        }
        if let Some(e) = self.fresh_edges.iter().find(|e| !g.is_edge(**e)) {
            return Err(Error::InvalidArgument(format!("({}, {}) is not an edge", e.tail, e.head)));
        }
        Ok(())
    }

    /// Cursor that hands out the recorded draws in order.
    pub fn source(&self) -> StepCursor<'_> {
        StepCursor {
            step: self,
            rank: 0,
            edge: 0,
        }
    }
}

pub struct StepCursor<'a> {
    step: &'a StepRandomness,
    rank: usize,
    edge: usize,
}

impl WalkRandomness for StepCursor<'_> {
    fn rank(&mut self, _k: usize) -> usize {
        let r = self.step.ranks[self.rank];
        self.rank += 1;
        r
    }

    fn fresh_edge(&mut self, _g: &Graph) -> DirectedEdge {
        let e = self.step.fresh_edges[self.edge];
        self.edge += 1;
        e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResetCause {
    Intersection,
    Timer,
}

impl ResetCause {
    pub fn as_str(self) -> &'static str {
        match self {
            ResetCause::Intersection => "intersection",
            ResetCause::Timer => "timer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResetEvent {
    /// Step index at which the walkers jumped.
    pub t: usize,
    pub cause: ResetCause,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ResetCounts {
    pub intersection: u64,
    pub timer: u64,
}

impl ResetCounts {
    pub fn total(&self) -> u64 {
        self.intersection + self.timer
    }
}

/// How scheme 1 treats two walkers stepping onto the same unvisited vertex
/// in the same step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum IntersectionRule {
    /// Only a proposal that hits an already visited vertex resets; a shared
    /// fresh vertex is caught one step later.
    #[default]
    Formal,
    /// Two walkers proposing the same vertex also reset immediately.
    StrictProse,
}

/// State of `d` walkers plus the reset bookkeeping.
#[derive(Debug, Clone)]
pub struct WalkerEnsemble {
    edges: Vec<DirectedEdge>,
    /// `visit_stamp[v] == epoch` marks v visited in the current epoch.
    visit_stamp: Vec<u64>,
    visited: Vec<usize>,
    counter: usize,
    epoch: u64,
    time: usize,
    resets: ResetCounts,
    log: Option<Vec<ResetEvent>>,
    scratch: Vec<DirectedEdge>,
}

/// Places `d` walkers on independent uniform directed edges; the visited set
/// is the set of their heads.
pub fn spawn_uniform(g: &Graph, d: usize, src: &mut impl WalkRandomness) -> Result<WalkerEnsemble> {
    if d == 0 {
        return Err(Error::InvalidArgument("need at least one walker".into()));
    }
    let mut ens = WalkerEnsemble {
        edges: Vec::with_capacity(d),
        visit_stamp: vec![u64::MAX; g.n()],
        visited: Vec::new(),
        counter: 0,
        epoch: 0,
        time: 0,
        resets: ResetCounts::default(),
        log: None,
        scratch: Vec::with_capacity(d),
    };
    for _ in 0..d {
        let e = src.fresh_edge(g);
        ens.edges.push(e);
    }
    ens.mark_heads();
    Ok(ens)
}

impl WalkerEnsemble {
    /// Builds an ensemble at explicit positions, with the heads as the
    /// visited set and the timer at zero.
    pub fn at(g: &Graph, edges: Vec<DirectedEdge>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidArgument("need at least one walker".into()));
        }
        if let Some(e) = edges.iter().find(|e| !g.is_edge(**e)) {
            return Err(Error::InvalidArgument(format!("({}, {}) is not an edge", e.tail, e.head)));
        }
        let mut ens = WalkerEnsemble {
            scratch: Vec::with_capacity(edges.len()),
            edges,
            visit_stamp: vec![u64::MAX; g.n()],
            visited: Vec::new(),
            counter: 0,
            epoch: 0,
            time: 0,
            resets: ResetCounts::default(),
            log: None,
        };
        ens.mark_heads();
        Ok(ens)
    }

    /// Keeps a list of every reset event.
    pub fn with_log(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn heads(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().map(|e| e.head)
    }

    pub fn d(&self) -> usize {
        self.edges.len()
    }

    /// Steps since the last reset.
    pub fn counter(&self) -> usize {
        self.counter
    }

    /// Number of resets so far.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Steps taken so far.
    pub fn time(&self) -> usize {
        self.time
    }

    pub fn resets(&self) -> ResetCounts {
        self.resets
    }

    pub fn reset_log(&self) -> Option<&[ResetEvent]> {
        self.log.as_deref()
    }

    pub fn is_visited(&self, v: usize) -> bool {
        self.visit_stamp[v] == self.epoch
    }

    /// Vertices marked since the last reset, in marking order.
    pub fn visited(&self) -> &[usize] {
        &self.visited
    }

    /// Adds a vertex to the visited set, as if a walker had occupied it.
    pub fn mark_visited(&mut self, v: usize) {
        if self.visit_stamp[v] != self.epoch {
            self.visit_stamp[v] = self.epoch;
            self.visited.push(v);
        }
    }

    fn mark_heads(&mut self) {
        for j in 0..self.edges.len() {
            let h = self.edges[j].head;
            self.mark_visited(h);
        }
    }

    fn propose(&mut self, g: &Graph, src: &mut impl WalkRandomness) {
        let k = g.k();
        self.scratch.clear();
        for j in 0..self.edges.len() {
            let l = src.rank(k);
            self.scratch.push(t_map_unchecked(g, self.edges[j], l));
        }
    }

    fn reset(&mut self, g: &Graph, src: &mut impl WalkRandomness, cause: ResetCause) {
        for j in 0..self.edges.len() {
            self.edges[j] = src.fresh_edge(g);
        }
        self.epoch += 1;
        self.visited.clear();
        self.mark_heads();
        self.counter = 0;
        match cause {
            ResetCause::Intersection => self.resets.intersection += 1,
            ResetCause::Timer => self.resets.timer += 1,
        }
        if let Some(log) = self.log.as_mut() {
            log.push(ResetEvent { t: self.time, cause });
        }
    }

    fn advance(&mut self) {
        std::mem::swap(&mut self.edges, &mut self.scratch);
        self.counter += 1;
    }
}

/// One step of the intersection-or-timer reset scheme. Returns whether the
/// walkers were reset.
///
/// Intersection takes precedence over the timer as the logged cause when
/// both fire in the same step.
pub fn step_scheme1(
    g: &Graph,
    ens: &mut WalkerEnsemble,
    src: &mut impl WalkRandomness,
    rho: usize,
    rule: IntersectionRule,
) -> bool {
    debug_assert!(rho >= 1);
    ens.time += 1;
    ens.propose(g, src);
    let mut hit = ens.scratch.iter().any(|e| ens.is_visited(e.head));
    if !hit && rule == IntersectionRule::StrictProse {
        let p = &ens.scratch;
        hit = (0..p.len()).any(|a| (a + 1..p.len()).any(|b| p[a].head == p[b].head));
    }
    if hit {
        ens.reset(g, src, ResetCause::Intersection);
        true
    } else if ens.counter + 1 >= rho {
        ens.reset(g, src, ResetCause::Timer);
        true
    } else {
        ens.advance();
        ens.mark_heads();
        false
    }
}

/// One step of the periodic reset scheme: every `rho`-th step teleports all
/// walkers regardless of their positions. Returns whether it reset.
pub fn step_scheme2(g: &Graph, ens: &mut WalkerEnsemble, src: &mut impl WalkRandomness, rho: usize) -> bool {
    debug_assert!(rho >= 1);
    ens.time += 1;
    ens.propose(g, src);
    if ens.counter + 1 >= rho {
        ens.reset(g, src, ResetCause::Timer);
        true
    } else {
        ens.advance();
        false
    }
}

/// One step of the no-reset scheme.
pub fn step_scheme3(g: &Graph, ens: &mut WalkerEnsemble, src: &mut impl WalkRandomness) {
    ens.time += 1;
    ens.propose(g, src);
    ens.advance();
}

/// Debug trace line: `t head_1 .. head_d J cause`. Not a stable format.
pub fn trace_line(t: usize, heads: impl Iterator<Item = usize>, reset: Option<ResetCause>) -> String {
    let mut s = t.to_string();
    for h in heads {
        let _ = write!(s, " {h}");
    }
    match reset {
        Some(c) => {
            let _ = write!(s, " 1 {}", c.as_str());
        }
        None => s.push_str(" 0 -"),
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{gen_complete, gen_cycle, gen_petersen, gen_random_regular};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(t: usize, h: usize) -> DirectedEdge {
        DirectedEdge::new(t, h)
    }

    fn stream(seed: u64) -> RngStream<ChaCha8Rng> {
        RngStream(ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn t_map_examples() {
        let c5 = gen_cycle(5).unwrap();
        assert_eq!(t_map(&c5, e(0, 1), 1).unwrap(), e(1, 2));
        let k4 = gen_complete(4).unwrap();
        assert_eq!(t_map(&k4, e(0, 1), 1).unwrap(), e(1, 2));
        assert_eq!(t_map(&k4, e(0, 1), 2).unwrap(), e(1, 3));
        assert_eq!(t_map(&k4, e(3, 1), 1).unwrap(), e(1, 0));
        assert_eq!(t_map(&k4, e(3, 1), 2).unwrap(), e(1, 2));
        assert!(t_map(&k4, e(0, 1), 3).is_err());
        assert!(t_map(&k4, e(0, 1), 0).is_err());
        assert!(t_map(&c5, e(0, 2), 1).is_err());
    }

    #[test]
    fn t_map_never_backtracks_on_petersen() {
        let g = gen_petersen();
        for i in 0..g.num_directed_edges() {
            let edge = g.directed_edge(i);
            for l in 1..g.k() {
                let next = t_map(&g, edge, l).unwrap();
                assert_eq!(next.tail, edge.head);
                assert_ne!(next.head, edge.tail);
                assert!(g.is_edge(next));
            }
        }
    }

    #[test]
    fn spawn_is_uniform_over_directed_edges() {
        let g = gen_complete(4).unwrap();
        let trials = 100_000;
        let mut counts = [0usize; 12];
        let mut src = stream(11);
        for _ in 0..trials {
            let ens = spawn_uniform(&g, 1, &mut src).unwrap();
            counts[g.directed_edge_index(ens.edges()[0]).unwrap()] += 1;
        }
        let p = 1.0 / 12.0;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - trials as f64 * p).abs() < 3.0 * sigma + 1.0, "{counts:?}");
        }
    }

    #[test]
    fn spawn_marks_heads() {
        let g = gen_cycle(5).unwrap();
        let ens = spawn_uniform(&g, 2, &mut stream(1)).unwrap();
        assert!(ens.visited().len() <= 2);
        assert!(ens.heads().all(|h| ens.is_visited(h)));
        assert!(spawn_uniform(&g, 0, &mut stream(1)).is_err());
    }

    #[test]
    fn scheme1_advances_without_collision() {
        let g = gen_cycle(8).unwrap();
        let mut ens = WalkerEnsemble::at(&g, vec![e(0, 1), e(4, 5)]).unwrap();
        ens.mark_visited(0);
        ens.mark_visited(4);
        let step = StepRandomness::new(vec![1, 1], vec![]);
        let j = step_scheme1(&g, &mut ens, &mut step.source(), 10, IntersectionRule::Formal);
        assert!(!j);
        assert_eq!(ens.edges(), &[e(1, 2), e(5, 6)]);
        assert_eq!(ens.counter(), 1);
        for v in [0, 1, 2, 4, 5, 6] {
            assert!(ens.is_visited(v));
        }
    }

    #[test]
    fn scheme1_resets_on_visited_head() {
        let g = gen_cycle(8).unwrap();
        let mut ens = WalkerEnsemble::at(&g, vec![e(0, 1), e(4, 5)]).unwrap().with_log();
        ens.mark_visited(2);
        let step = StepRandomness::new(vec![1, 1], vec![e(6, 7), e(3, 2)]);
        let j = step_scheme1(&g, &mut ens, &mut step.source(), 10, IntersectionRule::Formal);
        assert!(j);
        assert_eq!(ens.edges(), &[e(6, 7), e(3, 2)]);
        assert_eq!(ens.visited(), &[7, 2]);
        assert_eq!(ens.counter(), 0);
        assert_eq!(ens.epoch(), 1);
        assert_eq!(ens.reset_log().unwrap(), &[ResetEvent { t: 1, cause: ResetCause::Intersection }]);
    }

    #[test]
    fn scheme1_timer() {
        let g = gen_cycle(50).unwrap();
        let mut ens = WalkerEnsemble::at(&g, vec![e(0, 1), e(20, 21)]).unwrap().with_log();
        let rho = 3;
        let adv = StepRandomness::new(vec![1, 1], vec![]);
        assert!(!step_scheme1(&g, &mut ens, &mut adv.source(), rho, IntersectionRule::Formal));
        assert!(!step_scheme1(&g, &mut ens, &mut adv.source(), rho, IntersectionRule::Formal));
        assert_eq!(ens.counter(), rho - 1);
        let reset = StepRandomness::new(vec![1, 1], vec![e(30, 31), e(40, 41)]);
        assert!(step_scheme1(&g, &mut ens, &mut reset.source(), rho, IntersectionRule::Formal));
        assert_eq!(ens.reset_log().unwrap(), &[ResetEvent { t: 3, cause: ResetCause::Timer }]);
        assert_eq!(ens.resets(), ResetCounts { intersection: 0, timer: 1 });
    }

    #[test]
    fn scheme1_simultaneous_fresh_collision() {
        // Two walkers both step onto unvisited vertex 2.
        let g = gen_cycle(8).unwrap();
        let start = vec![e(0, 1), e(4, 3)];
        let step = StepRandomness::new(vec![1, 1], vec![e(5, 6), e(6, 7)]);
        let mut formal = WalkerEnsemble::at(&g, start.clone()).unwrap();
        assert!(!step_scheme1(&g, &mut formal, &mut step.source(), 10, IntersectionRule::Formal));
        assert_eq!(formal.visited(), &[1, 3, 2]);
        let mut strict = WalkerEnsemble::at(&g, start).unwrap();
        assert!(step_scheme1(&g, &mut strict, &mut step.source(), 10, IntersectionRule::StrictProse));
    }

    #[test]
    fn scheme1_rho_one_always_resets() {
        let g = gen_cycle(20).unwrap();
        let mut src = stream(3);
        let mut ens = spawn_uniform(&g, 2, &mut src).unwrap();
        for _ in 0..100 {
            assert!(step_scheme1(&g, &mut ens, &mut src, 1, IntersectionRule::Formal));
        }
    }

    #[test]
    fn scheme2_resets_on_schedule_only() {
        let g = gen_cycle(10).unwrap();
        // Both walkers on the same vertex: allowed.
        let mut ens = WalkerEnsemble::at(&g, vec![e(0, 1), e(2, 1)]).unwrap();
        let adv = StepRandomness::new(vec![1, 1], vec![]);
        assert!(!step_scheme2(&g, &mut ens, &mut adv.source(), 3));
        assert_eq!(ens.edges(), &[e(1, 2), e(1, 0)]);
        assert!(!step_scheme2(&g, &mut ens, &mut adv.source(), 3));
        let reset = StepRandomness::new(vec![1, 1], vec![e(5, 6), e(7, 8)]);
        assert!(step_scheme2(&g, &mut ens, &mut reset.source(), 3));
        assert_eq!(ens.edges(), &[e(5, 6), e(7, 8)]);
        assert_eq!(ens.counter(), 0);
    }

    #[test]
    fn scheme2_cycle_is_rotation() {
        let g = gen_cycle(30).unwrap();
        let mut src = stream(9);
        let mut ens = WalkerEnsemble::at(&g, vec![e(3, 4)]).unwrap();
        for s in 1..10 {
            step_scheme2(&g, &mut ens, &mut src, 10);
            assert_eq!(ens.edges()[0].head, 4 + s);
        }
    }

    #[test]
    fn scheme3_girth_consequence() {
        let g = gen_petersen();
        let mut src = stream(5);
        let mut ens = spawn_uniform(&g, 2, &mut src).unwrap();
        let mut hist: Vec<Vec<DirectedEdge>> = vec![ens.edges().to_vec()];
        for _ in 0..10_000 {
            step_scheme3(&g, &mut ens, &mut src);
            hist.push(ens.edges().to_vec());
        }
        for w in 0..2 {
            let path: Vec<DirectedEdge> = hist.iter().map(|h| h[w]).collect();
            for pair in path.windows(2) {
                assert_eq!(pair[1].tail, pair[0].head);
                assert_ne!(pair[1].head, pair[0].tail);
            }
            for win in path.windows(5) {
                let heads: Vec<usize> = win.iter().map(|x| x.head).collect();
                for a in 0..5 {
                    for b in a + 1..5 {
                        assert_ne!(heads[a], heads[b], "revisit within 4 steps");
                    }
                }
            }
        }
        assert_eq!(ens.epoch(), 0);
    }

    #[test]
    fn scheme3_occupancy_uniform() {
        let g = gen_petersen();
        let mut src = stream(77);
        let mut ens = spawn_uniform(&g, 1, &mut src).unwrap();
        let steps = 1_000_000;
        let mut occ = [0usize; 10];
        for _ in 0..steps {
            step_scheme3(&g, &mut ens, &mut src);
            occ[ens.edges()[0].head] += 1;
        }
        // Successive positions are correlated; allow 3 sigma of an i.i.d.
        // sample inflated by the walk's short correlation time.
        let p = 0.1;
        let sigma = (steps as f64 * p * (1.0 - p)).sqrt() * 3.0;
        for c in occ {
            assert!((c as f64 - steps as f64 * p).abs() < 3.0 * sigma, "{occ:?}");
        }
    }

    #[test]
    fn trace_line_format() {
        assert_eq!(trace_line(3, [1, 5].into_iter(), None), "3 1 5 0 -");
        assert_eq!(trace_line(4, [2].into_iter(), Some(ResetCause::Timer)), "4 2 1 timer");
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho_from_c(1_000_000, 1.0), 13);
        let n = 4096;
        assert_eq!(rho_from_c(n, 1.0 / (n as f64).ln()), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn scheme1_epoch_paths_are_disjoint(seed in any::<u64>(), d in 2usize..=3, rho in 1usize..12) {
            let g = gen_random_regular(64, 3, seed ^ 0xabc).unwrap();
            let mut src = stream(seed);
            let mut ens = spawn_uniform(&g, d, &mut src).unwrap();
            let mut epoch_positions: Vec<usize> = ens.heads().collect();
            for _ in 0..500 {
                let reset = step_scheme1(&g, &mut ens, &mut src, rho, IntersectionRule::StrictProse);
                prop_assert!(ens.counter() < rho);
                if reset {
                    epoch_positions = ens.heads().collect();
                    // Fresh starts may coincide; disjointness is about paths
                    // grown from them.
                    epoch_positions.sort_unstable();
                    epoch_positions.dedup();
                } else {
                    for h in ens.heads() {
                        prop_assert!(!epoch_positions.contains(&h));
                    }
                    let mut heads: Vec<usize> = ens.heads().collect();
                    heads.sort_unstable();
                    heads.dedup();
                    prop_assert_eq!(heads.len(), d);
                    epoch_positions.extend(heads);
                }
                for &v in &epoch_positions {
                    prop_assert!(ens.is_visited(v));
                }
            }
        }

        #[test]
        fn scheme1_formal_heads_always_marked(seed in any::<u64>(), rho in 1usize..12) {
            let g = gen_random_regular(32, 4, seed).unwrap();
            let mut src = stream(seed);
            let mut ens = spawn_uniform(&g, 2, &mut src).unwrap();
            let mut earlier: Vec<usize> = ens.heads().collect();
            for _ in 0..300 {
                let reset = step_scheme1(&g, &mut ens, &mut src, rho, IntersectionRule::Formal);
                prop_assert!(ens.counter() < rho);
                if reset {
                    earlier = ens.heads().collect();
                } else {
                    // no vertex is occupied at two different times in an epoch
                    prop_assert!(ens.heads().all(|h| !earlier.contains(&h)));
                    earlier.extend(ens.heads());
                }
                prop_assert!(ens.heads().all(|h| ens.is_visited(h)));
                prop_assert!(ens.visited().len() <= 2 * rho);
            }
        }
    }
}
