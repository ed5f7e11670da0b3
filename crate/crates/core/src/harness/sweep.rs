//! Parallel execution of a sweep and its CSV rendering.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{derive_seed, graph_seed, ExperimentConfig};
use crate::allocator::{run_trial, SchemeConfig, SchemeKind};
use crate::graphs::{girth, Graph};
use crate::nbwalk::ResetCounts;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "scheme,n,k,c,trial,seed,max_load,resets,resets_by_cause,girth,wall_ms,trace_digest";

/// One trial of one sweep point. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub scheme: SchemeKind,
    pub n: usize,
    pub k: usize,
    pub c: f64,
    pub trial: usize,
    pub seed: u64,
    pub max_load: u32,
    pub resets: u64,
    pub resets_by_cause: ResetCounts,
    pub girth: Option<usize>,
    pub wall_ms: Option<f64>,
    /// 16 lowercase hex digits.
    pub trace_digest: String,
}

impl ResultRow {
    fn write_csv(&self, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},intersection={};timer={},{},{},{}",
            self.scheme,
            self.n,
            self.k,
            fmt_sig6(self.c),
            self.trial,
            self.seed,
            self.max_load,
            self.resets,
            self.resets_by_cause.intersection,
            self.resets_by_cause.timer,
            self.girth.map(|g| g.to_string()).unwrap_or_default(),
            self.wall_ms.map(fmt_sig6).unwrap_or_default(),
            self.trace_digest,
        )
    }
}

/// `%g`-style formatting with 6 significant digits.
pub(crate) fn fmt_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-4..6).contains(&exp) {
        trim(format!("{:.*}", (5 - exp) as usize, x))
    } else {
        format!("{}e{exp}", trim(mant.to_string()))
    }
}

pub fn write_csv(rows: &[ResultRow], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        r.write_csv(&mut w)?;
    }
    w.flush()
}

/// `RWBAL_WORKERS` if set to a positive integer, else the available
/// parallelism.
pub fn default_workers() -> usize {
    std::env::var("RWBAL_WORKERS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&w: &usize| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

/// The graph a sweep uses for its `n_index`-th size.
pub fn build_graph_for(cfg: &ExperimentConfig, n_index: usize) -> Result<Graph> {
    cfg.graph
        .build(cfg.ns[n_index], graph_seed(cfg.master_seed, n_index as u64))
}

struct Job {
    point: usize,
    trial: usize,
    scheme: SchemeKind,
    n_index: usize,
    c: f64,
}

/// Runs every `(scheme, n, c)` point for `cfg.trials` trials on a pool of
/// workers. Rows come back in point-major order whatever the completion
/// order; points enumerate schemes, then sizes, then `c` values.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let workers = cfg.workers.unwrap_or_else(default_workers);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))?;

    let mut jobs = Vec::with_capacity(cfg.points() * cfg.trials);
    for &scheme in &cfg.schemes {
        for n_index in 0..cfg.ns.len() {
            for &c in &cfg.cs {
                let point = jobs.len() / cfg.trials;
                for trial in 0..cfg.trials {
                    jobs.push(Job {
                        point,
                        trial,
                        scheme,
                        n_index,
                        c,
                    });
                }
            }
        }
    }

    pool.install(|| {
        let graphs: Vec<(Graph, Option<usize>)> = (0..cfg.ns.len())
            .into_par_iter()
            .map(|i| {
                let g = build_graph_for(cfg, i)?;
                let gi = if cfg.compute_girth { girth(&g) } else { None };
                Ok((g, gi))
            })
            .collect::<Result<_>>()?;

        let results: Vec<Result<ResultRow>> = jobs
            .par_iter()
            .map(|job| {
                let (g, gi) = &graphs[job.n_index];
                let seed = derive_seed(cfg.master_seed, job.point as u64, job.trial as u64);
                let mut sc = SchemeConfig::new(job.scheme, seed)
                    .with_d(cfg.d)
                    .with_reset(cfg.rho.period(job.c))
                    .with_tie_break(cfg.tie_break)
                    .with_intersection_rule(cfg.intersection_rule);
                sc.balls = cfg.balls;
                let res = run_trial(g, &sc)?;
                Ok(ResultRow {
                    scheme: job.scheme,
                    n: g.n(),
                    k: g.k(),
                    c: job.c,
                    trial: job.trial,
                    seed,
                    max_load: res.max_load,
                    resets: res.resets_total,
                    resets_by_cause: res.resets_by_cause,
                    girth: *gi,
                    wall_ms: cfg.record_timing.then_some(res.wall_time.as_secs_f64() * 1e3),
                    trace_digest: format!("{:016x}", res.trace_digest),
                })
            })
            .collect();

        results
            .into_iter()
            .zip(&jobs)
            .map(|(r, job)| {
                r.map_err(|e| Error::TrialFailed {
                    point: job.point,
                    trial: job.trial,
                    source: Box::new(e),
                })
            })
            .collect()
    })
}
