//! Flat `key=value` experiment files.
//!
//! ```text
//! # comment
//! graph=random-regular:8
//! scheme=rw-intersect-reset
//! scheme=indep-uniform
//! n=2^12
//! n=2^14
//! c=1
//! trials=30
//! master_seed=42
//! ```
//!
//! List-valued keys (`scheme`, `n`, `c`) are repeated, one value per line.

use std::path::PathBuf;
use std::str::FromStr;

use crate::allocator::{ResetPeriod, SchemeKind, TieBreak};
use crate::graphs::{gen_circulant, gen_complete, gen_cycle, gen_petersen, gen_random_regular, Graph};
use crate::nbwalk::IntersectionRule;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    Cycle,
    Complete,
    Petersen,
    Circulant(Vec<usize>),
    RandomRegular(usize),
    File(PathBuf),
}

impl GraphSource {
    /// Builds the graph for `n` vertices. Fixed graphs (`petersen`, files)
    /// reject an `n` that does not match.
    pub fn build(&self, n: usize, seed: u64) -> Result<Graph> {
        let g = match self {
            GraphSource::Cycle => gen_cycle(n)?,
            GraphSource::Complete => gen_complete(n)?,
            GraphSource::Petersen => gen_petersen(),
            GraphSource::Circulant(offsets) => gen_circulant(n, offsets)?,
            GraphSource::RandomRegular(k) => gen_random_regular(n, *k, seed)?,
            GraphSource::File(path) => Graph::read(path)?,
        };
        if g.n() != n {
            return Err(Error::InvalidArgument(format!(
                "graph source {self} has {} vertices, sweep asked for n={n}",
                g.n()
            )));
        }
        Ok(g)
    }

    /// Vertex count when the source fixes it.
    pub fn fixed_n(&self) -> Result<Option<usize>> {
        Ok(match self {
            GraphSource::Petersen => Some(10),
            GraphSource::File(path) => Some(Graph::read(path)?.n()),
            _ => None,
        })
    }
}

impl std::fmt::Display for GraphSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphSource::Cycle => f.write_str("cycle"),
            GraphSource::Complete => f.write_str("complete"),
            GraphSource::Petersen => f.write_str("petersen"),
            GraphSource::Circulant(o) => {
                let o: Vec<String> = o.iter().map(|x| x.to_string()).collect();
                write!(f, "circulant:{}", o.join(","))
            }
            GraphSource::RandomRegular(k) => write!(f, "random-regular:{k}"),
            GraphSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GraphSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let need = |what: &str| Error::InvalidArgument(format!("graph `{kind}` needs `{kind}:{what}`"));
        match (kind, arg) {
            ("cycle", None) => Ok(GraphSource::Cycle),
            ("complete", None) => Ok(GraphSource::Complete),
            ("petersen", None) => Ok(GraphSource::Petersen),
            ("circulant", Some(a)) => a
                .split(',')
                .map(|x| parse_count(x.trim()))
                .collect::<Result<Vec<_>>>()
                .map(GraphSource::Circulant),
            ("circulant", None) => Err(need("o1,o2,...")),
            ("random-regular", Some(a)) => parse_count(a.trim()).map(GraphSource::RandomRegular),
            ("random-regular", None) => Err(need("k")),
            ("file", Some(a)) => Ok(GraphSource::File(PathBuf::from(a))),
            ("file", None) => Err(need("path")),
            _ => Err(Error::InvalidArgument(format!("unknown graph source `{s}`"))),
        }
    }
}

/// How `rho` is set for each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RhoSpec {
    /// `floor(c ln n)` with the point's `c`.
    #[default]
    FromC,
    Fixed(usize),
    /// `floor(n^p)`.
    Power(f64),
}

impl RhoSpec {
    pub fn period(self, c: f64) -> ResetPeriod {
        match self {
            RhoSpec::FromC => ResetPeriod::Log { c },
            RhoSpec::Fixed(r) => ResetPeriod::Fixed(r),
            RhoSpec::Power(p) => ResetPeriod::Power(p),
        }
    }
}

impl FromStr for RhoSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "log" {
            return Ok(RhoSpec::FromC);
        }
        if let Some(p) = s.strip_prefix("pow:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad exponent in `{s}`")))?;
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidArgument(format!("rho exponent must lie in (0, 1), got {p}")));
            }
            return Ok(RhoSpec::Power(p));
        }
        let r = parse_count(s)?;
        if r == 0 {
            return Err(Error::InvalidArgument("rho must be >= 1".into()));
        }
        Ok(RhoSpec::Fixed(r))
    }
}

/// Non-negative integer, also accepting `a^b` and integral `1e5`.
pub(crate) fn parse_count(s: &str) -> Result<usize> {
    let bad = || Error::InvalidArgument(format!("expected a non-negative integer, got `{s}`"));
    if let Some((a, b)) = s.split_once('^') {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        return a.checked_pow(b).ok_or_else(bad);
    }
    if let Ok(v) = s.parse::<usize>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| bad())?;
    if f >= 0.0 && f.fract() == 0.0 && f < 2f64.powi(53) {
        Ok(f as usize)
    } else {
        Err(bad())
    }
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::InvalidArgument(format!("expected true or false, got `{s}`"))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub schemes: Vec<SchemeKind>,
    pub ns: Vec<usize>,
    pub cs: Vec<f64>,
    pub rho: RhoSpec,
    pub d: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub out: Option<PathBuf>,
    /// `None` uses [`super::default_workers`].
    pub workers: Option<usize>,
    pub tie_break: TieBreak,
    pub balls: Option<usize>,
    pub intersection_rule: IntersectionRule,
    pub compute_girth: bool,
    /// Fills the `wall_ms` column, which makes output machine-dependent.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn new(graph: GraphSource, schemes: Vec<SchemeKind>, ns: Vec<usize>) -> Self {
        Self {
            graph,
            schemes,
            ns,
            cs: vec![1.0],
            rho: RhoSpec::FromC,
            d: 2,
            trials: 1,
            master_seed: 0,
            out: None,
            workers: None,
            tie_break: TieBreak::default(),
            balls: None,
            intersection_rule: IntersectionRule::default(),
            compute_girth: false,
            record_timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::InvalidArgument("no schemes given".into()));
        }
        if self.ns.is_empty() {
            return Err(Error::InvalidArgument("no n values given".into()));
        }
        if self.cs.is_empty() {
            return Err(Error::InvalidArgument("no c values given".into()));
        }
        if let Some(c) = self.cs.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.d == 0 {
            return Err(Error::InvalidArgument("d must be >= 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidArgument("workers must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of `(scheme, n, c)` points.
    pub fn points(&self) -> usize {
        self.schemes.len() * self.ns.len() * self.cs.len()
    }
}

/// Parses a config file. Unknown keys and malformed values are errors that
/// name the line.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut graph = None;
    let mut cfg = ExperimentConfig::new(GraphSource::Cycle, Vec::new(), Vec::new());
    let mut cs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| Error::Parse {
            line: line_no,
            msg: match e {
                Error::InvalidArgument(m) => m,
                other => other.to_string(),
            },
        };
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            msg: format!("expected key=value, got `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "graph" => graph = Some(value.parse().map_err(at)?),
            "scheme" => cfg.schemes.push(value.parse().map_err(at)?),
            "n" => cfg.ns.push(parse_count(value).map_err(at)?),
            "c" => cs.push(
                value
                    .parse::<f64>()
                    .map_err(|_| at(Error::InvalidArgument(format!("bad number `{value}`"))))?,
            ),
            "rho" => cfg.rho = value.parse().map_err(at)?,
            "d" => cfg.d = parse_count(value).map_err(at)?,
            "trials" => cfg.trials = parse_count(value).map_err(at)?,
            "master_seed" => {
                cfg.master_seed = value
                    .parse()
                    .map_err(|_| at(Error::InvalidArgument(format!("bad seed `{value}`"))))?
            }
            "out" => cfg.out = Some(PathBuf::from(value)),
            "workers" => cfg.workers = Some(parse_count(value).map_err(at)?),
            "tie_break" => cfg.tie_break = value.parse().map_err(at)?,
            "balls" => cfg.balls = Some(parse_count(value).map_err(at)?),
            "intersection_rule" => {
                cfg.intersection_rule = match value {
                    "formal" => IntersectionRule::Formal,
                    "strict-prose" => IntersectionRule::StrictProse,
                    _ => return Err(at(Error::InvalidArgument(format!("unknown intersection rule `{value}`")))),
                }
            }
            "compute_girth" => cfg.compute_girth = parse_bool(value).map_err(at)?,
            "record_timing" => cfg.record_timing = parse_bool(value).map_err(at)?,
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown key `{key}`"),
                })
            }
        }
    }
    cfg.graph = graph.ok_or_else(|| Error::InvalidArgument("config has no graph= line".into()))?;
    if !cs.is_empty() {
        cfg.cs = cs;
    }
    if cfg.ns.is_empty() {
        if let Some(n) = cfg.graph.fixed_n()? {
            cfg.ns.push(n);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let cfg = parse_config(
            "# demo\n\
             graph = random-regular:8\n\
             scheme=rw-intersect-reset\n\
             scheme=indep-uniform\n\
             n=2^10\n\
             n=4096 # trailing comment\n\
             c=0.5\n\
             c=1\n\
             rho=pow:0.4\n\
             trials=3\n\
             master_seed=99\n\
             workers=2\n\
             tie_break=first-candidate\n\
             compute_girth=true\n",
        )
        .unwrap();
        assert_eq!(cfg.graph, GraphSource::RandomRegular(8));
        assert_eq!(cfg.schemes, vec![SchemeKind::RwIntersectReset, SchemeKind::IndepUniform]);
        assert_eq!(cfg.ns, vec![1024, 4096]);
        assert_eq!(cfg.cs, vec![0.5, 1.0]);
        assert_eq!(cfg.rho, RhoSpec::Power(0.4));
        assert_eq!((cfg.trials, cfg.master_seed, cfg.workers), (3, 99, Some(2)));
        assert_eq!(cfg.tie_break, TieBreak::FirstCandidate);
        assert!(cfg.compute_girth && !cfg.record_timing);
        assert_eq!(cfg.points(), 8);
    }

    #[test]
    fn rejects_bad_input() {
        let err = parse_config("graph=cycle\nn=10\nfoo=1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_config("graph=cycle\nn=10\nscheme=nope\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(parse_config("graph=cycle\nn=10\n").is_err(), "empty scheme list");
        assert!(parse_config("graph=cycle\nscheme=one-choice\nn=10\ntrials=0\n").is_err());
        assert!(parse_config("scheme=one-choice\nn=10\n").is_err());
        assert!(parse_config("graph=cycle\nscheme=one-choice\nn=10\nrho=0\n").is_err());
        assert!(parse_config("graph=cycle\nscheme=one-choice\nn 10\n").is_err());
    }

    #[test]
    fn graph_sources() {
        assert_eq!("circulant:1,2".parse::<GraphSource>().unwrap(), GraphSource::Circulant(vec![1, 2]));
        assert!("circulant".parse::<GraphSource>().is_err());
        assert!("hypercube".parse::<GraphSource>().is_err());
        for s in ["cycle", "complete", "petersen", "circulant:1,3", "random-regular:4", "file:a/b.graph"] {
            assert_eq!(s.parse::<GraphSource>().unwrap().to_string(), s);
        }
        assert!(GraphSource::Petersen.build(12, 0).is_err());
        assert_eq!(GraphSource::Cycle.build(12, 0).unwrap().k(), 2);
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("2^16").unwrap(), 65536);
        assert_eq!(parse_count("1e5").unwrap(), 100_000);
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("2^99").is_err());
    }
}
