use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use rwbal::allocator::{run_trial_observed, ResetPeriod, SchemeConfig, SchemeKind, TieBreak, TraceWriter};
use rwbal::analysis::{
    default_lambda_tilde, empirical_tail_check, estimate_assumption1, mixing_certificate, mu_analytic,
    return_prob_check, theory_bounds_lowgirth, theory_bounds_scheme1, theory_bounds_scheme2,
    theory_bounds_scheme3, AdaptedProcess, ConcentrationSpec, IidBernoulli, MarkovBernoulli,
};
use rwbal::graphs::{
    check_girth_assumption, gen_circulant, gen_complete, gen_cycle, gen_petersen, gen_random_regular, girth,
    Graph,
};
use rwbal::harness::{parse_config, run_sweep, write_csv};
use rwbal::nbwalk::{rho_from_c, IntersectionRule};
use rwbal::Error;

/// Random-walk balanced allocation on regular graphs.
#[derive(Parser)]
#[command(name = "rwbal", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a k-regular graph and write it in the text format.
    GenGraph(GenGraph),
    /// Print the girth of a graph file (or check the girth assumption).
    Girth {
        graph: PathBuf,
        /// Report whether girth >= 2*ceil(alpha log_{k-1} n) + 1.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run one allocation trial and print its result as JSON.
    Run(RunArgs),
    /// Run a parameter sweep from a key=value config file and emit CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `workers` from the config.
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides `out` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan exact transition matrices for a mixing certificate.
    VerifyMixing {
        graph: PathBuf,
        #[arg(long, default_value_t = 60)]
        t_max: usize,
        /// Also report mu_analytic with this lambda-tilde (default: measured lambda + 1e-6).
        #[arg(long)]
        lambda_tilde: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact check of the conditioned return probability bound n^-alpha.
    VerifyReturn {
        graph: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimate of P(T_1 < rho) for two scheme-1 walkers.
    CheckAssumption1 {
        graph: PathBuf,
        #[command(flatten)]
        rho: RhoArgs,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = RuleArg::Formal)]
        intersection_rule: RuleArg,
    },
    /// Evaluate a layered-induction bound recursion and print it as JSON.
    TheoryBound {
        #[arg(long, value_parser = ["1", "2", "3", "lowgirth"])]
        scheme: String,
        /// Accepts `1e6` and `2^64` forms.
        #[arg(long, value_parser = parse_real)]
        n: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Monte Carlo check of the Bernstein-type corollary.
    TailCheck {
        #[arg(long, value_enum, default_value_t = ProcessArg::Iid)]
        process: ProcessArg,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long)]
        m: f64,
        /// Number of summands.
        #[arg(long)]
        n: usize,
        /// Success probability (iid) or probability after a 0 (markov); default m.
        #[arg(long)]
        p: Option<f64>,
        /// Probability after a 1 (markov); default m / 2.
        #[arg(long)]
        p_after_one: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lower end of the threshold grid (raised to 2Nm if smaller).
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphType {
    Cycle,
    Circulant,
    Complete,
    Petersen,
    RandomRegular,
}

#[derive(Args)]
struct GenGraph {
    #[arg(long = "type", value_enum)]
    kind: GraphType,
    #[arg(long, value_parser = parse_count)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Circulant offsets, comma separated.
    #[arg(long, value_delimiter = ',')]
    offsets: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(multiple = false)]
struct RhoArgs {
    /// Reset period floor(c ln n).
    #[arg(long)]
    c: Option<f64>,
    /// Fixed reset period.
    #[arg(long)]
    rho: Option<usize>,
    /// Reset period floor(n^p).
    #[arg(long)]
    rho_pow: Option<f64>,
}

impl RhoArgs {
    fn period(&self) -> ResetPeriod {
        match (self.c, self.rho, self.rho_pow) {
            (_, Some(r), _) => ResetPeriod::Fixed(r),
            (_, _, Some(p)) => ResetPeriod::Power(p),
            (c, _, _) => ResetPeriod::Log { c: c.unwrap_or(1.0) },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Formal,
    StrictProse,
}

impl From<RuleArg> for IntersectionRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Formal => IntersectionRule::Formal,
            RuleArg::StrictProse => IntersectionRule::StrictProse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProcessArg {
    Iid,
    Markov,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_parser = parse_scheme)]
    scheme: SchemeKind,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[command(flatten)]
    rho: RhoArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_count)]
    balls: Option<usize>,
    #[arg(long, value_parser = parse_tie_break, default_value = "lowest-id")]
    tie_break: TieBreak,
    #[arg(long, value_enum, default_value_t = RuleArg::Formal)]
    intersection_rule: RuleArg,
    /// Write one debug line per walker step to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_scheme(s: &str) -> Result<SchemeKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_tie_break(s: &str) -> Result<TieBreak, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_count(s: &str) -> Result<usize, String> {
    let v = parse_real(s)?;
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) {
        Ok(v as usize)
    } else {
        Err(format!("expected a non-negative integer, got `{s}`"))
    }
}

/// A float, also accepting `a^b`.
fn parse_real(s: &str) -> Result<f64, String> {
    let bad = || format!("expected a number, got `{s}`");
    match s.split_once('^') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a.powf(b))
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

/// Failure classes mapped to exit codes 1 (bad input) and 2 (internal).
enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let internal = match &e {
            Error::GenerationFailed { .. } => true,
            Error::TrialFailed { source, .. } => matches!(**source, Error::GenerationFailed { .. }),
            _ => false,
        };
        if internal {
            Failure::Internal(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(value: &impl serde::Serialize, out: Option<&Path>) -> CmdResult {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::read(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn gen_graph(args: GenGraph) -> CmdResult {
    let need_n = || args.n.ok_or_else(|| Failure::Invalid("--n is required for this graph type".into()));
    let g = match args.kind {
        GraphType::Cycle => gen_cycle(need_n()?)?,
        GraphType::Complete => gen_complete(need_n()?)?,
        GraphType::Petersen => gen_petersen(),
        GraphType::Circulant => {
            if args.offsets.is_empty() {
                return Err(Failure::Invalid("--offsets is required for circulant graphs".into()));
            }
            gen_circulant(need_n()?, &args.offsets)?
        }
        GraphType::RandomRegular => {
            let k = args.k.ok_or_else(|| Failure::Invalid("--k is required for random-regular".into()))?;
            gen_random_regular(need_n()?, k, args.seed)?
        }
    };
    let mut w = output(args.out.as_deref())?;
    w.write_all(g.to_text().as_bytes())?;
    w.flush()?;
    Ok(())
}

fn run(args: RunArgs) -> CmdResult {
    let g = read_graph(&args.graph)?;
    let mut cfg = SchemeConfig::new(args.scheme, args.seed)
        .with_d(args.d)
        .with_reset(args.rho.period())
        .with_tie_break(args.tie_break)
        .with_intersection_rule(args.intersection_rule.into());
    cfg.balls = args.balls;
    let result = match &args.trace {
        Some(path) => {
            let mut tw = TraceWriter::new(BufWriter::new(File::create(path)?));
            let r = run_trial_observed(&g, &cfg, &mut tw)?;
            tw.finish()?.flush()?;
            r
        }
        None => run_trial_observed(&g, &cfg, &mut ())?,
    };
    emit_json(&result, args.out.as_deref())
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::GenGraph(args) => gen_graph(args),
        Cmd::Girth { graph, alpha } => {
            let g = read_graph(&graph)?;
            match alpha {
                Some(a) => emit_json(&check_girth_assumption(&g, a)?, None),
                None => {
                    match girth(&g) {
                        Some(x) => println!("{x}"),
                        None => println!("inf"),
                    }
                    Ok(())
                }
            }
        }
        Cmd::Run(args) => run(args),
        Cmd::Sweep { config, workers, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Failure::Invalid(format!("{}: {e}", config.display())))?;
            let mut cfg = parse_config(&text)?;
            if workers.is_some() {
                cfg.workers = workers;
            }
            if out.is_some() {
                cfg.out = out;
            }
            let rows = run_sweep(&cfg)?;
            write_csv(&rows, output(cfg.out.as_deref())?)?;
            Ok(())
        }
        Cmd::VerifyMixing {
            graph,
            t_max,
            lambda_tilde,
            out,
        } => {
            let g = read_graph(&graph)?;
            let cert = mixing_certificate(&g, t_max)?;
            let analytic = if g.k() >= 3 {
                let lt = lambda_tilde.unwrap_or_else(|| default_lambda_tilde(&g));
                let curve = (1..=t_max)
                    .map(|t| mu_analytic(g.k(), lt, t))
                    .collect::<Result<Vec<_>, _>>()?;
                json!({ "lambda_tilde": lt, "mu_analytic": curve })
            } else {
                serde_json::Value::Null
            };
            emit_json(&json!({ "certificate": cert, "analytic": analytic }), out.as_deref())
        }
        Cmd::VerifyReturn {
            graph,
            alpha,
            horizon,
            out,
        } => {
            let g = read_graph(&graph)?;
            emit_json(&return_prob_check(&g, alpha, horizon)?, out.as_deref())
        }
        Cmd::CheckAssumption1 {
            graph,
            rho,
            trials,
            seed,
            intersection_rule,
        } => {
            let g = read_graph(&graph)?;
            let r = match rho.period() {
                ResetPeriod::Log { c } => rho_from_c(g.n(), c),
                p => p.rho(g.n()),
            };
            if r == 0 {
                return Err(Failure::Invalid("reset period is 0 for this graph".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            emit_json(
                &estimate_assumption1(&g, r, trials, &mut rng, intersection_rule.into())?,
                None,
            )
        }
        Cmd::TheoryBound {
            scheme,
            n,
            c,
            k,
            alpha,
        } => {
            let need = || -> Result<(usize, f64), Failure> {
                match (k, alpha) {
                    (Some(k), Some(a)) => Ok((k, a)),
                    _ => Err(Failure::Invalid(format!("scheme {scheme} needs --k and --alpha"))),
                }
            };
            let report = match scheme.as_str() {
                "1" => theory_bounds_scheme1(n, c)?,
                "2" => {
                    let (k, a) = need()?;
                    theory_bounds_scheme2(n, c, k, a)?
                }
                "3" => {
                    let (k, a) = need()?;
                    theory_bounds_scheme3(n, c, k, a)?
                }
                _ => {
                    let (k, a) = need()?;
                    theory_bounds_lowgirth(n, c, k, a)?
                }
            };
            emit_json(&report, None)
        }
        Cmd::TailCheck {
            process,
            b,
            m,
            n,
            p,
            p_after_one,
            trials,
            seed,
            lambda,
        } => {
            let spec = ConcentrationSpec::new(b, m, n, lambda);
            let mut proc: Box<dyn AdaptedProcess> = match process {
                ProcessArg::Iid => Box::new(IidBernoulli { p: p.unwrap_or(m) }),
                ProcessArg::Markov => Box::new(MarkovBernoulli::new(p.unwrap_or(m), p_after_one.unwrap_or(m / 2.0))),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            emit_json(&empirical_tail_check(proc.as_mut(), &spec, trials, &mut rng)?, None)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Invalid(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
