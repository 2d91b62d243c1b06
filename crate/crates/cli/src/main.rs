//! `qsemis`: solve single graphs, sweep Erdős–Rényi ensembles, tabulate gate
//! counts and extract the size at which subspace expansion pays off.

mod config;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use qsemis::estimator::{method_cost, CostParams, Method, DEFAULT_CROSSOVER_BOUND};
use qsemis::graph::RNG_ALGORITHM;
use qsemis::pipeline::{
    bench_er, crossover_from_rows, read_bench_csv, solve, write_bench_csv, BenchConfig, GraphSource, OracleSummary,
    Provenance, QseConfig, SolveConfig, GraphSummary, SCHEMA_VERSION, TOOL_VERSION,
};
use qsemis::qaoa::{optimize_layerwise, OptimizerConfig};
use qsemis::{brute_force_mis, cost_diagonal, Error, KernelMode};

use config::ConfigFile;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(Error),
}

impl CliError {
    fn config(path: &str, line: usize, msg: impl fmt::Display) -> Self {
        CliError::Config(format!("{path}:{line}: {msg}"))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                Error::TooLarge { .. } => 3,
                Error::Numerical(_) | Error::EmptySubspace { .. } | Error::Dimension { .. } => 4,
                _ => 2,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(Error::Io(e.into()))
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "qsemis", version, about = "QAOA plus quantum subspace expansion for maximum independent set")]
struct Cli {
    /// Flat `key = value` file of flag values; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// QAOA followed by subspace expansion on one graph (JSON report).
    Solve(SolveArgs),
    /// Sweep over random graphs, one row per (N, seed, method, K).
    BenchEr(BenchArgs),
    /// Gate counts per kernel element for each estimation method.
    Resources(ResourceArgs),
    /// Fit fidelity curves from a sweep table and find the crossover size.
    Crossover(CrossoverArgs),
    /// Exact maximum independent sets of one graph.
    Oracle(OracleArgs),
}

/// `N,RHO,SEED` for an Erdős–Rényi graph.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ErSpec {
    n: usize,
    rho: f64,
    seed: u64,
}

impl FromStr for ErSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, rho, seed] = parts[..] else {
            return Err(format!("expected N,RHO,SEED, got {s:?}"));
        };
        Ok(ErSpec {
            n: n.parse().map_err(|e| format!("N: {e}"))?,
            rho: rho.parse().map_err(|e| format!("RHO: {e}"))?,
            seed: seed.parse().map_err(|e| format!("SEED: {e}"))?,
        })
    }
}

/// Comma-separated values; `a..b` expands to the inclusive range for integers.
#[derive(Debug, Clone, PartialEq)]
struct List(Vec<usize>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some((a, b)) = item.split_once("..") {
                let a: usize = a.trim().parse().map_err(|e| format!("{item:?}: {e}"))?;
                let b: usize = b.trim_start_matches('=').trim().parse().map_err(|e| format!("{item:?}: {e}"))?;
                if a > b {
                    return Err(format!("empty range {item:?}"));
                }
                out.extend(a..=b);
            } else {
                out.push(item.parse().map_err(|e| format!("{item:?}: {e}"))?);
            }
        }
        if out.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode(KernelMode);

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Mode(KernelMode::Exact)),
            "sampled" => Ok(Mode(KernelMode::Sampled)),
            _ => Err(format!("expected exact or sampled, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("expected json, csv or text, got {s:?}")),
        }
    }
}

#[derive(Args, Debug, Default)]
struct GraphArgs {
    /// Edge-list file: vertex count, then one `u v` pair per line.
    #[arg(long, value_name = "FILE")]
    graph: Option<String>,
    /// Built-in graph: cube, k33+ or edge.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
    /// Random graph with N vertices, edge probability RHO and seed SEED.
    #[arg(long, value_name = "N,RHO,SEED")]
    er: Option<ErSpec>,
}

impl GraphArgs {
    fn resolve(&self, cfg: &ConfigFile) -> Result<Option<GraphSource>> {
        let given = [self.graph.is_some(), self.fixture.is_some(), self.er.is_some()];
        let (graph, fixture, er) = if given.iter().any(|&g| g) {
            (self.graph.clone(), self.fixture.clone(), self.er)
        } else {
            (cfg.pick(None, "graph")?, cfg.pick(None, "fixture")?, cfg.pick(None, "er")?)
        };
        match (graph, fixture, er) {
            (None, None, None) => Ok(None),
            (Some(path), None, None) => Ok(Some(GraphSource::File { path })),
            (None, Some(name), None) => Ok(Some(GraphSource::Fixture { name })),
            (None, None, Some(e)) => Ok(Some(GraphSource::Er { n: e.n, rho: e.rho, seed: e.seed })),
            _ => Err(CliError::Config("give at most one of --graph, --fixture and --er".into())),
        }
    }
}

#[derive(Args, Debug, Default)]
struct QaoaArgs {
    /// QAOA layers optimized one at a time.
    #[arg(long)]
    layers: Option<usize>,
    /// Random starts per layer.
    #[arg(long)]
    starts: Option<usize>,
    /// Cost evaluations per local run.
    #[arg(long)]
    max_evals: Option<usize>,
    /// Cost decrease below which a local run stops.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl QaoaArgs {
    fn resolve(&self, cfg: &ConfigFile, seed: u64) -> Result<OptimizerConfig> {
        let d = OptimizerConfig::default();
        Ok(OptimizerConfig {
            layers: cfg.pick(self.layers, "layers")?.unwrap_or(d.layers),
            starts_per_layer: cfg.pick(self.starts, "starts")?.unwrap_or(d.starts_per_layer),
            max_evals: cfg.pick(self.max_evals, "max-evals")?.unwrap_or(d.max_evals),
            tolerance: cfg.pick(self.tolerance, "tolerance")?.unwrap_or(d.tolerance),
            seed,
            ..d
        })
    }
}

#[derive(Args, Debug, Default)]
struct QseArgs {
    /// Generator counts K, e.g. `1,2,4,8`.
    #[arg(long, value_name = "LIST")]
    k_list: Option<List>,
    /// Overlap eigenvalues at or below this are discarded.
    #[arg(long)]
    epsilon_cut: Option<f64>,
    /// exact or sampled kernel matrices.
    #[arg(long, value_name = "MODE")]
    kernel_mode: Option<Mode>,
    /// Shots per kernel element in sampled mode.
    #[arg(long)]
    shots: Option<u64>,
}

impl QseArgs {
    fn resolve(&self, cfg: &ConfigFile) -> Result<QseConfig> {
        let d = QseConfig::default();
        Ok(QseConfig {
            k_list: cfg.pick(self.k_list.clone(), "k-list")?.map_or(d.k_list, |l| l.0),
            epsilon_cut: cfg.pick(self.epsilon_cut, "epsilon-cut")?.unwrap_or(d.epsilon_cut),
            kernel_mode: cfg.pick(self.kernel_mode, "kernel-mode")?.map_or(d.kernel_mode, |m| m.0),
            shots: cfg.pick(self.shots, "shots")?.unwrap_or(d.shots),
        })
    }
}

#[derive(Args, Debug, Default)]
struct OutArgs {
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<String>,
    /// json, csv or text.
    #[arg(long)]
    format: Option<Format>,
}

impl OutArgs {
    fn resolve(&self, cfg: &ConfigFile, default: Format, allowed: &[Format]) -> Result<(Option<String>, Format)> {
        let format = cfg.pick(self.format, "format")?.unwrap_or(default);
        if !allowed.contains(&format) {
            return Err(CliError::Config(format!("format {format:?} is not available for this command")));
        }
        Ok((cfg.pick(self.out.clone(), "out")?, format))
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    qaoa: QaoaArgs,
    #[command(flatten)]
    qse: QseArgs,
    /// QAOA seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Rows in each bitstring probability table.
    #[arg(long)]
    top_m: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Graph sizes, e.g. `2..10` or `4,6,8`.
    #[arg(long, value_name = "LIST")]
    sizes: Option<List>,
    #[arg(long)]
    graphs_per_size: Option<usize>,
    /// Edge probability.
    #[arg(long)]
    rho: Option<f64>,
    /// Graph `i` at each size uses ER seed `seed + i`.
    #[arg(long)]
    seed: Option<u64>,
    /// Base seed of the QAOA optimizer.
    #[arg(long)]
    qaoa_seed: Option<u64>,
    /// Graph instances solved concurrently.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    qaoa: QaoaArgs,
    #[command(flatten)]
    qse: QseArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct ResourceArgs {
    /// Graph to take N and density from; also fixes L' and <H_C>^2 through a QAOA run.
    #[command(flatten)]
    graph: GraphArgs,
    /// Number of vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Edge density.
    #[arg(long)]
    rho: Option<f64>,
    /// Retained QAOA depth.
    #[arg(long)]
    l_prime: Option<usize>,
    /// Synthesis accuracy of each rotation.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Finite-difference stencil order.
    #[arg(long)]
    p: Option<usize>,
    /// Estimate of <H_C^2> for the LCU method.
    #[arg(long)]
    h2: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    qaoa: QaoaArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct CrossoverArgs {
    /// Sweep table written by `bench-er --format csv`.
    #[arg(long, value_name = "FILE")]
    input: Option<String>,
    /// Generator count of the subspace curve.
    #[arg(long)]
    k: Option<usize>,
    /// Edge density.
    #[arg(long)]
    rho: Option<f64>,
    /// Multiplier on the cost ratio; depends on how kernel elements are estimated.
    #[arg(long)]
    f_scale: Option<f64>,
    /// Largest N scanned.
    #[arg(long)]
    bound: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    out: OutArgs,
}

fn provenance(seeds: Vec<u64>) -> Provenance {
    Provenance { schema_version: SCHEMA_VERSION, tool_version: TOOL_VERSION, rng: RNG_ALGORITHM, seeds }
}

fn emit(out: &Option<String>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Config(format!("missing {what}")))
}

fn cmd_solve(a: &SolveArgs, cfg: &ConfigFile) -> Result<()> {
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(0);
    let run = SolveConfig {
        graph: require(a.graph.resolve(cfg)?, "graph (--graph, --fixture or --er)")?,
        qaoa: a.qaoa.resolve(cfg, seed)?,
        qse: a.qse.resolve(cfg)?,
        top_m: cfg.pick(a.top_m, "top-m")?.unwrap_or(16),
    };
    let (out, _) = a.out.resolve(cfg, Format::Json, &[Format::Json])?;
    let report = solve(&run)?;
    emit(&out, |w| write_json(w, &report))
}

#[derive(Serialize)]
struct BenchDocument<'a> {
    provenance: Provenance,
    config: &'a BenchConfig,
    rows: &'a [qsemis::pipeline::BenchRow],
}

fn cmd_bench(a: &BenchArgs, cfg: &ConfigFile) -> Result<()> {
    let d = BenchConfig::default();
    let qaoa_seed = cfg.pick(a.qaoa_seed, "qaoa-seed")?.unwrap_or(0);
    let run = BenchConfig {
        sizes: cfg.pick(a.sizes.clone(), "sizes")?.map_or(d.sizes, |l| l.0),
        graphs_per_size: cfg.pick(a.graphs_per_size, "graphs-per-size")?.unwrap_or(d.graphs_per_size),
        rho: cfg.pick(a.rho, "rho")?.unwrap_or(d.rho),
        seed: cfg.pick(a.seed, "seed")?.unwrap_or(d.seed),
        qaoa: a.qaoa.resolve(cfg, qaoa_seed)?,
        qse: a.qse.resolve(cfg)?,
        jobs: cfg.pick(a.jobs, "jobs")?.unwrap_or(d.jobs),
    };
    let (out, format) = a.out.resolve(cfg, Format::Csv, &[Format::Csv, Format::Json])?;
    let rows = bench_er(&run)?;
    let seeds = vec![run.seed, run.qaoa.seed];
    emit(&out, |w| match format {
        Format::Json => write_json(w, &BenchDocument { provenance: provenance(seeds), config: &run, rows: &rows }),
        _ => {
            writeln!(w, "# {}", serde_json::to_string(&provenance(seeds))?)?;
            writeln!(w, "# {}", serde_json::to_string(&run)?)?;
            write_bench_csv(&rows, w)?;
            Ok(())
        }
    })
}

#[derive(Serialize)]
struct ResourceRow {
    method: &'static str,
    n: usize,
    rho: f64,
    l_prime: usize,
    epsilon: f64,
    p: usize,
    h2: Option<f64>,
    cnot: Option<f64>,
    t_gates: Option<f64>,
    toffoli: Option<f64>,
    ancillas: Option<f64>,
    note: Option<String>,
}

#[derive(Serialize)]
struct ResourceDocument {
    provenance: Provenance,
    graph: Option<GraphSource>,
    params: CostParams,
    rows: Vec<ResourceRow>,
}

fn opt_cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn cmd_resources(a: &ResourceArgs, cfg: &ConfigFile) -> Result<()> {
    let source = a.graph.resolve(cfg)?;
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(0);
    let mut n = cfg.pick(a.n, "n")?;
    let mut rho = cfg.pick(a.rho, "rho")?;
    let mut l_prime = cfg.pick(a.l_prime, "l-prime")?;
    let mut h2 = cfg.pick(a.h2, "h2")?;
    if let Some(src) = &source {
        let g = src.load()?;
        n.get_or_insert(g.n());
        rho.get_or_insert(g.density());
        if l_prime.is_none() || h2.is_none() {
            let q = optimize_layerwise::<f64>(&cost_diagonal(&g)?, &a.qaoa.resolve(cfg, seed)?)?;
            l_prime.get_or_insert(q.l_prime);
            h2.get_or_insert(q.energy() * q.energy());
        }
    }
    let params = CostParams {
        n: require(n, "--n (or a graph)")?,
        rho: require(rho, "--rho (or a graph)")?,
        l_prime: require(l_prime, "--l-prime (or a graph)")?,
        epsilon: cfg.pick(a.epsilon, "epsilon")?.unwrap_or(1e-3),
        p: cfg.pick(a.p, "p")?.unwrap_or(2),
        h2: h2.unwrap_or(f64::NAN),
    };
    let mut rows = Vec::new();
    for m in Method::ALL {
        let mut row = ResourceRow {
            method: m.name(),
            n: params.n,
            rho: params.rho,
            l_prime: params.l_prime,
            epsilon: params.epsilon,
            p: params.p,
            h2,
            cnot: None,
            t_gates: None,
            toffoli: None,
            ancillas: None,
            note: None,
        };
        if m == Method::Lcu && h2.is_none() {
            row.note = Some("needs --h2 or a graph".into());
        } else {
            let c = method_cost(m, &params)?;
            (row.cnot, row.t_gates, row.toffoli, row.ancillas) = (Some(c.cnot), Some(c.t_gates), Some(c.toffoli), Some(c.ancillas));
        }
        rows.push(row);
    }
    let (out, format) = a.out.resolve(cfg, Format::Text, &[Format::Text, Format::Csv, Format::Json])?;
    let echo = format!(
        "n={} rho={} l_prime={} epsilon={} p={} h2={}",
        params.n,
        params.rho,
        params.l_prime,
        params.epsilon,
        params.p,
        h2.map_or_else(|| "none".to_string(), |x| x.to_string())
    );
    emit(&out, |w| match format {
        Format::Json => write_json(w, &ResourceDocument { provenance: provenance(vec![seed]), graph: source, params, rows }),
        Format::Csv => {
            writeln!(w, "# {echo}")?;
            let mut wr = csv::Writer::from_writer(w);
            for r in &rows {
                wr.serialize(r).map_err(Error::from)?;
            }
            wr.flush()?;
            Ok(())
        }
        Format::Text => {
            writeln!(w, "{echo}")?;
            writeln!(w, "{:<8}{:>16}{:>16}{:>12}{:>12}", "method", "cnot", "t", "toffoli", "ancillas")?;
            for r in &rows {
                match &r.note {
                    Some(note) => writeln!(w, "{:<8}  {note}", r.method)?,
                    None => writeln!(
                        w,
                        "{:<8}{:>16.6e}{:>16.6e}{:>12}{:>12}",
                        r.method,
                        r.cnot.unwrap_or_default(),
                        r.t_gates.unwrap_or_default(),
                        opt_cell(r.toffoli),
                        opt_cell(r.ancillas)
                    )?,
                }
            }
            Ok(())
        }
    })
}

#[derive(Serialize)]
struct CrossoverConfig {
    input: String,
    input_sha256: String,
    k: usize,
    rho: f64,
    f_scale: f64,
    bound: u64,
}

#[derive(Serialize)]
struct CrossoverDocument {
    provenance: Provenance,
    config: CrossoverConfig,
    report: qsemis::pipeline::CrossoverReport,
}

fn cmd_crossover(a: &CrossoverArgs, cfg: &ConfigFile) -> Result<()> {
    let input: String = require(cfg.pick(a.input.clone(), "input")?, "--input")?;
    let bytes = std::fs::read(&input).map_err(|e| CliError::Config(format!("{input}: {e}")))?;
    let conf = CrossoverConfig {
        input_sha256: hex::encode(Sha256::digest(&bytes)),
        input,
        k: cfg.pick(a.k, "k")?.unwrap_or(8),
        rho: cfg.pick(a.rho, "rho")?.unwrap_or(0.5),
        f_scale: require(cfg.pick(a.f_scale, "f-scale")?, "--f-scale")?,
        bound: cfg.pick(a.bound, "bound")?.unwrap_or(DEFAULT_CROSSOVER_BOUND),
    };
    let (out, format) = a.out.resolve(cfg, Format::Json, &[Format::Json, Format::Text])?;
    let rows = read_bench_csv(bytes.as_slice())?;
    let report = crossover_from_rows(&rows, conf.k, conf.rho, conf.f_scale, conf.bound)?;
    emit(&out, |w| match format {
        Format::Text => {
            for (name, fit) in [("qaoa", &report.qaoa_fit), ("qse", &report.qse_fit)] {
                writeln!(
                    w,
                    "{name}: alpha={:.6} beta={:.6} rms={:.3e}{}",
                    fit.alpha,
                    fit.beta,
                    fit.rms_residual,
                    if fit.low_confidence { " (low confidence)" } else { "" }
                )?;
            }
            match report.crossover.n_star {
                Some(n) => writeln!(w, "crossover: N* = {n}")?,
                None => writeln!(w, "crossover: none up to N = {}", report.crossover.bound)?,
            }
            Ok(())
        }
        _ => write_json(w, &CrossoverDocument { provenance: provenance(vec![]), config: conf, report }),
    })
}

#[derive(Serialize)]
struct OracleDocument {
    provenance: Provenance,
    source: GraphSource,
    graph: GraphSummary,
    oracle: OracleSummary,
}

fn cmd_oracle(a: &OracleArgs, cfg: &ConfigFile) -> Result<()> {
    let source = require(a.graph.resolve(cfg)?, "graph (--graph, --fixture or --er)")?;
    let (out, format) = a.out.resolve(cfg, Format::Json, &[Format::Json, Format::Text])?;
    let g = source.load()?;
    let oracle = OracleSummary::new(&brute_force_mis(&g)?, g.n());
    let graph = GraphSummary { n: g.n(), edges: g.num_edges(), density: g.density(), sha256: g.fingerprint() };
    emit(&out, |w| match format {
        Format::Text => {
            writeln!(w, "size {} ({} solutions)", oracle.size, oracle.count)?;
            for s in &oracle.solutions {
                writeln!(w, "{s}")?;
            }
            Ok(())
        }
        _ => write_json(w, &OracleDocument { provenance: provenance(vec![]), source, graph, oracle }),
    })
}

fn allowed_keys(sub: &str) -> Vec<String> {
    let cmd = Cli::command();
    cmd.find_subcommand(sub)
        .map(|c| c.get_arguments().filter_map(|a| a.get_long()).filter(|l| *l != "config").map(String::from).collect())
        .unwrap_or_default()
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let sub = match &cli.command {
        Command::Solve(_) => "solve",
        Command::BenchEr(_) => "bench-er",
        Command::Resources(_) => "resources",
        Command::Crossover(_) => "crossover",
        Command::Oracle(_) => "oracle",
    };
    cfg.check_keys(&allowed_keys(sub))?;
    match &cli.command {
        Command::Solve(a) => cmd_solve(a, &cfg),
        Command::BenchEr(a) => cmd_bench(a, &cfg),
        Command::Resources(a) => cmd_resources(a, &cfg),
        Command::Crossover(a) => cmd_crossover(a, &cfg),
        Command::Oracle(a) => cmd_oracle(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qsemis: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
