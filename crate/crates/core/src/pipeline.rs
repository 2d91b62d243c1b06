//! End-to-end runs: single-graph solves, Erdős–Rényi sweeps and crossover
//! extraction from sweep tables.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{crossover_size_scaled, fit_fermi_dirac, Crossover, FermiDiracFit};
use crate::graph::{brute_force_mis, generate_er, mask_to_ket, Graph, MisOracle, RNG_ALGORITHM};
use crate::hamiltonian::{cost_diagonal, DiagonalOperator};
use crate::qaoa::{optimize_layerwise, OptimizerConfig, QaoaResult};
use crate::qse::{
    assemble_state, build_kernels, evaluate_metrics, generator_times, reencode_probability, solve_truncated, Metrics,
    DEFAULT_EPSILON_CUT,
};
use crate::simulator::{inner_raw, KernelMode, ShotModel, StateVector};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where the graph of a run came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GraphSource {
    File { path: String },
    Fixture { name: String },
    Er { n: usize, rho: f64, seed: u64 },
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::File { path } => crate::graph::parse_graph(&std::fs::read_to_string(path)?),
            GraphSource::Fixture { name } => {
                Graph::fixture(name).ok_or_else(|| Error::InvalidArgument(format!("unknown fixture {name:?}")))
            }
            GraphSource::Er { n, rho, seed } => generate_er(*n, *rho, *seed),
        }
    }
}

/// Subspace-expansion settings shared by solves and sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QseConfig {
    pub k_list: Vec<usize>,
    pub epsilon_cut: f64,
    pub kernel_mode: KernelMode,
    /// Shots per kernel element in sampled mode.
    pub shots: u64,
}

impl Default for QseConfig {
    fn default() -> Self {
        Self { k_list: vec![1, 2, 4, 8], epsilon_cut: DEFAULT_EPSILON_CUT, kernel_mode: KernelMode::Exact, shots: 1_000_000 }
    }
}

impl QseConfig {
    fn shot_model(&self, seed: u64, k: usize) -> ShotModel {
        match self.kernel_mode {
            KernelMode::Exact => ShotModel::exact(),
            KernelMode::Sampled => ShotModel::sampled(self.shots, mix(seed, k as u64)),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k_list.is_empty() || self.k_list.contains(&0) {
            return Err(Error::InvalidArgument(format!("K list must hold positive values, got {:?}", self.k_list)));
        }
        if !(self.epsilon_cut > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon_cut must be positive, got {}", self.epsilon_cut)));
        }
        if self.kernel_mode == KernelMode::Sampled && self.shots < 2 {
            return Err(Error::InvalidArgument(format!("sampled kernels need at least 2 shots, got {}", self.shots)));
        }
        Ok(())
    }
}

fn mix(seed: u64, salt: u64) -> u64 {
    seed ^ salt.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub graph: GraphSource,
    pub qaoa: OptimizerConfig,
    pub qse: QseConfig,
    /// Rows in each bitstring probability table.
    pub top_m: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub density: f64,
    /// SHA-256 of the canonical edge list.
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub size: usize,
    pub count: usize,
    pub solutions: Vec<String>,
    pub e_min: i32,
}

impl OracleSummary {
    pub fn new(o: &MisOracle, n: usize) -> Self {
        Self {
            size: o.size,
            count: o.count(),
            solutions: o.solutions.iter().map(|&x| mask_to_ket(x, n)).collect(),
            e_min: -(o.size as i32),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Probability {
    pub bitstring: String,
    pub probability: f64,
}

fn top_table(s: &StateVector<f64>, m: usize) -> Vec<Probability> {
    s.top_probabilities(m)
        .into_iter()
        .map(|(x, p)| Probability { bitstring: mask_to_ket(x, s.n()), probability: p })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct QaoaReport {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    pub cost_by_depth: Vec<f64>,
    pub l_prime: usize,
    pub evaluations: usize,
    pub metrics: Metrics,
    pub probabilities: Vec<Probability>,
}

/// Consistency checks on one subspace solve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VariationalChecks {
    pub below_reference: bool,
    pub above_ground: bool,
    pub normalization_error: f64,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QseReport {
    pub k: usize,
    pub retained: usize,
    pub epsilon_cut: f64,
    pub ground_energy: f64,
    pub overlap_eigenvalues: Vec<f64>,
    pub weights_re: Vec<f64>,
    pub weights_im: Vec<f64>,
    pub reencode_probability: f64,
    pub metrics: Metrics,
    pub checks: VariationalChecks,
    pub probabilities: Vec<Probability>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub rng: &'static str,
    pub seeds: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub provenance: Provenance,
    pub config: SolveConfig,
    pub graph: GraphSummary,
    pub oracle: OracleSummary,
    pub qaoa: QaoaReport,
    pub qse: Vec<QseReport>,
}

/// Variational checks pass within these bounds.
pub const ENERGY_TOLERANCE: f64 = 1e-9;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-8;
pub const RESIDUAL_TOLERANCE: f64 = 1e-7;

/// Subspace expansion on top of a reference state for one `K`.
pub fn run_qse(
    phi0: &StateVector<f64>,
    d: &DiagonalOperator,
    oracle: &MisOracle,
    reference_energy: f64,
    k: usize,
    cfg: &QseConfig,
    seed: u64,
    top_m: usize,
) -> Result<QseReport> {
    let grid = generator_times(k)?;
    let kernels = build_kernels(phi0, d, &grid, &cfg.shot_model(seed, k))?;
    let sol = solve_truncated(&kernels, cfg.epsilon_cut)?;
    let f = sol.ground_weights();
    let assembled = assemble_state(phi0, d, &grid, f)?;
    let metrics = evaluate_metrics(&assembled.state, d, oracle)?;
    let e = sol.ground_energy();
    let norm = inner_raw(f, &kernels.s.mul_vec(f)).re;
    let residual = sol.residuals[0];
    let below_reference = e <= reference_energy + ENERGY_TOLERANCE;
    let above_ground = e >= d.min() as f64 - ENERGY_TOLERANCE;
    let normalization_error = (norm - 1.0).abs();
    let checks = VariationalChecks {
        below_reference,
        above_ground,
        normalization_error,
        residual,
        passed: below_reference
            && above_ground
            && normalization_error <= NORMALIZATION_TOLERANCE
            && residual <= RESIDUAL_TOLERANCE,
    };
    Ok(QseReport {
        k,
        retained: sol.retained,
        epsilon_cut: cfg.epsilon_cut,
        ground_energy: e,
        overlap_eigenvalues: sol.overlap_eigenvalues.clone(),
        weights_re: f.iter().map(|z| z.re).collect(),
        weights_im: f.iter().map(|z| z.im).collect(),
        reencode_probability: reencode_probability(f, &kernels)?,
        metrics,
        checks,
        probabilities: top_table(&assembled.state, top_m),
    })
}

fn qaoa_report(r: &QaoaResult<f64>, metrics: Metrics, top_m: usize) -> QaoaReport {
    QaoaReport {
        gammas: r.gammas.clone(),
        betas: r.betas.clone(),
        cost_by_depth: r.cost_by_depth.clone(),
        l_prime: r.l_prime,
        evaluations: r.evaluations,
        metrics,
        probabilities: top_table(&r.state, top_m),
    }
}

/// Oracle, layer-wise QAOA, then subspace expansion for each `K`.
pub fn solve(cfg: &SolveConfig) -> Result<SolveReport> {
    let g = cfg.graph.load()?;
    solve_graph(&g, cfg)
}

pub fn solve_graph(g: &Graph, cfg: &SolveConfig) -> Result<SolveReport> {
    cfg.qse.validate()?;
    let d = cost_diagonal(g)?;
    let oracle = brute_force_mis(g)?;
    let qaoa = optimize_layerwise::<f64>(&d, &cfg.qaoa)?;
    let qaoa_metrics = evaluate_metrics(&qaoa.state, &d, &oracle)?;
    let qse = cfg
        .qse
        .k_list
        .iter()
        .map(|&k| run_qse(&qaoa.state, &d, &oracle, qaoa.energy(), k, &cfg.qse, cfg.qaoa.seed, cfg.top_m))
        .collect::<Result<Vec<_>>>()?;
    let mut seeds = vec![cfg.qaoa.seed];
    if let GraphSource::Er { seed, .. } = cfg.graph {
        seeds.push(seed);
    }
    Ok(SolveReport {
        provenance: Provenance { schema_version: SCHEMA_VERSION, tool_version: TOOL_VERSION, rng: RNG_ALGORITHM, seeds },
        config: cfg.clone(),
        graph: GraphSummary { n: g.n(), edges: g.num_edges(), density: g.density(), sha256: g.fingerprint() },
        oracle: OracleSummary::new(&oracle, g.n()),
        qaoa: qaoa_report(&qaoa, qaoa_metrics, cfg.top_m),
        qse,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub graphs_per_size: usize,
    pub rho: f64,
    /// Graph `i` at every size uses ER seed `seed + i`.
    pub seed: u64,
    pub qaoa: OptimizerConfig,
    pub qse: QseConfig,
    pub jobs: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: (2..=10).collect(),
            graphs_per_size: 14,
            rho: 0.5,
            seed: 0,
            qaoa: OptimizerConfig::default(),
            qse: QseConfig::default(),
            jobs: 1,
        }
    }
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    /// `instance`, `mean` or `std`.
    pub kind: String,
    pub n: usize,
    /// ER seed for instance rows; empty for summaries.
    pub seed: Option<u64>,
    /// `qaoa` or `qse`.
    pub method: String,
    /// Number of trial states; empty for QAOA.
    pub k: Option<usize>,
    pub l_prime: Option<usize>,
    pub energy: Option<f64>,
    pub approx_ratio: Option<f64>,
    pub fidelity: Option<f64>,
    pub mis_fidelity: Option<f64>,
    pub hamming_error: Option<f64>,
    pub parity_error: Option<f64>,
    /// Variational checks of a subspace solve; empty for QAOA and summaries.
    pub checks_passed: Option<bool>,
    /// Instance count behind a summary row, 1 otherwise.
    pub samples: usize,
    pub error: Option<String>,
}

impl BenchRow {
    fn instance(n: usize, seed: u64, method: &str, k: Option<usize>) -> Self {
        Self {
            kind: "instance".into(),
            n,
            seed: Some(seed),
            method: method.into(),
            k,
            l_prime: None,
            energy: None,
            approx_ratio: None,
            fidelity: None,
            mis_fidelity: None,
            hamming_error: None,
            parity_error: None,
            checks_passed: None,
            samples: 1,
            error: None,
        }
    }

    fn with_metrics(mut self, m: &Metrics, l_prime: usize) -> Self {
        self.l_prime = Some(l_prime);
        self.energy = Some(m.energy);
        self.approx_ratio = Some(m.approx_ratio);
        self.fidelity = Some(m.fidelity);
        self.mis_fidelity = Some(m.mis_fidelity);
        self.hamming_error = Some(m.hamming_error);
        self.parity_error = Some(m.parity_error);
        self
    }

    fn failed(mut self, e: &Error) -> Self {
        self.error = Some(e.to_string());
        self
    }
}

fn bench_instance(n: usize, seed: u64, cfg: &BenchConfig) -> Vec<BenchRow> {
    let run = || -> Result<Vec<BenchRow>> {
        let g = generate_er(n, cfg.rho, seed)?;
        let d = cost_diagonal(&g)?;
        let oracle = brute_force_mis(&g)?;
        let qcfg = OptimizerConfig { seed: mix(cfg.qaoa.seed, seed), ..cfg.qaoa };
        let qaoa = optimize_layerwise::<f64>(&d, &qcfg)?;
        let m = evaluate_metrics(&qaoa.state, &d, &oracle)?;
        let mut rows = vec![BenchRow::instance(n, seed, "qaoa", None).with_metrics(&m, qaoa.l_prime)];
        for &k in &cfg.qse.k_list {
            let row = BenchRow::instance(n, seed, "qse", Some(k));
            rows.push(match run_qse(&qaoa.state, &d, &oracle, qaoa.energy(), k, &cfg.qse, qcfg.seed, 0) {
                Ok(r) => BenchRow { checks_passed: Some(r.checks.passed), ..row.with_metrics(&r.metrics, qaoa.l_prime) },
                Err(e) => row.failed(&e),
            });
        }
        Ok(rows)
    };
    run().unwrap_or_else(|e| {
        std::iter::once(BenchRow::instance(n, seed, "qaoa", None).failed(&e))
            .chain(cfg.qse.k_list.iter().map(|&k| BenchRow::instance(n, seed, "qse", Some(k)).failed(&e)))
            .collect()
    })
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = if v.len() > 1 { v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var.sqrt())
}

fn summarize(rows: &[BenchRow]) -> Vec<BenchRow> {
    let mut keys: Vec<(usize, String, Option<usize>)> =
        rows.iter().map(|r| (r.n, r.method.clone(), r.k)).collect();
    keys.sort();
    keys.dedup();
    let mut out = Vec::new();
    for (n, method, k) in keys {
        let ok: Vec<&BenchRow> =
            rows.iter().filter(|r| r.n == n && r.method == method && r.k == k && r.error.is_none()).collect();
        if ok.is_empty() {
            continue;
        }
        let col = |f: fn(&BenchRow) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
        let cols = [
            col(|r| r.energy),
            col(|r| r.approx_ratio),
            col(|r| r.fidelity),
            col(|r| r.mis_fidelity),
            col(|r| r.hamming_error),
            col(|r| r.parity_error),
        ];
        let stats: Vec<(f64, f64)> = cols.iter().map(|c| mean_std(c)).collect();
        for (kind, pick) in [("mean", 0usize), ("std", 1)] {
            let v = |i: usize| Some(if pick == 0 { stats[i].0 } else { stats[i].1 });
            out.push(BenchRow {
                kind: kind.into(),
                n,
                seed: None,
                method: method.clone(),
                k,
                l_prime: None,
                energy: v(0),
                approx_ratio: v(1),
                fidelity: v(2),
                mis_fidelity: v(3),
                hamming_error: v(4),
                parity_error: v(5),
                checks_passed: None,
                samples: ok.len(),
                error: None,
            });
        }
    }
    out
}

/// Instance rows sorted by `(N, seed, method, K)`, followed by mean and std
/// rows per `(N, method, K)` over the instances that succeeded.
pub fn bench_er(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.qse.validate()?;
    if cfg.graphs_per_size == 0 || cfg.sizes.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one size and one graph per size".into()));
    }
    if let Some(&n) = cfg.sizes.iter().find(|&&n| n == 0 || n > crate::hamiltonian::DEFAULT_MAX_QUBITS) {
        return Err(Error::TooLarge { what: "sweep size", got: n, limit: crate::hamiltonian::DEFAULT_MAX_QUBITS });
    }
    let mut tasks: Vec<(usize, u64)> = cfg
        .sizes
        .iter()
        .flat_map(|&n| (0..cfg.graphs_per_size as u64).map(move |i| (n, cfg.seed + i)))
        .collect();
    tasks.sort();
    tasks.dedup();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let per: Vec<Vec<BenchRow>> =
        pool.install(|| tasks.par_iter().map(|&(n, seed)| bench_instance(n, seed, cfg)).collect());
    let mut rows: Vec<BenchRow> = per.into_iter().flatten().collect();
    rows.sort_by(|a, b| (a.n, a.seed, &a.method, a.k).cmp(&(b.n, b.seed, &b.method, b.k)));
    let summary = summarize(&rows);
    rows.extend(summary);
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Reads rows written by [`write_bench_csv`], skipping `#` comment lines.
pub fn read_bench_csv<R: Read>(r: R) -> Result<Vec<BenchRow>> {
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut rows = Vec::new();
    for rec in rd.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossoverReport {
    pub k: usize,
    pub rho: f64,
    pub f_scale: f64,
    pub qaoa_points: Vec<(f64, f64)>,
    pub qse_points: Vec<(f64, f64)>,
    pub qaoa_fit: FermiDiracFit,
    pub qse_fit: FermiDiracFit,
    pub crossover: Crossover,
}

/// Mean fidelity per size for one method (`k = None` for QAOA).
pub fn fidelity_curve(rows: &[BenchRow], method: &str, k: Option<usize>) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.kind == "mean" && r.method == method && r.k == k)
        .filter_map(|r| r.fidelity.map(|f| (r.n as f64, f.min(1.0))))
        .filter(|&(_, f)| f > 0.0)
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    pts
}

/// Fits both fidelity curves of a sweep and scans for the crossover size.
pub fn crossover_from_rows(rows: &[BenchRow], k: usize, rho: f64, f_scale: f64, bound: u64) -> Result<CrossoverReport> {
    let qaoa_points = fidelity_curve(rows, "qaoa", None);
    let qse_points = fidelity_curve(rows, "qse", Some(k));
    if qaoa_points.len() < 3 || qse_points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need mean fidelities at 3 or more sizes for both methods (K = {k}), found {} and {}",
            qaoa_points.len(),
            qse_points.len()
        )));
    }
    let qaoa_fit = fit_fermi_dirac(&qaoa_points)?;
    let qse_fit = fit_fermi_dirac(&qse_points)?;
    let crossover = crossover_size_scaled(&qaoa_fit, &qse_fit, k, rho, f_scale, bound)?;
    Ok(CrossoverReport { k, rho, f_scale, qaoa_points, qse_points, qaoa_fit, qse_fit, crossover })
}
