//! Fault-tolerant gate accounting for kernel estimation, the cost-to-fidelity
//! decision rule, Fermi–Dirac fidelity fits and crossover-size extrapolation.
//!
//! Counts are leading-order formulas and are reported as reals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::stencil_coefficients;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ResourceCount {
    pub cnot: f64,
    pub t_gates: f64,
    pub toffoli: f64,
    pub ancillas: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasicGate {
    /// `exp(-iθ Z⊗Z/2)`.
    Rzz,
    /// Singly controlled `R_ZZ`.
    Crzz,
    /// `R_ZZ` with `n` controls, via a Toffoli ladder on zeroed ancillas.
    MultiControlledZz,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("rotation synthesis error must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// Clifford+T cost of one basic gate. `controls` is only read for
/// [`BasicGate::MultiControlledZz`] and must be at least 2 there.
pub fn basic_gate_cost(gate: BasicGate, epsilon: f64, controls: usize) -> Result<ResourceCount> {
    check_epsilon(epsilon)?;
    let rot = 8.0 * (1.0 / epsilon).log2();
    Ok(match gate {
        BasicGate::Rzz => ResourceCount { cnot: 2.0, t_gates: rot, ..Default::default() },
        BasicGate::Crzz => ResourceCount { cnot: 4.0, t_gates: rot, ..Default::default() },
        BasicGate::MultiControlledZz => {
            if controls < 2 {
                return Err(Error::InvalidArgument(format!("need at least 2 controls, got {controls}")));
            }
            let m = (controls - 1) as f64;
            ResourceCount { cnot: 12.0 * m + 4.0, t_gates: 14.0 * m, toffoli: 2.0 * m, ancillas: m }
        }
    })
}

/// Integer control count `⌈2 log₂ N⌉` addressing the `O(N²)` Pauli strings.
pub fn controls_for_graph(n: usize) -> usize {
    (2.0 * (n.max(1) as f64).log2()).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Hadamard test per Pauli string of `H_C`.
    Pauli,
    /// Real-time evolution with a finite-difference stencil.
    Rte,
    /// Block encoding by a linear combination of unitaries.
    Lcu,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Pauli, Method::Rte, Method::Lcu];

    pub fn name(self) -> &'static str {
        match self {
            Method::Pauli => "pauli",
            Method::Rte => "rte",
            Method::Lcu => "lcu",
        }
    }
}

/// Inputs of [`method_cost`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostParams {
    pub n: usize,
    pub rho: f64,
    pub l_prime: usize,
    pub epsilon: f64,
    /// Stencil order for the real-time method.
    pub p: usize,
    /// Estimate of `<H_C²>` for the LCU method.
    pub h2: f64,
}

/// Gates for evaluating one kernel expectation value with `method`.
pub fn method_cost(method: Method, c: &CostParams) -> Result<ResourceCount> {
    if c.n < 2 {
        return Err(Error::InvalidArgument(format!("need N >= 2, got {}", c.n)));
    }
    if !(c.rho > 0.0 && c.rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("density must lie in (0, 1], got {}", c.rho)));
    }
    check_epsilon(c.epsilon)?;
    let n = c.n as f64;
    let l = c.l_prime as f64;
    let log_eps = (1.0 / c.epsilon).log2();
    Ok(match method {
        Method::Pauli => {
            let terms = (c.rho.sqrt() * n).powi(5);
            ResourceCount { cnot: terms * (l + 2.0), t_gates: 4.0 * terms * (l + 1.0) * log_eps, toffoli: 0.0, ancillas: 1.0 }
        }
        Method::Rte => {
            let st = stencil_coefficients(c.p)?;
            let pc = c.p as f64 * st.c_of_p();
            let edges = c.rho * n * n;
            ResourceCount {
                cnot: edges * (l + 2.0) * pc,
                t_gates: 4.0 * edges * (l + 1.0) * log_eps * pc,
                toffoli: 0.0,
                ancillas: 1.0,
            }
        }
        Method::Lcu => {
            if !(c.h2 > 0.0) {
                return Err(Error::InvalidArgument(format!("<H_C^2> estimate must be positive, got {}", c.h2)));
            }
            let big = c.rho.powi(3) * n.powi(6);
            let lg = 4.0 * n.log2();
            ResourceCount {
                cnot: big * (l + 4.0) / (4.0 * c.h2),
                t_gates: big * l * log_eps / c.h2,
                toffoli: lg,
                ancillas: lg,
            }
        }
    })
}

/// Fidelity-ratio threshold `4(K-1)(1 + 1/L')·f_scale` above which subspace
/// expansion has the better cost-to-fidelity ratio.
pub fn favourability_threshold(k: usize, l_prime: usize, f_scale: f64) -> Result<f64> {
    if k < 2 || l_prime == 0 {
        return Err(Error::InvalidArgument(format!("need K >= 2 and L' >= 1, got K = {k}, L' = {l_prime}")));
    }
    Ok(4.0 * (k - 1) as f64 * (l_prime + 1) as f64 * f_scale / l_prime as f64)
}

/// `f_qse / f_qaoa >= threshold`; the boundary counts as favourable.
pub fn qse_favourable(f_qse: f64, f_qaoa: f64, k: usize, l_prime: usize, f_scale: f64) -> Result<bool> {
    for f in [f_qse, f_qaoa] {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidArgument(format!("fidelities must lie in (0, 1], got {f}")));
        }
    }
    Ok(f_qse / f_qaoa >= favourability_threshold(k, l_prime, f_scale)?)
}

/// `F(N) = beta / (1 + exp(N·alpha))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermiDiracFit {
    pub alpha: f64,
    pub beta: f64,
    /// Root-mean-square deviation on the fitted points.
    pub rms_residual: f64,
    /// Set when the fitted curve is nearly flat over the data range.
    pub low_confidence: bool,
}

impl FermiDiracFit {
    pub fn eval(&self, n: f64) -> f64 {
        self.ln_eval(n).exp()
    }

    /// `ln F(N)`, stable for large `N·alpha`.
    pub fn ln_eval(&self, n: f64) -> f64 {
        self.beta.ln() - softplus(n * self.alpha)
    }
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

const ALPHA_MAX: f64 = 5.0;
const ALPHA_GRID: usize = 5000;
const BETA_MAX: f64 = 2.0;

/// Least-squares fit of `beta/(1 + exp(N alpha))` with `alpha ∈ [0, 5]`.
///
/// For fixed `alpha` the optimal `beta` is closed-form; it is clamped so the
/// curve stays in `(0, 1]` on the data range and `beta <= 2`. The profile
/// residual is scanned on a grid and refined by golden-section search.
pub fn fit_fermi_dirac(points: &[(f64, f64)]) -> Result<FermiDiracFit> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(n, f)| !n.is_finite() || !(f > 0.0 && f <= 1.0)) {
        return Err(Error::InvalidArgument("fidelities must lie in (0, 1] and sizes be finite".into()));
    }
    let n_min = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let n_max = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if n_max - n_min <= 0.0 {
        return Err(Error::InvalidArgument("all points share the same size".into()));
    }

    let profile = |alpha: f64| -> (f64, f64) {
        let u: Vec<f64> = points.iter().map(|&(n, _)| 1.0 / (1.0 + (n * alpha).exp())).collect();
        let suu: f64 = u.iter().map(|x| x * x).sum();
        let syu: f64 = u.iter().zip(points).map(|(x, p)| x * p.1).sum();
        let cap = BETA_MAX.min(1.0 + (n_min * alpha).exp());
        let beta = if suu > 0.0 { (syu / suu).clamp(f64::MIN_POSITIVE, cap) } else { f64::MIN_POSITIVE };
        let sse = u.iter().zip(points).map(|(x, p)| (p.1 - beta * x).powi(2)).sum();
        (sse, beta)
    };

    let step = ALPHA_MAX / ALPHA_GRID as f64;
    let mut best = 0;
    let mut best_sse = f64::INFINITY;
    for i in 0..=ALPHA_GRID {
        let (sse, _) = profile(i as f64 * step);
        if sse < best_sse {
            best_sse = sse;
            best = i;
        }
    }
    let mut lo = (best as f64 - 1.0).max(0.0) * step;
    let mut hi = ((best + 1) as f64 * step).min(ALPHA_MAX);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - phi * (hi - lo);
    let mut b = lo + phi * (hi - lo);
    let (mut fa, mut fb) = (profile(a).0, profile(b).0);
    for _ in 0..200 {
        if hi - lo < 1e-14 {
            break;
        }
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = profile(a).0;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = profile(b).0;
        }
    }
    let mut alpha = 0.5 * (lo + hi);
    let (mut sse, mut beta) = profile(alpha);
    let grid_alpha = best as f64 * step;
    let (grid_sse, grid_beta) = profile(grid_alpha);
    if grid_sse < sse {
        alpha = grid_alpha;
        sse = grid_sse;
        beta = grid_beta;
    }
    let fit = FermiDiracFit { alpha, beta, rms_residual: (sse / points.len() as f64).sqrt(), low_confidence: false };
    let spread = fit.eval(n_min) - fit.eval(n_max);
    Ok(FermiDiracFit { low_confidence: spread < 1e-2 || alpha >= ALPHA_MAX - step, ..fit })
}

pub const DEFAULT_CROSSOVER_BOUND: u64 = 10_000;

/// Outcome of [`crossover_size`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossover {
    /// Smallest `N` satisfying the inequality, if any within the bound.
    pub n_star: Option<u64>,
    pub bound: u64,
}

/// Smallest integer `N >= 2` with `F_qse(N)/F_qaoa(N) > 2K(√ρ N)³`, the
/// fidelity-ratio condition for Pauli-string kernel estimation.
pub fn crossover_size(fit_qaoa: &FermiDiracFit, fit_qse: &FermiDiracFit, k: usize, rho: f64, bound: u64) -> Result<Crossover> {
    crossover_size_scaled(fit_qaoa, fit_qse, k, rho, 1.0, bound)
}

/// [`crossover_size`] with the right-hand side multiplied by `f_scale`.
pub fn crossover_size_scaled(
    fit_qaoa: &FermiDiracFit,
    fit_qse: &FermiDiracFit,
    k: usize,
    rho: f64,
    f_scale: f64,
    bound: u64,
) -> Result<Crossover> {
    if k < 2 || !(rho > 0.0 && rho <= 1.0) || !(f_scale > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need K >= 2, rho in (0, 1] and f_scale > 0, got K = {k}, rho = {rho}, f_scale = {f_scale}"
        )));
    }
    for f in [fit_qaoa, fit_qse] {
        if !(f.beta > 0.0) || !f.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid fit {f:?}")));
        }
    }
    let ln_rhs0 = (2.0 * k as f64 * f_scale).ln();
    let n_star = (2..=bound).find(|&n| {
        let nf = n as f64;
        let lhs = fit_qse.ln_eval(nf) - fit_qaoa.ln_eval(nf);
        lhs > ln_rhs0 + 3.0 * (rho.sqrt() * nf).ln()
    });
    Ok(Crossover { n_star, bound })
}
