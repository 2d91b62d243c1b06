//! Alternating-operator ansatz on top of `|+>^n`, optimized one layer at a time.
//!
//! Each layer's `(gamma, beta)` pair is searched in `[0, π]²` by projected BFGS
//! with central-difference gradients from several seeded starting points; the
//! best pair is frozen before the next layer is opened. Any local optimizer that
//! reaches comparable costs is interchangeable here.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::DiagonalOperator;
use crate::optim::{minimize, FiniteDifference, LocalConfig};
use crate::scalar::Real;
use crate::simulator::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub layers: usize,
    pub starts_per_layer: usize,
    /// Cost decrease below which a local run stops.
    pub tolerance: f64,
    /// Cost evaluations per local run (finite-difference probes included).
    pub max_evals: usize,
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { layers: 20, starts_per_layer: 8, tolerance: 1e-8, max_evals: 200, fd_step: 1e-6, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct QaoaResult<T: Real = f64> {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Cost after optimizing layers `1..=l`, at index `l - 1`.
    pub cost_by_depth: Vec<f64>,
    pub l_prime: usize,
    /// Ansatz state truncated at `l_prime` layers.
    pub state: StateVector<T>,
    pub evaluations: usize,
}

impl<T: Real> QaoaResult<T> {
    pub fn energy(&self) -> f64 {
        self.cost_by_depth.get(self.l_prime.wrapping_sub(1)).copied().unwrap_or(f64::NAN)
    }

    pub fn retained_angles(&self) -> (&[f64], &[f64]) {
        (&self.gammas[..self.l_prime], &self.betas[..self.l_prime])
    }
}

fn apply_layer<T: Real>(s: &mut StateVector<T>, d: &DiagonalOperator, gamma: f64, beta: f64) -> Result<()> {
    s.apply_cost_phase(d, T::lit(gamma))?;
    s.apply_mixer(T::lit(beta));
    Ok(())
}

/// `U(γ, β)|+>^n` with layers applied in order, cost phase before mixer.
pub fn qaoa_state<T: Real>(d: &DiagonalOperator, gammas: &[f64], betas: &[f64]) -> Result<StateVector<T>> {
    if gammas.len() != betas.len() {
        return Err(Error::Dimension { expected: gammas.len(), got: betas.len() });
    }
    let mut s = StateVector::plus(d.n());
    for (&g, &b) in gammas.iter().zip(betas) {
        apply_layer(&mut s, d, g, b)?;
    }
    Ok(s)
}

pub fn cost<T: Real>(d: &DiagonalOperator, gammas: &[f64], betas: &[f64]) -> Result<f64> {
    Ok(qaoa_state::<T>(d, gammas, betas)?.expect_diagonal(d)?.as_f64())
}

/// First index of the minimum cost, as a 1-based depth.
pub fn select_depth(cost_by_depth: &[f64]) -> usize {
    let mut best = 0;
    for (i, &c) in cost_by_depth.iter().enumerate() {
        if c < cost_by_depth[best] {
            best = i;
        }
    }
    if cost_by_depth.is_empty() {
        0
    } else {
        best + 1
    }
}

fn layer_seed(seed: u64, layer: usize) -> u64 {
    seed ^ (layer as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn optimize_layerwise<T: Real>(d: &DiagonalOperator, cfg: &OptimizerConfig) -> Result<QaoaResult<T>> {
    if cfg.layers == 0 {
        return Err(Error::InvalidArgument("QAOA depth must be at least 1".into()));
    }
    if cfg.starts_per_layer == 0 {
        return Err(Error::InvalidArgument("need at least one start per layer".into()));
    }
    let bounds = [(0.0, PI), (0.0, PI)];
    let local = LocalConfig { tolerance: cfg.tolerance, max_evals: cfg.max_evals, gtol: 1e-10 };

    let mut state = StateVector::<T>::plus(d.n());
    let mut previous = state.expect_diagonal(d)?.as_f64();
    let mut gammas = Vec::with_capacity(cfg.layers);
    let mut betas = Vec::with_capacity(cfg.layers);
    let mut cost_by_depth = Vec::with_capacity(cfg.layers);
    let mut evaluations = 0;

    for layer in 0..cfg.layers {
        let base = state.clone();
        let mut objective = FiniteDifference {
            f: |x: &[f64]| {
                let mut s = base.clone();
                match apply_layer(&mut s, d, x[0], x[1]).and_then(|_| s.expect_diagonal(d)) {
                    Ok(e) => e.as_f64(),
                    Err(_) => f64::NAN,
                }
            },
            step: cfg.fd_step,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(layer_seed(cfg.seed, layer));
        let mut best: Option<(f64, [f64; 2])> = None;
        for start in 0..cfg.starts_per_layer {
            let x0 = [rng.random::<f64>() * PI, rng.random::<f64>() * PI];
            let m = minimize(&mut objective, &x0, Some(&bounds), &local);
            evaluations += m.evals;
            if !m.value.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite QAOA cost at layer {} start {start}",
                    layer + 1
                )));
            }
            if best.is_none_or(|(c, _)| m.value < c) {
                best = Some((m.value, [m.x[0], m.x[1]]));
            }
        }
        let (best_cost, mut angles) = best.expect("at least one start");
        // The identity layer is always available; never accept a worse cost.
        if best_cost > previous {
            angles = [0.0, 0.0];
        }
        apply_layer(&mut state, d, angles[0], angles[1])?;
        let c = state.expect_diagonal(d)?.as_f64();
        gammas.push(angles[0]);
        betas.push(angles[1]);
        cost_by_depth.push(c);
        previous = c;
    }

    let l_prime = select_depth(&cost_by_depth);
    let state = qaoa_state(d, &gammas[..l_prime], &betas[..l_prime])?;
    Ok(QaoaResult { gammas, betas, cost_by_depth, l_prime, state, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::hamiltonian::{cost_diagonal, ground_manifold};
    use num_complex::Complex;

    #[test]
    fn trivial_depths_give_plus_state() {
        let d = cost_diagonal(&Graph::cube()).unwrap();
        let plus = StateVector::<f64>::plus(8);
        assert_eq!(qaoa_state::<f64>(&d, &[], &[]).unwrap(), plus);
        let s = qaoa_state::<f64>(&d, &[0.0; 3], &[0.0; 3]).unwrap();
        assert!(s.amplitudes().iter().zip(plus.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!(qaoa_state::<f64>(&d, &[0.1], &[]).is_err());
    }

    #[test]
    fn single_edge_one_layer_matches_matrix_product() {
        // Oracle: explicit 4x4 matrices for e^{-iγH} and e^{iβX}⊗e^{iβX}.
        let (gamma, beta) = (std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_4);
        let energies = [0.0, -1.0, -1.0, -1.0];
        let i = Complex::new(0.0, 1.0);
        let rx = [[Complex::new(beta.cos(), 0.0), i * beta.sin()], [i * beta.sin(), Complex::new(beta.cos(), 0.0)]];
        let mut psi = [Complex::new(0.5, 0.0); 4];
        for (x, a) in psi.iter_mut().enumerate() {
            *a *= Complex::new(0.0, -gamma * energies[x]).exp();
        }
        let mut out = [Complex::new(0.0, 0.0); 4];
        for (row, o) in out.iter_mut().enumerate() {
            for (col, p) in psi.iter().enumerate() {
                *o += rx[row & 1][col & 1] * rx[row >> 1][col >> 1] * p;
            }
        }
        let d = cost_diagonal(&Graph::single_edge()).unwrap();
        let s = qaoa_state::<f64>(&d, &[gamma], &[beta]).unwrap();
        for (a, b) in s.amplitudes().iter().zip(out) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn cost_examples() {
        let d = cost_diagonal(&Graph::single_edge()).unwrap();
        assert!((cost::<f64>(&d, &[], &[]).unwrap() + 0.75).abs() < 1e-15);
        for (g, b) in [(0.3, 0.4), (1.0, 2.0), (3.0, 0.1)] {
            assert!(cost::<f64>(&d, &[g], &[b]).unwrap() >= -1.0 - 1e-12);
        }
    }

    #[test]
    fn one_layer_matches_grid_optimum() {
        let d = cost_diagonal(&Graph::single_edge()).unwrap();
        let grid = 400;
        let mut best = f64::INFINITY;
        for a in 0..grid {
            for b in 0..grid {
                let (g, bt) = (PI * a as f64 / grid as f64, PI * b as f64 / grid as f64);
                best = best.min(cost::<f64>(&d, &[g], &[bt]).unwrap());
            }
        }
        let cfg = OptimizerConfig { layers: 1, ..Default::default() };
        let r = optimize_layerwise::<f64>(&d, &cfg).unwrap();
        assert!((r.cost_by_depth[0] - best).abs() < 1e-3, "{} vs grid {best}", r.cost_by_depth[0]);
        assert!(r.cost_by_depth[0] < -0.75);
    }

    #[test]
    fn select_depth_tie_breaking() {
        assert_eq!(select_depth(&[-1.0, -2.0, -3.0]), 3);
        assert_eq!(select_depth(&[-1.0, -1.0, -1.0]), 1);
        assert_eq!(select_depth(&[-1.0, -2.0, -2.0]), 2);
        assert_eq!(select_depth(&[]), 0);
    }

    #[test]
    fn layerwise_invariants_on_cube() {
        let d = cost_diagonal(&Graph::cube()).unwrap();
        let cfg = OptimizerConfig { layers: 6, ..Default::default() };
        let r = optimize_layerwise::<f64>(&d, &cfg).unwrap();
        let emin = d.min() as f64;
        for w in r.cost_by_depth.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
        assert!(r.cost_by_depth.iter().all(|&c| c >= emin - 1e-12 && c <= 0.0));
        assert_eq!(r.l_prime, select_depth(&r.cost_by_depth));
        let (g, b) = r.retained_angles();
        let resim = qaoa_state::<f64>(&d, g, b).unwrap();
        assert!(resim.amplitudes().iter().zip(r.state.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-10));
        assert!((r.state.expect_diagonal(&d).unwrap() - r.energy()).abs() < 1e-10);

        let again = optimize_layerwise::<f64>(&d, &cfg).unwrap();
        assert_eq!(again.gammas, r.gammas);
        assert_eq!(again.betas, r.betas);

        // Deeper runs share the prefix, so the final minimum cannot rise.
        let deeper = optimize_layerwise::<f64>(&d, &OptimizerConfig { layers: 8, ..cfg }).unwrap();
        assert!(deeper.energy() <= r.energy() + 1e-12);
        let (_, ground) = ground_manifold(&d);
        assert!(r.state.projector_fidelity(&ground).unwrap() > 2.0 / 256.0);
    }

    #[test]
    fn rejects_bad_config() {
        let d = cost_diagonal(&Graph::single_edge()).unwrap();
        let cfg = OptimizerConfig { layers: 0, ..Default::default() };
        assert!(optimize_layerwise::<f64>(&d, &cfg).is_err());
    }
}
