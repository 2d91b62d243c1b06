use num_complex::Complex;
use serde::Serialize;

use super::{Kernels, TimeGrid};
use crate::error::{Error, Result};
use crate::graph::MisOracle;
use crate::hamiltonian::{ground_manifold, DiagonalOperator};
use crate::scalar::{czero, Real};
use crate::simulator::{inner_raw, StateVector};

/// A normalized superposition together with its norm² before normalization.
#[derive(Debug, Clone)]
pub struct Assembled<T: Real = f64> {
    pub state: StateVector<T>,
    pub norm_sqr: T,
}

/// `Σ_k w_k exp(-i t_k (H - shift))|Φ0>`, normalized.
pub fn superpose<T: Real>(
    phi0: &StateVector<T>,
    d: &DiagonalOperator,
    times: &[f64],
    weights: &[Complex<T>],
    shift: f64,
) -> Result<Assembled<T>> {
    if times.len() != weights.len() {
        return Err(Error::Dimension { expected: times.len(), got: weights.len() });
    }
    let mut acc = vec![czero::<T>(); phi0.dim()];
    for (&t, &w) in times.iter().zip(weights) {
        let mut chi = phi0.clone();
        chi.apply_shifted_phase(d, T::lit(t), T::lit(shift))?;
        for (a, c) in acc.iter_mut().zip(chi.amplitudes()) {
            *a = *a + *c * w;
        }
    }
    let norm_sqr = inner_raw(&acc, &acc).re;
    if !(norm_sqr > T::zero()) {
        return Err(Error::InvalidArgument("weights produce the zero vector".into()));
    }
    Ok(Assembled { state: StateVector::from_amplitudes(phi0.n(), acc)?, norm_sqr })
}

/// `Σ_k f_k |χ_k>` on the generator grid; `norm_sqr` equals `f† S f`.
pub fn assemble_state<T: Real>(
    phi0: &StateVector<T>,
    d: &DiagonalOperator,
    grid: &TimeGrid,
    f: &[Complex<T>],
) -> Result<Assembled<T>> {
    superpose(phi0, d, grid.times(), f, 0.0)
}

/// Quality of a candidate state against the exact MIS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    /// `<H_C> / E_min`, reported as 0 when the energy is positive.
    pub approx_ratio: f64,
    /// Probability on the ground manifold of `H_C`.
    pub fidelity: f64,
    /// Probability on the maximum independent sets alone.
    pub mis_fidelity: f64,
    /// `|<n̂> - MIS size|`.
    pub hamming_error: f64,
    /// `|<(-1)^n̂> - (-1)^{MIS size}|`.
    pub parity_error: f64,
    pub energy: f64,
}

pub fn evaluate_metrics<T: Real>(s: &StateVector<T>, d: &DiagonalOperator, oracle: &MisOracle) -> Result<Metrics> {
    let energy = s.expect_diagonal(d)?.as_f64();
    let emin = -(oracle.size as f64);
    let approx_ratio = if energy > 0.0 || emin == 0.0 { 0.0 } else { energy / emin };
    let (_, ground) = ground_manifold(d);
    let fidelity = s.projector_fidelity(&ground)?.as_f64().clamp(0.0, 1.0);
    let (hamming, parity) = s.symmetry_expectations();
    let target_parity = if oracle.size % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Metrics {
        approx_ratio,
        fidelity,
        mis_fidelity: s.projector_fidelity(&oracle.solutions)?.as_f64().clamp(0.0, 1.0),
        hamming_error: (hamming.as_f64() - oracle.size as f64).abs(),
        parity_error: (parity.as_f64() - target_parity).abs(),
        energy,
    })
}

/// Success probability `f†Sf / (Σ_k |f_k|)²` of re-encoding the combination
/// with a linear-combination-of-unitaries circuit.
pub fn reencode_probability<T: Real>(f: &[Complex<T>], k: &Kernels<T>) -> Result<T> {
    if f.len() != k.k() {
        return Err(Error::Dimension { expected: k.k(), got: f.len() });
    }
    let l1: T = f.iter().map(|z| z.norm()).sum();
    if !(l1 > T::zero()) {
        return Err(Error::InvalidArgument("zero weight vector".into()));
    }
    let num = inner_raw(f, &k.s.mul_vec(f)).re;
    Ok(num / (l1 * l1))
}
