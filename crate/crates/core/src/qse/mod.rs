//! Subspace expansion over real-time-evolved copies of a reference state.
//!
//! Trial states are `|χ_k> = exp(-i t_k H_C)|Φ0>` on an equally spaced time grid.
//! Their overlap and Hamiltonian kernels define a generalized eigenproblem
//! `H f = E S f` that is solved by overlap truncation or by penalized
//! deflation. The module also carries the kernels-free Gaussian and
//! imaginary-time filters and the finite-difference extraction of Hamiltonian
//! kernels from real-time samples.

mod filters;
mod kernels;
mod solve;
mod state;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

pub use filters::{
    apply_filter, filter_success_probability, gaussian_filter_weights, ite_weights, rte_extract,
    rte_extract_kernels, FilterProbability, FilterWeights, RteEstimate,
};
pub use kernels::{build_kernels, build_kernels_full, Kernels, LagSequence};
pub use solve::{solve_deflation, solve_truncated, DeflationConfig, SubspaceSolution, DEFAULT_EPSILON_CUT};
pub use state::{assemble_state, evaluate_metrics, reencode_probability, superpose, Assembled, Metrics};

/// Generator times `t_k = -π(1 - 1/K) + 2πk/K`, `k = 0..K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn k(&self) -> usize {
        self.times.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Spacing `2π/K` between neighbouring times.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.k() as f64
    }

    /// Time difference `t_{k+m} - t_k` for lag `m`.
    pub fn lag_time(&self, m: i64) -> f64 {
        m as f64 * self.spacing()
    }
}

pub fn generator_times(k: usize) -> Result<TimeGrid> {
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one generator state".into()));
    }
    let kf = k as f64;
    let start = -PI * (1.0 - 1.0 / kf);
    let times = (0..k).map(|j| start + 2.0 * PI * j as f64 / kf).collect();
    Ok(TimeGrid { times })
}
