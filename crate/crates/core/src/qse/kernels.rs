use num_complex::Complex;
use rayon::prelude::*;

use super::TimeGrid;
use crate::error::{Error, Result};
use crate::hamiltonian::DiagonalOperator;
use crate::linalg::CMatrix;
use crate::scalar::{czero, Real};
use crate::simulator::{inner_raw, KernelMode, ShotModel, StateVector};

/// Kernel generators on an equally spaced grid, indexed by lag `m + K - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagSequence<T: Real = f64> {
    /// `g(τ_m) = <Φ0|exp(-iτ_m H)|Φ0>`.
    pub overlap: Vec<Complex<T>>,
    /// `h(τ_m) = <Φ0|H exp(-iτ_m H)|Φ0>`.
    pub hamiltonian: Vec<Complex<T>>,
}

impl<T: Real> LagSequence<T> {
    pub fn k(&self) -> usize {
        self.overlap.len().div_ceil(2)
    }

    fn at(v: &[Complex<T>], k: usize, m: i64) -> Complex<T> {
        v[(m + k as i64 - 1) as usize]
    }

    fn toeplitz(&self, v: &[Complex<T>]) -> CMatrix<T> {
        let k = self.k();
        CMatrix::from_fn(k, |i, j| Self::at(v, k, j as i64 - i as i64))
    }
}

/// Hamiltonian and overlap kernels of `K` trial states.
#[derive(Debug, Clone)]
pub struct Kernels<T: Real = f64> {
    pub h: CMatrix<T>,
    pub s: CMatrix<T>,
    /// Present when the kernels were assembled from their `2K - 1` distinct lags.
    pub lags: Option<LagSequence<T>>,
}

impl<T: Real> Kernels<T> {
    pub fn from_matrices(h: CMatrix<T>, s: CMatrix<T>) -> Result<Self> {
        if h.dim() != s.dim() {
            return Err(Error::Dimension { expected: s.dim(), got: h.dim() });
        }
        if s.dim() == 0 {
            return Err(Error::InvalidArgument("empty kernels".into()));
        }
        Ok(Self { h, s, lags: None })
    }

    pub fn from_lags(lags: LagSequence<T>) -> Result<Self> {
        if lags.overlap.len() != lags.hamiltonian.len() || lags.overlap.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "lag sequences must share an odd length, got {} and {}",
                lags.overlap.len(),
                lags.hamiltonian.len()
            )));
        }
        let s = lags.toeplitz(&lags.overlap);
        let h = lags.toeplitz(&lags.hamiltonian);
        Ok(Self { h, s, lags: Some(lags) })
    }

    pub fn k(&self) -> usize {
        self.s.dim()
    }
}

/// `(<a|b>, <a|H|b>)` for raw amplitudes.
fn pair<T: Real>(d: &DiagonalOperator, a: &[Complex<T>], b: &[Complex<T>]) -> (Complex<T>, Complex<T>) {
    let mut s = czero();
    let mut h = czero();
    for ((x, y), &e) in a.iter().zip(b).zip(d.values()) {
        let p = x.conj() * y;
        s = s + p;
        h = h + p * T::from_i32(e).unwrap();
    }
    (s, h)
}

/// Modulus bound on `<a|H|b>` for normalized states.
fn spectral_bound(d: &DiagonalOperator) -> f64 {
    (d.min().unsigned_abs().max(d.max().unsigned_abs()) as f64).max(1.0)
}

fn check(phi0: &StateVector<impl Real>, d: &DiagonalOperator) -> Result<()> {
    if phi0.dim() != d.dim() {
        return Err(Error::Dimension { expected: d.dim(), got: phi0.dim() });
    }
    Ok(())
}

/// Kernels on an equally spaced grid from the `2K - 1` distinct lags.
///
/// In sampled mode every lag of both generators is estimated independently
/// (the zero-lag overlap is fixed at 1 by normalization), then each sequence
/// is Hermitized as `g(m) <- (g(m) + conj(g(-m)))/2`.
pub fn build_kernels<T: Real>(
    phi0: &StateVector<T>,
    d: &DiagonalOperator,
    grid: &TimeGrid,
    model: &ShotModel,
) -> Result<Kernels<T>> {
    check(phi0, d)?;
    let k = grid.k() as i64;
    let exact: Vec<(Complex<T>, Complex<T>)> = (-(k - 1)..k)
        .into_par_iter()
        .map(|m| {
            let evolved = phi0.time_evolve(d, T::lit(grid.lag_time(m)))?;
            let (mut s, h) = pair(d, phi0.amplitudes(), evolved.amplitudes());
            if m == 0 {
                s = Complex::new(T::one(), T::zero());
            }
            Ok((s, h))
        })
        .collect::<Result<_>>()?;
    let (mut overlap, mut hamiltonian): (Vec<_>, Vec<_>) = exact.into_iter().unzip();

    if model.mode == KernelMode::Sampled {
        let mut sampler = model.sampler()?;
        let scale = T::lit(spectral_bound(d));
        let zero_lag = (k - 1) as usize;
        for i in 0..overlap.len() {
            if i != zero_lag {
                overlap[i] = sampler.estimate(overlap[i])?;
            }
            hamiltonian[i] = sampler.estimate_scaled(hamiltonian[i], scale)?;
        }
        hermitize_lags(&mut overlap);
        hermitize_lags(&mut hamiltonian);
    }
    Kernels::from_lags(LagSequence { overlap, hamiltonian })
}

fn hermitize_lags<T: Real>(v: &mut [Complex<T>]) {
    let n = v.len();
    let half = T::lit(0.5);
    for i in 0..=n / 2 {
        let j = n - 1 - i;
        let avg = (v[i] + v[j].conj()) * half;
        v[i] = avg;
        v[j] = avg.conj();
    }
}

/// Kernels from all `K²` trial-state pairs on an arbitrary time list.
///
/// Sampled mode estimates the upper triangle (the overlap diagonal is fixed
/// at 1) and mirrors it.
pub fn build_kernels_full<T: Real>(
    phi0: &StateVector<T>,
    d: &DiagonalOperator,
    times: &[f64],
    model: &ShotModel,
) -> Result<Kernels<T>> {
    check(phi0, d)?;
    if times.is_empty() {
        return Err(Error::InvalidArgument("need at least one generator time".into()));
    }
    let chis: Vec<StateVector<T>> =
        times.par_iter().map(|&t| phi0.time_evolve(d, T::lit(t))).collect::<Result<_>>()?;
    let k = times.len();
    let mut s = CMatrix::zeros(k);
    let mut h = CMatrix::zeros(k);
    let mut sampler = match model.mode {
        KernelMode::Sampled => Some(model.sampler()?),
        KernelMode::Exact => None,
    };
    let scale = T::lit(spectral_bound(d));
    for i in 0..k {
        for j in i..k {
            let (mut sij, mut hij) = pair(d, chis[i].amplitudes(), chis[j].amplitudes());
            if i == j {
                sij = Complex::new(T::one(), T::zero());
                hij = Complex::new(hij.re, T::zero());
            }
            if let Some(sm) = sampler.as_mut() {
                if i != j {
                    sij = sm.estimate(sij)?;
                }
                hij = sm.estimate_scaled(hij, scale)?;
                if i == j {
                    hij = Complex::new(hij.re, T::zero());
                }
            }
            s[(i, j)] = sij;
            s[(j, i)] = sij.conj();
            h[(i, j)] = hij;
            h[(j, i)] = hij.conj();
        }
    }
    Kernels::from_matrices(h, s)
}

/// `<Φ0|exp(-iτH)|Φ0>` directly from amplitudes, for callers outside the grid.
pub(crate) fn overlap_at<T: Real>(phi0: &StateVector<T>, d: &DiagonalOperator, tau: f64) -> Result<Complex<T>> {
    let evolved = phi0.time_evolve(d, T::lit(tau))?;
    Ok(inner_raw(phi0.amplitudes(), evolved.amplitudes()))
}
