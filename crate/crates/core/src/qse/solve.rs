use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Kernels;
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, CMatrix};
use crate::optim::{minimize, Analytic, LocalConfig};
use crate::scalar::{czero, Real};
use crate::simulator::inner_raw;

pub const DEFAULT_EPSILON_CUT: f64 = 1e-3;

/// Eigenpairs of `H f = E S f` expressed in the trial-state basis.
#[derive(Debug, Clone)]
pub struct SubspaceSolution<T: Real = f64> {
    pub energies: Vec<T>,
    /// `weights[j]` holds `f_j`, normalized to `f_j† S f_j = 1`.
    pub weights: Vec<Vec<Complex<T>>>,
    pub retained: usize,
    pub epsilon_cut: f64,
    /// Overlap eigenvalues, ascending, before truncation.
    pub overlap_eigenvalues: Vec<T>,
    /// `‖X†(H f_j - E_j S f_j)‖` with `X` the whitened retained basis
    /// (truncation), or the unprojected residual (deflation).
    pub residuals: Vec<T>,
    /// False when an iterative solve stopped on its budget.
    pub converged: bool,
}

impl<T: Real> SubspaceSolution<T> {
    pub fn ground_energy(&self) -> T {
        self.energies[0]
    }

    pub fn ground_weights(&self) -> &[Complex<T>] {
        &self.weights[0]
    }
}

fn combine<T: Real>(cols: &[Vec<Complex<T>>], a: &[Complex<T>]) -> Vec<Complex<T>> {
    let k = cols[0].len();
    (0..k).map(|i| cols.iter().zip(a).fold(czero(), |acc, (c, &ai)| acc + c[i] * ai)).collect()
}

/// Truncated solve: drop overlap eigenvectors below `epsilon_cut`, whiten the
/// rest with `X = P Σ^{-1/2}`, diagonalize `X† H X` and map back by `f = X a`.
pub fn solve_truncated<T: Real>(k: &Kernels<T>, epsilon_cut: f64) -> Result<SubspaceSolution<T>> {
    if !(epsilon_cut > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon_cut must be positive, got {epsilon_cut}")));
    }
    let dim = k.k();
    let s_eig = eig_hermitian(&k.s)?;
    let cut = T::lit(epsilon_cut);
    let basis: Vec<Vec<Complex<T>>> = (0..dim)
        .filter(|&j| s_eig.values[j] >= cut)
        .map(|j| {
            let inv_sqrt = T::one() / s_eig.values[j].sqrt();
            s_eig.vectors.column(j).into_iter().map(|z| z * inv_sqrt).collect()
        })
        .collect();
    let r = basis.len();
    if r == 0 {
        return Err(Error::EmptySubspace { epsilon_cut });
    }
    let hx: Vec<Vec<Complex<T>>> = basis.iter().map(|x| k.h.mul_vec(x)).collect();
    let projected = CMatrix::from_fn(r, |a, b| inner_raw(&basis[a], &hx[b]));
    let p_eig = eig_hermitian(&projected)?;

    let mut weights = Vec::with_capacity(r);
    let mut residuals = Vec::with_capacity(r);
    for j in 0..r {
        let f = combine(&basis, &p_eig.vectors.column(j));
        let e = p_eig.values[j];
        let hf = k.h.mul_vec(&f);
        let sf = k.s.mul_vec(&f);
        let diff: Vec<Complex<T>> = hf.iter().zip(&sf).map(|(h, s)| h - s * e).collect();
        let res = basis.iter().map(|x| inner_raw(x, &diff).norm_sqr()).sum::<T>().sqrt();
        residuals.push(res);
        weights.push(f);
    }
    Ok(SubspaceSolution {
        energies: p_eig.values,
        weights,
        retained: r,
        epsilon_cut,
        overlap_eigenvalues: s_eig.values,
        residuals,
        converged: true,
    })
}

/// Settings for [`solve_deflation`].
#[derive(Debug, Clone, PartialEq)]
pub struct DeflationConfig {
    /// Normalization penalty; defaults to ten times the spectral range of the H kernel.
    pub mu0: Option<f64>,
    /// Orthogonality penalties, one per earlier state; default to `mu0`.
    pub lambdas: Option<Vec<f64>>,
    /// Random starts on top of the `K` trial-basis starts.
    pub random_starts: usize,
    pub max_evals: usize,
    pub seed: u64,
}

impl Default for DeflationConfig {
    fn default() -> Self {
        Self { mu0: None, lambdas: None, random_starts: 4, max_evals: 4000, seed: 0 }
    }
}

type Cx = Complex<f64>;

fn to_f64<T: Real>(m: &CMatrix<T>) -> CMatrix<f64> {
    CMatrix::from_fn(m.dim(), |i, j| Complex::new(m[(i, j)].re.as_f64(), m[(i, j)].im.as_f64()))
}

fn unpack(x: &[f64]) -> Vec<Cx> {
    let k = x.len() / 2;
    (0..k).map(|i| Complex::new(x[i], x[k + i])).collect()
}

fn quad(m: &CMatrix<f64>, f: &[Cx]) -> (f64, Vec<Cx>) {
    let mf = m.mul_vec(f);
    (inner_raw(f, &mf).re, mf)
}

/// Penalized sequential minimization of
/// `f†Hf + μ0(1 - f†Sf)² + Σ_j λ_j |f_j† S f|²`
/// over `f ∈ C^K`, one state at a time, earlier states held fixed.
///
/// States are returned in discovery order with energies `f†Hf / f†Sf`.
pub fn solve_deflation<T: Real>(k: &Kernels<T>, n_states: usize, cfg: &DeflationConfig) -> Result<SubspaceSolution<T>> {
    let dim = k.k();
    if n_states == 0 || n_states > dim {
        return Err(Error::InvalidArgument(format!("n_states must be in 1..={dim}, got {n_states}")));
    }
    let h = to_f64(&k.h).hermitian_part();
    let s = to_f64(&k.s).hermitian_part();
    let h_eig = eig_hermitian(&h)?;
    let range = h_eig.values[dim - 1] - h_eig.values[0];
    let mu0 = cfg.mu0.unwrap_or(10.0 * if range > 0.0 { range } else { 1.0 });
    let lambdas = cfg.lambdas.clone().unwrap_or_else(|| vec![mu0; n_states.saturating_sub(1)]);
    if !(mu0 > 0.0) || lambdas.len() < n_states - 1 || lambdas.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "need mu0 > 0 and {} positive lambdas, got mu0 = {mu0}, lambdas = {lambdas:?}",
            n_states - 1
        )));
    }
    let local = LocalConfig { tolerance: 0.0, max_evals: cfg.max_evals, gtol: 1e-10 };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let mut x = vec![0.0; 2 * dim];
            x[i] = 1.0;
            x
        })
        .collect();
    for _ in 0..cfg.random_starts {
        let f: Vec<Cx> = (0..dim).map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let (q, _) = quad(&s, &f);
        let scale = if q > 1e-12 { q.sqrt().recip() } else { 1.0 };
        starts.push(f.iter().map(|z| z.re * scale).chain(f.iter().map(|z| z.im * scale)).collect());
    }

    let mut found: Vec<Vec<Cx>> = Vec::new();
    // S f_j for each found state, the linear form in each orthogonality penalty.
    let mut anchors: Vec<Vec<Cx>> = Vec::new();
    let mut energies = Vec::new();
    let mut residuals = Vec::new();
    let mut converged = true;

    for state in 0..n_states {
        let lam = &lambdas[..state];
        let value = |x: &[f64]| {
            let f = unpack(x);
            let (fh, _) = quad(&h, &f);
            let (q, _) = quad(&s, &f);
            let pen: f64 = anchors.iter().zip(lam).map(|(v, l)| l * inner_raw(v, &f).norm_sqr()).sum();
            fh + mu0 * (1.0 - q).powi(2) + pen
        };
        let gradient = |x: &[f64], g: &mut [f64]| {
            let f = unpack(x);
            let (_, hf) = quad(&h, &f);
            let (q, sf) = quad(&s, &f);
            let c = -2.0 * mu0 * (1.0 - q);
            let mut gc: Vec<Cx> = hf.iter().zip(&sf).map(|(a, b)| (a + b * c) * 2.0).collect();
            for (v, l) in anchors.iter().zip(lam) {
                let proj = inner_raw(v, &f);
                for (gi, vi) in gc.iter_mut().zip(v) {
                    *gi += vi * proj * (2.0 * l);
                }
            }
            for i in 0..dim {
                g[i] = gc[i].re;
                g[dim + i] = gc[i].im;
            }
        };
        let mut obj = Analytic { f: value, g: gradient };
        let mut best: Option<crate::optim::Minimum> = None;
        for x0 in &starts {
            let m = minimize(&mut obj, x0, None, &local);
            if !m.value.is_finite() {
                return Err(Error::Numerical(format!("non-finite deflation objective for state {state}")));
            }
            if best.as_ref().is_none_or(|b| m.value < b.value) {
                best = Some(m);
            }
        }
        let best = best.expect("at least one start");
        converged &= best.converged;
        let f = unpack(&best.x);
        let (q, sf) = quad(&s, &f);
        if !(q > 0.0) {
            return Err(Error::Numerical(format!("deflation state {state} collapsed to zero norm")));
        }
        let (fh, _) = quad(&h, &f);
        let e = fh / q;
        let norm = q.sqrt();
        let f: Vec<Cx> = f.iter().map(|z| z / norm).collect();
        let sf: Vec<Cx> = sf.iter().map(|z| z / norm).collect();
        let hf = h.mul_vec(&f);
        residuals.push(hf.iter().zip(&sf).map(|(a, b)| (a - b * e).norm_sqr()).sum::<f64>().sqrt());
        energies.push(e);
        anchors.push(sf);
        found.push(f);
    }

    let back = |z: &Cx| Complex::new(T::lit(z.re), T::lit(z.im));
    let s_eig = eig_hermitian(&k.s)?;
    Ok(SubspaceSolution {
        energies: energies.into_iter().map(T::lit).collect(),
        weights: found.iter().map(|f| f.iter().map(back).collect()).collect(),
        retained: dim,
        epsilon_cut: 0.0,
        overlap_eigenvalues: s_eig.values,
        residuals: residuals.into_iter().map(T::lit).collect(),
        converged,
    })
}
