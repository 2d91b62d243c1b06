//! Dense statevector engine and the Hadamard-test shot-noise model.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::DiagonalOperator;
use crate::scalar::{cis, czero, Real};

/// `2^n` complex amplitudes; basis index bit i is qubit (vertex) i.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real = f64> {
    n: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Uniform superposition `|+>^n`.
    pub fn plus(n: usize) -> Self {
        let dim = 1usize << n;
        let a = T::one() / T::from_usize(dim).unwrap().sqrt();
        Self { n, amps: vec![Complex::new(a, T::zero()); dim] }
    }

    /// Computational basis state `|x>`.
    pub fn basis(n: usize, x: u64) -> Result<Self> {
        let dim = 1usize << n;
        if x as usize >= dim {
            return Err(Error::InvalidArgument(format!("basis index {x} outside 2^{n}")));
        }
        let mut amps = vec![czero(); dim];
        amps[x as usize] = Complex::new(T::one(), T::zero());
        Ok(Self { n, amps })
    }

    /// Takes raw amplitudes and normalizes them.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::Dimension { expected: 1 << n, got: amps.len() });
        }
        let mut s = Self { n, amps };
        let norm = s.norm_sqr().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::Numerical("cannot normalize a zero or non-finite vector".into()));
        }
        s.amps.iter_mut().for_each(|a| *a = *a / norm);
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_dim(&self, d: &DiagonalOperator) -> Result<()> {
        if d.n() != self.n {
            return Err(Error::Dimension { expected: self.n, got: d.n() });
        }
        Ok(())
    }

    /// `amps[x] *= exp(-i·gamma·(d[x] - shift))`.
    pub fn apply_shifted_phase(&mut self, d: &DiagonalOperator, gamma: T, shift: T) -> Result<()> {
        self.check_dim(d)?;
        // Integer spectrum: one phase per distinct energy level.
        let lo = d.min();
        let table: Vec<Complex<T>> = (lo..=d.max())
            .map(|e| cis(-gamma * (T::from_i32(e).unwrap() - shift)))
            .collect();
        for (a, &e) in self.amps.iter_mut().zip(d.values()) {
            *a = *a * table[(e - lo) as usize];
        }
        Ok(())
    }

    /// Cost-phase layer `exp(-i·gamma·H_C)`.
    pub fn apply_cost_phase(&mut self, d: &DiagonalOperator, gamma: T) -> Result<()> {
        self.apply_shifted_phase(d, gamma, T::zero())
    }

    /// Mixer layer `exp(-i·beta·H_M)` with `H_M = -Σ X_i`, i.e. `Π_i exp(+i·beta·X_i)`.
    pub fn apply_mixer(&mut self, beta: T) {
        let (s, c) = beta.sin_cos();
        let isin = |a: Complex<T>| Complex::new(-s * a.im, s * a.re);
        for q in 0..self.n {
            let stride = 1usize << q;
            for block in self.amps.chunks_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x0, x1) = (*a0, *a1);
                    *a0 = x0 * c + isin(x1);
                    *a1 = isin(x0) + x1 * c;
                }
            }
        }
    }

    /// `exp(-i·t·H_C)|self>` as a new state.
    pub fn time_evolve(&self, d: &DiagonalOperator, t: T) -> Result<Self> {
        let mut out = self.clone();
        out.apply_cost_phase(d, t)?;
        Ok(out)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, got: other.n });
        }
        Ok(inner_raw(&self.amps, &other.amps))
    }

    /// `<self|H_C|self>`.
    pub fn expect_diagonal(&self, d: &DiagonalOperator) -> Result<T> {
        self.check_dim(d)?;
        Ok(self
            .amps
            .iter()
            .zip(d.values())
            .map(|(a, &e)| a.norm_sqr() * T::from_i32(e).unwrap())
            .sum())
    }

    /// `H_C|self>` as a raw (unnormalized) amplitude vector.
    pub fn apply_diagonal(&self, d: &DiagonalOperator) -> Result<Vec<Complex<T>>> {
        self.check_dim(d)?;
        Ok(self.amps.iter().zip(d.values()).map(|(a, &e)| *a * T::from_i32(e).unwrap()).collect())
    }

    /// Total probability on the listed basis states.
    pub fn projector_fidelity(&self, indices: &[u64]) -> Result<T> {
        indices
            .iter()
            .map(|&x| {
                self.amps
                    .get(x as usize)
                    .map(|a| a.norm_sqr())
                    .ok_or_else(|| Error::InvalidArgument(format!("basis index {x} out of range")))
            })
            .sum()
    }

    /// Mean Hamming weight and mean parity `(-1)^popcount`.
    pub fn symmetry_expectations(&self) -> (T, T) {
        let mut hamming = T::zero();
        let mut parity = T::zero();
        for (x, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            let w = x.count_ones();
            hamming = hamming + p * T::from_u32(w).unwrap();
            parity = if w % 2 == 0 { parity + p } else { parity - p };
        }
        (hamming, parity)
    }

    /// Indices of the `m` most probable basis states, ties broken by index.
    pub fn top_probabilities(&self, m: usize) -> Vec<(u64, T)> {
        let mut probs: Vec<(u64, T)> =
            self.amps.iter().enumerate().map(|(x, a)| (x as u64, a.norm_sqr())).collect();
        probs.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        probs.truncate(m);
        probs
    }
}

pub(crate) fn inner_raw<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn plus_state<T: Real>(n: usize) -> StateVector<T> {
    StateVector::plus(n)
}

pub fn time_evolve<T: Real>(s: &StateVector<T>, d: &DiagonalOperator, t: T) -> Result<StateVector<T>> {
    s.time_evolve(d, t)
}

pub fn inner<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<Complex<T>> {
    a.inner(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KernelMode {
    #[default]
    Exact,
    Sampled,
}

/// Shot budget per estimated matrix element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotModel {
    pub shots: u64,
    pub seed: u64,
    pub mode: KernelMode,
}

impl ShotModel {
    pub fn exact() -> Self {
        Self { shots: 0, seed: 0, mode: KernelMode::Exact }
    }

    pub fn sampled(shots: u64, seed: u64) -> Self {
        Self { shots, seed, mode: KernelMode::Sampled }
    }

    pub fn sampler(&self) -> Result<ShotSampler> {
        if self.mode == KernelMode::Sampled && self.shots < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 shots, got {}", self.shots)));
        }
        Ok(ShotSampler { model: *self, rng: ChaCha8Rng::seed_from_u64(self.seed) })
    }
}

/// Stateful draw stream for a [`ShotModel`]; successive estimates are independent.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    model: ShotModel,
    rng: ChaCha8Rng,
}

impl ShotSampler {
    /// Simulates the two Hadamard tests (phase 0 and -π/2) on a value in the unit disk.
    ///
    /// Half the shots go to each quadrature; each returns `2·p̂ - 1` with
    /// `p̂ ~ Binomial(shots/2, (1 + part)/2) / (shots/2)`.
    pub fn estimate<T: Real>(&mut self, value: Complex<T>) -> Result<Complex<T>> {
        if value.norm() > T::one() + T::lit(1e-9) {
            return Err(Error::InvalidArgument(format!("|{value}| exceeds 1; rescale first")));
        }
        if self.model.mode == KernelMode::Exact {
            return Ok(value);
        }
        let per = self.model.shots / 2;
        let mut quad = |part: T| -> Result<T> {
            let p = ((T::one() + part) / T::lit(2.0)).as_f64().clamp(0.0, 1.0);
            let dist = Binomial::new(per, p).map_err(|e| Error::Numerical(e.to_string()))?;
            let hits = dist.sample(&mut self.rng) as f64;
            Ok(T::lit(2.0 * hits / per as f64 - 1.0))
        };
        let re = quad(value.re)?;
        let im = quad(value.im)?;
        Ok(Complex::new(re, im))
    }

    /// Estimates `value` whose modulus is bounded by `scale` (operator-norm rescaling).
    pub fn estimate_scaled<T: Real>(&mut self, value: Complex<T>, scale: T) -> Result<Complex<T>> {
        Ok(self.estimate(value / scale)? * scale)
    }
}

/// One-shot convenience wrapper around [`ShotSampler::estimate`].
pub fn hadamard_estimate<T: Real>(value: Complex<T>, model: &ShotModel) -> Result<Complex<T>> {
    model.sampler()?.estimate(value)
}
