//! Small dense complex matrices, a cyclic Jacobi Hermitian eigensolver, and
//! exact finite-difference stencils.

use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real = f64> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![czero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Complex::new(T::one(), T::zero()) } else { czero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    pub fn from_real_diagonal(diag: &[T]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { Complex::new(diag[i], T::zero()) } else { czero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::lit(0.5);
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn hermiticity_error(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(czero(), |acc, j| acc + self[(i, j)] * v[j]))
            .collect()
    }

    /// `u† A v`.
    pub fn sandwich(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        let av = self.mul_vec(v);
        u.iter().zip(&av).fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)] - other[(i, j)])
    }

    fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        CMatrix::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(czero(), |acc, k| acc + self[(i, k)] * rhs[(k, j)])
        })
    }
}

/// Eigen-decomposition `M = V diag(values) V†`, values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig<T: Real = f64> {
    pub values: Vec<T>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEig<T> {
    pub fn reconstruct(&self) -> CMatrix<T> {
        let d = CMatrix::from_real_diagonal(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver. The input is Hermitized before rotating.
///
/// Eigenvectors are phase-fixed so that their first component with modulus
/// above `1e-8` is real and positive.
pub fn eig_hermitian<T: Real>(m: &CMatrix<T>) -> Result<HermitianEig<T>> {
    if !m.all_finite() {
        return Err(Error::Numerical("non-finite matrix entry".into()));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(T::min_positive_value());
    let eps = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= eps * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= eps * eps * scale {
                    continue;
                }
                let phase = apq / r;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (r + r);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let pc = phase.conj();
                // J = [[c, s], [-s·ē, c·ē]] on (p, q); A ← J† A J, V ← V J.
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * c - akq * pc * s;
                    a[(k, q)] = akp * s + akq * pc * c;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * c - vkq * pc * s;
                    v[(k, q)] = vkp * s + vkq * pc * c;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = czero();
                a[(q, p)] = czero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap().then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    let tiny = T::lit(1e-8);
    for j in 0..n {
        if let Some(lead) = (0..n).map(|i| vectors[(i, j)]).find(|z| z.norm() > tiny) {
            let fix = lead.conj() / lead.norm();
            for i in 0..n {
                vectors[(i, j)] = vectors[(i, j)] * fix;
            }
        }
    }
    Ok(HermitianEig { values, vectors })
}

/// Exact finite-difference weights `w` on integer `offsets` for the derivative
/// of the given order: `Σ_j w_j s_j^k = k!·[k = order]` for `k < offsets.len()`.
pub fn fd_weights(offsets: &[i32], order: usize) -> Result<Vec<BigRational>> {
    let n = offsets.len();
    if order >= n {
        return Err(Error::InvalidArgument(format!("{n} points cannot resolve derivative order {order}")));
    }
    let mut uniq = offsets.to_vec();
    uniq.sort_unstable();
    uniq.dedup();
    if uniq.len() != n {
        return Err(Error::InvalidArgument("stencil offsets must be distinct".into()));
    }
    // Augmented Vandermonde system, rows = moments.
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|k| {
            let mut row: Vec<BigRational> = offsets
                .iter()
                .map(|&s| BigRational::from_integer(BigInt::from(s).pow(k as u32)))
                .collect();
            let rhs = if k == order {
                (1..=order).fold(BigRational::one(), |acc, i| acc * BigRational::from_integer(BigInt::from(i)))
            } else {
                BigRational::zero()
            };
            row.push(rhs);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or_else(|| Error::Numerical("singular Vandermonde system".into()))?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &rows[col][c];
                    rows[r][c] = &rows[r][c] - delta;
                }
            }
        }
    }
    Ok(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

fn to_rational64(x: &BigRational) -> Result<Rational64> {
    match (x.numer().to_i64(), x.denom().to_i64()) {
        (Some(a), Some(b)) => Ok(Rational64::new(a, b)),
        _ => Err(Error::Numerical(format!("stencil weight {x} overflows i64"))),
    }
}

fn rat_to<T: Real>(r: &Rational64) -> T {
    T::from_i64(*r.numer()).unwrap() / T::from_i64(*r.denom()).unwrap()
}

/// Symmetric central first-derivative stencil of even order `p` on offsets `±1..±p/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stencil {
    pub p: usize,
    pub offsets: Vec<i32>,
    #[serde(skip)]
    pub exact: Vec<Rational64>,
    /// Weights on the same offsets that interpolate the value at offset 0.
    #[serde(skip)]
    pub interpolation: Vec<Rational64>,
    /// C(p): sum of squared derivative weights.
    #[serde(skip)]
    pub c_of_p_exact: Rational64,
}

impl Stencil {
    pub fn coefficients<T: Real>(&self) -> Vec<T> {
        self.exact.iter().map(rat_to).collect()
    }

    pub fn interpolation_weights<T: Real>(&self) -> Vec<T> {
        self.interpolation.iter().map(rat_to).collect()
    }

    pub fn c_of_p(&self) -> f64 {
        rat_to(&self.c_of_p_exact)
    }

    /// Moment `Σ_j w_j s_j^m` of the derivative weights, exactly.
    pub fn moment(&self, m: u32) -> Rational64 {
        self.exact
            .iter()
            .zip(&self.offsets)
            .map(|(w, &s)| w * Rational64::from((s as i64).pow(m)))
            .sum()
    }
}

pub const SUPPORTED_STENCIL_ORDERS: [usize; 4] = [2, 4, 6, 8];

pub fn stencil_coefficients(p: usize) -> Result<Stencil> {
    if !SUPPORTED_STENCIL_ORDERS.contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "unsupported stencil order {p}; expected one of {SUPPORTED_STENCIL_ORDERS:?}"
        )));
    }
    let half = (p / 2) as i32;
    let offsets: Vec<i32> = (-half..=half).filter(|&s| s != 0).collect();
    let exact = fd_weights(&offsets, 1)?.iter().map(to_rational64).collect::<Result<Vec<_>>>()?;
    let interpolation = fd_weights(&offsets, 0)?.iter().map(to_rational64).collect::<Result<Vec<_>>>()?;
    let c_of_p_exact = exact.iter().map(|w| w * w).sum();
    Ok(Stencil { p, offsets, exact, interpolation, c_of_p_exact })
}

/// True when every retained weight is non-negative; used by callers clipping noise.
pub fn is_positive_semidefinite<T: Real>(eig: &HermitianEig<T>, tol: T) -> bool {
    eig.values.iter().all(|&v| v >= -tol)
}
