//! The MIS cost Hamiltonian `H_C = -Σ n_i + Σ_(i,j)∈E n_i n_j`, both as an
//! exact integer diagonal and as its Pauli-Z expansion with rational coefficients.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;

/// Default statevector bound on qubit count.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Diagonal of `H_C` in the computational basis. Index bit i = occupation of vertex i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalOperator {
    n: usize,
    values: Vec<i32>,
}

impl DiagonalOperator {
    /// Wraps an arbitrary integer diagonal; length must be `2^n`.
    pub fn from_values(n: usize, values: Vec<i32>) -> Result<Self> {
        if values.len() != 1usize << n {
            return Err(Error::Dimension { expected: 1 << n, got: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn min(&self) -> i32 {
        *self.values.iter().min().expect("non-empty diagonal")
    }

    pub fn max(&self) -> i32 {
        *self.values.iter().max().expect("non-empty diagonal")
    }

    /// Diagonal converted to the working scalar.
    pub fn to_real<T: Real>(&self) -> Vec<T> {
        self.values.iter().map(|&v| T::from_i32(v).unwrap()).collect()
    }
}

pub fn cost_diagonal(g: &Graph) -> Result<DiagonalOperator> {
    cost_diagonal_bounded(g, DEFAULT_MAX_QUBITS)
}

/// `values[x] = -popcount(x) + #{(i,j) ∈ E : bits i and j set}`.
pub fn cost_diagonal_bounded(g: &Graph, max_qubits: usize) -> Result<DiagonalOperator> {
    let n = g.n();
    if n > max_qubits.min(30) {
        return Err(Error::TooLarge { what: "qubit count", got: n, limit: max_qubits.min(30) });
    }
    // Build by doubling: adding vertex v to every configuration on vertices < v
    // costs -1 plus one per already-occupied neighbour of lower index.
    let mut lower_nbrs = vec![0u64; n];
    for &(i, j) in g.edges() {
        lower_nbrs[j] |= 1 << i;
    }
    let mut values = vec![0i32; 1 << n];
    for v in 0..n {
        let half = 1usize << v;
        let (lo, hi) = values.split_at_mut(half);
        for (x, (dst, &src)) in hi[..half].iter_mut().zip(lo.iter()).enumerate() {
            *dst = src - 1 + ((x as u64) & lower_nbrs[v]).count_ones() as i32;
        }
    }
    Ok(DiagonalOperator { n, values })
}

/// Lowest energy and every basis index attaining it, ascending.
pub fn ground_manifold(d: &DiagonalOperator) -> (i32, Vec<u64>) {
    let emin = d.min();
    let idx = d
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == emin)
        .map(|(x, _)| x as u64)
        .collect();
    (emin, idx)
}

/// `H_C = constant + Σ z_i Z_i + Σ zz_ij Z_i Z_j`, coefficients exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PauliDecomposition {
    pub n: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub constant: Rational64,
    #[serde(serialize_with = "ser_ratios")]
    pub z_coeffs: Vec<Rational64>,
    #[serde(serialize_with = "ser_pair_map")]
    pub zz_coeffs: BTreeMap<(usize, usize), Rational64>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_ratios<S: serde::Serializer>(r: &[Rational64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(|x| x.to_string()))
}

fn ser_pair_map<S: serde::Serializer>(
    m: &BTreeMap<(usize, usize), Rational64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|((i, j), c)| (format!("{i},{j}"), c.to_string())))
}

impl PauliDecomposition {
    /// Structural number of Pauli strings, Z and ZZ (the identity is not counted).
    pub fn term_count(&self) -> usize {
        self.n + self.zz_coeffs.len()
    }

    /// Sum of absolute coefficients over all terms, an upper bound on ‖H_C‖.
    pub fn one_norm(&self) -> Rational64 {
        self.constant.abs()
            + self.z_coeffs.iter().map(|c| c.abs()).sum::<Rational64>()
            + self.zz_coeffs.values().map(|c| c.abs()).sum::<Rational64>()
    }

    /// Evaluates the expansion on a basis state (Z eigenvalue +1 for bit 0).
    pub fn eval(&self, x: u64) -> Rational64 {
        let z = |i: usize| if (x >> i) & 1 == 1 { -1i64 } else { 1 };
        let mut acc = self.constant;
        for (i, c) in self.z_coeffs.iter().enumerate() {
            acc += c * z(i);
        }
        for (&(i, j), c) in &self.zz_coeffs {
            acc += c * (z(i) * z(j));
        }
        acc
    }
}

/// Expands `n_i = (1 - Z_i)/2`: constant `-n/2 + |E|/4`, `z_i = 1/2 - deg(i)/4`, `zz = 1/4`.
pub fn pauli_terms(g: &Graph) -> PauliDecomposition {
    let quarter = Rational64::new(1, 4);
    let half = Rational64::new(1, 2);
    let n = g.n() as i64;
    let constant = -Rational64::from(n) * half + Rational64::from(g.num_edges() as i64) * quarter;
    let z_coeffs = g
        .degrees()
        .into_iter()
        .map(|d| half - Rational64::from(d as i64) * quarter)
        .collect();
    let zz_coeffs = g.edges().iter().map(|&e| (e, quarter)).collect();
    PauliDecomposition { n: g.n(), constant, z_coeffs, zz_coeffs }
}

/// Largest deviation between the Pauli expansion and the diagonal, exactly.
pub fn pauli_reconstruction_error(p: &PauliDecomposition, d: &DiagonalOperator) -> Rational64 {
    (0..d.dim())
        .map(|x| (p.eval(x as u64) - Rational64::from(d.values[x] as i64)).abs())
        .fold(Rational64::zero(), |a, b| a.max(b))
}
