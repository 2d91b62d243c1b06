//! QAOA followed by quantum subspace expansion (QSE) for the maximum
//! independent set problem, simulated with dense statevectors.
//!
//! The numerical modules are generic over the real scalar ([`Real`], `f32` or
//! `f64`); the aliases below pin the `f64` instantiations used by the pipeline.

pub mod error;
pub mod estimator;
pub mod graph;
pub mod hamiltonian;
pub mod linalg;
pub mod optim;
pub mod pipeline;
pub mod qaoa;
pub mod qse;
pub mod scalar;
pub mod simulator;

pub use error::{Error, Result};
pub use graph::{brute_force_mis, generate_er, parse_graph, Graph, MisOracle};
pub use hamiltonian::{cost_diagonal, ground_manifold, pauli_terms, DiagonalOperator, PauliDecomposition};
pub use scalar::Real;
pub use simulator::{KernelMode, ShotModel};

pub type StateVector = simulator::StateVector<f64>;
pub type StateVector32 = simulator::StateVector<f32>;
pub type CMatrix = linalg::CMatrix<f64>;
pub type HermitianEig = linalg::HermitianEig<f64>;
