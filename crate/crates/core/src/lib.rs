//! Exact verification engine for Lie-algebraic Gaussian evaluation identities:
//! Laplacian evaluation operators on `S(𝔤)` and `P(𝔥*)`, Harish-Chandra
//! restriction, Jacobi-diagram weight systems, lens-space perturbative
//! invariants, and a Monte Carlo Gaussian-integration oracle.

pub mod error;
pub mod diagrams;
pub mod exact;
pub mod laplace;
pub mod liealg;
pub mod oracle;
pub mod rootsys;
pub mod suite;

pub use error::{Error, Result};
