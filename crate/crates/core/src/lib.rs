//! Pseudo-projections and pseudo-probability schemes for finite-dimensional
//! quantum systems.
//!
//! The crate builds Hermitian representatives of joint-outcome indicator
//! functions for non-commuting observables, evaluates them on states to get
//! (possibly negative) joint pseudo-probabilities, and measures how far a
//! scheme is from a true probability distribution. Qubit closed forms,
//! classicality thresholds and a pure two-qubit entanglement monotone sit on
//! top of the matrix pipeline and are cross-checked against it.

pub mod entanglement;
pub mod error;
pub mod operator;
pub mod pseudo;
pub mod qubit;
pub mod scan;
pub mod scheme;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use operator::{
    eigenvalues_hermitian, eigh, symmetrized_product, tensor, trace_with, ComplexMatrix, HermitianOperator, MatrixJson,
    Spectrum,
};
pub use pseudo::{OrderingRecipe, PseudoProjection};
pub use scheme::{Partition, Scheme};
pub use states::{BlochVector, DensityMatrix, Direction, Observable, Outcome};
