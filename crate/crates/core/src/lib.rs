//! Exact operator algebra for one-dimensional cluster-state models.
//!
//! The crate provides four layers, each pure and allocation-only so the
//! whole stack builds without `std`:
//!
//! - [`pauli`]: phased Pauli strings and complex-weighted Pauli sums,
//!   with conjugation by Hadamards and single-qubit rotations.
//! - [`phase`]: diagonal gates as multilinear Boolean phase polynomials,
//!   including the exact conjugation of `X_j` by an arbitrary diagonal
//!   circuit.
//! - [`state`]: a statevector engine with the full gate catalog
//!   (controlled phases, `C^N Z`, Ising-type two-qubit gates).
//! - [`model`]: the chain-model factory turning a [`model::ChainSpec`]
//!   into stabilizers, Hamiltonians and reference cluster states.
//!
//! Conventions used everywhere: sites are 1-indexed, site 1 is the least
//! significant bit of a basis index, and the basis state
//! `|x_n ... x_2 x_1>` corresponds to the integer `sum_j x_j 2^(j-1)`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod matrix;
pub mod model;
pub mod pauli;
pub mod phase;
pub mod state;

mod math;

pub use error::CoreError;
pub use matrix::CMatrix;
pub use model::{Boundary, ChainSpec, EdgeTerms, Model, ModelBundle};
pub use pauli::{Letter, OperatorSum, PauliString};
pub use phase::PhasePolynomial;
pub use state::{Axis, Gate, StateVector};

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Coefficients below this magnitude are dropped after every combine or
/// multiply, so trigonometric cancellations cannot leak zero-weight terms.
pub const PRUNE_EPS: f64 = 1e-12;

/// Largest chain handled by the bit-mask representation.
pub const MAX_SITES: usize = 64;

/// Largest chain for which dense `2^n x 2^n` matrices may be built.
pub const DENSE_SITE_LIMIT: usize = 14;

/// Largest diagonal support accepted by a single exponential expansion.
pub const EXPANSION_SITE_LIMIT: usize = 16;
