//! Reduced-density-matrix determinedness for multiqubit pure states.
//!
//! An n-qubit pure state is either the unique state compatible with its n
//! reduced density matrices on n−1 qubits, or it is local-unitarily
//! equivalent to a generalized GHZ state `α|0…0⟩ + β|1…1⟩` with `αβ ≠ 0`.
//! This crate decides which, builds the compatible family in the GHZ case,
//! and exposes every constructive step behind that dichotomy as checkable
//! numerics:
//!
//! * [`qstate`]: multi-indices, pure and mixed states, Pauli words, a cyclic
//!   Jacobi eigensolver and a reproducible Haar sampler.
//! * [`rdm`]: partial traces and the map to the tuple of (n−1)-qubit marginals.
//! * [`schmidt`]: one-qubit Schmidt splits, purifications, environment
//!   vectors and the cross-qubit constraint they satisfy.
//! * [`ghz`]: generalized GHZ states, their compatible family, and a
//!   local-unitary GHZ detector.
//! * [`compat`]: the marginal-preserving perturbation space, PSD feasibility
//!   search, the determinedness verdict and the rank-2 check.
//! * [`construct`]: the pure partner obtained by extending a mixture past
//!   its endpoint.
//! * [`cli`]: state files, reports and the subcommands of the
//!   `rdm-determined` binary.
//!
//! Basis convention: qubit 1 is the most significant bit of a flat index,
//! so `|i₁ i₂ … iₙ⟩` lives at `Σ i_j · 2^(n−j)`.

// `!(x > t)` is used on purpose so that NaN fails every threshold test.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compat;
pub mod construct;
mod error;
pub mod ghz;
pub mod qstate;
pub mod rdm;
pub mod schmidt;

pub use error::{Error, Result};
pub use qstate::{CMatrix, DensityMatrix, MultiIndex, PureState, C64};
