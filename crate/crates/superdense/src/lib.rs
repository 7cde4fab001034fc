//! Probabilistic superdense coding with partially entangled resources.
//!
//! A maximally entangled pair lets a sender ship `2·log2(d)` classical bits
//! inside one d-level system. With a partially entangled resource the encoded
//! states are no longer orthogonal, so the receiver can only identify them
//! *unambiguously* some of the time. This crate builds the whole pipeline:
//!
//! - [`states`]: shared Schmidt-form resources, an interpolating two-qubit
//!   basis, Schmidt decomposition and entanglement entropy;
//! - [`coding`]: the sender's message-indexed unitaries (Pauli set, shift/clock
//!   family, identity-padded embeddings) and their action on the resource;
//! - [`discrimination`]: Gram matrices, feasibility of unambiguous
//!   discrimination, closed-form success bounds, and explicit POVM synthesis;
//! - [`protocol`]: one end-to-end run (project onto subspaces, then
//!   discriminate within the subspace) plus seeded Monte Carlo estimation;
//! - [`qmath`]: the small dense complex linear-algebra substrate underneath;
//! - [`cli`]: the `superdense` command-line front end.
//!
//! Everything is sized for desk-scale dimensions (local dimension ≤ 12, so
//! operators of a few hundred rows at most); storage is dense and the
//! eigensolver is a cyclic Jacobi sweep.

pub mod cli;
pub mod coding;
pub mod discrimination;
mod error;
pub mod protocol;
pub mod qmath;
pub mod states;

pub use error::{Error, Result};
