//! Computational laboratory for the growth of cocycles of uniformly bounded
//! representations.
//!
//! * [`groups`]: free, free abelian and lamplighter groups, word metrics,
//!   random walks and the exact distance chain of the free group.
//! * [`repcoc`]: representations (tree permutation, matrix, diagonally
//!   conjugated) and cocycles into them.
//! * [`compression`]: compression-exponent fits, the Markov-type ratio
//!   along random walks, and the step-function witness `η`.
//! * [`moduli`]: moduli of convexity and smoothness of finite-dimensional
//!   normed spaces, their duality, and invariant renormings.
//! * [`spectral`]: Markov operators, spectral gaps, Kazhdan constants and
//!   cocycle harmonization in finite dimensions.
//! * [`radial`]: the radial ODE `φ″ + m(r)φ′ = 2ζ(r)` on rank-one
//!   symmetric spaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compression;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod moduli;
pub mod radial;
pub mod repcoc;
pub mod rng;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};
