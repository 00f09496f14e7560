//! Physical distance between quantum states and the chaos diagnostics built on it.
//!
//! A quantum state expanded in an orthonormal basis induces a probability
//! distribution over the basis labels. Equipping the labels with a metric turns
//! that set into a finite metric space, and the Wasserstein distance between two
//! such distributions is the *physical distance* between the states. Unlike
//! inner-product distances it can be small for orthogonal states and it grows
//! under chaotic dynamics even though the Schrödinger evolution is linear.
//!
//! The crate is `no_std` (it needs `alloc`) and holds only the numerical core:
//!
//! * [`ot`]: exact discrete optimal transport (network simplex), metric
//!   constructors, and a 1-D quantile oracle.
//! * [`linalg`] and [`quantum`]: states, density matrices, basis projection,
//!   eigensystems and the diagonal (infinite-time) ensemble.
//! * [`phase`]: phase-space cell bases built by grouped Fourier transforms.
//! * [`chaos`]: quantum Lyapunov fits and the chaos measure Υ.
//! * [`rotor`], [`bose_hubbard`], [`xxz`]: the three model systems.
//!
//! IO, file formats and the command-line front end live in the `physdist` crate.

#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bose_hubbard;
pub mod chaos;
pub mod error;
pub mod linalg;
pub mod math;
pub mod ot;
pub mod phase;
pub mod quantum;
pub mod rotor;
pub mod xxz;

pub use error::{Error, Result};
pub use num_complex::Complex64;
