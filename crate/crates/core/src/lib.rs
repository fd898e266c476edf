//! Exact bound states of the one-dimensional Schrödinger equation with the
//! trigonometric Rosen-Morse potential
//!
//! ```text
//! v(z) = -2b cot z + a(a+1) csc^2 z,   0 < z < pi
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: exact rationals and dense univariate polynomials.
//! * [`rodrigues`]: level parameters and the Rodrigues construction of the
//!   polynomials `K_n C_n(x)`, together with the symbolic Sturm-Liouville checks.
//! * [`spectrum`]: the potential, its small-z and intermediate-z surrogates,
//!   and the energy ladder.
//! * [`quadrature`]: adaptive open Gauss-Legendre integration.
//! * [`wavefunction`]: normalized states, derivatives, overlaps and limits.
//! * [`jacobi_bridge`]: complex-parameter Jacobi polynomials and the
//!   imaginary-argument correspondence probe.
//! * [`report`]: CSV/JSON emitters and the aggregated verification report used
//!   by the `trm` binary.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exactalg;
pub mod jacobi_bridge;
pub mod quadrature;
pub mod report;
pub mod rodrigues;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use exactalg::{DensePolynomial, Rational};
