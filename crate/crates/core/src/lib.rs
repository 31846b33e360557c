//! Effective Hamiltonians of weakly nonlinear bosonic oscillators.
//!
//! The symbolic core ([`algebra`], [`sw`]) computes order-by-order
//! Schrieffer-Wolff generators and diagonal effective Hamiltonians with exact
//! rational coefficients. [`circuit`] derives couplings from SNAIL/ATS
//! potentials, and [`fock`] checks the predictions numerically on truncated
//! Fock spaces.

pub mod algebra;
pub mod circuit;
pub mod error;
pub mod fock;
pub mod optim;
pub mod sw;

pub use algebra::{CouplingPolynomial, ModeMonomial, OperatorPolynomial, Params, Symbol};
pub use error::{Error, Result};
