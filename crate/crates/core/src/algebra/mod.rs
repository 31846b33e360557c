//! Exact algebra of normal-ordered multimode bosonic operator polynomials.

mod coupling;
mod monomial;
mod operator;
mod parse;

pub use coupling::{
    ratio, CouplingMonomial, CouplingPolynomial, FrequencyCombination, Params, Symbol,
};
pub use monomial::{ModeFactor, ModeMonomial};
pub use operator::{rotation_frequency, Frequencies, OperatorPolynomial};
pub use parse::{parse_coupling, parse_operator};

