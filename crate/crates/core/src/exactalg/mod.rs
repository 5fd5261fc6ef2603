//! Exact field arithmetic and dense linear algebra over Q and F_p.

mod elim;
mod matrix;
mod scalar;

pub use matrix::{AffineSolution, Matrix};
pub use scalar::{format_rational, is_prime, parse_rational, Field, Scalar, DEFAULT_PRIME};

pub(crate) use elim::{bareiss, clear_denominators, mod_rref, primitive, IntEchelon};
pub(crate) use scalar::{inv_mod, mul_mod, reduce_bigint, sub_mod, FILTER_PRIME};
