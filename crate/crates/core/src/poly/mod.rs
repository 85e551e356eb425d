//! Exact polynomial arithmetic: multi-indices, sparse rational polynomials,
//! symmetric rational matrices and the forms and lifts built from them.

mod bounds;
mod matrix;
mod multi_index;
mod polynomial;

pub use bounds::{coeff_norm, korda_bound_rhs, scaled_bound_rhs, sqrt_upper, BoundRhs};
pub use matrix::{quadratic_form, quartic_form, SymMatrix};
pub use multi_index::{monomial_basis, monomials_of_degree, multinomial, MultiIndex};
pub use polynomial::{polya_lift, LiftKind, Poly};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub type Rational = num_rational::BigRational;

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).expect("finite float")
}
