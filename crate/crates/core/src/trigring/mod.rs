//! The ring of finite sums `Σ r · s^a c^b`, with `s = sin(β/2)`, `c = cos(β/2)`,
//! `r` rational and `a, b ∈ ½ℤ`.
//!
//! Every eigenfunction and every operator action in this crate lives in this
//! ring. Values are kept in a canonical form (see [`TrigPoly`]) so that the
//! zero test, and hence equality, is exact and decidable.

mod half;
mod integrate;
mod poly;

pub use half::HalfInt;
pub use integrate::{beta_integral, BetaValue};
pub use poly::{TrigMonomial, TrigPoly};

/// Exact coefficients.
pub type Rational = num_rational::BigRational;

/// Shorthand for a small rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
