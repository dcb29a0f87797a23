//! Cyclotomic scalars, Laurent polynomials and certified real enclosures.

mod field;
pub mod interval;
mod laurent;
mod parse;

pub use field::{sign_of_real, Cyc, Field};
pub use laurent::LaurentPoly;
pub use parse::parse_laurent;

#[allow(unused_imports)]
pub(crate) use field::{forward_owned, rational_to_f64};

pub type Rational = num_rational::BigRational;

/// Parse a rational written as `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse().ok()
}
