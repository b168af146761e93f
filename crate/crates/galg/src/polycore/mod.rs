//! Scalars, monomials, polynomials, and (quotient) rings.

pub mod field;
pub mod monomial;
pub mod poly;
pub mod quotient;
pub mod parse;
