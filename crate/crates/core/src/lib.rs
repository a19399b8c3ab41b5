//! Exact Euler numbers and polynomials, character-twisted Euler numbers,
//! the fermionic p-adic integral and the p-adic Euler L-function.
//!
//! Rational and cyclotomic quantities are computed exactly; p-adic
//! quantities carry an explicit precision and every reported digit is
//! certified.

pub mod arith;
pub mod character;
pub mod cyclotomic;
pub mod error;
pub mod euler;
pub mod fermionic;
pub mod generalized;
pub mod padic;
pub mod poly;
pub mod zeta;

pub use character::DirichletCharacter;
pub use cyclotomic::CyclotomicElement;
pub use error::{Error, Result};
pub use padic::{PadicContext, PadicNumber};
pub use poly::RationalPolynomial;
pub use zeta::CZpPoint;
