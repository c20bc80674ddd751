//! Drinfeld modules over finite fields: Frobenius characteristic
//! polynomials, elementary divisors of the reduction, and endomorphism
//! orders in rank two.

pub mod error;
pub mod fq;
pub mod charpoly;
pub mod drinfeld;
pub mod skew;
pub mod structure;
pub mod quadorder;
pub mod endoring;
pub mod reciprocity;
pub mod scan;

pub use error::{Error, Result};
