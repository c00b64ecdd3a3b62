//! Pseudorandom sequence families built from Legendre symbols and
//! multiplicative characters of irreducible polynomials over prime fields.
//!
//! The crate covers finite-field and polynomial arithmetic ([`ff`], [`poly`]),
//! the family constructions and their dual ([`construct`]), exact and sampled
//! evaluation of the f-complexity and the correlation measures
//! ([`measures`]), the theoretical bounds ([`bounds`]) and a command-line
//! front end ([`cli`]).

pub mod bounds;
pub mod budget;
pub mod cli;
pub mod construct;
pub mod error;
pub mod ff;
pub mod measures;
pub mod poly;
pub mod report;

pub use budget::Budget;
pub use construct::{dual, Construction, Family, KSymbolOptions, SpecificationPattern};
pub use error::{Error, Result};
pub use measures::{Measure, MeasureResult, Mode, Value, Witness};
pub use poly::Polynomial;
