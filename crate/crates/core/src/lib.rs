//! Arithmetic counting in the Heisenberg group over imaginary quadratic
//! integers: exact ring and lattice arithmetic, Heisenberg and complex
//! hyperbolic geometry, Picard modular group orbits, chains, and the
//! counting/equidistribution harnesses with their closed-form constants.

pub mod chains;
pub mod counting;
pub mod cxhyp;
pub mod error;
pub mod heis;
pub mod picard;
pub mod quadint;
mod small;
pub mod zeta;

pub use error::{Error, Result};
pub use heis::{HeisIntElem, HeisPt, Triple};
pub use quadint::{make_field, BasisCase, FieldSpec, KNum, QuadInt, ZLattice2};
