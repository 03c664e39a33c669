//! Computational commutative algebra in positive characteristic.

pub mod dense;
pub mod discriminant;
pub mod error;
pub mod field;
pub mod groebner;
pub mod invariants;
pub mod monomial;
pub mod parse;
pub mod perturb;
pub mod poly;
pub mod ring;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Fq};
pub use groebner::{GroebnerBasis, Ideal, Staircase};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::parse_poly;
pub use poly::Polynomial;
pub use ring::{Limits, Ring, RingSpec};
