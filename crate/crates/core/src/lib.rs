//! Exact finite Weil representations of even lattices, lattice theta
//! expansions, rational isotropy and Hurwitz class numbers.
//!
//! Everything is exact except [`interval`], which provides rigorous
//! enclosures for numerical checks of modularity.

pub mod arith;
pub mod cyclotomic;
pub mod cycles;
pub mod discriminant;
pub mod eisenstein;
pub mod error;
pub mod field;
pub mod interval;
pub mod lattice;
pub mod matrix;
pub mod modform;
pub mod verify;
pub mod weil;

pub use cyclotomic::ExactScalar;
pub use discriminant::DiscriminantGroup;
pub use error::{Error, Result};
pub use field::{KElem, QuadField};
pub use lattice::{Case, Lattice, Signature};
pub use matrix::QMatrix;
pub use weil::{Generator, GroupWord, WeilMatrix, WeilRep};
pub use modform::{QExpansion, TailModel};
