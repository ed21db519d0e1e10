//! Finite table arithmetic for the Thompson-Higman monoids `M_{k,1}`, `M_{k,i}`
//! and `Inv_{k,1}`.
//!
//! Elements are right ideal homomorphisms between finitely generated right
//! ideals of `A^*` (or `B A^*`), stored as tables from a domain prefix code to
//! image words and kept in maximally extended form. On top of that sit the
//! Green relation deciders, partial circuits with their reductions, and the
//! finite-relation counting transformers.

pub mod circuits;
pub mod codes;
pub mod counting;
pub mod gen;
pub mod green;
pub mod morphisms;
pub mod structure;

mod error;

pub use codes::{Alphabet, PrefixCode, Word};
pub use error::{Error, Result};
pub use morphisms::{Element, MorphTable};
