//! Finite pseudo-BE algebras: axiom checking, deductive systems, states, measures,
//! internal states, pseudo-valuations, homomorphisms and a small model finder.

pub mod algebra;
pub mod assignment;
pub mod ds;
pub mod error;
pub mod exec;
pub mod finder;
pub mod hom;
pub mod linalg;
pub mod meta;
pub mod operators;
pub mod states;
pub mod subset;
pub mod valuations;
pub mod witness;

pub use algebra::{ElementId, FiniteAlgebra};
pub use error::{Error, ParseError, Result};
pub use exec::Exec;
pub use subset::ElementSubset;
