//! Exact computation in free groups, their automorphisms, and mapping tori
//! of automorphisms with finite outer order.

pub mod automorphism;
pub mod budget;
pub mod central_quotient;
pub mod congruence;
pub mod error;
pub mod finite_group;
pub mod mapping_torus;
pub mod realization;
pub mod whitehead;
pub mod witness;
pub mod words;

pub use automorphism::{FreeAutomorphism, OuterOrderCertificate};
pub use budget::Budget;
pub use error::{Error, Result};
pub use mapping_torus::{MappingTorus, TorusElement};
pub use words::{Alphabet, CyclicWord, Letter, Word};
