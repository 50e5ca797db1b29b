//! Knot group presentations, pseudo-meridian families and machine-checkable
//! certificates that they normally generate the group and are pairwise
//! nonconjugate.

pub mod abelian;
pub mod coset_enum;
pub mod diagrams;
pub mod free_product;
pub mod parabolic;
pub mod two_bridge;
pub mod words;

pub use words::{free_reduce, mu_word, Generator, Presentation, PresentationError, PseudoMeridianSpec, Word};
