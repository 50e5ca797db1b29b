//! Coset enumeration, finite-quotient search and the killer / infinite-cyclic
//! decision procedures built on them.

mod killer;
mod perm;
mod quotient;
mod todd_coxeter;

use thiserror::Error;

use crate::abelian::Abelianization;
use crate::words::{Generator, PresentationError};

pub use killer::{
    find_finite_quotient_killing, find_noncommuting_quotient, is_infinite_cyclic_certified, is_killer,
    search_non_killer_pair, CyclicVerdict, FiniteQuotientCertificate, KillerProof, KillerVerdict, MeridianPair,
    NonCyclicCertificate, NonKillerWitness, NoncommutingCertificate, RefutationSource, UnknownReason,
};
pub use perm::{Permutation, TargetGroup};
pub use quotient::{search_quotients, PermutationQuotient, SearchOutcome, SearchSpace};
pub use todd_coxeter::{todd_coxeter, CosetTable, EnumerationLimits, EnumerationResult, EnumerationStats, LimitKind};

#[derive(Debug, Error)]
pub enum CosetError {
    #[error(transparent)]
    MalformedInput(#[from] PresentationError),
    #[error("enumeration limits must be positive")]
    InvalidLimits,
    #[error("unsupported search target {0} (degree must be 1..=8)")]
    UnsupportedTarget(String),
    #[error("abelianization is {0}, not Z")]
    NotAKnotGroupPresentation(Abelianization),
    #[error("generator {0} does not map to a generator of the abelianization")]
    MeridianNotPrimitive(Generator),
}
