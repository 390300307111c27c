use std::fmt;

use crate::sepsys::{SepId, ValidationReport};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Internal guarantees of the canonical construction that are checked at
/// runtime. Any of these firing means the input family was not consistent or
/// the system was not submodular with respect to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    /// Some member has a maximal exclusive separation.
    ExclusiveExists,
    /// Maximal exclusive separations of different members are nested.
    MaximalSetsNested,
    /// Maximal exclusive separations of one member pairwise cross.
    MaximalSetCrosses,
    /// The maximal exclusive set of a member has an infimum that is exclusive
    /// for that member and nested with everything nested with the set.
    RepresentativeInfimum,
    /// The representatives chosen in one round are pairwise nested and nested
    /// with all surviving separations.
    RepresentativesNested,
    /// The surviving system is submodular for the surviving members.
    RestrictionSubmodular,
    /// The surviving system still distinguishes the surviving members.
    RestrictionDistinguishes,
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Lemma::ExclusiveExists => "exclusive-exists",
            Lemma::MaximalSetsNested => "maximal-sets-nested",
            Lemma::MaximalSetCrosses => "maximal-set-crosses",
            Lemma::RepresentativeInfimum => "representative-infimum",
            Lemma::RepresentativesNested => "representatives-nested",
            Lemma::RestrictionSubmodular => "restriction-submodular",
            Lemma::RestrictionDistinguishes => "restriction-distinguishes",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid separation system: {0}")]
    Invalid(ValidationReport),

    #[error("orientation has {got} bits but the system has {expected} separations")]
    OrientationLength { expected: usize, got: usize },

    #[error("family member {member} is inconsistent: {r} and {s}")]
    Inconsistent { member: usize, r: SepId, s: SepId },

    #[error("family members {first} and {second} are equal")]
    DuplicateMember { first: usize, second: usize },

    #[error("system is not submodular for the family: oriented pair ({r}, {s}) has neither join nor meet")]
    NotSubmodular { r: SepId, s: SepId },

    #[error("algorithm precondition violated ({lemma}): {detail}")]
    Precondition { lemma: Lemma, detail: String },

    #[error("{what} has size {size}, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(lemma: Lemma, detail: impl Into<String>) -> Self {
        Error::Precondition {
            lemma,
            detail: detail.into(),
        }
    }
}
