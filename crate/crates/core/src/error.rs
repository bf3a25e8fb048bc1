use thiserror::Error;

/// Everything that can go wrong inside the toolkit.
///
/// Variants are grouped by the stage that produces them so callers (the CLI
/// in particular) can map them onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // -- instance validation -------------------------------------------------
    #[error("blocks {first} and {second} overlap at index {index}")]
    OverlappingBlocks { first: usize, second: usize, index: usize },
    #[error("union of blocks is not [1..{n}]: {detail}")]
    BlocksDoNotCoverGround { n: usize, detail: String },
    #[error("block {block} is a singleton; every block needs at least two indices")]
    SingletonBlock { block: usize },
    #[error("monomial {term} hits block {block} more than once")]
    MonomialHitsBlockTwice { term: String, block: usize },
    #[error("monomial {term} uses index {index} outside [1..{n}]")]
    IndexOutOfRange { term: String, index: usize, n: usize },
    #[error("monomial {term} appears more than once")]
    DuplicateTerm { term: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    // -- structure -----------------------------------------------------------
    #[error("hypergraph is not alpha-acyclic")]
    NotAlphaAcyclic,
    #[error("hypergraph is not downward-closed")]
    NotDownwardClosed,
    #[error("invalid join tree: {0}")]
    InvalidJoinTree(String),
    #[error("invalid transversal: {0}")]
    InvalidTransversal(String),
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("monomial {0} cannot be linearized inside the coordinate family")]
    Unlinearizable(String),
    #[error("product hits block {block} twice ({left} * {right})")]
    BlockConflict { left: String, right: String, block: usize },
    #[error("coordinate labels do not match: {0}")]
    LabelMismatch(String),
    #[error("duplicate coordinate label {0}")]
    DuplicateLabel(String),
    #[error("inequality is not valid for the given vertex set")]
    InequalityInvalid,
    #[error("inequality is not facet-inducing: {0}")]
    NotFacet(String),
    #[error("decomposition does not cover the hypergraph: {0}")]
    NotACover(String),
    #[error(
        "decomposition precondition fails: shared blocks {0} are neither empty, a single block, nor a common hyperedge"
    )]
    DecompositionPrecondition(String),

    // -- budgets -------------------------------------------------------------
    #[error("guard exceeded: {what} needs {required}, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    // -- solver --------------------------------------------------------------
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors that reject the user's input (as opposed to budgets
    /// or broken invariants).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::OverlappingBlocks { .. }
                | Error::BlocksDoNotCoverGround { .. }
                | Error::SingletonBlock { .. }
                | Error::MonomialHitsBlockTwice { .. }
                | Error::IndexOutOfRange { .. }
                | Error::DuplicateTerm { .. }
                | Error::InvalidInstance(_)
                | Error::InvalidJoinTree(_)
                | Error::InvalidTransversal(_)
                | Error::InvalidSelection(_)
                | Error::LabelMismatch(_)
                | Error::DuplicateLabel(_)
                | Error::NotDownwardClosed
                | Error::NotAlphaAcyclic
                | Error::Unlinearizable(_)
                | Error::BlockConflict { .. }
                | Error::InequalityInvalid
                | Error::NotFacet(_)
                | Error::NotACover(_)
                | Error::DecompositionPrecondition(_)
        )
    }
}
