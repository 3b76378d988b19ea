use alloc::string::String;

use crate::numerals::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero has no base decomposition")]
    ZeroDecomposition,
    #[error("base {0} is below 2")]
    BaseTooSmall(Nat),
    #[error("target base {target} is below source base {from}")]
    TargetBelowSource { from: Nat, target: Nat },
    #[error("bit budget of {limit} bits exceeded")]
    BitBudget { limit: u64 },
    #[error("work budget of {limit} iterations exceeded")]
    WorkBudget { limit: u64 },
    #[error("term budget of {limit} nodes exceeded")]
    TermBudget { limit: usize },
    #[error("term nesting deeper than {limit}")]
    DepthBudget { limit: usize },

    #[error("a base hierarchy cannot be empty")]
    EmptyHierarchy,
    #[error("{lower} does not divide the next base {upper}")]
    Divisibility { lower: Nat, upper: Nat },
    #[error("query at {query} lies beyond the materialized horizon {horizon}")]
    HorizonExhausted { horizon: Nat, query: Nat },
    #[error("min of the source hierarchy exceeds min of the target")]
    MinimumOrder,

    #[error("no target base works for {0}: the upgrade is infinite")]
    UpgradeInfinite(Nat),
    #[error("{0} is not critical")]
    NotCritical(Nat),

    #[error("cannot compare a theta atom with a psi atom")]
    MixedFlavors,
    #[error("psi atom outside normal form: {0}")]
    NotNormalForm(String),
    #[error("psi is only defined here on finite or uncountable arguments, got {0}")]
    CountablePsiArgument(String),
    #[error("{0} is uncountable")]
    Uncountable(String),
    #[error("no fundamental sequence for {0}")]
    NoFundamentalSequence(String),
    #[error("index {index} is not below the cofinality of {term}")]
    BadIndex { term: String, index: String },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("witness hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("witness does not check out: {0}")]
    Witness(String),
    #[error("invalid hierarchy description: {0}")]
    Spec(String),
    #[error("certificate check failed at step {step}: {msg}")]
    Certificate { step: u64, msg: String },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::BitBudget { .. }
                | Error::WorkBudget { .. }
                | Error::TermBudget { .. }
                | Error::DepthBudget { .. }
                | Error::HorizonExhausted { .. }
        )
    }
}
