//! The arithmetic payoff: closed-form valuations of the Petersson-product
//! number alpha from the principal part of f, the local-height formulas at
//! Heegner points, and the reconciliation of the three computation routes
//! (closed formula, product expansion, numerical integration).

pub mod heights;
pub mod report;
pub mod theorem1;

pub use heights::local_height;
pub use report::{reconcile, FactorReport, PrimeEntry, Reconciliation};
pub use theorem1::{ramified_valuation, theorem1_split_case, theorem1_valuation, PrincipalPart};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("prime {0} has the wrong splitting for this formula")]
    WrongSplitting(i64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
