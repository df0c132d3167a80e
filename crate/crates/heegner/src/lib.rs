//! Heegner-point machinery at level 23: the Hauptmodul of the genus-zero
//! quotient, enumeration of Heegner forms, the integer polynomials with the
//! CM values of the Hauptmodul as roots, their exact evaluation in Z[rho],
//! and the assembled product expansion of the Borcherds lift.

pub mod borcherds;
pub mod cubic;
pub mod hauptmodul;
pub mod orbits;
pub mod polys;

pub use borcherds::{borcherds_value, FactorVector};
pub use cubic::{factor, pi_basis, CubicInt, Factorization};
pub use hauptmodul::j_star_23;
pub use orbits::{enumerate_heegner, HeegnerOrbit};
pub use polys::{heegner_polynomial, HeegnerPoly};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HeegnerError {
    #[error("series error: {0}")]
    Series(#[from] qexp::SeriesError),
    #[error("-{0} is not a square modulo {1}")]
    NonSquareDiscriminant(i64, i64),
    #[error("only level 23 is implemented (no Hauptmodul formula for level {0})")]
    NotImplemented(i64),
    #[error("pinned expansion mismatch: {0}")]
    SelfTestFailure(String),
    #[error("rounding residual {0} too large at {1} mantissa bits")]
    RoundingResidualTooLarge(f64, usize),
    #[error("factorization basis check failed: {0}")]
    BasisCheck(String),
    #[error("unfactored residue: {0}")]
    UnfactoredResidue(String),
    #[error("exponent bookkeeping did not produce integers: {0}")]
    NonIntegralExponents(String),
}
