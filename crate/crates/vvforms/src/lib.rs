//! Vector-valued modular forms for the Weil representation attached to the
//! three lattice shapes used here: the rank-2 class-group lattices N
//! (|N'/N| = D), the rank-3 lattice L (|L'/L| = 2D), and the rank-1 lattice
//! S = (Z, -x^2) (|S'/S| = 2).
//!
//! Submodules:
//! - [`group`]: finite quadratic modules (discriminant groups),
//! - [`vector`]: the vector-valued form type, tensor pairing, res/tr,
//! - [`cyclotomic`]: exact arithmetic in Q(zeta_n),
//! - [`weil`]: Weil representation generator matrices and relations,
//! - [`classical`]: Eisenstein series, Delta, j, eta, thetas, g_k,
//! - [`jacobi`]: the two weak Jacobi generators and their theta components,
//! - [`theta`]: class-group theta series and the weight-3 theta,
//! - [`rankin`]: Rankin-Cohen brackets,
//! - [`seesaw`]: the lattice L, vectors of norm -1/4, T_{L,N}, and the
//!   half-integral-weight preimage construction,
//! - [`modularity`]: numerical transformation-law checks,
//! - [`siegel`]: Siegel theta functions for the see-saw identity test.

pub mod classical;
pub mod cyclotomic;
pub mod group;
pub mod jacobi;
pub mod modularity;
pub mod rankin;
pub mod seesaw;
pub mod siegel;
pub mod theta;
pub mod vector;
pub mod weil;

pub use group::DiscGroup;
pub use vector::VectorForm;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormsError {
    #[error("series error: {0}")]
    Series(#[from] qexp::SeriesError),
    #[error("component supported on wrong exponents: nu={nu}, exponent {num}/{den}")]
    SupportCongruence { nu: u32, num: i64, den: i64 },
    #[error("discriminant groups do not match")]
    GroupMismatch,
    #[error("incompatible lattices / index data")]
    IncompatibleLattices,
    #[error("signature inconsistent with the quadratic module (Milgram check failed)")]
    SignatureMismatch,
    #[error("series precision too small for the requested numeric evaluation")]
    InsufficientPrecision,
    #[error("self-test against pinned expansion failed: {0}")]
    SelfTestFailure(String),
    #[error("correction solve failed: leading coefficient of the s={0} corrector vanishes")]
    CorrectionSolveFailure(i64),
    #[error("isometry check failed: {0}")]
    IsometryCheckFailure(String),
    #[error("weight {0}/2 not supported here")]
    WeightUnknown(i64),
    #[error("k={0} not supported: S_2k must vanish (k in {{2,3,4,5,7}})")]
    KNotSupported(i64),
}
