//! Exact intersection theory and line-bundle cohomology on rational surfaces,
//! and the generating functions `Z^r(t) = sum_n h^0(M, lambda_{c^r_n}) t^n` of
//! theta bundles on moduli of one-dimensional sheaves.
//!
//! All arithmetic is exact. The modules are generic over an integer
//! [`Scalar`]; the aliases below fix it to [`BigInt`], which is what the CLI
//! uses.

pub mod cli;
pub mod cohom;
pub mod conditions;
pub mod error;
pub mod picard;
pub mod powerseries;
pub mod scalar;
pub mod theta;

pub use num_bigint::BigInt;

pub use conditions::{Branch, Condition};
pub use error::{Error, Result};
pub use picard::{Surface, SurfaceKind};
pub use scalar::Scalar;
pub use theta::GradedBundle;

pub type Divisor = picard::DivisorClass<BigInt>;
pub type Sheaf = picard::SheafClass<BigInt>;
pub type Cohomology = cohom::CohomologyTable<BigInt>;
pub type Poly = powerseries::Polynomial<BigInt>;
pub type Series = powerseries::SeriesCoefficients<BigInt>;
pub type Decomposition = conditions::Decomposition<BigInt>;
pub type ConditionReport = conditions::ConditionReport<BigInt>;
pub type Context = theta::ThetaContext<BigInt>;
