//! Numerical toolkit for Berezin-number inequalities over finite-dimensional
//! reproducing-kernel Hilbert spaces.
//!
//! The crate models truncated Hardy/Bergman spaces and finite feature-table
//! spaces, evaluates Berezin symbols against normalized kernels, estimates
//! Berezin numbers and numerical radii by deterministic search, assembles
//! block operators over direct sums, and verifies a catalog of operator
//! inequalities on exact equality cases and seeded random ensembles.
//!
//! Estimated suprema are always lower estimates. Checkers therefore support
//! a certified mode in which right-hand-side estimates are replaced by
//! operator norms, making a reported violation meaningful rather than an
//! artifact of an undershot search.
//!
//! ```
//! use berlab::{basis_projection, berezin_number, numerical_radius, SearchConfig, SpaceModel};
//!
//! // Rank-one projection onto the degree-one basis function: its Berezin
//! // number tends to 1/4 while its numerical radius stays at 1.
//! let space = SpaceModel::hardy(64)?;
//! let op = basis_projection(64, 1);
//! let ber = berezin_number(&op, &space, &SearchConfig::default())?.value;
//! let w = numerical_radius(&op, 360, 40)?.value;
//! assert!((ber - 0.25).abs() < 5e-3);
//! assert!((w - 1.0).abs() < 1e-9);
//! # Ok::<(), berlab::Error>(())
//! ```

pub mod berezin;
pub mod cmatrix;
pub mod error;
pub mod harness;
pub mod inequalities;
pub mod io;
pub mod opmatrix;
pub mod radii;
pub mod report;
pub mod rkhs;

pub use num_complex::Complex64;

pub use berezin::{
    basis_projection, berezin_number, berezin_set_sample, berezin_symbol, euclid_berezin_number,
    BerezinEstimate, KernelSpace, SearchConfig,
};
pub use cmatrix::{inner, vec_norm, ComplexMatrix, HermEig};
pub use error::{Error, Result};
pub use harness::{
    gen_operator, run_suite, tightness_search, InstanceFamily, InstanceSpec, OperatorKind,
    SuiteResult, TightnessOutcome, ALL_CHECKERS, CATALOG,
};
pub use inequalities::{ExponentSet, FGPair, ProductVariant};
pub use opmatrix::{BlockOperator, CompressMode};
pub use radii::{half_norm_check, numerical_radius, RadiusEstimate};
pub use report::{CheckMode, CheckReport, Provenance, SubCheck};
pub use rkhs::{DirectSumSpace, DomainPoint, KernelVector, SpaceModel};
