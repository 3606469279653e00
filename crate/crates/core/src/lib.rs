//! Exact computations with Lie algebras given by structure constants.
//!
//! The crate covers PBW normal forms in enveloping algebras, Whittaker pair
//! verification, generalized weight decompositions of finite-dimensional
//! modules, Whittaker vector solvers on truncated modules, highest weight
//! multiplicities, and explicit Ext computations for small solvable and Borel
//! algebras. All arithmetic is over the rationals and exact.

pub mod error;
pub mod exact_linear;
pub mod homology_ext;
pub mod lie_presentations;
pub mod output;
pub mod pbw_engine;
pub mod structure_analysis;
pub mod whittaker_modules;

pub use error::{Error, Result};
pub use exact_linear::{Scalar, SparseMatrix};
pub use lie_presentations::{LiePresentation, OverflowMode};
pub use pbw_engine::{StandardMonomial, UEAElement};
