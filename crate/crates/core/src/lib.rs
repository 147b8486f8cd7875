//! Exact classification of algebraic tori through their character lattices.
//!
//! A torus split by a finite Galois extension with group `G` is determined by
//! its character lattice, a `G`-lattice. This crate computes the group and
//! Tate cohomology of such lattices, decides membership in the permutation /
//! stably permutation / invertible / flabby / coflabby hierarchy where it
//! can, builds explicit flabby resolutions `0 → M → P → F → 0`, and turns
//! these facts into rationality verdicts with re-checkable certificates.
//!
//! All arithmetic is exact over arbitrary-precision integers.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod format;
pub mod group;
pub mod isomorphism;
pub mod lattice;
pub mod linalg;
pub mod report;
pub mod resolution;

pub use classify::{
    is_coflabby, is_flabby, is_invertible, is_permutation, is_stably_permutation, rationality_verdict, Mode,
    RationalityLevel, RationalityReport, SearchBounds, Status, Verdict,
};
pub use cohomology::{h1, h1_profile, tate_minus1, tate_minus1_profile, CohomologyProfile};
pub use error::{Error, Result};
pub use group::{FiniteMatrixGroup, Subgroup, DEFAULT_ORDER_CAP};
pub use lattice::GLattice;
pub use linalg::{FiniteAbelianGroup, IntMatrix};
pub use resolution::{flabby_resolution, verify_resolution, Resolution};
