//! Exact-arithmetic engines for counting the constrained Gelfand-Tsetlin-type
//! lattice patterns behind random-matrix moments of moments, reconstructing the
//! associated counting polynomials by interpolation, and machine-checking their
//! structural properties (polynomiality, reciprocity, integer roots, symmetry,
//! bijections, non-integral vertices) at small parameter sizes.
//!
//! Everything is exact: counts are big integers, polynomial coefficients are
//! big rationals, and no floating point appears anywhere.

pub mod bijection;
pub mod cache;
pub mod pattern;
pub mod polytope;
pub mod reference;
pub mod transfer;
pub mod types;
pub mod verify;

mod poly;
pub use poly::{fit_quasi, interpolate, interpolate_nodes, QuasiPoly, RationalPoly};

pub use types::{Error, FamilySpec, Group, Pattern, Signature};

/// Engine version stamp recorded in cache files.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
