//! Exact computations with bounded complexes of free modules over ℤ, ℚ
//! and prime fields, organized around the weight filtration given by
//! degreewise (stupid) truncation.
//!
//! Everything is certified: positive answers come with explicit
//! homotopies or decomposition data, and every certificate is
//! re-verified by exact arithmetic before it is returned.

pub mod complex;
pub mod counterexamples;
pub mod detectors;
pub mod doc;
pub mod gen;
pub mod linalg;
pub mod spherical;
pub mod suite;
pub mod weights;
