//! Exact and Monte Carlo machinery for angle vectors of polytopes.
//!
//! The crate computes interior and exterior angle vectors (and their flag
//! refinements) of convex polytopes under pluggable cone-angle valuations,
//! together with the matching combinatorial invariants: Whitney and
//! flag-Whitney numbers of lattices of flats, cocharacteristic polynomials,
//! and ab-indices of graded posets. All geometry is exact over the rationals;
//! angle evaluations are either closed-form or seeded Monte Carlo estimates
//! with explicit error bars.

pub mod abindex;
pub mod angle;
pub mod cli;
pub mod cone;
pub mod conegroup;
pub mod error;
pub mod estimate;
pub mod fixtures;
pub mod incidence;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod poset;
pub mod rat;
pub mod report;
pub mod vectors;
pub mod zonotope;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
