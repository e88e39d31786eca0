//! Exact and numeric verification of Lie-algebra operators, Casimir
//! eigen-polynomials, cohomological test vectors and Shalika-model weight
//! combinatorics for `GL(2n, C)`.

pub mod cli;
pub mod coeff_poly;
pub mod coset_geometry;
pub mod lie_action;
pub mod linalg;
pub mod report;
pub mod test_vectors;
pub mod unitary_congruence;
pub mod weight_theory;
