//! Exact polynomial ring ℚ(i)[z_{jk}, z̄_{jk}] over a `2n × 2n` variable grid.
//!
//! `z` and `z̄` are independent formal variables; conjugation relates them
//! only through [`Polynomial::conj`] and numeric evaluation.

mod format;
mod gaussian;
mod monomial;
mod polynomial;
mod random;

pub use gaussian::GaussianRational;
pub use monomial::{Monomial, VarKind, VariableId};
pub use polynomial::{poly_arith, ArithArg, ArithOp, Polynomial};
pub use random::random_polynomial;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffPolyError {
    #[error("ambient size mismatch: n = {left} vs n = {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("variable {var} out of bounds for n = {n}")]
    VariableOutOfBounds { var: VariableId, n: usize },
    #[error("pow needs a nonnegative integer exponent, not a polynomial")]
    PowNeedsExponent,
    #[error("add/sub/mul need a polynomial second argument")]
    ExponentForBinaryOp,
    #[error("matrix is {rows}x{cols}, expected {expected}x{expected}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },
    #[error("polynomial format error: {0}")]
    Format(String),
}

/// Row slice `(z_{j,k})_k` restricted to columns `cols`, as variables.
pub fn row_vars(kind: VarKind, row: u16, cols: std::ops::RangeInclusive<u16>) -> Vec<VariableId> {
    cols.map(|c| VariableId::new(kind, row, c)).collect()
}

/// Bilinear pairing `Σ_k a_k b_k` of two equal-length variable lists.
pub fn pairing(n: usize, a: &[VariableId], b: &[VariableId]) -> Polynomial {
    assert_eq!(a.len(), b.len(), "pairing of unequal lengths");
    let terms = a
        .iter()
        .zip(b.iter())
        .map(|(x, y)| (Monomial::var(*x).mul(&Monomial::var(*y)), GaussianRational::from_integer(1)));
    Polynomial::from_terms(n, terms).expect("pairing variables out of bounds")
}
