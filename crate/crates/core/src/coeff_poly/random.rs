use rand::Rng;

use super::{GaussianRational, Monomial, Polynomial, VarKind, VariableId};

/// Random polynomial with up to `num_terms` terms of total degree at most
/// `max_degree`, Gaussian-integer coefficients in `[-3, 3] + i[-3, 3]`.
pub fn random_polynomial<R: Rng + ?Sized>(n: usize, max_degree: u32, num_terms: usize, rng: &mut R) -> Polynomial {
    let size = (2 * n) as u16;
    let terms = (0..num_terms).map(|_| {
        let deg = rng.random_range(0..=max_degree);
        let m = Monomial::from_pairs((0..deg).map(|_| {
            let kind = if rng.random_bool(0.5) { VarKind::Holo } else { VarKind::Anti };
            (VariableId::new(kind, rng.random_range(1..=size), rng.random_range(1..=size)), 1)
        }));
        let re = rng.random_range(-3..=3i64);
        let im = rng.random_range(-3..=3i64);
        (m, &GaussianRational::from_integer(re) + &(&GaussianRational::i() * &GaussianRational::from_integer(im)))
    });
    Polynomial::from_terms(n, terms.collect::<Vec<_>>()).expect("indices in range")
}
