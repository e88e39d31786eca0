//! Dense complex matrix helpers: Haar sampling, matrix exponential, block
//! assembly.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (`E|g|² = 1`).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    CMat::from_fn(dim, dim, |_, _| complex_gaussian(rng))
}

/// Haar-random `dim × dim` unitary from a generator.
pub fn haar_unitary_from_rng<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(dim, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let nrm = d.norm();
        let phase = if nrm > 0.0 { d / nrm } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random `dim × dim` unitary, deterministic in `seed`.
pub fn haar_unitary_dim(dim: usize, seed: u64) -> CMat {
    haar_unitary_from_rng(dim, &mut seeded_rng(seed))
}

/// Random antihermitian matrix (an element of `u(dim)`) with Gaussian entries.
pub fn random_antihermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = gaussian_matrix(dim, rng);
    (&g - g.adjoint()).scale(0.5)
}

/// Matrix exponential by scaling and squaring of the truncated Taylor series.
pub fn expm(x: &CMat) -> CMat {
    let dim = x.nrows();
    let norm = x.iter().map(|c| c.norm()).sum::<f64>().max(0.0);
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let y = x.unscale(2f64.powi(s as i32));
    let mut result = CMat::identity(dim, dim);
    let mut term = CMat::identity(dim, dim);
    for k in 1..=24 {
        term = (&term * &y).unscale(k as f64);
        result += &term;
        if term.iter().all(|c| c.norm() < 1e-300) {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// `diag(a, b)` as a block matrix.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = CMat::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

/// Diagonal matrix with the given entries.
pub fn diag(entries: &[Complex64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

/// Largest entry modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `max |U Uᴴ − I|` entrywise.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let id = CMat::identity(u.nrows(), u.ncols());
    max_abs(&(u * u.adjoint() - id))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary_and_deterministic() {
        for seed in 0..10 {
            let u = haar_unitary_dim(4, seed);
            assert!(unitarity_defect(&u) < 1e-12);
            assert!((u.determinant().norm() - 1.0).abs() < 1e-12);
            assert_eq!(u, haar_unitary_dim(4, seed));
        }
    }

    #[test]
    fn expm_of_diagonal() {
        let x = diag(&[Complex64::new(0.0, 1.0), Complex64::new(2.0, 0.0)]);
        let e = expm(&x);
        assert!((e[(0, 0)] - Complex64::new(0.0, 1.0).exp()).norm() < 1e-13);
        assert!((e[(1, 1)] - Complex64::new(2.0f64.exp(), 0.0)).norm() < 1e-12);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn expm_of_antihermitian_is_unitary() {
        let mut rng = seeded_rng(7);
        let x = random_antihermitian(4, &mut rng).scale(3.0);
        assert!(unitarity_defect(&expm(&x)) < 1e-12);
    }

    #[test]
    fn haar_mean_of_corner_entry() {
        // E|U_11|^2 = 1/dim under Haar measure.
        let dim = 4;
        let samples = 1000;
        let vals: Vec<f64> = (0..samples).map(|s| haar_unitary_dim(dim, s).index((0, 0)).norm_sqr()).collect();
        let mean = vals.iter().sum::<f64>() / samples as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
        let se = (var / samples as f64).sqrt();
        assert!((mean - 1.0 / dim as f64).abs() < 5.0 * se, "mean {mean}, se {se}");
    }
}
