//! `gl(2n, C)` acting on ℚ(i)[z, z̄] by first-order differential operators.
//!
//! `H_γ = Σ_α z_{α,γ} ∂/∂z_{α,γ} − z̄_{α,γ} ∂/∂z̄_{α,γ}` and
//! `E_{αβ} = Σ_γ z_{γ,α} ∂/∂z_{γ,β} − z̄_{γ,β} ∂/∂z̄_{γ,α}`.
//! For antihermitian `X` these agree with the flow derivative
//! `d/dt f(Z·exp tX, conj(Z·exp tX))` at `t = 0`, where the matrix
//! unit `e_{αβ}` acts as `E_{αβ}`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::coeff_poly::{CoeffPolyError, GaussianRational, Polynomial, VariableId};
use crate::linalg::{expm, CMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("index {index} outside [1, {size}]")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("root operator needs distinct indices, got ({0}, {0})")]
    EqualIndices(usize),
    #[error("basis operator needs alpha < beta, got ({0}, {1})")]
    UnorderedIndices(usize, usize),
    #[error("step h must be positive")]
    NonPositiveStep,
    #[error(transparent)]
    Poly(#[from] CoeffPolyError),
}

/// A named element of the operator basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorId {
    H(usize),
    Root(usize, usize),
    /// `E_{αβ} − E_{βα}`.
    AntiSym(usize, usize),
    /// `i(E_{αβ} + E_{βα})`.
    SymI(usize, usize),
}

fn check_index(i: usize, n: usize) -> Result<(), LieError> {
    if i == 0 || i > 2 * n {
        Err(LieError::IndexOutOfRange { index: i, size: 2 * n })
    } else {
        Ok(())
    }
}

fn check_root(alpha: usize, beta: usize, n: usize) -> Result<(), LieError> {
    check_index(alpha, n)?;
    check_index(beta, n)?;
    if alpha == beta {
        return Err(LieError::EqualIndices(alpha));
    }
    Ok(())
}

fn h_pairs(gamma: usize, n: usize) -> Vec<(VariableId, VariableId, i64)> {
    let g = gamma as u16;
    let mut pairs = Vec::with_capacity(4 * n);
    for a in 1..=(2 * n) as u16 {
        pairs.push((VariableId::z(a, g), VariableId::z(a, g), 1));
        pairs.push((VariableId::zbar(a, g), VariableId::zbar(a, g), -1));
    }
    pairs
}

fn root_pairs(alpha: usize, beta: usize, n: usize) -> Vec<(VariableId, VariableId, i64)> {
    let (a, b) = (alpha as u16, beta as u16);
    let mut pairs = Vec::with_capacity(4 * n);
    for g in 1..=(2 * n) as u16 {
        pairs.push((VariableId::z(g, b), VariableId::z(g, a), 1));
        pairs.push((VariableId::zbar(g, a), VariableId::zbar(g, b), -1));
    }
    pairs
}

/// `H_γ p`.
pub fn apply_h(gamma: usize, p: &Polynomial) -> Result<Polynomial, LieError> {
    check_index(gamma, p.n())?;
    Ok(p.apply_derivation(&h_pairs(gamma, p.n())))
}

/// `E_{αβ} p`.
pub fn apply_root(alpha: usize, beta: usize, p: &Polynomial) -> Result<Polynomial, LieError> {
    check_root(alpha, beta, p.n())?;
    Ok(p.apply_derivation(&root_pairs(alpha, beta, p.n())))
}

/// Any basis operator applied to `p`.
pub fn apply_operator(op: OperatorId, p: &Polynomial) -> Result<Polynomial, LieError> {
    match op {
        OperatorId::H(g) => apply_h(g, p),
        OperatorId::Root(a, b) => apply_root(a, b, p),
        OperatorId::AntiSym(a, b) | OperatorId::SymI(a, b) => {
            if a >= b {
                return Err(LieError::UnorderedIndices(a, b));
            }
            let x = apply_root(a, b, p)?;
            let y = apply_root(b, a, p)?;
            Ok(match op {
                OperatorId::AntiSym(..) => &x - &y,
                _ => (&x + &y).scale(&GaussianRational::i()),
            })
        }
    }
}

/// `Ω p = Σ_γ H_γ² p + Σ_{α<β} (E_{αβ}E_{βα} + E_{βα}E_{αβ}) p`, by literal
/// composition.
pub fn apply_casimir(p: &Polynomial) -> Polynomial {
    let size = p.size();
    let mut out = Polynomial::zero(p.n());
    for g in 1..=size {
        let once = apply_h(g, p).expect("index in range");
        out = &out + &apply_h(g, &once).expect("index in range");
    }
    for a in 1..=size {
        for b in (a + 1)..=size {
            let ba = apply_root(b, a, p).expect("index in range");
            let ab = apply_root(a, b, p).expect("index in range");
            out = &out + &apply_root(a, b, &ba).expect("index in range");
            out = &out + &apply_root(b, a, &ab).expect("index in range");
        }
    }
    out
}

/// `(E_{αβ}E_{βα} − E_{βα}E_{αβ} − (H_α − H_β)) p`; identically zero.
pub fn bracket_defect(alpha: usize, beta: usize, p: &Polynomial) -> Result<Polynomial, LieError> {
    check_root(alpha, beta, p.n())?;
    let ab_ba = apply_root(alpha, beta, &apply_root(beta, alpha, p)?)?;
    let ba_ab = apply_root(beta, alpha, &apply_root(alpha, beta, p)?)?;
    let h = &apply_h(alpha, p)? - &apply_h(beta, p)?;
    Ok(&(&ab_ba - &ba_ab) - &h)
}

/// `[Ω, E_{αβ}] p`; identically zero.
pub fn casimir_commutator(alpha: usize, beta: usize, p: &Polynomial) -> Result<Polynomial, LieError> {
    let a = apply_root(alpha, beta, &apply_casimir(p))?;
    let b = apply_casimir(&apply_root(alpha, beta, p)?);
    Ok(&a - &b)
}

/// Symbolic action of the matrix `X = Σ X_{αβ} e_{αβ}` on `p`, evaluated at `Z`:
/// `Σ_γ X_{γγ} (H_γ p)(Z) + Σ_{α≠β} X_{αβ} (E_{αβ} p)(Z)`.
pub fn symbolic_action_at(p: &Polynomial, x: &CMat, z: &CMat) -> Result<Complex64, LieError> {
    let size = p.size();
    check_dims(size, x)?;
    check_dims(size, z)?;
    let mut total = Complex64::new(0.0, 0.0);
    for a in 1..=size {
        for b in 1..=size {
            let coeff = x[(a - 1, b - 1)];
            if coeff == Complex64::new(0.0, 0.0) {
                continue;
            }
            let image = if a == b { apply_h(a, p)? } else { apply_root(a, b, p)? };
            total += coeff * image.evaluate_at_matrix(z)?;
        }
    }
    Ok(total)
}

/// Central difference `(f(Z e^{hX}) − f(Z e^{−hX})) / 2h`.
pub fn numeric_flow_derivative(p: &Polynomial, x: &CMat, z: &CMat, h: f64) -> Result<Complex64, LieError> {
    if h.is_nan() || h <= 0.0 {
        return Err(LieError::NonPositiveStep);
    }
    let size = p.size();
    check_dims(size, x)?;
    check_dims(size, z)?;
    let fwd = z * expm(&x.scale(h));
    let bwd = z * expm(&x.scale(-h));
    let f1 = p.evaluate_at_matrix(&fwd)?;
    let f0 = p.evaluate_at_matrix(&bwd)?;
    Ok((f1 - f0) / (2.0 * h))
}

fn check_dims(size: usize, m: &DMatrix<Complex64>) -> Result<(), LieError> {
    if m.nrows() != size || m.ncols() != size {
        return Err(CoeffPolyError::DimensionMismatch { expected: size, rows: m.nrows(), cols: m.ncols() }.into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary_dim, random_antihermitian, seeded_rng};

    fn z(n: usize, r: u16, c: u16) -> Polynomial {
        Polynomial::z(n, r, c)
    }

    fn zb(n: usize, r: u16, c: u16) -> Polynomial {
        Polynomial::zbar(n, r, c)
    }

    /// `⟨u_j, u_l⟩ = Σ_{i≤n} z_{j,i} z̄_{l,i}`.
    fn pairing_u(n: usize, j: u16, l: u16) -> Polynomial {
        let mut p = Polynomial::zero(n);
        for i in 1..=n as u16 {
            p = &p + &(&z(n, j, i) * &zb(n, l, i));
        }
        p
    }

    #[test]
    fn h_examples() {
        assert_eq!(apply_h(1, &z(1, 1, 1)).unwrap(), z(1, 1, 1));
        assert!(apply_h(2, &z(1, 1, 1)).unwrap().is_zero());
        assert_eq!(apply_h(1, &zb(1, 1, 1)).unwrap(), -zb(1, 1, 1));
        assert!(apply_h(3, &z(1, 1, 1)).is_err());
    }

    #[test]
    fn root_examples() {
        assert_eq!(apply_root(1, 2, &z(1, 1, 2)).unwrap(), z(1, 1, 1));
        assert_eq!(apply_root(1, 2, &zb(1, 1, 1)).unwrap(), -zb(1, 1, 2));
        assert!(apply_root(1, 2, &z(1, 1, 1)).unwrap().is_zero());
        assert_eq!(apply_root(1, 1, &z(1, 1, 1)), Err(LieError::EqualIndices(1)));
    }

    #[test]
    fn casimir_examples() {
        let phi = &z(1, 1, 1) * &zb(1, 2, 1);
        let expected = &(&z(1, 1, 1) * &zb(1, 2, 1)).scale_int(2) - &(&z(1, 1, 2) * &zb(1, 2, 2)).scale_int(2);
        assert_eq!(apply_casimir(&phi), expected);
        assert!(apply_casimir(&Polynomial::one(2)).is_zero());
    }

    #[test]
    fn bracket_on_z11() {
        assert!(bracket_defect(1, 2, &z(1, 1, 1)).unwrap().is_zero());
        assert!(bracket_defect(1, 2, &Polynomial::from_int(1, 7)).unwrap().is_zero());
    }

    #[test]
    fn basis_composites() {
        let p = z(1, 1, 2);
        assert_eq!(apply_operator(OperatorId::AntiSym(1, 2), &p).unwrap(), z(1, 1, 1));
        assert_eq!(
            apply_operator(OperatorId::SymI(1, 2), &p).unwrap(),
            z(1, 1, 1).scale(&GaussianRational::i())
        );
        assert!(apply_operator(OperatorId::SymI(2, 1), &p).is_err());
    }

    #[test]
    fn first_order_on_components() {
        // H_γ and E_{αβ} on single entries of u_j, ū_j, v_j, v̄_j.
        let n = 2;
        let size = 2 * n;
        for j in 1..=size as u16 {
            for i in 1..=n as u16 {
                for g in 1..=size as u16 {
                    let d = |a: u16, b: u16| if a == b { 1 } else { 0 };
                    // u_j component i
                    assert_eq!(apply_h(g as usize, &z(n, j, i)).unwrap(), z(n, j, g).scale_int(d(g, i)));
                    assert_eq!(apply_h(g as usize, &zb(n, j, i)).unwrap(), zb(n, j, g).scale_int(-d(g, i)));
                    // v_j component i is column n + i
                    let c = n as u16 + i;
                    assert_eq!(apply_h(g as usize, &z(n, j, c)).unwrap(), z(n, j, g).scale_int(d(g, c)));
                    assert_eq!(apply_h(g as usize, &zb(n, j, c)).unwrap(), zb(n, j, g).scale_int(-d(g, c)));
                }
                for a in 1..=size as u16 {
                    for b in 1..=size as u16 {
                        if a == b {
                            continue;
                        }
                        let d = |x: u16, y: u16| if x == y { 1 } else { 0 };
                        let (au, bu) = (a as usize, b as usize);
                        assert_eq!(apply_root(au, bu, &z(n, j, i)).unwrap(), z(n, j, a).scale_int(d(b, i)));
                        assert_eq!(apply_root(au, bu, &zb(n, j, i)).unwrap(), zb(n, j, b).scale_int(-d(a, i)));
                        let c = n as u16 + i;
                        assert_eq!(apply_root(au, bu, &z(n, j, c)).unwrap(), z(n, j, a).scale_int(d(b, c)));
                        assert_eq!(apply_root(au, bu, &zb(n, j, c)).unwrap(), zb(n, j, b).scale_int(-d(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn operators_on_pairing() {
        let n = 2;
        let size = 2 * n;
        for j in 1..=size as u16 {
            for l in 1..=size as u16 {
                let phi = pairing_u(n, j, l);
                for g in 1..=size {
                    assert!(apply_h(g, &phi).unwrap().is_zero());
                    assert!(apply_h(g, &apply_h(g, &phi).unwrap()).unwrap().is_zero());
                }
                for a in 1..=size {
                    for b in 1..=size {
                        if a == b {
                            continue;
                        }
                        let got = apply_root(a, b, &apply_root(b, a, &phi).unwrap()).unwrap();
                        let term = |c: usize| &z(n, j, c as u16) * &zb(n, l, c as u16);
                        let expected = if a <= n && b > n {
                            &term(a) - &term(b)
                        } else if b <= n && a > n {
                            &term(b) - &term(a)
                        } else {
                            Polynomial::zero(n)
                        };
                        assert_eq!(got, expected, "j={j} l={l} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn flow_derivative_matches_h() {
        // X = i·e_11 scales column 1 by e^{it}.
        let mut x = CMat::zeros(2, 2);
        x[(0, 0)] = Complex64::new(0.0, 1.0);
        let id = CMat::identity(2, 2);
        let p = z(1, 1, 1);
        let num = numeric_flow_derivative(&p, &x, &id, 1e-4).unwrap();
        let sym = symbolic_action_at(&p, &x, &id).unwrap();
        assert!((num - Complex64::new(0.0, 1.0)).norm() < 1e-7);
        assert!((num - sym).norm() < 1e-7);
        let c = Polynomial::from_int(1, 3);
        assert!(numeric_flow_derivative(&c, &x, &id, 1e-4).unwrap().norm() < 1e-10);
        assert!(numeric_flow_derivative(&c, &x, &id, 0.0).is_err());
    }

    #[test]
    fn flow_derivative_on_phi() {
        let n = 2;
        let p = pairing_u(n, 1, 2);
        let mut rng = seeded_rng(3);
        for s in 0..5 {
            let x = random_antihermitian(2 * n, &mut rng);
            let u = haar_unitary_dim(2 * n, 100 + s);
            let num = numeric_flow_derivative(&p, &x, &u, 1e-4).unwrap();
            let sym = symbolic_action_at(&p, &x, &u).unwrap();
            assert!((num - sym).norm() < 1e-6);
        }
    }
}
