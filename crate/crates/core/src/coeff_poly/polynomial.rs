//! Sparse exact polynomials in the matrix-entry variables of a `2n × 2n` grid.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::monomial::{Monomial, VarKind, VariableId};
use super::CoeffPolyError;

/// A polynomial over ℚ(i). Terms are keyed by monomial in the canonical
/// graded-lex order, so the last entry is the leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

/// Selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Pow,
}

/// Second argument of [`poly_arith`]: a polynomial or a `pow` exponent.
#[derive(Clone, Debug)]
pub enum ArithArg<'a> {
    Poly(&'a Polynomial),
    Exp(u32),
}

/// Dispatching form of the ring operations.
pub fn poly_arith(op: ArithOp, a: &Polynomial, b: ArithArg<'_>) -> Result<Polynomial, CoeffPolyError> {
    match (op, b) {
        (ArithOp::Add, ArithArg::Poly(b)) => a.try_add(b),
        (ArithOp::Sub, ArithArg::Poly(b)) => a.try_sub(b),
        (ArithOp::Mul, ArithArg::Poly(b)) => a.try_mul(b),
        (ArithOp::Pow, ArithArg::Exp(e)) => Ok(a.pow(e)),
        (ArithOp::Pow, ArithArg::Poly(_)) => Err(CoeffPolyError::PowNeedsExponent),
        (_, ArithArg::Exp(_)) => Err(CoeffPolyError::ExponentForBinaryOp),
    }
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussianRational::one())
    }

    pub fn constant(n: usize, c: GaussianRational) -> Self {
        Self::monomial(n, Monomial::one(), c)
    }

    pub fn from_int(n: usize, c: i64) -> Self {
        Self::constant(n, GaussianRational::from_integer(c))
    }

    /// `c · m`. Panics if a variable of `m` is out of bounds.
    pub fn monomial(n: usize, m: Monomial, c: GaussianRational) -> Self {
        Self::try_monomial(n, m, c).expect("monomial variable out of bounds")
    }

    pub fn try_monomial(n: usize, m: Monomial, c: GaussianRational) -> Result<Self, CoeffPolyError> {
        check_monomial(n, &m)?;
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        Ok(p)
    }

    /// The single variable `v`. Panics if out of bounds.
    pub fn var(n: usize, v: VariableId) -> Self {
        Self::monomial(n, Monomial::var(v), GaussianRational::one())
    }

    /// `z_{row,col}`.
    pub fn z(n: usize, row: u16, col: u16) -> Self {
        Self::var(n, VariableId::z(row, col))
    }

    /// `z̄_{row,col}`.
    pub fn zbar(n: usize, row: u16, col: u16) -> Self {
        Self::var(n, VariableId::zbar(row, col))
    }

    /// Builds from arbitrary terms, merging equal monomials and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, CoeffPolyError>
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            check_monomial(n, &m)?;
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix size `2n`.
    pub fn size(&self) -> usize {
        2 * self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    /// Greatest monomial with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Whether every term has the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Sum of the moduli of all coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(GaussianRational::abs_f64).sum()
    }

    /// Adds `c · m` in place.
    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self -= c · m · g`, in place. Ambient sizes are assumed equal.
    pub fn sub_scaled_shift(&mut self, c: &GaussianRational, m: &Monomial, g: &Polynomial) {
        for (gm, gc) in g.terms.iter() {
            let prod = c * gc;
            self.add_term(m.mul(gm), &-prod);
        }
    }

    /// Removes and returns the leading term.
    pub fn pop_leading(&mut self) -> Option<(Monomial, GaussianRational)> {
        self.terms.pop_last()
    }

    fn check_same(&self, other: &Polynomial) -> Result<(), CoeffPolyError> {
        if self.n != other.n {
            return Err(CoeffPolyError::AmbientMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, CoeffPolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, CoeffPolyError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, CoeffPolyError> {
        self.check_same(other)?;
        let mut out = Polynomial::zero(self.n);
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `self^e` by repeated squaring; `p^0 = 1` (including `0^0`).
    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &GaussianRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), c * v)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Polynomial {
        self.scale(&GaussianRational::from_integer(k))
    }

    /// Complex conjugation: conjugates coefficients and swaps `z ↔ z̄`.
    pub fn conj(&self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    /// Formal `∂/∂v`, treating `z` and `z̄` as independent.
    pub fn partial_derivative(&self, v: VariableId) -> Result<Polynomial, CoeffPolyError> {
        check_var(self.n, v)?;
        let mut out = Polynomial::zero(self.n);
        for (m, c) in self.terms.iter() {
            let (e, rest) = m.without_one(v);
            if e > 0 {
                out.add_term(rest, &c.scale_int(e as i64));
            }
        }
        Ok(out)
    }

    /// First-order operator `Σ coeff · target · ∂/∂source` over the given
    /// `(source, target, coeff)` triples.
    pub fn apply_derivation(&self, pairs: &[(VariableId, VariableId, i64)]) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (m, c) in self.terms.iter() {
            for &(src, tgt, k) in pairs {
                let (e, rest) = m.without_one(src);
                if e > 0 {
                    out.add_term(rest.mul(&Monomial::var(tgt)), &c.scale_int(k * e as i64));
                }
            }
        }
        out
    }

    /// Ring homomorphism image. Variables missing from `assignment` map to
    /// themselves.
    pub fn substitute(&self, assignment: &HashMap<VariableId, Polynomial>) -> Result<Polynomial, CoeffPolyError> {
        for (v, img) in assignment.iter() {
            check_var(self.n, *v)?;
            if img.n != self.n {
                return Err(CoeffPolyError::AmbientMismatch { left: self.n, right: img.n });
            }
        }
        let mut powers: HashMap<(VariableId, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(self.n);
        for (m, c) in self.terms.iter() {
            let mut kept: Vec<(VariableId, u32)> = Vec::new();
            let mut acc = Polynomial::constant(self.n, c.clone());
            for (v, e) in m.iter() {
                match assignment.get(&v) {
                    None => kept.push((v, e)),
                    Some(img) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| img.pow(e));
                        acc = &acc * &*pw;
                    }
                }
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                continue;
            }
            let kept = Monomial::from_pairs(kept);
            for (am, ac) in acc.terms.into_iter() {
                out.add_term(am.mul(&kept), &ac);
            }
        }
        Ok(out)
    }

    /// Numeric value at `Z`: `z_{jk} ↦ Z_{jk}`, `z̄_{jk} ↦ conj(Z_{jk})`.
    pub fn evaluate_at_matrix(&self, z: &DMatrix<Complex64>) -> Result<Complex64, CoeffPolyError> {
        let size = self.size();
        if z.nrows() != size || z.ncols() != size {
            return Err(CoeffPolyError::DimensionMismatch { expected: size, rows: z.nrows(), cols: z.ncols() });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms.iter() {
            let mut val = Complex64::new(1.0, 0.0);
            for (v, e) in m.iter() {
                let entry = z[(v.row as usize - 1, v.col as usize - 1)];
                let x = match v.kind {
                    VarKind::Holo => entry,
                    VarKind::Anti => entry.conj(),
                };
                val *= x.powu(e);
            }
            total += val * c.to_complex64();
        }
        Ok(total)
    }

    /// Changes the recorded ambient size. Fails if a variable would fall out
    /// of bounds.
    pub fn with_ambient(&self, n: usize) -> Result<Polynomial, CoeffPolyError> {
        for m in self.terms.keys() {
            check_monomial(n, m)?;
        }
        Ok(Polynomial { n, terms: self.terms.clone() })
    }
}

pub(crate) fn check_var(n: usize, v: VariableId) -> Result<(), CoeffPolyError> {
    if v.in_bounds(n) {
        Ok(())
    } else {
        Err(CoeffPolyError::VariableOutOfBounds { var: v, n })
    }
}

fn check_monomial(n: usize, m: &Monomial) -> Result<(), CoeffPolyError> {
    for (v, _) in m.iter() {
        check_var(n, v)?;
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

// Operator impls panic on ambient mismatch; use the `try_*` methods to recover.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("ambient size mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("ambient size mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("ambient size mismatch")
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(r: u16, c: u16) -> Polynomial {
        Polynomial::z(1, r, c)
    }

    fn zb(r: u16, c: u16) -> Polynomial {
        Polynomial::zbar(1, r, c)
    }

    #[test]
    fn additive_inverse_is_empty() {
        let p = &z(1, 1) + &(-&z(1, 1));
        assert!(p.is_zero());
        assert_eq!(p.n(), 1);
    }

    #[test]
    fn monomial_product() {
        let p = &z(1, 1) * &zb(2, 1);
        assert_eq!(p.num_terms(), 1);
        let m = Monomial::from_pairs([(VariableId::z(1, 1), 1), (VariableId::zbar(2, 1), 1)]);
        assert_eq!(p.coeff(&m), GaussianRational::one());
    }

    #[test]
    fn binomial_square() {
        let s = &z(1, 1) + &z(1, 2);
        let p = poly_arith(ArithOp::Pow, &s, ArithArg::Exp(2)).unwrap();
        let expected = &(&(&z(1, 1) * &z(1, 1)) + &(&z(1, 1) * &z(1, 2)).scale_int(2)) + &(&z(1, 2) * &z(1, 2));
        assert_eq!(p, expected);
        assert_eq!(s.pow(0), Polynomial::one(1));
    }

    #[test]
    fn arith_errors() {
        let a = Polynomial::z(1, 1, 1);
        let b = Polynomial::z(2, 1, 1);
        assert!(matches!(a.try_add(&b), Err(CoeffPolyError::AmbientMismatch { .. })));
        assert!(matches!(
            poly_arith(ArithOp::Pow, &a, ArithArg::Poly(&a)),
            Err(CoeffPolyError::PowNeedsExponent)
        ));
    }

    #[test]
    fn derivatives() {
        let d = (&z(1, 1) * &z(1, 1)).partial_derivative(VariableId::z(1, 1)).unwrap();
        assert_eq!(d, z(1, 1).scale_int(2));
        let d = (&z(1, 1) * &zb(1, 1)).partial_derivative(VariableId::zbar(1, 1)).unwrap();
        assert_eq!(d, z(1, 1));
        assert!(z(1, 2).partial_derivative(VariableId::z(1, 1)).unwrap().is_zero());
        assert!(z(1, 1).partial_derivative(VariableId::z(3, 1)).is_err());
    }

    #[test]
    fn substitution_examples() {
        let p = &z(1, 1) * &zb(2, 1);
        let mut a = HashMap::new();
        a.insert(VariableId::z(1, 1), z(1, 1));
        a.insert(VariableId::zbar(2, 1), Polynomial::zero(1));
        assert!(p.substitute(&a).unwrap().is_zero());

        let q = &z(1, 1) + &z(1, 2);
        assert_eq!(q.substitute(&HashMap::new()).unwrap(), q);

        let det = &(&z(1, 1) * &z(2, 2)) - &(&z(1, 2) * &z(2, 1));
        let mut a = HashMap::new();
        a.insert(VariableId::z(1, 2), Polynomial::zero(1));
        a.insert(VariableId::z(2, 1), Polynomial::zero(1));
        assert_eq!(det.substitute(&a).unwrap(), &z(1, 1) * &z(2, 2));
    }

    #[test]
    fn evaluation() {
        let id = DMatrix::<Complex64>::identity(2, 2);
        assert_eq!(z(1, 1).evaluate_at_matrix(&id).unwrap(), Complex64::new(1.0, 0.0));
        let m = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.0, 1.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        // z11 * zbar11 = |i|^2 = 1
        let v = (&z(1, 1) * &zb(1, 1)).evaluate_at_matrix(&m).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(z(1, 1).evaluate_at_matrix(&DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn leading_term_is_greatest() {
        let p = &(&z(1, 2) * &zb(2, 2)) + &(&z(1, 1) * &zb(2, 1));
        let (m, _) = p.leading_term().unwrap();
        assert_eq!(m.exponent(VariableId::z(1, 1)), 1);
    }
}
