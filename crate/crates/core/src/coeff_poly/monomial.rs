//! Variables `z_{jk}` / `z̄_{jk}` and monomials in them.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Holomorphic (`z`) or antiholomorphic (`z̄`) matrix-entry variable.
///
/// The declaration order matters: holomorphic variables precede
/// antiholomorphic ones in the canonical variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Holo,
    Anti,
}

impl VarKind {
    pub fn conj(self) -> Self {
        match self {
            VarKind::Holo => VarKind::Anti,
            VarKind::Anti => VarKind::Holo,
        }
    }
}

/// One matrix-entry variable. `row` and `col` are 1-based.
///
/// The derived `Ord` is the canonical variable order: kind first (holo before
/// anti), then row, then column. A variable that sorts *earlier* is the
/// *larger* variable for the graded-lex monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableId {
    pub kind: VarKind,
    pub row: u16,
    pub col: u16,
}

impl VariableId {
    pub const fn new(kind: VarKind, row: u16, col: u16) -> Self {
        Self { kind, row, col }
    }

    pub const fn z(row: u16, col: u16) -> Self {
        Self::new(VarKind::Holo, row, col)
    }

    pub const fn zbar(row: u16, col: u16) -> Self {
        Self::new(VarKind::Anti, row, col)
    }

    pub fn conj(self) -> Self {
        Self::new(self.kind.conj(), self.row, self.col)
    }

    /// Whether the indices fit a `2n × 2n` grid.
    pub fn in_bounds(&self, n: usize) -> bool {
        let size = 2 * n;
        self.row >= 1 && self.col >= 1 && (self.row as usize) <= size && (self.col as usize) <= size
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Holo => write!(f, "z{}_{}", self.row, self.col),
            VarKind::Anti => write!(f, "zbar{}_{}", self.row, self.col),
        }
    }
}

/// A monomial: sorted `(variable, exponent)` pairs, all exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[(VariableId, u32); 6]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VariableId) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: VariableId, e: u32) -> Self {
        let mut m = Self::default();
        if e > 0 {
            m.exps.push((v, e));
        }
        m
    }

    /// Builds a monomial from arbitrary pairs; merges duplicates and drops
    /// zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (VariableId, u32)>>(pairs: I) -> Self {
        let mut exps: SmallVec<[(VariableId, u32); 6]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        exps.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(VariableId, u32); 6]> = SmallVec::with_capacity(exps.len());
        for (v, e) in exps {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Self { exps: out }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: VariableId) -> u32 {
        match self.exps.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => self.exps[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (VariableId, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(VariableId, u32); 6]> = SmallVec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.exps, &other.exps);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(VariableId, u32); 6]> = SmallVec::new();
        for &(v, e) in other.exps.iter() {
            let d = e - self.exponent(v);
            if d > 0 {
                out.push((v, d));
            }
        }
        Monomial { exps: out }
    }

    /// Lowers the exponent of `v` by one. Returns the removed exponent
    /// (0 if `v` is absent, in which case the monomial is unchanged).
    pub fn without_one(&self, v: VariableId) -> (u32, Monomial) {
        match self.exps.binary_search_by_key(&v, |p| p.0) {
            Ok(i) => {
                let e = self.exps[i].1;
                let mut exps = self.exps.clone();
                if e == 1 {
                    exps.remove(i);
                } else {
                    exps[i].1 -= 1;
                }
                (e, Monomial { exps })
            }
            Err(_) => (0, self.clone()),
        }
    }

    pub fn conj(&self) -> Monomial {
        Monomial::from_pairs(self.exps.iter().map(|&(v, e)| (v.conj(), e)))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order over the canonical variable order.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.exps.iter().zip(other.exps.iter()) {
            if a.0 != b.0 {
                // The side holding the earlier (larger) variable wins.
                return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.exps.len().cmp(&other.exps.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let z11 = Monomial::var(VariableId::z(1, 1));
        let z12 = Monomial::var(VariableId::z(1, 2));
        let zb11 = Monomial::var(VariableId::zbar(1, 1));
        assert!(z11 > z12);
        assert!(z12 > zb11);
        // degree dominates
        assert!(Monomial::var_pow(VariableId::zbar(2, 2), 2) > z11);
        // leading monomial of a row relation
        let a = z11.mul(&Monomial::var(VariableId::zbar(2, 1)));
        let b = z12.mul(&Monomial::var(VariableId::zbar(2, 2)));
        assert!(a > b);
    }

    #[test]
    fn mul_and_divide() {
        let a = Monomial::from_pairs([(VariableId::z(1, 1), 2), (VariableId::zbar(1, 1), 1)]);
        let b = Monomial::var(VariableId::z(1, 1));
        assert!(b.divides(&a));
        let q = b.quotient_of(&a);
        assert_eq!(q.mul(&b), a);
        assert_eq!(q.degree(), 2);
        assert!(!a.divides(&b));
    }

    #[test]
    fn from_pairs_merges() {
        let m = Monomial::from_pairs([(VariableId::z(2, 1), 1), (VariableId::z(1, 1), 0), (VariableId::z(2, 1), 2)]);
        assert_eq!(m.len(), 1);
        assert_eq!(m.exponent(VariableId::z(2, 1)), 3);
    }
}
