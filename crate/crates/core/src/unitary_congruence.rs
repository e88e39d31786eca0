//! Congruences modulo the vanishing ideal of `U(2n)`.
//!
//! The exact path divides by the entries of `Z Z̄ᵀ − I` and `Z̄ᵀ Z − I`; a
//! zero remainder certifies membership. Otherwise the difference is sampled
//! at Haar-random unitaries.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff_poly::{Monomial, Polynomial, VariableId};
use crate::linalg::{haar_unitary_dim, CMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    CertifiedExact,
    NumericPass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckPath {
    Exact,
    Numeric,
}

/// Outcome of a congruence or identity check.
///
/// `max_abs_error` on the numeric path is already divided by the scale
/// factor, so `numeric_pass` means `max_abs_error ≤ tol`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceVerdict {
    pub status: VerdictStatus,
    pub path: CheckPath,
    pub max_abs_error: f64,
    pub samples_used: usize,
    pub remainder_terms: usize,
}

impl CongruenceVerdict {
    /// Exact verdict: certified iff nothing is left over.
    pub fn exact(remainder_terms: usize) -> Self {
        Self {
            status: if remainder_terms == 0 { VerdictStatus::CertifiedExact } else { VerdictStatus::Fail },
            path: CheckPath::Exact,
            max_abs_error: 0.0,
            samples_used: 0,
            remainder_terms,
        }
    }

    /// Numeric verdict from a worst-case error over `samples` points.
    pub fn numeric(max_abs_error: f64, samples: usize, tol: f64) -> Self {
        let ok = max_abs_error.is_finite() && max_abs_error <= tol;
        Self {
            status: if ok { VerdictStatus::NumericPass } else { VerdictStatus::Fail },
            path: CheckPath::Numeric,
            max_abs_error,
            samples_used: samples,
            remainder_terms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != VerdictStatus::Fail
    }

    pub fn is_exact(&self) -> bool {
        self.status == VerdictStatus::CertifiedExact
    }

    /// Combines verdicts of sub-checks: fails if any fails; exact only if all
    /// are exact.
    pub fn combine<I: IntoIterator<Item = CongruenceVerdict>>(parts: I) -> Self {
        let mut out = Self::exact(0);
        for v in parts {
            out.max_abs_error = out.max_abs_error.max(v.max_abs_error);
            out.samples_used += v.samples_used;
            out.remainder_terms += v.remainder_terms;
            if v.path == CheckPath::Numeric {
                out.path = CheckPath::Numeric;
            }
            out.status = match (out.status, v.status) {
                (VerdictStatus::Fail, _) | (_, VerdictStatus::Fail) => VerdictStatus::Fail,
                (VerdictStatus::NumericPass, _) | (_, VerdictStatus::NumericPass) => VerdictStatus::NumericPass,
                _ => VerdictStatus::CertifiedExact,
            };
        }
        out
    }
}

/// The `(2n)²` row relations `r_{jl} = Σ_k z_{j,k} z̄_{l,k} − δ_{jl}`
/// (j-major), followed by the `(2n)²` column relations
/// `c_{jl} = Σ_k z_{k,j} z̄_{k,l} − δ_{jl}`.
pub fn relation_generators(n: usize) -> Vec<Polynomial> {
    let size = 2 * n as u16;
    let mut gens = Vec::with_capacity(2 * (size as usize).pow(2));
    for transpose in [false, true] {
        for j in 1..=size {
            for l in 1..=size {
                let terms = (1..=size).map(|k| {
                    let (a, b) = if transpose {
                        (VariableId::z(k, j), VariableId::zbar(k, l))
                    } else {
                        (VariableId::z(j, k), VariableId::zbar(l, k))
                    };
                    (Monomial::var(a).mul(&Monomial::var(b)), 1i64.into())
                });
                let mut g = Polynomial::from_terms(n, terms).expect("indices in range");
                if j == l {
                    g = &g - &Polynomial::one(n);
                }
                gens.push(g);
            }
        }
    }
    gens
}

/// Multivariate division in graded-lex order. Each step cancels the current
/// leading term with the first generator whose leading monomial divides it,
/// or moves it to the remainder. Returns the remainder and the number of
/// reduction steps.
pub fn reduce_by_relations(p: &Polynomial, gens: &[Polynomial]) -> (Polynomial, usize) {
    let leads: Vec<(Monomial, _)> = gens
        .iter()
        .filter_map(|g| g.leading_term().map(|(m, c)| (m.clone(), c.inv().expect("nonzero lead"))))
        .collect();
    let live: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    let mut work = p.clone();
    let mut remainder = Polynomial::zero(p.n());
    let mut steps = 0usize;
    while let Some((m, c)) = work.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let (lm, inv) = &leads[i];
                let q = lm.quotient_of(&m);
                work.sub_scaled_shift(&(&c * inv), &q, live[i]);
                steps += 1;
            }
            None => {
                work.pop_leading();
                remainder.add_term(m, &c);
            }
        }
    }
    (remainder, steps)
}

/// Haar-random `2n × 2n` unitary, deterministic in `seed`.
pub fn haar_unitary(n: usize, seed: u64) -> CMat {
    haar_unitary_dim(2 * n, seed)
}

/// Worst `|p(U_i)| / scale` over Haar samples `U_i` with seeds `seed + i`.
pub fn max_scaled_value(p: &Polynomial, samples: usize, seed: u64, scale: f64) -> f64 {
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let u = haar_unitary(p.n(), seed.wrapping_add(i as u64));
            let v = p.evaluate_at_matrix(&u).expect("dimension matches ambient");
            v.norm() / scale
        })
        .reduce(|| 0.0, f64::max)
}

/// Decides `p ≡ q (mod I)`: exact division first, Haar sampling second.
pub fn congruent_mod_i(p: &Polynomial, q: &Polynomial, tol: f64, samples: usize, seed: u64) -> CongruenceVerdict {
    let diff = p - q;
    let (rem, _) = reduce_by_relations(&diff, &relation_generators(p.n()));
    if rem.is_zero() {
        return CongruenceVerdict::exact(0);
    }
    let scale = diff.l1_norm().max(1.0);
    let err = max_scaled_value(&diff, samples, seed, scale);
    let mut v = CongruenceVerdict::numeric(err, samples, tol);
    v.remainder_terms = rem.num_terms();
    v
}

/// `det (r_{j,l})_{j∈rows, l∈cols}`, a minor of the relation matrix
/// `Z Z̄ᵀ − I`; it lies in the ideal generated by the row relations.
pub fn relation_minor(n: usize, rows: &[usize], cols: &[usize]) -> Polynomial {
    assert_eq!(rows.len(), cols.len(), "square minor");
    let gens = relation_generators(n);
    let size = 2 * n;
    let entry = |j: usize, l: usize| &gens[(j - 1) * size + (l - 1)];
    fn det(rows: &[usize], cols: &[usize], entry: &dyn Fn(usize, usize) -> Polynomial, n: usize) -> Polynomial {
        if rows.is_empty() {
            return Polynomial::one(n);
        }
        let mut out = Polynomial::zero(n);
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect();
            let term = &entry(rows[0], c) * &det(&rows[1..], &rest, entry, n);
            out = if k % 2 == 0 { &out + &term } else { &out - &term };
        }
        out
    }
    det(rows, cols, &|j, l| entry(j, l).clone(), n)
}

/// All minors of size `2..=max_size` with rows from `rows` and columns
/// from `cols`.
pub fn relation_minors(n: usize, rows: &[usize], cols: &[usize], max_size: usize) -> Vec<Polynomial> {
    fn subsets(v: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        if v.len() < k {
            return Vec::new();
        }
        let mut out: Vec<Vec<usize>> = subsets(&v[1..], k - 1)
            .into_iter()
            .map(|mut s| {
                s.insert(0, v[0]);
                s
            })
            .collect();
        out.extend(subsets(&v[1..], k));
        out
    }
    let mut out = Vec::new();
    for k in 2..=max_size {
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                out.push(relation_minor(n, &r, &c));
            }
        }
    }
    out
}

/// Exact membership of `p` in the ideal generated by the relations and
/// `extra` (each `extra` element must itself lie in that ideal). The extras
/// are first reduced by the relations, then appended after them.
pub fn reduce_with_extra(p: &Polynomial, extra: &[Polynomial]) -> Polynomial {
    let mut gens = relation_generators(p.n());
    let (rem, _) = reduce_by_relations(p, &gens);
    if rem.is_zero() || extra.is_empty() {
        return rem;
    }
    for g in extra {
        let (r, _) = reduce_by_relations(g, &gens);
        if !r.is_zero() {
            gens.push(r);
        }
    }
    reduce_by_relations(&rem, &gens).0
}

/// As [`congruent_mod_i`], with a second exact stage dividing by reduced
/// `extra` ideal members before falling back to sampling.
pub fn congruent_mod_i_extended(
    p: &Polynomial,
    q: &Polynomial,
    extra: &[Polynomial],
    tol: f64,
    samples: usize,
    seed: u64,
) -> CongruenceVerdict {
    let diff = p - q;
    let rem = reduce_with_extra(&diff, extra);
    if rem.is_zero() {
        return CongruenceVerdict::exact(0);
    }
    let scale = diff.l1_norm().max(1.0);
    let err = max_scaled_value(&diff, samples, seed, scale);
    let mut v = CongruenceVerdict::numeric(err, samples, tol);
    v.remainder_terms = rem.num_terms();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_action::apply_casimir;

    fn z(r: u16, c: u16) -> Polynomial {
        Polynomial::z(1, r, c)
    }

    fn zb(r: u16, c: u16) -> Polynomial {
        Polynomial::zbar(1, r, c)
    }

    #[test]
    fn generator_examples() {
        let gens = relation_generators(1);
        assert_eq!(gens.len(), 8);
        // r_{1,2} is the second row relation (j-major)
        assert_eq!(gens[1], &(&z(1, 1) * &zb(2, 1)) + &(&z(1, 2) * &zb(2, 2)));
        assert_eq!(gens[0], &(&(&z(1, 1) * &zb(1, 1)) + &(&z(1, 2) * &zb(1, 2))) - &Polynomial::one(1));
    }

    #[test]
    fn generators_vanish_on_unitaries() {
        for n in 1..=2 {
            let gens = relation_generators(n);
            for s in 0..20 {
                let u = haar_unitary(n, s);
                for g in &gens {
                    assert!(g.evaluate_at_matrix(&u).unwrap().norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn reduce_examples() {
        let gens = relation_generators(1);
        let (r, steps) = reduce_by_relations(&gens[1], &gens);
        assert!(r.is_zero());
        assert!(steps >= 1);
        let (r, _) = reduce_by_relations(&z(1, 1), &gens);
        assert_eq!(r, z(1, 1));
        let phi = &z(1, 1) * &zb(2, 1);
        let d = &apply_casimir(&phi) - &phi.scale_int(4);
        assert_eq!(d, gens[1].scale_int(-2));
        assert!(reduce_by_relations(&d, &gens).0.is_zero());
    }

    #[test]
    fn congruence_examples() {
        let n = 2;
        // <v_1, v_2> vs -<u_1, u_2>
        let mut v = Polynomial::zero(n);
        let mut u = Polynomial::zero(n);
        for i in 1..=2u16 {
            v = &v + &(&Polynomial::z(n, 1, 2 + i) * &Polynomial::zbar(n, 2, 2 + i));
            u = &u + &(&Polynomial::z(n, 1, i) * &Polynomial::zbar(n, 2, i));
        }
        assert!(congruent_mod_i(&v, &-u, 1e-9, 10, 1).is_exact());
        let f = congruent_mod_i(&Polynomial::z(n, 1, 1), &Polynomial::zero(n), 1e-9, 10, 1);
        assert_eq!(f.status, VerdictStatus::Fail);
        assert_eq!(f.path, CheckPath::Numeric);
    }

    #[test]
    fn numeric_fallback_catches_full_ideal_members() {
        // |det Z|^2 - 1 vanishes on U(2) but needs a degree-4 certificate;
        // either path must accept it.
        let det = &(&z(1, 1) * &z(2, 2)) - &(&z(1, 2) * &z(2, 1));
        let p = &det * &det.conj();
        let v = congruent_mod_i(&p, &Polynomial::one(1), 1e-9, 20, 5);
        assert!(v.passed());
    }

    #[test]
    fn minors_lie_in_the_ideal() {
        let n = 2;
        let m = relation_minor(n, &[1, 3], &[2, 4]);
        let gens = relation_generators(n);
        let expected = &(&gens[1] * &gens[11]) - &(&gens[3] * &gens[9]);
        assert_eq!(m, expected);
        for s in 0..5 {
            assert!(m.evaluate_at_matrix(&haar_unitary(n, s)).unwrap().norm() < 1e-12);
        }
        assert_eq!(relation_minors(n, &[1, 3], &[2, 4], 2).len(), 1);
        assert_eq!(relation_minors(3, &[1, 3, 5], &[2, 4, 6], 3).len(), 10);
    }

    #[test]
    fn extended_stage_certifies_cauchy_binet_remainder() {
        let n = 2;
        let m = relation_minor(n, &[1, 3], &[2, 4]);
        // single-generator division leaves a remainder
        assert!(!reduce_by_relations(&m, &relation_generators(n)).0.is_zero());
        assert!(reduce_with_extra(&m, std::slice::from_ref(&m)).is_zero());
        let v = congruent_mod_i_extended(&m, &Polynomial::zero(n), std::slice::from_ref(&m), 1e-9, 5, 1);
        assert!(v.is_exact());
        let f = congruent_mod_i_extended(&z(1, 1).with_ambient(2).unwrap(), &Polynomial::zero(n), &[m], 1e-9, 5, 1);
        assert_eq!(f.status, VerdictStatus::Fail);
    }

    #[test]
    fn combine_rules() {
        let a = CongruenceVerdict::exact(0);
        let b = CongruenceVerdict::numeric(1e-12, 5, 1e-9);
        let c = CongruenceVerdict::combine([a.clone(), b]);
        assert_eq!(c.status, VerdictStatus::NumericPass);
        let d = CongruenceVerdict::combine([a, CongruenceVerdict::exact(3)]);
        assert_eq!(d.status, VerdictStatus::Fail);
    }
}
