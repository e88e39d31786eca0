//! The explicit polynomials `Φ_{jl}`, `F_k`, `Δ_{1,±}`, `Δ_{2,±}`, the
//! four-case vector `F_{N,χ}` and the `GL(2)` vectors, with their
//! equivariance, permutation-invariance and block-factorization checks.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::coeff_poly::{GaussianRational, Monomial, Polynomial, VarKind, VariableId};
use crate::coset_geometry::weyl_w;
use crate::linalg::{block_diag, haar_unitary_from_rng, seeded_rng, CMat};
use crate::unitary_congruence::CongruenceVerdict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TestVectorError {
    #[error("row index {index} outside [1, {size}]")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("phi_pair needs distinct rows, got ({0}, {0})")]
    EqualRows(usize),
    #[error("k = {k} outside [1, {n}]")]
    KOutOfRange { k: usize, n: usize },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("|l + L| = {abs} exceeds N_n = {n_last}")]
    Vanishing { abs: i64, n_last: i64 },
}

/// Parameters `(n, N, L, l)` of a cohomological vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestVectorSpec {
    pub n: usize,
    pub big_n: Vec<i64>,
    pub big_l: i64,
    pub l: i64,
}

impl TestVectorSpec {
    /// Validates `N₁ > … > N_n > 0` and `|N| = n ≥ 1`.
    pub fn new(n: usize, big_n: Vec<i64>, big_l: i64, l: i64) -> Result<Self, TestVectorError> {
        if n == 0 {
            return Err(TestVectorError::InvalidSpec("n must be at least 1".into()));
        }
        if big_n.len() != n {
            return Err(TestVectorError::InvalidSpec(format!("N has length {}, expected {n}", big_n.len())));
        }
        if big_n.windows(2).any(|w| w[0] <= w[1]) || big_n[n - 1] <= 0 {
            return Err(TestVectorError::InvalidSpec(format!(
                "N must be strictly decreasing and positive: {big_n:?}"
            )));
        }
        Ok(Self { n, big_n, big_l, l })
    }

    pub fn n_last(&self) -> i64 {
        self.big_n[self.n - 1]
    }

    /// `N_n ≥ |l + L|`.
    pub fn check_construction(&self) -> Result<(), TestVectorError> {
        let abs = (self.l + self.big_l).abs();
        if abs > self.n_last() {
            return Err(TestVectorError::Vanishing { abs, n_last: self.n_last() });
        }
        Ok(())
    }

    /// Left torus weight `(N₁+L, −N₁+L, …, N_n+L, −N_n+L)`.
    pub fn left_weight(&self) -> Vec<i64> {
        self.big_n.iter().flat_map(|&x| [x + self.big_l, -x + self.big_l]).collect()
    }
}

/// All permutations of `0..k` with their signs.
pub(crate) fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        let k = used.len();
        if prefix.len() == k {
            out.push((prefix.clone(), sign));
            return;
        }
        for c in 0..k {
            if used[c] {
                continue;
            }
            // Inversions added by placing c: unused entries smaller than c.
            let inv = (0..c).filter(|&d| !used[d]).count();
            used[c] = true;
            prefix.push(c);
            rec(prefix, used, if inv % 2 == 0 { sign } else { -sign }, out);
            prefix.pop();
            used[c] = false;
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], 1, &mut out);
    out
}

/// `Φ_{jl} = Σ_{k≤n} z_{j,k} z̄_{l,k}`.
pub fn phi_pair(j: usize, l: usize, n: usize) -> Result<Polynomial, TestVectorError> {
    for idx in [j, l] {
        if idx == 0 || idx > 2 * n {
            return Err(TestVectorError::IndexOutOfRange { index: idx, size: 2 * n });
        }
    }
    if j == l {
        return Err(TestVectorError::EqualRows(j));
    }
    Ok(pairing_poly(j, l, n))
}

/// `⟨u_j, u_l⟩`, also for `j = l`.
pub fn pairing_poly(j: usize, l: usize, n: usize) -> Polynomial {
    let terms = (1..=n as u16).map(|k| {
        let m = Monomial::var(VariableId::z(j as u16, k)).mul(&Monomial::var(VariableId::zbar(l as u16, k)));
        (m, GaussianRational::from_integer(1))
    });
    Polynomial::from_terms(n, terms).expect("indices in range")
}

/// `⟨v_j, v_l⟩ = Σ_{k≤n} z_{j,n+k} z̄_{l,n+k}`.
pub fn pairing_poly_v(j: usize, l: usize, n: usize) -> Polynomial {
    let terms = (1..=n as u16).map(|k| {
        let c = n as u16 + k;
        let m = Monomial::var(VariableId::z(j as u16, c)).mul(&Monomial::var(VariableId::zbar(l as u16, c)));
        (m, GaussianRational::from_integer(1))
    });
    Polynomial::from_terms(n, terms).expect("indices in range")
}

/// `F_k = Σ_{s∈S_k} sgn(s) ∏_{i=1}^{k} Φ_{2i−1, 2s(i)}`.
pub fn fundamental_polynomial(k: usize, n: usize) -> Result<Polynomial, TestVectorError> {
    if k == 0 || k > n {
        return Err(TestVectorError::KOutOfRange { k, n });
    }
    let phis: Vec<Vec<Polynomial>> = (0..k)
        .map(|i| (0..k).map(|t| pairing_poly(2 * i + 1, 2 * t + 2, n)).collect())
        .collect();
    let mut out = Polynomial::zero(n);
    for (perm, sign) in signed_permutations(k) {
        let mut prod = Polynomial::from_int(n, sign);
        for (i, &t) in perm.iter().enumerate() {
            prod = &prod * &phis[i][t];
        }
        out = &out + &prod;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetFamily {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DetSign {
    Plus,
    Minus,
}

/// Determinant of a square grid of variables, by signed permutation sum.
fn det_of_vars(n: usize, grid: &[Vec<VariableId>]) -> Polynomial {
    let k = grid.len();
    let terms = signed_permutations(k).into_iter().map(|(perm, sign)| {
        let m = Monomial::from_pairs(perm.iter().enumerate().map(|(r, &c)| (grid[r][c], 1)));
        (m, GaussianRational::from_integer(sign))
    });
    Polynomial::from_terms(n, terms).expect("indices in range")
}

/// `Δ_{1,+} = det(u₁, u₃, …, u_{2n−1})`, `Δ_{1,−} = det(ū₂, ū₄, …, ū_{2n})`,
/// `Δ_{2,+} = det Z`, `Δ_{2,−} = det Z̄`.
pub fn determinant_factor(family: DetFamily, sign: DetSign, n: usize) -> Polynomial {
    let grid: Vec<Vec<VariableId>> = match family {
        DetFamily::One => (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|c| match sign {
                        DetSign::Plus => VariableId::z((2 * i - 1) as u16, c as u16),
                        DetSign::Minus => VariableId::zbar((2 * i) as u16, c as u16),
                    })
                    .collect()
            })
            .collect(),
        DetFamily::Two => (1..=2 * n)
            .map(|r| {
                (1..=2 * n)
                    .map(|c| match sign {
                        DetSign::Plus => VariableId::z(r as u16, c as u16),
                        DetSign::Minus => VariableId::zbar(r as u16, c as u16),
                    })
                    .collect()
            })
            .collect(),
    };
    det_of_vars(n, &grid)
}

/// Minors of `Z Z̄ᵀ − I` on odd rows and even columns up to size `k`: the
/// extra ideal members certifying `Ω F_k ≡ c F_k` exactly.
pub fn fundamental_relation_minors(k: usize, n: usize) -> Vec<Polynomial> {
    let rows: Vec<usize> = (1..=k).map(|i| 2 * i - 1).collect();
    let cols: Vec<usize> = (1..=k).map(|i| 2 * i).collect();
    crate::unitary_congruence::relation_minors(n, &rows, &cols, k)
}

/// The four sign regimes of `(l+L, l+2L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignCase {
    /// `l+L ≥ 0, l+2L ≥ 0`
    One,
    /// `l+L ≥ 0, l+2L ≤ 0`
    Two,
    /// `l+L ≤ 0, l+2L ≥ 0`
    Three,
    /// `l+L ≤ 0, l+2L ≤ 0`
    Four,
}

impl SignCase {
    /// Every case whose closed inequalities hold, lowest-numbered first.
    pub fn applicable(big_l: i64, l: i64) -> Vec<SignCase> {
        let (a, b) = (l + big_l, l + 2 * big_l);
        [
            (SignCase::One, a >= 0 && b >= 0),
            (SignCase::Two, a >= 0 && b <= 0),
            (SignCase::Three, a <= 0 && b >= 0),
            (SignCase::Four, a <= 0 && b <= 0),
        ]
        .into_iter()
        .filter_map(|(c, ok)| ok.then_some(c))
        .collect()
    }

    pub fn number(self) -> u8 {
        match self {
            SignCase::One => 1,
            SignCase::Two => 2,
            SignCase::Three => 3,
            SignCase::Four => 4,
        }
    }
}

/// Building blocks of `F_{N,χ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    F(usize),
    Det(DetFamily, DetSign),
}

impl Factor {
    pub fn build(self, n: usize) -> Polynomial {
        match self {
            Factor::F(k) => fundamental_polynomial(k, n).expect("k in range"),
            Factor::Det(f, s) => determinant_factor(f, s, n),
        }
    }
}

/// `(factor, exponent)` list of `F_{N,χ}` in the given case; zero exponents
/// are omitted.
pub fn cohomological_factors(spec: &TestVectorSpec, case: SignCase) -> Vec<(Factor, u32)> {
    let n = spec.n;
    let a = spec.l + spec.big_l;
    let b = spec.l + 2 * spec.big_l;
    let mut out: Vec<(Factor, i64)> = (1..n).map(|i| (Factor::F(i), spec.big_n[i - 1] - spec.big_n[i])).collect();
    match case {
        SignCase::One | SignCase::Two => {
            out.push((Factor::F(n), spec.n_last() - a));
            out.push((Factor::Det(DetFamily::One, DetSign::Minus), 2 * a));
        }
        SignCase::Three | SignCase::Four => {
            out.push((Factor::F(n), spec.n_last() + a));
            out.push((Factor::Det(DetFamily::One, DetSign::Plus), -2 * a));
        }
    }
    match case {
        SignCase::One | SignCase::Three => out.push((Factor::Det(DetFamily::Two, DetSign::Plus), b)),
        SignCase::Two | SignCase::Four => out.push((Factor::Det(DetFamily::Two, DetSign::Minus), -b)),
    }
    out.into_iter()
        .filter(|&(_, e)| e != 0)
        .map(|(f, e)| {
            assert!(e > 0, "negative exponent {e} for {f:?}: case does not apply");
            (f, e as u32)
        })
        .collect()
}

/// The lowest-numbered applicable case, after asserting that every
/// applicable case yields the same factor list.
pub fn preferred_case(spec: &TestVectorSpec) -> Result<SignCase, TestVectorError> {
    spec.check_construction()?;
    let cases = SignCase::applicable(spec.big_l, spec.l);
    let first = cohomological_factors(spec, cases[0]);
    for &c in &cases[1..] {
        if cohomological_factors(spec, c) != first {
            return Err(TestVectorError::InvalidSpec(format!(
                "overlapping cases {:?} and {:?} disagree",
                cases[0], c
            )));
        }
    }
    Ok(cases[0])
}

/// Expands a factor list.
pub fn expand_factors(n: usize, factors: &[(Factor, u32)]) -> Polynomial {
    let mut out = Polynomial::one(n);
    for &(f, e) in factors {
        out = &out * &f.build(n).pow(e);
    }
    out
}

/// `F_{N,χ}` for the spec, in the preferred case.
pub fn cohomological_vector(spec: &TestVectorSpec) -> Result<Polynomial, TestVectorError> {
    let case = preferred_case(spec)?;
    Ok(expand_factors(spec.n, &cohomological_factors(spec, case)))
}

/// `F_{N,χ}` in an explicitly chosen case, if that case applies.
pub fn cohomological_vector_in_case(spec: &TestVectorSpec, case: SignCase) -> Result<Polynomial, TestVectorError> {
    spec.check_construction()?;
    if !SignCase::applicable(spec.big_l, spec.l).contains(&case) {
        return Err(TestVectorError::InvalidSpec(format!("case {case:?} does not apply")));
    }
    Ok(expand_factors(spec.n, &cohomological_factors(spec, case)))
}

/// The `GL(2)` vector `φ_σ` in `x₁ = z_{1,1}`, `x₂ = z_{2,1}`,
/// `y₁ = z_{1,2}`, `y₂ = z_{2,2}`.
pub fn gl2_vector(big_n: i64, big_l: i64, l: i64) -> Result<Polynomial, TestVectorError> {
    let a = l + big_l;
    let b = l + 2 * big_l;
    if big_n < 0 {
        return Err(TestVectorError::InvalidSpec(format!("N must be nonnegative, got {big_n}")));
    }
    if a.abs() > big_n {
        return Err(TestVectorError::Vanishing { abs: a.abs(), n_last: big_n });
    }
    let x1 = Polynomial::z(1, 1, 1);
    let x2 = Polynomial::z(1, 2, 1);
    let y1 = Polynomial::z(1, 1, 2);
    let y2 = Polynomial::z(1, 2, 2);
    let det = &(&x1 * &y2) - &(&x2 * &y1);
    let det_bar = &(&x1.conj() * &y2.conj()) - &(&x2.conj() * &y1.conj());
    let x1x2b = &x1 * &x2.conj();
    let e = |v: i64| u32::try_from(v).expect("nonnegative exponent");
    let head = if a >= 0 {
        &x1x2b.pow(e(big_n - a)) * &x2.conj().pow(e(2 * a))
    } else {
        &x1x2b.pow(e(big_n + a)) * &x1.pow(e(-2 * a))
    };
    let tail = if b >= 0 { det.pow(e(b)) } else { det_bar.pow(e(-b)) };
    Ok(&head * &tail)
}

/// Worst normalized equivariance error of `p` under left torus and right
/// `K ∩ H` actions at `samples` random points.
pub fn equivariance_error(p: &Polynomial, spec: &TestVectorSpec, samples: usize, seed: u64) -> f64 {
    let n = spec.n;
    let size = 2 * n;
    let weight = spec.left_weight();
    let scale = p.l1_norm().max(1.0);
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let mut rng = seeded_rng(seed.wrapping_add(s as u64));
        let z = haar_unitary_from_rng(size, &mut rng);
        let base = p.evaluate_at_matrix(&z).expect("ambient matches");

        let thetas: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
        let mut tz = z.clone();
        let mut chi = Complex64::new(1.0, 0.0);
        for r in 0..size {
            let ph = Complex64::from_polar(1.0, thetas[r]);
            for c in 0..size {
                tz[(r, c)] *= ph;
            }
            chi *= Complex64::from_polar(1.0, weight[r] as f64 * thetas[r]);
        }
        let left = p.evaluate_at_matrix(&tz).expect("ambient matches");
        worst = worst.max((left - chi * base).norm() / scale);

        let k1 = haar_unitary_from_rng(n, &mut rng);
        let k2 = haar_unitary_from_rng(n, &mut rng);
        let zk: CMat = &z * block_diag(&k1, &k2);
        let d1 = k1.determinant();
        let d2 = k2.determinant();
        let factor = d1.powi(-spec.l as i32) * d2.powi((spec.l + 2 * spec.big_l) as i32);
        let right = p.evaluate_at_matrix(&zk).expect("ambient matches");
        worst = worst.max((right - factor * base).norm() / scale);
    }
    worst
}

/// Left torus and right `K ∩ H` equivariance of `p` as a numeric verdict.
pub fn verify_equivariance(p: &Polynomial, spec: &TestVectorSpec, samples: usize, seed: u64, tol: f64) -> CongruenceVerdict {
    CongruenceVerdict::numeric(equivariance_error(p, spec, samples, seed), samples, tol)
}

/// Substitution swapping row pairs `(2a−1, 2a) ↔ (2b−1, 2b)` in both `z`
/// and `z̄`.
pub fn pair_swap_assignment(a: usize, b: usize, n: usize) -> HashMap<VariableId, Polynomial> {
    let mut map = HashMap::new();
    let size = 2 * n as u16;
    let swaps = [(2 * a - 1, 2 * b - 1), (2 * a, 2 * b)];
    for (r, s) in swaps {
        for c in 1..=size {
            for kind in [VarKind::Holo, VarKind::Anti] {
                let vr = VariableId::new(kind, r as u16, c);
                let vs = VariableId::new(kind, s as u16, c);
                map.insert(vr, Polynomial::var(n, vs));
                map.insert(vs, Polynomial::var(n, vr));
            }
        }
    }
    map
}

/// Exact invariance of `F_k` under every pair transposition `a < b ≤ k`.
pub fn verify_pair_permutation_invariance(k: usize, n: usize) -> Result<CongruenceVerdict, TestVectorError> {
    let f = fundamental_polynomial(k, n)?;
    let mut parts = Vec::new();
    for a in 1..=k {
        for b in (a + 1)..=k {
            let img = f.substitute(&pair_swap_assignment(a, b, n)).expect("ambient matches");
            parts.push(CongruenceVerdict::exact((&img - &f).num_terms()));
        }
    }
    Ok(CongruenceVerdict::combine(parts))
}

/// Positions `(row, col)` of `xw` that can be nonzero, with the symbol they
/// carry: `(2i−1, ·) ↦ x_{2i−1}` or `y_{2i−1}` etc. Returned as
/// `(row, col, is_y)`.
pub fn xw_support(n: usize) -> Vec<(usize, usize, bool)> {
    let w = weyl_w(n);
    let mut out = Vec::new();
    for r in 1..=2 * n {
        for c in 1..=2 * n {
            // (xw)_{r,c} = x_{r,σ(c)}; x is block diagonal in 2×2 blocks.
            let target = w.image(c);
            if target.div_ceil(2) == r.div_ceil(2) {
                out.push((r, c, target.is_multiple_of(2)));
            }
        }
    }
    out
}

/// Ring map `Z ↦ xw`: entries outside the support of `xw` go to zero; the
/// support variables stand for the fresh symbols.
pub fn restriction_assignment(n: usize) -> HashMap<VariableId, Polynomial> {
    let keep: std::collections::HashSet<(usize, usize)> = xw_support(n).into_iter().map(|(r, c, _)| (r, c)).collect();
    let mut map = HashMap::new();
    for r in 1..=2 * n {
        for c in 1..=2 * n {
            if !keep.contains(&(r, c)) {
                for kind in [VarKind::Holo, VarKind::Anti] {
                    map.insert(VariableId::new(kind, r as u16, c as u16), Polynomial::zero(n));
                }
            }
        }
    }
    map
}

/// The image of `F_{N,χ}` under `Z ↦ xw`, computed factor by factor.
pub fn restricted_vector(spec: &TestVectorSpec) -> Result<Polynomial, TestVectorError> {
    let case = preferred_case(spec)?;
    let assignment = restriction_assignment(spec.n);
    let mut out = Polynomial::one(spec.n);
    for (f, e) in cohomological_factors(spec, case) {
        let img = f.build(spec.n).substitute(&assignment).expect("ambient matches");
        out = &out * &img.pow(e);
    }
    Ok(out)
}

/// `∏_i φ(N_i, L, l)` with `(x₁, x₂, y₁, y₂) ↦ (x_{2i−1}, x_{2i}, y_{2i−1}, y_{2i})`.
pub fn block_product(spec: &TestVectorSpec) -> Result<Polynomial, TestVectorError> {
    let n = spec.n;
    let mut out = Polynomial::one(n);
    for i in 1..=n {
        let phi = gl2_vector(spec.big_n[i - 1], spec.big_l, spec.l)?
            .with_ambient(n)
            .expect("2x2 variables fit");
        let (r1, r2, cx, cy) = ((2 * i - 1) as u16, (2 * i) as u16, i as u16, (n + i) as u16);
        let mut map = HashMap::new();
        for kind in [VarKind::Holo, VarKind::Anti] {
            let v = |r, c| VariableId::new(kind, r, c);
            map.insert(v(1, 1), Polynomial::var(n, v(r1, cx)));
            map.insert(v(2, 1), Polynomial::var(n, v(r2, cx)));
            map.insert(v(1, 2), Polynomial::var(n, v(r1, cy)));
            map.insert(v(2, 2), Polynomial::var(n, v(r2, cy)));
        }
        out = &out * &phi.substitute(&map).expect("ambient matches");
    }
    Ok(out)
}

/// Sign of the interleaving permutation, `(−1)^{n(n−1)/2}`.
pub fn weyl_sign(n: usize) -> i64 {
    weyl_w(n).sign()
}

/// Exact check `F_{N,χ}(xw) = ∏_i φ(N_i, L, l)(x_{2i−1}, x_{2i}, y_{2i−1}, y_{2i})`.
pub fn verify_restriction_factorization(spec: &TestVectorSpec) -> Result<CongruenceVerdict, TestVectorError> {
    let lhs = restricted_vector(spec)?;
    let rhs = block_product(spec)?;
    Ok(CongruenceVerdict::exact((&lhs - &rhs).num_terms()))
}

/// As [`verify_restriction_factorization`], with the right side multiplied
/// by `det(w)^{|l+2L|}`, the factor contributed by `Δ_{2,±}` at `xw`.
pub fn verify_restriction_factorization_signed(spec: &TestVectorSpec) -> Result<CongruenceVerdict, TestVectorError> {
    let lhs = restricted_vector(spec)?;
    let e = (spec.l + 2 * spec.big_l).unsigned_abs();
    let sign = if weyl_sign(spec.n) < 0 && e % 2 == 1 { -1 } else { 1 };
    let rhs = block_product(spec)?.scale_int(sign);
    Ok(CongruenceVerdict::exact((&lhs - &rhs).num_terms()))
}
