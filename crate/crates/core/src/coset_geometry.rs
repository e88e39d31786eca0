//! Double cosets `B \ G / H'`: sequences, representatives `x_N = a_N w_N`,
//! the stabilizer algebra `b ∩ Ad(x_N) h'` and modular characters.
//!
//! `H'` is the centralizer of `ε = diag(1, −1, …, 1, −1)`, so `h'` is the
//! set of matrices whose entries vanish off the odd/odd and even/even slots.
//! Everything here is double precision.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{diag, seeded_rng, CMat};
use crate::unitary_congruence::CongruenceVerdict;

/// Rank cutoff: singular values below this count as zero.
pub const RANK_ZERO: f64 = 1e-8;
/// Singular values in `(RANK_ZERO, RANK_GAP)` make the rank ambiguous.
pub const RANK_GAP: f64 = 1e-4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CosetError {
    #[error("enumeration limited to n <= 3, got {0}")]
    TooLarge(usize),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("ambiguous numeric rank: singular value {0:e}")]
    AmbiguousRank(f64),
    #[error("element does not normalize the subalgebra (residual {0:e})")]
    NotNormalizing(f64),
}

/// Permutation `σ` of `{1..2n}` acting by `P e_j = e_{σ(j)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationMatrix {
    images: Vec<usize>,
}

impl PermutationMatrix {
    /// From 1-based images `σ(1), …, σ(m)`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, CosetError> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if x == 0 || x > m || seen[x - 1] {
                return Err(CosetError::InvalidSequence(format!("not a permutation: {images:?}")));
            }
            seen[x - 1] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(m: usize) -> Self {
        Self { images: (1..=m).collect() }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `σ(j)`, 1-based.
    pub fn image(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.size()];
        for (j, &s) in self.images.iter().enumerate() {
            inv[s - 1] = j + 1;
        }
        Self { images: inv }
    }

    pub fn sign(&self) -> i64 {
        let m = self.size();
        let mut inversions = 0usize;
        for a in 0..m {
            for b in (a + 1)..m {
                if self.images[a] > self.images[b] {
                    inversions += 1;
                }
            }
        }
        if inversions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn to_real(&self) -> DMatrix<f64> {
        let m = self.size();
        let mut p = DMatrix::zeros(m, m);
        for (j, &s) in self.images.iter().enumerate() {
            p[(s - 1, j)] = 1.0;
        }
        p
    }

    pub fn to_complex(&self) -> CMat {
        self.to_real().map(|x| Complex64::new(x, 0.0))
    }
}

/// `w` with `w e_k = e_{2k−1}`, `w e_{n+k} = e_{2k}`, so that
/// `w diag(I_n, −I_n) w⁻¹ = ε`.
pub fn weyl_w(n: usize) -> PermutationMatrix {
    let mut images = Vec::with_capacity(2 * n);
    images.extend((1..=n).map(|k| 2 * k - 1));
    images.extend((1..=n).map(|k| 2 * k));
    PermutationMatrix { images }
}

/// `ε = diag(1, −1, …, 1, −1)` of size `2n`.
pub fn epsilon(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n, 2 * n, |r, c| if r != c { 0.0 } else if r % 2 == 0 { 1.0 } else { -1.0 })
}

/// Sparsity pattern of `Ad(w) h` for `h = gl_n × gl_n` block diagonal.
pub fn conjugated_h_pattern(n: usize) -> Vec<Vec<bool>> {
    let w = weyl_w(n);
    let mut pat = vec![vec![false; 2 * n]; 2 * n];
    for i in 1..=2 * n {
        for j in 1..=2 * n {
            if (i <= n) == (j <= n) {
                pat[w.image(i) - 1][w.image(j) - 1] = true;
            }
        }
    }
    pat
}

/// Row label of the relabelled matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Label {
    Pair(usize, usize),
    Plus(usize),
    Minus(usize),
}

impl Label {
    /// `(i, j, ±)` ordering: lexicographic in `(i, j)`, `+` before `−`.
    fn key(self) -> (usize, usize, u8) {
        match self {
            Label::Pair(i, j) => (i, j, 0),
            Label::Plus(t) => (t, t, 0),
            Label::Minus(t) => (t, t, 1),
        }
    }

    /// Required diagonal entry of `w_N ε w_N⁻¹` at this label.
    pub fn target_sign(self) -> i8 {
        match self {
            Label::Pair(i, j) if i < j => 1,
            Label::Pair(..) => -1,
            Label::Plus(_) => 1,
            Label::Minus(_) => -1,
        }
    }
}

/// A sequence `N`: a partial matching of `{1..2n}` with the unmatched points
/// signed, `#plus = #minus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSequence {
    pub n: usize,
    /// Matched pairs `(i, j)` with `i < j`, i.e. `n_{i,j} = n_{j,i} = 1`.
    pub pairs: Vec<(usize, usize)>,
    pub diag_plus: Vec<usize>,
    pub diag_minus: Vec<usize>,
}

impl CosetSequence {
    pub fn new(n: usize, pairs: Vec<(usize, usize)>, diag_plus: Vec<usize>, diag_minus: Vec<usize>) -> Result<Self, CosetError> {
        let s = Self { n, pairs, diag_plus, diag_minus };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), CosetError> {
        let size = 2 * self.n;
        if self.n == 0 {
            return Err(CosetError::InvalidSequence("n must be at least 1".into()));
        }
        let mut count = vec![0usize; size + 1];
        for &(i, j) in &self.pairs {
            if i >= j {
                return Err(CosetError::InvalidSequence(format!("pair ({i}, {j}) must have i < j")));
            }
            for x in [i, j] {
                if x == 0 || x > size {
                    return Err(CosetError::InvalidSequence(format!("index {x} outside [1, {size}]")));
                }
                count[x] += 1;
            }
        }
        for &t in self.diag_plus.iter().chain(self.diag_minus.iter()) {
            if t == 0 || t > size {
                return Err(CosetError::InvalidSequence(format!("index {t} outside [1, {size}]")));
            }
            count[t] += 1;
        }
        if let Some(t) = (1..=size).find(|&t| count[t] != 1) {
            return Err(CosetError::InvalidSequence(format!("row sum at {t} is {}, expected 1", count[t])));
        }
        if self.diag_plus.len() != self.diag_minus.len() {
            return Err(CosetError::InvalidSequence("unequal numbers of + and − diagonal entries".into()));
        }
        Ok(())
    }

    pub fn is_offdiag(&self) -> bool {
        self.diag_plus.is_empty() && self.diag_minus.is_empty()
    }

    /// Symmetric matrix `n_{i,j}`; diagonal holds `n_{t,t} = n⁺ + n⁻`.
    pub fn matrix(&self) -> Vec<Vec<u32>> {
        let size = 2 * self.n;
        let mut m = vec![vec![0u32; size]; size];
        for &(i, j) in &self.pairs {
            m[i - 1][j - 1] = 1;
            m[j - 1][i - 1] = 1;
        }
        for &t in self.diag_plus.iter().chain(self.diag_minus.iter()) {
            m[t - 1][t - 1] += 1;
        }
        m
    }

    /// Row labels in matrix order.
    pub fn labels(&self) -> Vec<Label> {
        let mut out: Vec<Label> = self.pairs.iter().flat_map(|&(i, j)| [Label::Pair(i, j), Label::Pair(j, i)]).collect();
        out.extend(self.diag_plus.iter().map(|&t| Label::Plus(t)));
        out.extend(self.diag_minus.iter().map(|&t| Label::Minus(t)));
        out.sort_by_key(|l| l.key());
        out
    }

    /// 0-based position of a label.
    pub fn position(&self, label: Label) -> Option<usize> {
        self.labels().iter().position(|&l| l == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CosetError> {
        let seq: Self = serde_json::from_str(s).map_err(|e| CosetError::InvalidSequence(e.to_string()))?;
        seq.validate()?;
        Ok(seq)
    }
}

/// All sequences for `n ≤ 3`, optionally only perfect matchings.
pub fn enumerate_sequences(n: usize, offdiag_only: bool) -> Result<Vec<CosetSequence>, CosetError> {
    if n > 3 {
        return Err(CosetError::TooLarge(n));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let size = 2 * n;
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        n: usize,
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        plus: &mut Vec<usize>,
        minus: &mut Vec<usize>,
        offdiag_only: bool,
        out: &mut Vec<CosetSequence>,
    ) {
        let Some(t) = (1..=2 * n).find(|&t| !used[t]) else {
            if plus.len() == minus.len() {
                out.push(CosetSequence { n, pairs: pairs.clone(), diag_plus: plus.clone(), diag_minus: minus.clone() });
            }
            return;
        };
        used[t] = true;
        for j in (t + 1)..=2 * n {
            if used[j] {
                continue;
            }
            used[j] = true;
            pairs.push((t, j));
            rec(n, used, pairs, plus, minus, offdiag_only, out);
            pairs.pop();
            used[j] = false;
        }
        if !offdiag_only {
            plus.push(t);
            rec(n, used, pairs, plus, minus, offdiag_only, out);
            plus.pop();
            minus.push(t);
            rec(n, used, pairs, plus, minus, offdiag_only, out);
            minus.pop();
        }
        used[t] = false;
    }
    rec(n, &mut vec![false; size + 1], &mut Vec::new(), &mut Vec::new(), &mut Vec::new(), offdiag_only, &mut out);
    Ok(out)
}

/// `(w_N, a_N, x_N)` for a sequence.
#[derive(Clone, Debug)]
pub struct CosetRepresentative {
    pub w: PermutationMatrix,
    pub a: DMatrix<f64>,
    pub x: DMatrix<f64>,
}

/// `w_N` is the lexicographically smallest choice of `(σ⁻¹(1), …, σ⁻¹(2n))`
/// with `ε_{σ⁻¹(p)}` equal to the target sign of label `p`.
pub fn coset_representative(seq: &CosetSequence) -> Result<CosetRepresentative, CosetError> {
    seq.validate()?;
    let size = 2 * seq.n;
    let labels = seq.labels();
    let mut used = vec![false; size + 1];
    let mut inv = Vec::with_capacity(size);
    for l in &labels {
        // ε_k = +1 for odd k
        let want_odd = l.target_sign() > 0;
        let k = (1..=size)
            .find(|&k| !used[k] && (k % 2 == 1) == want_odd)
            .ok_or_else(|| CosetError::InvalidSequence("no admissible w_N".into()))?;
        used[k] = true;
        inv.push(k);
    }
    let w = PermutationMatrix::from_images(inv)?.inverse();

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut a = DMatrix::<f64>::zeros(size, size);
    for (p, l) in labels.iter().enumerate() {
        match *l {
            Label::Pair(i, j) if i < j => {
                let q = labels.iter().position(|&m| m == Label::Pair(j, i)).expect("partner label");
                a[(p, p)] = s;
                a[(p, q)] = -s;
                a[(q, p)] = s;
                a[(q, q)] = s;
            }
            Label::Pair(..) => {}
            Label::Plus(_) | Label::Minus(_) => a[(p, p)] = 1.0,
        }
    }
    let x = &a * w.to_real();
    Ok(CosetRepresentative { w, a, x })
}

fn to_complex(m: &DMatrix<f64>) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Real inner product `Re tr(Xᴴ Y)`.
fn real_inner(x: &CMat, y: &CMat) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Orthonormal real basis of `h' = {Y : ε Y ε = Y}`.
pub fn h_prime_basis(n: usize) -> Vec<CMat> {
    let size = 2 * n;
    let mut out = Vec::new();
    for p in 0..size {
        for q in 0..size {
            if p % 2 == q % 2 {
                for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                    let mut m = CMat::zeros(size, size);
                    m[(p, q)] = unit;
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Orthonormal real basis of `b`, the upper-triangular matrices.
pub fn borel_basis(n: usize) -> Vec<CMat> {
    let size = 2 * n;
    let mut out = Vec::new();
    for p in 0..size {
        for q in p..size {
            for unit in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut m = CMat::zeros(size, size);
                m[(p, q)] = unit;
                out.push(m);
            }
        }
    }
    out
}

/// Real null space of `c` (rows = constraints), as columns of coefficients.
fn real_null_space(c: &DMatrix<f64>) -> Result<Vec<Vec<f64>>, CosetError> {
    let cols = c.ncols();
    let rows = c.nrows().max(cols);
    let mut padded = DMatrix::<f64>::zeros(rows, cols);
    padded.view_mut((0, 0), (c.nrows(), cols)).copy_from(c);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut out = Vec::new();
    for (k, &sv) in svd.singular_values.iter().enumerate() {
        if sv < RANK_ZERO {
            out.push(v_t.row(k).iter().copied().collect());
        } else if sv < RANK_GAP {
            return Err(CosetError::AmbiguousRank(sv));
        }
    }
    Ok(out)
}

/// Orthonormal real basis of `b ∩ Ad(x_N) h'`.
pub fn stabilizer_basis(seq: &CosetSequence) -> Result<Vec<CMat>, CosetError> {
    let rep = coset_representative(seq)?;
    let size = 2 * seq.n;
    let x = to_complex(&rep.x);
    let x_inv = to_complex(&rep.x.transpose());
    let images: Vec<CMat> = h_prime_basis(seq.n).iter().map(|y| &x * y * &x_inv).collect();
    let lower: Vec<(usize, usize)> = (0..size).flat_map(|p| (0..p).map(move |q| (p, q))).collect();
    let mut c = DMatrix::<f64>::zeros(2 * lower.len(), images.len());
    for (k, img) in images.iter().enumerate() {
        for (r, &(p, q)) in lower.iter().enumerate() {
            c[(2 * r, k)] = img[(p, q)].re;
            c[(2 * r + 1, k)] = img[(p, q)].im;
        }
    }
    // Ad(x) is a Frobenius isometry, so orthonormal coefficient vectors give
    // an orthonormal basis.
    Ok(real_null_space(&c)?
        .into_iter()
        .map(|coef| {
            let mut m = CMat::zeros(size, size);
            for (k, img) in images.iter().enumerate() {
                m += img.scale(coef[k]);
            }
            m
        })
        .collect())
}

/// `|det Ad(m)|` on the real span of an orthonormal `basis`.
pub fn modular_character(basis: &[CMat], m: &CMat) -> Result<f64, CosetError> {
    let dim = basis.len();
    if dim == 0 {
        return Ok(1.0);
    }
    let m_inv = m.clone().try_inverse().ok_or(CosetError::NotNormalizing(f64::INFINITY))?;
    let mut coords = DMatrix::<f64>::zeros(dim, dim);
    for (l, b) in basis.iter().enumerate() {
        let img = m * b * &m_inv;
        let mut proj = CMat::zeros(img.nrows(), img.ncols());
        for (k, bk) in basis.iter().enumerate() {
            let c = real_inner(bk, &img);
            coords[(k, l)] = c;
            proj += bk.scale(c);
        }
        let resid = (&img - &proj).norm();
        let scale = img.norm().max(1.0);
        if resid > 1e-8 * scale {
            return Err(CosetError::NotNormalizing(resid / scale));
        }
    }
    Ok(coords.determinant().abs())
}

/// `δ_B` on a diagonal `t` via the same machinery.
pub fn delta_b(n: usize, t: &CMat) -> Result<f64, CosetError> {
    modular_character(&borel_basis(n), t)
}

/// Closed form `∏_{i<j} |t_i / t_j|²`.
pub fn delta_b_closed_form(t: &[Complex64]) -> f64 {
    let mut out = 1.0;
    for i in 0..t.len() {
        for j in (i + 1)..t.len() {
            out *= (t[i] / t[j]).norm_sqr();
        }
    }
    out
}

/// Random element of `M_N`: `e^{x+iθ}` per label, equal on paired labels.
pub fn random_m<R: Rng + ?Sized>(seq: &CosetSequence, rng: &mut R) -> CMat {
    let labels = seq.labels();
    let mut entries = vec![Complex64::new(0.0, 0.0); labels.len()];
    for (p, l) in labels.iter().enumerate() {
        let partner = match *l {
            Label::Pair(i, j) if i > j => labels.iter().position(|&m| m == Label::Pair(j, i)),
            _ => None,
        };
        entries[p] = match partner {
            Some(q) if q < p => entries[q],
            _ => {
                let x: f64 = rng.random_range(-1.0..=1.0);
                let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                Complex64::from_polar(x.exp(), th)
            }
        };
    }
    // Paired labels may come in either order; copy backwards as well.
    for (p, l) in labels.iter().enumerate() {
        if let Label::Pair(i, j) = *l {
            if i > j {
                let q = labels.iter().position(|&m| m == Label::Pair(j, i)).expect("partner");
                entries[p] = entries[q];
            }
        }
    }
    diag(&entries)
}

/// `δ_B^{−1/2}(m) δ_N(m)` at `samples` random `m ∈ M_N`, each compared with 1.
pub fn delta_triviality_check(seq: &CosetSequence, samples: usize, seed: u64, tol: f64) -> Result<CongruenceVerdict, CosetError> {
    let basis = stabilizer_basis(seq)?;
    let borel = borel_basis(seq.n);
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let mut rng = seeded_rng(seed.wrapping_add(s as u64));
        let m = random_m(seq, &mut rng);
        let db = modular_character(&borel, &m)?;
        let dn = modular_character(&basis, &m)?;
        worst = worst.max((dn / db.sqrt() - 1.0).abs());
    }
    Ok(CongruenceVerdict::numeric(worst, samples, tol))
}

/// Negative control: `δ_B^{−1/2}` alone against 1.
pub fn delta_b_only_check(seq: &CosetSequence, samples: usize, seed: u64, tol: f64) -> Result<CongruenceVerdict, CosetError> {
    let borel = borel_basis(seq.n);
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let mut rng = seeded_rng(seed.wrapping_add(s as u64));
        let m = random_m(seq, &mut rng);
        let db = modular_character(&borel, &m)?;
        worst = worst.max((1.0 / db.sqrt() - 1.0).abs());
    }
    Ok(CongruenceVerdict::numeric(worst, samples, tol))
}

/// `x_N⁻¹ m x_N` is diagonal, and the entry of label `(i,j)` (`i < j`) or
/// `(t,t)^+` lands on an `ε = +1` slot; the others on `ε = −1` slots.
pub fn verify_conjugation_landing(seq: &CosetSequence, samples: usize, seed: u64, tol: f64) -> Result<CongruenceVerdict, CosetError> {
    let rep = coset_representative(seq)?;
    let labels = seq.labels();
    let x = to_complex(&rep.x);
    let x_inv = to_complex(&rep.x.transpose());
    let mut worst: f64 = 0.0;
    let mut misplaced = 0usize;
    for s in 0..samples {
        let mut rng = seeded_rng(seed.wrapping_add(s as u64));
        let m = random_m(seq, &mut rng);
        let c = &x_inv * &m * &x;
        for r in 0..c.nrows() {
            for k in 0..c.ncols() {
                if r != k {
                    worst = worst.max(c[(r, k)].norm());
                }
            }
        }
        for (p, l) in labels.iter().enumerate() {
            let k = rep.w.inverse().image(p + 1);
            worst = worst.max((c[(k - 1, k - 1)] - m[(p, p)]).norm());
            let eps = if k % 2 == 1 { 1 } else { -1 };
            if eps != l.target_sign() {
                misplaced += 1;
            }
        }
    }
    let mut v = CongruenceVerdict::numeric(worst, samples, tol);
    if misplaced > 0 {
        v.status = crate::unitary_congruence::VerdictStatus::Fail;
    }
    Ok(v)
}
