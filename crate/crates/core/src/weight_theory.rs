//! Highest-weight bookkeeping: purity, exponents, Shalika classification,
//! minimal K-type weight, Casimir scalars and the nonvanishing predicate.

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("sequence must have positive even length, got {0}")]
    BadLength(usize),
    #[error("sequence must be strictly decreasing: {0:?}")]
    NotStrictlyDecreasing(Vec<i64>),
    #[error("sequence must be weakly decreasing: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("brute-force pairing limited to length 12, got {0}")]
    TooLong(usize),
    #[error("N must be strictly decreasing positive integers: {0:?}")]
    BadN(Vec<i64>),
    #[error("nu and nu_bar lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// A pair `(ν, ν̄)` of weakly decreasing length-`2n` integer sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HighestWeight {
    pub nu: Vec<i64>,
    pub nu_bar: Vec<i64>,
}

impl HighestWeight {
    pub fn new(nu: Vec<i64>, nu_bar: Vec<i64>) -> Result<Self, WeightError> {
        if nu.len() != nu_bar.len() {
            return Err(WeightError::LengthMismatch(nu.len(), nu_bar.len()));
        }
        check_even_len(&nu)?;
        check_dominant(&nu)?;
        check_dominant(&nu_bar)?;
        Ok(Self { nu, nu_bar })
    }

    /// Half-size `n`.
    pub fn n(&self) -> usize {
        self.nu.len() / 2
    }
}

fn check_even_len(s: &[i64]) -> Result<(), WeightError> {
    if s.is_empty() || !s.len().is_multiple_of(2) {
        return Err(WeightError::BadLength(s.len()));
    }
    Ok(())
}

fn check_dominant(s: &[i64]) -> Result<(), WeightError> {
    if s.windows(2).any(|w| w[0] < w[1]) {
        return Err(WeightError::NotDominant(s.to_vec()));
    }
    Ok(())
}

fn check_strict(s: &[i64]) -> Result<(), WeightError> {
    if s.windows(2).any(|w| w[0] <= w[1]) {
        return Err(WeightError::NotStrictlyDecreasing(s.to_vec()));
    }
    Ok(())
}

/// `m` with `ν̄_j + ν_{2n−j+1} = m` for all `j`, if such a common value exists.
pub fn purity_constant(w: &HighestWeight) -> Option<i64> {
    let len = w.nu.len();
    let m = w.nu_bar[0] + w.nu[len - 1];
    (0..len).all(|j| w.nu_bar[j] + w.nu[len - 1 - j] == m).then_some(m)
}

/// `l_j = 2ν_j + (2n + 1 − 2j) − m`.
pub fn induced_exponents(w: &HighestWeight, m: i64) -> Vec<i64> {
    let len = w.nu.len() as i64;
    w.nu
        .iter()
        .enumerate()
        .map(|(i, &v)| 2 * v + (len + 1 - 2 * (i as i64 + 1)) - m)
        .collect()
}

/// Inverse of [`induced_exponents`]: the pure weight with exponents `l` and
/// purity constant `m`. `None` when some `l_j − (2n+1−2j) + m` is odd.
pub fn weight_from_exponents(l: &[i64], m: i64) -> Option<HighestWeight> {
    let len = l.len() as i64;
    let mut nu = Vec::with_capacity(l.len());
    for (i, &x) in l.iter().enumerate() {
        let t = x - (len + 1 - 2 * (i as i64 + 1)) + m;
        if t % 2 != 0 {
            return None;
        }
        nu.push(t / 2);
    }
    let nu_bar: Vec<i64> = (0..l.len()).map(|j| m - nu[l.len() - 1 - j]).collect();
    HighestWeight::new(nu, nu_bar).ok()
}

/// `L` with `l_j + l_{2n+1−j} = 2L` for all `j`, tested on the nested pairing
/// only. An odd common sum yields `None`.
pub fn shalika_classify(l: &[i64]) -> Result<Option<i64>, WeightError> {
    check_even_len(l)?;
    check_strict(l)?;
    let len = l.len();
    let s = l[0] + l[len - 1];
    if s % 2 != 0 || (0..len / 2).any(|j| l[j] + l[len - 1 - j] != s) {
        return Ok(None);
    }
    Ok(Some(s / 2))
}

/// Index-free pairing `(a, b)` of sequence entries.
pub type Pairing = Vec<(i64, i64)>;

/// Exhaustive search over all perfect pairings for one with every pair sum
/// equal to a common even value `2L`. Returns `L` and a witnessing pairing.
pub fn shalika_brute_witness(l: &[i64]) -> Result<Option<(i64, Pairing)>, WeightError> {
    check_even_len(l)?;
    check_strict(l)?;
    if l.len() > 12 {
        return Err(WeightError::TooLong(l.len()));
    }
    fn search(rest: &mut Vec<i64>, target: Option<i64>, acc: &mut Vec<(i64, i64)>) -> Option<i64> {
        if rest.is_empty() {
            return target.filter(|t| t % 2 == 0);
        }
        let first = rest.remove(0);
        for k in 0..rest.len() {
            let other = rest[k];
            let s = first + other;
            if target.is_some_and(|t| t != s) {
                continue;
            }
            rest.remove(k);
            acc.push((first, other));
            if let Some(t) = search(rest, Some(s), acc) {
                return Some(t);
            }
            acc.pop();
            rest.insert(k, other);
        }
        rest.insert(0, first);
        None
    }
    let mut rest = l.to_vec();
    let mut acc = Vec::new();
    Ok(search(&mut rest, None, &mut acc).map(|s| (s / 2, acc)))
}

/// Oracle form of [`shalika_classify`] by exhaustive pairing.
pub fn shalika_brute(l: &[i64]) -> Result<Option<i64>, WeightError> {
    Ok(shalika_brute_witness(l)?.map(|(big_l, _)| big_l))
}

fn check_n(n_seq: &[i64]) -> Result<(), WeightError> {
    if n_seq.is_empty() || n_seq.windows(2).any(|w| w[0] <= w[1]) || n_seq.last().is_some_and(|&x| x <= 0) {
        return Err(WeightError::BadN(n_seq.to_vec()));
    }
    Ok(())
}

/// `Λ = (N₁+L, …, N_n+L, −N_n+L, …, −N₁+L)`.
pub fn minimal_ktype_weight(n_seq: &[i64], big_l: i64) -> Result<Vec<i64>, WeightError> {
    check_n(n_seq)?;
    let mut out: Vec<i64> = n_seq.iter().map(|x| x + big_l).collect();
    out.extend(n_seq.iter().rev().map(|x| -x + big_l));
    Ok(out)
}

/// `(1/4) Σ_j [(2ν_j + 2n − 2j + 1)² − (2n − 2j + 1)²]`.
pub fn casimir_eigenvalue(nu: &[i64]) -> Result<Rational64, WeightError> {
    check_even_len(nu)?;
    check_dominant(nu)?;
    let len = nu.len() as i64;
    let total: i64 = nu
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let r = len - 2 * (i as i64 + 1) + 1;
            (2 * v + r).pow(2) - r.pow(2)
        })
        .sum();
    Ok(Rational64::new(total, 4))
}

/// The closed form `4nj − 2j(j−1)` for the weight `(1^j, 0^{2n−2j}, (−1)^j)`.
pub fn fundamental_casimir(n: i64, j: i64) -> i64 {
    4 * n * j - 2 * j * (j - 1)
}

/// `(1^j, 0^{2n−2j}, (−1)^j)`.
pub fn fundamental_weight(n: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0i64; 2 * n];
    for k in 0..j {
        v[k] = 1;
        v[2 * n - 1 - k] = -1;
    }
    v
}

/// `|l + L| ≤ N_n`: the twist `l` lies in the nonvanishing regime.
pub fn nonvanishing_predicate(l: i64, big_l: i64, n_last: i64) -> bool {
    (l + big_l).abs() <= n_last
}

/// `(m·n, 2n·L)`: exponents of `|a|^{mn} χ_{2nL}(a)`.
pub fn central_character_data(m: i64, big_l: i64, n: i64) -> (i64, i64) {
    (m * n, 2 * n * big_l)
}

/// The full parameter set attached to a weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducedParams {
    pub n: usize,
    pub m: i64,
    pub l: Vec<i64>,
    #[serde(rename = "L")]
    pub big_l: Option<i64>,
    #[serde(rename = "N")]
    pub big_n: Option<Vec<i64>>,
    /// Continuous exponent of the twist; carried, never used in predicates.
    pub u0: Option<f64>,
}

impl InducedParams {
    /// From a pure exponent vector `l` with purity constant `m`.
    pub fn from_exponents(l: Vec<i64>, m: i64) -> Result<Self, WeightError> {
        let big_l = shalika_classify(&l)?;
        let n = l.len() / 2;
        let big_n = big_l.map(|bl| l[..n].iter().map(|x| x - bl).collect());
        Ok(Self { n, m, l, big_l, big_n, u0: None })
    }

    pub fn from_weight(w: &HighestWeight) -> Result<Option<Self>, WeightError> {
        match purity_constant(w) {
            None => Ok(None),
            Some(m) => Self::from_exponents(induced_exponents(w, m), m).map(Some),
        }
    }
}

/// One row of the nonvanishing table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistRow {
    pub l: i64,
    pub nonvanishing: bool,
}

/// Serialized classification result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub shalika: bool,
    pub m: i64,
    #[serde(rename = "L")]
    pub big_l: Option<i64>,
    #[serde(rename = "N")]
    pub big_n: Vec<i64>,
    pub lambda: Vec<i64>,
    /// Predicate for the requested twist; `None` if no twist was given or
    /// the weight is not of Shalika type.
    pub nonvanishing: Option<bool>,
    pub central_character: Option<(i64, i64)>,
    /// Predicate over twists `l ∈ [−L−N_n−1, −L+N_n+1]`.
    pub nonvanishing_table: Vec<TwistRow>,
}

pub fn classify(params: &InducedParams, twist: Option<i64>) -> Classification {
    match (params.big_l, params.big_n.as_ref()) {
        (Some(bl), Some(bn)) => {
            let n_last = *bn.last().expect("n >= 1");
            let lambda = minimal_ktype_weight(bn, bl).unwrap_or_default();
            let table = ((-bl - n_last - 1)..=(-bl + n_last + 1))
                .map(|t| TwistRow { l: t, nonvanishing: nonvanishing_predicate(t, bl, n_last) })
                .collect();
            Classification {
                shalika: true,
                m: params.m,
                big_l: Some(bl),
                big_n: bn.clone(),
                lambda,
                nonvanishing: twist.map(|t| nonvanishing_predicate(t, bl, n_last)),
                central_character: Some(central_character_data(params.m, bl, params.n as i64)),
                nonvanishing_table: table,
            }
        }
        _ => Classification {
            shalika: false,
            m: params.m,
            big_l: None,
            big_n: Vec::new(),
            lambda: Vec::new(),
            nonvanishing: None,
            central_character: None,
            nonvanishing_table: Vec::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(nu: &[i64], nb: &[i64]) -> HighestWeight {
        HighestWeight::new(nu.to_vec(), nb.to_vec()).unwrap()
    }

    #[test]
    fn purity_examples() {
        assert_eq!(purity_constant(&hw(&[3, 1], &[2, 0])), Some(3));
        assert_eq!(purity_constant(&hw(&[3, 1], &[2, 1])), None);
        assert_eq!(purity_constant(&hw(&[0, 0, 0, 0], &[0, 0, 0, 0])), Some(0));
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(induced_exponents(&hw(&[3, 1], &[2, 0]), 3), vec![4, -2]);
        assert_eq!(induced_exponents(&hw(&[0, 0], &[0, 0]), 0), vec![1, -1]);
        let w = weight_from_exponents(&[4, -2], 3).unwrap();
        assert_eq!(w, hw(&[3, 1], &[2, 0]));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(shalika_classify(&[4, -2]).unwrap(), Some(1));
        assert_eq!(shalika_classify(&[5, 3, -1, -3]).unwrap(), Some(1));
        assert_eq!(shalika_classify(&[5, 1, -1, -3]).unwrap(), None);
        assert_eq!(shalika_classify(&[4, -1]).unwrap(), None);
        assert!(shalika_classify(&[1, 1]).is_err());
        assert!(shalika_classify(&[1, 0, -1]).is_err());
    }

    #[test]
    fn brute_examples() {
        let (bl, pairs) = shalika_brute_witness(&[5, 3, -1, -3]).unwrap().unwrap();
        assert_eq!(bl, 1);
        assert_eq!(pairs, vec![(5, -3), (3, -1)]);
        assert_eq!(shalika_brute(&[1, -1]).unwrap(), Some(0));
        assert_eq!(shalika_brute(&[5, 1, -1, -3]).unwrap(), None);
        let long: Vec<i64> = (0..14).rev().collect();
        assert_eq!(shalika_brute(&long), Err(WeightError::TooLong(14)));
    }

    #[test]
    fn ktype_examples() {
        assert_eq!(minimal_ktype_weight(&[3], 1).unwrap(), vec![4, -2]);
        assert_eq!(minimal_ktype_weight(&[2, 1], 0).unwrap(), vec![2, 1, -1, -2]);
        assert!(minimal_ktype_weight(&[1, 1], 0).is_err());
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimir_eigenvalue(&[1, -1]).unwrap(), Rational64::from_integer(4));
        assert_eq!(casimir_eigenvalue(&[0, 0, 0, 0]).unwrap(), Rational64::from_integer(0));
        for n in 1..=5 {
            for j in 1..=n {
                let v = casimir_eigenvalue(&fundamental_weight(n, j)).unwrap();
                assert_eq!(v, Rational64::from_integer(fundamental_casimir(n as i64, j as i64)));
            }
        }
    }

    #[test]
    fn predicate_examples() {
        assert!(nonvanishing_predicate(2, 1, 3));
        assert!(!nonvanishing_predicate(3, 1, 3));
        assert!(nonvanishing_predicate(-5, 5, 1));
        assert_eq!(central_character_data(3, 1, 2), (6, 4));
        assert_eq!(central_character_data(0, 0, 4), (0, 0));
        // per-block data raised to the n-th power
        let (a, b) = central_character_data(3, 1, 1);
        assert_eq!((a * 2, b * 2), central_character_data(3, 1, 2));
    }

    #[test]
    fn classification_output() {
        let p = InducedParams::from_exponents(vec![5, 3, -1, -3], 0).unwrap();
        let c = classify(&p, Some(0));
        assert!(c.shalika);
        assert_eq!(c.big_l, Some(1));
        assert_eq!(c.big_n, vec![4, 2]);
        assert_eq!(c.lambda, vec![5, 3, -1, -3]);
        assert_eq!(c.nonvanishing, Some(true));
        assert_eq!(c.nonvanishing_table.len(), 7);
        let q = InducedParams::from_exponents(vec![5, 1, -1, -3], 0).unwrap();
        assert!(!classify(&q, None).shalika);
    }
}
