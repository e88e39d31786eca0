//! JSON interchange format for polynomials.
//!
//! ```json
//! {"n": 1, "terms": [{"coeff": {"re": ["1", "1"], "im": ["0", "1"]},
//!                     "vars": [{"kind": "z", "row": 1, "col": 1, "exp": 1}]}]}
//! ```
//!
//! Terms are written in ascending canonical order. Numerators and
//! denominators are decimal strings so precision is unbounded.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::gaussian::GaussianRational;
use super::monomial::{Monomial, VarKind, VariableId};
use super::polynomial::Polynomial;
use super::CoeffPolyError;

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: CoeffJson,
    vars: Vec<VarJson>,
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    re: [String; 2],
    im: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct VarJson {
    kind: String,
    row: u16,
    col: u16,
    exp: u32,
}

fn rat_to_json(r: &BigRational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn rat_from_json(pair: &[String; 2]) -> Result<BigRational, CoeffPolyError> {
    let parse = |s: &str| BigInt::from_str(s).map_err(|_| CoeffPolyError::Format(format!("bad integer {s:?}")));
    let num = parse(&pair[0])?;
    let den = parse(&pair[1])?;
    if den.is_zero() {
        return Err(CoeffPolyError::Format("zero denominator".into()));
    }
    if den.is_negative() {
        return Err(CoeffPolyError::Format("negative denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

impl Polynomial {
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = PolyJson {
            n: self.n(),
            terms: self
                .terms()
                .map(|(m, c)| TermJson {
                    coeff: CoeffJson { re: rat_to_json(&c.re), im: rat_to_json(&c.im) },
                    vars: m
                        .iter()
                        .map(|(v, e)| VarJson {
                            kind: match v.kind {
                                VarKind::Holo => "z".into(),
                                VarKind::Anti => "zbar".into(),
                            },
                            row: v.row,
                            col: v.col,
                            exp: e,
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("polynomial JSON is always serializable")
    }

    /// Compact single-line JSON.
    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Polynomial, CoeffPolyError> {
        let doc: PolyJson = serde_json::from_value(v.clone()).map_err(|e| CoeffPolyError::Format(e.to_string()))?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let c = GaussianRational::new(rat_from_json(&t.coeff.re)?, rat_from_json(&t.coeff.im)?);
            let mut pairs = Vec::with_capacity(t.vars.len());
            for v in t.vars {
                let kind = match v.kind.as_str() {
                    "z" => VarKind::Holo,
                    "zbar" => VarKind::Anti,
                    other => return Err(CoeffPolyError::Format(format!("unknown variable kind {other:?}"))),
                };
                pairs.push((VariableId::new(kind, v.row, v.col), v.exp));
            }
            terms.push((Monomial::from_pairs(pairs), c));
        }
        Polynomial::from_terms(doc.n, terms)
    }

    pub fn from_json(s: &str) -> Result<Polynomial, CoeffPolyError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| CoeffPolyError::Format(e.to_string()))?;
        Self::from_json_value(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let n = 1;
        let p = &(&Polynomial::z(n, 1, 1) * &Polynomial::zbar(n, 2, 1)).scale(&GaussianRational::new(
            BigRational::new(3.into(), 7.into()),
            BigRational::new((-1).into(), 2.into()),
        )) + &Polynomial::from_int(n, 5);
        let s = p.to_json();
        let q = Polynomial::from_json(&s).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_json(), s);
    }

    #[test]
    fn non_canonical_input_is_canonicalized() {
        let s = r#"{"n":1,"terms":[
            {"coeff":{"re":["2","4"],"im":["0","1"]},"vars":[{"kind":"z","row":1,"col":1,"exp":1}]},
            {"coeff":{"re":["1","2"],"im":["0","3"]},"vars":[{"kind":"z","row":1,"col":1,"exp":1}]},
            {"coeff":{"re":["0","1"],"im":["0","1"]},"vars":[]}]}"#;
        let p = Polynomial::from_json(s).unwrap();
        assert_eq!(p, Polynomial::z(1, 1, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Polynomial::from_json(r#"{"n":1,"terms":[{"coeff":{"re":["1","0"],"im":["0","1"]},"vars":[]}]}"#).is_err());
        assert!(Polynomial::from_json(
            r#"{"n":1,"terms":[{"coeff":{"re":["1","1"],"im":["0","1"]},"vars":[{"kind":"w","row":1,"col":1,"exp":1}]}]}"#
        )
        .is_err());
        assert!(Polynomial::from_json(
            r#"{"n":1,"terms":[{"coeff":{"re":["1","1"],"im":["0","1"]},"vars":[{"kind":"z","row":3,"col":1,"exp":1}]}]}"#
        )
        .is_err());
    }
}
