//! JSON document formats for complexes and chain maps: line-oriented,
//! string degree keys, row-major matrices. Unknown keys are rejected
//! and validation errors carry the offending degree.

use crate::complex::{ChainMap, Complex};
use crate::linalg::{Coefficients, Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

/// Matrix entry: integers stay plain JSON numbers, anything else is a
/// fraction string "a/b".
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Big(String),
}

impl Entry {
    pub fn to_rational(&self) -> Result<BigRational, String> {
        match self {
            Entry::Int(v) => Ok(BigRational::from(BigInt::from(*v))),
            Entry::Big(s) => {
                let parts: Vec<&str> = s.split('/').collect();
                match parts.as_slice() {
                    [n] => BigInt::from_str(n)
                        .map(BigRational::from)
                        .map_err(|_| format!("bad integer literal {:?}", s)),
                    [n, d] => {
                        let n = BigInt::from_str(n).map_err(|_| format!("bad numerator in {:?}", s))?;
                        let d = BigInt::from_str(d).map_err(|_| format!("bad denominator in {:?}", s))?;
                        if d.is_zero() {
                            return Err(format!("zero denominator in {:?}", s));
                        }
                        Ok(BigRational::new(n, d))
                    }
                    _ => Err(format!("bad entry literal {:?}", s)),
                }
            }
        }
    }

    pub fn from_rational(v: &BigRational) -> Entry {
        if v.denom().is_one() {
            if let Ok(small) = i64::try_from(v.numer().clone()) {
                return Entry::Int(small);
            }
            return Entry::Big(v.numer().to_string());
        }
        Entry::Big(format!("{}/{}", v.numer(), v.denom()))
    }
}

fn coeff_tag(coeff: Coefficients) -> String {
    match coeff {
        Coefficients::Integers => "Z".into(),
        Coefficients::Rationals => "Q".into(),
        Coefficients::PrimeField(p) => format!("Fp:{}", p),
    }
}

fn parse_coeff(tag: &str) -> Result<Coefficients, String> {
    match tag {
        "Z" => Ok(Coefficients::Integers),
        "Q" => Ok(Coefficients::Rationals),
        _ => {
            if let Some(p) = tag.strip_prefix("Fp:") {
                let p: u64 = p.parse().map_err(|_| format!("bad prime in tag {:?}", tag))?;
                let c = Coefficients::PrimeField(p);
                c.validate()?;
                Ok(c)
            } else {
                Err(format!("unknown coefficients tag {:?} (expected Z, Q or Fp:<p>)", tag))
            }
        }
    }
}

fn matrix_to_rows(m: &Matrix) -> Vec<Vec<Entry>> {
    (0..m.rows)
        .map(|r| (0..m.cols).map(|c| Entry::from_rational(m.get(r, c))).collect())
        .collect()
}

fn rows_to_matrix(
    coeff: Coefficients,
    rows: usize,
    cols: usize,
    data: &[Vec<Entry>],
    what: &str,
) -> Result<Matrix, String> {
    if data.len() != rows {
        return Err(format!("{}: expected {} rows, found {}", what, rows, data.len()));
    }
    let mut m = Matrix::zero(coeff, rows, cols);
    for (r, row) in data.iter().enumerate() {
        if row.len() != cols {
            return Err(format!("{}: row {} has {} entries, expected {}", what, r, row.len(), cols));
        }
        for (c, e) in row.iter().enumerate() {
            let v = e.to_rational().map_err(|e| format!("{}: entry ({},{}): {}", what, r, c, e))?;
            m.set(r, c, v);
        }
    }
    Ok(m)
}

/// Serializable form of a bounded complex.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub coefficients: String,
    /// degree (decimal string) → rank
    pub degrees: BTreeMap<String, usize>,
    /// source degree (decimal string) → row-major matrix
    #[serde(default)]
    pub differentials: BTreeMap<String, Vec<Vec<Entry>>>,
}

fn parse_degree(k: &str) -> Result<i64, String> {
    k.parse().map_err(|_| format!("bad degree key {:?}", k))
}

impl ComplexDocument {
    pub fn from_complex(c: &Complex) -> ComplexDocument {
        let degrees = c.ranks().iter().map(|(i, r)| (i.to_string(), *r)).collect();
        let mut differentials = BTreeMap::new();
        for &i in c.ranks().keys() {
            let d = c.differential(i);
            if !d.is_zero() {
                differentials.insert(i.to_string(), matrix_to_rows(&d));
            }
        }
        ComplexDocument { coefficients: coeff_tag(c.coeff), degrees, differentials }
    }

    pub fn to_complex(&self) -> Result<Complex, String> {
        let coeff = parse_coeff(&self.coefficients)?;
        let mut ranks = BTreeMap::new();
        for (k, r) in &self.degrees {
            ranks.insert(parse_degree(k)?, *r);
        }
        let mut diffs = BTreeMap::new();
        for (k, rows) in &self.differentials {
            let i = parse_degree(k)?;
            let target = ranks.get(&(i + 1)).copied().unwrap_or(0);
            let source = ranks.get(&i).copied().unwrap_or(0);
            let m = rows_to_matrix(coeff, target, source, rows, &format!("differential at degree {}", i))?;
            diffs.insert(i, m);
        }
        Complex::new(coeff, ranks, diffs).map_err(|e| format!("invalid complex: {}", e))
    }
}

/// A complex given inline or by file reference.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRef {
    File(String),
    Inline(ComplexDocument),
}

impl ComplexRef {
    pub fn resolve(&self) -> Result<Complex, String> {
        match self {
            ComplexRef::Inline(d) => d.to_complex(),
            ComplexRef::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {}", path, e))?;
                let doc: ComplexDocument = serde_json::from_str(&text)
                    .map_err(|e| format!("cannot parse {}: {}", path, e))?;
                doc.to_complex().map_err(|e| format!("{}: {}", path, e))
            }
        }
    }
}

/// Serializable form of a chain map.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub source: ComplexRef,
    pub target: ComplexRef,
    /// degree (decimal string) → row-major matrix
    #[serde(default)]
    pub components: BTreeMap<String, Vec<Vec<Entry>>>,
}

impl MapDocument {
    pub fn from_map(g: &ChainMap) -> MapDocument {
        let components = g
            .components()
            .iter()
            .map(|(i, m)| (i.to_string(), matrix_to_rows(m)))
            .collect();
        MapDocument {
            source: ComplexRef::Inline(ComplexDocument::from_complex(&g.source)),
            target: ComplexRef::Inline(ComplexDocument::from_complex(&g.target)),
            components,
        }
    }

    pub fn to_map(&self) -> Result<ChainMap, String> {
        let source = self.source.resolve()?;
        let target = self.target.resolve()?;
        let mut comps = BTreeMap::new();
        for (k, rows) in &self.components {
            let i = parse_degree(k)?;
            let m = rows_to_matrix(
                source.coeff,
                target.rank(i),
                source.rank(i),
                rows,
                &format!("component at degree {}", i),
            )?;
            comps.insert(i, m);
        }
        ChainMap::new(source, target, comps).map_err(|e| format!("invalid chain map: {}", e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let c = Complex::from_data(
            Coefficients::Integers,
            &[(0, 1), (1, 1)],
            &[(0, vec![vec![2]])],
        );
        let doc = ComplexDocument::from_complex(&c);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: ComplexDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_complex().unwrap(), c);
    }

    #[test]
    fn minimal_document_parses() {
        let text = r#"{"coefficients":"Z","degrees":{"0":1}}"#;
        let doc: ComplexDocument = serde_json::from_str(text).unwrap();
        let c = doc.to_complex().unwrap();
        assert_eq!(c, Complex::concentrated(Coefficients::Integers, 0, 1));
    }

    #[test]
    fn square_nonzero_rejected_with_degree() {
        let text = r#"{"coefficients":"Z","degrees":{"0":1,"1":1,"2":1},
            "differentials":{"0":[[1]],"1":[[1]]}}"#;
        let doc: ComplexDocument = serde_json::from_str(text).unwrap();
        let err = doc.to_complex().unwrap_err();
        assert!(err.contains("degree"), "{}", err);
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"coefficients":"Z","degrees":{"0":1},"extra":true}"#;
        assert!(serde_json::from_str::<ComplexDocument>(text).is_err());
    }

    #[test]
    fn map_round_trip() {
        let c = Complex::from_data(
            Coefficients::Integers,
            &[(0, 1), (1, 1)],
            &[(0, vec![vec![2]])],
        );
        let g = ChainMap::identity(&c);
        let doc = MapDocument::from_map(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: MapDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_map().unwrap(), g);
    }

    #[test]
    fn fp_tag_round_trip() {
        let c = Complex::concentrated(Coefficients::PrimeField(5), 0, 2);
        let doc = ComplexDocument::from_complex(&c);
        assert_eq!(doc.coefficients, "Fp:5");
        assert_eq!(doc.to_complex().unwrap(), c);
        assert!(parse_coeff("Fp:4").is_err());
    }
}
