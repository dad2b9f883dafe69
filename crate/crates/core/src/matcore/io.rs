//! Matrix file format.
//!
//! ```text
//! {"n": 2,
//!  "re": [[..], [..]], "im": [[..], [..]],
//!  "classification": "positive",
//!  "num": {"re": [[..]], "im": [[..]]}, "den": [[..]]}   // exact matrices only
//! }
//! ```
//!
//! Floats carry 17 significant digits. `num`/`den` hold arbitrary-size
//! integers; the exact entry is `(num.re + i num.im) / den`.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed};
use serde_json::{Map, Value};

use super::cmatrix::CMatrix;
use super::exact::{ExactMatrix, GaussianInt};
use super::hermitian::{Classification, HermitianMatrix};
use crate::error::{BmvError, Result};
use crate::numeric::{json_f64, json_int_str};

/// A matrix document: the floating-point matrix and, when present, its
/// exact rational form.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub matrix: HermitianMatrix,
    pub exact: Option<ExactMatrix>,
}

impl MatrixFile {
    pub fn new(matrix: HermitianMatrix) -> Self {
        Self { matrix, exact: None }
    }

    /// Attaches the exact form; the floating-point entries are re-derived
    /// from it so the two never disagree.
    pub fn from_exact(exact: ExactMatrix, classification: Classification) -> Result<Self> {
        if !exact.is_hermitian() {
            return Err(BmvError::Format("exact matrix is not Hermitian".into()));
        }
        let matrix = HermitianMatrix::new(exact.to_cmatrix())?.with_classification(classification);
        Ok(Self {
            matrix,
            exact: Some(exact),
        })
    }

    pub fn to_json(&self) -> Value {
        let m = self.matrix.matrix();
        let n = m.dim();
        let grid = |f: &dyn Fn(usize, usize) -> Value| -> Value {
            Value::Array((0..n).map(|i| Value::Array((0..n).map(|j| f(i, j)).collect())).collect())
        };
        let mut obj = Map::new();
        obj.insert("n".into(), Value::from(n));
        obj.insert("re".into(), grid(&|i, j| json_f64(m[(i, j)].re)));
        obj.insert("im".into(), grid(&|i, j| json_f64(m[(i, j)].im)));
        obj.insert(
            "classification".into(),
            Value::from(self.matrix.classification().as_str()),
        );
        if let Some(e) = &self.exact {
            let nums = e.numerators();
            let mut num = Map::new();
            num.insert("re".into(), grid(&|i, j| json_int_str(&nums[i * n + j].re.to_string())));
            num.insert("im".into(), grid(&|i, j| json_int_str(&nums[i * n + j].im.to_string())));
            obj.insert("num".into(), Value::Object(num));
            let den = e.denominator().to_string();
            obj.insert("den".into(), grid(&|_, _| json_int_str(&den)));
        }
        Value::Object(obj)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("matrix document serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| BmvError::Format("top level must be an object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| BmvError::Format("missing integer field \"n\"".into()))? as usize;
        if n == 0 {
            return Err(BmvError::EmptyDimension);
        }
        let re = float_grid(obj.get("re"), n, "re")?;
        let im = float_grid(obj.get("im"), n, "im")?;
        let classification = match obj.get("classification") {
            None => Classification::Hermitian,
            Some(c) => c
                .as_str()
                .and_then(Classification::parse)
                .ok_or_else(|| BmvError::Format(format!("unknown classification {c}")))?,
        };
        let raw = CMatrix::from_fn(n, |i, j| Complex64::new(re[i * n + j], im[i * n + j]));
        let exact = match (obj.get("num"), obj.get("den")) {
            (None, None) => None,
            (Some(num), Some(den)) => Some(exact_from_json(num, den, n)?),
            _ => return Err(BmvError::Format("\"num\" and \"den\" must appear together".into())),
        };
        if let Some(e) = &exact {
            if !e.is_hermitian() {
                return Err(BmvError::Format("exact matrix is not Hermitian".into()));
            }
        }
        let matrix = HermitianMatrix::new(raw)?.with_classification(classification);
        Ok(Self { matrix, exact })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| BmvError::Format(e.to_string()))?;
        Self::from_json(&v)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BmvError::Format(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| BmvError::Format(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")
    }
}

fn rows<'a>(v: Option<&'a Value>, n: usize, name: &str) -> Result<Vec<&'a Value>> {
    let outer = v
        .and_then(Value::as_array)
        .ok_or_else(|| BmvError::Format(format!("missing array field \"{name}\"")))?;
    if outer.len() != n {
        return Err(BmvError::Format(format!("\"{name}\" must have {n} rows")));
    }
    let mut out = Vec::with_capacity(n * n);
    for row in outer {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| BmvError::Format(format!("\"{name}\" rows must have {n} entries")))?;
        out.extend(row.iter());
    }
    Ok(out)
}

fn float_grid(v: Option<&Value>, n: usize, name: &str) -> Result<Vec<f64>> {
    rows(v, n, name)?
        .into_iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| BmvError::Format(format!("\"{name}\" entries must be numbers")))
        })
        .collect()
}

fn int_grid(v: Option<&Value>, n: usize, name: &str) -> Result<Vec<BigInt>> {
    rows(v, n, name)?
        .into_iter()
        .map(|x| match x {
            Value::Number(num) => BigInt::from_str(&num.to_string())
                .map_err(|_| BmvError::Format(format!("\"{name}\" entries must be integers"))),
            Value::String(s) => BigInt::from_str(s)
                .map_err(|_| BmvError::Format(format!("\"{name}\" entries must be integers"))),
            _ => Err(BmvError::Format(format!("\"{name}\" entries must be integers"))),
        })
        .collect()
}

fn exact_from_json(num: &Value, den: &Value, n: usize) -> Result<ExactMatrix> {
    let num_re = int_grid(num.get("re"), n, "num.re")?;
    let num_im = int_grid(num.get("im"), n, "num.im")?;
    let dens = int_grid(Some(den), n, "den")?;
    if dens.iter().any(|d| !d.is_positive()) {
        return Err(BmvError::Format("denominators must be positive".into()));
    }
    let common = dens
        .iter()
        .fold(BigInt::one(), |acc, d| num_integer::Integer::lcm(&acc, d));
    let nums = num_re
        .into_iter()
        .zip(num_im)
        .zip(&dens)
        .map(|((re, im), d)| {
            let f = &common / d;
            GaussianInt::new(re * &f, im * &f)
        })
        .collect();
    ExactMatrix::new(n, nums, common)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::hermitian::random_psd;
    use crate::matcore::rng::SeededStream;

    #[test]
    fn float_round_trip_is_bitwise() {
        let mut rng = SeededStream::new(1);
        let h = random_psd(3, 3, &mut rng, false).unwrap();
        let doc = MatrixFile::new(h.clone()).to_json_string();
        let back = MatrixFile::from_json_str(&doc).unwrap();
        assert_eq!(back.matrix, h);
        assert!(back.exact.is_none());
    }

    #[test]
    fn exact_round_trip() {
        let mut rng = SeededStream::new(2);
        let h = random_psd(3, 3, &mut rng, true).unwrap();
        let e = ExactMatrix::from_hermitian(&h).unwrap();
        let file = MatrixFile::from_exact(e.clone(), Classification::Positive).unwrap();
        let back = MatrixFile::from_json_str(&file.to_json_string()).unwrap();
        assert_eq!(back.exact.unwrap(), e);
        assert_eq!(back.matrix, h);
    }

    #[test]
    fn malformed_documents() {
        assert!(MatrixFile::from_json_str("{").is_err());
        assert!(MatrixFile::from_json_str(r#"{"n": 2, "re": [[1]], "im": [[0]]}"#).is_err());
        assert!(MatrixFile::from_json_str(r#"{"n": 1, "re": [[1]], "im": [[0]], "classification": "weird"}"#).is_err());
        let ok = MatrixFile::from_json_str(r#"{"n": 1, "re": [[2]], "im": [[0]]}"#).unwrap();
        assert_eq!(ok.matrix.matrix()[(0, 0)].re, 2.0);
    }
}
