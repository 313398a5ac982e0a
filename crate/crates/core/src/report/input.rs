use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::coxeter::CoxeterMatrix;
use crate::error::{Error, Result};
use crate::hyperbolic::Lambda;

/// Thickness used when the input document has none.
pub const DEFAULT_THICKNESS: u64 = 2;

/// A parsed input document.
#[derive(Clone, Debug, PartialEq)]
pub struct InputSpec {
    pub matrix: CoxeterMatrix,
    /// `q_s` per generator.
    pub thickness: Vec<u64>,
    pub thickness_given: bool,
    pub lambda: Option<Lambda>,
    pub apartment_confdim: Option<f64>,
}

/// Parses `{generators, coxeter_matrix, thickness?, lambda?, apartment_confdim?}`.
/// `thickness` is a map from generator name to integer, or a list in generator order.
pub fn parse_input(text: &str) -> Result<InputSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let matrix = CoxeterMatrix::from_json_value(&v)?;
    let obj = v.as_object().expect("checked by the matrix parser");
    let as_q = |name: &str, x: &Value| -> Result<u64> {
        x.as_u64()
            .filter(|&q| q >= 1)
            .ok_or_else(|| Error::Schema(format!("thickness of `{name}` must be an integer >= 1, got {x}")))
    };
    let (thickness, thickness_given) = match obj.get("thickness") {
        None | Some(Value::Null) => (vec![DEFAULT_THICKNESS; matrix.rank()], false),
        Some(Value::Object(map)) => {
            for key in map.keys() {
                matrix.index_of(key)?;
            }
            let q = matrix
                .generators()
                .iter()
                .map(|g| {
                    let x = map.get(g).ok_or_else(|| Error::Schema(format!("thickness is missing generator `{g}`")))?;
                    as_q(g, x)
                })
                .collect::<Result<Vec<_>>>()?;
            (q, true)
        }
        Some(Value::Array(list)) => {
            if list.len() != matrix.rank() {
                return Err(Error::Schema(format!("thickness list has {} entries for {} generators", list.len(), matrix.rank())));
            }
            let q = list.iter().zip(matrix.generators()).map(|(x, g)| as_q(g, x)).collect::<Result<Vec<_>>>()?;
            (q, true)
        }
        Some(other) => return Err(Error::Schema(format!("`thickness` must be a map or a list, got {other}"))),
    };
    let lambda = match obj.get("lambda") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(parse_lambda(s)?),
        Some(x) => Some(Lambda::Value(x.as_f64().ok_or_else(|| Error::Schema(format!("`lambda` must be a number or \"bourdon\", got {x}")))?)),
    };
    let apartment_confdim = match obj.get("apartment_confdim") {
        None | Some(Value::Null) => None,
        Some(x) => Some(x.as_f64().ok_or_else(|| Error::Schema(format!("`apartment_confdim` must be a number, got {x}")))?),
    };
    Ok(InputSpec { matrix, thickness, thickness_given, lambda, apartment_confdim })
}

/// `bourdon` or a real number.
pub fn parse_lambda(s: &str) -> Result<Lambda> {
    if s.eq_ignore_ascii_case("bourdon") {
        return Ok(Lambda::Bourdon);
    }
    f64::from_str(s.trim())
        .map(Lambda::Value)
        .map_err(|_| Error::InvalidArgument(format!("lambda must be a number or `bourdon`, got `{s}`")))
}

/// Parses `a/b`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational number: `{s}`"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| bad())?;
        let b = BigInt::from_str(b.trim()).map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(n, d);
    Ok(if neg { -r } else { r })
}

/// A comma-separated list of rationals.
pub fn parse_p_grid(s: &str) -> Result<Vec<BigRational>> {
    let grid = s.split(',').filter(|x| !x.trim().is_empty()).map(parse_rational).collect::<Result<Vec<_>>>()?;
    if let Some(p) = grid.iter().find(|p| **p <= BigRational::one()) {
        return Err(Error::InvalidArgument(format!("grid values must exceed 1, got {p}")));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("2.25").unwrap(), BigRational::new(9.into(), 4.into()));
        assert_eq!(parse_rational("4").unwrap(), BigRational::from_integer(4.into()));
        assert!(parse_rational("x").is_err());
        assert!(parse_p_grid("1,2").is_err());
    }

    #[test]
    fn thickness_forms() {
        let doc = r#"{"generators":["a","b","c"],"coxeter_matrix":[[1,3,3],[3,1,3],[3,3,1]],"thickness":{"a":2,"b":2,"c":2},"lambda":"bourdon"}"#;
        let s = parse_input(doc).unwrap();
        assert_eq!(s.thickness, vec![2, 2, 2]);
        assert_eq!(s.lambda, Some(Lambda::Bourdon));
        let missing = r#"{"generators":["a","b"],"coxeter_matrix":[[1,"inf"],["inf",1]],"thickness":{"a":2}}"#;
        assert!(matches!(parse_input(missing), Err(Error::Schema(_))));
        let plain = r#"{"generators":["a","b"],"coxeter_matrix":[[1,"inf"],["inf",1]]}"#;
        assert!(!parse_input(plain).unwrap().thickness_given);
    }
}
