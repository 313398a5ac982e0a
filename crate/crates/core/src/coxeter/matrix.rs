use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::GenSet;
use crate::error::{Error, Result};

/// An entry `m_st` of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u32),
    Infinity,
}

impl Order {
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinity => None,
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Order::Finite(m) if m % 2 == 1)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(m) => s.serialize_u32(*m),
            Order::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        parse_order(&v).map_err(de::Error::custom)
    }
}

fn parse_order(v: &Value) -> std::result::Result<Order, String> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .and_then(|m| u32::try_from(m).ok())
            .map(Order::Finite)
            .ok_or_else(|| format!("{n}")),
        Value::String(s) if matches!(s.as_str(), "inf" | "infinity" | "∞") => Ok(Order::Infinity),
        other => Err(other.to_string()),
    }
}

/// Symmetric presentation data `m_st` of a Coxeter system `(W, S)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterMatrix {
    generators: Vec<String>,
    #[serde(rename = "coxeter_matrix")]
    entries: Vec<Vec<Order>>,
}

impl<'de> Deserialize<'de> for CoxeterMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        CoxeterMatrix::from_json_value(&v).map_err(de::Error::custom)
    }
}

impl CoxeterMatrix {
    /// Validates and builds a matrix.
    pub fn new(generators: Vec<String>, entries: Vec<Vec<Order>>) -> Result<Self> {
        let n = generators.len();
        if n == 0 {
            return Err(Error::Schema("at least one generator is required".into()));
        }
        if n > 64 {
            return Err(Error::Schema("at most 64 generators are supported".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::Schema(format!("generator {i} has an empty name")));
            }
            if generators[..i].contains(g) {
                return Err(Error::Schema(format!("duplicate generator name `{g}`")));
            }
        }
        if entries.len() != n || entries.iter().any(|row| row.len() != n) {
            return Err(Error::Schema(format!("coxeter_matrix must be {n}x{n}")));
        }
        for i in 0..n {
            if entries[i][i] != Order::Finite(1) {
                return Err(Error::Diagonal(i, entries[i][i].to_string()));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if let Order::Finite(m) = entries[i][j] {
                    if m < 2 {
                        return Err(Error::BadEntry { i, j, value: m.to_string() });
                    }
                }
                if entries[i][j] != entries[j][i] {
                    return Err(Error::Asymmetry {
                        i,
                        j,
                        a: entries[i][j].to_string(),
                        b: entries[j][i].to_string(),
                    });
                }
            }
        }
        Ok(CoxeterMatrix { generators, entries })
    }

    /// Builds a matrix from generator names and a closure giving off-diagonal entries.
    pub fn from_fn(names: &[&str], mut f: impl FnMut(usize, usize) -> Order) -> Result<Self> {
        let n = names.len();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Order::Finite(1) } else { f(i.min(j), i.max(j)) }).collect())
            .collect();
        Self::new(names.iter().map(|s| s.to_string()).collect(), entries)
    }

    /// Parses the `generators` / `coxeter_matrix` fields of a JSON object.
    /// The short aliases `gens` / `m` are accepted as well.
    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Schema("expected a JSON object".into()))?;
        let gens = obj
            .get("generators")
            .or_else(|| obj.get("gens"))
            .ok_or_else(|| Error::Schema("missing field `generators`".into()))?;
        let gens = gens
            .as_array()
            .ok_or_else(|| Error::Schema("`generators` must be a list of strings".into()))?
            .iter()
            .map(|g| g.as_str().map(str::to_owned))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Schema("`generators` must be a list of strings".into()))?;
        let rows = obj
            .get("coxeter_matrix")
            .or_else(|| obj.get("m"))
            .ok_or_else(|| Error::Schema("missing field `coxeter_matrix`".into()))?
            .as_array()
            .ok_or_else(|| Error::Schema("`coxeter_matrix` must be a list of rows".into()))?;
        let mut entries = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Schema(format!("row {i} of `coxeter_matrix` is not a list")))?;
            let mut parsed = Vec::with_capacity(row.len());
            for (j, e) in row.iter().enumerate() {
                let o = parse_order(e).map_err(|value| Error::BadEntry { i, j, value })?;
                parsed.push(o);
            }
            entries.push(parsed);
        }
        Self::new(gens, entries)
    }

    /// Parses a JSON document describing a Coxeter matrix.
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn m(&self, s: usize, t: usize) -> Order {
        self.entries[s][t]
    }

    pub fn full_set(&self) -> GenSet {
        GenSet::full(self.rank())
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_owned()))
    }

    pub fn commute(&self, s: usize, t: usize) -> bool {
        s == t || self.entries[s][t] == Order::Finite(2)
    }

    pub fn is_right_angled(&self) -> bool {
        (0..self.rank()).all(|i| {
            (0..self.rank()).all(|j| i == j || matches!(self.entries[i][j], Order::Finite(2) | Order::Infinity))
        })
    }

    /// Least common multiple of the finite off-diagonal entries (at least 2).
    pub fn finite_lcm(&self) -> u32 {
        let mut l = 1u32;
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if let Order::Finite(m) = self.entries[i][j] {
                    l = num_integer::lcm(l, m);
                }
            }
        }
        l.max(2)
    }

    /// The parabolic subsystem `(W_T, T)`, generators kept in index order.
    pub fn restrict(&self, t: GenSet) -> Result<CoxeterMatrix> {
        let idx: Vec<usize> = t.iter().filter(|&i| i < self.rank()).collect();
        let gens = idx.iter().map(|&i| self.generators[i].clone()).collect();
        let entries = idx.iter().map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect()).collect();
        CoxeterMatrix::new(gens, entries)
    }

    /// Canonical text form, the input of [`CoxeterMatrix::digest`].
    pub fn canonical_text(&self) -> String {
        let mut s = self.generators.join(",");
        for row in &self.entries {
            s.push(';');
            s.push_str(&row.iter().map(Order::to_string).collect::<Vec<_>>().join(","));
        }
        s
    }

    /// Hex SHA-256 digest of the canonical text form.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.canonical_text().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses a Coxeter matrix document; see [`CoxeterMatrix::parse`].
pub fn parse_coxeter_matrix(text: &str) -> Result<CoxeterMatrix> {
    CoxeterMatrix::parse(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_infinite_dihedral() {
        let m = parse_coxeter_matrix(r#"{"gens":["s","t"],"m":[[1,"inf"],["inf",1]]}"#).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.m(0, 1), Order::Infinity);
    }

    #[test]
    fn parses_triangle() {
        let m = parse_coxeter_matrix(
            r#"{"generators":["a","b","c"],"coxeter_matrix":[[1,3,3],[3,1,3],[3,3,1]]}"#,
        )
        .unwrap();
        assert_eq!(m.m(0, 2), Order::Finite(3));
        assert_eq!(m.finite_lcm(), 3);
    }

    #[test]
    fn rejects_asymmetry() {
        let e = parse_coxeter_matrix(r#"{"generators":["a","b"],"coxeter_matrix":[[1,3],[4,1]]}"#);
        assert!(matches!(e, Err(Error::Asymmetry { .. })));
    }

    #[test]
    fn rejects_bad_diagonal_and_entries() {
        let e = parse_coxeter_matrix(r#"{"generators":["a","b"],"coxeter_matrix":[[2,3],[3,1]]}"#);
        assert!(matches!(e, Err(Error::Diagonal(0, _))));
        let e = parse_coxeter_matrix(r#"{"generators":["a","b"],"coxeter_matrix":[[1,1],[1,1]]}"#);
        assert!(matches!(e, Err(Error::BadEntry { .. })));
        let e = parse_coxeter_matrix(r#"{"generators":["a","b"],"coxeter_matrix":[[1,"x"],["x",1]]}"#);
        assert!(matches!(e, Err(Error::BadEntry { .. })));
    }

    #[test]
    fn rejects_missing_fields_and_duplicates() {
        assert!(matches!(parse_coxeter_matrix(r#"{"generators":["a"]}"#), Err(Error::Schema(_))));
        assert!(matches!(parse_coxeter_matrix("[1,2]"), Err(Error::Schema(_))));
        let e = parse_coxeter_matrix(r#"{"generators":["a","a"],"coxeter_matrix":[[1,3],[3,1]]}"#);
        assert!(matches!(e, Err(Error::Schema(_))));
    }

    #[test]
    fn digest_is_stable_and_distinguishes() {
        let a = parse_coxeter_matrix(r#"{"generators":["a","b"],"coxeter_matrix":[[1,3],[3,1]]}"#).unwrap();
        let b = parse_coxeter_matrix(r#"{"generators":["a","b"],"coxeter_matrix":[[1,4],[4,1]]}"#).unwrap();
        assert_eq!(a.digest(), a.clone().digest());
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }

    #[test]
    fn restrict_keeps_entries() {
        let m = CoxeterMatrix::from_fn(&["a", "b", "c"], |i, j| {
            if (i, j) == (0, 2) { Order::Infinity } else { Order::Finite(3) }
        })
        .unwrap();
        let r = m.restrict(GenSet::from_indices([0, 2])).unwrap();
        assert_eq!(r.generators(), &["a".to_string(), "c".to_string()]);
        assert_eq!(r.m(0, 1), Order::Infinity);
    }
}
