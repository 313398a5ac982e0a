//! Reported numbers: extended reals and values with provenance.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

/// A real number or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum Extended {
    Finite(f64),
    Infinity,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(x),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinity)
    }

    /// `1 + 1/x` with `1 + 1/0 = ∞` and `1 + 1/∞ = 1`.
    pub fn one_plus_reciprocal(self) -> Extended {
        match self {
            Extended::Infinity => Extended::Finite(1.0),
            Extended::Finite(x) if x == 0.0 => Extended::Infinity,
            Extended::Finite(x) => Extended::Finite(1.0 + 1.0 / x),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(x) => s.serialize_f64(*x),
            Extended::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Extended::Finite(x)),
            Raw::Str(s) if s == "inf" => Ok(Extended::Infinity),
            Raw::Str(s) => Err(de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Exact,
    SeriesSingularity,
    EnumerationFit,
    Derived,
}

/// A reported value with its uncertainty half-width and method.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: Extended,
    /// May be `+∞` when the value is bracketed only from one side.
    #[serde(with = "unbounded_f64")]
    pub uncertainty: f64,
    pub method: Method,
}

/// Serialises a non-negative `f64` that may be `+∞` like an [`Extended`].
pub mod unbounded_f64 {
    use super::Extended;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() { Extended::Infinity } else { Extended::Finite(*x) }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Extended::deserialize(d)?.finite().unwrap_or(f64::INFINITY))
    }
}

impl Quantity {
    pub fn exact(value: Extended) -> Self {
        Quantity { value, uncertainty: 0.0, method: Method::Exact }
    }

    pub fn derived(value: Extended, uncertainty: f64) -> Self {
        Quantity { value, uncertainty, method: Method::Derived }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.value, self.method) {
            (Extended::Infinity, _) => write!(f, "inf [{:?}]", self.method),
            (Extended::Finite(x), Method::Exact) => write!(f, "{x} [Exact]"),
            (Extended::Finite(x), m) if self.uncertainty.is_infinite() => write!(f, "{x:.9} (unbounded above) [{m:?}]"),
            (Extended::Finite(x), m) => write!(f, "{x:.9} ± {:.3e} [{m:?}]", self.uncertainty),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_round_trip() {
        for v in [Extended::Finite(1.25), Extended::Infinity] {
            let s = serde_json::to_string(&v).unwrap();
            assert_eq!(serde_json::from_str::<Extended>(&s).unwrap(), v);
        }
        assert_eq!(serde_json::to_string(&Extended::Infinity).unwrap(), "\"inf\"");
    }

    #[test]
    fn reciprocal_conventions() {
        assert_eq!(Extended::Finite(0.0).one_plus_reciprocal(), Extended::Infinity);
        assert_eq!(Extended::Infinity.one_plus_reciprocal(), Extended::Finite(1.0));
        assert_eq!(Extended::Finite(2.0).one_plus_reciprocal(), Extended::Finite(1.5));
    }
}
