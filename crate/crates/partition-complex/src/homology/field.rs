use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset_core::subspace::is_prime;

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::arg(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::arg(format!("prime {p} exceeds 2^31")));
        }
        Ok(Field::Prime(p))
    }

    /// Short name used in reports: `Q`, `F2`, `F3`, ...
    pub fn name(&self) -> String {
        match self {
            Field::Rationals => "Q".into(),
            Field::Prime(p) => format!("F{p}"),
        }
    }

    /// Characteristic: 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts the command-line spellings `q` and `fp:P` as well as the
    /// report names `Q` and `FP`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        let digits = t
            .strip_prefix("fp:")
            .or_else(|| t.strip_prefix("FP:"))
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| Error::arg(format!("unknown field '{s}' (use q or fp:P)")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::arg(format!("unknown field '{s}' (use q or fp:P)")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reduced Betti numbers by degree. Only nonzero ranks are stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub field: Field,
    #[serde(with = "degree_keys")]
    pub betti: BTreeMap<i64, u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fingerprint: Option<String>,
    /// Degrees at or above this value are unreliable because enumeration
    /// stopped at a degree cap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncated_from: Option<i64>,
}

impl BettiTable {
    pub fn new(field: Field) -> Self {
        BettiTable {
            field,
            betti: BTreeMap::new(),
            fingerprint: None,
            truncated_from: None,
        }
    }

    pub fn from_pairs(field: Field, pairs: &[(i64, u64)]) -> Self {
        let mut t = Self::new(field);
        for &(d, r) in pairs {
            t.add(d, r);
        }
        t
    }

    pub fn add(&mut self, degree: i64, rank: u64) {
        if rank > 0 {
            *self.betti.entry(degree).or_insert(0) += rank;
        }
    }

    pub fn get(&self, degree: i64) -> u64 {
        self.betti.get(&degree).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.betti.is_empty()
    }

    pub fn total_rank(&self) -> u64 {
        self.betti.values().sum()
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .map(|(&d, &r)| if d.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// The same ranks in degrees shifted by `by`.
    pub fn shifted(&self, by: i64) -> Self {
        BettiTable {
            field: self.field,
            betti: self.betti.iter().map(|(&d, &r)| (d + by, r)).collect(),
            fingerprint: None,
            truncated_from: self.truncated_from.map(|t| t + by),
        }
    }

    /// Comma-separated `degree,rank` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,degree,rank\n");
        for (d, r) in &self.betti {
            out.push_str(&format!("{},{d},{r}\n", self.field));
        }
        out
    }

    /// Ranks only, as a plain map suitable for equality checks.
    pub fn ranks(&self) -> &BTreeMap<i64, u64> {
        &self.betti
    }
}

/// Ranks keyed by degree, written as a JSON object in numeric degree order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeRanks(#[serde(with = "degree_keys")] pub BTreeMap<i64, u64>);

impl From<&BettiTable> for DegreeRanks {
    fn from(t: &BettiTable) -> Self {
        DegreeRanks(t.betti.clone())
    }
}

mod degree_keys {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    /// Entries are written in numeric degree order.
    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, u64>, s: S) -> Result<S::Ok, S::Error> {
        let ordered: ordered::OrderedMap = m.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        ordered.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, u64>, D::Error> {
        let raw: BTreeMap<String, u64> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| k.parse::<i64>().map(|k| (k, v)).map_err(serde::de::Error::custom))
            .collect()
    }

    mod ordered {
        use serde::ser::{Serialize, SerializeMap, Serializer};

        /// A map that serializes its entries in insertion order.
        pub struct OrderedMap(Vec<(String, u64)>);

        impl FromIterator<(String, u64)> for OrderedMap {
            fn from_iter<I: IntoIterator<Item = (String, u64)>>(iter: I) -> Self {
                OrderedMap(iter.into_iter().collect())
            }
        }

        impl Serialize for OrderedMap {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in &self.0 {
                    m.serialize_entry(k, v)?;
                }
                m.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rationals);
        assert_eq!("fp:2".parse::<Field>().unwrap(), Field::Prime(2));
        assert_eq!("F3".parse::<Field>().unwrap(), Field::Prime(3));
        assert!("fp:4".parse::<Field>().is_err());
        assert!("z".parse::<Field>().is_err());
    }

    #[test]
    fn betti_json_shape() {
        let t = BettiTable::from_pairs(Field::Prime(2), &[(5, 9), (4, 1), (10, 2), (-1, 1)]);
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"field":"F2","betti":{"-1":1,"4":1,"5":9,"10":2}}"#);
        let back: BettiTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        assert_eq!(t.euler_characteristic(), -1 + 1 - 9 + 2);
    }
}
