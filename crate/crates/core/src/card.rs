use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A cardinal that is either finite or countably infinite (`w`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtCard {
    Finite(u64),
    Omega,
}

impl ExtCard {
    pub const ZERO: ExtCard = ExtCard::Finite(0);
    pub const ONE: ExtCard = ExtCard::Finite(1);

    pub fn is_zero(self) -> bool {
        self == ExtCard::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtCard::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtCard::Finite(n) => Some(n),
            ExtCard::Omega => None,
        }
    }

    /// Subtraction that keeps `w - n = w`; `None` when the result would be negative.
    pub fn checked_sub(self, n: u64) -> Option<ExtCard> {
        match self {
            ExtCard::Finite(m) => m.checked_sub(n).map(ExtCard::Finite),
            ExtCard::Omega => Some(ExtCard::Omega),
        }
    }
}

impl Default for ExtCard {
    fn default() -> Self {
        ExtCard::ZERO
    }
}

impl From<u64> for ExtCard {
    fn from(n: u64) -> Self {
        ExtCard::Finite(n)
    }
}

impl Add for ExtCard {
    type Output = ExtCard;

    /// Saturates to `w`; finite sums past `u64::MAX` are not representable and also saturate.
    fn add(self, rhs: ExtCard) -> ExtCard {
        match (self, rhs) {
            (ExtCard::Finite(a), ExtCard::Finite(b)) => {
                a.checked_add(b).map_or(ExtCard::Omega, ExtCard::Finite)
            }
            _ => ExtCard::Omega,
        }
    }
}

impl fmt::Display for ExtCard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtCard::Finite(n) => write!(f, "{n}"),
            ExtCard::Omega => write!(f, "w"),
        }
    }
}

impl Serialize for ExtCard {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtCard::Finite(n) => s.serialize_u64(*n),
            ExtCard::Omega => s.serialize_str("w"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtCard {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            N(u64),
            S(String),
        }
        match Repr::deserialize(d)? {
            Repr::N(n) => Ok(ExtCard::Finite(n)),
            Repr::S(s) if s == "w" => Ok(ExtCard::Omega),
            Repr::S(s) => Err(serde::de::Error::custom(format!("bad cardinal `{s}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(ExtCard::Finite(3) + ExtCard::Omega, ExtCard::Omega);
        assert_eq!(ExtCard::Finite(3) + ExtCard::Finite(4), ExtCard::Finite(7));
        assert!(ExtCard::Finite(u64::MAX) < ExtCard::Omega);
        assert_eq!(ExtCard::Omega.checked_sub(5), Some(ExtCard::Omega));
        assert_eq!(ExtCard::Finite(2).checked_sub(5), None);
    }

    #[test]
    fn json_form() {
        assert_eq!(serde_json::to_string(&ExtCard::Omega).unwrap(), "\"w\"");
        assert_eq!(serde_json::to_string(&ExtCard::Finite(4)).unwrap(), "4");
        let back: ExtCard = serde_json::from_str("\"w\"").unwrap();
        assert_eq!(back, ExtCard::Omega);
    }
}
