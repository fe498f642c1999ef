use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Provenance of a term group.
///
/// Every stored term belongs to exactly one tag; the tag groups partition
/// the model. `Route(a)` holds the travel-cost part of vehicle `a`,
/// `Vehicle(a)` its one-location-per-step penalties, and `Coupling` the
/// penalties that join different vehicles.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagId {
    Objective,
    Route(usize),
    Vehicle(usize),
    Coupling,
    User(String),
}

impl TagId {
    /// Penalty groups are the ones that must vanish on feasible assignments.
    /// Objective-like tags (`Objective`, `Route`) are the only non-penalties.
    pub fn is_penalty(&self) -> bool {
        !matches!(self, TagId::Objective | TagId::Route(_))
    }

    /// The vehicle index carried by the tag, if any.
    pub fn vehicle(&self) -> Option<usize> {
        match self {
            TagId::Route(a) | TagId::Vehicle(a) => Some(*a),
            _ => None,
        }
    }

    /// The tag with its vehicle index stripped; used to align identical slices.
    pub(crate) fn kind(&self) -> String {
        match self {
            TagId::Route(_) => "route".into(),
            TagId::Vehicle(_) => "vehicle".into(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for TagId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagId::Objective => f.write_str("objective"),
            TagId::Route(a) => write!(f, "route:{a}"),
            TagId::Vehicle(a) => write!(f, "vehicle:{a}"),
            TagId::Coupling => f.write_str("coupling"),
            TagId::User(s) => write!(f, "user:{s}"),
        }
    }
}

impl FromStr for TagId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Validation(format!("malformed tag `{s}`"));
        match s {
            "objective" => return Ok(TagId::Objective),
            "coupling" => return Ok(TagId::Coupling),
            _ => {}
        }
        let (head, rest) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "route" => rest.parse().map(TagId::Route).map_err(|_| bad()),
            "vehicle" => rest.parse().map(TagId::Vehicle).map_err(|_| bad()),
            "user" => Ok(TagId::User(rest.to_string())),
            _ => Err(bad()),
        }
    }
}

impl Serialize for TagId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TagId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Structured label of a VRP variable `x_{a,i,s}`: vehicle `a` is at
/// location `i` during step `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VarLabel {
    pub vehicle: usize,
    pub location: usize,
    pub step: usize,
}
