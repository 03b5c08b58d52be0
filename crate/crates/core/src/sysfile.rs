//! JSON system files.
//!
//! ```json
//! { "points": ["a", "b"],
//!   "base": [[["a","a"],["b","b"]]],
//!   "map": ["b", "b"],
//!   "flags": { "strict_onto": false } }
//! ```
//!
//! `points` may also be a bare count; point references may be ids or
//! labels.

use serde::{Deserialize, Serialize};

use crate::dynsys::FiniteSystem;
use crate::error::{invalid, Result};
use crate::uniform::{Relation, UniformBase};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Points {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Id(usize),
    Label(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    #[serde(default)]
    pub strict_onto: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub points: Points,
    pub base: Vec<Vec<(PointRef, PointRef)>>,
    pub map: Vec<PointRef>,
    #[serde(default)]
    pub flags: Flags,
}

impl SystemSpec {
    pub fn from_json(text: &str) -> Result<SystemSpec> {
        serde_json::from_str(text).map_err(|e| invalid(format!("system file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    fn labels(&self) -> Option<&[String]> {
        match &self.points {
            Points::Labels(l) => Some(l),
            Points::Count(_) => None,
        }
    }

    fn size(&self) -> usize {
        match &self.points {
            Points::Count(n) => *n,
            Points::Labels(l) => l.len(),
        }
    }

    fn resolve(&self, r: &PointRef) -> Result<usize> {
        let n = self.size();
        match r {
            PointRef::Id(i) if *i < n => Ok(*i),
            PointRef::Id(i) => Err(invalid(format!("point id {i} out of range (n = {n})"))),
            PointRef::Label(s) => self
                .labels()
                .and_then(|l| l.iter().position(|x| x == s))
                .ok_or_else(|| invalid(format!("unknown point label {s:?}"))),
        }
    }

    pub fn to_system(&self) -> Result<FiniteSystem> {
        let n = self.size();
        if n == 0 {
            return Err(invalid("system needs at least one point"));
        }
        if let Some(l) = self.labels() {
            let mut sorted = l.to_vec();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != l.len() {
                return Err(invalid("duplicate point labels"));
            }
        }
        let base = if self.base.is_empty() {
            vec![Relation::diagonal(n)]
        } else {
            self.base
                .iter()
                .map(|pairs| {
                    let resolved = pairs
                        .iter()
                        .map(|(a, b)| Ok((self.resolve(a)?, self.resolve(b)?)))
                        .collect::<Result<Vec<_>>>()?;
                    Relation::from_pairs(n, resolved)
                })
                .collect::<Result<Vec<_>>>()?
        };
        if self.map.len() != n {
            return Err(invalid(format!("map has {} entries for {n} points", self.map.len())));
        }
        let map = self.map.iter().map(|r| self.resolve(r)).collect::<Result<Vec<_>>>()?;
        let s = FiniteSystem::new(UniformBase::validate(base)?, map, self.flags.strict_onto)?;
        match self.labels() {
            Some(l) => s.with_labels(l.to_vec()),
            None => Ok(s),
        }
    }

    /// Ids throughout; labels are kept when the system has them.
    pub fn from_system(s: &FiniteSystem) -> SystemSpec {
        let points = match s.labels() {
            Some(l) => Points::Labels(l.to_vec()),
            None => Points::Count(s.size()),
        };
        let base = s
            .space()
            .base()
            .iter()
            .map(|r| r.pairs().into_iter().map(|(a, b)| (PointRef::Id(a), PointRef::Id(b))).collect())
            .collect();
        SystemSpec {
            points,
            base,
            map: s.map().iter().map(|&y| PointRef::Id(y)).collect(),
            flags: Flags::default(),
        }
    }
}

pub fn load_system(path: &std::path::Path) -> Result<FiniteSystem> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    SystemSpec::from_json(&text)?.to_system()
}
