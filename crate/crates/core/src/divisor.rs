//! Integer sequences on the punctures `1, 2, 3, ...`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Anything that assigns a multiplicity to each puncture `k >= 1`.
pub trait DivisorSource {
    fn multiplicity(&self, k: u64) -> i64;

    /// Upper bound on the support when it is known to be finite.
    fn support_bound(&self) -> Option<u64>;
}

/// Finitely supported divisor. Zero multiplicities are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor {
    support: BTreeMap<u64, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a divisor from `(puncture, multiplicity)` pairs. Zero
    /// multiplicities are dropped; repeated punctures are summed.
    pub fn from_pairs<I: IntoIterator<Item = (u64, i64)>>(pairs: I) -> Result<Self> {
        let mut d = Self::new();
        for (k, n) in pairs {
            if k == 0 {
                return Err(Error::InvalidArgument("puncture index must be >= 1".into()));
            }
            d.add_at(k, n);
        }
        Ok(d)
    }

    /// Multiplicity at `k`, zero off the support.
    pub fn get(&self, k: u64) -> i64 {
        self.support.get(&k).copied().unwrap_or(0)
    }

    /// Sets the multiplicity at `k` (`k >= 1`); zero removes the entry.
    pub fn set(&mut self, k: u64, n: i64) {
        assert!(k >= 1, "puncture index must be >= 1");
        if n == 0 {
            self.support.remove(&k);
        } else {
            self.support.insert(k, n);
        }
    }

    fn add_at(&mut self, k: u64, n: i64) {
        let v = self.get(k) + n;
        self.set(k, v);
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    /// Largest puncture in the support.
    pub fn max_index(&self) -> Option<u64> {
        self.support.keys().next_back().copied()
    }

    /// Ascending `(puncture, multiplicity)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.support.iter().map(|(&k, &n)| (k, n))
    }

    /// Pointwise sum; this is the divisor of a product of sections.
    pub fn sum(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (k, n) in other.iter() {
            out.add_at(k, n);
        }
        out
    }

    /// Restriction to punctures `k <= up_to`.
    pub fn window(&self, up_to: u64) -> Divisor {
        Divisor {
            support: self.support.range(..=up_to).map(|(&k, &n)| (k, n)).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: DivisorJson = serde_json::from_str(s)?;
        let mut d = Divisor::new();
        for (key, n) in raw.support {
            let k: u64 = key
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("puncture key {key:?} is not a decimal integer")))?;
            if k == 0 {
                return Err(Error::Parse("puncture key must be >= 1".into()));
            }
            if n == 0 {
                return Err(Error::Parse(format!("multiplicity at {k} must be nonzero")));
            }
            if d.support.insert(k, n).is_some() {
                return Err(Error::Parse(format!("duplicate puncture key {k}")));
            }
        }
        Ok(d)
    }

    /// Serializes as `{"support": {"1": 3, ...}}` with ascending keys.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\"support\": {");
        for (i, (k, n)) in self.iter().enumerate() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push_str(&format!("\"{k}\": {n}"));
        }
        s.push_str("}}");
        s
    }
}

impl DivisorSource for Divisor {
    fn multiplicity(&self, k: u64) -> i64 {
        self.get(k)
    }

    fn support_bound(&self) -> Option<u64> {
        Some(self.max_index().unwrap_or(0))
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

// Keys stay strings so parse errors on them are ours.
#[derive(Serialize, Deserialize)]
struct DivisorJson {
    support: BTreeMap<String, i64>,
}

/// Divisor given by a rule `k -> nu(k)` with no finite-support promise.
#[derive(Clone)]
pub struct ProceduralDivisor {
    rule: Arc<dyn Fn(u64) -> i64 + Send + Sync>,
    declared_head: u64,
}

impl ProceduralDivisor {
    /// The rule must be deterministic.
    pub fn new<F>(rule: F) -> Self
    where
        F: Fn(u64) -> i64 + Send + Sync + 'static,
    {
        Self { rule: Arc::new(rule), declared_head: 1 }
    }

    pub fn with_declared_head(mut self, head: u64) -> Self {
        self.declared_head = head.max(1);
        self
    }

    pub fn declared_head(&self) -> u64 {
        self.declared_head
    }

    /// Agrees with `self` below `k0` and with `tail` from `k0` on.
    pub fn splice(base: &Divisor, k0: u64, tail: ProceduralDivisor) -> Self {
        let base = base.clone();
        Self::new(move |k| if k < k0 { base.get(k) } else { tail.multiplicity(k) })
    }
}

impl DivisorSource for ProceduralDivisor {
    fn multiplicity(&self, k: u64) -> i64 {
        (self.rule)(k)
    }

    fn support_bound(&self) -> Option<u64> {
        None
    }
}

impl fmt::Debug for ProceduralDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProceduralDivisor")
            .field("declared_head", &self.declared_head)
            .finish_non_exhaustive()
    }
}
