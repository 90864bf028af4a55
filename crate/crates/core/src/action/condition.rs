use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::action::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::order::OrderPoint;

/// A Cohen condition: a finite partial function from `X × ω` to `2`.
///
/// Stronger conditions are larger maps, so `p.extends(q)` means `p ⊇ q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Condition {
    entries: BTreeMap<(OrderPoint, u32), bool>,
}

impl Condition {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails when the same key is assigned both bits.
    pub fn from_entries<I: IntoIterator<Item = ((OrderPoint, u32), bool)>>(
        entries: I,
    ) -> Result<Self> {
        let mut out = Condition::new();
        for (k, v) in entries {
            if let Some(prev) = out.entries.insert(k.clone(), v) {
                if prev != v {
                    return Err(Error::InvalidCondition(format!(
                        "both bits assigned to ({} {})",
                        k.0, k.1
                    )));
                }
            }
        }
        Ok(out)
    }

    pub fn singleton(x: OrderPoint, n: u32, bit: bool) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert((x, n), bit);
        Condition { entries }
    }

    pub fn get(&self, x: &OrderPoint, n: u32) -> Option<bool> {
        self.entries.get(&(x.clone(), n)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(OrderPoint, u32), &bool)> {
        self.entries.iter()
    }

    /// First coordinates mentioned by the condition.
    pub fn supp(&self) -> BTreeSet<OrderPoint> {
        self.entries.keys().map(|(x, _)| x.clone()).collect()
    }

    pub fn compatible(&self, other: &Condition) -> bool {
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .entries
            .iter()
            .all(|(k, v)| big.entries.get(k).is_none_or(|w| w == v))
    }

    /// Greatest lower bound, when the conditions are compatible.
    pub fn meet(&self, other: &Condition) -> Option<Condition> {
        if !self.compatible(other) {
            return None;
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|(k, v)| (k.clone(), *v)));
        Some(Condition { entries })
    }

    /// `self ≤ other` in the forcing order.
    pub fn extends(&self, other: &Condition) -> bool {
        other
            .entries
            .iter()
            .all(|(k, v)| self.entries.get(k) == Some(v))
    }

    /// `π · p`: moves every key's first coordinate by `π`.
    pub fn apply(&self, pi: &Automorphism) -> Result<Condition> {
        let mut entries = BTreeMap::new();
        for ((x, n), v) in &self.entries {
            entries.insert((pi.apply_point(x)?, *n), *v);
        }
        Ok(Condition { entries })
    }
}

pub fn apply_condition(pi: &Automorphism, p: &Condition) -> Result<Condition> {
    p.apply(pi)
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(cond")?;
        for ((x, n), v) in &self.entries {
            write!(f, " (({x} {n}) {})", u8::from(*v))?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for Condition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
