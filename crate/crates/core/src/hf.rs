//! Hereditarily finite sets, the ground-model objects behind check names.

use std::collections::BTreeSet;
use std::fmt;

/// An extensional hereditarily finite set. Equality and ordering are
/// structural on the normalized member tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HfSet(BTreeSet<HfSet>);

impl HfSet {
    pub fn empty() -> Self {
        HfSet(BTreeSet::new())
    }

    pub fn from_members<I: IntoIterator<Item = HfSet>>(members: I) -> Self {
        HfSet(members.into_iter().collect())
    }

    /// The von Neumann ordinal `n`.
    pub fn nat(n: u64) -> Self {
        let mut members = BTreeSet::new();
        let mut current = HfSet::empty();
        for _ in 0..n {
            members.insert(current.clone());
            current = HfSet(members.clone());
        }
        current
    }

    pub fn singleton(x: HfSet) -> Self {
        HfSet::from_members([x])
    }

    /// Kuratowski pair `{{a}, {a, b}}`.
    pub fn pair(a: HfSet, b: HfSet) -> Self {
        HfSet::from_members([HfSet::singleton(a.clone()), HfSet::from_members([a, b])])
    }

    /// Inverse of [`HfSet::pair`].
    pub fn unpair(&self) -> Option<(HfSet, HfSet)> {
        let members: Vec<&HfSet> = self.0.iter().collect();
        match members.as_slice() {
            [single] if single.len() == 1 => {
                let a = single.iter().next()?.clone();
                Some((a.clone(), a))
            }
            [x, y] => {
                let (small, big) = if x.len() == 1 { (x, y) } else { (y, x) };
                if small.len() != 1 || big.len() != 2 {
                    return None;
                }
                let a = small.iter().next()?;
                if !big.contains(a) {
                    return None;
                }
                let b = big.iter().find(|m| *m != a)?;
                Some((a.clone(), b.clone()))
            }
            _ => None,
        }
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &HfSet> {
        self.0.iter()
    }

    pub fn insert(&mut self, x: HfSet) -> bool {
        self.0.insert(x)
    }

    /// `Some(n)` when the set is the von Neumann ordinal `n`.
    pub fn as_nat(&self) -> Option<u64> {
        let mut prefix = BTreeSet::new();
        for m in &self.0 {
            if m.0 != prefix {
                return None;
            }
            prefix.insert(m.clone());
        }
        Some(self.0.len() as u64)
    }

    /// Set-theoretic rank.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|m| m.rank() + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_nat() {
            return write!(f, "{n}");
        }
        write!(f, "(set")?;
        for m in &self.0 {
            write!(f, " {m}")?;
        }
        write!(f, ")")
    }
}
