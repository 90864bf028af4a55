use std::collections::{BTreeMap, BTreeSet};

use crate::action::Condition;
use crate::error::{Error, Result};
use crate::order::OrderPoint;

/// Upper limit on `|I| · k`, so that atoms fit in machine words and the
/// atom set stays enumerable.
pub const MAX_KEYS: usize = 20;

/// A finite fragment of `Add(ω, I)`: conditions are partial functions
/// `I × k → 2`, atoms are the total ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPoset {
    domain: Vec<OrderPoint>,
    slots: u32,
    index: BTreeMap<OrderPoint, usize>,
}

/// A condition as a pair of bit masks over the poset's keys: `mask` marks
/// the assigned keys and `vals` their bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CondBits {
    pub mask: u32,
    pub vals: u32,
}

impl CondBits {
    pub const TOP: CondBits = CondBits { mask: 0, vals: 0 };

    /// `self ≤ other`.
    pub fn extends(self, other: CondBits) -> bool {
        self.mask & other.mask == other.mask && self.vals & other.mask == other.vals
    }

    pub fn compatible(self, other: CondBits) -> bool {
        (self.vals ^ other.vals) & self.mask & other.mask == 0
    }

    pub fn with(self, key: usize, bit: bool) -> CondBits {
        let b = 1u32 << key;
        CondBits {
            mask: self.mask | b,
            vals: if bit { self.vals | b } else { self.vals & !b },
        }
    }

    pub fn len(self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }
}

impl TruncatedPoset {
    pub fn new(mut domain: Vec<OrderPoint>, slots: u32) -> Result<Self> {
        let mut seen = BTreeSet::new();
        domain.retain(|x| seen.insert(x.clone()));
        let keys = domain.len() * slots as usize;
        if keys > MAX_KEYS {
            return Err(Error::EnumerationBudgetExceeded {
                needed: keys as u64,
                budget: MAX_KEYS as u64,
            });
        }
        let index = domain
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        Ok(TruncatedPoset {
            domain,
            slots,
            index,
        })
    }

    /// `n` natural coordinates with `slots` slots each.
    pub fn plain(n: u64, slots: u32) -> Result<Self> {
        Self::new((0..n).map(OrderPoint::Nat).collect(), slots)
    }

    pub fn domain(&self) -> &[OrderPoint] {
        &self.domain
    }

    pub fn slots(&self) -> u32 {
        self.slots
    }

    pub fn key_count(&self) -> usize {
        self.domain.len() * self.slots as usize
    }

    pub fn atom_count(&self) -> usize {
        1usize << self.key_count()
    }

    pub fn contains_point(&self, x: &OrderPoint) -> bool {
        self.index.contains_key(x)
    }

    pub fn key(&self, x: &OrderPoint, slot: u32) -> Result<usize> {
        match self.index.get(x) {
            Some(i) if slot < self.slots => Ok(i * self.slots as usize + slot as usize),
            _ => Err(Error::CoordinateOutOfDomain(format!("({x} {slot})"))),
        }
    }

    pub fn key_point(&self, key: usize) -> (&OrderPoint, u32) {
        let k = self.slots as usize;
        (&self.domain[key / k], (key % k) as u32)
    }

    pub fn bits(&self, p: &Condition) -> Result<CondBits> {
        let mut out = CondBits::TOP;
        for ((x, n), v) in p.iter() {
            out = out.with(self.key(x, *n)?, *v);
        }
        Ok(out)
    }

    pub fn condition(&self, bits: CondBits) -> Condition {
        let entries = (0..self.key_count())
            .filter(|k| bits.mask >> k & 1 == 1)
            .map(|k| {
                let (x, n) = self.key_point(k);
                ((x.clone(), n), bits.vals >> k & 1 == 1)
            });
        Condition::from_entries(entries).expect("bit patterns are functions")
    }

    /// Atoms below `bits`, as key-indexed bit patterns.
    pub fn atoms_below(&self, bits: CondBits) -> impl Iterator<Item = u32> {
        let full = (1u32 << self.key_count()) - 1;
        let free = full & !bits.mask;
        let base = bits.vals & bits.mask;
        // enumerate submasks of `free` in increasing order
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let sub = next?;
            next = if sub == free {
                None
            } else {
                Some((sub.wrapping_sub(free)) & free)
            };
            Some(base | sub)
        })
    }

    pub fn ext(&self, bits: CondBits) -> AtomSet {
        let mut set = AtomSet::empty(self.atom_count());
        for a in self.atoms_below(bits) {
            set.insert(a as usize);
        }
        set
    }

    /// Every condition of the poset (there are `3^keys`).
    pub fn all_conditions(&self) -> Vec<CondBits> {
        let keys = self.key_count();
        let mut out = vec![CondBits::TOP];
        for k in 0..keys {
            let mut next = Vec::with_capacity(out.len() * 3);
            for c in out {
                next.push(c);
                next.push(c.with(k, false));
                next.push(c.with(k, true));
            }
            out = next;
        }
        out
    }

    pub fn sample(&self, atom: u32) -> GenericSample {
        let bits = (0..self.key_count())
            .map(|k| {
                let (x, n) = self.key_point(k);
                ((x.clone(), n), atom >> k & 1 == 1)
            })
            .collect();
        GenericSample { bits }
    }
}

/// A total assignment standing in for a generic filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericSample {
    pub bits: BTreeMap<(OrderPoint, u32), bool>,
}

impl GenericSample {
    pub fn bit(&self, x: &OrderPoint, slot: u32) -> Option<bool> {
        self.bits.get(&(x.clone(), slot)).copied()
    }

    /// Whether the condition belongs to the filter this atom generates.
    pub fn meets(&self, p: &Condition) -> bool {
        p.iter().all(|((x, n), v)| self.bit(x, *n) == Some(*v))
    }
}

/// A set of atoms as a bitset indexed by the atom's bit pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    words: Vec<u64>,
    len: usize,
}

impl AtomSet {
    pub fn empty(len: usize) -> Self {
        AtomSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = AtomSet {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn and_with(&mut self, other: &AtomSet) {
        self.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a &= b);
    }

    pub fn or_with(&mut self, other: &AtomSet) {
        self.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a |= b);
    }

    pub fn complement(&self) -> AtomSet {
        let mut s = AtomSet {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|i| self.contains(*i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_and_bits() {
        let t = TruncatedPoset::plain(2, 3).unwrap();
        assert_eq!(t.key_count(), 6);
        assert_eq!(t.key(&OrderPoint::Nat(1), 2).unwrap(), 5);
        assert!(matches!(
            t.key(&OrderPoint::Nat(2), 0),
            Err(Error::CoordinateOutOfDomain(_))
        ));
        assert!(t.key(&OrderPoint::Nat(0), 3).is_err());
        let p = Condition::from_entries([
            ((OrderPoint::Nat(0), 1), true),
            ((OrderPoint::Nat(1), 0), false),
        ])
        .unwrap();
        let b = t.bits(&p).unwrap();
        assert_eq!(t.condition(b), p);
        assert_eq!(t.ext(b).count(), 16);
        assert!(t.atoms_below(b).all(|a| a & b.mask == b.vals));
    }

    #[test]
    fn all_conditions_count() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        assert_eq!(t.all_conditions().len(), 81);
        assert!(TruncatedPoset::plain(7, 3).is_err());
    }

    #[test]
    fn atom_sets() {
        let mut a = AtomSet::empty(70);
        a.insert(3);
        a.insert(69);
        let c = a.complement();
        assert_eq!(c.count(), 68);
        assert!(!a.intersects(&c));
        assert!(a.is_subset(&AtomSet::full(70)));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3, 69]);
    }

    #[test]
    fn bit_order() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        let p = CondBits::TOP.with(0, true);
        let q = p.with(3, false);
        assert!(q.extends(p) && !p.extends(q));
        assert!(!p.compatible(CondBits::TOP.with(0, false)));
        assert!(t.sample(1).meets(&t.condition(p)));
    }
}
