//! Finite prefixes standing in for ω-sequences on the rows of the second
//! model, the interleaving bijection and the `A_S` codes built from it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::forcing::{Engine, GenericSample, TruncatedPoset};
use crate::hf::HfSet;
use crate::name::Name;

/// A prefix of a sequence of naturals, tagged with the row it lives on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeqCode {
    pub tag: u64,
    pub prefix: Vec<u64>,
}

impl SeqCode {
    pub fn new(tag: u64, prefix: Vec<u64>) -> Self {
        SeqCode { tag, prefix }
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.iter().all(|v| *v == 0)
    }
}

/// `h(2n) = f(n)`, `h(2n+1) = g(n)`.
pub fn interleave(f: &SeqCode, g: &SeqCode) -> Result<SeqCode> {
    if f.prefix.len() != g.prefix.len() {
        return Err(Error::LengthMismatch(f.prefix.len(), g.prefix.len()));
    }
    if f.tag != g.tag {
        return Err(Error::TagMismatch(f.tag, g.tag));
    }
    let prefix = f
        .prefix
        .iter()
        .zip(&g.prefix)
        .flat_map(|(a, b)| [*a, *b])
        .collect();
    Ok(SeqCode::new(f.tag, prefix))
}

pub fn deinterleave(h: &SeqCode) -> Result<(SeqCode, SeqCode)> {
    if h.prefix.len() % 2 == 1 {
        return Err(Error::OddLength(h.prefix.len()));
    }
    let even = h.prefix.iter().step_by(2).copied().collect();
    let odd = h.prefix.iter().skip(1).step_by(2).copied().collect();
    Ok((SeqCode::new(h.tag, even), SeqCode::new(h.tag, odd)))
}

/// A point of `A_S`: one sequence per row of `S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ASCode {
    components: BTreeMap<u64, SeqCode>,
}

impl ASCode {
    pub fn new<I: IntoIterator<Item = (u64, Vec<u64>)>>(rows: I) -> Self {
        ASCode {
            components: rows
                .into_iter()
                .map(|(n, p)| (n, SeqCode::new(n, p)))
                .collect(),
        }
    }

    /// The zero code, the only member of `A_∅`.
    pub fn zero() -> Self {
        ASCode {
            components: BTreeMap::new(),
        }
    }

    pub fn rows(&self) -> BTreeSet<u64> {
        self.components.keys().copied().collect()
    }

    pub fn component(&self, n: u64) -> Option<&SeqCode> {
        self.components.get(&n)
    }

    pub fn components(&self) -> impl Iterator<Item = &SeqCode> {
        self.components.values()
    }

    /// Rows carrying a nonzero sequence. Zero components are identified
    /// with absent ones, which is what makes `A_∅ = {0}`.
    pub fn support(&self) -> BTreeSet<u64> {
        self.components
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, _)| *n)
            .collect()
    }

    /// Membership in `A_S`.
    pub fn lies_in(&self, s: &BTreeSet<u64>) -> bool {
        self.support().is_subset(s)
    }
}

/// The code on `S ∪ T` whose shared rows interleave the two inputs.
pub fn product_code(a: &ASCode, b: &ASCode) -> Result<ASCode> {
    let mut components = BTreeMap::new();
    for (n, c) in &a.components {
        let joined = match b.components.get(n) {
            Some(d) => interleave(c, d)?,
            None => c.clone(),
        };
        components.insert(*n, joined);
    }
    for (n, d) in &b.components {
        components.entry(*n).or_insert_with(|| d.clone());
    }
    Ok(ASCode { components })
}

/// Inverse of [`product_code`] given the two row sets.
pub fn unproduct_code(
    c: &ASCode,
    s: &BTreeSet<u64>,
    t: &BTreeSet<u64>,
) -> Result<(ASCode, ASCode)> {
    let expected: BTreeSet<u64> = s.union(t).copied().collect();
    if c.rows() != expected {
        return Err(Error::LengthMismatch(c.components.len(), expected.len()));
    }
    let (mut a, mut b) = (BTreeMap::new(), BTreeMap::new());
    for (n, code) in &c.components {
        match (s.contains(n), t.contains(n)) {
            (true, true) => {
                let (f, g) = deinterleave(code)?;
                a.insert(*n, f);
                b.insert(*n, g);
            }
            (true, false) => {
                a.insert(*n, code.clone());
            }
            _ => {
                b.insert(*n, code.clone());
            }
        }
    }
    Ok((ASCode { components: a }, ASCode { components: b }))
}

/// Every code on rows below `rows` whose components have length `len` and
/// entries below `values`, including explicit zero rows.
pub fn code_grid(rows: u64, len: usize, values: u64) -> Vec<ASCode> {
    let mut seqs: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..len {
        seqs = seqs
            .into_iter()
            .flat_map(|s| (0..values).map(move |v| [s.clone(), vec![v]].concat()))
            .collect();
    }
    let mut out = vec![ASCode::zero()];
    for n in 0..rows {
        let mut next = Vec::with_capacity(out.len() * (seqs.len() + 1));
        for c in &out {
            next.push(c.clone());
            for s in &seqs {
                let mut d = c.clone();
                d.components.insert(n, SeqCode::new(n, s.clone()));
                next.push(d);
            }
        }
        out = next;
    }
    out
}

/// `A_S ∩ A_T = A_{S∩T}` on the given codes: a code lies in both
/// families iff it lies in the family of the intersection.
pub fn intersect_code_law(s: &BTreeSet<u64>, t: &BTreeSet<u64>, grid: &[ASCode]) -> bool {
    let meet: BTreeSet<u64> = s.intersection(t).copied().collect();
    grid.iter()
        .all(|c| (c.lies_in(s) && c.lies_in(t)) == c.lies_in(&meet))
}

/// Reads the poset's keys, in order, off the entries of `code`: a key is
/// set when its entry is odd, and keys past the prefix are unset.
pub fn generic_from_code(code: &SeqCode, t: &TruncatedPoset) -> GenericSample {
    t.sample(code_atom(code, t))
}

fn code_atom(code: &SeqCode, t: &TruncatedPoset) -> u32 {
    (0..t.key_count())
        .filter(|k| code.prefix.get(*k).is_some_and(|v| v % 2 == 1))
        .fold(0, |a, k| a | 1 << k)
}

/// The value of `name` in the truncated extension coded by `code`.
pub fn interpret_code(name: &Name, code: &SeqCode, t: &TruncatedPoset) -> Result<HfSet> {
    let mut engine = Engine::new(t);
    let id = engine.compile(name)?;
    Ok(engine.val(id, code_atom(code, t)))
}

impl fmt::Display for SeqCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(seq (tag {})", self.tag)?;
        for v in &self.prefix {
            write!(f, " {v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for ASCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ascode (s")?;
        for n in self.components.keys() {
            write!(f, " {n}")?;
        }
        write!(f, ")")?;
        for (n, c) in &self.components {
            write!(f, " (row {n} (")?;
            for (i, v) in c.prefix.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "))")?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for ASCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for SeqCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn interleave_examples() {
        let h = interleave(
            &SeqCode::new(0, vec![1, 3, 5]),
            &SeqCode::new(0, vec![2, 4, 6]),
        )
        .unwrap();
        assert_eq!(h.prefix, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(
            interleave(&SeqCode::new(0, vec![]), &SeqCode::new(0, vec![]))
                .unwrap()
                .prefix,
            Vec::<u64>::new()
        );
        assert!(matches!(
            interleave(&SeqCode::new(0, vec![1]), &SeqCode::new(0, vec![])),
            Err(Error::LengthMismatch(1, 0))
        ));
        assert!(matches!(
            deinterleave(&SeqCode::new(0, vec![1, 2, 3])),
            Err(Error::OddLength(3))
        ));
    }

    #[test]
    fn product_examples() {
        let a = ASCode::new([(0, vec![1, 1]), (1, vec![2, 2])]);
        let b = ASCode::new([(1, vec![3, 4]), (2, vec![5])]);
        let c = product_code(&a, &b).unwrap();
        assert_eq!(
            c.to_string(),
            "(ascode (s 0 1 2) (row 0 (1 1)) (row 1 (2 3 2 4)) (row 2 (5)))"
        );
        assert_eq!(
            unproduct_code(&c, &set(&[0, 1]), &set(&[1, 2])).unwrap(),
            (a.clone(), b.clone())
        );
        let disjoint = ASCode::new([(5, vec![7])]);
        let d = product_code(&a, &disjoint).unwrap();
        assert_eq!(d.rows(), set(&[0, 1, 5]));
        assert!(matches!(
            product_code(&a, &ASCode::new([(0, vec![1])])),
            Err(Error::LengthMismatch(2, 1))
        ));
    }

    #[test]
    fn intersection_law() {
        let grid = code_grid(3, 1, 2);
        assert_eq!(grid.len(), 27);
        assert!(intersect_code_law(&set(&[0, 1]), &set(&[1, 2]), &grid));
        let both: Vec<_> = grid
            .iter()
            .filter(|c| c.lies_in(&set(&[0, 1])) && c.lies_in(&set(&[1, 2])))
            .collect();
        assert!(both.iter().all(|c| c.support().is_subset(&set(&[1]))));
        assert!(both.iter().any(|c| c.support() == set(&[1])));
        let empty: Vec<_> = grid
            .iter()
            .filter(|c| c.lies_in(&BTreeSet::new()))
            .collect();
        assert!(empty.iter().all(|c| c.support().is_empty()));
    }

    #[test]
    fn coded_generic() {
        let t = TruncatedPoset::plain(2, 1).unwrap();
        let code = SeqCode::new(0, vec![0, 3]);
        let g = generic_from_code(&code, &t);
        assert_eq!(g.bit(&crate::order::OrderPoint::Nat(1), 0), Some(true));
        let v = interpret_code(&Name::gen(crate::order::OrderPoint::Nat(1)), &code, &t).unwrap();
        assert_eq!(v, HfSet::singleton(HfSet::nat(0)));
    }

    proptest! {
        #[test]
        fn interleave_round_trip(pairs in proptest::collection::vec((0u64..100, 0u64..100), 0..32), tag in 0u64..8) {
            let f = SeqCode::new(tag, pairs.iter().map(|p| p.0).collect());
            let g = SeqCode::new(tag, pairs.iter().map(|p| p.1).collect());
            let h = interleave(&f, &g).unwrap();
            prop_assert_eq!(deinterleave(&h).unwrap(), (f, g));
        }
    }
}
