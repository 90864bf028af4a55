//! Stabilizers, hereditary symmetry, the measurability battery and the
//! choice-name construction over finite symmetric systems.

mod choice;
mod measure;

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::Serialize;

use crate::action::{
    Automorphism, FilterDesc, FiniteGroup, GroupDesc, SupportIdeal, DEFAULT_GROUP_CAP,
};
use crate::error::{Error, Result};
use crate::forcing::TruncatedPoset;
use crate::name::Name;
use crate::order::Cut;

pub use choice::{
    build_choice_name, build_semicanonical, check_mixable, complete_by_mixing, member_of_value,
    verify_choice, verify_semicanonical, ChoiceCheck, ChoiceName, MixCertificate,
};
pub use measure::{
    absolute_representative_in, has_absolute_representative, is_densely_measurable,
    is_injective_name, measures,
};

/// A poset together with a group acting on its coordinates and a normal
/// filter over that group.
#[derive(Debug, Clone)]
pub struct SymmetricSystem {
    pub poset: TruncatedPoset,
    pub group: GroupDesc,
    pub filter: FilterDesc,
    /// Cap on every enumeration the analyses perform.
    pub cap: usize,
    elements: OnceLock<std::result::Result<FiniteGroup, Error>>,
}

impl SymmetricSystem {
    pub fn new(poset: TruncatedPoset, group: GroupDesc, ideal: SupportIdeal) -> Self {
        let filter = FilterDesc::new(group.clone(), ideal);
        SymmetricSystem {
            poset,
            group,
            filter,
            cap: DEFAULT_GROUP_CAP,
            elements: OnceLock::new(),
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self.elements = OnceLock::new();
        self
    }

    /// The group induced on the poset's coordinates.
    pub fn elements(&self) -> Result<&FiniteGroup> {
        self.elements
            .get_or_init(|| self.group.enumerate(self.poset.domain(), self.cap))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn enumerate(&self, h: &GroupDesc) -> Result<FiniteGroup> {
        Ok(h.enumerate(self.poset.domain(), self.cap)?
            .intersection(self.elements()?))
    }

    /// `sym(ṅ)` inside the system group.
    pub fn sym(&self, n: &Name) -> Result<FiniteGroup> {
        self.elements()?.filter(|pi| is_in_sym(pi, n))
    }

    pub fn fix(&self, e: &Cut) -> Result<FiniteGroup> {
        self.elements()?.fix_subgroup(e)
    }

    /// Ideal members whose points lie in the domain, smallest first, each of
    /// size at most `max_size`.
    pub fn ideal_members(&self, max_size: usize) -> Result<Vec<Cut>> {
        let domain = self.poset.domain();
        let mut out = match &self.filter.ideal {
            SupportIdeal::FiniteSets => {
                let d = domain.len();
                let needed = 1u64.checked_shl(d as u32).unwrap_or(u64::MAX);
                if needed > self.cap as u64 {
                    return Err(Error::EnumerationBudgetExceeded {
                        needed,
                        budget: self.cap as u64,
                    });
                }
                (0..1u64 << d)
                    .filter(|m| m.count_ones() as usize <= max_size)
                    .map(|m| {
                        Cut::finite(
                            (0..d)
                                .filter(|i| m >> i & 1 == 1)
                                .map(|i| domain[i].clone()),
                        )
                    })
                    .collect()
            }
            SupportIdeal::Listed(family) => family
                .iter()
                .filter(|m| m.len() <= max_size)
                .map(|m| Cut::FiniteSet(m.clone()))
                .collect::<Vec<_>>(),
            SupportIdeal::BoundedCuts => {
                let mut v = vec![Cut::empty()];
                v.extend(domain.iter().map(|x| Cut::upto(x.clone())));
                v
            }
        };
        out.sort_by_key(cut_size);
        Ok(out)
    }
}

fn cut_size(c: &Cut) -> usize {
    c.as_finite().map_or(usize::MAX, BTreeSet::len)
}

/// A family `{ẋ_i : i ∈ I}•` with distinct indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyName {
    elems: Vec<(u64, Name)>,
}

impl FamilyName {
    pub fn new<I: IntoIterator<Item = (u64, Name)>>(elems: I) -> Result<Self> {
        let mut elems: Vec<(u64, Name)> = elems.into_iter().collect();
        elems.sort_by_key(|(i, _)| *i);
        for w in elems.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateIndex(w[0].0));
            }
        }
        Ok(FamilyName { elems })
    }

    pub fn elems(&self) -> &[(u64, Name)] {
        &self.elems
    }

    pub fn get(&self, i: u64) -> Option<&Name> {
        self.elems.iter().find(|(j, _)| *j == i).map(|(_, n)| n)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.elems.iter().map(|(_, n)| n)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn as_name(&self) -> Name {
        Name::bullet(self.names().cloned())
    }
}

pub fn is_in_sym(pi: &Automorphism, n: &Name) -> Result<bool> {
    Ok(n.apply(pi)? == *n)
}

/// A support for every subname position, mirroring the name's tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HsWitness {
    pub name: Name,
    pub support: Cut,
    pub children: Vec<HsWitness>,
}

/// The first subname, in depth-first order, with no support in the ideal.
/// `path` lists child positions from the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HsFailure {
    pub path: Vec<usize>,
    pub name: Name,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HsOutcome {
    Certified(HsWitness),
    Failed(HsFailure),
}

impl HsOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, HsOutcome::Certified(_))
    }

    pub fn witness(&self) -> Option<&HsWitness> {
        match self {
            HsOutcome::Certified(w) => Some(w),
            HsOutcome::Failed(_) => None,
        }
    }
}

/// Certifies `ṅ ∈ HS`. When the system group is enumerable each node gets
/// the smallest ideal member `E` with `fix(E) ⊆ sym(node)`; otherwise the
/// structural support (the least member covering the coordinates).
pub fn is_hereditarily_symmetric(n: &Name, s: &SymmetricSystem) -> Result<HsOutcome> {
    let mut memo = HashMap::new();
    let mut path = Vec::new();
    Ok(match certify(n, s, &mut memo, &mut path)? {
        Ok(w) => HsOutcome::Certified(w),
        Err(f) => HsOutcome::Failed(f),
    })
}

type Certified = std::result::Result<HsWitness, HsFailure>;

fn certify(
    n: &Name,
    s: &SymmetricSystem,
    memo: &mut HashMap<Name, Option<Cut>>,
    path: &mut Vec<usize>,
) -> Result<Certified> {
    let Some(support) = node_support(n, s, memo)? else {
        return Ok(Err(HsFailure {
            path: path.clone(),
            name: n.clone(),
        }));
    };
    let mut children = Vec::new();
    for (i, c) in n.children().into_iter().enumerate() {
        path.push(i);
        let r = certify(c, s, memo, path)?;
        path.pop();
        match r {
            Ok(w) => children.push(w),
            Err(f) => return Ok(Err(f)),
        }
    }
    Ok(Ok(HsWitness {
        name: n.clone(),
        support,
        children,
    }))
}

fn node_support(
    n: &Name,
    s: &SymmetricSystem,
    memo: &mut HashMap<Name, Option<Cut>>,
) -> Result<Option<Cut>> {
    if let Some(c) = memo.get(n) {
        return Ok(c.clone());
    }
    let structural = s.filter.ideal.cover(&n.coordinates());
    let found = match s.elements() {
        Ok(g) => {
            let sym = g.filter(|pi| is_in_sym(pi, n))?;
            let bound = structural.as_ref().map_or(s.poset.domain().len(), cut_size);
            let mut hit = None;
            for e in s.ideal_members(bound)? {
                if g.fix_subgroup(&e)?.is_subgroup_of(&sym) {
                    hit = Some(e);
                    break;
                }
            }
            hit
        }
        Err(Error::UnsupportedGroupShape(_)) => structural,
        Err(e) => return Err(e),
    };
    memo.insert(n.clone(), found.clone());
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{IndexDomain, OrderPoint};

    fn nat(n: u64) -> OrderPoint {
        OrderPoint::Nat(n)
    }

    fn full(n: u64, ideal: SupportIdeal) -> SymmetricSystem {
        SymmetricSystem::new(
            TruncatedPoset::plain(n, 1).unwrap(),
            GroupDesc::FullGroup(IndexDomain::Plain(None)),
            ideal,
        )
    }

    #[test]
    fn sym_examples() {
        let swap = Automorphism::swap(0, 1);
        assert!(!is_in_sym(&swap, &Name::gen(nat(0))).unwrap());
        assert!(is_in_sym(&swap, &Name::bullet([Name::gen(nat(0)), Name::gen(nat(1))])).unwrap());
        assert!(is_in_sym(&Automorphism::identity(), &Name::prec(IndexDomain::Dlo)).unwrap());
        assert!(is_in_sym(&swap, &Name::prec(IndexDomain::Dlo)).is_err());
    }

    #[test]
    fn hs_examples() {
        let s = full(4, SupportIdeal::FiniteSets);
        let w = is_hereditarily_symmetric(&Name::gen(nat(0)), &s).unwrap();
        assert_eq!(w.witness().unwrap().support, Cut::finite([nat(0)]));

        let fam = Name::bullet((0..4).map(|i| Name::gen(nat(i))));
        let w = is_hereditarily_symmetric(&fam, &s).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.support, Cut::empty());
        for (i, c) in w.children.iter().enumerate() {
            assert_eq!(c.support, Cut::finite([nat(i as u64)]));
        }

        let evens = SupportIdeal::Listed(vec![
            [nat(0)].into(),
            [nat(2)].into(),
            [nat(0), nat(2)].into(),
        ]);
        let s = full(4, evens);
        match is_hereditarily_symmetric(&Name::gen(nat(1)), &s).unwrap() {
            HsOutcome::Failed(f) => assert!(f.path.is_empty()),
            other => panic!("{other:?}"),
        }
        let nested = Name::bullet([Name::gen(nat(1)), Name::gen(nat(3))]);
        match is_hereditarily_symmetric(&nested, &s).unwrap() {
            HsOutcome::Failed(f) => {
                assert_eq!(f.path, vec![0]);
                assert_eq!(f.name, Name::gen(nat(1)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hs_is_closed_under_the_action() {
        let s = full(3, SupportIdeal::FiniteSets);
        let n = Name::bullet([
            Name::opair(Name::gen(nat(0)), Name::check_nat(1)),
            Name::gen(nat(2)),
        ]);
        assert!(is_hereditarily_symmetric(&n, &s).unwrap().is_certified());
        for pi in s.elements().unwrap().iter() {
            assert!(is_hereditarily_symmetric(&n.apply(pi).unwrap(), &s)
                .unwrap()
                .is_certified());
        }
    }

    #[test]
    fn family_indices_are_distinct() {
        assert!(matches!(
            FamilyName::new([(0, Name::check_nat(0)), (0, Name::check_nat(1))]),
            Err(Error::DuplicateIndex(0))
        ));
        let f = FamilyName::new([(1, Name::check_nat(1)), (0, Name::check_nat(0))]).unwrap();
        assert_eq!(f.elems()[0].0, 0);
        assert_eq!(f.len(), 2);
    }
}
