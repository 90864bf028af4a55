use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::action::automorphism::{Automorphism, PlainPerm};
use crate::action::condition::Condition;
use crate::error::{mismatch, Error, Result};
use crate::order::{Cut, IndexDomain, OrderPoint};

/// Default cap on enumerated group elements and orbit sizes.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// A group of automorphisms, described finitely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDesc {
    FullGroup(IndexDomain),
    Fix(Cut),
    Generated(Vec<Automorphism>),
    FullOrderAut(IndexDomain),
    Intersection(Vec<GroupDesc>),
}

/// The family of admissible supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportIdeal {
    FiniteSets,
    BoundedCuts,
    Listed(Vec<BTreeSet<OrderPoint>>),
}

/// Normal filter generated by `{fix(E) : E in ideal}` over a base group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterDesc {
    pub base: GroupDesc,
    pub ideal: SupportIdeal,
}

impl SupportIdeal {
    /// The least member covering `points`: the set itself, the least
    /// inclusive cut through the maximum, or the smallest listed superset.
    pub fn cover(&self, points: &BTreeSet<OrderPoint>) -> Option<Cut> {
        match self {
            SupportIdeal::FiniteSets => Some(Cut::FiniteSet(points.clone())),
            SupportIdeal::BoundedCuts => {
                let mut it = points.iter();
                let Some(first) = it.next() else {
                    return Some(Cut::empty());
                };
                if !matches!(first, OrderPoint::Rat(_) | OrderPoint::Lex(..)) {
                    return None;
                }
                let mut max = first;
                for x in it {
                    if max.less_than(x).ok()? {
                        max = x;
                    }
                }
                Some(Cut::upto(max.clone()))
            }
            SupportIdeal::Listed(family) => family
                .iter()
                .filter(|m| points.is_subset(m))
                .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
                .map(|m| Cut::FiniteSet(m.clone())),
        }
    }

    /// Whether some member contains `cut`, so that its stabilizer lies in
    /// `fix(cut)`.
    pub fn admits(&self, cut: &Cut) -> bool {
        match (self, cut) {
            (_, Cut::FiniteSet(points)) => self.cover(points).is_some(),
            (SupportIdeal::BoundedCuts, Cut::InitialSegment { bound, .. }) => {
                matches!(bound, OrderPoint::Rat(_) | OrderPoint::Lex(..))
            }
            (_, Cut::InitialSegment { .. }) => false,
        }
    }
}

impl fmt::Display for SupportIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SupportIdeal::FiniteSets => write!(f, "finite-sets"),
            SupportIdeal::BoundedCuts => write!(f, "bounded-cuts"),
            SupportIdeal::Listed(family) => {
                write!(f, "listed[")?;
                for (i, m) in family.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", Cut::FiniteSet(m.clone()))?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for GroupDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDesc::FullGroup(d) => write!(f, "(full {d})"),
            GroupDesc::Fix(e) => write!(f, "(fix {e})"),
            GroupDesc::Generated(gens) => {
                write!(f, "(generated")?;
                for g in gens {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
            GroupDesc::FullOrderAut(d) => write!(f, "(orderaut {d})"),
            GroupDesc::Intersection(gs) => {
                write!(f, "(intersect")?;
                for g in gs {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `π[E]`, the cut whose stabilizer is `π fix(E) π⁻¹`.
pub fn conjugate_fix(pi: &Automorphism, cut: &Cut) -> Result<Cut> {
    if pi.is_identity() {
        return Ok(cut.clone());
    }
    match cut {
        Cut::FiniteSet(points) => {
            let image = points
                .iter()
                .map(|x| pi.apply_point(x))
                .collect::<Result<_>>()?;
            Ok(Cut::FiniteSet(image))
        }
        Cut::InitialSegment { bound, inclusive } => {
            if !pi.is_order_preserving() {
                return Err(mismatch(pi, cut));
            }
            Ok(Cut::InitialSegment {
                bound: pi.apply_point(bound)?,
                inclusive: *inclusive,
            })
        }
    }
}

impl FilterDesc {
    pub fn new(base: GroupDesc, ideal: SupportIdeal) -> Self {
        FilterDesc { base, ideal }
    }

    /// [`conjugate_fix`], rejecting images that leave the ideal.
    pub fn conjugate_fix(&self, pi: &Automorphism, cut: &Cut) -> Result<Cut> {
        let image = conjugate_fix(pi, cut)?;
        if !self.ideal.admits(&image) {
            return Err(Error::ImageNotInIdeal(image.to_string()));
        }
        Ok(image)
    }

    /// Decides `H ∈ F` for `H` an intersection of stabilizers: the union of
    /// the supports must be covered by one ideal member.
    pub fn contains(&self, h: &GroupDesc) -> Result<bool> {
        let mut cuts = Vec::new();
        collect_fix_cuts(h, &mut cuts)?;
        let mut finite = BTreeSet::new();
        let mut bounds = Vec::new();
        for cut in cuts {
            match cut {
                Cut::FiniteSet(points) => finite.extend(points),
                Cut::InitialSegment { bound, .. } => bounds.push(bound),
            }
        }
        if bounds.is_empty() {
            return Ok(self.ideal.admits(&Cut::FiniteSet(finite)));
        }
        if self.ideal != SupportIdeal::BoundedCuts {
            return Ok(false);
        }
        finite.extend(bounds);
        Ok(self.ideal.cover(&finite).is_some())
    }

    /// A support witnessing that `p` is fixed by a filter group.
    pub fn tenacity_witness(&self, p: &Condition) -> Result<Cut> {
        let supp = p.supp();
        self.ideal
            .cover(&supp)
            .ok_or_else(|| Error::NoWitness(Cut::FiniteSet(supp).to_string()))
    }
}

fn collect_fix_cuts(h: &GroupDesc, out: &mut Vec<Cut>) -> Result<()> {
    match h {
        GroupDesc::Fix(cut) => out.push(cut.clone()),
        GroupDesc::FullGroup(_) | GroupDesc::FullOrderAut(_) => {}
        GroupDesc::Intersection(gs) => {
            for g in gs {
                collect_fix_cuts(g, out)?;
            }
        }
        GroupDesc::Generated(_) => return Err(Error::UnsupportedGroupShape(h.to_string())),
    }
    Ok(())
}

pub fn filter_contains(filter: &FilterDesc, h: &GroupDesc) -> Result<bool> {
    filter.contains(h)
}

pub fn is_tenacious(p: &Condition, filter: &FilterDesc) -> Result<Cut> {
    filter.tenacity_witness(p)
}

impl GroupDesc {
    /// Membership decided from the element's datum. Generated groups are
    /// enumerated up to `DEFAULT_GROUP_CAP`.
    pub fn contains(&self, pi: &Automorphism) -> Result<bool> {
        if pi.is_identity() {
            return Ok(true);
        }
        match self {
            GroupDesc::FullGroup(d) => Ok(acts_on(pi, d)),
            GroupDesc::FullOrderAut(d) => Ok(pi.is_order_preserving() && acts_on(pi, d)),
            GroupDesc::Fix(cut) => pi.fixes_cut(cut),
            GroupDesc::Generated(gens) => {
                Ok(FiniteGroup::generated(gens, DEFAULT_GROUP_CAP)?.contains(pi))
            }
            GroupDesc::Intersection(gs) => {
                for g in gs {
                    if !g.contains(pi)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// The finite group this description induces on `universe`.
    ///
    /// Full groups become the symmetric group on the admitted points (row by
    /// row for product points); `Fix(E)` becomes the symmetric group on the
    /// points outside `E`.
    pub fn enumerate(&self, universe: &[OrderPoint], cap: usize) -> Result<FiniteGroup> {
        match self {
            GroupDesc::FullGroup(d) => {
                if d.is_ordered() {
                    return Err(Error::UnsupportedGroupShape(self.to_string()));
                }
                let pts: Vec<OrderPoint> =
                    universe.iter().filter(|x| d.admits(x)).cloned().collect();
                FiniteGroup::symmetric(&pts, cap)
            }
            GroupDesc::Fix(cut) => {
                let mut pts = Vec::new();
                for x in universe {
                    if !cut.contains(x)? {
                        pts.push(x.clone());
                    }
                }
                FiniteGroup::symmetric(&pts, cap)
            }
            GroupDesc::Generated(gens) => FiniteGroup::generated(gens, cap),
            GroupDesc::FullOrderAut(_) => Err(Error::UnsupportedGroupShape(self.to_string())),
            GroupDesc::Intersection(gs) => {
                let mut iter = gs.iter();
                let Some(first) = iter.next() else {
                    return FiniteGroup::symmetric(universe, cap);
                };
                let mut acc = first.enumerate(universe, cap)?;
                for g in iter {
                    acc = acc.intersection(&g.enumerate(universe, cap)?);
                }
                Ok(acc)
            }
        }
    }
}

fn acts_on(pi: &Automorphism, d: &IndexDomain) -> bool {
    match (pi, d) {
        (Automorphism::Perm(p), IndexDomain::Plain(size)) => {
            size.is_none_or(|s| p.support().iter().all(|x| *x < s))
        }
        (Automorphism::Pl(m), IndexDomain::Dlo) => m.block().is_none(),
        (Automorphism::Pl(m), IndexDomain::LexDlo(b)) => m.block().is_none_or(|x| x < *b),
        (Automorphism::Prod(rows), IndexDomain::ProdOmega(r)) => {
            r.is_none_or(|r| rows.keys().all(|x| *x < r))
        }
        _ => false,
    }
}

/// An explicitly enumerated finite group of automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    elems: BTreeSet<Automorphism>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup {
            elems: [Automorphism::identity()].into_iter().collect(),
        }
    }

    /// Closure of `gens` under composition; fails past `cap` elements.
    pub fn generated(gens: &[Automorphism], cap: usize) -> Result<Self> {
        let gens: Vec<&Automorphism> = gens.iter().filter(|g| !g.is_identity()).collect();
        let mut elems = BTreeSet::new();
        let mut queue = VecDeque::new();
        elems.insert(Automorphism::identity());
        queue.push_back(Automorphism::identity());
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let next = g.compose(&e)?;
                if elems.insert(next.clone()) {
                    if elems.len() > cap {
                        return Err(Error::NonTerminating(cap));
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(FiniteGroup { elems })
    }

    /// The symmetric group on finitely many natural points, or the product of
    /// the row-wise symmetric groups on product points.
    pub fn symmetric(points: &[OrderPoint], cap: usize) -> Result<Self> {
        let mut gens = Vec::new();
        let mut nats = BTreeSet::new();
        let mut rows: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        for x in points {
            match x {
                OrderPoint::Nat(n) => {
                    nats.insert(*n);
                }
                OrderPoint::Prod(r, c) => {
                    rows.entry(*r).or_default().insert(*c);
                }
                other => {
                    return Err(Error::UnsupportedGroupShape(format!(
                        "no finite symmetric group on {other}"
                    )))
                }
            }
        }
        let nats: Vec<u64> = nats.into_iter().collect();
        for w in nats.windows(2) {
            gens.push(Automorphism::swap(w[0], w[1]));
        }
        for (r, cols) in rows {
            let cols: Vec<u64> = cols.into_iter().collect();
            for w in cols.windows(2) {
                gens.push(Automorphism::prod([(r, PlainPerm::swap(w[0], w[1]))]));
            }
        }
        Self::generated(&gens, cap)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, pi: &Automorphism) -> bool {
        self.elems.contains(pi)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Automorphism> {
        self.elems.iter()
    }

    pub fn is_subgroup_of(&self, other: &FiniteGroup) -> bool {
        self.elems.is_subset(&other.elems)
    }

    pub fn intersection(&self, other: &FiniteGroup) -> FiniteGroup {
        FiniteGroup {
            elems: self.elems.intersection(&other.elems).cloned().collect(),
        }
    }

    /// Elements satisfying a predicate. The caller is responsible for the
    /// predicate defining a subgroup.
    pub fn filter<F: FnMut(&Automorphism) -> Result<bool>>(
        &self,
        mut keep: F,
    ) -> Result<FiniteGroup> {
        let mut elems = BTreeSet::new();
        for e in &self.elems {
            if keep(e)? {
                elems.insert(e.clone());
            }
        }
        Ok(FiniteGroup { elems })
    }

    pub fn fix_subgroup(&self, cut: &Cut) -> Result<FiniteGroup> {
        self.filter(|e| e.fixes_cut(cut))
    }

    /// `π G π⁻¹`.
    pub fn conjugate(&self, pi: &Automorphism) -> Result<FiniteGroup> {
        let elems = self
            .elems
            .iter()
            .map(|e| pi.conjugate(e))
            .collect::<Result<_>>()?;
        Ok(FiniteGroup { elems })
    }

    /// Subgroup generated by the union of two subgroups.
    pub fn join(&self, other: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        let gens: Vec<Automorphism> = self.elems.union(&other.elems).cloned().collect();
        FiniteGroup::generated(&gens, cap)
    }
}

/// One orbit with its least member as representative.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Orbit {
    pub members: Vec<OrderPoint>,
    pub representative: OrderPoint,
}

/// Partitions `points` into `H`-orbits.
pub fn orbits(h: &GroupDesc, points: &[OrderPoint], cap: usize) -> Result<Vec<Orbit>> {
    let mut classes: BTreeMap<OrbitKey, BTreeSet<OrderPoint>> = BTreeMap::new();
    match h {
        GroupDesc::Generated(gens) => return orbits_by_closure(gens, points, cap),
        GroupDesc::FullGroup(IndexDomain::Plain(Some(n))) => {
            let gens: Vec<Automorphism> = (1..*n).map(|i| Automorphism::swap(i - 1, i)).collect();
            return orbits_by_closure(&gens, points, cap);
        }
        GroupDesc::FullGroup(_) | GroupDesc::FullOrderAut(_) => {
            for x in points {
                classes.entry(coarse_key(x)).or_default().insert(x.clone());
            }
        }
        GroupDesc::Fix(cut) => {
            for x in points {
                classes
                    .entry(fix_key(cut, x)?)
                    .or_default()
                    .insert(x.clone());
            }
        }
        GroupDesc::Intersection(gs) => {
            let mut union = BTreeSet::new();
            for g in gs {
                match g {
                    GroupDesc::Fix(Cut::FiniteSet(e)) => union.extend(e.iter().cloned()),
                    GroupDesc::FullGroup(IndexDomain::Plain(None))
                    | GroupDesc::FullGroup(IndexDomain::ProdOmega(None))
                    | GroupDesc::FullGroup(IndexDomain::Dlo)
                    | GroupDesc::FullOrderAut(_) => {}
                    _ => return Err(Error::UnsupportedGroupShape(h.to_string())),
                }
            }
            return orbits(&GroupDesc::Fix(Cut::FiniteSet(union)), points, cap);
        }
    }
    Ok(classes.into_values().map(orbit_of).collect())
}

fn orbit_of(members: BTreeSet<OrderPoint>) -> Orbit {
    let representative = members.iter().next().expect("orbits are nonempty").clone();
    Orbit {
        members: members.into_iter().collect(),
        representative,
    }
}

fn orbits_by_closure(
    gens: &[Automorphism],
    points: &[OrderPoint],
    cap: usize,
) -> Result<Vec<Orbit>> {
    let wanted: BTreeSet<OrderPoint> = points.iter().cloned().collect();
    let mut seen: BTreeSet<OrderPoint> = BTreeSet::new();
    let mut out = Vec::new();
    for x in &wanted {
        if seen.contains(x) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut queue = VecDeque::new();
        orbit.insert(x.clone());
        queue.push_back(x.clone());
        while let Some(y) = queue.pop_front() {
            for g in gens {
                let z = g.apply_point(&y)?;
                if orbit.insert(z.clone()) {
                    if orbit.len() > cap {
                        return Err(Error::NonTerminating(cap));
                    }
                    queue.push_back(z);
                }
            }
        }
        seen.extend(orbit.iter().cloned());
        let members: BTreeSet<OrderPoint> = orbit.intersection(&wanted).cloned().collect();
        out.push(orbit_of(members));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum OrbitKey {
    Fixed(OrderPoint),
    Class(&'static str, u64, usize),
}

fn coarse_key(x: &OrderPoint) -> OrbitKey {
    match x {
        OrderPoint::Nat(_) | OrderPoint::Rat(_) => OrbitKey::Class(x.kind(), 0, 0),
        OrderPoint::Lex(b, _) | OrderPoint::Prod(b, _) => OrbitKey::Class(x.kind(), *b, 0),
    }
}

/// Orbit key under the stabilizer of `cut` inside the ambient full group:
/// points of the cut are fixed, and order automorphisms cannot move a point
/// past a fixed one.
fn fix_key(cut: &Cut, x: &OrderPoint) -> Result<OrbitKey> {
    if cut.contains(x)? {
        return Ok(OrbitKey::Fixed(x.clone()));
    }
    let OrbitKey::Class(kind, block, _) = coarse_key(x) else {
        unreachable!()
    };
    let gap = match (x, cut) {
        (OrderPoint::Rat(_) | OrderPoint::Lex(..), Cut::FiniteSet(points)) => {
            let mut below = 0;
            for p in points {
                if p.same_kind(x) && p.less_than(x)? {
                    below += 1;
                }
            }
            below
        }
        _ => 0,
    };
    Ok(OrbitKey::Class(kind, block, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::int;

    fn nat(n: u64) -> OrderPoint {
        OrderPoint::Nat(n)
    }

    fn set(xs: &[u64]) -> BTreeSet<OrderPoint> {
        xs.iter().map(|x| nat(*x)).collect()
    }

    #[test]
    fn conjugate_examples() {
        let e = Cut::FiniteSet(set(&[0, 2]));
        assert_eq!(conjugate_fix(&Automorphism::identity(), &e).unwrap(), e);
        assert_eq!(
            conjugate_fix(&Automorphism::swap(0, 1), &e).unwrap(),
            Cut::FiniteSet(set(&[1, 2]))
        );
        let pi =
            Automorphism::pl(vec![(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]).unwrap();
        let cut = Cut::upto(OrderPoint::rat(0, 1));
        assert_eq!(conjugate_fix(&pi, &cut).unwrap(), cut);
        let listed = FilterDesc::new(
            GroupDesc::FullGroup(IndexDomain::Plain(Some(3))),
            SupportIdeal::Listed(vec![set(&[]), set(&[0])]),
        );
        assert!(matches!(
            listed.conjugate_fix(&Automorphism::swap(0, 1), &Cut::FiniteSet(set(&[0]))),
            Err(Error::ImageNotInIdeal(_))
        ));
    }

    #[test]
    fn filter_membership() {
        let fin = FilterDesc::new(
            GroupDesc::FullGroup(IndexDomain::Plain(None)),
            SupportIdeal::FiniteSets,
        );
        assert!(fin
            .contains(&GroupDesc::Fix(Cut::FiniteSet(set(&[0, 1]))))
            .unwrap());
        let cuts = FilterDesc::new(
            GroupDesc::FullOrderAut(IndexDomain::Dlo),
            SupportIdeal::BoundedCuts,
        );
        assert!(cuts
            .contains(&GroupDesc::Fix(Cut::upto(OrderPoint::rat(5, 1))))
            .unwrap());
        let listed = FilterDesc::new(
            GroupDesc::FullGroup(IndexDomain::Plain(None)),
            SupportIdeal::Listed(vec![set(&[]), set(&[0])]),
        );
        assert!(!listed
            .contains(&GroupDesc::Fix(Cut::FiniteSet(set(&[1]))))
            .unwrap());
        assert!(listed
            .contains(&GroupDesc::Intersection(vec![
                GroupDesc::Fix(Cut::FiniteSet(set(&[0]))),
                GroupDesc::Fix(Cut::empty())
            ]))
            .unwrap());
        assert!(matches!(
            fin.contains(&GroupDesc::Generated(vec![Automorphism::swap(0, 1)])),
            Err(Error::UnsupportedGroupShape(_))
        ));
    }

    #[test]
    fn tenacity_examples() {
        let fin = FilterDesc::new(
            GroupDesc::FullGroup(IndexDomain::Plain(None)),
            SupportIdeal::FiniteSets,
        );
        let p = Condition::from_entries([((nat(0), 0), true), ((nat(2), 1), false)]).unwrap();
        assert_eq!(
            fin.tenacity_witness(&p).unwrap(),
            Cut::FiniteSet(set(&[0, 2]))
        );
        assert_eq!(
            fin.tenacity_witness(&Condition::new()).unwrap(),
            Cut::empty()
        );
        let listed = FilterDesc::new(
            GroupDesc::FullGroup(IndexDomain::Plain(None)),
            SupportIdeal::Listed(vec![set(&[]), set(&[0])]),
        );
        assert!(matches!(
            listed.tenacity_witness(&Condition::singleton(nat(5), 0, true)),
            Err(Error::NoWitness(_))
        ));
    }

    #[test]
    fn orbit_examples() {
        let pts: Vec<OrderPoint> = (0..3).map(nat).collect();
        let o = orbits(
            &GroupDesc::Generated(vec![Automorphism::swap(0, 1)]),
            &pts,
            100,
        )
        .unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(o[0].members, vec![nat(0), nat(1)]);
        assert_eq!(o[1].representative, nat(2));
        let triv = orbits(&GroupDesc::Generated(vec![]), &pts, 100).unwrap();
        assert_eq!(triv.len(), 3);
        let four: Vec<OrderPoint> = (0..4).map(nat).collect();
        let full = orbits(
            &GroupDesc::FullGroup(IndexDomain::Plain(Some(4))),
            &four,
            100,
        )
        .unwrap();
        assert_eq!(full.len(), 1);
        let fixed = orbits(&GroupDesc::Fix(Cut::FiniteSet(set(&[1]))), &four, 100).unwrap();
        assert_eq!(fixed.len(), 2);
        let rats = [
            OrderPoint::rat(-1, 1),
            OrderPoint::rat(1, 1),
            OrderPoint::rat(3, 1),
        ];
        let split = orbits(
            &GroupDesc::Fix(Cut::finite([OrderPoint::rat(0, 1)])),
            &rats,
            100,
        )
        .unwrap();
        assert_eq!(split.len(), 2);
    }

    #[test]
    fn pl_orbit_closure_is_guarded() {
        let pi =
            Automorphism::pl(vec![(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]).unwrap();
        let r = orbits(
            &GroupDesc::Generated(vec![pi]),
            &[OrderPoint::rat(1, 1)],
            50,
        );
        assert_eq!(r, Err(Error::NonTerminating(50)));
    }

    #[test]
    fn enumeration_sizes() {
        let pts: Vec<OrderPoint> = (0..4).map(nat).collect();
        let s4 = GroupDesc::FullGroup(IndexDomain::Plain(None))
            .enumerate(&pts, 1000)
            .unwrap();
        assert_eq!(s4.len(), 24);
        let fix0 = GroupDesc::Fix(Cut::FiniteSet(set(&[0])))
            .enumerate(&pts, 1000)
            .unwrap();
        assert_eq!(fix0.len(), 6);
        assert_eq!(s4.fix_subgroup(&Cut::FiniteSet(set(&[0]))).unwrap(), fix0);
        assert!(matches!(
            GroupDesc::FullGroup(IndexDomain::Plain(None)).enumerate(&pts, 10),
            Err(Error::NonTerminating(10))
        ));
        let prod: Vec<OrderPoint> = vec![
            OrderPoint::Prod(0, 0),
            OrderPoint::Prod(0, 1),
            OrderPoint::Prod(1, 0),
            OrderPoint::Prod(1, 1),
        ];
        let g = GroupDesc::FullGroup(IndexDomain::ProdOmega(None))
            .enumerate(&prod, 100)
            .unwrap();
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn normality_on_s3() {
        let pts: Vec<OrderPoint> = (0..3).map(nat).collect();
        let g = GroupDesc::FullGroup(IndexDomain::Plain(None))
            .enumerate(&pts, 100)
            .unwrap();
        let e = Cut::FiniteSet(set(&[0]));
        for pi in g.iter() {
            let image = conjugate_fix(pi, &e).unwrap();
            for sigma in g.iter() {
                let back = pi.inverse().compose(sigma).unwrap().compose(pi).unwrap();
                assert_eq!(
                    sigma.fixes_cut(&image).unwrap(),
                    back.fixes_cut(&e).unwrap()
                );
            }
        }
    }
}
