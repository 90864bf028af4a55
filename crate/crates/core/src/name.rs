//! Symbolic P-names and the automorphism action on them.
//!
//! Every name is kept in canonical form by the smart constructors: bullet
//! members and raw entries are sorted and deduplicated, so structural
//! equality is insensitive to listing order.

use std::collections::BTreeSet;
use std::fmt;

use crate::action::{Automorphism, Condition, SupportIdeal};
use crate::error::{mismatch, Error, Result};
use crate::hf::HfSet;
use crate::models::based::BasedFn;
use crate::order::{Cut, IndexDomain, OrderPoint};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Name {
    Check(HfSet),
    Gen(OrderPoint),
    Bullet(Vec<Name>),
    OPair(Box<Name>, Box<Name>),
    Raw(Vec<(Condition, Name)>),
    Restrict(Box<Name>, Condition),
    Mix(Vec<(Condition, Name)>),
    Based(BasedFn),
    Prec(IndexDomain),
}

impl Name {
    pub fn check(x: HfSet) -> Name {
        Name::Check(x)
    }

    pub fn check_nat(n: u64) -> Name {
        Name::Check(HfSet::nat(n))
    }

    pub fn gen(i: OrderPoint) -> Name {
        Name::Gen(i)
    }

    pub fn bullet<I: IntoIterator<Item = Name>>(elems: I) -> Name {
        let set: BTreeSet<Name> = elems.into_iter().collect();
        Name::Bullet(set.into_iter().collect())
    }

    pub fn opair(a: Name, b: Name) -> Name {
        Name::OPair(Box::new(a), Box::new(b))
    }

    pub fn raw<I: IntoIterator<Item = (Condition, Name)>>(entries: I) -> Name {
        let set: BTreeSet<(Condition, Name)> = entries.into_iter().collect();
        Name::Raw(set.into_iter().collect())
    }

    pub fn restrict(inner: Name, p: Condition) -> Name {
        Name::Restrict(Box::new(inner), p)
    }

    /// Fails with `NotAnAntichain` when two branch conditions are compatible.
    pub fn mix<I: IntoIterator<Item = (Condition, Name)>>(branches: I) -> Result<Name> {
        let set: BTreeSet<(Condition, Name)> = branches.into_iter().collect();
        let branches: Vec<(Condition, Name)> = set.into_iter().collect();
        for (i, (p, _)) in branches.iter().enumerate() {
            for (q, _) in &branches[i + 1..] {
                if p.compatible(q) {
                    return Err(Error::NotAnAntichain(p.to_string(), q.to_string()));
                }
            }
        }
        Ok(Name::Mix(branches))
    }

    pub fn based(f: BasedFn) -> Name {
        Name::Based(f)
    }

    pub fn prec(domain: IndexDomain) -> Name {
        Name::Prec(domain)
    }

    /// `π · ṅ`.
    pub fn apply(&self, pi: &Automorphism) -> Result<Name> {
        if pi.is_identity() {
            return Ok(self.clone());
        }
        Ok(match self {
            Name::Check(_) => self.clone(),
            Name::Gen(i) => Name::Gen(pi.apply_point(i)?),
            Name::Bullet(elems) => Name::bullet(
                elems
                    .iter()
                    .map(|n| n.apply(pi))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Name::OPair(a, b) => Name::opair(a.apply(pi)?, b.apply(pi)?),
            Name::Raw(entries) => Name::raw(apply_entries(entries, pi)?),
            Name::Restrict(inner, p) => Name::restrict(inner.apply(pi)?, p.apply(pi)?),
            Name::Mix(branches) => {
                let set: BTreeSet<(Condition, Name)> =
                    apply_entries(branches, pi)?.into_iter().collect();
                Name::Mix(set.into_iter().collect())
            }
            Name::Based(f) => Name::Based(f.act(pi)?),
            Name::Prec(_) => {
                if !pi.is_order_preserving() {
                    return Err(mismatch(pi, self));
                }
                self.clone()
            }
        })
    }

    /// Coordinates mentioned anywhere in the name.
    pub fn coordinates(&self) -> BTreeSet<OrderPoint> {
        let mut out = BTreeSet::new();
        self.collect_coordinates(&mut out);
        out
    }

    fn collect_coordinates(&self, out: &mut BTreeSet<OrderPoint>) {
        match self {
            Name::Check(_) | Name::Prec(_) => {}
            Name::Gen(i) => {
                out.insert(i.clone());
            }
            Name::Bullet(elems) => elems.iter().for_each(|n| n.collect_coordinates(out)),
            Name::OPair(a, b) => {
                a.collect_coordinates(out);
                b.collect_coordinates(out);
            }
            Name::Raw(entries) | Name::Mix(entries) => {
                for (p, n) in entries {
                    out.extend(p.supp());
                    n.collect_coordinates(out);
                }
            }
            Name::Restrict(inner, p) => {
                out.extend(p.supp());
                inner.collect_coordinates(out);
            }
            Name::Based(f) => out.extend(f.base_points().cloned()),
        }
    }

    /// Immediate subnames, in listing order.
    pub fn children(&self) -> Vec<&Name> {
        match self {
            Name::Bullet(elems) => elems.iter().collect(),
            Name::OPair(a, b) => vec![a, b],
            Name::Raw(entries) | Name::Mix(entries) => entries.iter().map(|(_, n)| n).collect(),
            Name::Restrict(inner, _) => vec![inner],
            _ => Vec::new(),
        }
    }

    /// Nesting depth of the symbolic term.
    pub fn depth(&self) -> usize {
        self.children()
            .iter()
            .map(|c| c.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Constructor keyword used in the textual syntax.
    pub fn head(&self) -> &'static str {
        match self {
            Name::Check(_) => "check",
            Name::Gen(_) => "gen",
            Name::Bullet(_) => "bullet",
            Name::OPair(..) => "opair",
            Name::Raw(_) => "raw",
            Name::Restrict(..) => "restrict",
            Name::Mix(_) => "mix",
            Name::Based(_) => "based",
            Name::Prec(_) => "prec",
        }
    }
}

fn apply_entries(
    entries: &[(Condition, Name)],
    pi: &Automorphism,
) -> Result<Vec<(Condition, Name)>> {
    entries
        .iter()
        .map(|(p, n)| Ok((p.apply(pi)?, n.apply(pi)?)))
        .collect()
}

pub fn apply_name(pi: &Automorphism, n: &Name) -> Result<Name> {
    n.apply(pi)
}

pub fn restrict(n: &Name, p: &Condition) -> Name {
    Name::restrict(n.clone(), p.clone())
}

pub fn mix(branches: Vec<(Condition, Name)>) -> Result<Name> {
    Name::mix(branches)
}

/// The least ideal member containing every coordinate of the name.
pub fn support(n: &Name, ideal: &SupportIdeal) -> Result<Cut> {
    let coords = n.coordinates();
    ideal
        .cover(&coords)
        .ok_or_else(|| Error::NotInIdeal(Cut::FiniteSet(coords).to_string()))
}

pub fn names_equal_structural(a: &Name, b: &Name) -> bool {
    a == b
}

fn write_entries(f: &mut fmt::Formatter<'_>, entries: &[(Condition, Name)]) -> fmt::Result {
    for (p, n) in entries {
        write!(f, " ({p} {n})")?;
    }
    Ok(())
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::Check(x) => write!(f, "(check {x})"),
            Name::Gen(i) => write!(f, "(gen {i})"),
            Name::Bullet(elems) => {
                write!(f, "(bullet")?;
                for n in elems {
                    write!(f, " {n}")?;
                }
                write!(f, ")")
            }
            Name::OPair(a, b) => write!(f, "(opair {a} {b})"),
            Name::Raw(entries) => {
                write!(f, "(raw")?;
                write_entries(f, entries)?;
                write!(f, ")")
            }
            Name::Restrict(inner, p) => write!(f, "(restrict {inner} {p})"),
            Name::Mix(branches) => {
                write!(f, "(mix")?;
                write_entries(f, branches)?;
                write!(f, ")")
            }
            Name::Based(b) => write!(f, "{b}"),
            Name::Prec(d) => write!(f, "(prec {d})"),
        }
    }
}

impl serde::Serialize for Name {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::PlainPerm;
    use crate::order::int;
    use proptest::prelude::*;

    fn nat(n: u64) -> OrderPoint {
        OrderPoint::Nat(n)
    }

    fn gen(n: u64) -> Name {
        Name::gen(nat(n))
    }

    #[test]
    fn action_examples() {
        let swap = Automorphism::swap(0, 1);
        assert_eq!(gen(0).apply(&Automorphism::identity()).unwrap(), gen(0));
        assert_eq!(gen(0).apply(&swap).unwrap(), gen(1));
        let raw = Name::raw([(Condition::singleton(nat(0), 0, true), Name::check_nat(0))]);
        let moved = Name::raw([(Condition::singleton(nat(1), 0, true), Name::check_nat(0))]);
        assert_eq!(raw.apply(&swap).unwrap(), moved);
        assert_eq!(
            Name::bullet([gen(0), gen(1)]).apply(&swap).unwrap(),
            Name::bullet([gen(1), gen(0)])
        );
    }

    #[test]
    fn supports() {
        assert_eq!(
            support(&gen(3), &SupportIdeal::FiniteSets).unwrap(),
            Cut::finite([nat(3)])
        );
        assert_eq!(
            support(&Name::bullet([gen(0), gen(1)]), &SupportIdeal::FiniteSets).unwrap(),
            Cut::finite([nat(0), nat(1)])
        );
        let f = BasedFn::new(
            3,
            2,
            vec![(OrderPoint::rat(0, 1), 1), (OrderPoint::rat(5, 1), 0)],
        );
        assert_eq!(
            support(&Name::based(f), &SupportIdeal::BoundedCuts).unwrap(),
            Cut::upto(OrderPoint::rat(5, 1))
        );
        let even = SupportIdeal::Listed(vec![BTreeSet::new(), [nat(0)].into(), [nat(2)].into()]);
        assert!(matches!(support(&gen(1), &even), Err(Error::NotInIdeal(_))));
        assert_eq!(
            support(&Name::check_nat(4), &SupportIdeal::FiniteSets).unwrap(),
            Cut::empty()
        );
    }

    #[test]
    fn structural_equality() {
        assert!(names_equal_structural(
            &Name::bullet([gen(0), gen(1)]),
            &Name::bullet([gen(1), gen(0)])
        ));
        assert!(!names_equal_structural(&gen(0), &gen(1)));
        assert!(!names_equal_structural(
            &Name::check_nat(2),
            &Name::bullet([Name::check_nat(0), Name::check_nat(1)])
        ));
    }

    #[test]
    fn mixing_requires_antichain() {
        let p0 = Condition::singleton(nat(0), 0, false);
        let p1 = Condition::singleton(nat(0), 0, true);
        assert!(Name::mix([(p0.clone(), Name::check_nat(1)), (p1, Name::check_nat(2))]).is_ok());
        let q = Condition::singleton(nat(1), 0, true);
        assert!(matches!(
            Name::mix([(p0, Name::check_nat(1)), (q, Name::check_nat(2))]),
            Err(Error::NotAnAntichain(..))
        ));
    }

    #[test]
    fn prec_is_order_invariant() {
        let pl =
            Automorphism::pl(vec![(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]).unwrap();
        let prec = Name::prec(IndexDomain::Dlo);
        assert_eq!(prec.apply(&pl).unwrap(), prec);
        assert!(prec.apply(&Automorphism::swap(0, 1)).is_err());
        assert_eq!(prec.to_string(), "(prec dlo)");
    }

    #[test]
    fn based_action_moves_base_points() {
        let pl =
            Automorphism::pl(vec![(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]).unwrap();
        let f = BasedFn::new(2, 1, vec![(OrderPoint::rat(1, 1), 0)]);
        let g = match Name::based(f.clone()).apply(&pl).unwrap() {
            Name::Based(g) => g,
            other => panic!("unexpected {other}"),
        };
        // (F ∘ π⁻¹)(π x) = F(x) at breakpoints and their images
        for x in [
            OrderPoint::rat(1, 1),
            OrderPoint::rat(2, 1),
            OrderPoint::rat(1, 2),
        ] {
            let px = pl.apply_point(&x).unwrap();
            assert_eq!(g.eval(&px).unwrap(), f.eval(&x).unwrap());
        }
    }

    fn arb_name() -> impl Strategy<Value = Name> {
        let leaf = prop_oneof![
            (0u64..3).prop_map(Name::check_nat),
            (0u64..4).prop_map(|i| Name::gen(OrderPoint::Nat(i))),
        ];
        leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..3).prop_map(Name::bullet),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Name::opair(a, b)),
                (inner.clone(), 0u64..4, any::<bool>()).prop_map(|(n, x, b)| Name::restrict(
                    n,
                    Condition::singleton(OrderPoint::Nat(x), 0, b)
                )),
                prop::collection::vec((0u64..4, any::<bool>(), inner), 0..3).prop_map(|es| {
                    Name::raw(
                        es.into_iter()
                            .map(|(x, b, n)| (Condition::singleton(OrderPoint::Nat(x), 1, b), n)),
                    )
                }),
            ]
        })
    }

    fn arb_perm() -> impl Strategy<Value = Automorphism> {
        Just((0u64..4).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Automorphism::Perm(PlainPerm::new((0..4).zip(v)).unwrap()).normalized())
    }

    proptest! {
        #[test]
        fn action_composes(n in arb_name(), a in arb_perm(), b in arb_perm()) {
            let ab = a.compose(&b).unwrap();
            prop_assert_eq!(n.apply(&ab).unwrap(), n.apply(&b).unwrap().apply(&a).unwrap());
        }

        #[test]
        fn support_is_equivariant(n in arb_name(), a in arb_perm()) {
            let s = support(&n, &SupportIdeal::FiniteSets).unwrap();
            let image = crate::action::conjugate_fix(&a, &s).unwrap();
            prop_assert_eq!(support(&n.apply(&a).unwrap(), &SupportIdeal::FiniteSets).unwrap(), image);
        }
    }
}
