use crate::action::{Automorphism, FilterDesc, FiniteGroup, GroupDesc, SupportIdeal};
use crate::error::{Error, Result};
use crate::forcing::{Engine, Formula, TruncatedPoset};
use crate::order::{Cut, OrderPoint};

use super::{FamilyName, SymmetricSystem};

/// Whether `1 ⊩ ẋ_i ≠ ẋ_j` for every pair of distinct indices.
pub fn is_injective_name(x: &FamilyName, t: &TruncatedPoset) -> Result<bool> {
    let mut engine = Engine::new(t);
    let names: Vec<_> = x.names().collect();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            let distinct = Formula::not(Formula::eq((*a).clone(), (*b).clone()));
            if !engine.forces(&Default::default(), &distinct)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `H` measures `Ẋ`: every member's stabilizer contains `H` or generates
/// the whole group together with it.
pub fn measures(h: &GroupDesc, x: &FamilyName, s: &SymmetricSystem) -> Result<bool> {
    let h = s.enumerate(h)?;
    measures_finite(&h, x, s)
}

fn measures_finite(h: &FiniteGroup, x: &FamilyName, s: &SymmetricSystem) -> Result<bool> {
    let g = s.elements()?;
    for n in x.names() {
        let sym = s.sym(n)?;
        if h.is_subgroup_of(&sym) {
            continue;
        }
        if h.join(&sym, s.cap)?.len() != g.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every generator `fix(E)` of the filter, some `fix(E′)` with
/// `E ⊆ E′` in the ideal measures the family. Only stabilizer-shaped
/// subgroups are searched.
pub fn is_densely_measurable(x: &FamilyName, s: &SymmetricSystem) -> Result<bool> {
    let members = s.ideal_members(usize::MAX)?;
    let mut fixes = Vec::with_capacity(members.len());
    for e in &members {
        fixes.push(s.fix(e)?);
    }
    let mut measuring = vec![None; members.len()];
    for e in &members {
        let mut found = false;
        for (j, e2) in members.iter().enumerate() {
            if !contains_cut(e2, e) {
                continue;
            }
            let ok = match measuring[j] {
                Some(v) => v,
                None => {
                    let v = measures_finite(&fixes[j], x, s)?;
                    measuring[j] = Some(v);
                    v
                }
            };
            if ok {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

fn contains_cut(big: &Cut, small: &Cut) -> bool {
    match (big.as_finite(), small.as_finite()) {
        (Some(b), Some(s)) => s.is_subset(b),
        _ => big == small,
    }
}

/// Index of a member `H` of `family` such that every conjugate `H′` of `H`
/// satisfies: for all `H₀, H₁` in the family some `π ∈ H₀` has
/// `H′ ∩ H₀ ⊆ π H₁ π⁻¹`. Candidates are tried in the order given.
pub fn absolute_representative_in(
    family: &[FiniteGroup],
    g: &FiniteGroup,
) -> Result<Option<usize>> {
    let elements: Vec<&Automorphism> = g.iter().collect();
    // conj[k][j] = π_k H_j π_k⁻¹
    let mut conj: Vec<Vec<FiniteGroup>> = Vec::with_capacity(elements.len());
    for pi in &elements {
        conj.push(
            family
                .iter()
                .map(|h| h.conjugate(pi))
                .collect::<Result<_>>()?,
        );
    }
    let index_of = |pi: &Automorphism| elements.iter().position(|e| *e == pi);
    for (c, h) in family.iter().enumerate() {
        let mut conjugates: Vec<FiniteGroup> = Vec::new();
        for pi in &elements {
            let hc = h.conjugate(pi)?;
            if !conjugates.contains(&hc) {
                conjugates.push(hc);
            }
        }
        let good = conjugates.iter().all(|hc| {
            family.iter().all(|h0| {
                let meet = hc.intersection(h0);
                (0..family.len()).all(|j| {
                    h0.iter()
                        .any(|pi| index_of(pi).is_some_and(|k| meet.is_subgroup_of(&conj[k][j])))
                })
            })
        });
        if good {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Searches the stabilizers `fix(E)`, `E` in the filter's ideal over
/// `universe`, largest group first, for an absolute representative.
pub fn has_absolute_representative(
    filter: &FilterDesc,
    universe: &[OrderPoint],
    cap: usize,
) -> Result<Option<Cut>> {
    let g = filter.base.enumerate(universe, cap)?;
    let mut cuts: Vec<Cut> = match &filter.ideal {
        SupportIdeal::FiniteSets => {
            let d = universe.len();
            let needed = 1u64.checked_shl(d as u32).unwrap_or(u64::MAX);
            if needed > cap as u64 {
                return Err(Error::EnumerationBudgetExceeded {
                    needed,
                    budget: cap as u64,
                });
            }
            (0..1u64 << d)
                .map(|m| {
                    Cut::finite(
                        (0..d)
                            .filter(|i| m >> i & 1 == 1)
                            .map(|i| universe[i].clone()),
                    )
                })
                .collect()
        }
        SupportIdeal::Listed(family) => family.iter().map(|m| Cut::FiniteSet(m.clone())).collect(),
        SupportIdeal::BoundedCuts => {
            return Err(Error::UnsupportedGroupShape(
                "bounded-cut filters are not finitely enumerable".into(),
            ))
        }
    };
    cuts.sort_by_key(|c| c.as_finite().map_or(0, |s| s.len()));
    let family: Vec<FiniteGroup> = cuts
        .iter()
        .map(|e| g.fix_subgroup(e))
        .collect::<Result<_>>()?;
    Ok(absolute_representative_in(&family, &g)?.map(|i| cuts[i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::PlainPerm;
    use crate::analyzer::SymmetricSystem;
    use crate::name::Name;
    use crate::order::IndexDomain;

    fn nat(n: u64) -> OrderPoint {
        OrderPoint::Nat(n)
    }

    fn system(n: u64, ideal: SupportIdeal) -> SymmetricSystem {
        SymmetricSystem::new(
            TruncatedPoset::plain(n, 1).unwrap(),
            GroupDesc::FullGroup(IndexDomain::Plain(None)),
            ideal,
        )
    }

    #[test]
    fn injectivity() {
        let t = TruncatedPoset::plain(2, 1).unwrap();
        let gens = FamilyName::new([(0, Name::gen(nat(0))), (1, Name::gen(nat(1)))]).unwrap();
        assert!(!is_injective_name(&gens, &t).unwrap());
        let checks = FamilyName::new([(0, Name::check_nat(0)), (1, Name::check_nat(1))]).unwrap();
        assert!(is_injective_name(&checks, &t).unwrap());
        let tagged = FamilyName::new([
            (0, Name::bullet([Name::check_nat(0), Name::gen(nat(0))])),
            (1, Name::bullet([Name::check_nat(1), Name::gen(nat(0))])),
        ])
        .unwrap();
        assert!(is_injective_name(&tagged, &t).unwrap());
    }

    #[test]
    fn measuring() {
        let s = system(3, SupportIdeal::FiniteSets);
        let checks = FamilyName::new((0..3).map(|i| (i, Name::check_nat(i)))).unwrap();
        assert!(measures(&s.group.clone(), &checks, &s).unwrap());
        let h = GroupDesc::Fix(Cut::finite([nat(0)]));
        let one = FamilyName::new([(0, Name::gen(nat(0)))]).unwrap();
        assert!(measures(&h, &one, &s).unwrap());
        let two = FamilyName::new([(0, Name::gen(nat(0))), (1, Name::gen(nat(1)))]).unwrap();
        assert!(measures(&h, &two, &s).unwrap());
    }

    #[test]
    fn dense_measurability() {
        let s = system(4, SupportIdeal::FiniteSets);
        let gens = FamilyName::new((0..4).map(|i| (i, Name::gen(nat(i))))).unwrap();
        assert!(is_densely_measurable(&gens, &s).unwrap());
        let checks = FamilyName::new((0..4).map(|i| (i, Name::check_nat(i)))).unwrap();
        assert!(is_densely_measurable(&checks, &s).unwrap());

        let small = SupportIdeal::Listed(
            std::iter::once(Default::default())
                .chain((0..4).map(|i| [nat(i)].into()))
                .collect(),
        );
        let s = system(4, small);
        let pair =
            FamilyName::new([(0, Name::opair(Name::gen(nat(0)), Name::gen(nat(1))))]).unwrap();
        assert!(!is_densely_measurable(&pair, &s).unwrap());
    }

    #[test]
    fn absolute_representatives() {
        let pts: Vec<OrderPoint> = (0..3).map(nat).collect();
        let s3 = FiniteGroup::symmetric(&pts, 100).unwrap();
        assert_eq!(
            absolute_representative_in(std::slice::from_ref(&s3), &s3).unwrap(),
            Some(0)
        );

        let swap = FiniteGroup::generated(&[Automorphism::swap(0, 1)], 100).unwrap();
        let a3 = FiniteGroup::generated(
            &[Automorphism::Perm(PlainPerm::cycle(&[0, 1, 2]).unwrap())],
            100,
        )
        .unwrap();
        assert_eq!(absolute_representative_in(&[swap, a3], &s3).unwrap(), None);

        let f = FilterDesc::new(
            GroupDesc::FullGroup(IndexDomain::Plain(None)),
            SupportIdeal::FiniteSets,
        );
        let pts: Vec<OrderPoint> = (0..4).map(nat).collect();
        let w = has_absolute_representative(&f, &pts, 10_000)
            .unwrap()
            .expect("a witness");
        let g = FiniteGroup::symmetric(&pts, 100).unwrap();
        assert_eq!(g.fix_subgroup(&w).unwrap().len(), 1);
    }
}
