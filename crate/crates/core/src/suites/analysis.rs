use std::collections::BTreeMap;

use rand::Rng;

use super::gen::SuiteRng;
use super::{RunConfig, Tally};
use crate::action::{Automorphism, GroupDesc, SupportIdeal};
use crate::analyzer::{
    build_choice_name, is_densely_measurable, is_injective_name, measures, verify_choice,
    FamilyName, SymmetricSystem,
};
use crate::error::Result;
use crate::forcing::TruncatedPoset;
use crate::name::Name;
use crate::order::{IndexDomain, OrderPoint};

const MAX_INDICES: u64 = 6;

fn full_group() -> GroupDesc {
    GroupDesc::FullGroup(IndexDomain::Plain(None))
}

/// `ȧ = T(ẋ)` for one of a few uniform terms, so the choice is a function
/// whenever the family is.
fn term(kind: u32, x: &Name, c: u64) -> Name {
    match kind {
        0 => x.clone(),
        1 => Name::bullet([x.clone()]),
        2 => Name::bullet([x.clone(), Name::check_nat(c)]),
        _ => Name::opair(x.clone(), Name::check_nat(c)),
    }
}

/// The family `ẋ_j = Gen(j)` for `j < n` and a group with the orbits
/// `{0..m-1}` and `{m..n-1}`.
fn orbit_group(n: u64, m: u64) -> GroupDesc {
    let gens = (1..n)
        .filter(|i| *i != m)
        .map(|i| Automorphism::swap(i - 1, i))
        .collect();
    GroupDesc::Generated(gens)
}

pub(super) fn choice_build(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    let mut systems: BTreeMap<u64, SymmetricSystem> = BTreeMap::new();
    for _ in 0..cfg.cases {
        let n = rng.random_range(2..=MAX_INDICES);
        let m = rng.random_range(1..=n);
        let kind = rng.random_range(0..4);
        let (c, target_c) = (rng.random_range(0..3), rng.random_range(0..3));
        let s = match systems.entry(n) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(SymmetricSystem::new(
                TruncatedPoset::plain(n, 1)?,
                full_group(),
                SupportIdeal::FiniteSets,
            )),
        };
        let x = FamilyName::new((0..n).map(|j| (j, Name::gen(OrderPoint::Nat(j)))))?;
        let a: BTreeMap<u64, Name> = x
            .elems()
            .iter()
            .map(|(j, xj)| (*j, term(kind, xj, c)))
            .collect();
        let targets: BTreeMap<u64, Name> = a
            .iter()
            .map(|(j, aj)| (*j, Name::bullet([aj.clone(), Name::check_nat(target_c)])))
            .collect();
        let h = orbit_group(n, m);
        let orbits = if m == n { 1 } else { 2 };
        let what = || format!("n={n} orbits={orbits} term={kind} c={c}");
        tally.add("instances", 1);
        match build_choice_name(&x, &a, &h, &h, s) {
            Ok(choice) => {
                tally.check(choice.representatives.len() == orbits, || {
                    format!("{}: representatives {:?}", what(), choice.representatives)
                });
                let check = verify_choice(&choice.name, &x, &targets, &s.poset)?;
                tally.check(check.passed(), || format!("{}: {check:?}", what()));
            }
            Err(e) => tally.fail(format!("{}: {e}", what())),
        }
    }
    Ok(())
}

pub(super) fn measurability(cfg: &RunConfig, tally: &mut Tally) -> Result<()> {
    let max_n = cfg.index_size.clamp(1, 4);
    for n in 1..=max_n {
        let s = SymmetricSystem::new(
            TruncatedPoset::plain(n, 1)?,
            full_group(),
            SupportIdeal::FiniteSets,
        );
        for k in 1..=4u64 {
            let x = FamilyName::new((0..k).map(|i| (i, Name::check_nat(i))))?;
            let what = format!("n={n} check ordinals below {k}");
            tally.check(is_injective_name(&x, &s.poset)?, || {
                format!("{what}: not injective")
            });
            tally.check(measures(&full_group(), &x, &s)?, || {
                format!("{what}: not measured")
            });
            tally.check(is_densely_measurable(&x, &s)?, || {
                format!("{what}: not densely measurable")
            });
            tally.add("families", 1);
        }
    }
    let s = non_measurable_system();
    let pair = non_measurable_family();
    tally.check(!is_densely_measurable(&pair, &s)?, || {
        "the pair family under singleton supports passed".to_string()
    });
    tally.add("fixtures", 1);
    Ok(())
}

/// Four coordinates with only the empty set and singletons as supports.
pub fn non_measurable_system() -> SymmetricSystem {
    let ideal = SupportIdeal::Listed(
        std::iter::once(Default::default())
            .chain((0..4).map(|i| [OrderPoint::Nat(i)].into()))
            .collect(),
    );
    SymmetricSystem::new(
        TruncatedPoset::plain(4, 1).expect("small"),
        full_group(),
        ideal,
    )
}

/// `{⟨Gen 0, Gen 1⟩}`: its stabilizer needs two fixed coordinates.
pub fn non_measurable_family() -> FamilyName {
    FamilyName::new([(
        0,
        Name::opair(Name::gen(OrderPoint::Nat(0)), Name::gen(OrderPoint::Nat(1))),
    )])
    .expect("one index")
}
