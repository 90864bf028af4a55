use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::action::{Automorphism, Condition, GroupDesc};
use crate::error::{Error, Result};
use crate::forcing::{
    enumerate_names, eval_name, forces_oracle, pair_seconds, values_at, CondBits, Engine, Formula,
    TruncatedPoset,
};
use crate::name::Name;
use crate::order::Cut;

use super::{is_hereditarily_symmetric, is_in_sym, FamilyName, SymmetricSystem};

/// A mixed name with the support certifying it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixCertificate {
    pub name: Name,
    /// Least ideal member covering every branch condition and name, so that
    /// its stabilizer lies in the intersection of the branch stabilizers.
    pub support: Cut,
    /// Whether `p_α ⊩ mix = ẋ_α` held for every branch.
    pub verified: bool,
}

/// Mixes HS names along an antichain, certifies the result and checks each
/// branch on the truncation.
pub fn check_mixable(
    s: &SymmetricSystem,
    branches: &[(Condition, Name)],
) -> Result<MixCertificate> {
    let mixed = Name::mix(branches.iter().cloned())?;
    let uncertified = |what: String| Error::HsCertificationFailed(what);
    let mut points = BTreeSet::new();
    for (p, n) in branches {
        if !is_hereditarily_symmetric(n, s)?.is_certified() {
            return Err(uncertified(format!(
                "branch {n} is not hereditarily symmetric"
            )));
        }
        points.extend(p.supp());
        points.extend(n.coordinates());
    }
    let support = s.filter.ideal.cover(&points).ok_or_else(|| {
        uncertified(format!(
            "joint support {} leaves the ideal",
            Cut::FiniteSet(points.clone())
        ))
    })?;
    if let Ok(g) = s.elements() {
        for pi in g.fix_subgroup(&support)?.iter() {
            if !is_in_sym(pi, &mixed)? {
                return Err(uncertified(format!(
                    "{pi} fixes {support} but moves the mixed name"
                )));
            }
        }
    }
    let mut engine = Engine::new(&s.poset);
    let mut verified = true;
    for (p, n) in branches {
        verified &= engine.forces(p, &Formula::eq(mixed.clone(), n.clone()))?;
    }
    Ok(MixCertificate {
        name: mixed,
        support,
        verified,
    })
}

/// `a ∈ f(x)`, read through the pairs `f` is built from.
pub fn member_of_value(a: &Name, f: &Name, x: &Name) -> Result<Formula> {
    let ys = pair_seconds(f)?;
    Ok(Formula::disj(ys.into_iter().map(|y| {
        Formula::and(
            Formula::elem(Name::opair(x.clone(), y.clone()), f.clone()),
            Formula::elem(a.clone(), y),
        )
    })))
}

/// `Ȧ = {(p, ȧ) : p ⊩ ȧ ∈ Ḟ(ẋ)}` with `ȧ` ranging over HS names of raw
/// depth below `rank_bound`; only the minimal forcing conditions are kept.
pub fn build_semicanonical(
    f: &Name,
    x: &Name,
    s: &SymmetricSystem,
    rank_bound: usize,
) -> Result<Name> {
    let candidates = enumerate_names(&s.poset, rank_bound.saturating_sub(1));
    if candidates.len() > s.cap {
        return Err(Error::EnumerationBudgetExceeded {
            needed: candidates.len() as u64,
            budget: s.cap as u64,
        });
    }
    let mut engine = Engine::new(&s.poset);
    let mut entries = Vec::new();
    for a in candidates {
        if !is_hereditarily_symmetric(&a, s)?.is_certified() {
            continue;
        }
        let truth = engine.truth(&member_of_value(&a, f, x)?)?;
        for q in engine.minimal_forcing(CondBits::TOP, &truth) {
            entries.push((s.poset.condition(q), a.clone()));
        }
    }
    Ok(Name::raw(entries))
}

/// Oracle check of `1 ⊩ Ȧ = Ḟ(ẋ)`: at every atom `Ḟ` has exactly one
/// value at `ẋ`, and it equals the value of `Ȧ`.
pub fn verify_semicanonical(a: &Name, f: &Name, x: &Name, t: &TruncatedPoset) -> Result<bool> {
    for atom in 0..t.atom_count() as u32 {
        let g = t.sample(atom);
        let mut vs = values_at(&eval_name(f, &g, t)?, &eval_name(x, &g, t)?);
        vs.sort();
        vs.dedup();
        if vs.len() != 1 || eval_name(a, &g, t)? != vs[0] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Output of [`build_choice_name`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChoiceName {
    /// `{⟨π ẋ_j, π ȧ_j⟩ : j ∈ J, π ∈ H}•`.
    pub name: Name,
    /// The orbit representatives `J`.
    pub representatives: Vec<u64>,
    /// Representatives whose chosen name was replaced by a conjugate.
    pub repaired: Vec<u64>,
    /// The names actually used for each representative.
    pub chosen: BTreeMap<u64, Name>,
}

/// Builds the choice name from one chosen `ȧ_j` per `H`-orbit of the
/// family. When the stabilizer of `ẋ_j` in `H` moves `ȧ_j`, a conjugate
/// `σ ȧ_j` with `σ ∈ K` fixing `ẋ_j` is searched for instead.
pub fn build_choice_name(
    x: &FamilyName,
    a_names: &BTreeMap<u64, Name>,
    h: &GroupDesc,
    k: &GroupDesc,
    s: &SymmetricSystem,
) -> Result<ChoiceName> {
    let h = s.enumerate(h)?;
    let k = s.enumerate(k)?;
    let mut covered: BTreeSet<Name> = BTreeSet::new();
    let mut representatives = Vec::new();
    let mut repaired = Vec::new();
    let mut chosen = BTreeMap::new();
    let mut pairs = Vec::new();
    for (j, xj) in x.elems() {
        if covered.contains(xj) {
            continue;
        }
        let images: Vec<(Automorphism, Name)> = h
            .iter()
            .map(|pi| Ok((pi.clone(), xj.apply(pi)?)))
            .collect::<Result<_>>()?;
        covered.extend(images.iter().map(|(_, n)| n.clone()));
        let stabilizer: Vec<&Automorphism> = images
            .iter()
            .filter(|(_, n)| n == xj)
            .map(|(pi, _)| pi)
            .collect();
        let fixed_by_stabilizer = |a: &Name| -> Result<bool> {
            for pi in &stabilizer {
                if !is_in_sym(pi, a)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let given = a_names.get(j).ok_or_else(|| {
            Error::WellDefinednessFailure(format!("no chosen name for index {j}"))
        })?;
        let aj = if fixed_by_stabilizer(given)? {
            given.clone()
        } else {
            let mut repair = None;
            for sigma in k.iter() {
                if xj.apply(sigma)? != *xj {
                    continue;
                }
                let candidate = given.apply(sigma)?;
                if fixed_by_stabilizer(&candidate)? {
                    repair = Some(candidate);
                    break;
                }
            }
            let Some(r) = repair else {
                return Err(Error::WellDefinednessFailure(format!(
                    "the stabilizer of {xj} moves {given} and no conjugate by K is fixed"
                )));
            };
            repaired.push(*j);
            r
        };
        for (pi, image) in &images {
            pairs.push(Name::opair(image.clone(), aj.apply(pi)?));
        }
        representatives.push(*j);
        chosen.insert(*j, aj);
    }
    Ok(ChoiceName {
        name: Name::bullet(pairs),
        representatives,
        repaired,
        chosen,
    })
}

/// Forcing checks of a constructed choice name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChoiceCheck {
    /// `1 ⊩ ḟ is a function on Ẋ`, by the recursive relation.
    pub is_function: bool,
    /// The same statement by the oracle.
    pub is_function_oracle: bool,
    /// `1 ⊩ ḟ(ẋ_i) ∈ Ȧ_i` for every index with a target, by the oracle.
    pub chooses: bool,
}

impl ChoiceCheck {
    pub fn passed(&self) -> bool {
        self.is_function && self.is_function_oracle && self.chooses
    }
}

pub fn verify_choice(
    f: &Name,
    x: &FamilyName,
    targets: &BTreeMap<u64, Name>,
    t: &TruncatedPoset,
) -> Result<ChoiceCheck> {
    let top = Condition::new();
    let function = Formula::IsFunctionOn(f.clone(), x.names().cloned().collect());
    let is_function = Engine::new(t).forces(&top, &function)?;
    let is_function_oracle = forces_oracle(&top, &function, t)?;
    let mut chooses = true;
    for (i, xi) in x.elems() {
        if let Some(a) = targets.get(i) {
            chooses &= forces_oracle(&top, &Formula::ValueIn(f.clone(), xi.clone(), a.clone()), t)?;
        }
    }
    Ok(ChoiceCheck {
        is_function,
        is_function_oracle,
        chooses,
    })
}

/// Extends a name that is only known below `p` to one usable everywhere:
/// mixes `f` on `p` with `fallback` on the conditions
/// `{l₁, …, l_{i-1}, ¬l_i}` that complete `p` to a maximal antichain.
pub fn complete_by_mixing(p: &Condition, f: &Name, fallback: &Name) -> Result<Name> {
    let literals: Vec<((crate::order::OrderPoint, u32), bool)> =
        p.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let mut branches = vec![(p.clone(), f.clone())];
    for i in 0..literals.len() {
        let mut q: Vec<_> = literals[..i].to_vec();
        q.push((literals[i].0.clone(), !literals[i].1));
        branches.push((Condition::from_entries(q)?, fallback.clone()));
    }
    Name::mix(branches)
}
