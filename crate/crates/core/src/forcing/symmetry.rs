//! Exhaustive check of `p ⊩ φ(ẋ) ⟺ πp ⊩ φ(πẋ)` over a truncated poset.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::action::{Automorphism, Condition, GroupDesc, DEFAULT_GROUP_CAP};
use crate::error::{Error, Result};
use crate::forcing::engine::{Engine, NodeId};
use crate::forcing::formula::Formula;
use crate::forcing::poset::{AtomSet, CondBits, TruncatedPoset};
use crate::name::Name;

/// Default cap on `(p, π, ẋ, φ)` tuples.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// How many counterexamples a report keeps verbatim.
const KEPT_COUNTEREXAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub p: String,
    pub pi: String,
    pub name: String,
    pub formula: String,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub conditions: usize,
    pub group_size: usize,
    pub names: usize,
    pub formulas_per_pair: usize,
    pub tuples: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
    pub wall_ms: u128,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Every condition with at most one literal.
fn small_conditions(poset: &TruncatedPoset) -> Vec<Condition> {
    let mut out = vec![Condition::new()];
    for x in poset.domain() {
        for n in 0..poset.slots() {
            for bit in [false, true] {
                out.push(Condition::singleton(x.clone(), n, bit));
            }
        }
    }
    out
}

/// Names of raw-expansion depth at most `depth`: raw names with at most one
/// entry whose condition has at most one literal, built level by level,
/// together with the check names and generic reals of small enough depth.
pub fn enumerate_names(poset: &TruncatedPoset, depth: usize) -> Vec<Name> {
    let pool = small_conditions(poset);
    let mut level: BTreeSet<Name> = [Name::raw([])].into_iter().collect();
    for _ in 0..depth {
        let mut next = level.clone();
        for n in &level {
            for c in &pool {
                next.insert(Name::raw([(c.clone(), n.clone())]));
            }
        }
        level = next;
    }
    for m in 1..=depth as u64 {
        level.insert(Name::check_nat(m));
    }
    if poset.slots() as usize <= depth {
        for x in poset.domain() {
            level.insert(Name::gen(x.clone()));
        }
    }
    level.into_iter().collect()
}

/// Formula templates in two free variables: the atoms `x ∈ y`, `x = y`,
/// `y ∈ x`, and at depth one also their negations and pairwise
/// conjunctions and disjunctions.
pub fn formula_templates(x: &Name, y: &Name, depth: usize) -> Vec<Formula> {
    let atoms = [
        Formula::elem(x.clone(), y.clone()),
        Formula::eq(x.clone(), y.clone()),
        Formula::elem(y.clone(), x.clone()),
    ];
    let mut out = atoms.to_vec();
    if depth >= 1 {
        out.extend(atoms.iter().map(|a| Formula::not(a.clone())));
        for op in [Formula::and as fn(Formula, Formula) -> Formula, Formula::or] {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                out.push(op(atoms[i].clone(), atoms[j].clone()));
            }
        }
    }
    out
}

fn template_count(depth: usize) -> usize {
    if depth >= 1 {
        12
    } else {
        3
    }
}

/// Truth sets of the templates, in the order of [`formula_templates`].
fn template_truths(engine: &mut Engine<'_>, x: NodeId, y: NodeId, depth: usize) -> Vec<AtomSet> {
    let atoms = [
        engine.elem_set(x, y),
        engine.eq_set(x, y),
        engine.elem_set(y, x),
    ];
    let mut out = atoms.to_vec();
    if depth >= 1 {
        out.extend(atoms.iter().map(AtomSet::complement));
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let mut s = atoms[i].clone();
            s.and_with(&atoms[j]);
            out.push(s);
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let mut s = atoms[i].clone();
            s.or_with(&atoms[j]);
            out.push(s);
        }
    }
    out
}

pub fn check_symmetry_lemma(
    poset: &TruncatedPoset,
    group: &GroupDesc,
    name_depth: usize,
    formula_depth: usize,
    budget: u64,
) -> Result<SymmetryReport> {
    check_symmetry_lemma_with(poset, group, name_depth, formula_depth, budget, &|pi, n| {
        n.apply(pi)
    })
}

/// As [`check_symmetry_lemma`], with the action on names supplied by the
/// caller (used to confirm the checker detects a broken action).
pub fn check_symmetry_lemma_with(
    poset: &TruncatedPoset,
    group: &GroupDesc,
    name_depth: usize,
    formula_depth: usize,
    budget: u64,
    action: &dyn Fn(&Automorphism, &Name) -> Result<Name>,
) -> Result<SymmetryReport> {
    let start = Instant::now();
    let elements: Vec<Automorphism> = group
        .enumerate(poset.domain(), DEFAULT_GROUP_CAP)?
        .iter()
        .cloned()
        .collect();
    let names = enumerate_names(poset, name_depth);
    let conditions = poset.all_conditions();
    let per_pair = template_count(formula_depth) as u64;
    let needed = (conditions.len() as u64)
        .saturating_mul(elements.len() as u64)
        .saturating_mul((names.len() * names.len()) as u64)
        .saturating_mul(per_pair);
    if needed > budget {
        return Err(Error::EnumerationBudgetExceeded { needed, budget });
    }

    let mut engine = Engine::new(poset);
    let nodes: Vec<NodeId> = names
        .iter()
        .map(|n| engine.compile(n))
        .collect::<Result<_>>()?;
    let exts: Vec<AtomSet> = conditions.iter().map(|c| engine.ext_set(*c)).collect();
    let cond_values: Vec<Condition> = conditions.iter().map(|c| poset.condition(*c)).collect();

    let mut report = SymmetryReport {
        conditions: conditions.len(),
        group_size: elements.len(),
        names: names.len(),
        formulas_per_pair: per_pair as usize,
        tuples: 0,
        failures: 0,
        counterexamples: Vec::new(),
        wall_ms: 0,
    };

    for pi in &elements {
        let moved: Vec<NodeId> = names
            .iter()
            .map(|n| engine.compile(&action(pi, n)?))
            .collect::<Result<_>>()?;
        let moved_conditions: Vec<CondBits> = cond_values
            .iter()
            .map(|c| poset.bits(&c.apply(pi)?))
            .collect::<Result<_>>()?;
        let moved_exts: Vec<AtomSet> = moved_conditions
            .iter()
            .map(|c| engine.ext_set(*c))
            .collect();
        for i in 0..names.len() {
            for j in 0..names.len() {
                let before = template_truths(&mut engine, nodes[i], nodes[j], formula_depth);
                let after = template_truths(&mut engine, moved[i], moved[j], formula_depth);
                for (t, (tb, ta)) in before.iter().zip(&after).enumerate() {
                    for c in 0..conditions.len() {
                        report.tuples += 1;
                        let lhs = exts[c].is_subset(tb);
                        let rhs = moved_exts[c].is_subset(ta);
                        if lhs != rhs {
                            report.failures += 1;
                            if report.counterexamples.len() < KEPT_COUNTEREXAMPLES {
                                let phi =
                                    &formula_templates(&names[i], &names[j], formula_depth)[t];
                                report.counterexamples.push(Counterexample {
                                    p: cond_values[c].to_string(),
                                    pi: pi.to_string(),
                                    name: format!("{} {}", names[i], names[j]),
                                    formula: phi.to_string(),
                                    lhs,
                                    rhs,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}

/// A deliberately broken action: conditions inside raw names move, subnames
/// and generic reals do not.
pub fn conditions_only_action(pi: &Automorphism, n: &Name) -> Result<Name> {
    Ok(match n {
        Name::Raw(entries) => Name::raw(
            entries
                .iter()
                .map(|(p, m)| Ok((p.apply(pi)?, m.clone())))
                .collect::<Result<Vec<_>>>()?,
        ),
        other => other.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::IndexDomain;

    #[test]
    fn name_enumeration_sizes() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        assert_eq!(enumerate_names(&t, 0).len(), 1);
        assert_eq!(enumerate_names(&t, 1).len(), 11);
        let two = enumerate_names(&t, 2);
        let mut e = Engine::new(&t);
        for n in &two {
            let id = e.compile(n).unwrap();
            assert!(e.depth(id) <= 2, "{n}");
        }
    }

    #[test]
    fn small_lemma_run() {
        let t = TruncatedPoset::plain(2, 1).unwrap();
        let g = GroupDesc::FullGroup(IndexDomain::Plain(None));
        let r = check_symmetry_lemma(&t, &g, 2, 1, u64::MAX).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples.first());
        assert_eq!(r.group_size, 2);
        let trivial = GroupDesc::Generated(vec![]);
        assert!(check_symmetry_lemma(&t, &trivial, 1, 1, u64::MAX)
            .unwrap()
            .passed());
    }

    #[test]
    fn broken_action_is_detected() {
        let t = TruncatedPoset::plain(2, 1).unwrap();
        let g = GroupDesc::FullGroup(IndexDomain::Plain(None));
        let r = check_symmetry_lemma_with(&t, &g, 2, 1, u64::MAX, &conditions_only_action).unwrap();
        assert!(r.failures > 0);
    }

    #[test]
    fn budget_is_enforced() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        let g = GroupDesc::FullGroup(IndexDomain::Plain(None));
        assert!(matches!(
            check_symmetry_lemma(&t, &g, 2, 1, 1000),
            Err(Error::EnumerationBudgetExceeded { .. })
        ));
    }
}
