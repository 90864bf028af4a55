//! Ground truth by enumeration: evaluate names at every total extension of a
//! condition and check the formula set-theoretically. Shares no code with
//! the compiler or the recursive relation.

use std::collections::BTreeMap;

use crate::action::Condition;
use crate::error::{Error, Result};
use crate::forcing::formula::Formula;
use crate::forcing::poset::{GenericSample, TruncatedPoset};
use crate::hf::HfSet;
use crate::name::Name;

/// `val(ṅ, g)` computed directly from the symbolic name.
pub fn eval_name(name: &Name, g: &GenericSample, poset: &TruncatedPoset) -> Result<HfSet> {
    let in_domain = |p: &Condition| -> Result<()> {
        for ((x, n), _) in p.iter() {
            if g.bit(x, *n).is_none() {
                return Err(Error::CoordinateOutOfDomain(format!("({x} {n})")));
            }
        }
        Ok(())
    };
    Ok(match name {
        Name::Check(x) => x.clone(),
        Name::Gen(i) => {
            if !poset.contains_point(i) {
                return Err(Error::CoordinateOutOfDomain(i.to_string()));
            }
            HfSet::from_members(
                (0..poset.slots())
                    .filter(|j| g.bit(i, *j) == Some(true))
                    .map(|j| HfSet::nat(j as u64)),
            )
        }
        Name::Bullet(elems) => HfSet::from_members(
            elems
                .iter()
                .map(|e| eval_name(e, g, poset))
                .collect::<Result<Vec<_>>>()?,
        ),
        Name::OPair(a, b) => HfSet::pair(eval_name(a, g, poset)?, eval_name(b, g, poset)?),
        Name::Raw(entries) => {
            let mut out = HfSet::empty();
            for (p, n) in entries {
                in_domain(p)?;
                if g.meets(p) {
                    out.insert(eval_name(n, g, poset)?);
                }
            }
            out
        }
        // Inside the filter of p the restriction keeps exactly the members
        // of the name; outside it no condition below p is in the filter.
        Name::Restrict(inner, p) => {
            in_domain(p)?;
            let v = eval_name(inner, g, poset)?;
            if g.meets(p) {
                v
            } else {
                HfSet::empty()
            }
        }
        Name::Mix(branches) => {
            let mut out = HfSet::empty();
            for (p, n) in branches {
                in_domain(p)?;
                let v = eval_name(n, g, poset)?;
                if g.meets(p) {
                    for m in v.iter() {
                        out.insert(m.clone());
                    }
                }
            }
            out
        }
        Name::Based(f) => {
            let mut out = HfSet::empty();
            for c in poset.domain() {
                let gen = eval_name(&Name::Gen(c.clone()), g, poset)?;
                out.insert(HfSet::pair(gen, HfSet::nat(f.eval(c)?)));
            }
            out
        }
        Name::Prec(d) => {
            let pts: Vec<_> = poset.domain().iter().filter(|x| d.admits(x)).collect();
            let mut out = HfSet::empty();
            for a in &pts {
                for b in &pts {
                    if a.less_than(b)? {
                        out.insert(HfSet::pair(
                            eval_name(&Name::Gen((*a).clone()), g, poset)?,
                            eval_name(&Name::Gen((*b).clone()), g, poset)?,
                        ));
                    }
                }
            }
            out
        }
    })
}

/// The values `v` with `⟨x, v⟩ ∈ f`.
pub fn values_at(f: &HfSet, x: &HfSet) -> Vec<HfSet> {
    f.iter()
        .filter_map(|m| m.unpair())
        .filter(|(a, _)| a == x)
        .map(|(_, b)| b)
        .collect()
}

pub fn holds(phi: &Formula, g: &GenericSample, poset: &TruncatedPoset) -> Result<bool> {
    let val = |n: &Name| eval_name(n, g, poset);
    Ok(match phi {
        Formula::Elem(a, b) => val(b)?.contains(&val(a)?),
        Formula::Eq(a, b) => val(a)? == val(b)?,
        Formula::Not(f) => !holds(f, g, poset)?,
        Formula::And(a, b) => holds(a, g, poset)? && holds(b, g, poset)?,
        Formula::Or(a, b) => holds(a, g, poset)? || holds(b, g, poset)?,
        Formula::IsFunctionOn(f, xs) => {
            let fv = val(f)?;
            let mut ok = true;
            for x in xs {
                let mut vs = values_at(&fv, &val(x)?);
                vs.sort();
                vs.dedup();
                ok &= vs.len() == 1;
            }
            ok
        }
        Formula::ValueIn(f, x, a) => {
            let av = val(a)?;
            values_at(&val(f)?, &val(x)?).iter().any(|v| av.contains(v))
        }
    })
}

/// Every total assignment extending `p`.
pub fn total_extensions(p: &Condition, poset: &TruncatedPoset) -> Result<Vec<GenericSample>> {
    let mut base = BTreeMap::new();
    for ((x, n), v) in p.iter() {
        poset.key(x, *n)?;
        base.insert((x.clone(), *n), *v);
    }
    let mut out = vec![base];
    for x in poset.domain() {
        for n in 0..poset.slots() {
            let key = (x.clone(), n);
            if p.get(x, n).is_some() {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * 2);
            for g in out {
                for bit in [false, true] {
                    let mut h = g.clone();
                    h.insert(key.clone(), bit);
                    next.push(h);
                }
            }
            out = next;
        }
    }
    Ok(out.into_iter().map(|bits| GenericSample { bits }).collect())
}

pub fn forces_oracle(p: &Condition, phi: &Formula, poset: &TruncatedPoset) -> Result<bool> {
    for g in total_extensions(p, poset)? {
        if !holds(phi, &g, poset)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn val(name: &Name, g: &GenericSample, poset: &TruncatedPoset) -> Result<HfSet> {
    eval_name(name, g, poset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::engine::Engine;
    use crate::order::OrderPoint;

    fn nat(n: u64) -> OrderPoint {
        OrderPoint::Nat(n)
    }

    #[test]
    fn oracle_examples() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        let phi = Formula::elem(Name::check_nat(0), Name::gen(nat(0)));
        assert!(forces_oracle(&Condition::singleton(nat(0), 0, true), &phi, &t).unwrap());
        assert!(!forces_oracle(&Condition::new(), &phi, &t).unwrap());
        assert!(forces_oracle(
            &Condition::new(),
            &Formula::or(phi.clone(), Formula::not(phi.clone())),
            &t
        )
        .unwrap());
        assert!(!forces_oracle(
            &Condition::new(),
            &Formula::and(phi.clone(), Formula::not(phi)),
            &t
        )
        .unwrap());
    }

    #[test]
    fn symbolic_and_compiled_values_agree() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        let names = [
            Name::gen(nat(0)),
            Name::opair(Name::gen(nat(0)), Name::gen(nat(1))),
            Name::restrict(
                Name::bullet([Name::gen(nat(1))]),
                Condition::singleton(nat(0), 1, true),
            ),
            Name::prec(crate::order::IndexDomain::Plain(None)),
        ];
        let mut e = Engine::new(&t);
        for n in &names {
            let id = e.compile(n).unwrap();
            for atom in 0..16u32 {
                assert_eq!(
                    e.val(id, atom),
                    eval_name(n, &t.sample(atom), &t).unwrap(),
                    "{n} at {atom}"
                );
            }
        }
    }

    #[test]
    fn function_macros() {
        let t = TruncatedPoset::plain(1, 1).unwrap();
        let f = Name::bullet([
            Name::opair(Name::check_nat(0), Name::check_nat(1)),
            Name::opair(Name::check_nat(1), Name::gen(nat(0))),
        ]);
        let xs = vec![Name::check_nat(0), Name::check_nat(1)];
        let phi = Formula::IsFunctionOn(f.clone(), xs);
        let mut e = Engine::new(&t);
        assert!(forces_oracle(&Condition::new(), &phi, &t).unwrap());
        assert!(e.forces(&Condition::new(), &phi).unwrap());
        let bad = Formula::IsFunctionOn(
            Name::bullet([
                Name::opair(Name::check_nat(0), Name::check_nat(1)),
                Name::opair(Name::check_nat(0), Name::gen(nat(0))),
            ]),
            vec![Name::check_nat(0)],
        );
        // single valued only when the generic bit makes the two values agree
        let on = Condition::singleton(nat(0), 0, true);
        assert!(forces_oracle(&on, &bad, &t).unwrap() && e.forces(&on, &bad).unwrap());
        assert!(!forces_oracle(&Condition::new(), &bad, &t).unwrap());
        assert!(!e.forces(&Condition::new(), &bad).unwrap());
        let vin = Formula::ValueIn(f, Name::check_nat(0), Name::check_nat(2));
        assert!(
            forces_oracle(&Condition::new(), &vin, &t).unwrap()
                && e.forces(&Condition::new(), &vin).unwrap()
        );
    }
}
