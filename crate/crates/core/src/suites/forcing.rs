use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::gen::{self, SuiteRng};
use super::{RunConfig, Tally};
use crate::action::{Condition, GroupDesc, SupportIdeal};
use crate::analyzer::{check_mixable, is_hereditarily_symmetric, SymmetricSystem};
use crate::error::Result;
use crate::forcing::{check_symmetry_lemma, forces_oracle, Engine, Formula, TruncatedPoset};
use crate::hf::HfSet;
use crate::name::Name;
use crate::order::{Cut, IndexDomain};

fn full_group() -> GroupDesc {
    GroupDesc::FullGroup(IndexDomain::Plain(None))
}

/// Every truncation `n × k` with `n ≤ index_size` and `k ≤ slots`.
fn posets(cfg: &RunConfig) -> Result<Vec<TruncatedPoset>> {
    let mut out = Vec::new();
    for n in 1..=cfg.index_size {
        for k in 1..=cfg.slots {
            out.push(TruncatedPoset::plain(n, k)?);
        }
    }
    Ok(out)
}

pub(super) fn symmetry_lemma(cfg: &RunConfig, tally: &mut Tally) -> Result<()> {
    let t = TruncatedPoset::plain(cfg.index_size, cfg.slots)?;
    let r = check_symmetry_lemma(&t, &full_group(), cfg.name_depth, 1, cfg.budget)?;
    tally.set("conditions", r.conditions as u64);
    tally.set("group_size", r.group_size as u64);
    tally.set("names", r.names as u64);
    tally.set("formulas_per_pair", r.formulas_per_pair as u64);
    tally.set("tuples", r.tuples);
    for c in &r.counterexamples {
        tally.fail(format!(
            "p={} pi={} name={} formula={} lhs={} rhs={}",
            c.p, c.pi, c.name, c.formula, c.lhs, c.rhs
        ));
    }
    tally.failures += r.failures - r.counterexamples.len() as u64;
    Ok(())
}

pub(super) fn oracle_equiv(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    let posets = posets(cfg)?;
    for _ in 0..cfg.cases {
        let t = &posets[rng.random_range(0..posets.len())];
        let p = gen::condition(rng, t, 0.3);
        let phi = gen::formula(rng, t, cfg.name_depth, 2);
        let fast = Engine::new(t).forces(&p, &phi)?;
        let slow = forces_oracle(&p, &phi, t)?;
        tally.add("instances", 1);
        tally.add("forced", fast as u64);
        tally.check(fast == slow, || {
            format!(
                "{}x{} p={p} phi={phi}: recursive {fast}, oracle {slow}",
                t.domain().len(),
                t.slots()
            )
        });
    }
    Ok(())
}

fn nonempty_condition(rng: &mut SuiteRng, t: &TruncatedPoset) -> Condition {
    loop {
        let p = gen::condition(rng, t, 0.4);
        if !p.is_empty() {
            return p;
        }
    }
}

pub(super) fn restriction(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    let posets = posets(cfg)?;
    let empty = Name::check(HfSet::empty());
    for _ in 0..cfg.cases {
        let t = &posets[rng.random_range(0..posets.len())];
        let n = gen::name(rng, t, cfg.name_depth);
        let p = nonempty_condition(rng, t);
        let q = gen::incompatible(rng, t, &p);
        let restricted = Name::restrict(n.clone(), p.clone());
        let keeps = Formula::eq(restricted.clone(), n.clone());
        let kills = Formula::eq(restricted, empty.clone());
        let mut engine = Engine::new(t);
        let laws = [
            ("p forces n|p = n", engine.forces(&p, &keeps)?),
            ("q forces n|p = 0", engine.forces(&q, &kills)?),
            ("oracle: p forces n|p = n", forces_oracle(&p, &keeps, t)?),
            ("oracle: q forces n|p = 0", forces_oracle(&q, &kills, t)?),
        ];
        tally.add("triples", 1);
        for (law, ok) in laws {
            tally.check(ok, || format!("{law} fails for n={n} p={p} q={q}"));
        }
    }
    Ok(())
}

/// A maximal antichain `{l₁…l_m} ∪ {l₁…l_{i-1}¬l_i}` on distinct keys,
/// thinned to a random nonempty subfamily.
fn antichain(rng: &mut SuiteRng, t: &TruncatedPoset) -> Result<Vec<Condition>> {
    let mut keys: Vec<usize> = (0..t.key_count()).collect();
    keys.shuffle(rng);
    let m = rng.random_range(1..=keys.len().min(3));
    let literals: Vec<_> = keys[..m]
        .iter()
        .map(|k| {
            let (x, slot) = t.key_point(*k);
            ((x.clone(), slot), rng.random_bool(0.5))
        })
        .collect();
    let mut all = vec![Condition::from_entries(literals.clone())?];
    for i in 0..m {
        let mut q = literals[..i].to_vec();
        q.push((literals[i].0.clone(), !literals[i].1));
        all.push(Condition::from_entries(q)?);
    }
    let mut kept: Vec<Condition> = all
        .iter()
        .filter(|_| rng.random_bool(0.75))
        .cloned()
        .collect();
    if kept.is_empty() {
        kept.push(all.choose(rng).expect("nonempty").clone());
    }
    Ok(kept)
}

pub(super) fn mixing(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    let systems: Vec<SymmetricSystem> = posets(cfg)?
        .into_iter()
        .map(|t| SymmetricSystem::new(t, full_group(), SupportIdeal::FiniteSets))
        .collect();
    for _ in 0..cfg.cases {
        let s = systems.choose(rng).expect("nonempty");
        let conds = antichain(rng, &s.poset)?;
        let branches: Vec<(Condition, Name)> = conds
            .into_iter()
            .map(|p| (p, gen::name(rng, &s.poset, cfg.name_depth.min(2))))
            .collect();
        let mut points = BTreeSet::new();
        for (p, n) in &branches {
            points.extend(p.supp());
            points.extend(n.coordinates());
        }
        let expected = Cut::FiniteSet(points);
        let show = || {
            branches
                .iter()
                .map(|(p, n)| format!("({p} {n})"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        tally.add("antichains", 1);
        tally.add("branches", branches.len() as u64);
        match check_mixable(s, &branches) {
            Ok(cert) => {
                tally.check(cert.verified, || {
                    format!("a branch is not forced: {}", show())
                });
                tally.check(cert.support == expected, || {
                    format!("support {} instead of {expected}: {}", cert.support, show())
                });
                let hs = is_hereditarily_symmetric(&cert.name, s)?;
                tally.check(hs.is_certified(), || format!("mix is not HS: {}", show()));
            }
            Err(e) => tally.fail(format!("{e}: {}", show())),
        }
    }
    Ok(())
}
