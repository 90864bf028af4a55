//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p symx-core --test acceptance -- --nocapture` to see them.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use symx_core::action::{find_automorphism, ConstraintSpec, Movement};
use symx_core::analyzer::{build_choice_name, FamilyName};
use symx_core::forcing::{check_symmetry_lemma_with, conditions_only_action};
use symx_core::models::{product_based, unproduct_based};
use symx_core::suites::{
    find_auto_oracle, non_measurable_family, non_measurable_system, run_suite, FindAutoVerdict,
    Report, RunConfig,
};
use symx_core::{
    analyzer::{is_densely_measurable, SymmetricSystem},
    Automorphism, BasedFn, Condition, Cut, Error, FilterDesc, GroupDesc, IndexDomain, Name,
    OrderPoint, SupportIdeal, TruncatedPoset,
};

// pinned sizes and limits
const SEED: u64 = 20_240_601;
const SYMMETRY_WALL_LIMIT: Duration = Duration::from_secs(60);
const SYMMETRY_BUDGET: u64 = 100_000_000;
const ORACLE_INSTANCES: u64 = 10_000;
const PROPERTY_CASES: u64 = 1_000;
const CHOICE_INSTANCES: u64 = 24;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn config(suite: &str, index_size: u64, slots: u32, cases: u64) -> RunConfig {
    RunConfig {
        index_size,
        slots,
        cases,
        seed: SEED,
        budget: SYMMETRY_BUDGET,
        ..RunConfig::new(suite)
    }
}

fn run(cfg: &RunConfig) -> Report {
    run_suite(cfg).unwrap_or_else(|e| panic!("{} did not run: {e}", cfg.suite))
}

fn summary(r: &Report) -> String {
    let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut s = counts.join(" ");
    if let Some(c) = r.counterexamples.first() {
        s.push_str(&format!(" first counterexample: {c}"));
    }
    s
}

fn count(r: &Report, key: &str) -> u64 {
    r.counts.get(key).copied().unwrap_or(0)
}

fn symmetry_lemma() -> Verdict {
    let start = Instant::now();
    let r = run(&RunConfig {
        name_depth: 2,
        ..config("symmetry-lemma", 2, 2, 1)
    });
    let elapsed = start.elapsed();
    // the checker must notice an action that forgets to move coordinates
    let t = TruncatedPoset::plain(2, 2).unwrap();
    let group = GroupDesc::FullGroup(IndexDomain::Plain(None));
    let broken =
        check_symmetry_lemma_with(&t, &group, 2, 1, SYMMETRY_BUDGET, &conditions_only_action)
            .unwrap();
    verdict(
        r.passed && count(&r, "tuples") > 0 && elapsed < SYMMETRY_WALL_LIMIT && broken.failures > 0,
        format!(
            "{} wall={}ms mutation_failures={}",
            summary(&r),
            elapsed.as_millis(),
            broken.failures
        ),
    )
}

fn oracle_equivalence() -> Verdict {
    let r = run(&config("oracle-equiv", 3, 3, ORACLE_INSTANCES));
    verdict(
        r.passed && count(&r, "instances") >= ORACLE_INSTANCES,
        summary(&r),
    )
}

fn restriction_laws() -> Verdict {
    let r = run(&config("restriction", 3, 2, PROPERTY_CASES));
    verdict(
        r.passed && count(&r, "triples") >= PROPERTY_CASES,
        summary(&r),
    )
}

fn mixing() -> Verdict {
    let r = run(&config("mixing", 3, 2, PROPERTY_CASES));
    verdict(
        r.passed && count(&r, "antichains") >= PROPERTY_CASES,
        summary(&r),
    )
}

fn normality() -> Verdict {
    let r = run(&config("normality", 3, 1, PROPERTY_CASES));
    let total = count(&r, "finite_cases") + count(&r, "ordered_cases");
    verdict(r.passed && total >= PROPERTY_CASES, summary(&r))
}

fn tenacity() -> Verdict {
    let r = run(&config("tenacity", 3, 2, 1));
    let filter = FilterDesc::new(
        GroupDesc::FullGroup(IndexDomain::Plain(None)),
        SupportIdeal::FiniteSets,
    );
    let empty = filter.tenacity_witness(&Condition::new()) == Ok(Cut::empty());
    let listed = FilterDesc::new(
        filter.base.clone(),
        SupportIdeal::Listed(vec![BTreeSet::new(), [OrderPoint::Nat(0)].into()]),
    );
    let far = Condition::singleton(OrderPoint::Nat(5), 0, true);
    let no_witness = matches!(listed.tenacity_witness(&far), Err(Error::NoWitness(_)));
    verdict(
        r.passed && empty && no_witness,
        format!(
            "{} empty_witness={empty} no_witness={no_witness}",
            summary(&r)
        ),
    )
}

fn q(n: i64) -> OrderPoint {
    OrderPoint::rat(n, 1)
}

fn model1_product() -> Verdict {
    let r = run(&config("model1-product", 2, 2, PROPERTY_CASES));
    let f2 = BasedFn::new(2, 1, vec![(q(1), 0)]);
    let f3 = BasedFn::new(3, 2, vec![(q(0), 1), (q(5), 0)]);
    let f6 = product_based(&f2, &f3, 2, 3).unwrap();
    let worked = f6 == BasedFn::new(6, 5, vec![(q(0), 4), (q(1), 1), (q(5), 0)])
        && unproduct_based(&f6, 2, 3) == Ok((f2, f3));
    verdict(
        r.passed && count(&r, "pairs") >= 25 * PROPERTY_CASES && worked,
        format!("{} worked_example={worked} f6={f6}", summary(&r)),
    )
}

fn model2_codes() -> Verdict {
    let r = run(&config("model2-codes", 2, 2, PROPERTY_CASES));
    verdict(
        r.passed
            && count(&r, "law_pairs") == 1 << 16
            && count(&r, "interleavings") >= PROPERTY_CASES,
        summary(&r),
    )
}

fn choice_construction() -> Verdict {
    let r = run(&config("choice-build", 2, 1, CHOICE_INSTANCES));
    // a family member whose stabilizer moves the chosen element, with no repair in K
    let s = SymmetricSystem::new(
        TruncatedPoset::plain(2, 1).unwrap(),
        GroupDesc::FullGroup(IndexDomain::Plain(None)),
        SupportIdeal::FiniteSets,
    );
    let both = Name::bullet([Name::gen(OrderPoint::Nat(0)), Name::gen(OrderPoint::Nat(1))]);
    let x = FamilyName::new([(0, both)]).unwrap();
    let a: BTreeMap<u64, Name> = [(0, Name::gen(OrderPoint::Nat(0)))].into();
    let swap = GroupDesc::Generated(vec![Automorphism::swap(0, 1)]);
    let rejected = matches!(
        build_choice_name(&x, &a, &swap, &swap, &s),
        Err(Error::WellDefinednessFailure(_))
    );
    verdict(
        r.passed && count(&r, "instances") >= 20 && rejected,
        format!("{} fixture_rejected={rejected}", summary(&r)),
    )
}

fn measurability() -> Verdict {
    let r = run(&config("measurability", 4, 1, 1));
    let fixture =
        !is_densely_measurable(&non_measurable_family(), &non_measurable_system()).unwrap();
    verdict(
        r.passed && count(&r, "families") > 0 && fixture,
        format!("{} fixture_rejected={fixture}", summary(&r)),
    )
}

/// Specs no automorphism can satisfy, each for an order-theoretic reason.
fn impossible_specs() -> Vec<(&'static str, ConstraintSpec)> {
    let p = |entries: &[((OrderPoint, u32), bool)]| {
        Some(Condition::from_entries(entries.to_vec()).unwrap())
    };
    vec![
        (
            "below a fixed cut",
            ConstraintSpec {
                fix_cut: Some(Cut::upto(q(0))),
                movement: Some(Movement::To(q(1), q(-1))),
                ..Default::default()
            },
        ),
        (
            "inside the fixed cut",
            ConstraintSpec {
                fix_cut: Some(Cut::upto(q(0))),
                movement: Some(Movement::Away(q(-1))),
                ..Default::default()
            },
        ),
        (
            "past a fixed point",
            ConstraintSpec {
                fix_cut: Some(Cut::finite([q(2)])),
                movement: Some(Movement::To(q(1), q(3))),
                ..Default::default()
            },
        ),
        (
            "out of the confining interval",
            ConstraintSpec {
                movement: Some(Movement::To(q(1), q(5))),
                confine: Some((q(0), q(3))),
                ..Default::default()
            },
        ),
        (
            "onto a clashing coordinate",
            ConstraintSpec {
                movement: Some(Movement::To(OrderPoint::Nat(0), OrderPoint::Nat(1))),
                avoid: p(&[
                    ((OrderPoint::Nat(0), 0), true),
                    ((OrderPoint::Nat(1), 0), false),
                ]),
                ..Default::default()
            },
        ),
        (
            "rational onto a clashing rational",
            ConstraintSpec {
                movement: Some(Movement::To(q(1), q(2))),
                avoid: p(&[((q(1), 0), true), ((q(2), 0), false)]),
                ..Default::default()
            },
        ),
        (
            "across rows",
            ConstraintSpec {
                movement: Some(Movement::To(OrderPoint::Prod(1, 0), OrderPoint::Prod(2, 0))),
                ..Default::default()
            },
        ),
        (
            "with no allowed partner",
            ConstraintSpec {
                fix_cut: Some(Cut::finite([OrderPoint::Nat(0), OrderPoint::Nat(2)])),
                movement: Some(Movement::Away(OrderPoint::Nat(1))),
                confine: Some((OrderPoint::Nat(0), OrderPoint::Nat(3))),
                ..Default::default()
            },
        ),
    ]
}

fn possible_specs() -> Vec<ConstraintSpec> {
    vec![
        ConstraintSpec {
            fix_cut: Some(Cut::upto(q(0))),
            movement: Some(Movement::To(q(1), q(2))),
            confine: Some((q(0), q(3))),
            avoid: None,
        },
        ConstraintSpec::default(),
        ConstraintSpec {
            fix_cut: Some(Cut::finite([OrderPoint::Prod(0, 0)])),
            movement: Some(Movement::Away(OrderPoint::Prod(1, 0))),
            confine: None,
            avoid: Some(Condition::singleton(OrderPoint::Prod(1, 0), 0, true)),
        },
    ]
}

fn proof_automorphisms() -> Verdict {
    let r = run(&config("find-auto", 2, 2, PROPERTY_CASES));
    let mut wrong = Vec::new();
    for (why, spec) in impossible_specs() {
        let solver = matches!(find_automorphism(&spec), Err(Error::Unsatisfiable(_)));
        let search = find_auto_oracle(&spec) == FindAutoVerdict::Unsatisfiable;
        if !(solver && search) {
            wrong.push(why.to_string());
        }
    }
    for spec in possible_specs() {
        if find_automorphism(&spec).is_err() {
            wrong.push(format!("{spec:?}"));
        }
    }
    verdict(
        r.passed && count(&r, "specs") >= PROPERTY_CASES && wrong.is_empty(),
        format!("{} fixture_mismatches={wrong:?}", summary(&r)),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("1 symmetry lemma", symmetry_lemma),
        ("2 oracle equivalence", oracle_equivalence),
        ("3 restriction laws", restriction_laws),
        ("4 mixing", mixing),
        ("5 normality", normality),
        ("6 tenacity", tenacity),
        ("7 model I product bijection", model1_product),
        ("8 model II codecs", model2_codes),
        ("9 choice-name construction", choice_construction),
        ("10 measurability battery", measurability),
        ("11 proof-subroutine automorphisms", proof_automorphisms),
    ];
    let mut failed = Vec::new();
    for (label, criterion) in criteria {
        let v = criterion();
        println!(
            "{} criterion {label}: {}",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail
        );
        if !v.ok {
            failed.push(label);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
