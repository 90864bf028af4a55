use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::Serialize;

use super::gen::SuiteRng;
use super::{RunConfig, Tally};
use crate::action::{
    find_automorphism, verify_constraints, Automorphism, Condition, ConstraintSpec, FilterDesc,
    FiniteGroup, GroupDesc, Movement, PlMap, PlainPerm, SupportIdeal, DEFAULT_GROUP_CAP,
};
use crate::error::{Error, Result};
use crate::forcing::TruncatedPoset;
use crate::order::{int, rat, Cut, IndexDomain, OrderPoint, Rational};

fn plain_filter() -> FilterDesc {
    FilterDesc::new(
        GroupDesc::FullGroup(IndexDomain::Plain(None)),
        SupportIdeal::FiniteSets,
    )
}

fn random_perm(rng: &mut SuiteRng, u: u64) -> Result<Automorphism> {
    let mut image: Vec<u64> = (0..u).collect();
    image.shuffle(rng);
    Ok(Automorphism::Perm(PlainPerm::new((0..u).zip(image))?).normalized())
}

/// A map moving one interior point of `(lo, hi)` and fixing everything else.
fn random_pl(rng: &mut SuiteRng) -> Result<Automorphism> {
    let lo = rng.random_range(-4i64..3);
    let hi = rng.random_range(lo + 1..=4);
    let inner = |rng: &mut SuiteRng| rat(rng.random_range(4 * lo + 1..4 * hi), 4);
    let (x, y) = (inner(rng), inner(rng));
    Ok(Automorphism::Pl(PlMap::new(
        vec![(int(lo), int(lo)), (x, y), (int(hi), int(hi))],
        None,
    )?)
    .normalized())
}

pub(super) fn normality(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    let filter = plain_filter();
    let u = (cfg.index_size + 1).clamp(3, 5);
    let universe: Vec<OrderPoint> = (0..u).map(OrderPoint::Nat).collect();
    for case in 0..cfg.cases {
        if case % 2 == 0 {
            let gens = (0..rng.random_range(1..=2))
                .map(|_| random_perm(rng, u))
                .collect::<Result<Vec<_>>>()?;
            let g = FiniteGroup::generated(&gens, DEFAULT_GROUP_CAP)?;
            let elems: Vec<&Automorphism> = g.iter().collect();
            let pi = *elems.choose(rng).expect("groups are nonempty");
            let e = Cut::finite(universe.iter().filter(|_| rng.random_bool(0.4)).cloned());
            let image = filter.conjugate_fix(pi, &e)?;
            let pointwise: BTreeSet<OrderPoint> = e
                .as_finite()
                .expect("finite")
                .iter()
                .map(|x| pi.apply_point(x))
                .collect::<Result<_>>()?;
            tally.check(image == Cut::FiniteSet(pointwise), || {
                format!("conjugate_fix({pi}, {e}) = {image}")
            });
            let inv = pi.inverse();
            for sigma in &elems {
                let lhs = sigma.fixes_cut(&image)?;
                let rhs = inv.conjugate(sigma)?.fixes_cut(&e)?;
                tally.check(lhs == rhs, || {
                    format!(
                        "pi={pi} E={e} sigma={sigma}: fixes pi[E] {lhs}, conjugate fixes E {rhs}"
                    )
                });
            }
            tally.add("finite_cases", 1);
            tally.add("group_elements", elems.len() as u64);
        } else {
            let pi = random_pl(rng)?;
            let bound = OrderPoint::rat(rng.random_range(-8..=8), 2);
            let e = if rng.random_bool(0.5) {
                Cut::upto(bound.clone())
            } else {
                Cut::below(bound.clone())
            };
            let image = conjugate_fix_checked(&pi, &e, &bound, tally)?;
            let inv = pi.inverse();
            for _ in 0..8 {
                let sigma = random_pl(rng)?;
                let lhs = sigma.fixes_cut(&image)?;
                let rhs = inv.conjugate(&sigma)?.fixes_cut(&e)?;
                tally.check(lhs == rhs, || {
                    format!(
                        "pi={pi} E={e} sigma={sigma}: fixes pi[E] {lhs}, conjugate fixes E {rhs}"
                    )
                });
            }
            tally.add("ordered_cases", 1);
        }
    }
    Ok(())
}

fn conjugate_fix_checked(
    pi: &Automorphism,
    e: &Cut,
    bound: &OrderPoint,
    tally: &mut Tally,
) -> Result<Cut> {
    let filter = FilterDesc::new(
        GroupDesc::FullOrderAut(IndexDomain::Dlo),
        SupportIdeal::BoundedCuts,
    );
    let image = filter.conjugate_fix(pi, e)?;
    let moved = pi.apply_point(bound)?;
    let expected = match e {
        Cut::InitialSegment {
            inclusive: true, ..
        } => Cut::upto(moved),
        _ => Cut::below(moved),
    };
    tally.check(image == expected, || {
        format!("conjugate_fix({pi}, {e}) = {image}")
    });
    Ok(image)
}

pub(super) fn tenacity(cfg: &RunConfig, tally: &mut Tally) -> Result<()> {
    let filter = plain_filter();
    let mut needed = 0u64;
    for n in 1..=cfg.index_size {
        for k in 1..=cfg.slots {
            needed += 3u64.saturating_pow((n * k as u64) as u32);
        }
    }
    cfg.spend(needed)?;
    for n in 1..=cfg.index_size {
        for k in 1..=cfg.slots {
            let t = TruncatedPoset::plain(n, k)?;
            let mut stabilizers: BTreeMap<Cut, FiniteGroup> = BTreeMap::new();
            for bits in t.all_conditions() {
                let p = t.condition(bits);
                let e = filter.tenacity_witness(&p)?;
                tally.check(e == Cut::FiniteSet(p.supp()), || {
                    format!("witness {e} for {p} is not its support")
                });
                if !stabilizers.contains_key(&e) {
                    let g = GroupDesc::Fix(e.clone()).enumerate(t.domain(), DEFAULT_GROUP_CAP)?;
                    stabilizers.insert(e.clone(), g);
                }
                for sigma in stabilizers[&e].iter() {
                    let moved = p.apply(sigma)?;
                    tally.check(moved == p, || {
                        format!("{sigma} fixes {e} but moves {p} to {moved}")
                    });
                }
                tally.add("conditions", 1);
            }
            tally.add("posets", 1);
        }
    }
    Ok(())
}

/// What exhaustive search says about a constraint spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FindAutoVerdict {
    Satisfiable,
    Unsatisfiable,
    /// The spec lies outside the shapes the search covers.
    OutOfScope,
}

/// Decides a constraint spec by searching candidate automorphisms directly:
/// order-preserving assignments of the relevant rationals on a grid dense
/// enough to separate them, or permutations of a finite window of a row.
pub fn find_auto_oracle(spec: &ConstraintSpec) -> FindAutoVerdict {
    let (a, target) = match &spec.movement {
        None => return FindAutoVerdict::Satisfiable,
        Some(Movement::To(a, b)) if a == b => return FindAutoVerdict::Satisfiable,
        Some(Movement::To(a, b)) => (a, Some(b)),
        Some(Movement::Away(a)) => (a, None),
    };
    match a {
        OrderPoint::Rat(q) => ordered_oracle(spec, q, target),
        OrderPoint::Nat(_) | OrderPoint::Prod(..) => plain_oracle(spec, a, target),
        OrderPoint::Lex(..) => FindAutoVerdict::OutOfScope,
    }
}

fn as_rat(x: &OrderPoint) -> Option<&Rational> {
    match x {
        OrderPoint::Rat(q) => Some(q),
        _ => None,
    }
}

fn verdict(found: bool) -> FindAutoVerdict {
    if found {
        FindAutoVerdict::Satisfiable
    } else {
        FindAutoVerdict::Unsatisfiable
    }
}

/// Whether the image of `p` under the partial map `img` clashes with `p`.
fn clashes(p: &Condition, img: &dyn Fn(&OrderPoint) -> OrderPoint) -> bool {
    p.iter()
        .any(|((x, n), v)| p.get(&img(x), *n).is_some_and(|w| w != *v))
}

fn ordered_oracle(
    spec: &ConstraintSpec,
    a: &Rational,
    target: Option<&OrderPoint>,
) -> FindAutoVerdict {
    use FindAutoVerdict::*;
    let b = match target {
        Some(b) => match as_rat(b) {
            Some(q) => Some(q.clone()),
            None => return Unsatisfiable,
        },
        None => None,
    };
    let mut anchors: BTreeSet<Rational> = BTreeSet::new();
    let mut region: Option<(Rational, bool)> = None;
    match &spec.fix_cut {
        Some(Cut::FiniteSet(points)) => {
            for x in points {
                match x {
                    OrderPoint::Rat(q) => {
                        anchors.insert(q.clone());
                    }
                    _ => return OutOfScope,
                }
            }
        }
        Some(Cut::InitialSegment { bound, inclusive }) => {
            let Some(c) = as_rat(bound) else {
                return OutOfScope;
            };
            // an automorphism fixing everything below c also fixes c
            anchors.insert(c.clone());
            region = Some((c.clone(), *inclusive));
        }
        None => {}
    }
    let mut confine = None;
    if let Some((l, h)) = &spec.confine {
        let (Some(l), Some(h)) = (as_rat(l), as_rat(h)) else {
            return OutOfScope;
        };
        anchors.insert(l.clone());
        anchors.insert(h.clone());
        confine = Some((l.clone(), h.clone()));
    }
    let forced = |x: &Rational| {
        anchors.contains(x)
            || region
                .as_ref()
                .is_some_and(|(c, inc)| x < c || (*inc && x == c))
            || confine.as_ref().is_some_and(|(l, h)| x <= l || x >= h)
    };
    if forced(a) {
        return Unsatisfiable;
    }
    let mut supp: BTreeSet<Rational> = BTreeSet::new();
    if let Some(p) = &spec.avoid {
        for x in p.supp() {
            match x {
                OrderPoint::Rat(q) => {
                    supp.insert(q);
                }
                _ => return OutOfScope,
            }
        }
    }
    let mut points: BTreeSet<Rational> = anchors.clone();
    points.extend(supp.iter().cloned());
    points.insert(a.clone());
    let points: Vec<Rational> = points.into_iter().collect();
    let free: Vec<bool> = points.iter().map(|x| !forced(x)).collect();

    let mut interesting = points.clone();
    interesting.extend(b.clone());
    interesting.sort();
    interesting.dedup();
    let mut grid = interesting.clone();
    let first = interesting[0].clone();
    let last = interesting[interesting.len() - 1].clone();
    for k in 1..=4 {
        grid.push(&first - int(k));
        grid.push(&last + int(k));
    }
    for w in interesting.windows(2) {
        for k in 1..=4 {
            grid.push(&w[0] + (&w[1] - &w[0]) * rat(k, 5));
        }
    }
    grid.sort();

    let accept = |img: &[Rational]| -> bool {
        let at = |x: &Rational| points.iter().position(|y| y == x).map(|i| &img[i]);
        let ia = at(a).expect("a is a point");
        let moved = match &b {
            Some(b) => ia == b,
            None => ia != a,
        };
        moved
            && spec.avoid.as_ref().is_none_or(|p| {
                !clashes(p, &|x| match as_rat(x).and_then(&at) {
                    Some(y) => OrderPoint::Rat(y.clone()),
                    None => x.clone(),
                })
            })
    };
    let mut img: Vec<Rational> = Vec::with_capacity(points.len());
    verdict(assign(&points, &free, &grid, &mut img, &accept))
}

/// Depth-first search over strictly increasing images: forced points keep
/// their place, free ones range over the grid.
fn assign(
    points: &[Rational],
    free: &[bool],
    grid: &[Rational],
    img: &mut Vec<Rational>,
    accept: &dyn Fn(&[Rational]) -> bool,
) -> bool {
    let i = img.len();
    if i == points.len() {
        return accept(img);
    }
    let floor = img.last().cloned();
    let above = |v: &Rational| floor.as_ref().is_none_or(|f| f < v);
    // the next forced point bounds every image before it
    let ceiling = (i..points.len())
        .find(|j| !free[*j])
        .map(|j| points[j].clone());
    let below = |v: &Rational| ceiling.as_ref().is_none_or(|c| v < c);
    if !free[i] {
        if !above(&points[i]) {
            return false;
        }
        img.push(points[i].clone());
        let ok = assign(points, free, grid, img, accept);
        img.pop();
        return ok;
    }
    for v in grid {
        if !above(v) || !below(v) {
            continue;
        }
        img.push(v.clone());
        let ok = assign(points, free, grid, img, accept);
        img.pop();
        if ok {
            return true;
        }
    }
    false
}

/// Largest window the permutation search accepts.
const PLAIN_WINDOW: u64 = 8;

fn plain_oracle(
    spec: &ConstraintSpec,
    a: &OrderPoint,
    target: Option<&OrderPoint>,
) -> FindAutoVerdict {
    use FindAutoVerdict::*;
    let row = match a {
        OrderPoint::Prod(r, _) => Some(*r),
        _ => None,
    };
    let col = |x: &OrderPoint| match (x, row) {
        (OrderPoint::Nat(n), None) => Some(*n),
        (OrderPoint::Prod(r, c), Some(row)) if *r == row => Some(*c),
        _ => None,
    };
    let point = |c: u64| match row {
        None => OrderPoint::Nat(c),
        Some(r) => OrderPoint::Prod(r, c),
    };
    let ca = col(a).expect("a lies on its own row");
    let cb = match target {
        Some(b) => match col(b) {
            Some(c) => Some(c),
            None => return Unsatisfiable,
        },
        None => None,
    };
    let fixed: BTreeSet<u64> = match &spec.fix_cut {
        Some(Cut::FiniteSet(points)) => points.iter().filter_map(col).collect(),
        Some(Cut::InitialSegment { .. }) => return OutOfScope,
        None => BTreeSet::new(),
    };
    let confine = match &spec.confine {
        Some((OrderPoint::Nat(l), OrderPoint::Nat(h))) if row.is_none() => Some((*l, *h)),
        Some(_) => return OutOfScope,
        None => None,
    };
    let mut mentioned: Vec<u64> = vec![ca];
    mentioned.extend(cb);
    mentioned.extend(fixed.iter().copied());
    mentioned.extend(confine.iter().flat_map(|(l, h)| [*l, *h]));
    if let Some(p) = &spec.avoid {
        mentioned.extend(p.supp().iter().filter_map(col));
    }
    let window = mentioned.iter().max().expect("nonempty") + 3;
    if window > PLAIN_WINDOW {
        return OutOfScope;
    }
    let mut perm: Vec<u64> = (0..window).collect();
    let ok = |perm: &[u64]| -> bool {
        let moved_ok = (0..window).all(|c| {
            perm[c as usize] == c
                || (!fixed.contains(&c) && confine.is_none_or(|(l, h)| l < c && c < h))
        });
        let pa = perm[ca as usize];
        let target_ok = match cb {
            Some(cb) => pa == cb,
            None => pa != ca,
        };
        moved_ok
            && target_ok
            && spec.avoid.as_ref().is_none_or(|p| {
                !clashes(p, &|x| match col(x) {
                    Some(c) => point(perm[c as usize]),
                    None => x.clone(),
                })
            })
    };
    verdict(permutations(&mut perm, 0, &ok))
}

fn permutations(perm: &mut [u64], k: usize, ok: &dyn Fn(&[u64]) -> bool) -> bool {
    if k == perm.len() {
        return ok(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        let found = permutations(perm, k + 1, ok);
        perm.swap(k, i);
        if found {
            return true;
        }
    }
    false
}

fn random_spec(rng: &mut SuiteRng) -> Result<ConstraintSpec> {
    let kind = rng.random_range(0..10);
    let pt = |rng: &mut SuiteRng| match kind {
        0..=4 => OrderPoint::rat(rng.random_range(-6..=6), 2),
        5..=7 => OrderPoint::Nat(rng.random_range(0..=3)),
        _ => OrderPoint::Prod(rng.random_range(0..=1), rng.random_range(0..=3)),
    };
    let ordered = kind <= 4;
    let fix_cut = match rng.random_range(0..4) {
        0 => None,
        1 if ordered => Some(Cut::upto(pt(rng))),
        2 if ordered => Some(Cut::below(pt(rng))),
        _ => Some(Cut::finite(
            (0..rng.random_range(1..=2))
                .map(|_| pt(rng))
                .collect::<Vec<_>>(),
        )),
    };
    let a = pt(rng);
    let movement = match rng.random_range(0..20) {
        0..=1 => None,
        2..=10 => Some(Movement::To(a, pt(rng))),
        _ => Some(Movement::Away(a)),
    };
    let confine = if kind <= 7 && rng.random_bool(0.5) {
        let (mut l, mut h) = (pt(rng), pt(rng));
        if h.less_than(&l)? {
            std::mem::swap(&mut l, &mut h);
        }
        (l != h).then_some((l, h))
    } else {
        None
    };
    let avoid = if rng.random_bool(0.6) {
        let entries: BTreeMap<(OrderPoint, u32), bool> = (0..rng.random_range(1..=3))
            .map(|_| ((pt(rng), rng.random_range(0..2)), rng.random_bool(0.5)))
            .collect();
        Some(Condition::from_entries(entries)?)
    } else {
        None
    };
    Ok(ConstraintSpec {
        fix_cut,
        movement,
        confine,
        avoid,
    })
}

pub(super) fn show_spec(spec: &ConstraintSpec) -> String {
    let opt = |x: Option<String>| x.unwrap_or_else(|| "-".into());
    format!(
        "fix={} move={} confine={} avoid={}",
        opt(spec.fix_cut.as_ref().map(|c| c.to_string())),
        opt(spec.movement.as_ref().map(|m| match m {
            Movement::To(a, b) => format!("{a}->{b}"),
            Movement::Away(a) => format!("{a}->away"),
        })),
        opt(spec.confine.as_ref().map(|(l, h)| format!("({l}, {h})"))),
        opt(spec.avoid.as_ref().map(|p| p.to_string())),
    )
}

pub(super) fn find_auto(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    for _ in 0..cfg.cases {
        let spec = random_spec(rng)?;
        let oracle = find_auto_oracle(&spec);
        tally.add("specs", 1);
        match find_automorphism(&spec) {
            Ok(pi) => {
                tally.add("solved", 1);
                if let Err(clause) = verify_constraints(&spec, &pi) {
                    tally.fail(format!("{}: {clause}", show_spec(&spec)));
                }
                tally.check(oracle != FindAutoVerdict::Unsatisfiable, || {
                    format!(
                        "{}: solved by {pi} but search found nothing",
                        show_spec(&spec)
                    )
                });
            }
            Err(Error::Unsatisfiable(why)) => {
                tally.add("unsatisfiable", 1);
                tally.check(oracle != FindAutoVerdict::Satisfiable, || {
                    format!(
                        "{}: reported unsatisfiable ({why}) but a solution exists",
                        show_spec(&spec)
                    )
                });
            }
            Err(e) => tally.fail(format!("{}: {e}", show_spec(&spec))),
        }
        if oracle == FindAutoVerdict::OutOfScope {
            tally.add("outside_search", 1);
        }
    }
    Ok(())
}
