//! Construction of automorphisms meeting the constraint pattern used in the
//! countability and separation arguments: fix a support, move one point,
//! stay inside an interval, and keep a condition compatible with its image.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::action::automorphism::{Automorphism, PlMap, PlainPerm};
use crate::action::condition::Condition;
use crate::error::{Error, Result};
use crate::order::{int, Cut, OrderPoint, Rational};

/// What to do with the distinguished point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Movement {
    To(OrderPoint, OrderPoint),
    Away(OrderPoint),
}

/// All clauses are optional; an empty spec is solved by the identity.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintSpec {
    pub fix_cut: Option<Cut>,
    pub movement: Option<Movement>,
    /// Open interval outside of which the automorphism is the identity.
    pub confine: Option<(OrderPoint, OrderPoint)>,
    /// The image of this condition must stay compatible with it.
    pub avoid: Option<Condition>,
}

/// Evaluates every clause of `spec` against `pi`; `Err` names the first
/// violated clause.
pub fn verify_constraints(
    spec: &ConstraintSpec,
    pi: &Automorphism,
) -> std::result::Result<(), String> {
    let fail = |clause: &str, e: Option<Error>| match e {
        Some(e) => format!("{clause}: {e}"),
        None => format!("{clause} violated by {pi}"),
    };
    if let Some(cut) = &spec.fix_cut {
        match pi.fixes_cut(cut) {
            Ok(true) => {}
            Ok(false) => return Err(fail("fix", None)),
            Err(e) => return Err(fail("fix", Some(e))),
        }
    }
    match &spec.movement {
        Some(Movement::To(a, b)) => match pi.apply_point(a) {
            Ok(img) if img == *b => {}
            Ok(_) => return Err(fail("move", None)),
            Err(e) => return Err(fail("move", Some(e))),
        },
        Some(Movement::Away(a)) => match pi.apply_point(a) {
            Ok(img) if img != *a => {}
            Ok(_) => return Err(fail("move", None)),
            Err(e) => return Err(fail("move", Some(e))),
        },
        None => {}
    }
    if let Some((lo, hi)) = &spec.confine {
        match pi.is_identity_outside(lo, hi) {
            Ok(true) => {}
            Ok(false) => return Err(fail("confine", None)),
            Err(e) => return Err(fail("confine", Some(e))),
        }
    }
    if let Some(p) = &spec.avoid {
        match p.apply(pi) {
            Ok(q) if q.compatible(p) => {}
            Ok(_) => return Err(fail("avoid", None)),
            Err(e) => return Err(fail("avoid", Some(e))),
        }
    }
    Ok(())
}

/// Returns an automorphism satisfying every clause of `spec`, re-verified by
/// evaluation before it is returned.
pub fn find_automorphism(spec: &ConstraintSpec) -> Result<Automorphism> {
    let candidate = match &spec.movement {
        None => Automorphism::identity(),
        Some(m) => {
            let (a, target) = match m {
                Movement::To(a, b) => (a, Some(b)),
                Movement::Away(a) => (a, None),
            };
            if target == Some(a) {
                Automorphism::identity()
            } else {
                match a {
                    OrderPoint::Rat(_) | OrderPoint::Lex(..) => solve_ordered(spec, a, target)?,
                    OrderPoint::Nat(_) | OrderPoint::Prod(..) => solve_plain(spec, a, target)?,
                }
            }
        }
    };
    verify_constraints(spec, &candidate).map_err(Error::Unsatisfiable)?;
    Ok(candidate)
}

fn unsat(msg: impl Into<String>) -> Error {
    Error::Unsatisfiable(msg.into())
}

/// Block of a point in the ordered case; `None` for plain rationals.
fn block_of(x: &OrderPoint) -> Option<u64> {
    match x {
        OrderPoint::Lex(b, _) => Some(*b),
        _ => None,
    }
}

/// Rational coordinate of `x` if it lives in `block` (and has `a`'s kind).
fn coord_in<'a>(x: &'a OrderPoint, a: &OrderPoint, block: Option<u64>) -> Option<&'a Rational> {
    if !x.same_kind(a) || block_of(x) != block {
        return None;
    }
    x.rational()
}

/// Where a foreign-block point sits relative to `block`.
fn block_side(x: &OrderPoint, block: Option<u64>) -> Option<Ordering> {
    match (x, block) {
        (OrderPoint::Lex(b, _), Some(bl)) if *b != bl => Some(b.cmp(&bl)),
        _ => None,
    }
}

fn solve_ordered(
    spec: &ConstraintSpec,
    a: &OrderPoint,
    target: Option<&OrderPoint>,
) -> Result<Automorphism> {
    let block = block_of(a);
    let qa = a.rational().expect("ordered point").clone();
    // open interval (lo, hi) in which the map may move points
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut fixed: BTreeSet<Rational> = BTreeSet::new();
    let raise = |lo: &mut Option<Rational>, v: Rational| {
        if lo.as_ref().is_none_or(|l| *l < v) {
            *lo = Some(v);
        }
    };
    let lower = |hi: &mut Option<Rational>, v: Rational| {
        if hi.as_ref().is_none_or(|h| *h > v) {
            *hi = Some(v);
        }
    };

    match &spec.fix_cut {
        Some(Cut::InitialSegment { bound, .. }) => {
            if !bound.same_kind(a) {
                return Err(unsat(format!(
                    "cut {bound} and point {a} live in different domains"
                )));
            }
            match block_side(bound, block) {
                Some(Ordering::Greater) => {
                    return Err(unsat(format!("{a} lies inside the fixed cut")))
                }
                Some(_) => {}
                // an order automorphism fixing everything below the bound fixes the bound too
                None => raise(&mut lo, bound.rational().expect("ordered bound").clone()),
            }
        }
        Some(Cut::FiniteSet(points)) => {
            for x in points {
                if let Some(q) = coord_in(x, a, block) {
                    fixed.insert(q.clone());
                }
            }
        }
        None => {}
    }
    if let Some((l, h)) = &spec.confine {
        for (end, is_lo) in [(l, true), (h, false)] {
            if !end.same_kind(a) {
                return Err(unsat(format!(
                    "confinement {end} and point {a} live in different domains"
                )));
            }
            match (block_side(end, block), is_lo) {
                (Some(Ordering::Less), true) | (Some(Ordering::Greater), false) => {}
                (Some(_), _) => {
                    return Err(unsat(format!("confinement excludes the block of {a}")))
                }
                (None, true) => raise(&mut lo, end.rational().expect("ordered").clone()),
                (None, false) => lower(&mut hi, end.rational().expect("ordered").clone()),
            }
        }
    }
    if fixed.contains(&qa) {
        return Err(unsat(format!("{a} must stay fixed")));
    }
    if let Some(f) = fixed.range(..qa.clone()).next_back() {
        raise(&mut lo, f.clone());
    }
    if let Some(f) = fixed.range(qa.clone()..).next() {
        lower(&mut hi, f.clone());
    }
    let inside =
        |q: &Rational| lo.as_ref().is_none_or(|l| l < q) && hi.as_ref().is_none_or(|h| q < h);
    if !inside(&qa) {
        return Err(unsat(format!(
            "{a} lies in the region that must stay fixed"
        )));
    }

    let supp: BTreeSet<Rational> = spec
        .avoid
        .iter()
        .flat_map(|p| p.supp())
        .filter_map(|x| coord_in(&x, a, block).cloned())
        .filter(|q| inside(q))
        .collect();

    let qb = match target {
        Some(b) => {
            if !b.same_kind(a) || block_of(b) != block {
                return Err(unsat(format!(
                    "{a} cannot be sent to {b}: blocks are preserved"
                )));
            }
            let qb = b.rational().expect("ordered").clone();
            if !inside(&qb) {
                return Err(unsat(format!(
                    "order preservation keeps the image of {a} between its fixed neighbours, {b} is outside"
                )));
            }
            qb
        }
        None => {
            let next = supp
                .range((std::ops::Bound::Excluded(&qa), std::ops::Bound::Unbounded))
                .next();
            match next.or(hi.as_ref()) {
                Some(n) => (&qa + n) / int(2),
                None => &qa + int(1),
            }
        }
    };

    // the moved points: a and every support point of the condition inside the interval
    let mut domain: Vec<Rational> = supp.iter().cloned().collect();
    if !supp.contains(&qa) {
        domain.push(qa.clone());
        domain.sort();
    }
    let t = domain
        .iter()
        .position(|q| *q == qa)
        .expect("a is in the domain");
    let mut image: Vec<Rational> = domain.clone();
    image[t] = qb;
    for i in (0..t).rev() {
        let upper = image[i + 1].clone();
        if domain[i] < upper {
            continue;
        }
        let below = supp.range(..upper.clone()).next_back().cloned();
        let floor = match (below, lo.clone()) {
            (Some(s), Some(l)) => Some(if s > l { s } else { l }),
            (s, l) => s.or(l),
        };
        image[i] = match floor {
            Some(f) => (f + &upper) / int(2),
            None => upper - int(1),
        };
    }
    for i in t + 1..domain.len() {
        let lower_img = image[i - 1].clone();
        if domain[i] > lower_img {
            continue;
        }
        let above = supp
            .range((
                std::ops::Bound::Excluded(lower_img.clone()),
                std::ops::Bound::Unbounded,
            ))
            .next()
            .cloned();
        let ceil = match (above, hi.clone()) {
            (Some(s), Some(h)) => Some(if s < h { s } else { h }),
            (s, h) => s.or(h),
        };
        image[i] = match ceil {
            Some(c) => (lower_img + c) / int(2),
            None => lower_img + int(1),
        };
    }

    let min = domain
        .iter()
        .chain(image.iter())
        .min()
        .expect("nonempty")
        .clone();
    let max = domain
        .iter()
        .chain(image.iter())
        .max()
        .expect("nonempty")
        .clone();
    let left = lo.unwrap_or(min - int(1));
    let right = hi.unwrap_or(max + int(1));
    let mut points = vec![(left.clone(), left)];
    points.extend(domain.into_iter().zip(image));
    points.push((right.clone(), right));
    Ok(Automorphism::Pl(PlMap::new(points, block)?).normalized())
}

fn solve_plain(
    spec: &ConstraintSpec,
    a: &OrderPoint,
    target: Option<&OrderPoint>,
) -> Result<Automorphism> {
    let (row, ca) = match a {
        OrderPoint::Nat(n) => (None, *n),
        OrderPoint::Prod(r, c) => (Some(*r), *c),
        _ => unreachable!("plain points only"),
    };
    let col_of = |x: &OrderPoint| -> Option<u64> {
        match (x, row) {
            (OrderPoint::Nat(n), None) => Some(*n),
            (OrderPoint::Prod(r, c), Some(row)) if *r == row => Some(*c),
            _ => None,
        }
    };
    let mut fixed = BTreeSet::new();
    match &spec.fix_cut {
        Some(Cut::FiniteSet(points)) => fixed.extend(points.iter().filter_map(&col_of)),
        Some(cut @ Cut::InitialSegment { .. }) => {
            return Err(unsat(format!(
                "{cut} is not a support on the domain of {a}"
            )))
        }
        None => {}
    }
    let allowed = |c: u64| -> Result<bool> {
        if fixed.contains(&c) {
            return Ok(false);
        }
        if let Some((l, h)) = &spec.confine {
            let x = match row {
                None => OrderPoint::Nat(c),
                Some(r) => OrderPoint::Prod(r, c),
            };
            return Ok(l.less_than(&x)? && x.less_than(h)?);
        }
        Ok(true)
    };
    if !allowed(ca)? {
        return Err(unsat(format!("{a} must stay fixed")));
    }
    let supp: BTreeSet<u64> = spec
        .avoid
        .iter()
        .flat_map(|p| p.supp())
        .filter_map(|x| col_of(&x))
        .collect();

    // free columns: allowed, outside the condition's support, not yet used
    let search_end = ca
        .max(supp.last().copied().unwrap_or(0))
        .max(fixed.last().copied().unwrap_or(0))
        + 4;
    let free = |avoid: &[u64]| -> Result<Option<u64>> {
        for c in 0..=search_end {
            if !avoid.contains(&c) && !supp.contains(&c) && allowed(c)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    };

    let wrap = |perm: PlainPerm| match row {
        None => Automorphism::Perm(perm),
        Some(r) => Automorphism::prod(BTreeMap::from([(r, perm)])),
    };
    let preferred = match target {
        Some(b) => {
            let Some(cb) = col_of(b) else {
                return Err(unsat(format!(
                    "{a} cannot be sent to {b}: rows are preserved"
                )));
            };
            if !allowed(cb)? {
                return Err(unsat(format!("{b} must stay fixed")));
            }
            if supp.contains(&cb) {
                match free(&[ca, cb])? {
                    Some(c) => PlainPerm::cycle(&[ca, cb, c])?,
                    None => PlainPerm::swap(ca, cb),
                }
            } else {
                PlainPerm::swap(ca, cb)
            }
        }
        None => match free(&[ca])? {
            Some(c) => PlainPerm::swap(ca, c),
            None => PlainPerm::identity(),
        },
    };
    let candidate = wrap(preferred);
    if verify_constraints(spec, &candidate).is_ok() {
        return Ok(candidate);
    }
    // the support leaves no room for the cheap choice: try every short
    // cycle through `a` on the allowed columns
    let mut columns = Vec::new();
    for c in 0..=search_end {
        if c != ca && allowed(c)? {
            columns.push(c);
        }
    }
    let target_col = target.and_then(col_of);
    let mut cycles: Vec<Vec<u64>> = Vec::new();
    for &c in &columns {
        cycles.push(vec![ca, c]);
        for &d in &columns {
            if d != c {
                cycles.push(vec![ca, c, d]);
                for &e in &columns {
                    if e != c && e != d {
                        cycles.push(vec![ca, c, d, e]);
                    }
                }
            }
        }
    }
    for cycle in cycles {
        if target_col.is_some_and(|cb| cycle[1] != cb) {
            continue;
        }
        let pi = wrap(PlainPerm::cycle(&cycle)?);
        if verify_constraints(spec, &pi).is_ok() {
            return Ok(pi);
        }
    }
    Err(unsat(format!(
        "every exchange of {a} on the allowed points clashes with the condition"
    )))
}
