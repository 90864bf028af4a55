//! Based functions: weakly decreasing maps from a linear order into `n`
//! whose non-top level sets each have a least element.

use std::cmp::Ordering;
use std::fmt;

use crate::action::Automorphism;
use crate::error::{mismatch, Error, Result};
use crate::order::OrderPoint;

/// `top` is the value on the unbounded-below initial segment; each step
/// `(b, v)` switches to value `v` from base point `b` upwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasedFn {
    pub bound: u64,
    pub top: u64,
    pub steps: Vec<(OrderPoint, u64)>,
}

impl BasedFn {
    pub fn new(bound: u64, top: u64, steps: Vec<(OrderPoint, u64)>) -> Self {
        BasedFn { bound, top, steps }
    }

    pub fn constant(bound: u64, value: u64) -> Self {
        BasedFn::new(bound, value, Vec::new())
    }

    pub fn eval(&self, x: &OrderPoint) -> Result<u64> {
        let mut value = self.top;
        for (b, v) in &self.steps {
            if b.compare(x)? == Ordering::Greater {
                break;
            }
            value = *v;
        }
        Ok(value)
    }

    /// Checks every structural invariant.
    pub fn is_based(&self) -> bool {
        if self.top >= self.bound {
            return false;
        }
        let mut prev_value = self.top;
        let mut prev_point: Option<&OrderPoint> = None;
        for (b, v) in &self.steps {
            if *v >= prev_value {
                return false;
            }
            if let Some(p) = prev_point {
                if !matches!(p.less_than(b), Ok(true)) {
                    return false;
                }
            }
            prev_value = *v;
            prev_point = Some(b);
        }
        true
    }

    pub fn base_points(&self) -> impl Iterator<Item = &OrderPoint> {
        self.steps.iter().map(|(b, _)| b)
    }

    pub fn max_base_point(&self) -> Option<&OrderPoint> {
        self.steps.last().map(|(b, _)| b)
    }

    /// Every value the function takes.
    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        std::iter::once(self.top).chain(self.steps.iter().map(|(_, v)| *v))
    }

    /// `F ∘ π⁻¹`: base points move along `π`. Only order-preserving maps keep
    /// the step list sorted, so other non-identity data are rejected.
    pub fn act(&self, pi: &Automorphism) -> Result<BasedFn> {
        if pi.is_identity() {
            return Ok(self.clone());
        }
        if !pi.is_order_preserving() && !self.steps.is_empty() {
            return Err(mismatch(pi, self));
        }
        let steps = self
            .steps
            .iter()
            .map(|(b, v)| Ok((pi.apply_point(b)?, *v)))
            .collect::<Result<_>>()?;
        Ok(BasedFn {
            steps,
            ..self.clone()
        })
    }

    /// Drops steps that do not change the value.
    fn normalized(mut self) -> Self {
        let mut prev = self.top;
        self.steps.retain(|(_, v)| {
            let keep = *v != prev;
            prev = *v;
            keep
        });
        self
    }

    fn check_range(&self, bound: u64) -> Result<()> {
        for v in self.values() {
            if v >= bound {
                return Err(Error::NotInRange { value: v, bound });
            }
        }
        Ok(())
    }
}

pub fn eval_based(f: &BasedFn, x: &OrderPoint) -> Result<u64> {
    f.eval(x)
}

pub fn is_based(f: &BasedFn) -> bool {
    f.is_based()
}

/// `x ↦ m·f_n(x) + f_m(x)`, bounded by `n·m`.
pub fn product_based(fnn: &BasedFn, fm: &BasedFn, n: u64, m: u64) -> Result<BasedFn> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroBound);
    }
    fnn.check_range(n)?;
    fm.check_range(m)?;
    let mut points: Vec<&OrderPoint> = fnn.base_points().chain(fm.base_points()).collect();
    let mut err = None;
    points.sort_by(|a, b| {
        a.compare(b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    points.dedup();
    let mut steps = Vec::with_capacity(points.len());
    for x in points {
        steps.push((x.clone(), m * fnn.eval(x)? + fm.eval(x)?));
    }
    Ok(BasedFn::new(n * m, m * fnn.top + fm.top, steps).normalized())
}

/// Pointwise `(v div m, v mod m)`. The split of a based function need not be
/// based (the remainder can increase), in which case `NotInImage` is
/// returned.
pub fn unproduct_based(f: &BasedFn, n: u64, m: u64) -> Result<(BasedFn, BasedFn)> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroBound);
    }
    f.check_range(n * m)?;
    let split = |g: &dyn Fn(u64) -> u64, bound| {
        BasedFn::new(
            bound,
            g(f.top),
            f.steps.iter().map(|(b, v)| (b.clone(), g(*v))).collect(),
        )
        .normalized()
    };
    let hi = split(&|v| v / m, n);
    let lo = split(&|v| v % m, m);
    if !hi.is_based() || !lo.is_based() {
        return Err(Error::NotInImage(f.to_string()));
    }
    Ok((hi, lo))
}

/// The family `A_n` of based functions into `n`, handled intensionally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasedFamily {
    pub bound: u64,
}

pub fn a_n_descriptor(n: u64) -> BasedFamily {
    BasedFamily { bound: n }
}

impl BasedFamily {
    /// Membership ignores the recorded bound of `f` and checks its values.
    pub fn contains(&self, f: &BasedFn) -> bool {
        BasedFn {
            bound: self.bound,
            ..f.clone()
        }
        .is_based()
    }

    /// All members whose base points lie on `grid` (sorted ascending) with at
    /// most `max_steps` steps.
    pub fn enumerate(&self, grid: &[OrderPoint], max_steps: usize) -> Vec<BasedFn> {
        let mut out = Vec::new();
        for top in 0..self.bound {
            let mut steps = Vec::new();
            self.extend(grid, 0, top, max_steps, top, &mut steps, &mut out);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        grid: &[OrderPoint],
        from: usize,
        top: u64,
        budget: usize,
        last: u64,
        steps: &mut Vec<(OrderPoint, u64)>,
        out: &mut Vec<BasedFn>,
    ) {
        out.push(BasedFn::new(self.bound, top, steps.clone()));
        if budget == 0 {
            return;
        }
        for i in from..grid.len() {
            for v in 0..last {
                steps.push((grid[i].clone(), v));
                self.extend(grid, i + 1, top, budget - 1, v, steps, out);
                steps.pop();
            }
        }
    }

    /// Whether `π` maps every listed member to a member.
    pub fn invariant_under(&self, pi: &Automorphism, members: &[BasedFn]) -> Result<bool> {
        for f in members {
            if !self.contains(&f.act(pi)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for BasedFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(based (bound {}) (top {})", self.bound, self.top)?;
        for (b, v) in &self.steps {
            write!(f, " (pt {b} {v})")?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for BasedFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::int;
    use proptest::prelude::*;

    fn q(n: i64) -> OrderPoint {
        OrderPoint::rat(n, 1)
    }

    fn f3() -> BasedFn {
        BasedFn::new(3, 2, vec![(q(0), 1), (q(5), 0)])
    }

    fn f2() -> BasedFn {
        BasedFn::new(2, 1, vec![(q(1), 0)])
    }

    #[test]
    fn evaluation() {
        let f = f3();
        assert_eq!(f.eval(&q(-1)).unwrap(), 2);
        assert_eq!(f.eval(&q(0)).unwrap(), 1);
        assert_eq!(f.eval(&q(7)).unwrap(), 0);
        assert!(f.eval(&OrderPoint::Nat(0)).is_err());
    }

    #[test]
    fn validity() {
        assert!(f3().is_based());
        assert!(!BasedFn::new(3, 2, vec![(q(0), 1), (q(5), 1)]).is_based());
        assert!(!BasedFn::new(3, 3, vec![]).is_based());
        assert!(!BasedFn::new(3, 2, vec![(q(5), 1), (q(0), 0)]).is_based());
    }

    #[test]
    fn worked_product() {
        let f6 = product_based(&f2(), &f3(), 2, 3).unwrap();
        assert_eq!(
            f6,
            BasedFn::new(6, 5, vec![(q(0), 4), (q(1), 1), (q(5), 0)])
        );
        assert_eq!(unproduct_based(&f6, 2, 3).unwrap(), (f2(), f3()));
        assert_eq!(product_based(&f2(), &f3(), 0, 3), Err(Error::ZeroBound));
    }

    #[test]
    fn product_edge_cases() {
        let one = BasedFn::constant(1, 0);
        assert_eq!(product_based(&one, &f3(), 1, 3).unwrap(), f3());
        let c = product_based(&BasedFn::constant(2, 1), &BasedFn::constant(3, 2), 2, 3).unwrap();
        assert_eq!(c, BasedFn::constant(6, 5));
        assert_eq!(
            unproduct_based(&BasedFn::constant(6, 4), 2, 3).unwrap(),
            (BasedFn::constant(2, 1), BasedFn::constant(3, 1))
        );
        assert!(matches!(
            unproduct_based(&BasedFn::constant(6, 6), 2, 3),
            Err(Error::NotInRange { value: 6, bound: 6 })
        ));
        // 4 = (1,1) then 2 = (0,2): the remainder rises, so this is not a product
        let bad = BasedFn::new(6, 4, vec![(q(0), 2)]);
        assert!(matches!(
            unproduct_based(&bad, 2, 3),
            Err(Error::NotInImage(_))
        ));
    }

    #[test]
    fn families() {
        let grid: Vec<OrderPoint> = (0..5).map(q).collect();
        assert!(a_n_descriptor(0).enumerate(&grid, 2).is_empty());
        assert_eq!(
            a_n_descriptor(1).enumerate(&grid, 2),
            vec![BasedFn::constant(1, 0)]
        );
        for g in 0..5 {
            let members = a_n_descriptor(2).enumerate(&grid[..g], 1);
            assert_eq!(members.len(), g + 2);
            assert!(members.iter().all(|f| f.is_based()));
        }
        let a2 = a_n_descriptor(2);
        let a3 = a_n_descriptor(3);
        assert!(a2.enumerate(&grid, 2).iter().all(|f| a3.contains(f)));
        let pi =
            Automorphism::pl(vec![(int(0), int(0)), (int(1), int(2)), (int(3), int(3))]).unwrap();
        assert!(a3.invariant_under(&pi, &a3.enumerate(&grid, 2)).unwrap());
    }

    fn arb_based(bound: u64) -> impl Strategy<Value = BasedFn> {
        (
            0..bound,
            prop::collection::btree_set(-20i64..20, 0..5),
            prop::collection::vec(any::<u64>(), 5),
        )
            .prop_map(move |(top, xs, seeds)| {
                let mut value = top;
                let mut steps = Vec::new();
                for (x, s) in xs.into_iter().zip(seeds) {
                    if value == 0 {
                        break;
                    }
                    value = s % value;
                    steps.push((q(x), value));
                }
                BasedFn::new(bound, top, steps)
            })
    }

    fn arb_pair() -> impl Strategy<Value = (u64, u64, BasedFn, BasedFn)> {
        (1u64..6, 1u64..6).prop_flat_map(|(n, m)| (Just(n), Just(m), arb_based(n), arb_based(m)))
    }

    proptest! {
        #[test]
        fn product_round_trip((n, m, fnn, fm) in arb_pair()) {
            let p = product_based(&fnn, &fm, n, m).unwrap();
            prop_assert!(p.is_based());
            prop_assert_eq!(unproduct_based(&p, n, m).unwrap(), (fnn.clone(), fm.clone()));
            for (b, _) in fnn.steps.iter().chain(fm.steps.iter()) {
                prop_assert_eq!(p.eval(b).unwrap(), m * fnn.eval(b).unwrap() + fm.eval(b).unwrap());
            }
        }
    }
}
