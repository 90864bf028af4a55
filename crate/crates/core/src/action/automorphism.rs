use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{mismatch, Error, Result};
use crate::order::{fmt_rational, Cut, OrderPoint, Rational};

/// A finite-support permutation of the naturals, stored without fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PlainPerm {
    map: BTreeMap<u64, u64>,
}

impl PlainPerm {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a permutation from `(from, to)` pairs. The pairs must describe a
    /// bijection of a finite set onto itself.
    pub fn new<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (from, to) in pairs {
            if let Some(prev) = map.insert(from, to) {
                if prev != to {
                    return Err(Error::InvalidAutomorphism(format!(
                        "{from} is sent to both {prev} and {to}"
                    )));
                }
            }
        }
        let domain: BTreeSet<u64> = map.keys().copied().collect();
        let range: BTreeSet<u64> = map.values().copied().collect();
        if range.len() != map.len() {
            return Err(Error::InvalidAutomorphism("map is not injective".into()));
        }
        if domain != range {
            return Err(Error::InvalidAutomorphism(
                "domain and range differ, so the map is not a permutation".into(),
            ));
        }
        map.retain(|k, v| k != v);
        Ok(PlainPerm { map })
    }

    pub fn swap(a: u64, b: u64) -> Self {
        Self::new([(a, b), (b, a)]).expect("a transposition is a permutation")
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]`.
    pub fn cycle(c: &[u64]) -> Result<Self> {
        Self::new((0..c.len()).map(|i| (c[i], c[(i + 1) % c.len()])))
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.map.get(&x).copied().unwrap_or(x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PlainPerm) -> PlainPerm {
        let keys: BTreeSet<u64> = self.map.keys().chain(other.map.keys()).copied().collect();
        let map = keys
            .into_iter()
            .map(|k| (k, self.apply(other.apply(k))))
            .filter(|(k, v)| k != v)
            .collect();
        PlainPerm { map }
    }

    pub fn inverse(&self) -> PlainPerm {
        PlainPerm {
            map: self.map.iter().map(|(k, v)| (*v, *k)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// Points actually moved.
    pub fn support(&self) -> BTreeSet<u64> {
        self.map.keys().copied().collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.map.iter().map(|(k, v)| (*k, *v))
    }
}

/// A continuous, strictly increasing, piecewise linear map of the rationals
/// that is the identity outside a bounded interval.
///
/// Stored in canonical form: no collinear interior breakpoints and no
/// identity pieces at either end, so structural equality is extensional.
/// With `block = Some(b)` the map acts only on block `b` of a lexicographic
/// domain; with `None` it acts on plain rationals and on every block alike.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PlMap {
    points: Vec<(Rational, Rational)>,
    block: Option<u64>,
}

impl PlMap {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(points: Vec<(Rational, Rational)>, block: Option<u64>) -> Result<Self> {
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::NotOrderPreserving(format!(
                    "breakpoints must increase in both coordinates: {}",
                    show_points(&points)
                )));
            }
        }
        if let (Some(first), Some(last)) = (points.first(), points.last()) {
            if first.0 != first.1 || last.0 != last.1 {
                return Err(Error::InvalidAutomorphism(format!(
                    "end breakpoints must be fixed points: {}",
                    show_points(&points)
                )));
            }
        }
        Ok(Self::canonical(points, block))
    }

    fn canonical(mut points: Vec<(Rational, Rational)>, block: Option<u64>) -> Self {
        let mut i = 1;
        while i + 1 < points.len() {
            let (x0, y0) = &points[i - 1];
            let (x1, y1) = &points[i];
            let (x2, y2) = &points[i + 1];
            if (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0) {
                points.remove(i);
            } else {
                i += 1;
            }
        }
        while points.len() >= 2 && points[1].0 == points[1].1 {
            points.remove(0);
        }
        while points.len() >= 2 && points[points.len() - 2].0 == points[points.len() - 2].1 {
            points.pop();
        }
        if points.len() < 2 {
            return PlMap::identity();
        }
        PlMap { points, block }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn block(&self) -> Option<u64> {
        self.block
    }

    pub fn is_identity(&self) -> bool {
        self.points.is_empty()
    }

    /// The open interval outside of which the map is the identity.
    pub fn support_interval(&self) -> Option<(&Rational, &Rational)> {
        Some((&self.points.first()?.0, &self.points.last()?.0))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        interpolate(self.points.iter().map(|(a, b)| (a, b)), x)
    }

    pub fn eval_inverse(&self, y: &Rational) -> Rational {
        interpolate(self.points.iter().map(|(a, b)| (b, a)), y)
    }

    pub fn inverse(&self) -> PlMap {
        PlMap {
            points: self
                .points
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
            block: self.block,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PlMap) -> Result<PlMap> {
        if self.is_identity() {
            return Ok(other.clone());
        }
        if other.is_identity() {
            return Ok(self.clone());
        }
        if self.block != other.block {
            return Err(Error::VariantMismatch(format!(
                "piecewise linear maps act on different blocks {:?} and {:?}",
                self.block, other.block
            )));
        }
        let mut xs: BTreeSet<Rational> = other.points.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(self.points.iter().map(|(x, _)| other.eval_inverse(x)));
        let points = xs
            .into_iter()
            .map(|x| {
                let y = self.eval(&other.eval(&x));
                (x, y)
            })
            .collect();
        Ok(Self::canonical(points, self.block))
    }
}

fn interpolate<'a, I>(points: I, x: &Rational) -> Rational
where
    I: Iterator<Item = (&'a Rational, &'a Rational)> + Clone,
{
    let mut prev: Option<(&Rational, &Rational)> = None;
    for (px, py) in points {
        match x.cmp(px) {
            Ordering::Equal => return py.clone(),
            Ordering::Less => {
                return match prev {
                    None => x.clone(),
                    Some((qx, qy)) => qy + (x - qx) * (py - qy) / (px - qx),
                };
            }
            Ordering::Greater => prev = Some((px, py)),
        }
    }
    x.clone()
}

fn show_points(points: &[(Rational, Rational)]) -> String {
    struct P<'a>(&'a [(Rational, Rational)]);
    impl fmt::Display for P<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for (i, (x, y)) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "(")?;
                fmt_rational(x, f)?;
                write!(f, " ")?;
                fmt_rational(y, f)?;
                write!(f, ")")?;
            }
            Ok(())
        }
    }
    P(points).to_string()
}

/// A finitely described automorphism of an index domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Automorphism {
    Perm(PlainPerm),
    Pl(PlMap),
    /// Row-wise permutations of `ω × ω`; rows not listed are fixed.
    Prod(BTreeMap<u64, PlainPerm>),
}

impl Default for Automorphism {
    fn default() -> Self {
        Automorphism::identity()
    }
}

impl Automorphism {
    pub fn identity() -> Self {
        Automorphism::Perm(PlainPerm::identity())
    }

    pub fn swap(a: u64, b: u64) -> Self {
        Automorphism::Perm(PlainPerm::swap(a, b))
    }

    pub fn pl(points: Vec<(Rational, Rational)>) -> Result<Self> {
        Ok(Automorphism::Pl(PlMap::new(points, None)?).normalized())
    }

    pub fn prod<I: IntoIterator<Item = (u64, PlainPerm)>>(rows: I) -> Self {
        Automorphism::Prod(rows.into_iter().filter(|(_, p)| !p.is_identity()).collect())
            .normalized()
    }

    /// Every identity datum is represented by the same value, so that
    /// structural equality and ordering are extensional across variants.
    pub fn normalized(self) -> Self {
        if self.is_identity() {
            Automorphism::identity()
        } else {
            self
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Automorphism::Perm(p) => p.is_identity(),
            Automorphism::Pl(m) => m.is_identity(),
            Automorphism::Prod(rows) => rows.values().all(PlainPerm::is_identity),
        }
    }

    pub fn is_order_preserving(&self) -> bool {
        self.is_identity() || matches!(self, Automorphism::Pl(_))
    }

    pub fn apply_point(&self, x: &OrderPoint) -> Result<OrderPoint> {
        if self.is_identity() {
            return Ok(x.clone());
        }
        match (self, x) {
            (Automorphism::Perm(p), OrderPoint::Nat(n)) => Ok(OrderPoint::Nat(p.apply(*n))),
            (Automorphism::Pl(m), OrderPoint::Rat(q)) if m.block.is_none() => {
                Ok(OrderPoint::Rat(m.eval(q)))
            }
            (Automorphism::Pl(m), OrderPoint::Lex(b, q)) => {
                if m.block.is_none_or(|mb| mb == *b) {
                    Ok(OrderPoint::Lex(*b, m.eval(q)))
                } else {
                    Ok(x.clone())
                }
            }
            (Automorphism::Prod(rows), OrderPoint::Prod(r, c)) => {
                let c = rows.get(r).map_or(*c, |p| p.apply(*c));
                Ok(OrderPoint::Prod(*r, c))
            }
            _ => Err(mismatch(self, x)),
        }
    }

    /// `self ∘ other`: `compose(π, σ)(x) = π(σ(x))`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.is_identity() {
            return Ok(other.clone());
        }
        if other.is_identity() {
            return Ok(self.clone());
        }
        match (self, other) {
            (Automorphism::Perm(a), Automorphism::Perm(b)) => Ok(Automorphism::Perm(a.compose(b))),
            (Automorphism::Pl(a), Automorphism::Pl(b)) => {
                Ok(Automorphism::Pl(a.compose(b)?).normalized())
            }
            (Automorphism::Prod(a), Automorphism::Prod(b)) => {
                let rows: BTreeSet<u64> = a.keys().chain(b.keys()).copied().collect();
                let id = PlainPerm::identity();
                Ok(Automorphism::prod(rows.into_iter().map(|r| {
                    let pa = a.get(&r).unwrap_or(&id);
                    let pb = b.get(&r).unwrap_or(&id);
                    (r, pa.compose(pb))
                })))
            }
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        match self {
            Automorphism::Perm(p) => Automorphism::Perm(p.inverse()),
            Automorphism::Pl(m) => Automorphism::Pl(m.inverse()),
            Automorphism::Prod(rows) => {
                Automorphism::Prod(rows.iter().map(|(r, p)| (*r, p.inverse())).collect())
            }
        }
    }

    /// `π σ π⁻¹`.
    pub fn conjugate(&self, sigma: &Automorphism) -> Result<Automorphism> {
        self.compose(sigma)?.compose(&self.inverse())
    }

    /// Whether the automorphism fixes every point of `cut`.
    ///
    /// For a piecewise linear map and an initial segment this is decided
    /// from the support interval: the canonical form moves every point
    /// strictly inside it.
    pub fn fixes_cut(&self, cut: &Cut) -> Result<bool> {
        if self.is_identity() {
            return Ok(true);
        }
        match cut {
            Cut::FiniteSet(points) => {
                for x in points {
                    if self.apply_point(x)? != *x {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Cut::InitialSegment { bound, .. } => {
                cut.validate()?;
                let Automorphism::Pl(m) = self else {
                    return Err(mismatch(self, cut));
                };
                let (lo, _) = m
                    .support_interval()
                    .expect("non-identity map has breakpoints");
                match (bound, m.block) {
                    (OrderPoint::Rat(q), None) => Ok(q <= lo),
                    (OrderPoint::Rat(_), Some(_)) => Err(mismatch(self, cut)),
                    (OrderPoint::Lex(c, q), Some(b)) => Ok(match b.cmp(c) {
                        Ordering::Less => false,
                        Ordering::Equal => q <= lo,
                        Ordering::Greater => true,
                    }),
                    (OrderPoint::Lex(c, q), None) => Ok(*c == 0 && q <= lo),
                    _ => Err(mismatch(self, cut)),
                }
            }
        }
    }

    /// Whether the automorphism is the identity on every point `x` with
    /// `x <= lo` or `x >= hi`.
    pub fn is_identity_outside(&self, lo: &OrderPoint, hi: &OrderPoint) -> Result<bool> {
        if self.is_identity() {
            return Ok(true);
        }
        match self {
            Automorphism::Perm(p) => {
                for m in p.support() {
                    let x = OrderPoint::Nat(m);
                    if !(lo.less_than(&x)? && x.less_than(hi)?) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Automorphism::Prod(rows) => {
                for (r, p) in rows {
                    for c in p.support() {
                        let x = OrderPoint::Prod(*r, c);
                        if !(lo.less_than(&x)? && x.less_than(hi)?) {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            Automorphism::Pl(m) => {
                let (a, b) = m
                    .support_interval()
                    .expect("non-identity map has breakpoints");
                let blocks: Vec<Option<u64>> = match (m.block, lo) {
                    (Some(bl), _) => vec![Some(bl)],
                    (None, OrderPoint::Rat(_)) => vec![None],
                    (None, OrderPoint::Lex(..)) => {
                        // acts in every block, so the confinement must allow all of them
                        return Ok(false);
                    }
                    _ => return Err(mismatch(self, lo)),
                };
                for bl in blocks {
                    let (pa, pb) = match bl {
                        None => (OrderPoint::Rat(a.clone()), OrderPoint::Rat(b.clone())),
                        Some(bl) => (
                            OrderPoint::Lex(bl, a.clone()),
                            OrderPoint::Lex(bl, b.clone()),
                        ),
                    };
                    if lo.compare(&pa)? == Ordering::Greater || pb.compare(hi)? == Ordering::Greater
                    {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

impl fmt::Display for PlainPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(perm")?;
        for (a, b) in self.pairs() {
            write!(f, " ({a} {b})")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(pl")?;
        if let Some(b) = self.block {
            write!(f, " (block {b})")?;
        }
        if !self.points.is_empty() {
            write!(f, " {}", show_points(&self.points))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Automorphism::Perm(p) => write!(f, "{p}"),
            Automorphism::Pl(m) => write!(f, "{m}"),
            Automorphism::Prod(rows) => {
                write!(f, "(prodperm")?;
                for (r, p) in rows {
                    write!(f, " (row {r} {p})")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl serde::Serialize for Automorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Free-function form of [`Automorphism::apply_point`].
pub fn apply_point(pi: &Automorphism, x: &OrderPoint) -> Result<OrderPoint> {
    pi.apply_point(x)
}

pub fn compose(pi: &Automorphism, sigma: &Automorphism) -> Result<Automorphism> {
    pi.compose(sigma)
}

pub fn invert(pi: &Automorphism) -> Automorphism {
    pi.inverse()
}
