//! Linear orders and index domains carrying the forcing coordinates.
//!
//! Four kinds of points are supported: naturals, exact rationals, points of
//! a lexicographic product `λ × ℚ` with finitely many blocks, and points of
//! the row/column domain `ω × ω`. Comparison is only defined within one kind.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{mismatch, Error, Result};

pub type Rational = BigRational;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// A coordinate of the forcing.
///
/// The derived `Ord` is a storage order (variant first) used for map keys and
/// canonical forms; the domain order is [`OrderPoint::compare`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderPoint {
    Nat(u64),
    Rat(Rational),
    Lex(u64, Rational),
    Prod(u64, u64),
}

impl OrderPoint {
    pub fn rat(num: i64, den: i64) -> Self {
        OrderPoint::Rat(rat(num, den))
    }

    pub fn lex(block: u64, num: i64, den: i64) -> Self {
        OrderPoint::Lex(block, rat(num, den))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            OrderPoint::Nat(_) => "nat",
            OrderPoint::Rat(_) => "rat",
            OrderPoint::Lex(..) => "lex",
            OrderPoint::Prod(..) => "prod",
        }
    }

    pub fn same_kind(&self, other: &OrderPoint) -> bool {
        self.kind() == other.kind()
    }

    /// Total order within one variant. `Lex` compares the block first and
    /// `Prod` compares the row first.
    pub fn compare(&self, other: &OrderPoint) -> Result<Ordering> {
        use OrderPoint::*;
        match (self, other) {
            (Nat(a), Nat(b)) => Ok(a.cmp(b)),
            (Rat(a), Rat(b)) => Ok(a.cmp(b)),
            (Lex(a, p), Lex(b, q)) => Ok(a.cmp(b).then_with(|| p.cmp(q))),
            (Prod(r, c), Prod(s, d)) => Ok(r.cmp(s).then_with(|| c.cmp(d))),
            _ => Err(mismatch(self, other)),
        }
    }

    pub fn less_than(&self, other: &OrderPoint) -> Result<bool> {
        Ok(self.compare(other)? == Ordering::Less)
    }

    /// A point strictly between `self` and `other` in a dense order.
    ///
    /// Within one block this is the midpoint. Across blocks the result is
    /// `self` shifted up by one inside its own block.
    pub fn between(&self, other: &OrderPoint) -> Result<OrderPoint> {
        use OrderPoint::*;
        if self.compare(other)? != Ordering::Less {
            return Err(Error::NoPointBetween(self.to_string(), other.to_string()));
        }
        match (self, other) {
            (Rat(a), Rat(b)) => Ok(Rat((a + b) / int(2))),
            (Lex(i, a), Lex(j, b)) if i == j => Ok(Lex(*i, (a + b) / int(2))),
            (Lex(i, a), Lex(_, _)) => Ok(Lex(*i, a + int(1))),
            _ => Err(Error::NoPointBetween(self.to_string(), other.to_string())),
        }
    }

    /// The rational coordinate of a dense point.
    pub fn rational(&self) -> Option<&Rational> {
        match self {
            OrderPoint::Rat(q) | OrderPoint::Lex(_, q) => Some(q),
            _ => None,
        }
    }
}

impl fmt::Display for OrderPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderPoint::Nat(n) => write!(f, "n:{n}"),
            OrderPoint::Rat(q) => {
                write!(f, "q:")?;
                fmt_rational(q, f)
            }
            OrderPoint::Lex(b, q) => {
                write!(f, "lex:{b},")?;
                fmt_rational(q, f)
            }
            OrderPoint::Prod(r, c) => write!(f, "prod:{r},{c}"),
        }
    }
}

impl FromStr for OrderPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("bad point `{s}`"),
        };
        let (tag, body) = s.split_once(':').ok_or_else(bad)?;
        match tag {
            "n" => body.parse().map(OrderPoint::Nat).map_err(|_| bad()),
            "q" => parse_rational(body).map(OrderPoint::Rat).ok_or_else(bad),
            "lex" => {
                let (b, q) = body.split_once(',').ok_or_else(bad)?;
                let b = b.parse().map_err(|_| bad())?;
                let q = parse_rational(q).ok_or_else(bad)?;
                Ok(OrderPoint::Lex(b, q))
            }
            "prod" => {
                let (r, c) = body.split_once(',').ok_or_else(bad)?;
                Ok(OrderPoint::Prod(
                    r.parse().map_err(|_| bad())?,
                    c.parse().map_err(|_| bad())?,
                ))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for OrderPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The index set `X` of `Add(ω, X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexDomain {
    /// Naturals below `size`, or all naturals.
    Plain(Option<u64>),
    Dlo,
    LexDlo(u64),
    ProdOmega(Option<u64>),
}

impl IndexDomain {
    pub fn admits(&self, x: &OrderPoint) -> bool {
        match (self, x) {
            (IndexDomain::Plain(size), OrderPoint::Nat(n)) => size.is_none_or(|s| *n < s),
            (IndexDomain::Dlo, OrderPoint::Rat(_)) => true,
            (IndexDomain::LexDlo(blocks), OrderPoint::Lex(b, _)) => b < blocks,
            (IndexDomain::ProdOmega(rows), OrderPoint::Prod(r, _)) => rows.is_none_or(|s| *r < s),
            _ => false,
        }
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self, IndexDomain::Dlo | IndexDomain::LexDlo(_))
    }

    /// All points of a finite plain domain.
    pub fn finite_points(&self) -> Option<Vec<OrderPoint>> {
        match self {
            IndexDomain::Plain(Some(n)) => Some((0..*n).map(OrderPoint::Nat).collect()),
            _ => None,
        }
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexDomain::Plain(None) => write!(f, "plain"),
            IndexDomain::Plain(Some(n)) => write!(f, "(plain {n})"),
            IndexDomain::Dlo => write!(f, "dlo"),
            IndexDomain::LexDlo(b) => write!(f, "(lexdlo {b})"),
            IndexDomain::ProdOmega(None) => write!(f, "prodomega"),
            IndexDomain::ProdOmega(Some(r)) => write!(f, "(prodomega {r})"),
        }
    }
}

/// A support: a finite set of coordinates or a bounded initial segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cut {
    FiniteSet(BTreeSet<OrderPoint>),
    InitialSegment { bound: OrderPoint, inclusive: bool },
}

impl Cut {
    pub fn empty() -> Self {
        Cut::FiniteSet(BTreeSet::new())
    }

    pub fn finite<I: IntoIterator<Item = OrderPoint>>(points: I) -> Self {
        Cut::FiniteSet(points.into_iter().collect())
    }

    pub fn upto(bound: OrderPoint) -> Self {
        Cut::InitialSegment {
            bound,
            inclusive: true,
        }
    }

    pub fn below(bound: OrderPoint) -> Self {
        Cut::InitialSegment {
            bound,
            inclusive: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Cut::InitialSegment { bound, .. } = self {
            if bound.rational().is_none() {
                return Err(Error::VariantMismatch(format!(
                    "initial segment needs an ordered point, got {bound}"
                )));
            }
        }
        Ok(())
    }

    /// Membership of `x` in the cut.
    pub fn contains(&self, x: &OrderPoint) -> Result<bool> {
        match self {
            Cut::FiniteSet(points) => {
                if let Some(p) = points.iter().next() {
                    if !p.same_kind(x) {
                        return Err(mismatch(p, x));
                    }
                }
                Ok(points.contains(x))
            }
            Cut::InitialSegment { bound, inclusive } => {
                self.validate()?;
                Ok(match x.compare(bound)? {
                    Ordering::Less => true,
                    Ordering::Equal => *inclusive,
                    Ordering::Greater => false,
                })
            }
        }
    }

    pub fn as_finite(&self) -> Option<&BTreeSet<OrderPoint>> {
        match self {
            Cut::FiniteSet(s) => Some(s),
            Cut::InitialSegment { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Cut::FiniteSet(s) if s.is_empty())
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::FiniteSet(points) => {
                write!(f, "{{")?;
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "}}")
            }
            Cut::InitialSegment { bound, inclusive } => {
                write!(f, "({} {bound})", if *inclusive { "<=" } else { "<" })
            }
        }
    }
}

impl Serialize for Cut {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Free-function form of [`OrderPoint::compare`].
pub fn cmp(a: &OrderPoint, b: &OrderPoint) -> Result<Ordering> {
    a.compare(b)
}

/// Free-function form of [`OrderPoint::between`].
pub fn between(a: &OrderPoint, b: &OrderPoint) -> Result<OrderPoint> {
    a.between(b)
}

/// Free-function form of [`Cut::contains`].
pub fn cut_contains(cut: &Cut, x: &OrderPoint) -> Result<bool> {
    cut.contains(x)
}
