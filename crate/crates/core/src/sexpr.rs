//! Reader for the textual syntax every value prints in. Errors carry the
//! byte offset of the offending token.

use std::collections::{BTreeMap, BTreeSet};

use crate::action::{Automorphism, Condition, GroupDesc, PlMap, PlainPerm, SupportIdeal};
use crate::error::{Error, Result};
use crate::forcing::Formula;
use crate::hf::HfSet;
use crate::models::{ASCode, BasedFn, SeqCode};
use crate::name::Name;
use crate::order::{parse_rational, Cut, IndexDomain, OrderPoint, Rational};

/// A parsed s-expression. `Set` is the brace form `{a, b}` used for
/// finite supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
    Set(Vec<Sexp>, usize),
}

impl Sexp {
    pub fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) | Sexp::Set(_, p) => *p,
        }
    }

    fn atom(&self) -> Result<&str> {
        match self {
            Sexp::Atom(s, _) => Ok(s),
            _ => Err(err(self.pos(), "expected an atom")),
        }
    }

    fn list(&self) -> Result<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Ok(items),
            _ => Err(err(self.pos(), "expected a parenthesized list")),
        }
    }

    /// The items of a list whose first element is the keyword `head`.
    fn tagged(&self, head: &str) -> Result<&[Sexp]> {
        let items = self.list()?;
        match items.first() {
            Some(Sexp::Atom(h, _)) if h == head => Ok(&items[1..]),
            _ => Err(err(self.pos(), &format!("expected ({head} ...)"))),
        }
    }

    fn head(&self) -> Option<&str> {
        match self {
            Sexp::List(items, _) => match items.first() {
                Some(Sexp::Atom(h, _)) => Some(h),
                _ => None,
            },
            _ => None,
        }
    }
}

fn err(pos: usize, msg: &str) -> Error {
    Error::Parse {
        pos,
        msg: msg.to_string(),
    }
}

/// Reads exactly one expression from `input`.
pub fn read(input: &str) -> Result<Sexp> {
    let mut r = Reader {
        src: input.as_bytes(),
        pos: 0,
    };
    let e = r.expr()?;
    r.skip_ws();
    if r.pos < r.src.len() {
        return Err(err(r.pos, "trailing input"));
    }
    Ok(e)
}

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Sexp> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            None => Err(err(start, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                Ok(Sexp::List(self.items(b')')?, start))
            }
            Some(b'{') => {
                self.pos += 1;
                Ok(Sexp::Set(self.items(b'}')?, start))
            }
            Some(b')') | Some(b'}') => Err(err(start, "unbalanced closing bracket")),
            Some(_) => {
                while self.pos < self.src.len()
                    && !self.src[self.pos].is_ascii_whitespace()
                    && !b"(){}".contains(&self.src[self.pos])
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| err(start, "invalid UTF-8"))?;
                // a trailing comma separates members of a brace set
                Ok(Sexp::Atom(
                    text.strip_suffix(',').unwrap_or(text).to_string(),
                    start,
                ))
            }
        }
    }

    fn items(&mut self, close: u8) -> Result<Vec<Sexp>> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                None => return Err(err(self.pos, "unclosed bracket")),
                Some(c) if *c == close => {
                    self.pos += 1;
                    return Ok(items);
                }
                Some(_) => items.push(self.expr()?),
            }
        }
    }
}

fn nat(e: &Sexp) -> Result<u64> {
    e.atom()?
        .parse()
        .map_err(|_| err(e.pos(), "expected a natural number"))
}

fn rational(e: &Sexp) -> Result<Rational> {
    parse_rational(e.atom()?).ok_or_else(|| err(e.pos(), "expected a rational"))
}

fn bit(e: &Sexp) -> Result<bool> {
    match e.atom()? {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(err(e.pos(), "expected 0 or 1")),
    }
}

fn located<T>(pos: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => err(pos, &other.to_string()),
    })
}

fn arity(e: &Sexp, args: &[Sexp], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(err(
            e.pos(),
            &format!("expected {n} arguments, found {}", args.len()),
        ));
    }
    Ok(())
}

pub fn point(e: &Sexp) -> Result<OrderPoint> {
    e.atom()?.parse().map_err(|x| match x {
        Error::Parse { pos, msg } => err(e.pos() + pos, &msg),
        other => err(e.pos(), &other.to_string()),
    })
}

pub fn hf(e: &Sexp) -> Result<HfSet> {
    match e {
        Sexp::Atom(..) => Ok(HfSet::nat(nat(e)?)),
        _ => Ok(HfSet::from_members(
            e.tagged("set")?
                .iter()
                .map(hf)
                .collect::<Result<Vec<_>>>()?,
        )),
    }
}

pub fn domain(e: &Sexp) -> Result<IndexDomain> {
    match e {
        Sexp::Atom(s, _) => match s.as_str() {
            "plain" => Ok(IndexDomain::Plain(None)),
            "dlo" => Ok(IndexDomain::Dlo),
            "prodomega" => Ok(IndexDomain::ProdOmega(None)),
            _ => Err(err(e.pos(), "unknown index domain")),
        },
        _ => {
            let items = e.list()?;
            arity(e, items, 2)?;
            let n = nat(&items[1])?;
            match items[0].atom()? {
                "plain" => Ok(IndexDomain::Plain(Some(n))),
                "lexdlo" => Ok(IndexDomain::LexDlo(n)),
                "prodomega" => Ok(IndexDomain::ProdOmega(Some(n))),
                _ => Err(err(e.pos(), "unknown index domain")),
            }
        }
    }
}

fn plain_perm(e: &Sexp) -> Result<PlainPerm> {
    let pairs = e
        .tagged("perm")?
        .iter()
        .map(|p| {
            let xy = p.list()?;
            arity(p, xy, 2)?;
            Ok((nat(&xy[0])?, nat(&xy[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    located(e.pos(), PlainPerm::new(pairs))
}

pub fn automorphism(e: &Sexp) -> Result<Automorphism> {
    match e.head() {
        Some("perm") => Ok(Automorphism::Perm(plain_perm(e)?).normalized()),
        Some("pl") => {
            let mut block = None;
            let mut points = Vec::new();
            for item in e.tagged("pl")? {
                if item.head() == Some("block") {
                    let b = item.tagged("block")?;
                    arity(item, b, 1)?;
                    block = Some(nat(&b[0])?);
                } else {
                    let xy = item.list()?;
                    arity(item, xy, 2)?;
                    points.push((rational(&xy[0])?, rational(&xy[1])?));
                }
            }
            Ok(Automorphism::Pl(located(e.pos(), PlMap::new(points, block))?).normalized())
        }
        Some("prodperm") => {
            let rows = e
                .tagged("prodperm")?
                .iter()
                .map(|row| {
                    let r = row.tagged("row")?;
                    arity(row, r, 2)?;
                    Ok((nat(&r[0])?, plain_perm(&r[1])?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Automorphism::prod(rows))
        }
        _ => Err(err(
            e.pos(),
            "expected an automorphism: (perm ...), (pl ...) or (prodperm ...)",
        )),
    }
}

pub fn condition(e: &Sexp) -> Result<Condition> {
    let entries = e
        .tagged("cond")?
        .iter()
        .map(|entry| {
            let kv = entry.list()?;
            arity(entry, kv, 2)?;
            let key = kv[0].list()?;
            arity(&kv[0], key, 2)?;
            let slot =
                u32::try_from(nat(&key[1])?).map_err(|_| err(key[1].pos(), "slot too large"))?;
            Ok(((point(&key[0])?, slot), bit(&kv[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    located(e.pos(), Condition::from_entries(entries))
}

fn entries(args: &[Sexp]) -> Result<Vec<(Condition, Name)>> {
    args.iter()
        .map(|entry| {
            let pn = entry.list()?;
            arity(entry, pn, 2)?;
            Ok((condition(&pn[0])?, name(&pn[1])?))
        })
        .collect()
}

pub fn based(e: &Sexp) -> Result<BasedFn> {
    let items = e.tagged("based")?;
    let field = |i: usize, key: &str| -> Result<u64> {
        let item = items
            .get(i)
            .ok_or_else(|| err(e.pos(), &format!("missing ({key} n)")))?;
        let v = item.tagged(key)?;
        arity(item, v, 1)?;
        nat(&v[0])
    };
    let bound = field(0, "bound")?;
    let top = field(1, "top")?;
    let steps = items[2..]
        .iter()
        .map(|item| {
            let pv = item.tagged("pt")?;
            arity(item, pv, 2)?;
            Ok((point(&pv[0])?, nat(&pv[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BasedFn::new(bound, top, steps))
}

pub fn name(e: &Sexp) -> Result<Name> {
    let Some(head) = e.head() else {
        return Err(err(e.pos(), "expected a name"));
    };
    let args = &e.list()?[1..];
    match head {
        "check" => {
            arity(e, args, 1)?;
            Ok(Name::check(hf(&args[0])?))
        }
        "gen" => {
            arity(e, args, 1)?;
            Ok(Name::gen(point(&args[0])?))
        }
        "bullet" => Ok(Name::bullet(
            args.iter().map(name).collect::<Result<Vec<_>>>()?,
        )),
        "opair" => {
            arity(e, args, 2)?;
            Ok(Name::opair(name(&args[0])?, name(&args[1])?))
        }
        "raw" => Ok(Name::raw(entries(args)?)),
        "restrict" => {
            arity(e, args, 2)?;
            Ok(Name::restrict(name(&args[0])?, condition(&args[1])?))
        }
        "mix" => located(e.pos(), Name::mix(entries(args)?)),
        "based" => Ok(Name::based(based(e)?)),
        "prec" => {
            arity(e, args, 1)?;
            Ok(Name::prec(domain(&args[0])?))
        }
        other => Err(err(e.pos(), &format!("unknown name constructor `{other}`"))),
    }
}

pub fn formula(e: &Sexp) -> Result<Formula> {
    let Some(head) = e.head() else {
        return Err(err(e.pos(), "expected a formula"));
    };
    let args = &e.list()?[1..];
    let two = |f: fn(&Sexp) -> Result<Name>| -> Result<(Name, Name)> {
        arity(e, args, 2)?;
        Ok((f(&args[0])?, f(&args[1])?))
    };
    match head {
        "elem" => two(name).map(|(a, b)| Formula::elem(a, b)),
        "eq" => two(name).map(|(a, b)| Formula::eq(a, b)),
        "not" => {
            arity(e, args, 1)?;
            Ok(Formula::not(formula(&args[0])?))
        }
        "and" | "or" => {
            arity(e, args, 2)?;
            let (a, b) = (formula(&args[0])?, formula(&args[1])?);
            Ok(if head == "and" {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            })
        }
        "isfun" => {
            arity(e, args, 2)?;
            let xs = args[1]
                .list()?
                .iter()
                .map(name)
                .collect::<Result<Vec<_>>>()?;
            Ok(Formula::IsFunctionOn(name(&args[0])?, xs))
        }
        "valuein" => {
            arity(e, args, 3)?;
            Ok(Formula::ValueIn(
                name(&args[0])?,
                name(&args[1])?,
                name(&args[2])?,
            ))
        }
        other => Err(err(e.pos(), &format!("unknown connective `{other}`"))),
    }
}

pub fn cut(e: &Sexp) -> Result<Cut> {
    match e {
        Sexp::Set(items, _) => Ok(Cut::FiniteSet(
            items.iter().map(point).collect::<Result<_>>()?,
        )),
        Sexp::List(items, _) if items.len() == 2 => {
            let bound = point(&items[1])?;
            let c = match items[0].atom()? {
                "<=" => Cut::upto(bound),
                "<" => Cut::below(bound),
                _ => return Err(err(e.pos(), "expected (<= x) or (< x)")),
            };
            located(e.pos(), c.validate())?;
            Ok(c)
        }
        _ => Err(err(e.pos(), "expected a cut: {x, ...}, (<= x) or (< x)")),
    }
}

pub fn group(e: &Sexp) -> Result<GroupDesc> {
    let Some(head) = e.head() else {
        return Err(err(e.pos(), "expected a group"));
    };
    let args = &e.list()?[1..];
    match head {
        "full" | "orderaut" => {
            arity(e, args, 1)?;
            let d = domain(&args[0])?;
            Ok(if head == "full" {
                GroupDesc::FullGroup(d)
            } else {
                GroupDesc::FullOrderAut(d)
            })
        }
        "fix" => {
            arity(e, args, 1)?;
            Ok(GroupDesc::Fix(cut(&args[0])?))
        }
        "generated" => Ok(GroupDesc::Generated(
            args.iter().map(automorphism).collect::<Result<_>>()?,
        )),
        "intersect" => Ok(GroupDesc::Intersection(
            args.iter().map(group).collect::<Result<_>>()?,
        )),
        other => Err(err(e.pos(), &format!("unknown group `{other}`"))),
    }
}

pub fn ideal(e: &Sexp) -> Result<SupportIdeal> {
    match e {
        Sexp::Atom(s, _) if s == "finite-sets" => Ok(SupportIdeal::FiniteSets),
        Sexp::Atom(s, _) if s == "bounded-cuts" => Ok(SupportIdeal::BoundedCuts),
        _ => {
            let members = e
                .tagged("listed")?
                .iter()
                .map(|m| match cut(m)? {
                    Cut::FiniteSet(s) => Ok(s),
                    _ => Err(err(m.pos(), "listed members are finite sets")),
                })
                .collect::<Result<_>>()?;
            Ok(SupportIdeal::Listed(members))
        }
    }
}

pub fn seq_code(e: &Sexp) -> Result<SeqCode> {
    let items = e.tagged("seq")?;
    let tag = items
        .first()
        .ok_or_else(|| err(e.pos(), "missing (tag n)"))?;
    let t = tag.tagged("tag")?;
    arity(tag, t, 1)?;
    Ok(SeqCode::new(
        nat(&t[0])?,
        items[1..].iter().map(nat).collect::<Result<_>>()?,
    ))
}

pub fn as_code(e: &Sexp) -> Result<ASCode> {
    let items = e.tagged("ascode")?;
    let s_item = items
        .first()
        .ok_or_else(|| err(e.pos(), "missing (s ...)"))?;
    let s: BTreeSet<u64> = s_item.tagged("s")?.iter().map(nat).collect::<Result<_>>()?;
    let mut rows = BTreeMap::new();
    for row in &items[1..] {
        let r = row.tagged("row")?;
        arity(row, r, 2)?;
        let values = r[1].list()?.iter().map(nat).collect::<Result<Vec<_>>>()?;
        if rows.insert(nat(&r[0])?, values).is_some() {
            return Err(err(row.pos(), "row listed twice"));
        }
    }
    if rows.keys().copied().collect::<BTreeSet<_>>() != s {
        return Err(err(e.pos(), "rows must be exactly the listed set"));
    }
    Ok(ASCode::new(rows))
}

pub fn parse_name(input: &str) -> Result<Name> {
    name(&read(input)?)
}

pub fn parse_automorphism(input: &str) -> Result<Automorphism> {
    automorphism(&read(input)?)
}

pub fn parse_condition(input: &str) -> Result<Condition> {
    condition(&read(input)?)
}

pub fn parse_formula(input: &str) -> Result<Formula> {
    formula(&read(input)?)
}

pub fn parse_cut(input: &str) -> Result<Cut> {
    cut(&read(input)?)
}

pub fn parse_group(input: &str) -> Result<GroupDesc> {
    group(&read(input)?)
}

pub fn parse_ideal(input: &str) -> Result<SupportIdeal> {
    ideal(&read(input)?)
}

pub fn parse_based(input: &str) -> Result<BasedFn> {
    based(&read(input)?)
}

pub fn parse_as_code(input: &str) -> Result<ASCode> {
    as_code(&read(input)?)
}

pub fn parse_seq_code(input: &str) -> Result<SeqCode> {
    seq_code(&read(input)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::rat;
    use proptest::prelude::*;

    #[test]
    fn reads_names() {
        let n = parse_name("(bullet (gen n:0) (gen n:1))").unwrap();
        assert_eq!(
            n,
            Name::bullet([Name::gen(OrderPoint::Nat(0)), Name::gen(OrderPoint::Nat(1))])
        );
        let r = parse_name("(raw ((cond ((n:0 3) 0) ((n:1 0) 1)) (check (set 0 2))))").unwrap();
        assert_eq!(parse_name(&r.to_string()).unwrap(), r);
        let b = "(based (bound 6) (top 5) (pt q:0 4) (pt q:1 1) (pt q:5 0))";
        assert_eq!(parse_name(b).unwrap().to_string(), b);
        assert_eq!(
            parse_name("(prec (lexdlo 2))").unwrap().to_string(),
            "(prec (lexdlo 2))"
        );
    }

    #[test]
    fn reads_automorphisms() {
        assert_eq!(
            parse_automorphism("(perm (0 1) (1 0))").unwrap(),
            Automorphism::swap(0, 1)
        );
        assert!(parse_automorphism("(perm)").unwrap().is_identity());
        let pl = parse_automorphism("(pl (0 0) (1 2) (3 3))").unwrap();
        assert_eq!(
            pl,
            Automorphism::pl(vec![
                (rat(0, 1), rat(0, 1)),
                (rat(1, 1), rat(2, 1)),
                (rat(3, 1), rat(3, 1))
            ])
            .unwrap()
        );
        let lex = parse_automorphism("(pl (block 1) (0 0) (1/2 3/4) (1 1))").unwrap();
        assert_eq!(parse_automorphism(&lex.to_string()).unwrap(), lex);
        let prod = parse_automorphism("(prodperm (row 2 (perm (0 1) (1 0))))").unwrap();
        assert_eq!(prod.to_string(), "(prodperm (row 2 (perm (0 1) (1 0))))");
        assert!(matches!(
            parse_automorphism("(pl (0 1) (1 0))"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn reads_other_forms() {
        assert_eq!(
            parse_cut("{n:0, n:1}").unwrap(),
            Cut::finite([OrderPoint::Nat(0), OrderPoint::Nat(1)])
        );
        assert_eq!(
            parse_cut("{prod:0,1, prod:0,2}").unwrap().to_string(),
            "{prod:0,1, prod:0,2}"
        );
        assert_eq!(
            parse_cut("(<= q:1/2)").unwrap(),
            Cut::upto(OrderPoint::rat(1, 2))
        );
        let f = "(or (not (elem (check 0) (gen n:0))) (isfun (bullet) ((check 1))))";
        assert_eq!(parse_formula(f).unwrap().to_string(), f);
        let g = "(intersect (full plain) (fix {n:0}) (generated (perm (0 1) (1 0))))";
        assert_eq!(parse_group(g).unwrap().to_string(), g);
        let a = "(ascode (s 0 2) (row 0 (1 0 1)) (row 2 (0 0 0)))";
        assert_eq!(parse_as_code(a).unwrap().to_string(), a);
        assert!(parse_as_code("(ascode (s 0) (row 1 (1)))").is_err());
        assert_eq!(
            parse_seq_code("(seq (tag 3) 1 2)").unwrap(),
            SeqCode::new(3, vec![1, 2])
        );
        assert_eq!(
            parse_ideal("(listed {n:0} {})").unwrap().to_string(),
            "listed[{n:0}, {}]"
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_name("(bullet (gen n:0) (frob))") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 18),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_name("(gen n:0"),
            Err(Error::Parse { pos: 8, .. })
        ));
        assert!(matches!(
            parse_name("(gen n:0))"),
            Err(Error::Parse { pos: 9, .. })
        ));
        assert!(matches!(
            parse_name("(gen x:0)"),
            Err(Error::Parse { pos: 5, .. })
        ));
        assert!(matches!(
            parse_name("(mix ((cond) (check 0)) ((cond) (check 1)))"),
            Err(Error::Parse { pos: 0, .. })
        ));
    }

    fn arb_point() -> impl Strategy<Value = OrderPoint> {
        prop_oneof![
            (0u64..5).prop_map(OrderPoint::Nat),
            (-9i64..9, 1i64..4).prop_map(|(n, d)| OrderPoint::rat(n, d)),
            (0u64..3, -9i64..9, 1i64..4).prop_map(|(b, n, d)| OrderPoint::lex(b, n, d)),
            (0u64..3, 0u64..3).prop_map(|(r, c)| OrderPoint::Prod(r, c)),
        ]
    }

    fn arb_condition() -> impl Strategy<Value = Condition> {
        proptest::collection::btree_map((arb_point(), 0u32..3), any::<bool>(), 0..3)
            .prop_map(|m| Condition::from_entries(m).unwrap())
    }

    fn arb_name() -> impl Strategy<Value = Name> {
        let leaf = prop_oneof![
            (0u64..4).prop_map(Name::check_nat),
            arb_point().prop_map(Name::gen),
            Just(Name::prec(IndexDomain::Dlo)),
        ];
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 0..3).prop_map(Name::bullet),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Name::opair(a, b)),
                proptest::collection::vec((arb_condition(), inner.clone()), 0..3)
                    .prop_map(Name::raw),
                (inner, arb_condition()).prop_map(|(n, p)| Name::restrict(n, p)),
            ]
        })
    }

    proptest! {
        #[test]
        fn names_round_trip(n in arb_name()) {
            prop_assert_eq!(parse_name(&n.to_string()).unwrap(), n);
        }

        #[test]
        fn permutations_round_trip(xs in Just((0u64..6).collect::<Vec<_>>()).prop_shuffle()) {
            let pi = Automorphism::Perm(PlainPerm::new((0u64..6).zip(xs)).unwrap()).normalized();
            prop_assert_eq!(parse_automorphism(&pi.to_string()).unwrap(), pi);
        }
    }
}
