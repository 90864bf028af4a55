use std::fmt;

use crate::error::{Error, Result};
use crate::name::Name;

/// Quantifier-free formulas over names. `IsFunctionOn` and `ValueIn` are
/// macros whose bounded quantifiers range over the second components that
/// can be read off the function name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Elem(Name, Name),
    Eq(Name, Name),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `f` is single valued and total on every listed name.
    IsFunctionOn(Name, Vec<Name>),
    /// `f(x) ∈ a`.
    ValueIn(Name, Name, Name),
}

impl Formula {
    pub fn elem(a: Name, b: Name) -> Formula {
        Formula::Elem(a, b)
    }

    pub fn eq(a: Name, b: Name) -> Formula {
        Formula::Eq(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `∅ ∈ ∅`.
    pub fn falsum() -> Formula {
        Formula::elem(Name::check_nat(0), Name::check_nat(0))
    }

    pub fn verum() -> Formula {
        Formula::not(Formula::falsum())
    }

    pub fn conj<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(Formula::verum)
    }

    pub fn disj<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        fs.into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(Formula::falsum)
    }

    /// Number of nested connectives.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Elem(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.depth() + 1,
            Formula::And(a, b) | Formula::Or(a, b) => a.depth().max(b.depth()) + 1,
            Formula::IsFunctionOn(..) | Formula::ValueIn(..) => 1,
        }
    }

    /// Rewrites the macros into the basic connectives.
    pub fn expand(&self) -> Result<Formula> {
        Ok(match self {
            Formula::Elem(..) | Formula::Eq(..) => self.clone(),
            Formula::Not(f) => Formula::not(f.expand()?),
            Formula::And(a, b) => Formula::and(a.expand()?, b.expand()?),
            Formula::Or(a, b) => Formula::or(a.expand()?, b.expand()?),
            Formula::IsFunctionOn(f, xs) => {
                let ys = pair_seconds(f)?;
                let mut parts = Vec::new();
                for x in xs {
                    let has =
                        |y: &Name| Formula::elem(Name::opair(x.clone(), y.clone()), f.clone());
                    parts.push(Formula::disj(ys.iter().map(has)));
                    for (i, y) in ys.iter().enumerate() {
                        for z in &ys[i + 1..] {
                            parts.push(Formula::or(
                                Formula::not(Formula::and(has(y), has(z))),
                                Formula::eq(y.clone(), z.clone()),
                            ));
                        }
                    }
                }
                Formula::conj(parts)
            }
            Formula::ValueIn(f, x, a) => {
                let ys = pair_seconds(f)?;
                Formula::disj(ys.into_iter().map(|y| {
                    Formula::and(
                        Formula::elem(Name::opair(x.clone(), y.clone()), f.clone()),
                        Formula::elem(y, a.clone()),
                    )
                }))
            }
        })
    }
}

/// Second components of the pair names a function name is built from.
pub fn pair_seconds(f: &Name) -> Result<Vec<Name>> {
    let unsupported = || Error::UnsupportedFormula(format!("cannot read the pairs of {f}"));
    let mut out = Vec::new();
    let mut push = |n: &Name| match n {
        Name::OPair(_, b) => {
            if !out.contains(b.as_ref()) {
                out.push(b.as_ref().clone());
            }
            Ok(())
        }
        _ => Err(unsupported()),
    };
    match f {
        Name::Bullet(elems) => elems.iter().try_for_each(&mut push)?,
        Name::Raw(entries) => entries.iter().try_for_each(|(_, n)| push(n))?,
        Name::Mix(branches) => {
            for (_, n) in branches {
                for y in pair_seconds(n)? {
                    if !out.contains(&y) {
                        out.push(y);
                    }
                }
            }
        }
        Name::Restrict(inner, _) => return pair_seconds(inner),
        Name::Based(b) => return Ok((0..b.bound).map(Name::check_nat).collect()),
        _ => return Err(unsupported()),
    }
    Ok(out)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Elem(a, b) => write!(f, "(elem {a} {b})"),
            Formula::Eq(a, b) => write!(f, "(eq {a} {b})"),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::IsFunctionOn(g, xs) => {
                write!(f, "(isfun {g} (")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "))")
            }
            Formula::ValueIn(g, x, a) => write!(f, "(valuein {g} {x} {a})"),
        }
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
