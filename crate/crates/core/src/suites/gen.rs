//! Seeded random generators for names, conditions and formulas over a
//! truncated poset.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::action::Condition;
use crate::forcing::{Formula, TruncatedPoset};
use crate::name::Name;
use crate::order::OrderPoint;

pub type SuiteRng = ChaCha8Rng;

/// Each key of the poset is set with probability `density`.
pub fn condition(rng: &mut SuiteRng, t: &TruncatedPoset, density: f64) -> Condition {
    let mut entries = Vec::new();
    for k in 0..t.key_count() {
        if rng.random_bool(density) {
            let (x, slot) = t.key_point(k);
            entries.push(((x.clone(), slot), rng.random_bool(0.5)));
        }
    }
    Condition::from_entries(entries).expect("keys are distinct")
}

pub fn literal(rng: &mut SuiteRng, t: &TruncatedPoset) -> ((OrderPoint, u32), bool) {
    let (x, slot) = t.key_point(rng.random_range(0..t.key_count()));
    ((x.clone(), slot), rng.random_bool(0.5))
}

fn point(rng: &mut SuiteRng, t: &TruncatedPoset) -> OrderPoint {
    t.domain().choose(rng).expect("nonempty domain").clone()
}

fn leaf(rng: &mut SuiteRng, t: &TruncatedPoset) -> Name {
    if rng.random_bool(0.5) {
        Name::check_nat(rng.random_range(0..3))
    } else {
        Name::gen(point(rng, t))
    }
}

/// A name of nesting depth at most `depth` built from every constructor
/// the engine compiles except based and precedence names.
pub fn name(rng: &mut SuiteRng, t: &TruncatedPoset, depth: usize) -> Name {
    if depth == 0 || rng.random_bool(0.25) {
        return leaf(rng, t);
    }
    let sub = |rng: &mut SuiteRng| name(rng, t, depth - 1);
    match rng.random_range(0..5) {
        0 => {
            let k = rng.random_range(0..3);
            Name::bullet((0..k).map(|_| sub(rng)).collect::<Vec<_>>())
        }
        1 => Name::opair(sub(rng), sub(rng)),
        2 => {
            let k = rng.random_range(0..3);
            Name::raw(
                (0..k)
                    .map(|_| (condition(rng, t, 0.3), sub(rng)))
                    .collect::<Vec<_>>(),
            )
        }
        3 => Name::restrict(sub(rng), condition(rng, t, 0.3)),
        _ => {
            let (key, bit) = literal(rng, t);
            let on = Condition::from_entries([(key.clone(), bit)]).expect("one key");
            let off = Condition::from_entries([(key, !bit)]).expect("one key");
            Name::mix([(on, sub(rng)), (off, sub(rng))]).expect("complementary literals")
        }
    }
}

pub fn formula(rng: &mut SuiteRng, t: &TruncatedPoset, name_depth: usize, depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.4) {
        let (a, b) = (name(rng, t, name_depth), name(rng, t, name_depth));
        return if rng.random_bool(0.5) {
            Formula::elem(a, b)
        } else {
            Formula::eq(a, b)
        };
    }
    let sub = |rng: &mut SuiteRng| formula(rng, t, name_depth, depth - 1);
    match rng.random_range(0..3) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        _ => Formula::or(sub(rng), sub(rng)),
    }
}

/// A condition incompatible with `p`: one literal of `p` flipped plus
/// random literals elsewhere. `p` must be nonempty.
pub fn incompatible(rng: &mut SuiteRng, t: &TruncatedPoset, p: &Condition) -> Condition {
    let literals: Vec<_> = p.iter().map(|(k, v)| (k.clone(), *v)).collect();
    let (flip, bit) = literals.choose(rng).expect("nonempty condition").clone();
    let mut entries = vec![(flip.clone(), !bit)];
    for (key, v) in condition(rng, t, 0.3).iter() {
        if *key != flip {
            entries.push((key.clone(), *v));
        }
    }
    Condition::from_entries(entries).expect("keys are distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generators_are_seeded() {
        let t = TruncatedPoset::plain(2, 2).unwrap();
        let draw = |seed| {
            let mut rng = SuiteRng::seed_from_u64(seed);
            (0..20)
                .map(|_| formula(&mut rng, &t, 2, 1).to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn incompatible_conditions() {
        let t = TruncatedPoset::plain(3, 2).unwrap();
        let mut rng = SuiteRng::seed_from_u64(0);
        for _ in 0..200 {
            let p = condition(&mut rng, &t, 0.4);
            if p.is_empty() {
                continue;
            }
            assert!(!incompatible(&mut rng, &t, &p).compatible(&p));
        }
    }
}
