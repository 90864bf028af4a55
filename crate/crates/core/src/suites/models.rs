use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::Rng;

use super::gen::SuiteRng;
use super::{RunConfig, Tally};
use crate::error::{Error, Result};
use crate::models::{
    deinterleave, interleave, intersect_code_law, product_based, product_code, unproduct_based,
    unproduct_code, ASCode, BasedFn, SeqCode,
};
use crate::order::OrderPoint;

const MAX_FACTOR: u64 = 5;

/// Base points are drawn from the halves in `[-4, 4]`.
fn grid_point(k: i64) -> OrderPoint {
    OrderPoint::rat(k, 2)
}

pub(super) fn random_based(rng: &mut SuiteRng, bound: u64) -> BasedFn {
    let top = rng.random_range(0..bound);
    let steps = rng.random_range(0..=top.min(4)) as usize;
    let mut values: Vec<u64> = sample(rng, top as usize, steps)
        .into_iter()
        .map(|v| v as u64)
        .collect();
    values.sort_by(|a, b| b.cmp(a));
    let mut points: Vec<i64> = sample(rng, 17, steps)
        .into_iter()
        .map(|k| k as i64 - 8)
        .collect();
    points.sort();
    BasedFn::new(
        bound,
        top,
        points.into_iter().map(grid_point).zip(values).collect(),
    )
}

/// The points where the pointwise law is checked: every base point of
/// either factor, the midpoints between consecutive ones, and one point
/// beyond each end.
fn probe_points(f: &BasedFn, g: &BasedFn) -> Vec<OrderPoint> {
    let mut qs: Vec<_> = f
        .base_points()
        .chain(g.base_points())
        .filter_map(|x| x.rational().cloned())
        .collect();
    qs.sort();
    qs.dedup();
    let mut out: Vec<OrderPoint> = qs.iter().cloned().map(OrderPoint::Rat).collect();
    for w in qs.windows(2) {
        out.push(OrderPoint::Rat((&w[0] + &w[1]) / crate::order::int(2)));
    }
    out.push(OrderPoint::rat(-100, 1));
    out.push(OrderPoint::rat(100, 1));
    out
}

/// A based function into `n·m` is a product exactly when the remainders
/// of its values mod `m` never rise.
fn in_image(h: &BasedFn, m: u64) -> bool {
    let rems: Vec<u64> = h.values().map(|v| v % m).collect();
    rems.windows(2).all(|w| w[0] >= w[1])
}

pub(super) fn model1_product(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    for n in 1..=MAX_FACTOR {
        for m in 1..=MAX_FACTOR {
            for _ in 0..cfg.cases {
                let (f, g) = (random_based(rng, n), random_based(rng, m));
                let h = product_based(&f, &g, n, m)?;
                tally.add("pairs", 1);
                tally.check(h.is_based() && h.bound == n * m, || {
                    format!("product of {f} and {g} is not based: {h}")
                });
                match unproduct_based(&h, n, m) {
                    Ok(back) => tally.check(back == (f.clone(), g.clone()), || {
                        format!("unproduct of {h} gives {} and {}", back.0, back.1)
                    }),
                    Err(e) => tally.fail(format!("unproduct of {h}: {e}")),
                }
                for x in probe_points(&f, &g) {
                    let lhs = h.eval(&x)?;
                    let rhs = m * f.eval(&x)? + g.eval(&x)?;
                    tally.add("points", 1);
                    tally.check(lhs == rhs, || {
                        format!("{h} at {x} is {lhs}, expected {rhs}")
                    });
                }

                let k = random_based(rng, n * m);
                match unproduct_based(&k, n, m) {
                    Ok((a, b)) => {
                        tally.add("image", 1);
                        let again = product_based(&a, &b, n, m)?;
                        tally.check(again == k, || format!("{k} splits and rejoins as {again}"));
                        tally.check(in_image(&k, m), || {
                            format!("{k} split although a remainder rises")
                        });
                    }
                    Err(Error::NotInImage(_)) => {
                        tally.add("outside_image", 1);
                        tally.check(!in_image(&k, m), || {
                            format!("{k} rejected but is a product")
                        });
                    }
                    Err(e) => tally.fail(format!("unproduct of {k}: {e}")),
                }
            }
        }
    }
    Ok(())
}

const ROWS: u64 = 8;

fn random_prefix(rng: &mut SuiteRng, len: usize) -> Vec<u64> {
    (0..len).map(|_| rng.random_range(0..1000)).collect()
}

fn random_rows(rng: &mut SuiteRng) -> BTreeSet<u64> {
    (0..ROWS).filter(|_| rng.random_bool(0.4)).collect()
}

pub(super) fn model2_codes(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    for _ in 0..cfg.cases {
        let len = rng.random_range(0..=32);
        let tag = rng.random_range(0..ROWS);
        let f = SeqCode::new(tag, random_prefix(rng, len));
        let g = SeqCode::new(tag, random_prefix(rng, len));
        let h = interleave(&f, &g)?;
        tally.add("interleavings", 1);
        tally.check(h.prefix.len() == 2 * len, || {
            format!("{h} has the wrong length")
        });
        let back = deinterleave(&h)?;
        tally.check(back == (f.clone(), g.clone()), || {
            format!("{f} and {g} do not round trip")
        });

        // rows shared by both codes must carry prefixes of one length
        let lens: Vec<usize> = (0..ROWS).map(|_| rng.random_range(0..=8)).collect();
        let (s, t) = (random_rows(rng), random_rows(rng));
        let code = |rng: &mut SuiteRng, rows: &BTreeSet<u64>| {
            ASCode::new(
                rows.iter()
                    .map(|r| (*r, random_prefix(rng, lens[*r as usize])))
                    .collect::<Vec<_>>(),
            )
        };
        let (a, b) = (code(rng, &s), code(rng, &t));
        let c = product_code(&a, &b)?;
        tally.add("products", 1);
        match unproduct_code(&c, &s, &t) {
            Ok(back) => tally.check(back == (a.clone(), b.clone()), || {
                format!("{a} and {b} do not round trip through {c}")
            }),
            Err(e) => tally.fail(format!("unproduct of {c}: {e}")),
        }
    }
    intersection_law(cfg, rng, tally)
}

/// Codes of every support on rows `0..8` with prefixes of length 1 to 4,
/// some padded with explicit zero rows.
fn law_codes(rng: &mut SuiteRng) -> Vec<(u32, ASCode)> {
    let mut out = Vec::new();
    for mask in 0u32..1 << ROWS {
        for len in 1..=4 {
            let mut rows = BTreeMap::new();
            for r in 0..ROWS {
                if mask >> r & 1 == 1 {
                    let mut p: Vec<u64> = (0..len).map(|_| rng.random_range(0..3)).collect();
                    let i = rng.random_range(0..len);
                    p[i] = rng.random_range(1..3);
                    rows.insert(r, p);
                } else if rng.random_bool(0.3) {
                    rows.insert(r, vec![0; len]);
                }
            }
            out.push((mask, ASCode::new(rows)));
        }
    }
    out
}

fn subset(mask: u32) -> BTreeSet<u64> {
    (0..ROWS).filter(|r| mask >> r & 1 == 1).collect()
}

/// `A_S ∩ A_T = A_{S∩T}` for every pair `S, T ⊆ {0..7}`, with membership
/// read off `lies_in`.
fn intersection_law(cfg: &RunConfig, rng: &mut SuiteRng, tally: &mut Tally) -> Result<()> {
    let codes = law_codes(rng);
    let sets: Vec<BTreeSet<u64>> = (0u32..1 << ROWS).map(subset).collect();
    let pairs = 1u64 << (2 * ROWS);
    cfg.spend(pairs * codes.len() as u64)?;
    for (mask, c) in &codes {
        let member: Vec<bool> = sets.iter().map(|s| c.lies_in(s)).collect();
        for s in 0..1usize << ROWS {
            tally.check(member[s] == (*mask & !(s as u32) == 0), || {
                format!("{c} in A of {:?}: {}", sets[s], member[s])
            });
        }
        for s in 0..1usize << ROWS {
            for t in 0..1usize << ROWS {
                if (member[s] && member[t]) != member[s & t] {
                    tally.fail(format!(
                        "{c} breaks the law for {:?} and {:?}",
                        sets[s], sets[t]
                    ));
                }
            }
        }
        tally.add("law_codes", 1);
    }
    tally.add("law_pairs", pairs);
    let all: Vec<ASCode> = codes.into_iter().map(|(_, c)| c).collect();
    for _ in 0..16 {
        let (s, t) = (random_rows(rng), random_rows(rng));
        tally.check(intersect_code_law(&s, &t, &all), || {
            format!("intersect_code_law fails for {s:?} and {t:?}")
        });
    }
    Ok(())
}
