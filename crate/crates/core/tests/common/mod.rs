//! Helpers shared by the integration tests: independent oracles and random
//! value generators.

#![allow(dead_code)]

use anthyphairesis::{DivisionTree, LogosDecl, QuadraticSurd};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Euclid by repeated subtraction only: each quotient is the length of a run
/// of subtractions of the smaller magnitude from the larger.
pub fn subtraction_oracle(a: u64, b: u64) -> (Vec<u64>, u64) {
    let (mut x, mut y) = (a, b);
    let mut runs = Vec::new();
    while y != 0 {
        let mut run = 0;
        while x >= y {
            x -= y;
            run += 1;
        }
        runs.push(run);
        (x, y) = (y, x);
    }
    (runs, x)
}

/// `⌊x · 10^digits⌋`-ish scaled integer for `x = (a + b√D)/c`, using the
/// square root from `num` rather than the crate's own. Off by less than 2.
pub fn scaled_decimal(x: &QuadraticSurd, digits: u32) -> BigInt {
    let scale = BigInt::from(10u8).pow(digits);
    let radical = if x.b().is_zero() {
        BigInt::zero()
    } else {
        let inside = (x.b() * x.b() * x.radicand() * &scale * &scale)
            .to_biguint()
            .unwrap();
        let r = BigInt::from(inside.sqrt());
        if x.b().is_negative() {
            -r
        } else {
            r
        }
    };
    (x.a() * &scale + radical).div_floor(x.c())
}

pub fn small_int(range: i64) -> impl Strategy<Value = i64> {
    -range..=range
}

/// Surds in `Q(√d)`, rational with some probability.
pub fn surd_in(d: i64) -> impl Strategy<Value = QuadraticSurd> {
    (small_int(60), small_int(60), 1i64..40, prop::bool::weighted(0.2)).prop_map(
        move |(a, b, c, rational)| {
            let b = if rational { 0 } else { b };
            QuadraticSurd::new(a, b, c, if b == 0 { 0 } else { d }).unwrap()
        },
    )
}

/// Positive irrational surds `(a + b√D)/c` with small coefficients.
pub fn positive_irrational() -> impl Strategy<Value = QuadraticSurd> {
    (small_int(30), 1i64..20, 1i64..30, 2i64..200)
        .prop_filter_map("rational or nonpositive", |(a, b, c, d)| {
            let x = QuadraticSurd::new(a, b, c, d).ok()?;
            (!x.is_rational() && x.is_positive()).then_some(x)
        })
}

/// Positive magnitudes, rational or quadratic, in the field of `√d`. The
/// coefficients stay small because the period of a ratio of two of them grows
/// with the square root of its discriminant.
pub fn positive_in(d: i64) -> impl Strategy<Value = QuadraticSurd> {
    (small_int(8), small_int(6), 1i64..8, prop::bool::weighted(0.2))
        .prop_map(move |(a, b, c, rational)| {
            let b = if rational { 0 } else { b };
            QuadraticSurd::new(a, b, c, if b == 0 { 0 } else { d }).unwrap()
        })
        .prop_filter("nonpositive", |x| x.is_positive())
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn label() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9][a-zA-Z0-9 ,.'()-]{0,20}".prop_map(|s| s.trim_end().to_owned())
}

fn node_id() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_]{0,4}"
}

/// Random valid division trees with up to `max_steps` steps and
/// `max_logoi` declarations. Declarations may pair any nodes, not only
/// genuine siblings, so the checker sees invalid ones too.
pub fn division_tree(max_steps: usize, max_logoi: usize) -> impl Strategy<Value = DivisionTree> {
    (0..=max_steps)
        .prop_flat_map(move |n| {
            (
                label(),
                label(),
                prop::collection::hash_set(node_id(), 2 * n..=2 * n),
                prop::collection::vec(label(), 2 * n..=2 * n),
                prop::collection::vec((any::<prop::sample::Index>(), any::<bool>()), 0..=2 * max_logoi),
            )
        })
        .prop_map(|(name, root, ids, labels, picks)| {
            let ids: Vec<String> = ids.into_iter().collect();
            let steps: Vec<_> = ids
                .chunks(2)
                .zip(labels.chunks(2))
                .map(|(i, l)| ((i[0].clone(), l[0].clone()), (i[1].clone(), l[1].clone())))
                .collect();
            let n = steps.len();
            let logoi = if n == 0 {
                Vec::new()
            } else {
                picks
                    .chunks(2)
                    .filter(|p| p.len() == 2)
                    .map(|p| {
                        let pair = |(idx, sibling): &(prop::sample::Index, bool)| {
                            let s = idx.index(n);
                            if *sibling {
                                (steps[s].1 .0.clone(), steps[s].0 .0.clone())
                            } else {
                                (steps[s].0 .0.clone(), steps[(s + 1) % n].1 .0.clone())
                            }
                        };
                        LogosDecl {
                            lhs: pair(&p[0]),
                            rhs: pair(&p[1]),
                        }
                    })
                    .collect()
            };
            DivisionTree::build(&name, &root, steps, logoi).expect("generated tree is valid")
        })
}
