//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report is printed on every `cargo test`.

mod common;

use std::cmp::Ordering;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use anthyphairesis::anth::RemainderRatio;
use anthyphairesis::{
    anth_pair, canonical_expansion, check_logos, convergents, dialectic_number_seq, euclid_anth,
    isqrt, parse_tree, pell_values, proportion_eq, remainder_classes, render_tree, side_diameter,
    surd_anth, tma_regress, Expansion, QuadraticSurd, TermSequence,
};
use common::{big, subtraction_oracle};
use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestError, TestRunner};
use rand::{rngs::StdRng, Rng, SeedableRng};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

fn surd(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
    QuadraticSurd::new(a, b, c, d).unwrap()
}

fn u64s(v: &[BigUint]) -> Vec<u64> {
    v.iter().map(|k| k.to_u64().unwrap()).collect()
}

fn root_two_expansion() -> Check {
    let x = QuadraticSurd::sqrt(2).unwrap();
    within(Duration::from_millis(10), || {
        let (e, t) = surd_anth(&x).map_err(|e| e.to_string())?;
        ensure!(u64s(e.preperiod()) == [1] && u64s(e.period()) == [2], "got {e}");
        ensure!(t.repeat_at().is_some(), "no repeat recorded");
        Ok(())
    })
}

fn root_two_identity() -> Check {
    let a = QuadraticSurd::sqrt(2).unwrap();
    let b = QuadraticSurd::one();
    let c1 = a.sub(&b).unwrap();
    let c2 = b.scale(&BigInt::from(3)).sub(&a.scale(&BigInt::from(2))).unwrap();
    ensure!(b.mul(&c2).unwrap() == c1.mul(&c1).unwrap(), "b·c2 = {:?}, c1² = {:?}", b.mul(&c2), c1.mul(&c1));
    ensure!(a == b.add(&c1).unwrap(), "a ≠ b + c1");
    ensure!(b == c1.scale(&BigInt::from(2)).add(&c2).unwrap(), "b ≠ 2c1 + c2");
    ensure!(b.div(&c1).unwrap() == c1.div(&c2).unwrap(), "b/c1 ≠ c1/c2");
    ensure!(b.cmp_exact(&c1).unwrap() == Ordering::Greater, "b ≤ c1");
    ensure!(b.cmp_exact(&c1.scale(&BigInt::from(2))).unwrap() == Ordering::Greater, "b ≤ 2c1");
    ensure!(c2.is_positive(), "c2 ≤ 0");
    Ok(())
}

fn dialectic_examples() -> Check {
    let finite = TermSequence::finite([2u64, 4, 8, 9].map(big).to_vec());
    let doubling = TermSequence::geometric(vec![], vec![big(2)], Ratio::from(big(2)));
    within(Duration::from_millis(1), || {
        let f = dialectic_number_seq(&finite).map_err(|e| e.to_string())?;
        let d = dialectic_number_seq(&doubling).map_err(|e| e.to_string())?;
        ensure!(f == 3, "[2,4,8,9] gave {f}");
        ensure!(d == 2, "doubling gave {d}");
        Ok(())
    })
}

fn logos_sweep() -> Check {
    within(Duration::from_secs(5), || {
        for n in 2u64..=500 {
            let r = isqrt(&big(n));
            if &r * &r == big(n) {
                continue;
            }
            let (e, t) = surd_anth(&QuadraticSurd::sqrt(n).unwrap()).map_err(|e| format!("sqrt({n}): {e}"))?;
            let (m, end) = t.repeat_at().ok_or(format!("sqrt({n}): no repeat"))?;
            ensure!(t.states()[m] == t.states()[end], "sqrt({n}): repeat witness differs");
            let RemainderRatio::Surd(start) = &t.states()[m] else {
                return Err(format!("sqrt({n}): rational state"));
            };
            let root = BigInt::from(isqrt(&start.d.to_biguint().unwrap()));
            let period = &t.quotients()[m..end];
            let mut state = start.clone();
            for i in 0..3 * period.len() {
                let (k, next) = state.advance(&root);
                ensure!(k == BigInt::from(period[i % period.len()].clone()), "sqrt({n}): cycle broke at {i}");
                state = next;
            }
            ensure!(e.period().last() == Some(&(r * 2u8)), "sqrt({n}): last quotient {:?}", e.period().last());
        }
        Ok(())
    })
}

fn euclid_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_1071);
    let pairs: Vec<(u64, u64)> = (0..1000)
        .map(|_| (rng.gen_range(1..=1_000_000_000_000), rng.gen_range(1..=1_000_000_000_000)))
        .collect();
    within(Duration::from_secs(5), || {
        for &(a, b) in &pairs {
            let (ks, g) = euclid_anth(&big(a), &big(b)).map_err(|e| e.to_string())?;
            let (runs, og) = subtraction_oracle(a, b);
            ensure!(u64s(&ks) == runs && g == big(og), "({a}, {b}) disagrees");
        }
        Ok(())
    })
}

fn approximants() -> Check {
    let e = Expansion::from_u64s(&[1], &[2]).unwrap();
    let cs: Vec<(u64, u64)> = convergents(&e, 5)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|c| (c.p.to_u64().unwrap(), c.q.to_u64().unwrap()))
        .collect();
    ensure!(cs == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)], "convergents {cs:?}");
    let pell: Vec<i64> = pell_values(&e, 5, &big(2))
        .map_err(|e| e.to_string())?
        .iter()
        .map(|v| v.to_i64().unwrap())
        .collect();
    ensure!(pell == [-1, 1, -1, 1, -1], "pell values {pell:?}");
    let sd: Vec<(u64, u64)> = side_diameter(4)
        .iter()
        .map(|(s, d)| (s.to_u64().unwrap(), d.to_u64().unwrap()))
        .collect();
    ensure!(sd == [(1, 1), (2, 3), (5, 7), (12, 17)], "side/diameter {sd:?}");
    for (i, (s, d)) in sd.iter().enumerate() {
        let v = (d * d) as i64 - 2 * (s * s) as i64;
        ensure!(v == if i % 2 == 0 { -1 } else { 1 }, "d² − 2s² = {v} at {i}");
    }
    Ok(())
}

fn proportion() -> Check {
    let mut rng = StdRng::seed_from_u64(0x7ea1);
    let fields = [2i64, 3, 5, 6, 7, 10, 11];
    let positive = |rng: &mut StdRng, d: i64| loop {
        let x = surd(rng.gen_range(-8..=8), rng.gen_range(-6..=6), rng.gen_range(1..8), d);
        if x.is_positive() {
            return x;
        }
    };
    let triples: Vec<_> = (0..200)
        .map(|_| {
            let d = fields[rng.gen_range(0..fields.len())];
            let lambda = QuadraticSurd::from_ratio(rng.gen_range(1..100i64), rng.gen_range(1..100i64)).unwrap();
            (positive(&mut rng, d), positive(&mut rng, d), lambda)
        })
        .collect();
    within(Duration::from_secs(2), || {
        let pe = |a: &QuadraticSurd, b: &QuadraticSurd, c: &QuadraticSurd, d: &QuadraticSurd| {
            proportion_eq(a, b, c, d).map_err(|e| e.to_string())
        };
        let (r8, r2, r3) = (
            QuadraticSurd::sqrt(8).unwrap(),
            QuadraticSurd::sqrt(2).unwrap(),
            QuadraticSurd::sqrt(3).unwrap(),
        );
        let one = QuadraticSurd::one();
        ensure!(pe(&r8, &QuadraticSurd::from_integer(2), &r2, &one)?, "√8:2 ≠ √2:1");
        ensure!(!pe(&r2, &one, &r3, &one)?, "√2:1 = √3:1");
        for (a, b, l) in &triples {
            let (la, lb) = (l.mul(a).unwrap(), l.mul(b).unwrap());
            ensure!(pe(a, b, &la, &lb)?, "scale invariance fails for {a}, {b}, {l}");
        }
        Ok(())
    })
}

fn fixture_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn division_fixtures() -> Check {
    let load = |name| parse_tree(&std::fs::read_to_string(fixture_path(name)).unwrap()).map_err(|e| e.to_string());
    let angler = load("angler.tree")?;
    let r = check_logos(&angler);
    ensure!(angler.step_count() == 9 && angler.logoi().len() == 1, "angler shape");
    ensure!(r.valid && r.period == Some(3), "angler report {r:?}");
    let d = &r.declarations[0];
    ensure!((d.lhs_step, d.rhs_step) == (Some(6), Some(9)), "angler steps {d:?}");
    let sophist = load("sophist.tree")?;
    let r = check_logos(&sophist);
    ensure!(sophist.step_count() == 7 && sophist.logoi().len() == 3, "sophist shape");
    let steps: Vec<_> = r.declarations.iter().map(|d| (d.lhs_step, d.rhs_step, d.period)).collect();
    ensure!(
        steps == [(Some(2), Some(5), Some(3)), (Some(3), Some(6), Some(3)), (Some(4), Some(7), Some(3))],
        "sophist declarations {steps:?}"
    );
    ensure!(r.valid && r.period == Some(3), "sophist report {r:?}");
    for (name, code) in [("angler.tree", 0), ("sophist.tree", 0), ("inconsistent.tree", 1)] {
        let status = Command::new(env!("CARGO_BIN_EXE_anth"))
            .args(["tree", "check"])
            .arg(fixture_path(name))
            .output()
            .map_err(|e| e.to_string())?
            .status
            .code();
        ensure!(status == Some(code), "tree check {name} exited {status:?}");
    }
    Ok(())
}

fn tma_collapse() -> Check {
    let phi = surd(1, 1, 2, 5);
    for (name, x) in [("√2", QuadraticSurd::sqrt(2).unwrap()), ("√3", QuadraticSurd::sqrt(3).unwrap()), ("φ", phi)] {
        let (_, t) = surd_anth(&x).map_err(|e| e.to_string())?;
        let regress = tma_regress(&t, 50).map_err(|e| e.to_string())?;
        ensure!(regress.len() == 50, "{name}: regress length {}", regress.len());
        ensure!(regress.iter().all(|r| r.1 == regress[0].1), "{name}: regress classes vary");
        let (pre, period) = t.period_bounds().unwrap();
        let c = remainder_classes(&t.extended(pre + 4 * period));
        ensure!(c.cycle == Some((pre, period)), "{name}: cycle {:?}", c.cycle);
        for i in pre..pre + 3 * period {
            ensure!(c.classes[i + period] == c.classes[i], "{name}: class {i} breaks the cycle");
        }
    }
    Ok(())
}

fn run<T: std::fmt::Debug>(name: &str, result: Result<(), TestError<T>>) -> Check {
    result.map_err(|e| format!("{name}: {e}"))
}

fn property_suite() -> Check {
    let config = Config {
        cases: 500,
        failure_persistence: None,
        ..Config::default()
    };

    let expansions = (
        prop::collection::vec(1u64..6, 0..6),
        prop::collection::vec(1u64..6, 0..6),
    )
        .prop_filter_map("empty", |(pre, per)| {
            Expansion::from_u64s(&pre, &per).ok().filter(|e| !e.is_empty())
        });
    run(
        "canonical idempotence",
        TestRunner::new(config.clone()).run(&expansions, |e| {
            let once = canonical_expansion(&e);
            prop_assert_eq!(canonical_expansion(&once), once);
            Ok(())
        }),
    )?;
    run(
        "determinant identity",
        TestRunner::new(config.clone()).run(&(expansions, 1usize..=60), |(e, n)| {
            let cs = convergents(&e, n).unwrap();
            for w in cs.windows(2) {
                let det = BigInt::from(w[1].p.clone()) * BigInt::from(w[0].q.clone())
                    - BigInt::from(w[0].p.clone()) * BigInt::from(w[1].q.clone());
                let sign = if w[1].index % 2 == 1 { 1 } else { -1 };
                prop_assert_eq!(det, BigInt::from(sign));
            }
            Ok(())
        }),
    )?;
    let pairs = prop::sample::select(vec![2i64, 3, 5, 7])
        .prop_flat_map(|d| (common::positive_in(d), common::positive_in(d)));
    run(
        "strict remainder decrease",
        TestRunner::new(config.clone()).run(&pairs, |(a, b)| {
            let (_, t) = anth_pair(&a, &b).unwrap();
            let rs = t.remainders();
            for w in rs[1..].windows(2) {
                if w[1].is_zero() {
                    break;
                }
                prop_assert_eq!(w[0].cmp_exact(&w[1]).unwrap(), Ordering::Greater);
            }
            Ok(())
        }),
    )?;
    run(
        "parse/render round trip",
        TestRunner::new(config).run(&common::division_tree(12, 4), |t| {
            let text = render_tree(&t);
            let back = parse_tree(&text).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(render_tree(&back), text);
            Ok(())
        }),
    )?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("expansion of sqrt(2) is [1; (2)] within 10 ms", root_two_expansion),
        ("b*c2 = c1^2 in Z[sqrt 2], b > c1, b > 2*c1", root_two_identity),
        ("dialectic numbers 3 and 2 within 1 ms", dialectic_examples),
        ("periodicity sweep over nonsquare N <= 500 within 5 s", logos_sweep),
        ("euclid_anth matches subtraction on 1000 pairs within 5 s", euclid_oracle),
        ("convergents, Pell values and side/diameter numbers", approximants),
        ("proportion decisions and 200 scale triples within 2 s", proportion),
        ("Angler and Sophist fixtures, tree check exit codes", division_fixtures),
        ("regress collapse and class cycles for sqrt 2, sqrt 3, phi", tma_collapse),
        ("property suite on 500 cases each", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
