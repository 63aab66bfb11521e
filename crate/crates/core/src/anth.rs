//! Anthyphairesis: reciprocal subtraction of two magnitudes.
//!
//! For natural numbers this is the Euclidean algorithm; for a ratio in a real
//! quadratic field it is the continued-fraction expansion, which becomes
//! periodic as soon as two remainder ratios `e_n/e_{n+1}` and `e_m/e_{m+1}`
//! coincide. That coincidence is detected exactly by hashing the complete
//! quotient `(P + √D)/Q` of each remainder ratio.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::surd::{isqrt_int, QuadraticSurd, SurdState};

/// Default safety bound on the number of expansion steps.
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    Finite,
    Periodic,
}

/// A quotient sequence `[k_0, k_1, …]` split into a preperiod and a period.
///
/// An empty period means the anthyphairesis is finite. Only the very first
/// quotient may be zero (ratios below one).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expansion {
    preperiod: Vec<BigUint>,
    period: Vec<BigUint>,
}

impl Expansion {
    pub fn new(preperiod: Vec<BigUint>, period: Vec<BigUint>) -> Result<Self> {
        let zero_at = preperiod
            .iter()
            .chain(period.iter())
            .enumerate()
            .find(|(i, k)| *i > 0 && k.is_zero());
        if let Some((i, _)) = zero_at {
            return Err(Error::InvalidExpansion(format!(
                "quotient {i} is zero; only the first quotient may be"
            )));
        }
        if preperiod.is_empty() && period.first().is_some_and(Zero::is_zero) {
            return Err(Error::InvalidExpansion(
                "a period cannot contain a zero quotient".into(),
            ));
        }
        Ok(Self { preperiod, period })
    }

    pub fn finite(quotients: Vec<BigUint>) -> Result<Self> {
        Self::new(quotients, Vec::new())
    }

    /// Shorthand for tests and fixtures.
    pub fn from_u64s(preperiod: &[u64], period: &[u64]) -> Result<Self> {
        Self::new(
            preperiod.iter().map(|&k| BigUint::from(k)).collect(),
            period.iter().map(|&k| BigUint::from(k)).collect(),
        )
    }

    pub fn preperiod(&self) -> &[BigUint] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigUint] {
        &self.period
    }

    pub fn kind(&self) -> ExpansionKind {
        if self.period.is_empty() {
            ExpansionKind::Finite
        } else {
            ExpansionKind::Periodic
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.preperiod.is_empty() && self.period.is_empty()
    }

    /// The quotients in order: the preperiod followed by the period repeated
    /// forever (or just the preperiod when finite).
    pub fn terms(&self) -> impl Iterator<Item = &BigUint> + '_ {
        self.preperiod.iter().chain(self.period.iter().cycle())
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigUint]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        if self.is_finite() {
            write!(f, "[{}]", join(&self.preperiod))
        } else {
            write!(f, "[{}; ({})]", join(&self.preperiod), join(&self.period))
        }
    }
}

/// The exact ratio of two consecutive remainders.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RemainderRatio {
    Rational(BigRational),
    Surd(SurdState),
}

impl RemainderRatio {
    pub fn value(&self) -> QuadraticSurd {
        match self {
            RemainderRatio::Rational(r) => {
                QuadraticSurd::from_ratio(r.numer().clone(), r.denom().clone())
                    .expect("reduced rationals have nonzero denominators")
            }
            RemainderRatio::Surd(s) => s.value(),
        }
    }
}

/// The record of one expansion: every quotient and remainder ratio visited.
///
/// `states[k]` is the ratio `e_{k-1}/e_k` with `e_{-1} = a` and `e_0 = b`, and
/// `quotients[k]` is its floor. For a periodic expansion the recording stops
/// at the first repeated state, so `repeat_at = (m, n)` has
/// `states[m] == states[n]` and both vectors have length `n + 1`.
#[derive(Clone, Debug)]
pub struct Trace {
    magnitudes: (QuadraticSurd, QuadraticSurd),
    quotients: Vec<BigUint>,
    states: Vec<RemainderRatio>,
    repeat_at: Option<(usize, usize)>,
}

impl Trace {
    pub fn magnitudes(&self) -> (&QuadraticSurd, &QuadraticSurd) {
        (&self.magnitudes.0, &self.magnitudes.1)
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    pub fn states(&self) -> &[RemainderRatio] {
        &self.states
    }

    pub fn repeat_at(&self) -> Option<(usize, usize)> {
        self.repeat_at
    }

    pub fn is_finite(&self) -> bool {
        self.repeat_at.is_none()
    }

    /// `(preperiod length, period length)` for periodic traces.
    pub fn period_bounds(&self) -> Option<(usize, usize)> {
        self.repeat_at.map(|(m, n)| (m, n - m))
    }

    /// The remainder magnitudes `a, b, e_1, e_2, …` reproduced by repeated
    /// subtraction `e_{k+1} = e_{k-1} − k_k·e_k`. A finite trace ends with 0.
    pub fn remainders(&self) -> Vec<QuadraticSurd> {
        let (a, b) = self.magnitudes.clone();
        let mut out = vec![a, b];
        for k in &self.quotients {
            let len = out.len();
            if out[len - 1].is_zero() {
                break;
            }
            let next = out[len - 2]
                .sub(&out[len - 1].scale(&BigInt::from(k.clone())))
                .expect("remainders share one field");
            out.push(next);
        }
        out
    }

    /// Continues a periodic trace by the complete-quotient recurrence until it
    /// holds at least `len` states, ignoring the detected repeat. Finite traces
    /// are returned unchanged.
    pub fn extended(&self, len: usize) -> Trace {
        let mut out = self.clone();
        let Some(RemainderRatio::Surd(last)) = self.states.last() else {
            return out;
        };
        if self.repeat_at.is_none() {
            return out;
        }
        let root = isqrt_int(&last.d);
        let mut state = last.clone();
        while out.states.len() < len {
            let (_, next) = state.advance(&root);
            let (k, _) = next.advance(&root);
            out.quotients.push(to_natural(k));
            out.states.push(RemainderRatio::Surd(next.clone()));
            state = next;
        }
        out
    }
}

fn to_natural(k: BigInt) -> BigUint {
    k.to_biguint()
        .expect("quotients of positive magnitudes are nonnegative")
}

/// The Euclidean anthyphairesis of two positive integers: the successive
/// division quotients and the last nonzero remainder.
pub fn euclid_anth(a: &BigUint, b: &BigUint) -> Result<(Vec<BigUint>, BigUint)> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidMagnitude(
            "magnitudes must be positive".into(),
        ));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    let mut quotients = Vec::new();
    while !y.is_zero() {
        let (k, r) = x.div_rem(&y);
        quotients.push(k);
        x = y;
        y = r;
    }
    Ok((quotients, x))
}

/// [`surd_anth_bounded`] with the default step bound.
pub fn surd_anth(x: &QuadraticSurd) -> Result<(Expansion, Trace)> {
    surd_anth_bounded(x, DEFAULT_MAX_STEPS)
}

/// The anthyphairesis of `x` to 1.
pub fn surd_anth_bounded(x: &QuadraticSurd, max_steps: u64) -> Result<(Expansion, Trace)> {
    expand_pair(x, (x.clone(), QuadraticSurd::one()), max_steps)
}

fn expand_pair(
    ratio: &QuadraticSurd,
    magnitudes: (QuadraticSurd, QuadraticSurd),
    max_steps: u64,
) -> Result<(Expansion, Trace)> {
    if !ratio.is_positive() {
        return Err(Error::InvalidMagnitude(format!("{ratio} is not positive")));
    }
    match ratio.to_rational() {
        Some(r) => expand_rational(&r, magnitudes, max_steps),
        None => expand_irrational(ratio, magnitudes, max_steps),
    }
}

fn expand_rational(
    r: &BigRational,
    magnitudes: (QuadraticSurd, QuadraticSurd),
    max_steps: u64,
) -> Result<(Expansion, Trace)> {
    let num = r.numer().to_biguint().expect("positive");
    let den = r.denom().to_biguint().expect("positive");
    let (quotients, _) = euclid_anth(&num, &den)?;
    if quotients.len() as u64 > max_steps {
        return Err(Error::StepLimit(max_steps));
    }
    let mut states = Vec::with_capacity(quotients.len());
    let mut x = r.clone();
    for k in &quotients {
        states.push(RemainderRatio::Rational(x.clone()));
        let frac = &x - BigRational::from_integer(BigInt::from(k.clone()));
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    let expansion = Expansion::finite(quotients.clone())?;
    let trace = Trace {
        magnitudes,
        quotients,
        states,
        repeat_at: None,
    };
    Ok((expansion, trace))
}

fn expand_irrational(
    x: &QuadraticSurd,
    magnitudes: (QuadraticSurd, QuadraticSurd),
    max_steps: u64,
) -> Result<(Expansion, Trace)> {
    let mut state = SurdState::from_surd(x)?;
    let root = isqrt_int(&state.d);
    let mut seen: HashMap<SurdState, usize> = HashMap::new();
    let mut quotients: Vec<BigUint> = Vec::new();
    let mut states = Vec::new();
    loop {
        let index = states.len();
        if let Some(&m) = seen.get(&state) {
            // the quotient of a repeated state is the one recorded at m
            quotients.push(quotients[m].clone());
            states.push(RemainderRatio::Surd(state));
            let expansion = Expansion::new(quotients[..m].to_vec(), quotients[m..index].to_vec())?;
            let trace = Trace {
                magnitudes,
                quotients,
                states,
                repeat_at: Some((m, index)),
            };
            return Ok((expansion, trace));
        }
        if index as u64 >= max_steps {
            return Err(Error::StepLimit(max_steps));
        }
        let (k, next) = state.advance(&root);
        seen.insert(state.clone(), index);
        quotients.push(to_natural(k));
        states.push(RemainderRatio::Surd(state));
        state = next;
    }
}

/// The anthyphairesis of `a` to `b`; its first quotient is 0 when `a < b`.
pub fn anth_pair(a: &QuadraticSurd, b: &QuadraticSurd) -> Result<(Expansion, Trace)> {
    anth_pair_bounded(a, b, DEFAULT_MAX_STEPS)
}

pub fn anth_pair_bounded(
    a: &QuadraticSurd,
    b: &QuadraticSurd,
    max_steps: u64,
) -> Result<(Expansion, Trace)> {
    for m in [a, b] {
        if !m.is_positive() {
            return Err(Error::InvalidMagnitude(format!("{m} is not positive")));
        }
    }
    let ratio = a.div(b)?;
    expand_pair(&ratio, (a.clone(), b.clone()), max_steps)
}

/// Two magnitudes are commensurable exactly when their anthyphairesis ends.
pub fn is_commensurable(a: &QuadraticSurd, b: &QuadraticSurd) -> Result<bool> {
    Ok(anth_pair(a, b)?.0.is_finite())
}

/// Smallest word whose repetition gives `word`.
fn primitive_root(word: &[BigUint]) -> &[BigUint] {
    let n = word.len();
    (1..=n)
        .filter(|len| n.is_multiple_of(*len))
        .find(|&len| (len..n).all(|i| word[i] == word[i - len]))
        .map_or(word, |len| &word[..len])
}

/// The unique representative of an expansion's value: primitive period,
/// minimal preperiod, and finite sequences ending in a quotient ≥ 2.
pub fn canonical_expansion(e: &Expansion) -> Expansion {
    let mut pre = e.preperiod.clone();
    if e.period.is_empty() {
        // [.., k, 1] = [.., k + 1]
        while pre.len() > 1 && pre.last().is_some_and(One::is_one) {
            pre.pop();
            *pre.last_mut().expect("length checked") += 1u8;
        }
        return Expansion {
            preperiod: pre,
            period: Vec::new(),
        };
    }
    let mut period = primitive_root(&e.period).to_vec();
    while pre.last().is_some() && pre.last() == period.last() {
        pre.pop();
        period.rotate_right(1);
    }
    Expansion {
        preperiod: pre,
        period,
    }
}

/// Theaetetus proportion: `a/b = c/d` iff the two anthyphaireses coincide.
pub fn proportion_eq(
    a: &QuadraticSurd,
    b: &QuadraticSurd,
    c: &QuadraticSurd,
    d: &QuadraticSurd,
) -> Result<bool> {
    let (left, _) = anth_pair(a, b)?;
    let (right, _) = anth_pair(c, d)?;
    Ok(canonical_expansion(&left) == canonical_expansion(&right))
}

/// Small-quotient convenience used by the CLI and tests.
pub fn quotients_as_u64(q: &[BigUint]) -> Option<Vec<u64>> {
    q.iter().map(ToPrimitive::to_u64).collect()
}
