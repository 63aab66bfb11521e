//! Ratio classes of anthyphairetic remainders and dialectic numbers.
//!
//! The dialectic number of a sequence is the count of distinct ratios between
//! successive terms, plus one. For a periodic anthyphairesis the remainders
//! are infinitely many, but their ratios fall into finitely many classes.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::anth::{RemainderRatio, Trace};
use crate::error::{Error, Result};

/// A sequence of positive integers given as a finite prefix followed by a
/// cycle that repeats forever, each repetition scaled by `growth`.
///
/// `growth = 1` gives an eventually periodic sequence; `growth = 2` over the
/// cycle `[2]` gives the doubling sequence `2, 4, 8, …`. An empty cycle means
/// the sequence is just the prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSequence {
    pub prefix: Vec<BigUint>,
    pub cycle: Vec<BigUint>,
    pub growth: Ratio<BigUint>,
}

impl TermSequence {
    pub fn finite(terms: Vec<BigUint>) -> Self {
        Self {
            prefix: terms,
            cycle: Vec::new(),
            growth: Ratio::one(),
        }
    }

    pub fn periodic(prefix: Vec<BigUint>, cycle: Vec<BigUint>) -> Self {
        Self {
            prefix,
            cycle,
            growth: Ratio::one(),
        }
    }

    pub fn geometric(prefix: Vec<BigUint>, cycle: Vec<BigUint>, growth: Ratio<BigUint>) -> Self {
        Self {
            prefix,
            cycle,
            growth,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.cycle.is_empty()
    }

    /// The first terms, enough to see every successive ratio: the prefix,
    /// two passes of the cycle, and the first term of the third pass.
    fn closing_window(&self) -> Vec<Ratio<BigUint>> {
        let mut out: Vec<Ratio<BigUint>> = self.prefix.iter().cloned().map(Ratio::from).collect();
        if self.cycle.is_empty() {
            return out;
        }
        let mut scale = Ratio::one();
        for _ in 0..2 {
            out.extend(self.cycle.iter().map(|t| Ratio::from(t.clone()) * &scale));
            scale *= &self.growth;
        }
        out.push(Ratio::from(self.cycle[0].clone()) * scale);
        out
    }

    fn validate(&self) -> Result<()> {
        if self.prefix.is_empty() && self.cycle.is_empty() {
            return Err(Error::InvalidInput("sequence is empty".into()));
        }
        if self.prefix.iter().chain(&self.cycle).any(Zero::is_zero) {
            return Err(Error::InvalidInput("terms must be positive".into()));
        }
        if !self.cycle.is_empty() && self.growth.is_zero() {
            return Err(Error::InvalidInput("cycle growth must be positive".into()));
        }
        Ok(())
    }
}

/// `(number of distinct successive-term ratios) + 1`, ratios compared in
/// lowest terms. A one-term sequence has dialectic number 1.
pub fn dialectic_number_seq(s: &TermSequence) -> Result<usize> {
    s.validate()?;
    let terms = s.closing_window();
    let ratios: HashSet<Ratio<BigUint>> = terms.windows(2).map(|w| &w[0] / &w[1]).collect();
    Ok(ratios.len() + 1)
}

/// `(number of distinct remainder ratios in the trace) + 1`. The initial
/// ratio `a/b` counts.
pub fn dialectic_number_exp(t: &Trace) -> usize {
    let distinct: HashSet<&RemainderRatio> = t.states().iter().collect();
    distinct.len() + 1
}

/// One class of equal remainder ratios.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioState {
    pub class_id: usize,
    pub representative: RemainderRatio,
}

/// Class ids per remainder index, in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemainderClasses {
    pub classes: Vec<usize>,
    pub states: Vec<RatioState>,
    /// `(preperiod, period)` when the trace is periodic; absent for a finite
    /// anthyphairesis, which makes no cyclicity claim.
    pub cycle: Option<(usize, usize)>,
}

/// Assigns each remainder ratio of the trace its class.
pub fn remainder_classes(t: &Trace) -> RemainderClasses {
    let mut ids: HashMap<&RemainderRatio, usize> = HashMap::new();
    let mut states = Vec::new();
    let classes = t
        .states()
        .iter()
        .map(|st| {
            *ids.entry(st).or_insert_with(|| {
                states.push(RatioState {
                    class_id: states.len(),
                    representative: st.clone(),
                });
                states.len() - 1
            })
        })
        .collect();
    RemainderClasses {
        classes,
        states,
        cycle: t.period_bounds(),
    }
}

/// The regress `Σ_0, Σ_1, …, Σ_{n−1}`: remainder indices one period apart from
/// the first in-period remainder, each with the class of its ratio. The ratios
/// are recomputed along the way, not read off the period.
pub fn tma_regress(t: &Trace, n: usize) -> Result<Vec<(usize, usize)>> {
    let (start, period) = t.period_bounds().ok_or(Error::FiniteAnthyphairesis)?;
    if n == 0 {
        return Err(Error::InvalidInput("regress length must be at least 1".into()));
    }
    let last = start + (n - 1) * period;
    let extended = t.extended(last + 1);
    let table = remainder_classes(t);
    let lookup: HashMap<&RemainderRatio, usize> = table
        .states
        .iter()
        .map(|s| (&s.representative, s.class_id))
        .collect();
    (0..n)
        .map(|i| {
            let index = start + i * period;
            let class = lookup
                .get(&extended.states()[index])
                .copied()
                .ok_or_else(|| Error::InvalidInput(format!("remainder {index} left the cycle")))?;
            Ok((index, class))
        })
        .collect()
}
