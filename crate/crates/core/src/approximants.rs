//! Convergents of an expansion and the side-and-diameter numbers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::anth::{canonical_expansion, surd_anth, Expansion};
use crate::error::{Error, Result};
use crate::surd::QuadraticSurd;

/// The `index`-th convergent `p/q`, built from quotients `k_0..=k_index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigUint,
    pub q: BigUint,
    pub index: usize,
}

/// The first `n` convergents by the continuant recurrence
/// `p_k = k_k·p_{k−1} + p_{k−2}`, `q_k = k_k·q_{k−1} + q_{k−2}`,
/// seeded with `p_{−1} = 1, p_{−2} = 0, q_{−1} = 0, q_{−2} = 1`.
///
/// Finite expansions clamp `n` to their length, so the last convergent is the
/// exact value.
pub fn convergents(e: &Expansion, n: usize) -> Result<Vec<Convergent>> {
    if e.is_empty() {
        return Err(Error::InvalidExpansion("expansion has no quotients".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("convergent count must be at least 1".into()));
    }
    let (mut p_prev, mut p) = (BigUint::zero(), BigUint::one());
    let (mut q_prev, mut q) = (BigUint::one(), BigUint::zero());
    let out = e
        .terms()
        .take(n)
        .enumerate()
        .map(|(index, k)| {
            let p_next = k * &p + &p_prev;
            let q_next = k * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            Convergent {
                p: p.clone(),
                q: q.clone(),
                index,
            }
        })
        .collect();
    Ok(out)
}

/// Side and diameter numbers: `(1, 1)` then `s' = s + d`, `d' = 2s + d`.
/// Every pair satisfies `d² − 2s² = ±1`, alternating from `−1`.
pub fn side_diameter(n: usize) -> Vec<(BigUint, BigUint)> {
    std::iter::successors(Some((BigUint::one(), BigUint::one())), |(s, d)| {
        Some((s + d, (s << 1u8) + d))
    })
    .take(n)
    .collect()
}

/// `p_k² − N·q_k²` for the first `n` convergents of `√N`; `e` must be the
/// expansion of `√N`.
pub fn pell_values(e: &Expansion, n: usize, radicand: &BigUint) -> Result<Vec<BigInt>> {
    let root = QuadraticSurd::sqrt(BigInt::from(radicand.clone()))?;
    if root.is_rational() {
        return Err(Error::InvalidInput(format!("{radicand} is a perfect square")));
    }
    let (expected, _) = surd_anth(&root)?;
    if canonical_expansion(e) != canonical_expansion(&expected) {
        return Err(Error::InvalidInput(format!(
            "expansion {e} is not the expansion of sqrt({radicand})"
        )));
    }
    let big_n = BigInt::from(radicand.clone());
    Ok(convergents(e, n)?
        .into_iter()
        .map(|c| {
            let p = BigInt::from(c.p);
            let q = BigInt::from(c.q);
            &p * &p - &big_n * &q * &q
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn pairs(cs: &[Convergent]) -> Vec<(u64, u64)> {
        cs.iter()
            .map(|c| (c.p.to_u64().unwrap(), c.q.to_u64().unwrap()))
            .collect()
    }

    #[test]
    fn convergent_examples() {
        let root2 = Expansion::from_u64s(&[1], &[2]).unwrap();
        assert_eq!(
            pairs(&convergents(&root2, 5).unwrap()),
            vec![(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]
        );
        let seven_thirds = Expansion::from_u64s(&[2, 3], &[]).unwrap();
        assert_eq!(
            pairs(&convergents(&seven_thirds, 10).unwrap()),
            vec![(2, 1), (7, 3)]
        );
        let phi = Expansion::from_u64s(&[], &[1]).unwrap();
        assert_eq!(
            pairs(&convergents(&phi, 6).unwrap()),
            vec![(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8)]
        );
    }

    #[test]
    fn convergent_errors() {
        let empty = Expansion::from_u64s(&[], &[]).unwrap();
        assert!(matches!(convergents(&empty, 3), Err(Error::InvalidExpansion(_))));
        let root2 = Expansion::from_u64s(&[1], &[2]).unwrap();
        assert!(matches!(convergents(&root2, 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn leading_zero_convergent() {
        let half = Expansion::from_u64s(&[0, 2], &[]).unwrap();
        assert_eq!(pairs(&convergents(&half, 5).unwrap()), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn side_diameter_examples() {
        let sd = |n| -> Vec<(u64, u64)> {
            side_diameter(n)
                .iter()
                .map(|(s, d)| (s.to_u64().unwrap(), d.to_u64().unwrap()))
                .collect()
        };
        assert_eq!(sd(1), vec![(1, 1)]);
        assert_eq!(sd(3), vec![(1, 1), (2, 3), (5, 7)]);
        assert_eq!(sd(4)[3], (12, 17));
        assert!(sd(0).is_empty());
    }

    #[test]
    fn pell_examples() {
        let values = |pre: &[u64], per: &[u64], n, big_n: u64| -> Vec<i64> {
            let e = Expansion::from_u64s(pre, per).unwrap();
            pell_values(&e, n, &BigUint::from(big_n))
                .unwrap()
                .iter()
                .map(|v| v.to_i64().unwrap())
                .collect()
        };
        assert_eq!(values(&[1], &[2], 4, 2), vec![-1, 1, -1, 1]);
        assert_eq!(values(&[1], &[1, 2], 2, 3), vec![-2, 1]);
        assert_eq!(values(&[2], &[4], 1, 5), vec![-1]);
    }

    #[test]
    fn pell_rejects_mismatch() {
        let root2 = Expansion::from_u64s(&[1], &[2]).unwrap();
        assert!(matches!(
            pell_values(&root2, 3, &BigUint::from(3u8)),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            pell_values(&root2, 3, &BigUint::from(4u8)),
            Err(Error::InvalidInput(_))
        ));
        // a non-canonical spelling of the same expansion is accepted
        let spelled = Expansion::from_u64s(&[1, 2], &[2, 2]).unwrap();
        assert_eq!(pell_values(&spelled, 2, &BigUint::from(2u8)).unwrap().len(), 2);
    }
}
