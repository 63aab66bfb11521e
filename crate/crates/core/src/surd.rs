//! Exact arithmetic in real quadratic fields `Q(√D)`.
//!
//! A [`QuadraticSurd`] is stored as `(a + b√D)/c` in a canonical form, so two
//! values are equal exactly when their fields are equal. Rationals always carry
//! `b = 0` and `D = 0`. Comparison and floor are decided with integer
//! arithmetic only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Floor of the square root of `n`, by Newton iteration from an overestimate.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n < &BigUint::from(2u8) {
        return n.clone();
    }
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u8;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `isqrt` on a signed value already known to be nonnegative.
pub(crate) fn isqrt_int(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    BigInt::from(isqrt(n.magnitude()))
}

/// Splits `d > 0` into `(s, r)` with `d = s²·r` and `r` squarefree, by trial division.
fn square_extract(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut p = BigInt::from(2u8);
    while &p * &p <= rest {
        let p2 = &p * &p;
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            outside *= &p;
        }
        if (&rest % &p).is_zero() {
            rest /= &p;
            inside *= &p;
        }
        p += 1u8;
    }
    // whatever is left has no factor below its square root: 1 or a prime
    (outside, inside * rest)
}

/// An exact real number `(a + b√D)/c` with `c > 0`, `D` squarefree and
/// `gcd(a, b, c) = 1`. Rationals are encoded with `b = 0`, `D = 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    /// Builds the canonical form of `(a + b√d)/c`.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, mut b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(Error::InvalidDenominator);
        }
        if d.is_negative() {
            return Err(Error::UnsupportedField);
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Self::reduce(a, BigInt::zero(), c, BigInt::zero()));
        }
        let (s, r) = square_extract(&d);
        b *= s;
        if r.is_one() {
            return Ok(Self::reduce(a + b, BigInt::zero(), c, BigInt::zero()));
        }
        Ok(Self::reduce(a, b, c, r))
    }

    /// Normalizes sign and common factor; `d` must already be squarefree
    /// (or zero when `b` is zero).
    fn reduce(mut a: BigInt, mut b: BigInt, mut c: BigInt, mut d: BigInt) -> Self {
        debug_assert!(!c.is_zero());
        if b.is_zero() {
            d = BigInt::zero();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Self { a, b, c, d }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: BigInt::zero(),
        }
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        Self::new(num, 0, den, 0)
    }

    /// `√n`, folded to an integer when `n` is a perfect square.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self> {
        Self::new(0, 1, 1, n)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// The squarefree radicand, or zero for rationals.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The value as a rational, when it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    /// Common radicand of two operands, or a field mismatch.
    fn field_with(&self, other: &Self) -> Result<BigInt> {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::FieldMismatch(
                self.d.to_string(),
                other.d.to_string(),
            )),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    /// The Galois conjugate `(a − b√D)/c`.
    pub fn conjugate(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        Ok(Self::reduce(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.field_with(other)?;
        Ok(Self::reduce(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &other.a * &self.b,
            &self.c * &other.c,
            d,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivideByZero);
        }
        // c / (a + b√D) = c(a − b√D) / (a² − b²D); the norm is nonzero since D is not a square
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Ok(Self::reduce(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.d.clone(),
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.field_with(other)?;
        self.mul(&other.recip()?)
    }

    /// Multiplies by an integer; never changes the field.
    pub fn scale(&self, k: &BigInt) -> Self {
        Self::reduce(&self.a * k, &self.b * k, self.c.clone(), self.d.clone())
    }

    /// Sign of the value, decided without leaving the integers.
    pub fn signum(&self) -> Ordering {
        // c > 0, so only a + b√D matters
        let sa = self.a.sign();
        let sb = self.b.sign();
        match (sa, sb) {
            (_, Sign::NoSign) => sign_to_ordering(sa),
            (Sign::NoSign, _) => sign_to_ordering(sb),
            _ if sa == sb => sign_to_ordering(sa),
            _ => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * &self.d;
                match a2.cmp(&b2d) {
                    Ordering::Greater => sign_to_ordering(sa),
                    Ordering::Less => sign_to_ordering(sb),
                    // a² = b²D is impossible with squarefree D > 1 and b ≠ 0
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Exact trichotomy via the sign of `self − other`.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        Ok(self.sub(other)?.signum())
    }

    /// The integer `m` with `m ≤ self < m + 1`.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.div_floor(&self.c);
        }
        // √(b²D) lies strictly between r and r + 1
        let r = isqrt_int(&(&self.b * &self.b * &self.d));
        let n = if self.b.is_positive() {
            &self.a + r
        } else {
            &self.a - r - 1
        };
        n.div_floor(&self.c)
    }
}

fn sign_to_ordering(s: Sign) -> Ordering {
    match s {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

impl fmt::Debug for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}√{})/{}", self.a, self.b, self.d, self.c)
    }
}

/// Renders in the literal grammar accepted by [`crate::literal::parse_surd`].
impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            };
        }
        let op = if self.b.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}*sqrt({}))/{}",
            self.a,
            op,
            self.b.abs(),
            self.d,
            self.c
        )
    }
}

/// A complete quotient `(P + √D)/Q` with `Q | D − P²`, the hashable form of
/// a remainder ratio `e_k / e_{k+1}` inside one expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdState {
    pub p: BigInt,
    pub q: BigInt,
    pub d: BigInt,
}

impl SurdState {
    /// Brings `x` into state form. When `Q ∤ D − P²` both `P` and `Q` are
    /// multiplied by `|Q|` and `D` by `Q²`, after which divisibility holds.
    pub fn from_surd(x: &QuadraticSurd) -> Result<Self> {
        if x.is_rational() {
            return Err(Error::InvalidInput(format!(
                "{x} is rational and has no surd state"
            )));
        }
        // (a + b√D)/c = (±a + √(b²D))/(±c), sign taken from b
        let (mut p, mut q) = if x.b.is_negative() {
            (-&x.a, -&x.c)
        } else {
            (x.a.clone(), x.c.clone())
        };
        let mut d = &x.b * &x.b * &x.d;
        if !(&d - &p * &p).is_multiple_of(&q) {
            let m = q.abs();
            p *= &m;
            d *= &q * &q;
            q *= m;
        }
        Ok(Self { p, q, d })
    }

    /// Next quotient and complete quotient; `root` is `⌊√D⌋`.
    pub fn advance(&self, root: &BigInt) -> (BigInt, SurdState) {
        let k = if self.q.is_positive() {
            (&self.p + root).div_floor(&self.q)
        } else {
            (-&self.p - root - 1u8).div_floor(&-&self.q)
        };
        let p = &k * &self.q - &self.p;
        let q = (&self.d - &p * &p) / &self.q;
        (
            k,
            SurdState {
                p,
                q,
                d: self.d.clone(),
            },
        )
    }

    /// The exact value as a canonical surd.
    pub fn value(&self) -> QuadraticSurd {
        QuadraticSurd::new(self.p.clone(), 1, self.q.clone(), self.d.clone())
            .expect("state denominators are nonzero")
    }

    pub fn satisfies_divisibility(&self) -> bool {
        !self.q.is_zero() && (&self.d - &self.p * &self.p).is_multiple_of(&self.q)
    }
}
