//! Surd literals: `(a+b*sqrt(D))/c`, `sqrt(N)`, `p/q` and plain integers.
//!
//! Whitespace is ignored anywhere. A sum of several terms must be wrapped in
//! parentheses before it can be divided.

use num_bigint::BigInt;
use thiserror::Error;

use crate::surd::QuadraticSurd;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("bad surd literal at offset {offset}: {message}")]
pub struct LiteralError {
    pub offset: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, LiteralError> {
        Err(LiteralError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), LiteralError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.fail(format!("expected `{token}`"))
        }
    }

    fn integer(&mut self) -> Result<BigInt, LiteralError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit run"))
    }

    /// `sqrt(N)` after the keyword has been seen.
    fn sqrt_arg(&mut self) -> Result<BigInt, LiteralError> {
        self.expect("(")?;
        let n = self.integer()?;
        self.expect(")")?;
        Ok(n)
    }

    fn term(&mut self) -> Result<QuadraticSurd, LiteralError> {
        let at = self.pos;
        let value = if self.eat("sqrt") {
            QuadraticSurd::sqrt(self.sqrt_arg()?)
        } else {
            let k = self.integer()?;
            if self.eat("*") {
                if !self.eat("sqrt") {
                    return self.fail("expected `sqrt` after `*`");
                }
                QuadraticSurd::new(0, k, 1, self.sqrt_arg()?)
            } else {
                Ok(QuadraticSurd::from_integer(k))
            }
        };
        value.map_err(|e| LiteralError {
            offset: at,
            message: e.to_string(),
        })
    }

    /// Signed terms joined by `+`/`-`; returns the value and the term count.
    fn sum(&mut self) -> Result<(QuadraticSurd, usize), LiteralError> {
        let mut total = QuadraticSurd::zero();
        let mut count = 0;
        loop {
            let at = self.pos;
            let negative = if self.eat("-") {
                true
            } else {
                self.eat("+");
                false
            };
            let t = self.term()?;
            let t = if negative { t.neg() } else { t };
            total = total.add(&t).map_err(|e| LiteralError {
                offset: at,
                message: e.to_string(),
            })?;
            count += 1;
            if !matches!(self.peek(), Some(b'+' | b'-')) {
                return Ok((total, count));
            }
        }
    }
}

pub fn parse_surd(text: &str) -> Result<QuadraticSurd, LiteralError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cur = Cursor {
        src: compact.as_bytes(),
        pos: 0,
    };
    if cur.peek().is_none() {
        return cur.fail("empty literal");
    }
    let (value, terms) = if cur.eat("(") {
        let inner = cur.sum()?;
        cur.expect(")")?;
        (inner.0, 1)
    } else {
        cur.sum()?
    };
    let value = if cur.eat("/") {
        if terms > 1 {
            return cur.fail("parenthesize a sum before dividing it");
        }
        let at = cur.pos;
        let c = cur.integer()?;
        value
            .div(&QuadraticSurd::from_integer(c))
            .map_err(|e| LiteralError {
                offset: at,
                message: e.to_string(),
            })?
    } else {
        value
    };
    if cur.peek().is_some() {
        return cur.fail("unexpected trailing input");
    }
    Ok(value)
}
