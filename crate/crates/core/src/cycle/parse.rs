//! Text grammar for cycles and cycle expressions.
//!
//! ```text
//! factor     ::= ("a0" | "a1" | "a2") "[" int "]" | ("b0" | "b1") "^" int "[" int "]"
//! cycle      ::= factor ("*" factor)* | "1"
//! expression ::= "0" | [sign] [rational ["*"]] cycle (("+" | "-") [rational ["*"]] cycle)*
//! ```
//!
//! Whitespace is allowed between tokens. `1` is the empty cycle.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BaseFactor, BaseSupport, BubbleFactor, BubbleSupport, CycleClass, CycleExpr};
use crate::error::CycleError;
use crate::Rational;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Self { src: s.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, CycleError> {
        Err(CycleError::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), CycleError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> Result<&'a str, CycleError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small_int(&mut self) -> Result<u32, CycleError> {
        let start = self.pos;
        let d = self.digits()?;
        d.parse().or_else(|_| {
            self.pos = start;
            self.err("integer out of range")
        })
    }

    fn rational(&mut self) -> Result<Rational, CycleError> {
        let num: BigInt = self.digits()?.parse().expect("digits");
        if self.eat(b'/') {
            let at = self.pos;
            let den: BigInt = self.digits()?.parse().expect("digits");
            if den.is_zero() {
                self.pos = at;
                return self.err("zero denominator");
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn factor(&mut self, base: &mut Vec<BaseFactor>, bubbles: &mut Vec<(usize, BubbleFactor)>) -> Result<(), CycleError> {
        let start = self.pos;
        match self.peek() {
            Some(b'a') => {
                self.pos += 1;
                let dim = self.small_int()?;
                let support = u8::try_from(dim)
                    .map_err(|_| CycleError::InvalidSupport(u8::MAX))
                    .and_then(BaseSupport::from_dim)
                    .or_else(|_| {
                        self.pos = start;
                        self.err(format!("invalid base support a{dim}"))
                    })?;
                let mult = self.bracketed_mult()?;
                base.push(BaseFactor::new(support, mult));
            }
            Some(b'b') => {
                self.pos += 1;
                let dim = self.small_int()?;
                let support = u8::try_from(dim)
                    .map_err(|_| CycleError::InvalidSupport(u8::MAX))
                    .and_then(BubbleSupport::from_dim)
                    .or_else(|_| {
                        self.pos = start;
                        self.err(format!("invalid bubble support b{dim}"))
                    })?;
                self.expect(b'^')?;
                let at = self.pos;
                let k = self.small_int()? as usize;
                if k == 0 {
                    self.pos = at;
                    return self.err("bubble indices start at 1");
                }
                let mult = self.bracketed_mult()?;
                bubbles.push((k, BubbleFactor::new(support, mult)));
            }
            _ => return self.err("expected a factor 'a<d>[m]' or 'b<d>^<k>[m]'"),
        }
        Ok(())
    }

    fn bracketed_mult(&mut self) -> Result<u32, CycleError> {
        self.expect(b'[')?;
        let at = self.pos;
        let m = self.small_int()?;
        if m == 0 {
            self.pos = at;
            return self.err("multiplicity must be positive");
        }
        self.expect(b']')?;
        Ok(m)
    }

    fn cycle(&mut self) -> Result<CycleClass, CycleError> {
        let start = self.pos;
        if self.peek() == Some(b'1') {
            self.pos += 1;
            return Ok(CycleClass::empty());
        }
        let mut base = Vec::new();
        let mut tagged = Vec::new();
        self.factor(&mut base, &mut tagged)?;
        loop {
            let save = self.pos;
            self.skip_ws();
            if self.eat(b'*') {
                self.skip_ws();
                self.factor(&mut base, &mut tagged)?;
            } else {
                self.pos = save;
                break;
            }
        }
        let nb = tagged.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let mut bubbles = vec![Vec::new(); nb];
        for (k, f) in tagged {
            bubbles[k - 1].push(f);
        }
        CycleClass::new(base, bubbles).or_else(|e| {
            self.pos = start;
            self.err(e.to_string())
        })
    }

    fn term(&mut self) -> Result<(Rational, CycleClass), CycleError> {
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok((Rational::one(), self.cycle()?));
        }
        let coeff = self.rational()?;
        let save = self.pos;
        self.skip_ws();
        match self.peek() {
            Some(b'*') => {
                self.pos += 1;
                self.skip_ws();
                Ok((coeff, self.cycle()?))
            }
            Some(b'a' | b'b' | b'1') => Ok((coeff, self.cycle()?)),
            _ => {
                self.pos = save;
                Ok((coeff, CycleClass::empty()))
            }
        }
    }

    fn expr(&mut self) -> Result<CycleExpr, CycleError> {
        let mut e = CycleExpr::zero();
        self.skip_ws();
        let mut sign = Rational::one();
        if self.eat(b'-') {
            sign = -sign;
            self.skip_ws();
        } else if self.eat(b'+') {
            self.skip_ws();
        }
        loop {
            let (coeff, c) = self.term()?;
            e.add_term(c, coeff * &sign);
            self.skip_ws();
            match self.peek() {
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                None => break,
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
            self.pos += 1;
            self.skip_ws();
        }
        Ok(e)
    }
}

/// Parses a single product class, e.g. `a2[1]*b0^1[2]`.
pub fn parse_cycle(s: &str) -> Result<CycleClass, CycleError> {
    let mut p = Parser::new(s);
    p.skip_ws();
    let c = p.cycle()?;
    p.skip_ws();
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(c)
}

/// Parses a rational linear combination of cycles, e.g.
/// `a2[1]*b0^1[2] - 3 b1^1[1]*b1^2[1]`. The string `0` is the zero expression.
pub fn parse_expr(s: &str) -> Result<CycleExpr, CycleError> {
    Parser::new(s).expr()
}
