use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::SeriesError;
use crate::Rational;

/// A Laurent polynomial in `t` with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// coefficientwise equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    /// `coeff * t^exp`.
    pub fn monomial(coeff: Rational, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `c * t^exp` for an integer `c`.
    pub fn int_monomial(c: i64, exp: i64) -> Self {
        Self::monomial(Rational::from_integer(BigInt::from(c)), exp)
    }

    /// Builds a polynomial from `(exponent, integer coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_ints<I: IntoIterator<Item = (i64, i64)>>(pairs: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, Rational::from_integer(BigInt::from(c)));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exp: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// `t -> t^{-1}`.
    pub fn mirror(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, v)| (-e, v.clone())).collect(),
        }
    }

    /// Inverse of a unit, i.e. of a single term `c t^k` with `c != 0`.
    pub fn unit_inverse(&self) -> Result<Self, SeriesError> {
        if self.terms.len() != 1 {
            return Err(SeriesError::NonUnitConstantTerm(self.to_string()));
        }
        let (&e, c) = self.terms.iter().next().expect("one term");
        Ok(Self::monomial(c.recip(), -e))
    }

    /// Exact division. Fails when `divisor` does not divide `self` in the
    /// Laurent polynomial ring.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<Self, SeriesError> {
        let inexact = || SeriesError::InexactDivision {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        };
        let (dlo, dhi) = match (divisor.min_exp(), divisor.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Err(inexact()),
        };
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(top) = rem.max_exp() {
            let low = rem.min_exp().expect("nonempty");
            // a nonzero multiple spans at least the divisor's exponent range
            if top - low < dhi - dlo {
                return Err(inexact());
            }
            let q_exp = top - dhi;
            let q_coeff = rem.coeff(top) / &lead;
            let step = divisor.shift(q_exp).scale(&q_coeff);
            rem = &rem - &step;
            quot.add_term(q_exp, q_coeff);
        }
        Ok(quot)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (mag.is_one(), e) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "t")?,
                (true, _) => write!(f, "t^{e}")?,
                (false, 1) => write!(f, "{mag}*t")?,
                (false, _) => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_ints(pairs.iter().copied())
    }

    #[test]
    fn products() {
        // (1 + t^2)(1 - t^-2) = t^2 - t^-2
        assert_eq!(&lp(&[(0, 1), (2, 1)]) * &lp(&[(0, 1), (-2, -1)]), lp(&[(2, 1), (-2, -1)]));
        let a = lp(&[(3, 2), (-1, -5)]);
        assert_eq!(&a * &LaurentPoly::one(), a);
        // (t - t^-1)^2 = t^2 - 2 + t^-2
        let b = lp(&[(1, 1), (-1, -1)]);
        assert_eq!(&b * &b, lp(&[(2, 1), (0, -2), (-2, 1)]));
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let a = lp(&[(1, 1), (1, -1), (2, 0)]);
        assert!(a.is_zero());
        assert_eq!(a.num_terms(), 0);
    }

    #[test]
    fn exact_division() {
        let t2m1 = lp(&[(2, 1), (0, -1)]);
        // t^4 - t^-2 = (t^2 - 1)(t^2 + 1 + t^-2)
        let q = lp(&[(4, 1), (-2, -1)]).div_exact(&t2m1).unwrap();
        assert_eq!(q, lp(&[(2, 1), (0, 1), (-2, 1)]));
        assert!(lp(&[(2, 1)]).div_exact(&t2m1).is_err());
        assert!(lp(&[(3, 1), (0, 1)]).div_exact(&t2m1).is_err());
    }

    #[test]
    fn unit_inverse() {
        let u = LaurentPoly::int_monomial(3, 2);
        assert_eq!(&u * &u.unit_inverse().unwrap(), LaurentPoly::one());
        assert!(lp(&[(0, 1), (1, 1)]).unit_inverse().is_err());
        assert!(LaurentPoly::zero().unit_inverse().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(lp(&[(-2, 1), (0, 3), (1, -1)]).to_string(), "t^-2 + 3 - t");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
