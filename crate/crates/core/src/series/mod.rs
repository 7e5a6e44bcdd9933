//! Exact truncated power series in `q` whose coefficients are Laurent
//! polynomials in `t` over the rationals.
//!
//! A [`QSeries`] of order `N` tracks the coefficients of `q^0 ..= q^N`. Binary
//! operations on series of different orders truncate to the smaller order.

mod laurent;

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use laurent::LaurentPoly;

use crate::error::SeriesError;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<LaurentPoly>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// An exponent of `t` that depends affinely on the product index `m`:
/// `per_m * m + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineExp {
    pub per_m: i64,
    pub offset: i64,
}

impl AffineExp {
    pub const fn constant(offset: i64) -> Self {
        Self { per_m: 0, offset }
    }

    pub const fn new(per_m: i64, offset: i64) -> Self {
        Self { per_m, offset }
    }

    pub fn at(self, m: u64) -> i64 {
        self.per_m * m as i64 + self.offset
    }
}

/// One family of factors `(1 + sign * t^{t_exp(m)} * q^m)^power`, `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductFactor {
    pub sign: Sign,
    pub t_exp: AffineExp,
    pub power: i64,
}

impl ProductFactor {
    pub const fn new(sign: Sign, t_exp: AffineExp, power: i64) -> Self {
        Self { sign, t_exp, power }
    }
}

/// Generalized binomial coefficients `C(p, 0..=kmax)`, valid for negative `p`.
fn binomials(p: i64, kmax: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut c = BigInt::one();
    out.push(c.clone());
    for k in 1..=kmax {
        c = c * BigInt::from(p - k as i64 + 1) / BigInt::from(k as i64);
        out.push(c.clone());
    }
    out
}

impl QSeries {
    pub fn from_coeffs(coeffs: Vec<LaurentPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series tracks at least q^0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::from_coeffs(vec![LaurentPoly::zero(); order + 1])
    }

    pub fn one(order: usize) -> Self {
        Self::constant(LaurentPoly::one(), order)
    }

    pub fn constant(c: LaurentPoly, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`. Panics when `n` exceeds the order.
    pub fn coeff(&self, n: usize) -> &LaurentPoly {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn try_coeff(&self, n: usize) -> Result<&LaurentPoly, SeriesError> {
        self.coeffs.get(n).ok_or(SeriesError::BeyondOrder {
            n,
            order: self.order(),
        })
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Self::from_coeffs(self.coeffs[..=keep].to_vec())
    }

    fn map_coeffs(&self, f: impl Fn(usize, &LaurentPoly) -> LaurentPoly) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().map(|(n, c)| f(n, c)).collect())
    }

    /// Multiplies every coefficient by a Laurent polynomial.
    pub fn scale(&self, c: &LaurentPoly) -> Self {
        self.map_coeffs(|_, a| a * c)
    }

    /// Divides every coefficient exactly by `c`.
    pub fn div_coeffs_exact(&self, c: &LaurentPoly) -> Result<Self, SeriesError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.div_exact(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    /// Multiplicative inverse up to the truncation order. The constant term
    /// must be a single monomial `c t^k` with `c != 0`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let inv0 = self.coeffs[0].unit_inverse()?;
        let n = self.order();
        let mut out = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = LaurentPoly::zero();
            for i in 1..=k {
                if self.coeffs[i].is_zero() || out[k - i].is_zero() {
                    continue;
                }
                acc += &(&self.coeffs[i] * &out[k - i]);
            }
            out.push(-&(&acc * &inv0));
        }
        Ok(Self::from_coeffs(out))
    }

    /// Multiplies by `(1 + sign * t^t_exp * q^q_exp)^power`. Negative powers use
    /// the geometric (negative binomial) expansion.
    pub fn mul_factor(&self, sign: Sign, t_exp: i64, q_exp: usize, power: i64) -> Self {
        assert!(q_exp >= 1, "factor must involve a positive power of q");
        if power == 0 {
            return self.clone();
        }
        let n = self.order();
        let kmax = n / q_exp;
        let binom = binomials(power, kmax);
        // (sign t^e)^k C(power, k) at q^{k q_exp}
        let factor: Vec<LaurentPoly> = (0..=kmax)
            .map(|k| {
                let c = &binom[k] * BigInt::from(sign.as_int().pow(k as u32));
                LaurentPoly::monomial(Rational::from_integer(c), t_exp * k as i64)
            })
            .collect();
        let mut out = vec![LaurentPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, f) in factor.iter().enumerate() {
                let j = i + k * q_exp;
                if j > n {
                    break;
                }
                if f.is_zero() {
                    continue;
                }
                out[j] += &(a * f);
            }
        }
        Self::from_coeffs(out)
    }

    /// `prod_{m >= 1} prod_{f in factors} (1 + f.sign t^{f.t_exp(m)} q^m)^{f.power}`
    /// truncated at `q^order`. Factors with `m > order` are `1` modulo
    /// `q^{order + 1}`, so the product over `m = 1..=order` is exact.
    pub fn infinite_product(factors: &[ProductFactor], order: usize) -> Self {
        let mut acc = Self::one(order);
        for m in 1..=order {
            for f in factors {
                acc = acc.mul_factor(f.sign, f.t_exp.at(m as u64), m, f.power);
            }
        }
        acc
    }

    /// `t -> t^{-1}` in every coefficient.
    pub fn substitute_t_inverse(&self) -> Self {
        self.map_coeffs(|_, a| a.mirror())
    }

    /// `q -> q t`: the coefficient of `q^n` is multiplied by `t^n`.
    pub fn substitute_q_times_t(&self) -> Self {
        self.substitute_q_times_t_pow(1)
    }

    /// `q -> q t^k`: the coefficient of `q^n` is multiplied by `t^{k n}`.
    pub fn substitute_q_times_t_pow(&self, k: i64) -> Self {
        self.map_coeffs(|n, a| a.shift(k * n as i64))
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let n = self.order().min(rhs.order());
        let mut out = vec![LaurentPoly::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] += &(&self.coeffs[i] * &rhs.coeffs[j]);
            }
        }
        QSeries::from_coeffs(out)
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let n = self.order().min(rhs.order());
        QSeries::from_coeffs((0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect())
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let n = self.order().min(rhs.order());
        QSeries::from_coeffs((0..=n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*q")?,
                _ => write!(f, "({c})*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// Integer-valued helper for tests and callers building series by hand.
pub fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_ints(pairs.iter().copied())
}

/// Rational helper: `Rational::from_integer(n)`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl QSeries {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == LaurentPoly::one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(order: usize) -> QSeries {
        QSeries::from_coeffs(vec![LaurentPoly::one(); order + 1])
    }

    fn one_minus_q(order: usize) -> QSeries {
        let mut c = vec![LaurentPoly::zero(); order + 1];
        c[0] = LaurentPoly::one();
        c[1] = lp(&[(0, -1)]);
        QSeries::from_coeffs(c)
    }

    #[test]
    fn mul_inverse_pair_and_identity() {
        assert!((&one_minus_q(6) * &geometric(6)).is_one());
        let a = QSeries::from_coeffs(vec![lp(&[(1, 2)]), lp(&[(-1, 3), (2, 1)]), lp(&[(0, -4)])]);
        assert_eq!(&a * &QSeries::one(2), a);
    }

    #[test]
    fn mul_forced() {
        // (1 - t^2 q)(1 - t^-2 q) = 1 - (t^2 + t^-2) q + q^2
        let a = QSeries::from_coeffs(vec![lp(&[(0, 1)]), lp(&[(2, -1)]), LaurentPoly::zero()]);
        let b = QSeries::from_coeffs(vec![lp(&[(0, 1)]), lp(&[(-2, -1)]), LaurentPoly::zero()]);
        let expect = QSeries::from_coeffs(vec![lp(&[(0, 1)]), lp(&[(2, -1), (-2, -1)]), lp(&[(0, 1)])]);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn mixed_order_truncates_to_min() {
        let p = &geometric(3) * &geometric(5);
        assert_eq!(p.order(), 3);
        assert_eq!((&geometric(3) + &geometric(5)).order(), 3);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(one_minus_q(5).inverse().unwrap(), geometric(5));
        let unit = QSeries::constant(lp(&[(2, 1)]), 3);
        assert_eq!(unit.inverse().unwrap(), QSeries::constant(lp(&[(-2, 1)]), 3));
        let bad = QSeries::constant(lp(&[(2, 1), (0, -1)]), 3);
        assert!(matches!(bad.inverse(), Err(SeriesError::NonUnitConstantTerm(_))));
        assert!(QSeries::zero(2).inverse().is_err());
    }

    #[test]
    fn inverse_of_plane_denominator_to_first_order() {
        // denominator (t^2 - 1) - (t^4 - t^-2) q; dividing by (t^2 - 1) and
        // inverting gives 1 + (t^2 + 1 + t^-2) q to first order.
        let t2m1 = lp(&[(2, 1), (0, -1)]);
        let den = QSeries::from_coeffs(vec![t2m1.clone(), lp(&[(4, -1), (-2, 1)])]);
        let inv = den.div_coeffs_exact(&t2m1).unwrap().inverse().unwrap();
        assert_eq!(inv.coeff(0), &LaurentPoly::one());
        assert_eq!(inv.coeff(1), &lp(&[(2, 1), (0, 1), (-2, 1)]));
    }

    #[test]
    fn factor_examples() {
        // 1/(1 - t^2 q) = sum t^{2m} q^m
        let g = QSeries::one(4).mul_factor(Sign::Minus, 2, 1, -1);
        for m in 0..=4 {
            assert_eq!(g.coeff(m), &lp(&[(2 * m as i64, 1)]));
        }
        let a = geometric(3);
        assert_eq!(a.mul_factor(Sign::Plus, 7, 2, 0), a);
        // (1 - t^2 q)(1 - t^2 q^2)(1 - t^2 q^3), expanded by hand
        let p = QSeries::one(3)
            .mul_factor(Sign::Minus, 2, 1, 1)
            .mul_factor(Sign::Minus, 2, 2, 1)
            .mul_factor(Sign::Minus, 2, 3, 1);
        let expect = QSeries::from_coeffs(vec![
            lp(&[(0, 1)]),
            lp(&[(2, -1)]),
            lp(&[(2, -1)]),
            lp(&[(4, 1), (2, -1)]),
        ]);
        assert_eq!(p, expect);
    }

    #[test]
    fn infinite_products() {
        let euler = [ProductFactor::new(Sign::Minus, AffineExp::constant(0), -1)];
        let p = QSeries::infinite_product(&euler, 5);
        let counts: Vec<_> = p.coeffs().iter().map(|c| c.coeff(0)).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7].map(int));
        assert!(QSeries::infinite_product(&[], 4).is_one());
        let f = [ProductFactor::new(Sign::Minus, AffineExp::constant(-2), 1)];
        let expect = QSeries::from_coeffs(vec![lp(&[(0, 1)]), lp(&[(-2, -1)]), lp(&[(-2, -1)])]);
        assert_eq!(QSeries::infinite_product(&f, 2), expect);
    }

    #[test]
    fn substitutions() {
        let sym = QSeries::from_coeffs(vec![lp(&[(0, 1)]), lp(&[(2, 1), (-2, 1)])]);
        assert_eq!(sym.substitute_t_inverse(), sym);
        let c = QSeries::constant(lp(&[(2, 1)]), 2);
        assert_eq!(c.substitute_t_inverse(), QSeries::constant(lp(&[(-2, 1)]), 2));
        assert_eq!(c.substitute_q_times_t(), c);
        let s = QSeries::from_coeffs(vec![LaurentPoly::zero(), lp(&[(-2, 1)])]);
        assert_eq!(s.substitute_q_times_t().coeff(1), &lp(&[(-1, 1)]));
        let p2 = QSeries::from_coeffs(vec![lp(&[(0, 1)]), lp(&[(-2, 1), (0, 1), (2, 1)])]);
        assert_eq!(p2.substitute_q_times_t().coeff(1), &lp(&[(-1, 1), (1, 1), (3, 1)]));
    }
}
