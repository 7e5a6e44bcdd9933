//! Generating functions for Poincaré polynomials of Hilbert schemes of points:
//! Göttsche's product for a surface, the curve factor `C_D`, and the relative
//! formula `(t^2 - 1) Ĥ_S(q,t) / (t^2 C_D(q,t) - C_D(q,t^{-1}))`.
//!
//! Normalized series carry `t^{e}` for cohomological degree `e + 2n` at `q^n`.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::SeriesError;
use crate::series::{AffineExp, LaurentPoly, ProductFactor, QSeries, Sign};

/// Betti numbers `b0..b4` of a smooth surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceBetti {
    pub b0: u32,
    pub b1: u32,
    pub b2: u32,
    pub b3: u32,
    pub b4: u32,
}

/// Betti numbers `b0..b2` of a smooth curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveBetti {
    pub b0: u32,
    pub b1: u32,
    pub b2: u32,
}

impl SurfaceBetti {
    pub const PLANE: SurfaceBetti = SurfaceBetti::new([1, 0, 1, 0, 1]);

    pub const fn new(b: [u32; 5]) -> Self {
        Self {
            b0: b[0],
            b1: b[1],
            b2: b[2],
            b3: b[3],
            b4: b[4],
        }
    }

    fn as_array(self) -> [i64; 5] {
        [self.b0, self.b1, self.b2, self.b3, self.b4].map(i64::from)
    }
}

impl CurveBetti {
    pub const LINE: CurveBetti = CurveBetti::new([1, 0, 1]);
    pub const EMPTY: CurveBetti = CurveBetti::new([0, 0, 0]);

    pub const fn new(b: [u32; 3]) -> Self {
        Self {
            b0: b[0],
            b1: b[1],
            b2: b[2],
        }
    }
}

/// Product factors of Göttsche's formula. Odd classes appear in the numerator,
/// even classes in the denominator; class `i` with part `m` sits at
/// `t^{2m - 2 + i} q^m` (`t^{i - 2}` once normalized).
fn goettsche_factors(s: SurfaceBetti, normalized: bool) -> Vec<ProductFactor> {
    let per_m = if normalized { 0 } else { 2 };
    s.as_array()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b != 0)
        .map(|(i, &b)| {
            let t_exp = AffineExp::new(per_m, i as i64 - 2);
            if i % 2 == 1 {
                ProductFactor::new(Sign::Plus, t_exp, b)
            } else {
                ProductFactor::new(Sign::Minus, t_exp, -b)
            }
        })
        .collect()
}

/// Unnormalized `H_X(q,t) = sum_n q^n P_{X^[n]}(t)`.
pub fn goettsche_series(s: SurfaceBetti, order: usize) -> QSeries {
    QSeries::infinite_product(&goettsche_factors(s, false), order)
}

/// Normalized `Ĥ_X(q,t) = sum_n q^n t^{-2n} P_{X^[n]}(t)`.
pub fn goettsche_normalized(s: SurfaceBetti, order: usize) -> QSeries {
    QSeries::infinite_product(&goettsche_factors(s, true), order)
}

/// `C_D(q,t) = prod_m (1 + t^-1 q^m)^{b1} / ((1 - t^-2 q^m)^{b0} (1 - q^m)^{b2})`.
pub fn c_series(d: CurveBetti, order: usize) -> QSeries {
    let factors = [
        ProductFactor::new(Sign::Plus, AffineExp::constant(-1), i64::from(d.b1)),
        ProductFactor::new(Sign::Minus, AffineExp::constant(-2), -i64::from(d.b0)),
        ProductFactor::new(Sign::Minus, AffineExp::constant(0), -i64::from(d.b2)),
    ];
    QSeries::infinite_product(&factors, order)
}

fn t2_minus_1() -> LaurentPoly {
    LaurentPoly::from_ints([(2, 1), (0, -1)])
}

/// `numerator / denominator` where `denominator`'s constant term is `t^2 - 1`.
/// The denominator is divided by `t^2 - 1` first so its constant term becomes a
/// unit, and the numerator is taken without the `(t^2 - 1)` factor.
fn divide_by_t2m1_denominator(numerator: &QSeries, denominator: &QSeries) -> Result<QSeries, SeriesError> {
    let unit = denominator.div_coeffs_exact(&t2_minus_1())?;
    Ok(numerator * &unit.inverse()?)
}

/// Normalized generating function of the relative Hilbert schemes of `S`
/// relative to a smooth divisor `D`.
pub fn relative_series(s: SurfaceBetti, d: CurveBetti, order: usize) -> Result<QSeries, SeriesError> {
    let h = goettsche_normalized(s, order);
    let c = c_series(d, order);
    let den = &c.scale(&LaurentPoly::int_monomial(1, 2)) - &c.substitute_t_inverse();
    divide_by_t2m1_denominator(&h, &den)
}

/// Closed form for the plane relative to a line:
/// `(t^2 - 1) / (t^2 prod_m (1 - t^2 q^m) - prod_m (1 - t^-2 q^m))`.
pub fn plane_relative_series(order: usize) -> QSeries {
    let up = QSeries::infinite_product(
        &[ProductFactor::new(Sign::Minus, AffineExp::constant(2), 1)],
        order,
    );
    let down = QSeries::infinite_product(
        &[ProductFactor::new(Sign::Minus, AffineExp::constant(-2), 1)],
        order,
    );
    let den = &up.scale(&LaurentPoly::int_monomial(1, 2)) - &down;
    divide_by_t2m1_denominator(&QSeries::one(order), &den)
        .expect("the plane denominator is t^2 - 1 times a unit series")
}

/// Betti numbers of the space of `n` points, read off the normalized series:
/// the coefficient of `t^e` at `q^n` is the Betti number in degree `e + 2n`.
pub fn betti_table(series: &QSeries, n: usize) -> Result<BTreeMap<i64, u64>, SeriesError> {
    let coeff = series.try_coeff(n)?;
    let mut out = BTreeMap::new();
    for (e, v) in coeff.terms() {
        let value = if v.is_integer() && !v.is_negative() {
            v.to_integer().to_u64()
        } else {
            None
        };
        let degree = e + 2 * n as i64;
        match value {
            Some(b) if degree >= 0 => {
                out.insert(degree, b);
            }
            _ => {
                return Err(SeriesError::NegativeOrFractionalBetti {
                    n,
                    exponent: e,
                    value: v.to_string(),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::lp;

    #[test]
    fn goettsche_low_coefficients() {
        let s = SurfaceBetti::new([1, 2, 3, 4, 5]);
        let h = goettsche_series(s, 3);
        assert_eq!(h.coeff(0), &LaurentPoly::one());
        assert_eq!(h.coeff(1), &lp(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]));
    }

    #[test]
    fn normalized_plane() {
        let h = goettsche_normalized(SurfaceBetti::PLANE, 6);
        assert_eq!(h.coeff(0), &LaurentPoly::one());
        assert_eq!(h.coeff(1), &lp(&[(-2, 1), (0, 1), (2, 1)]));
        let displayed = QSeries::infinite_product(
            &[
                ProductFactor::new(Sign::Minus, AffineExp::constant(-2), -1),
                ProductFactor::new(Sign::Minus, AffineExp::constant(0), -1),
                ProductFactor::new(Sign::Minus, AffineExp::constant(2), -1),
            ],
            6,
        );
        assert_eq!(h, displayed);
    }

    #[test]
    fn curve_factor() {
        let c = c_series(CurveBetti::LINE, 4);
        assert_eq!(c.coeff(1), &lp(&[(-2, 1), (0, 1)]));
        assert!(c_series(CurveBetti::EMPTY, 4).is_one());
    }

    #[test]
    fn relative_plane_matches_closed_form() {
        let r = relative_series(SurfaceBetti::PLANE, CurveBetti::LINE, 6).unwrap();
        assert_eq!(r.coeff(0), &LaurentPoly::one());
        assert_eq!(r.coeff(1), &lp(&[(-2, 1), (0, 1), (2, 1)]));
        assert_eq!(r, plane_relative_series(6));
    }

    #[test]
    fn plane_second_coefficient() {
        let p = plane_relative_series(2);
        assert_eq!(p.coeff(2), &lp(&[(-4, 1), (-2, 3), (0, 4), (2, 3), (4, 1)]));
    }

    #[test]
    fn betti_tables() {
        let p = plane_relative_series(3);
        assert_eq!(betti_table(&p, 0).unwrap(), BTreeMap::from([(0, 1)]));
        assert_eq!(betti_table(&p, 1).unwrap(), BTreeMap::from([(0, 1), (2, 1), (4, 1)]));
        assert_eq!(
            betti_table(&p, 2).unwrap(),
            BTreeMap::from([(0, 1), (2, 3), (4, 4), (6, 3), (8, 1)])
        );
        assert!(matches!(betti_table(&p, 4), Err(SeriesError::BeyondOrder { .. })));
    }

    #[test]
    fn betti_rejects_negative_and_fractional() {
        let s = QSeries::from_coeffs(vec![LaurentPoly::one(), lp(&[(0, -1)])]);
        assert!(matches!(
            betti_table(&s, 1),
            Err(SeriesError::NegativeOrFractionalBetti { .. })
        ));
        let half = QSeries::from_coeffs(vec![LaurentPoly::monomial(crate::Rational::new(1.into(), 2.into()), 0)]);
        assert!(betti_table(&half, 0).is_err());
    }

    #[test]
    fn degenerate_divisor_is_ordinary_hilbert_scheme() {
        let s = SurfaceBetti::new([1, 2, 5, 2, 1]);
        let r = relative_series(s, CurveBetti::EMPTY, 6).unwrap();
        assert_eq!(r, goettsche_normalized(s, 6));
    }
}
