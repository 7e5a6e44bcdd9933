use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{parse_expr, CycleClass};
use crate::Rational;

/// A formal rational linear combination of product classes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CycleExpr {
    terms: BTreeMap<CycleClass, Rational>,
}

impl CycleExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_cycle(c: CycleClass) -> Self {
        let mut e = Self::zero();
        e.add_term(c, Rational::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, c: &CycleClass) -> Rational {
        self.terms.get(c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains(&self, c: &CycleClass) -> bool {
        self.terms.contains_key(c)
    }

    /// Terms in ascending cycle order.
    pub fn terms(&self) -> impl Iterator<Item = (&CycleClass, &Rational)> {
        self.terms.iter()
    }

    pub fn cycles(&self) -> impl Iterator<Item = &CycleClass> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, c: CycleClass, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(c) {
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

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &CycleExpr, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (c, v) in &other.terms {
            self.add_term(c.clone(), v * scale);
        }
    }

    pub fn scaled(&self, scale: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn sub(&self, other: &CycleExpr) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    /// Common length of all terms; `None` for the zero expression.
    pub fn length(&self) -> Option<u32> {
        self.homogeneous_by(|c| i64::from(c.length())).map(|l| l as u32)
    }

    /// Common normalized degree of all terms, if the expression is homogeneous.
    pub fn tau_degree(&self) -> Option<i64> {
        self.homogeneous_by(CycleClass::tau_degree)
    }

    /// Distinct lengths among the terms, ascending.
    pub fn lengths(&self) -> Vec<u32> {
        let mut ls: Vec<u32> = self.terms.keys().map(CycleClass::length).collect();
        ls.sort_unstable();
        ls.dedup();
        ls
    }

    pub fn is_tau_homogeneous(&self) -> bool {
        self.is_zero() || self.tau_degree().is_some()
    }

    fn homogeneous_by(&self, f: impl Fn(&CycleClass) -> i64) -> Option<i64> {
        let mut it = self.terms.keys().map(f);
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }
}

impl FromIterator<(CycleClass, Rational)> for CycleExpr {
    fn from_iter<I: IntoIterator<Item = (CycleClass, Rational)>>(iter: I) -> Self {
        let mut e = Self::zero();
        for (c, v) in iter {
            e.add_term(c, v);
        }
        e
    }
}

impl fmt::Display for CycleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first, as in enumeration
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(c, _)| std::cmp::Reverse(c.degree()));
        for (i, (c, v)) in terms.into_iter().enumerate() {
            let mag = v.abs();
            match (i, v.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for CycleExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CycleExpr {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_expr(&s).map_err(serde::de::Error::custom)
    }
}
