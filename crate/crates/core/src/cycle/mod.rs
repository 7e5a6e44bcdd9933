//! Product classes on the relative Hilbert scheme of the plane relative to a
//! line.
//!
//! A [`CycleClass`] records, for each point of a length-`n` subscheme, where it
//! is supported and with which multiplicity: base factors `α_a[m]` live on the
//! plane away from the line (support of dimension `a` = point, line, plane),
//! bubble factors `β_b^k[m]` live in the `k`-th bubble (support of dimension
//! `b` = a fibre or the whole bubble).

mod enumerate;
mod expr;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CycleError;

pub use enumerate::{enumerate_cycles, enumerate_cycles_where, enumerate_normal_cycles};
pub use expr::CycleExpr;
pub use parse::{parse_cycle, parse_expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseSupport {
    Point,
    Line,
    Plane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BubbleSupport {
    Point,
    Line,
}

impl BaseSupport {
    pub fn from_dim(dim: u8) -> Result<Self, CycleError> {
        match dim {
            0 => Ok(Self::Point),
            1 => Ok(Self::Line),
            2 => Ok(Self::Plane),
            d => Err(CycleError::InvalidSupport(d)),
        }
    }

    pub fn dim(self) -> u8 {
        self as u8
    }
}

impl BubbleSupport {
    pub fn from_dim(dim: u8) -> Result<Self, CycleError> {
        match dim {
            0 => Ok(Self::Point),
            1 => Ok(Self::Line),
            d => Err(CycleError::InvalidSupport(d)),
        }
    }

    pub fn dim(self) -> u8 {
        self as u8
    }
}

/// `α_a[m]`: a point of multiplicity `m` supported on the plane away from the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseFactor {
    pub support: BaseSupport,
    pub mult: u32,
}

/// `β_b[m]`: a point of multiplicity `m` in a bubble. The bubble index is
/// positional in the containing [`CycleClass`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BubbleFactor {
    pub support: BubbleSupport,
    pub mult: u32,
}

impl BaseFactor {
    pub const fn new(support: BaseSupport, mult: u32) -> Self {
        Self { support, mult }
    }

    /// Contribution to the normalized degree: `2a - 2`.
    pub fn tau(self) -> i64 {
        2 * i64::from(self.support.dim()) - 2
    }
}

impl BubbleFactor {
    pub const fn new(support: BubbleSupport, mult: u32) -> Self {
        Self { support, mult }
    }

    pub const fn point(mult: u32) -> Self {
        Self::new(BubbleSupport::Point, mult)
    }

    pub const fn line(mult: u32) -> Self {
        Self::new(BubbleSupport::Line, mult)
    }

    pub fn is_point(self) -> bool {
        self.support == BubbleSupport::Point
    }

    pub fn is_line(self) -> bool {
        self.support == BubbleSupport::Line
    }

    /// Contribution to the normalized degree, not counting the bubble's own `-2`.
    pub fn tau(self) -> i64 {
        2 * i64::from(self.support.dim())
    }
}

/// A product class: a multiset of base factors plus a dense, ordered list of
/// nonempty bubble multisets. Multisets are kept sorted, so derived equality,
/// hashing and ordering are multiset semantics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleClass {
    base: Vec<BaseFactor>,
    bubbles: Vec<Vec<BubbleFactor>>,
}

impl CycleClass {
    pub fn new(mut base: Vec<BaseFactor>, mut bubbles: Vec<Vec<BubbleFactor>>) -> Result<Self, CycleError> {
        if base.iter().any(|f| f.mult == 0) || bubbles.iter().flatten().any(|f| f.mult == 0) {
            return Err(CycleError::ZeroMultiplicity);
        }
        if let Some(k) = bubbles.iter().position(Vec::is_empty) {
            return Err(CycleError::EmptyBubble(k + 1));
        }
        base.sort_unstable();
        for b in &mut bubbles {
            b.sort_unstable();
        }
        Ok(Self { base, bubbles })
    }

    /// Constructor for callers that already guarantee nonempty bubbles and
    /// positive multiplicities; sorts the multisets.
    pub(crate) fn from_parts(mut base: Vec<BaseFactor>, mut bubbles: Vec<Vec<BubbleFactor>>) -> Self {
        debug_assert!(bubbles.iter().all(|b| !b.is_empty()), "empty bubble");
        base.sort_unstable();
        for b in &mut bubbles {
            b.sort_unstable();
        }
        Self { base, bubbles }
    }

    /// The class of the empty subscheme.
    pub fn empty() -> Self {
        Self {
            base: Vec::new(),
            bubbles: Vec::new(),
        }
    }

    pub fn base(&self) -> &[BaseFactor] {
        &self.base
    }

    pub fn bubbles(&self) -> &[Vec<BubbleFactor>] {
        &self.bubbles
    }

    pub fn num_bubbles(&self) -> usize {
        self.bubbles.len()
    }

    /// Bubble `k`, 1-based.
    pub fn bubble(&self, k: usize) -> Option<&[BubbleFactor]> {
        k.checked_sub(1).and_then(|i| self.bubbles.get(i)).map(Vec::as_slice)
    }

    /// Number of points counted with multiplicity.
    pub fn length(&self) -> u32 {
        self.base.iter().map(|f| f.mult).sum::<u32>() + self.bubbles.iter().flatten().map(|f| f.mult).sum::<u32>()
    }

    /// Normalized degree: `α_a` adds `2a - 2`, `β_b` adds `2b`, every bubble
    /// adds `-2`. The cohomological degree is `2 * length + tau`.
    pub fn tau_degree(&self) -> i64 {
        self.base.iter().map(|f| f.tau()).sum::<i64>() + self.bubbles.iter().map(|b| bubble_tau(b)).sum::<i64>()
    }

    pub fn degree(&self) -> i64 {
        2 * i64::from(self.length()) + self.tau_degree()
    }

    /// Only plane factors on the base; in each bubble at most one point-supported
    /// factor, whose multiplicity is `<=` every multiplicity in that bubble.
    pub fn is_canonical(&self) -> bool {
        self.base.iter().all(|f| f.support == BaseSupport::Plane) && self.bubbles.iter().all(|b| bubble_is_canonical(b))
    }

    /// Canonical, and every bubble (except the last) made of a single
    /// point-supported factor has multiplicity `<=` the minimum of the next bubble.
    pub fn is_normal(&self) -> bool {
        self.is_canonical() && self.first_normal_violation().is_none()
    }

    /// 1-based index of the first bubble that is not in canonical shape.
    pub fn first_noncanonical_bubble(&self) -> Option<usize> {
        self.bubbles.iter().position(|b| !bubble_is_canonical(b)).map(|i| i + 1)
    }

    /// 1-based index `k` of the first lone point bubble whose multiplicity
    /// exceeds the minimum of bubble `k + 1`.
    pub fn first_normal_violation(&self) -> Option<usize> {
        self.bubbles
            .windows(2)
            .position(|w| lone_point(&w[0]).is_some_and(|m| m > min_mult(&w[1])))
            .map(|i| i + 1)
    }
}

pub(crate) fn bubble_tau(b: &[BubbleFactor]) -> i64 {
    b.iter().map(|f| f.tau()).sum::<i64>() - 2
}

pub(crate) fn min_mult(b: &[BubbleFactor]) -> u32 {
    b.iter().map(|f| f.mult).min().expect("bubbles are nonempty")
}

/// Multiplicity of the sole factor when the bubble is a single point factor.
pub(crate) fn lone_point(b: &[BubbleFactor]) -> Option<u32> {
    match b {
        [f] if f.is_point() => Some(f.mult),
        _ => None,
    }
}

fn bubble_is_canonical(b: &[BubbleFactor]) -> bool {
    let mut points = b.iter().filter(|f| f.is_point());
    match (points.next(), points.next()) {
        (None, _) => true,
        (Some(p), None) => p.mult <= min_mult(b),
        (Some(_), Some(_)) => false,
    }
}

impl fmt::Display for BaseFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}[{}]", self.support.dim(), self.mult)
    }
}

impl fmt::Display for CycleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.base.is_empty() && self.bubbles.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if !std::mem::replace(&mut first, false) {
                write!(f, "*")
            } else {
                Ok(())
            }
        };
        for b in &self.base {
            sep(f)?;
            write!(f, "{b}")?;
        }
        for (k, bubble) in self.bubbles.iter().enumerate() {
            for b in bubble {
                sep(f)?;
                write!(f, "b{}^{}[{}]", b.support.dim(), k + 1, b.mult)?;
            }
        }
        Ok(())
    }
}

impl Serialize for CycleClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CycleClass {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_cycle(&s).map_err(serde::de::Error::custom)
    }
}
