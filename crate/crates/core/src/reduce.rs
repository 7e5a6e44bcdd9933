//! Rewriting to canonical and normal form.
//!
//! Every rewrite step picks the offending cycle `X` with the smallest
//! [`Offense`], builds a relation `r` (or a signed sum of two) containing `X`
//! with coefficient `κ`, and replaces `e` by `e - (c_X / κ) r`. The steps are
//! recorded, so the output is `input + Σ coefficient · relation` exactly.
//!
//! Normal-form rewrites may produce cycles that are no longer canonical; they
//! are fixed by canonical rewrites before any further normal rewrite, since
//! offenses against canonical shape always sort first.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cycle::{lone_point, min_mult, BaseSupport, BubbleFactor, CycleClass, CycleExpr};
use crate::error::RelationError;
use crate::relations::{line_line, point_line, point_point, push, replace_in_bubble, RelationInstance};
use crate::Rational;

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Why a cycle is not in normal form, ordered by rewrite priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Offense {
    /// A point- or line-supported base factor.
    Base,
    /// Bubble `k` holds two point factors, or its point is not of minimal multiplicity.
    Bubble(usize),
    /// Bubble `k` is a lone point heavier than the minimum of bubble `k + 1`.
    Order(usize),
}

impl Offense {
    pub fn is_canonical_offense(self) -> bool {
        !matches!(self, Offense::Order(_))
    }
}

pub fn offense(c: &CycleClass) -> Option<Offense> {
    if c.base().iter().any(|f| f.support != BaseSupport::Plane) {
        return Some(Offense::Base);
    }
    if let Some(k) = c.first_noncanonical_bubble() {
        return Some(Offense::Bubble(k));
    }
    c.first_normal_violation().map(Offense::Order)
}

/// Termination measure for the normal-form rewrites: the number of pairs
/// `(p, k)` where `p` is a lone point-supported factor of some bubble and `k`
/// is a deeper bubble holding a factor of smaller multiplicity than `p`.
pub fn measure_a(c: &CycleClass) -> usize {
    let bubbles = c.bubbles();
    bubbles
        .iter()
        .enumerate()
        .filter_map(|(i, b)| lone_point(b).map(|m| (i, m)))
        .map(|(i, m)| bubbles[i + 1..].iter().filter(|deeper| min_mult(deeper) < m).count())
        .sum()
}

/// One recorded rewrite: `coefficient · relation` was added to the expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    #[serde(flatten)]
    pub relation: RelationInstance,
    #[serde(with = "rational_string")]
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub input: CycleExpr,
    pub output: CycleExpr,
    pub certificate: Vec<CertificateEntry>,
}

impl Reduction {
    fn identity(e: &CycleExpr) -> Self {
        Self {
            input: e.clone(),
            output: e.clone(),
            certificate: Vec::new(),
        }
    }

    /// Recomputes `input + Σ coefficient · relation` from scratch, rebuilding
    /// every relation from its identifying fields, and compares with `output`.
    /// Works on certificates read back from JSON, which carry no expressions.
    pub fn verify(&self) -> bool {
        let mut acc = self.input.clone();
        for entry in &self.certificate {
            let r = &entry.relation;
            match RelationInstance::rebuild(r.kind, &r.source, r.bubble_index, &r.mults) {
                Ok(again) => acc.add_scaled(&again.expr, &entry.coefficient),
                Err(_) => return false,
            }
        }
        acc == self.output
    }

    /// Appends the steps of a reduction that started from this one's output.
    pub fn then(mut self, next: Reduction) -> Self {
        debug_assert_eq!(self.output, next.input);
        self.output = next.output;
        self.certificate.extend(next.certificate);
        self
    }
}

/// Rewriting engine with a step bound.
#[derive(Debug, Clone, Copy)]
pub struct Reducer {
    pub max_steps: usize,
}

impl Default for Reducer {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl Reducer {
    pub fn new(max_steps: usize) -> Self {
        Self { max_steps }
    }

    /// Rewrites until every cycle is canonical.
    pub fn to_canonical(&self, e: &CycleExpr) -> Result<Reduction, RelationError> {
        self.run(e, |o| o.is_canonical_offense())
    }

    /// Rewrites a canonical expression until every cycle is normal.
    pub fn to_normal(&self, e: &CycleExpr) -> Result<Reduction, RelationError> {
        if let Some(c) = e.cycles().find(|c| !c.is_canonical()) {
            return Err(RelationError::PreconditionViolated(format!("{c} is not canonical")));
        }
        self.run(e, |_| true)
    }

    /// Canonical reduction followed by normal reduction.
    pub fn reduce(&self, e: &CycleExpr) -> Result<Reduction, RelationError> {
        let canonical = self.to_canonical(e)?;
        let normal = self.to_normal(&canonical.output)?;
        Ok(canonical.then(normal))
    }

    /// Applies the push relation of `target` to `c` first, then reduces the
    /// result.
    pub fn reduce_after_push(&self, c: &CycleClass, target: crate::cycle::BaseFactor) -> Result<Reduction, RelationError> {
        let input = CycleExpr::from_cycle(c.clone());
        let r = push(c, target)?;
        let mut first = Reduction::identity(&input);
        apply(&mut first, r, -Rational::one());
        let rest = self.reduce(&first.output)?;
        Ok(first.then(rest))
    }

    fn run(&self, e: &CycleExpr, wanted: impl Fn(Offense) -> bool) -> Result<Reduction, RelationError> {
        let mut red = Reduction::identity(e);
        for _ in 0..self.max_steps {
            let next = red
                .output
                .cycles()
                .filter_map(|c| offense(c).filter(|&o| wanted(o)).map(|o| (o, c)))
                .min();
            let Some((o, x)) = next else {
                return Ok(red);
            };
            let x = x.clone();
            let cx = red.output.coeff(&x);
            let step = rewrite(&x, o);
            let kappa = step.iter().map(|(r, w)| r.expr.coeff(&x) * w).fold(Rational::zero(), |a, b| a + b);
            debug_assert!(!kappa.is_zero(), "rewrite for {x} does not contain it");
            let scale = -(cx / kappa);
            for (r, w) in step {
                apply(&mut red, r, &scale * w);
            }
            debug_assert!(!red.output.contains(&x));
        }
        Err(RelationError::NonTermination(self.max_steps))
    }
}

/// The combined relation used to rewrite `x`, scaled so that `x` has
/// coefficient one; `None` when `x` is already normal.
pub fn rewrite_relation(x: &CycleClass) -> Option<CycleExpr> {
    let mut sum = CycleExpr::zero();
    for (r, w) in rewrite(x, offense(x)?) {
        sum.add_scaled(&r.expr, &w);
    }
    let kappa = sum.coeff(x);
    Some(sum.scaled(&kappa.recip()))
}

fn apply(red: &mut Reduction, relation: RelationInstance, coefficient: Rational) {
    red.output.add_scaled(&relation.expr, &coefficient);
    red.certificate.push(CertificateEntry { relation, coefficient });
}

/// Relations (with integer weights) whose weighted sum contains `x` with a
/// nonzero coefficient and otherwise only cycles closer to normal form.
fn rewrite(x: &CycleClass, o: Offense) -> Vec<(RelationInstance, Rational)> {
    let one = Rational::one();
    let single = |r: Result<RelationInstance, RelationError>| vec![(r.expect("rewrite source is well formed"), one.clone())];
    match o {
        Offense::Base => {
            let target = *x
                .base()
                .iter()
                .find(|f| f.support != BaseSupport::Plane)
                .expect("offending base factor");
            single(push(x, target))
        }
        Offense::Bubble(i) => {
            let bubble = x.bubble(i).expect("offending bubble");
            let mut points: Vec<u32> = bubble.iter().filter(|f| f.is_point()).map(|f| f.mult).collect();
            points.sort_unstable();
            if let [b, a, ..] = points[..] {
                // x is the stabilized term of the point-line relation whose
                // line a degrades to the second point
                let src = replace_in_bubble(x, i, BubbleFactor::point(a), BubbleFactor::line(a));
                single(point_line(&src, i, a, b))
            } else {
                // lone point b above a lighter line a: x is the degraded-b term
                // of the line-line relation on lines a and b
                let b = points[0];
                let a = bubble.iter().filter(|f| f.is_line()).map(|f| f.mult).min().expect("lighter line");
                let src = replace_in_bubble(x, i, BubbleFactor::point(b), BubbleFactor::line(b));
                single(line_line(&src, i, a, b))
            }
        }
        Offense::Order(k) => {
            let a = lone_point(x.bubble(k).expect("offending bubble")).expect("lone point");
            let next = x.bubble(k + 1).expect("next bubble");
            let merged = merge_with_next(x, k);
            if let Some(b) = next.iter().find(|f| f.is_point()).map(|f| f.mult) {
                single(point_point(&merged, k, a, b))
            } else {
                // two point-line relations on the merged bubble, with the lone
                // point and the lightest line of k + 1 exchanging roles
                let b = min_mult(next);
                let with_line_b = merged;
                let with_line_a = replace_in_bubble(
                    &replace_in_bubble(&with_line_b, k, BubbleFactor::point(a), BubbleFactor::line(a)),
                    k,
                    BubbleFactor::line(b),
                    BubbleFactor::point(b),
                );
                vec![
                    (point_line(&with_line_b, k, b, a).expect("merged bubble has line b and point a"), one.clone()),
                    (point_line(&with_line_a, k, a, b).expect("merged bubble has line a and point b"), -one),
                ]
            }
        }
    }
}

/// `x` with bubbles `k` and `k + 1` merged into one.
fn merge_with_next(x: &CycleClass, k: usize) -> CycleClass {
    let mut bubbles = x.bubbles().to_vec();
    let next = bubbles.remove(k);
    bubbles[k - 1].extend(next);
    CycleClass::from_parts(x.base().to_vec(), bubbles)
}

pub fn reduce_to_canonical(e: &CycleExpr) -> Result<Reduction, RelationError> {
    Reducer::default().to_canonical(e)
}

pub fn reduce_to_normal(e: &CycleExpr) -> Result<Reduction, RelationError> {
    Reducer::default().to_normal(e)
}

/// The full pipeline: canonical form, then normal form.
pub fn reduce(e: &CycleExpr) -> Result<Reduction, RelationError> {
    Reducer::default().reduce(e)
}

mod rational_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
