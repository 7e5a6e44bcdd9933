//! The four families of geometric relations among product classes.
//!
//! Each constructor returns a [`RelationInstance`] whose expression is
//! `LHS - RHS` of the relation and therefore represents zero in cohomology.
//! Products of the form `∏ (x + y)` over the remaining points are expanded
//! distributively with every factor occurrence treated as distinct, so equal
//! points produce binomial coefficients on the resulting multiset classes.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cycle::{enumerate_cycles, BaseFactor, BaseSupport, BubbleFactor, BubbleSupport, CycleClass, CycleExpr};
use crate::error::RelationError;
use crate::par::{par_map, Execution};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    PushPoint,
    PushLine,
    PointPoint,
    PointLine,
    LineLine,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationKind::PushPoint => "push-point",
            RelationKind::PushLine => "push-line",
            RelationKind::PointPoint => "point-point",
            RelationKind::PointLine => "point-line",
            RelationKind::LineLine => "line-line",
        };
        f.write_str(s)
    }
}

/// One instance of a relation family. `mults` names the designated points:
/// the pushed point for push relations, `[a, b]` for the bubble relations
/// (for point-line, `a` is the line-supported point).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelationInstance {
    pub kind: RelationKind,
    pub source: CycleClass,
    pub bubble_index: Option<usize>,
    pub mults: Vec<u32>,
    #[serde(skip)]
    pub expr: CycleExpr,
}

impl RelationInstance {
    /// Identity of the instance, independent of its expression.
    pub fn key(&self) -> (RelationKind, &CycleClass, Option<usize>, &[u32]) {
        (self.kind, &self.source, self.bubble_index, &self.mults)
    }

    /// Rebuilds the expression from the identifying fields.
    pub fn rebuild(kind: RelationKind, source: &CycleClass, bubble_index: Option<usize>, mults: &[u32]) -> Result<Self, RelationError> {
        let two = |m: &[u32]| match m {
            [a, b] => Ok((*a, *b)),
            _ => Err(RelationError::PreconditionViolated(format!("{kind} needs two multiplicities"))),
        };
        let bubble = || bubble_index.ok_or_else(|| RelationError::PreconditionViolated(format!("{kind} needs a bubble index")));
        match kind {
            RelationKind::PushPoint | RelationKind::PushLine => {
                let [m] = mults else {
                    return Err(RelationError::PreconditionViolated(format!("{kind} needs one multiplicity")));
                };
                if kind == RelationKind::PushPoint {
                    push_zero_cycle(source, *m)
                } else {
                    push_one_cycle(source, *m)
                }
            }
            RelationKind::PointPoint => {
                let (a, b) = two(mults)?;
                point_point(source, bubble()?, a, b)
            }
            RelationKind::PointLine => {
                let (a, b) = two(mults)?;
                point_line(source, bubble()?, a, b)
            }
            RelationKind::LineLine => {
                let (a, b) = two(mults)?;
                line_line(source, bubble()?, a, b)
            }
        }
    }
}

fn remove_one<T: PartialEq>(v: &mut Vec<T>, x: &T) -> bool {
    match v.iter().position(|y| y == x) {
        Some(i) => {
            v.remove(i);
            true
        }
        None => false,
    }
}

/// Adds `sign * Σ_{S ⊆ movers}` of the cycle obtained by replacing bubble `i`
/// (0-based) with `keep ∪ (movers ∖ S)` and inserting a new bubble
/// `lift ∪ S` right after it; later bubbles move one step deeper.
#[allow(clippy::too_many_arguments)]
fn split_bubble(
    base: &[BaseFactor],
    bubbles: &[Vec<BubbleFactor>],
    i: usize,
    keep: &[BubbleFactor],
    lift: &[BubbleFactor],
    movers: &[BubbleFactor],
    sign: &Rational,
    out: &mut CycleExpr,
) {
    debug_assert!(!keep.is_empty() && !lift.is_empty());
    for mask in 0u64..(1u64 << movers.len()) {
        let mut stay = keep.to_vec();
        let mut go = lift.to_vec();
        for (j, f) in movers.iter().enumerate() {
            if mask >> j & 1 == 1 {
                go.push(*f);
            } else {
                stay.push(*f);
            }
        }
        let mut nb = Vec::with_capacity(bubbles.len() + 1);
        nb.extend_from_slice(&bubbles[..i]);
        nb.push(stay);
        nb.push(go);
        nb.extend_from_slice(&bubbles[i + 1..]);
        out.add_term(CycleClass::from_parts(base.to_vec(), nb), sign.clone());
    }
}

fn bubble_or_err(c: &CycleClass, k: usize, wanted: &[BubbleFactor]) -> Result<Vec<BubbleFactor>, RelationError> {
    let not_found = || RelationError::FactorsNotFound {
        cycle: c.to_string(),
        bubble: k,
        wanted: wanted
            .iter()
            .map(|f| format!("b{}[{}]", f.support.dim(), f.mult))
            .collect::<Vec<_>>()
            .join(", "),
    };
    let mut rest = c.bubble(k).ok_or_else(not_found)?.to_vec();
    for f in wanted {
        if !remove_one(&mut rest, f) {
            return Err(not_found());
        }
    }
    Ok(rest)
}

pub(crate) fn push(c: &CycleClass, target: BaseFactor) -> Result<RelationInstance, RelationError> {
    let kind = match target.support {
        BaseSupport::Point => RelationKind::PushPoint,
        BaseSupport::Line => RelationKind::PushLine,
        BaseSupport::Plane => {
            return Err(RelationError::PreconditionViolated("only point or line supported base points can be pushed".into()))
        }
    };
    let mut rest = c.base().to_vec();
    if !remove_one(&mut rest, &target) {
        return Err(RelationError::TargetNotFound {
            cycle: c.to_string(),
            target: target.to_string(),
        });
    }
    let pushed = match target.support {
        BaseSupport::Point => BubbleFactor::point(target.mult),
        _ => BubbleFactor::line(target.mult),
    };
    // remaining point classes stay; lines and planes may follow into bubble 1,
    // a line landing on a fibre and the plane on the whole bubble
    let (fixed, movers): (Vec<BaseFactor>, Vec<BaseFactor>) = rest.into_iter().partition(|f| f.support == BaseSupport::Point);
    let mut expr = CycleExpr::from_cycle(c.clone());
    let minus = -Rational::one();
    for mask in 0u64..(1u64 << movers.len()) {
        let mut base = fixed.clone();
        let mut first = vec![pushed];
        for (j, f) in movers.iter().enumerate() {
            if mask >> j & 1 == 1 {
                let support = if f.support == BaseSupport::Plane { BubbleSupport::Line } else { BubbleSupport::Point };
                first.push(BubbleFactor::new(support, f.mult));
            } else {
                base.push(*f);
            }
        }
        let mut bubbles = Vec::with_capacity(c.num_bubbles() + 1);
        bubbles.push(first);
        bubbles.extend_from_slice(c.bubbles());
        expr.add_term(CycleClass::from_parts(base, bubbles), minus.clone());
    }
    Ok(finish(kind, c.clone(), None, vec![target.mult], expr))
}

fn finish(kind: RelationKind, source: CycleClass, bubble_index: Option<usize>, mults: Vec<u32>, expr: CycleExpr) -> RelationInstance {
    debug_assert!(expr.is_tau_homogeneous(), "{kind} relation on {source} is not homogeneous: {expr}");
    debug_assert!(expr.lengths().len() <= 1, "{kind} relation on {source} mixes lengths");
    RelationInstance {
        kind,
        source,
        bubble_index,
        mults,
        expr,
    }
}

/// Pushes a point-supported base point `α_0[mult]` into a new first bubble.
pub fn push_zero_cycle(c: &CycleClass, mult: u32) -> Result<RelationInstance, RelationError> {
    push(c, BaseFactor::new(BaseSupport::Point, mult))
}

/// Pushes a line-supported base point `α_1[mult]` into a new first bubble.
pub fn push_one_cycle(c: &CycleClass, mult: u32) -> Result<RelationInstance, RelationError> {
    push(c, BaseFactor::new(BaseSupport::Line, mult))
}

/// Point-Point relation for two point-supported factors `β_0^i[a]`, `β_0^i[b]`
/// of bubble `i` (1-based):
/// `[a moves to bubble i+1, b stays] - [a stays, b moves]`, the other points
/// of bubble `i` expanded over stay/move and deeper bubbles shifted.
pub fn point_point(c: &CycleClass, i: usize, a: u32, b: u32) -> Result<RelationInstance, RelationError> {
    let (pa, pb) = (BubbleFactor::point(a), BubbleFactor::point(b));
    let rest = bubble_or_err(c, i, &[pa, pb])?;
    let mut expr = CycleExpr::zero();
    let one = Rational::one();
    split_bubble(c.base(), c.bubbles(), i - 1, &[pb], &[pa], &rest, &one, &mut expr);
    split_bubble(c.base(), c.bubbles(), i - 1, &[pa], &[pb], &rest, &-one, &mut expr);
    Ok(finish(RelationKind::PointPoint, c.clone(), Some(i), vec![a, b], expr))
}

/// Point-Line relation for a line-supported `β_1^i[a]` and a point-supported
/// `β_0^i[b]` in bubble `i`:
/// `[a moves as β_1, b stays] - [a stays, b moves] - [a becomes β_0^i[a]]`.
/// The last term is the stabilized component: bubble `i` keeps all of its
/// points with `a` now point-supported, and no bubble is added.
pub fn point_line(c: &CycleClass, i: usize, a: u32, b: u32) -> Result<RelationInstance, RelationError> {
    let (la, pb) = (BubbleFactor::line(a), BubbleFactor::point(b));
    let rest = bubble_or_err(c, i, &[la, pb])?;
    let mut expr = CycleExpr::zero();
    let one = Rational::one();
    split_bubble(c.base(), c.bubbles(), i - 1, &[pb], &[la], &rest, &one, &mut expr);
    split_bubble(c.base(), c.bubbles(), i - 1, &[la], &[pb], &rest, &-one.clone(), &mut expr);
    expr.add_term(replace_in_bubble(c, i, la, BubbleFactor::point(a)), -one);
    Ok(finish(RelationKind::PointLine, c.clone(), Some(i), vec![a, b], expr))
}

/// Line-Line relation for two line-supported `β_1^i[a]`, `β_1^i[b]`:
/// `[a moves] + [b becomes β_0] - [b moves] - [a becomes β_0]`.
pub fn line_line(c: &CycleClass, i: usize, a: u32, b: u32) -> Result<RelationInstance, RelationError> {
    let (la, lb) = (BubbleFactor::line(a), BubbleFactor::line(b));
    let rest = bubble_or_err(c, i, &[la, lb])?;
    let mut expr = CycleExpr::zero();
    let one = Rational::one();
    split_bubble(c.base(), c.bubbles(), i - 1, &[lb], &[la], &rest, &one, &mut expr);
    expr.add_term(replace_in_bubble(c, i, lb, BubbleFactor::point(b)), one.clone());
    split_bubble(c.base(), c.bubbles(), i - 1, &[la], &[lb], &rest, &-one.clone(), &mut expr);
    expr.add_term(replace_in_bubble(c, i, la, BubbleFactor::point(a)), -one);
    Ok(finish(RelationKind::LineLine, c.clone(), Some(i), vec![a, b], expr))
}

/// `c` with one occurrence of `from` in bubble `k` (1-based) replaced by `to`.
pub(crate) fn replace_in_bubble(c: &CycleClass, k: usize, from: BubbleFactor, to: BubbleFactor) -> CycleClass {
    let mut bubbles = c.bubbles().to_vec();
    let bubble = &mut bubbles[k - 1];
    let pos = bubble.iter().position(|f| *f == from).expect("factor present");
    bubble[pos] = to;
    CycleClass::from_parts(c.base().to_vec(), bubbles)
}

/// Every relation instance attached to `c`: one push per distinct point or
/// line base factor, one bubble relation per unordered pair of factor
/// occurrences in a bubble. Instances with zero expression are dropped.
pub fn relations_of(c: &CycleClass) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    let mut pushable: Vec<BaseFactor> = c.base().iter().copied().filter(|f| f.support != BaseSupport::Plane).collect();
    pushable.dedup();
    for f in pushable {
        out.push(push(c, f).expect("factor taken from the cycle"));
    }
    for (k, bubble) in c.bubbles().iter().enumerate() {
        let i = k + 1;
        for x in 0..bubble.len() {
            for y in x + 1..bubble.len() {
                let (f, g) = (bubble[x], bubble[y]);
                let rel = match (f.support, g.support) {
                    (BubbleSupport::Point, BubbleSupport::Point) => point_point(c, i, f.mult.min(g.mult), f.mult.max(g.mult)),
                    (BubbleSupport::Line, BubbleSupport::Line) => line_line(c, i, f.mult.min(g.mult), f.mult.max(g.mult)),
                    (BubbleSupport::Line, BubbleSupport::Point) => point_line(c, i, f.mult, g.mult),
                    (BubbleSupport::Point, BubbleSupport::Line) => point_line(c, i, g.mult, f.mult),
                };
                out.push(rel.expect("factors taken from the bubble"));
            }
        }
    }
    out.retain(|r| !r.expr.is_zero());
    out.sort_by(|x, y| x.key().cmp(&y.key()));
    out.dedup_by(|x, y| x.key() == y.key());
    out
}

/// All relation instances generated by cycles of length `n`, deduplicated, in
/// a deterministic order.
pub fn all_relations(n: u32) -> Vec<RelationInstance> {
    all_relations_with(n, Execution::default())
}

pub fn all_relations_with(n: u32, exec: Execution) -> Vec<RelationInstance> {
    let cycles = enumerate_cycles(n);
    let per_cycle: Vec<Vec<RelationInstance>> = par_map!(exec, cycles, relations_of);
    per_cycle.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{parse_cycle, parse_expr};

    fn c(s: &str) -> CycleClass {
        parse_cycle(s).unwrap()
    }

    fn e(s: &str) -> CycleExpr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn push_single_point() {
        let r = push_zero_cycle(&c("a0[2]"), 2).unwrap();
        assert_eq!(r.expr, e("a0[2] - b0^1[2]"));
    }

    #[test]
    fn push_point_next_to_line() {
        let r = push_zero_cycle(&c("a1[1]*a0[1]"), 1).unwrap();
        assert_eq!(r.expr, e("a1[1]*a0[1] - a1[1]*b0^1[1] - b0^1[1]*b0^1[1]"));
    }

    #[test]
    fn push_leaves_other_points_in_place() {
        let r = push_zero_cycle(&c("a0[1]*a0[3]"), 1).unwrap();
        assert_eq!(r.expr, e("a0[1]*a0[3] - a0[3]*b0^1[1]"));
    }

    #[test]
    fn push_lines() {
        assert_eq!(push_one_cycle(&c("a1[1]"), 1).unwrap().expr, e("a1[1] - b1^1[1]"));
        let r = push_one_cycle(&c("a2[1]*a1[1]"), 1).unwrap();
        assert_eq!(r.expr, e("a2[1]*a1[1] - a2[1]*b1^1[1] - b1^1[1]*b1^1[1]"));
        assert_eq!(r.expr.tau_degree(), Some(c("a2[1]*a1[1]").tau_degree()));
    }

    #[test]
    fn push_shifts_existing_bubbles() {
        let r = push_zero_cycle(&c("a0[1]*b1^1[2]"), 1).unwrap();
        assert_eq!(r.expr, e("a0[1]*b1^1[2] - b0^1[1]*b1^2[2]"));
    }

    #[test]
    fn push_errors() {
        assert!(matches!(push_zero_cycle(&c("a1[1]"), 1), Err(RelationError::TargetNotFound { .. })));
        assert!(matches!(push_one_cycle(&c("a1[2]"), 1), Err(RelationError::TargetNotFound { .. })));
    }

    #[test]
    fn identical_points_expand_with_binomial_coefficients() {
        let r = push_zero_cycle(&c("a0[1]*a2[1]*a2[1]"), 1).unwrap();
        assert_eq!(
            r.expr,
            e("a0[1]*a2[1]*a2[1] - a2[1]*a2[1]*b0^1[1] - 2 a2[1]*b0^1[1]*b1^1[1] - b0^1[1]*b1^1[1]*b1^1[1]")
        );
    }

    #[test]
    fn point_point_examples() {
        let r = point_point(&c("b0^1[1]*b0^1[2]"), 1, 1, 2).unwrap();
        assert_eq!(r.expr, e("b0^2[1]*b0^1[2] - b0^1[1]*b0^2[2]"));
        assert!(point_point(&c("b0^1[1]*b0^1[1]"), 1, 1, 1).unwrap().expr.is_zero());
        let r = point_point(&c("b0^1[1]*b0^1[2]*b1^1[1]"), 1, 1, 2).unwrap();
        assert_eq!(r.expr.len(), 4);
        assert_eq!(r.expr.tau_degree(), Some(c("b0^1[1]*b0^1[2]*b1^1[1]").tau_degree() - 2));
        assert!(matches!(point_point(&c("b0^1[1]"), 1, 1, 1), Err(RelationError::FactorsNotFound { .. })));
    }

    #[test]
    fn point_line_examples() {
        let r = point_line(&c("b1^1[1]*b0^1[1]"), 1, 1, 1).unwrap();
        assert_eq!(r.expr, e("b0^1[1]*b1^2[1] - b1^1[1]*b0^2[1] - b0^1[1]*b0^1[1]"));
        let src = c("b1^1[2]*b0^1[1]*b1^1[1]");
        let r = point_line(&src, 1, 2, 1).unwrap();
        // the stabilized component keeps every point of the bubble in place
        assert_eq!(r.expr.coeff(&c("b0^1[2]*b0^1[1]*b1^1[1]")), -Rational::one());
        assert_eq!(r.expr.len(), 5);
        assert_eq!(r.expr.tau_degree(), Some(src.tau_degree() - 2));
        assert!(point_line(&src, 1, 1, 2).is_err());
        assert!(point_line(&src, 2, 2, 1).is_err());
    }

    #[test]
    fn line_line_examples() {
        let r = line_line(&c("b1^1[1]*b1^1[2]"), 1, 1, 2).unwrap();
        assert_eq!(r.expr, e("b1^2[1]*b1^1[2] + b1^1[1]*b0^1[2] - b1^1[1]*b1^2[2] - b0^1[1]*b1^1[2]"));
        assert!(line_line(&c("b1^1[3]*b1^1[3]"), 1, 3, 3).unwrap().expr.is_zero());
        let src = c("b1^1[1]*b1^1[2]*b0^1[1]*a2[1]");
        let r = line_line(&src, 1, 1, 2).unwrap();
        assert!(r.expr.lengths() == vec![src.length()]);
    }

    #[test]
    fn relations_at_length_one() {
        let rels = all_relations(1);
        let exprs: Vec<_> = rels.iter().map(|r| r.expr.clone()).collect();
        assert_eq!(rels.len(), 2);
        assert!(exprs.contains(&e("a0[1] - b0^1[1]")));
        assert!(exprs.contains(&e("a1[1] - b1^1[1]")));
    }

    #[test]
    fn relations_at_length_two_include_known_identities() {
        let rels = all_relations(2);
        let exprs: Vec<_> = rels.iter().map(|r| r.expr.clone()).collect();
        assert!(exprs.contains(&e("a0[2] - b0^1[2]")));
        assert!(exprs.contains(&e("a1[1]*a0[1] - a1[1]*b0^1[1] - b0^1[1]*b0^1[1]")));
        assert!(rels.iter().all(|r| r.expr.is_tau_homogeneous() && r.expr.length() == Some(2)));
    }

    #[test]
    fn rebuild_reproduces_instances() {
        for r in all_relations(3) {
            let again = RelationInstance::rebuild(r.kind, &r.source, r.bubble_index, &r.mults).unwrap();
            assert_eq!(again, r);
        }
    }
}
