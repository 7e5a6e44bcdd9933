use super::{BaseFactor, BaseSupport, BubbleFactor, BubbleSupport, CycleClass};

/// All multisets of `(colour, part)` pairs whose parts sum to `total`, with
/// `colours` colours. Each multiset is listed once, parts in nonincreasing
/// `(part, colour)` order.
fn coloured_partitions(total: u32, colours: u8) -> Vec<Vec<(u8, u32)>> {
    fn go(rest: u32, max: (u32, u8), colours: u8, cur: &mut Vec<(u8, u32)>, out: &mut Vec<Vec<(u8, u32)>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max.0)).rev() {
            for colour in (0..colours).rev() {
                if (part, colour) > max {
                    continue;
                }
                cur.push((colour, part));
                go(rest - part, (part, colour), colours, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(total, (total, colours.saturating_sub(1)), colours, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `total` into positive parts, in lexicographic order.
fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn bubble_multisets(s: u32) -> Vec<Vec<BubbleFactor>> {
    coloured_partitions(s, 2)
        .into_iter()
        .map(|ms| {
            ms.into_iter()
                .map(|(c, m)| BubbleFactor::new(BubbleSupport::from_dim(c).expect("two colours"), m))
                .collect()
        })
        .collect()
}

fn base_multisets(s: u32) -> Vec<Vec<BaseFactor>> {
    coloured_partitions(s, 3)
        .into_iter()
        .map(|ms| {
            ms.into_iter()
                .map(|(c, m)| BaseFactor::new(BaseSupport::from_dim(c).expect("three colours"), m))
                .collect()
        })
        .collect()
}

/// Appends every bubble list whose bubble sizes follow `sizes` after `prefix`.
fn bubble_lists(
    sizes: &[u32],
    by_size: &[Vec<Vec<BubbleFactor>>],
    prefix: &mut Vec<Vec<BubbleFactor>>,
    out: &mut Vec<Vec<Vec<BubbleFactor>>>,
) {
    let Some((&s, rest)) = sizes.split_first() else {
        out.push(prefix.clone());
        return;
    };
    for b in &by_size[s as usize] {
        prefix.push(b.clone());
        bubble_lists(rest, by_size, prefix, out);
        prefix.pop();
    }
}

/// Every product class of length `n`, each exactly once, ordered by descending
/// cohomological degree and then by the structural cycle order.
pub fn enumerate_cycles(n: u32) -> Vec<CycleClass> {
    enumerate_cycles_where(n, |_| true)
}

/// The normal-form cycles of length `n`, in the order of [`enumerate_cycles`].
pub fn enumerate_normal_cycles(n: u32) -> Vec<CycleClass> {
    enumerate_cycles_where(n, CycleClass::is_normal)
}

/// The cycles of length `n` satisfying `keep`, in the order of
/// [`enumerate_cycles`]. Rejected cycles are never stored.
pub fn enumerate_cycles_where(n: u32, keep: impl Fn(&CycleClass) -> bool) -> Vec<CycleClass> {
    let by_size: Vec<_> = (0..=n).map(bubble_multisets).collect();
    let mut out = Vec::new();
    for base_len in 0..=n {
        let bases = base_multisets(base_len);
        let mut lists = Vec::new();
        for comp in compositions(n - base_len) {
            bubble_lists(&comp, &by_size, &mut Vec::new(), &mut lists);
        }
        for bubbles in &lists {
            for base in &bases {
                let c = CycleClass::from_parts(base.clone(), bubbles.clone());
                if keep(&c) {
                    out.push(c);
                }
            }
        }
    }
    out.sort_unstable_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| a.cmp(b)));
    out
}
