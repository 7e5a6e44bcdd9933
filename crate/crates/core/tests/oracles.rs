//! Series results against direct enumeration.

use std::collections::BTreeMap;

use relhilb::goettsche::{goettsche_normalized, goettsche_series};
use relhilb::series::{AffineExp, ProductFactor, Sign};
use relhilb::{QSeries, SurfaceBetti};

/// Number of partitions of `n`, by listing them.
fn partitions(n: u32, max: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=n.min(max)).map(|p| partitions(n - p, p)).sum()
}

#[test]
fn partition_counts_to_twenty() {
    let s = QSeries::infinite_product(&[ProductFactor::new(Sign::Minus, AffineExp::constant(0), -1)], 20);
    for n in 0..=20u32 {
        let c = s.coeff(n as usize);
        assert_eq!(c.num_terms(), 1);
        assert_eq!(c.coeff(0), relhilb::series::int(partitions(n, n) as i64), "n={n}");
    }
}

/// Poincaré polynomial of the Hilbert scheme of `n` points of a surface by
/// listing its cell data: a multiset of (class, part) pairs, with every class
/// of odd degree used at most once per part. A basis class of degree `i` in
/// part `m` contributes `t^{2m - 2 + i}`.
fn hilb_by_enumeration(b: [u32; 5], n: u32) -> BTreeMap<i64, i64> {
    // one entry per basis class: its degree
    let classes: Vec<i64> = (0..5).flat_map(|i| std::iter::repeat_n(i as i64, b[i] as usize)).collect();
    let slots: Vec<(u32, usize)> = (1..=n).flat_map(|m| (0..classes.len()).map(move |c| (m, c))).collect();
    fn go(slots: &[(u32, usize)], classes: &[i64], rest: u32, acc: i64, out: &mut BTreeMap<i64, i64>) {
        if rest == 0 {
            *out.entry(acc).or_insert(0) += 1;
            return;
        }
        let Some((&(m, c), tail)) = slots.split_first() else {
            return;
        };
        let deg = classes[c];
        let max_copies = if deg % 2 == 1 { 1 } else { rest / m };
        for k in 0..=max_copies.min(rest / m) {
            go(tail, classes, rest - k * m, acc + i64::from(k) * (2 * i64::from(m) - 2 + deg), out);
        }
    }
    let mut out = BTreeMap::new();
    go(&slots, &classes, n, 0, &mut out);
    out.retain(|_, v| *v != 0);
    out
}

fn as_ints(p: &relhilb::LaurentPoly) -> BTreeMap<i64, i64> {
    p.terms().map(|(e, c)| (e, i64::try_from(c.to_integer()).unwrap())).collect()
}

#[test]
fn goettsche_with_odd_classes() {
    for b in [[1, 0, 1, 0, 1], [1, 0, 2, 0, 1], [1, 2, 2, 2, 1], [1, 1, 3, 1, 1]] {
        let s = goettsche_series(SurfaceBetti::new(b), 4);
        for n in 0..=4 {
            assert_eq!(as_ints(s.coeff(n as usize)), hilb_by_enumeration(b, n), "{b:?} n={n}");
        }
    }
}

#[test]
fn normalized_series_is_symmetric_and_counts_euler_characteristic() {
    let b = [1, 2, 4, 2, 1];
    let s = goettsche_normalized(SurfaceBetti::new(b), 5);
    assert_eq!(s.substitute_t_inverse(), s);
    // Euler characteristic of the surface is 2; at t = -1 the series is prod (1 - q^m)^-2
    for n in 0..=5 {
        let at_minus_one: i64 = as_ints(s.coeff(n)).iter().map(|(e, c)| if e % 2 == 0 { *c } else { -c }).sum();
        let two_coloured = (0..=n as u32).map(|k| partitions(k, k) * partitions(n as u32 - k, n as u32 - k)).sum::<u64>();
        assert_eq!(at_minus_one, two_coloured as i64, "n={n}");
    }
}
