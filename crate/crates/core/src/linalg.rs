//! Sparse row echelon forms over the rationals and over a prime field.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

/// Sparse row: column index to nonzero entry.
pub type SparseRow = BTreeMap<usize, Rational>;

/// Result of an echelon reduction: rank and the columns that received a pivot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Echelon {
    /// Columns in `0..ncols` without a pivot.
    pub fn free_columns(&self, ncols: usize) -> Vec<usize> {
        let mut is_pivot = vec![false; ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..ncols).filter(|&c| !is_pivot[c]).collect()
    }
}

/// Integer row with content removed and a positive leading entry.
fn primitive(row: &SparseRow) -> BTreeMap<usize, BigInt> {
    let den = row.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    make_primitive(row.iter().map(|(&c, v)| (c, (v * &den).to_integer())).collect())
}

fn make_primitive(mut ints: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
    let g = ints.values().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let lead_negative = ints.values().next().is_some_and(|v| v.is_negative());
    if !g.is_zero() {
        let g = if lead_negative { -g } else { g };
        for v in ints.values_mut() {
            *v = &*v / &g;
        }
    }
    ints
}

/// Fraction-free elimination over the integers. Rows are inserted one at a
/// time and reduced against the stored pivot rows by cross-multiplication;
/// the content of every intermediate row is divided out to keep entries small.
pub fn echelon_exact(rows: &[SparseRow]) -> Echelon {
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
    for row in rows {
        let mut r = primitive(row);
        while let Some((&lead, lv)) = r.iter().next() {
            let Some(p) = pivots.get(&lead) else {
                break;
            };
            let pv = &p[&lead];
            let g = lv.gcd(pv);
            let (mr, mp) = (pv / &g, lv / &g);
            let mut next: BTreeMap<usize, BigInt> = r.iter().map(|(&c, v)| (c, v * &mr)).collect();
            for (&c, v) in p {
                let e = next.entry(c).or_insert_with(BigInt::zero);
                *e -= v * &mp;
                if e.is_zero() {
                    next.remove(&c);
                }
            }
            r = make_primitive(next);
        }
        if let Some((&lead, _)) = r.iter().next() {
            pivots.insert(lead, r);
        }
    }
    Echelon {
        rank: pivots.len(),
        pivots: pivots.into_keys().collect(),
    }
}

/// Rank of the matrix reduced modulo the prime `p`, eliminating in the given
/// row and column order. A lower bound for the rational rank, equal to it for
/// all but finitely many primes.
pub fn rank_mod_p(rows: &[SparseRow], col_order: &[usize], p: u64) -> usize {
    let pos: HashMap<usize, usize> = col_order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let reduce = |v: &Rational| -> u64 {
        let m = |x: &BigInt| x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits");
        let (n, d) = (m(v.numer()), m(v.denom()));
        assert!(d != 0, "denominator divisible by the modulus");
        mul_mod(n, pow_mod(d, p - 2, p), p)
    };
    let mut pivots: HashMap<usize, BTreeMap<usize, u64>> = HashMap::new();
    for row in rows {
        let mut r: BTreeMap<usize, u64> = row
            .iter()
            .map(|(c, v)| (pos[c], reduce(v)))
            .filter(|(_, v)| *v != 0)
            .collect();
        while let Some((&lead, &lv)) = r.iter().next() {
            let Some(pr) = pivots.get(&lead) else {
                let inv = pow_mod(lv, p - 2, p);
                for v in r.values_mut() {
                    *v = mul_mod(*v, inv, p);
                }
                pivots.insert(lead, r);
                break;
            };
            for (&c, &v) in pr {
                let e = r.entry(c).or_insert(0);
                *e = (*e + p - mul_mod(v, lv, p)) % p;
                if *e == 0 {
                    r.remove(&c);
                }
            }
        }
    }
    pivots.len()
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(p)) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Basis of the null space `{x : row · x = 0 for every row}` in `Q^ncols`,
/// one vector per free column of the reduced row echelon form.
pub fn kernel(rows: &[SparseRow], ncols: usize) -> Vec<Vec<Rational>> {
    let mut rref: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for row in rows {
        let mut r = row.clone();
        for (&c, p) in &rref {
            if let Some(f) = r.get(&c).cloned() {
                axpy(&mut r, p, &-f);
            }
        }
        let Some((&lead, lv)) = r.iter().next() else {
            continue;
        };
        let inv = lv.recip();
        for v in r.values_mut() {
            *v *= &inv;
        }
        for p in rref.values_mut() {
            if let Some(f) = p.get(&lead).cloned() {
                axpy(p, &r, &-f);
            }
        }
        rref.insert(lead, r);
    }
    let free = Echelon {
        rank: rref.len(),
        pivots: rref.keys().copied().collect(),
    }
    .free_columns(ncols);
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (&c, p) in &rref {
                if let Some(v) = p.get(&f) {
                    x[c] = -v;
                }
            }
            x
        })
        .collect()
}

fn axpy(y: &mut SparseRow, x: &SparseRow, a: &Rational) {
    for (&c, v) in x {
        let e = y.entry(c).or_insert_with(Rational::zero);
        *e += v * a;
        if e.is_zero() {
            y.remove(&c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    const P: u64 = (1 << 61) - 1;

    #[test]
    fn small_ranks() {
        let rows = vec![row(&[(0, 1), (1, -1)]), row(&[(1, 2), (2, 2)]), row(&[(0, 3), (2, 3)])];
        let e = echelon_exact(&rows);
        assert_eq!(e.rank, 2);
        assert_eq!(e.free_columns(3), vec![2]);
        assert_eq!(rank_mod_p(&rows, &[2, 1, 0], P), 2);
        assert_eq!(kernel(&rows, 3), vec![vec![int(-1), int(-1), int(1)]]);
    }

    #[test]
    fn rational_entries() {
        let half = Rational::new(1.into(), 2.into());
        let rows = vec![
            [(0, half.clone()), (1, int(1))].into_iter().collect(),
            [(0, int(1)), (1, int(2))].into_iter().collect(),
        ];
        assert_eq!(echelon_exact(&rows).rank, 1);
        assert_eq!(rank_mod_p(&rows, &[0, 1], P), 1);
        assert_eq!(kernel(&rows, 2), vec![vec![int(-2), int(1)]]);
    }

    #[test]
    fn modulus_can_drop_rank() {
        let rows = vec![row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, 6)])];
        assert_eq!(echelon_exact(&rows).rank, 2);
        assert_eq!(rank_mod_p(&rows, &[0, 1], 5), 1);
    }

    #[test]
    fn empty_and_zero_rows() {
        assert_eq!(echelon_exact(&[]).rank, 0);
        assert_eq!(echelon_exact(&[SparseRow::new()]).rank, 0);
        assert_eq!(kernel(&[SparseRow::new()], 2).len(), 2);
    }
}
