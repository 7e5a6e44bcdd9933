//! Cross-checks between the series side and the cycle calculus.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::cycle::{enumerate_cycles, enumerate_normal_cycles, BaseSupport, CycleClass, CycleExpr};
use crate::goettsche::{betti_table, plane_relative_series};
use crate::linalg::{echelon_exact, kernel, rank_mod_p, SparseRow};
use crate::par::{par_map, Execution};
use crate::reduce::{Reducer, Reduction};
use crate::relations::all_relations_with;

/// Prime for the modular rank cross-check.
const RANK_PRIME: u64 = (1 << 61) - 1;

/// Histogram of cohomological degrees over the normal cycles of length `n`.
pub fn normal_form_census(n: u32) -> BTreeMap<i64, u64> {
    let mut hist = BTreeMap::new();
    for c in enumerate_normal_cycles(n) {
        *hist.entry(c.degree()).or_insert(0) += 1;
    }
    hist
}

/// Betti numbers of the `n`-point relative Hilbert scheme of the plane
/// relative to a line, read from the closed-form series.
pub fn series_betti(n: u32) -> BTreeMap<i64, u64> {
    let n = n as usize;
    betti_table(&plane_relative_series(n + 2), n).expect("closed-form series has nonnegative integer coefficients")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: u32,
    pub degree: i64,
    pub census: u64,
    pub series: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n_max: u32,
    pub consistent: bool,
    pub rows: Vec<CensusRow>,
    pub discrepancies: Vec<CensusRow>,
}

/// Compares the normal-form census with the series Betti numbers for every
/// length up to `n_max`, one row per occupied `(n, degree)`.
pub fn census_vs_series(n_max: u32, exec: Execution) -> CensusReport {
    let ns: Vec<u32> = (1..=n_max).collect();
    let per_n: Vec<Vec<CensusRow>> = par_map!(exec, ns, |&n| {
        let census = normal_form_census(n);
        let series = series_betti(n);
        let degrees: std::collections::BTreeSet<i64> = census.keys().chain(series.keys()).copied().collect();
        degrees
            .into_iter()
            .map(|degree| CensusRow {
                n,
                degree,
                census: census.get(&degree).copied().unwrap_or(0),
                series: series.get(&degree).copied().unwrap_or(0),
            })
            .collect::<Vec<_>>()
    });
    let rows: Vec<CensusRow> = per_n.into_iter().flatten().collect();
    let discrepancies: Vec<CensusRow> = rows.iter().filter(|r| r.census != r.series).cloned().collect();
    CensusReport {
        n_max,
        consistent: discrepancies.is_empty(),
        rows,
        discrepancies,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub n: u32,
    pub degree: i64,
    pub num_cycles: usize,
    pub num_relations: usize,
    pub relation_rank: usize,
    /// Rank modulo a large prime with the column order reversed.
    pub cross_check_rank: usize,
    pub betti_from_series: u64,
    pub consistent: bool,
    /// Whether the columns left without a pivot, with non-normal cycles
    /// eliminated first, are exactly the normal cycles.
    pub normal_cycles_free: bool,
    /// Null space of the relation matrix, filled in only when inconsistent.
    pub kernel: Option<Vec<CycleExpr>>,
}

/// Completeness check for the relations: in every degree, the number of
/// product classes minus the rank of all relations among them must equal the
/// Betti number from the series.
pub fn relation_rank_check(n: u32, exec: Execution) -> Vec<RankReport> {
    let mut cycles_by_degree: BTreeMap<i64, Vec<CycleClass>> = BTreeMap::new();
    for c in enumerate_cycles(n) {
        cycles_by_degree.entry(c.degree()).or_default().push(c);
    }
    let mut relations_by_degree: BTreeMap<i64, Vec<CycleExpr>> = BTreeMap::new();
    for r in all_relations_with(n, exec) {
        let degree = r.expr.cycles().next().expect("zero relations are dropped").degree();
        relations_by_degree.entry(degree).or_default().push(r.expr);
    }
    let betti = series_betti(n);
    let blocks: Vec<(i64, Vec<CycleClass>)> = cycles_by_degree.into_iter().collect();
    par_map!(exec, blocks, |(degree, cycles)| {
        let relations = relations_by_degree.get(degree).map(Vec::as_slice).unwrap_or(&[]);
        rank_block(n, *degree, cycles, relations, betti.get(degree).copied().unwrap_or(0))
    })
}

fn rank_block(n: u32, degree: i64, cycles: &[CycleClass], relations: &[CycleExpr], betti: u64) -> RankReport {
    // non-normal cycles get the low column indices so they are eliminated first
    let mut columns: Vec<&CycleClass> = cycles.iter().collect();
    columns.sort_by_key(|c| (c.is_normal(), *c));
    let index: HashMap<&CycleClass, usize> = columns.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let rows: Vec<SparseRow> = relations
        .iter()
        .map(|e| e.terms().map(|(c, v)| (index[c], v.clone())).collect())
        .collect();
    let ech = echelon_exact(&rows);
    let reversed: Vec<usize> = (0..columns.len()).rev().collect();
    let cross_check_rank = rank_mod_p(&rows, &reversed, RANK_PRIME);
    let free = ech.free_columns(columns.len());
    let normal_cycles_free = free.iter().map(|&i| columns[i]).eq(columns.iter().copied().filter(|c| c.is_normal()));
    let consistent = (columns.len() - ech.rank) as u64 == betti && cross_check_rank == ech.rank;
    let kernel = (!consistent).then(|| {
        kernel(&rows, columns.len())
            .into_iter()
            .map(|x| x.into_iter().enumerate().map(|(i, v)| (columns[i].clone(), v)).collect())
            .collect()
    });
    RankReport {
        n,
        degree,
        num_cycles: columns.len(),
        num_relations: relations.len(),
        relation_rank: ech.rank,
        cross_check_rank,
        betti_from_series: betti,
        consistent,
        normal_cycles_free,
        kernel,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub n: u32,
    pub checked: usize,
    pub consistent: bool,
    pub failures: Vec<String>,
}

impl ConsistencyReport {
    fn new(n: u32, checked: usize, failures: Vec<String>) -> Self {
        Self {
            n,
            checked,
            consistent: failures.is_empty(),
            failures,
        }
    }
}

/// Reduces every cycle of length `n`, in enumeration order.
pub fn reduce_all(n: u32, reducer: Reducer, exec: Execution) -> Vec<(CycleClass, Result<Reduction, crate::RelationError>)> {
    let cycles = enumerate_cycles(n);
    let reductions: Vec<_> = par_map!(exec, cycles, |c| reducer.reduce(&CycleExpr::from_cycle(c.clone())));
    cycles.into_iter().zip(reductions).collect()
}

fn check_reduction(c: &CycleClass, r: &Result<Reduction, crate::RelationError>) -> Option<String> {
    let r = match r {
        Ok(r) => r,
        Err(e) => return Some(format!("{c}: {e}")),
    };
    if let Some(bad) = r.output.cycles().find(|x| !x.is_normal()) {
        return Some(format!("{c}: output contains non-normal {bad}"));
    }
    if !r.output.is_zero() && r.output.tau_degree() != Some(c.tau_degree()) {
        return Some(format!("{c}: output {} changes degree", r.output));
    }
    if c.is_normal() && (r.output != CycleExpr::from_cycle(c.clone()) || !r.certificate.is_empty()) {
        return Some(format!("{c}: normal cycle was rewritten"));
    }
    (!r.verify()).then(|| format!("{c}: certificate does not verify"))
}

/// Every cycle of length `n` reduces to normal cycles of its own degree, with
/// a certificate that checks exactly.
pub fn reduction_consistency(n: u32, exec: Execution) -> ConsistencyReport {
    let all = reduce_all(n, Reducer::default(), exec);
    let failures: Vec<Option<String>> = par_map!(exec, all, |(c, r)| check_reduction(c, r));
    ConsistencyReport::new(n, all.len(), failures.into_iter().flatten().collect())
}

/// Every relation of length `n` maps to zero once each cycle is replaced by
/// its normal form.
pub fn relations_compatible_with_reduction(n: u32, exec: Execution) -> ConsistencyReport {
    let images: HashMap<CycleClass, CycleExpr> = reduce_all(n, Reducer::default(), exec)
        .into_iter()
        .map(|(c, r)| (c, r.map(|r| r.output).unwrap_or_default()))
        .collect();
    let relations = all_relations_with(n, exec);
    let failures: Vec<Option<String>> = par_map!(exec, relations, |r| {
        let mut image = CycleExpr::zero();
        for (c, v) in r.expr.terms() {
            image.add_scaled(&images[c], v);
        }
        (!image.is_zero()).then(|| format!("{} relation on {}: image {image}", r.kind, r.source))
    });
    ConsistencyReport::new(n, relations.len(), failures.into_iter().flatten().collect())
}

/// For each cycle of length `n` with two different pushable base factors,
/// pushing either one first and reducing gives the same normal form.
pub fn push_order_independence(n: u32, exec: Execution) -> ConsistencyReport {
    let reducer = Reducer::default();
    let cycles: Vec<CycleClass> = enumerate_cycles(n)
        .into_iter()
        .filter(|c| c.base().iter().filter(|f| f.support != BaseSupport::Plane).count() >= 2)
        .collect();
    let failures: Vec<Vec<String>> = par_map!(exec, cycles, |c| check_push_orders(&reducer, c));
    ConsistencyReport::new(n, cycles.len(), failures.into_iter().flatten().collect())
}

/// Reduces `c` once per distinct pushable factor pushed first and reports
/// any disagreement with the default pipeline.
pub fn check_push_orders(reducer: &Reducer, c: &CycleClass) -> Vec<String> {
    let mut targets: Vec<_> = c.base().iter().copied().filter(|f| f.support != BaseSupport::Plane).collect();
    targets.dedup();
    let reference = match reducer.reduce(&CycleExpr::from_cycle(c.clone())) {
        Ok(r) => r.output,
        Err(e) => return vec![format!("{c}: {e}")],
    };
    let mut out = Vec::new();
    for t in targets {
        match reducer.reduce_after_push(c, t) {
            Ok(r) if r.output == reference && r.verify() => {}
            Ok(r) => out.push(format!("{c}: pushing {t} first gives {} instead of {reference}", r.output)),
            Err(e) => out.push(format!("{c}: pushing {t} first: {e}")),
        }
    }
    out
}
