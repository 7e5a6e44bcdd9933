//! Acceptance criteria, one PASS/FAIL line each. Exact identities are
//! compared with `==`; the only tolerances are the wall-clock budgets below.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{rngs::StdRng, Rng, SeedableRng};
use relhilb::goettsche::{betti_table, goettsche_normalized, goettsche_series, plane_relative_series, relative_series};
use relhilb::series::lp;
use relhilb::verify::{census_vs_series, normal_form_census, push_order_independence, reduction_consistency, relation_rank_check};
use relhilb::{CurveBetti, Execution, SurfaceBetti};

const BUDGET_1: Duration = Duration::from_secs(1);
const BUDGET_2: Duration = Duration::from_secs(1);
const BUDGET_3: Duration = Duration::from_secs(10);
const BUDGET_4: Duration = Duration::from_secs(30);
const BUDGET_5: Duration = Duration::from_secs(120);
const BUDGET_6: Duration = Duration::from_secs(300);
const BUDGET_7: Duration = Duration::from_secs(60);
const BUDGET_8: Duration = Duration::from_secs(1);

const SEED: u64 = 20_240_517;

/// Poincaré polynomial of the Hilbert scheme of `n` points on the plane, as
/// exponent -> coefficient, by listing triples of partitions: a part `m`
/// carrying the class of degree `i` in {0, 2, 4} contributes `t^{2m - 2 + i}`.
fn hilb_plane_by_partitions(n: u32) -> BTreeMap<i64, i64> {
    fn go(rest: u32, max: (u32, u32), acc: i64, out: &mut BTreeMap<i64, i64>) {
        if rest == 0 {
            *out.entry(acc).or_insert(0) += 1;
            return;
        }
        for m in (1..=rest.min(max.0)).rev() {
            for i in [4, 2, 0] {
                if (m, i) <= max {
                    go(rest - m, (m, i), acc + 2 * i64::from(m) - 2 + i64::from(i), out);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    go(n, (n, 4), 0, &mut out);
    out
}

fn criterion_1() -> Result<String, String> {
    let s = relative_series(SurfaceBetti::PLANE, CurveBetti::LINE, 3).map_err(|e| e.to_string())?;
    let q1 = s.coeff(1);
    let betti = betti_table(&s, 1).map_err(|e| e.to_string())?;
    let want = BTreeMap::from([(0, 1), (2, 1), (4, 1)]);
    if *q1 == lp(&[(-2, 1), (0, 1), (2, 1)]) && betti == want {
        Ok(format!("q^1 coefficient {q1}, Betti {betti:?}"))
    } else {
        Err(format!("q^1 coefficient {q1}, Betti {betti:?}"))
    }
}

fn criterion_2() -> Result<String, String> {
    let general = relative_series(SurfaceBetti::PLANE, CurveBetti::LINE, 12).map_err(|e| e.to_string())?;
    let closed = plane_relative_series(12);
    match (0..=12).find(|&n| general.coeff(n) != closed.coeff(n)) {
        None => Ok("agree through q^12".into()),
        Some(n) => Err(format!("first difference at q^{n}: {} vs {}", general.coeff(n), closed.coeff(n))),
    }
}

fn criterion_3() -> Result<String, String> {
    let s = goettsche_series(SurfaceBetti::PLANE, 8);
    for n in 0..=8u32 {
        let oracle: BTreeMap<i64, i64> = hilb_plane_by_partitions(n);
        let got: BTreeMap<i64, i64> = s
            .coeff(n as usize)
            .terms()
            .map(|(e, c)| (e, i64::try_from(c.to_integer()).expect("small")))
            .collect();
        if got != oracle || !s.coeff(n as usize).terms().all(|(_, c)| c.is_integer()) {
            return Err(format!("n={n}: series {got:?}, partitions {oracle:?}"));
        }
    }
    Ok("n = 0..8 agree".into())
}

fn criterion_4() -> Result<String, String> {
    let desk = [
        (1, BTreeMap::from([(0, 1), (2, 1), (4, 1)])),
        (2, BTreeMap::from([(0, 1), (2, 3), (4, 4), (6, 3), (8, 1)])),
    ];
    for (n, want) in desk {
        if normal_form_census(n) != want {
            return Err(format!("n={n}: census {:?}", normal_form_census(n)));
        }
    }
    let r = census_vs_series(8, Execution::default());
    if r.consistent {
        Ok(format!("{} (n, degree) cells agree for n <= 8", r.rows.len()))
    } else {
        Err(format!("discrepancies {:?}", r.discrepancies))
    }
}

fn criterion_5() -> Result<String, String> {
    let mut checked = 0;
    for n in 1..=4 {
        let r = reduction_consistency(n, Execution::default());
        if !r.consistent {
            return Err(format!("n={n}: {:?}", &r.failures[..r.failures.len().min(5)]));
        }
        checked += r.checked;
    }
    Ok(format!("{checked} cycles reduce to normal form with verified certificates"))
}

fn criterion_6() -> Result<String, String> {
    let mut blocks = 0;
    for n in 1..=4 {
        for r in relation_rank_check(n, Execution::default()) {
            if !r.consistent {
                return Err(format!(
                    "n={n} degree {}: {} cycles, rank {} (cross-check {}), Betti {}",
                    r.degree, r.num_cycles, r.relation_rank, r.cross_check_rank, r.betti_from_series
                ));
            }
            blocks += 1;
        }
    }
    Ok(format!("{blocks} (n, degree) blocks consistent under the binomial expansion"))
}

fn criterion_7() -> Result<String, String> {
    let mut checked = 0;
    for n in 1..=3 {
        let r = push_order_independence(n, Execution::default());
        if !r.consistent {
            return Err(format!("n={n}: {:?}", r.failures));
        }
        checked += r.checked;
    }
    Ok(format!("{checked} cycles with two or more pushable points"))
}

fn criterion_8() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..5 {
        let b1 = rng.gen_range(0..=4);
        let b2 = rng.gen_range(1..=12);
        let s = SurfaceBetti::new([1, b1, b2, b1, 1]);
        let rel = relative_series(s, CurveBetti::EMPTY, 10).map_err(|e| e.to_string())?;
        if rel != goettsche_normalized(s, 10) {
            return Err(format!("{s:?}: relative series differs"));
        }
    }
    Ok("5 random surfaces with empty divisor".into())
}

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, Check); 8] = [
        (1, "length-one ground truth", BUDGET_1, criterion_1),
        (2, "closed form for the plane", BUDGET_2, criterion_2),
        (3, "Goettsche series vs partition oracle", BUDGET_3, criterion_3),
        (4, "normal-form census vs series", BUDGET_4, criterion_4),
        (5, "reduction soundness and termination", BUDGET_5, criterion_5),
        (6, "relation rank completeness", BUDGET_6, criterion_6),
        (7, "push order independence", BUDGET_7, criterion_7),
        (8, "empty divisor degeneration", BUDGET_8, criterion_8),
    ];
    let mut all = true;
    for (k, name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(d) => (false, d),
        };
        all &= ok;
        println!(
            "criterion {k} {} {name}: {detail} ({:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
