//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p patfrac-cli --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use common::{aaron_printed, ar_printed, run, stdout, PrintedForm};
use num_bigint::BigInt;
use patfrac::genfun::{self, SolverConfig};
use patfrac::oracle::{self, Enumeration};
use patfrac::ratrec::{self, fit_with_power, DEFAULT_GUARD};
use patfrac::{verify, RationalFn, Strategy, TriSeries};

struct Outcome {
    passed: bool,
    detail: String,
    /// A failure that is fully explained and asserted below; it stays red in
    /// the report but does not fail the test.
    expected_failure: bool,
}

impl Outcome {
    fn check(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
            expected_failure: false,
        }
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn binomial3(n: u32) -> u32 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// Runs `ar`/`aaron --r k` for every printed row; returns the rendered
/// outputs and the wall time spent.
fn cli_forms(cmd: &str, rows: usize) -> (Vec<String>, Duration) {
    let start = Instant::now();
    let out = (0..rows)
        .map(|r| {
            let o = run(&[cmd, "--r", &r.to_string()]);
            assert!(o.status.success(), "{cmd} --r {r}: {o:?}");
            stdout(&o).trim_end().to_owned()
        })
        .collect();
    (out, start.elapsed())
}

fn ar_table_reproduction() -> Outcome {
    let printed = ar_printed();
    let (ours, elapsed) = cli_forms("ar", printed.len());
    let bad: Vec<usize> = printed
        .iter()
        .zip(&ours)
        .enumerate()
        .filter(|(_, (p, o))| p.normalized().render() != **o)
        .map(|(r, _)| r)
        .collect();
    let fast = elapsed < Duration::from_secs(10);
    Outcome::check(
        bad.is_empty() && fast,
        format!(
            "{} rows, mismatched {bad:?}, {elapsed:.2?} (< 10 s)",
            ours.len()
        ),
    )
}

fn aaron_table_reproduction() -> Outcome {
    let printed = aaron_printed();
    let (ours, elapsed) = cli_forms("aaron", printed.len());
    let fast = elapsed < Duration::from_secs(60);

    let mut exact = Vec::new();
    let mut negated = Vec::new();
    let mut other = Vec::new();
    for (r, (p, o)) in printed.iter().zip(&ours).enumerate() {
        let n = p.normalized();
        if n.render() == *o {
            exact.push(r);
        } else if RationalFn::new(-&n.numerator, n.denom_power).render() == *o {
            negated.push(r);
        } else {
            other.push(r);
        }
    }

    // the printed rows that differ must be exactly the flagged ones, and
    // their printed expansions must be the negated enumeration counts
    let flagged: Vec<usize> = (0..printed.len())
        .filter(|&r| printed[r].sign_erratum)
        .collect();
    let g = oracle::g_table(9).expect("g table");
    let printed_negative = flagged
        .iter()
        .all(|&r| printed_counts_negated(&printed[r], r, &g));
    let explained = other.is_empty() && negated == flagged && printed_negative && fast;

    Outcome {
        passed: negated.is_empty() && other.is_empty() && fast,
        detail: format!(
            "{elapsed:.2?} (< 60 s); exact rows {exact:?}; rows {negated:?} differ by an overall \
             sign: the printed forms expand to -g_r(n) for n <= 9, ours to +g_r(n); other \
             mismatches {other:?}"
        ),
        expected_failure: explained,
    }
}

fn printed_counts_negated(p: &PrintedForm, r: usize, g: &oracle::PatternTable) -> bool {
    let s = ratrec::expand(&p.normalized(), 9);
    (0..=9).all(|n| s.coeff(n).cloned().unwrap_or_default() == -BigInt::from(g.get(n, r)))
}

fn with_one_thread<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("pool")
            .install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        f()
    }
}

fn series_vs_table(s: &TriSeries, t: &oracle::PatternTable, nmax: u32, nq: u32) -> Vec<String> {
    let mut bad = Vec::new();
    for n in 0..=nmax {
        for r in 0..=nq.min(binomial3(n)) {
            let series = s.coeff(n, 0, r).expect("in range");
            let brute = BigInt::from(t.get(n as usize, r as usize));
            if series != brute {
                bad.push(format!("n={n} r={r}: {series} vs {brute}"));
            }
        }
    }
    for (e, c) in s.terms() {
        if e.q > binomial3(e.z) {
            bad.push(format!("n={} r={}: {c} vs 0", e.z, e.q));
        }
    }
    bad
}

fn bivariate_oracle_equivalence() -> Outcome {
    let nmax = 9;
    let nq = binomial3(nmax);
    let start = Instant::now();
    let bad = with_one_thread(|| {
        let opts = Enumeration {
            strategy: Strategy::Sequential,
            allow_large: false,
        };
        let config = SolverConfig::new(nmax, nq);
        let f = oracle::f_table_with(nmax as usize, opts).expect("f");
        let g = oracle::g_table_with(nmax as usize, opts).expect("g");
        let p = genfun::solve_p(&config).set_t_one();
        let q = genfun::solve_q(&config).set_t_one();
        let mut bad = series_vs_table(&p, &f, nmax, nq);
        bad.extend(series_vs_table(&q, &g, nmax, nq));
        bad
    });
    let elapsed = start.elapsed();
    Outcome::check(
        bad.is_empty() && elapsed < Duration::from_secs(120),
        format!("f and g, n <= {nmax}, nq = {nq}, single thread, {elapsed:.2?} (< 2 min); mismatches {bad:?}"),
    )
}

fn trivariate_oracle_equivalence() -> Outcome {
    let nmax = 8;
    let joint = oracle::joint_table(nmax as usize).expect("joint");
    let p = genfun::solve_p(&SolverConfig::new(nmax, binomial3(nmax)));
    let mut compared = 0usize;
    let mut bad = Vec::new();
    for (&(n, k, r), count) in joint.iter() {
        compared += 1;
        if p.coeff(n as u32, k as u32, r as u32).expect("in range") != BigInt::from(count.clone()) {
            bad.push((n, k, r));
        }
    }
    for (e, _) in p.terms() {
        if joint.get(e.z as usize, e.t as usize, e.q as usize) == Default::default() {
            bad.push((e.z as usize, e.t as usize, e.q as usize));
        }
    }
    Outcome::check(
        bad.is_empty(),
        format!(
            "n <= {nmax}: {compared} cells, {} series terms, mismatches {bad:?}",
            p.len()
        ),
    )
}

fn identity_suite() -> Outcome {
    let checks = verify::run(&SolverConfig::new(8, 12));
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    Outcome::check(
        failed.is_empty(),
        format!(
            "nz = 8, nq = 12: {}/{} identities, failed {failed:?}",
            checks.len() - failed.len(),
            checks.len()
        ),
    )
}

fn row_sums() -> Outcome {
    let p = genfun::solve_p(&SolverConfig::new(6, 20)).set_t_one();
    let f = oracle::f_table(6).expect("f");
    let bad: Vec<usize> = (0..=6usize)
        .filter(|&n| {
            let c = oracle::catalan(n);
            genfun::total_at(&p, n as u32) != c || BigInt::from(f.row_sum(n)) != c
        })
        .collect();
    Outcome::check(
        bad.is_empty(),
        format!("n <= 6, nq = 20, failing n {bad:?}"),
    )
}

fn truncation_soundness() -> Outcome {
    let mut bad = Vec::new();
    let orders = [(0, 0), (4, 9), (8, 12), (10, 6), (12, 8)];
    for (nz, nq) in orders {
        let small = SolverConfig::new(nz, nq);
        let big = SolverConfig::new(nz + 4, nq + 4);
        let o = small.order();
        let pairs: [(&str, TriSeries, TriSeries); 5] = [
            ("P", genfun::solve_p(&small), genfun::solve_p(&big)),
            ("Q", genfun::solve_q(&small), genfun::solve_q(&big)),
            (
                "B",
                genfun::iterate_b(&small).unwrap(),
                genfun::iterate_b(&big).unwrap(),
            ),
            (
                "explicit B",
                genfun::explicit_b(&small).unwrap(),
                genfun::explicit_b(&big).unwrap(),
            ),
            (
                "contfrac",
                genfun::contfrac_p(&small).unwrap(),
                genfun::contfrac_p(&big).unwrap(),
            ),
        ];
        for (name, s, b) in pairs {
            if s != b.truncate(o) {
                bad.push(format!("{name} at ({nz},{nq})"));
            }
        }
    }
    Outcome::check(
        bad.is_empty(),
        format!(
            "P, Q, B, explicit B, contfrac at {} orders, +4/+4; failures {bad:?}",
            orders.len()
        ),
    )
}

fn round_trip() -> Outcome {
    let mut bad = Vec::new();
    let ar = genfun::ar_table(&SolverConfig::new(30, 8)).expect("ar");
    let aaron = genfun::aaron_table(&SolverConfig::new(30, 7)).expect("aaron");
    let cases = ar
        .iter()
        .take(8)
        .enumerate()
        .map(|(r, s)| ("AR", r, s, r as u32 + 1))
        .chain(
            aaron
                .iter()
                .take(7)
                .enumerate()
                .map(|(r, s)| ("Aaron", r, s, r as u32 + 2)),
        );
    for (name, r, s, k) in cases {
        match ratrec::reconstruct(s, DEFAULT_GUARD) {
            Ok(rf) => {
                let minimal = fit_with_power(s, k - 1, DEFAULT_GUARD).is_none();
                if rf.denom_power != k || !minimal || ratrec::expand(&rf, s.nz()) != *s {
                    bad.push(format!("{name} r={r}: k={}", rf.denom_power));
                }
            }
            Err(e) => bad.push(format!("{name} r={r}: {e}")),
        }
    }
    Outcome::check(
        bad.is_empty(),
        format!("AR r <= 7 (k = r+1), Aaron r <= 6 (k = r+2), through z^30; failures {bad:?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("AR closed forms reproduced", ar_table_reproduction),
        ("Aaron closed forms reproduced", aaron_table_reproduction),
        (
            "bivariate series equal brute-force f and g",
            bivariate_oracle_equivalence,
        ),
        (
            "trivariate P equals joint table",
            trivariate_oracle_equivalence,
        ),
        ("identity suite", identity_suite),
        ("row sums are Catalan numbers", row_sums),
        ("truncation soundness", truncation_soundness),
        ("reconstruction round trip with minimal k", round_trip),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {} {name}: {}", i + 1, o.detail);
        if !o.passed && !o.expected_failure {
            unexpected.push(i + 1);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}

#[test]
fn printed_forms_sanity() {
    assert_eq!(ar_printed().len(), 8);
    assert_eq!(aaron_printed().len(), 7);
}
