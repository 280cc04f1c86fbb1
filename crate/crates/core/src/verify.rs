//! The identity suite: every relation between `P`, `Q` and `B` that can be
//! checked exactly in the truncated ring.

use crate::genfun::{
    contfrac_p, explicit_b, iterate_b, p_residual, phi1_closed_form, phi_m, q_residual,
    quotient_residual, solve_p, solve_q, GenfunError, SolverConfig,
};
use crate::series::TriSeries;

/// Largest `m` whose `phi_m` recursion is compared against `B`.
pub const PHI_STRATA: u32 = 4;

/// Extra `(nz, nq)` headroom used by the truncation-soundness check.
pub const SOUNDNESS_MARGIN: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_result(name: &'static str, r: Result<Option<String>, GenfunError>) -> Check {
        match r {
            Ok(None) => Check {
                name,
                passed: true,
                detail: String::new(),
            },
            Ok(Some(detail)) => Check {
                name,
                passed: false,
                detail,
            },
            Err(e) => Check {
                name,
                passed: false,
                detail: e.to_string(),
            },
        }
    }
}

fn zero_or(label: &str, s: &TriSeries) -> Option<String> {
    if s.is_zero() {
        None
    } else {
        Some(format!("{label} has {} nonzero terms", s.len()))
    }
}

fn equal_or(label: &str, a: &TriSeries, b: &TriSeries) -> Option<String> {
    if a == b {
        None
    } else {
        let diff = a - b;
        Some(format!("{label}: difference has {} terms", diff.len()))
    }
}

/// Runs every identity at `config`'s truncation order.
pub fn run(config: &SolverConfig) -> Vec<Check> {
    let p = solve_p(config);
    let mut checks = Vec::new();

    checks.push(Check::from_result(
        "P functional equation residual",
        Ok(zero_or("P - 1 - z P(q,zt,tq) P", &p_residual(&p))),
    ));
    checks.push(Check::from_result(
        "Q functional equation residual",
        Ok(zero_or("Q residual", &q_residual(&p, &solve_q(config)))),
    ));

    let b = iterate_b(config);
    checks.push(Check::from_result(
        "quotient form P B = B(q,zt,tq)",
        b.clone()
            .map(|b| zero_or("P B - B(q,zt,tq)", &quotient_residual(&p, &b))),
    ));
    checks.push(Check::from_result(
        "explicit B equals iterated B",
        b.clone()
            .and_then(|b| Ok(equal_or("explicit - iterated", &explicit_b(config)?, &b))),
    ));
    checks.push(Check::from_result(
        "continued fraction equals functional-equation P",
        contfrac_p(config).map(|f| equal_or("contfrac - P", &f, &p)),
    ));
    checks.push(Check::from_result(
        "phi_1 stratum closed form",
        b.clone().map(|b| {
            if config.nz == 0 {
                return None;
            }
            equal_or(
                "z^1 stratum",
                &b.z_stratum(1),
                &phi1_closed_form(config).shift(1, 0, 0),
            )
        }),
    ));
    checks.push(Check::from_result(
        "phi_m recursion matches explicit B strata",
        explicit_b(config).map(|eb| {
            (0..=PHI_STRATA.min(config.nz)).find_map(|m| {
                equal_or(
                    &format!("z^{m} stratum"),
                    &eb.z_stratum(m),
                    &phi_m(m, config).shift(m, 0, 0),
                )
            })
        }),
    ));
    checks.push(Check::from_result(
        "truncation soundness",
        soundness(config, &p),
    ));
    checks
}

/// Every series recomputed with `SOUNDNESS_MARGIN` more `z` and `q` and then
/// re-truncated must equal the one computed directly.
fn soundness(config: &SolverConfig, p: &TriSeries) -> Result<Option<String>, GenfunError> {
    let big = SolverConfig {
        nz: config.nz + SOUNDNESS_MARGIN,
        nq: config.nq + SOUNDNESS_MARGIN,
        depth: None,
    };
    let o = config.order();
    let pairs: Vec<(&str, TriSeries, TriSeries)> = vec![
        ("P", solve_p(&big).truncate(o), p.clone()),
        ("Q", solve_q(&big).truncate(o), solve_q(config)),
        (
            "iterated B",
            iterate_b(&big)?.truncate(o),
            iterate_b(config)?,
        ),
        (
            "explicit B",
            explicit_b(&big)?.truncate(o),
            explicit_b(config)?,
        ),
        (
            "continued fraction",
            contfrac_p(&big)?.truncate(o),
            contfrac_p(config)?,
        ),
    ];
    Ok(pairs.iter().find_map(|(name, a, b)| equal_or(name, a, b)))
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
