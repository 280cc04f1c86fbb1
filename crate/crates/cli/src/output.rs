//! Output records and their text / JSON / CSV renderings.
//!
//! Counts and coefficients are always written as decimal strings in JSON;
//! exponents and indices are plain integers. Every rendering is
//! deterministic: terms come out sorted by exponent.

use std::fmt::Write as _;

use clap::ValueEnum;
use num_bigint::{BigInt, BigUint};
use patfrac::oracle::{JointTable, PatternTable};
use patfrac::ratrec::RationalFn;
use patfrac::verify::Check;
use patfrac::TriSeries;
use serde_json::{json, Value};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub enum Record {
    /// Series at t = 1: `(n, r, coeff)` with the truncation for the text grid.
    Bivariate {
        nz: u32,
        nq: u32,
        terms: Vec<(u32, u32, BigInt)>,
    },
    /// Series with t kept: `(n, k, r, coeff)`.
    Trivariate {
        terms: Vec<(u32, u32, u32, BigInt)>,
    },
    Rational {
        name: &'static str,
        r: u32,
        rf: RationalFn,
    },
    Table {
        which: &'static str,
        nmax: usize,
        rows: Vec<(usize, usize, BigUint)>,
    },
    Joint {
        nmax: usize,
        rows: Vec<(usize, usize, usize, BigUint)>,
    },
    Verification(Vec<Check>),
}

impl Record {
    /// Panics if `s` still depends on t.
    pub fn bivariate(s: &TriSeries) -> Record {
        let o = s.order();
        Record::Bivariate {
            nz: o.nz,
            nq: o.nq,
            terms: s
                .terms()
                .map(|(e, c)| {
                    assert_eq!(e.t, 0, "bivariate record needs t = 1");
                    (e.z, e.q, c.clone())
                })
                .collect(),
        }
    }

    pub fn trivariate(s: &TriSeries) -> Record {
        Record::Trivariate {
            terms: s.terms().map(|(e, c)| (e.z, e.t, e.q, c.clone())).collect(),
        }
    }

    pub fn rational(name: &'static str, r: u32, rf: &RationalFn) -> Record {
        Record::Rational {
            name,
            r,
            rf: rf.clone(),
        }
    }

    pub fn table(which: &'static str, t: &PatternTable) -> Record {
        Record::Table {
            which,
            nmax: t.nmax(),
            rows: t.iter().map(|(&(n, r), c)| (n, r, c.clone())).collect(),
        }
    }

    pub fn joint(t: &JointTable) -> Record {
        Record::Joint {
            nmax: t.nmax(),
            rows: t
                .iter()
                .map(|(&(n, k, r), c)| (n, k, r, c.clone()))
                .collect(),
        }
    }

    pub fn verification(checks: &[Check]) -> Record {
        Record::Verification(checks.to_vec())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Json => {
                let mut s = serde_json::to_string(&self.json()).expect("json");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Record::Bivariate { terms, .. } => json!({
                "kind": "series",
                "vars": ["z", "q"],
                "terms": terms.iter().map(|(n, r, c)| json!({
                    "n": n, "r": r, "coeff": c.to_string(),
                })).collect::<Vec<_>>(),
            }),
            Record::Trivariate { terms } => json!({
                "kind": "series",
                "vars": ["z", "t", "q"],
                "terms": terms.iter().map(|(n, k, r, c)| json!({
                    "n": n, "k": k, "r": r, "coeff": c.to_string(),
                })).collect::<Vec<_>>(),
            }),
            Record::Rational { name, r, rf } => json!({
                "kind": "rational",
                "series": name,
                "r": r,
                "numerator": rf.numerator.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "denom_power": rf.denom_power,
                "text": rf.render(),
            }),
            Record::Table { which, nmax, rows } => json!({
                "kind": "table",
                "which": which,
                "nmax": nmax,
                "rows": rows.iter().map(|(n, r, c)| json!({
                    "n": n, "r": r, "count": c.to_string(),
                })).collect::<Vec<_>>(),
            }),
            Record::Joint { nmax, rows } => json!({
                "kind": "table",
                "which": "joint",
                "nmax": nmax,
                "rows": rows.iter().map(|(n, k, r, c)| json!({
                    "n": n, "k": k, "r": r, "count": c.to_string(),
                })).collect::<Vec<_>>(),
            }),
            Record::Verification(checks) => json!({
                "kind": "verification",
                "passed": checks.iter().all(|c| c.passed),
                "checks": checks.iter().map(|c| json!({
                    "name": c.name, "passed": c.passed, "detail": c.detail,
                })).collect::<Vec<_>>(),
            }),
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        match self {
            // one line per q-power, z-coefficients 0..=nz
            Record::Bivariate { nz, nq, terms } => {
                let mut grid = vec![vec![BigInt::default(); *nz as usize + 1]; *nq as usize + 1];
                for (n, r, c) in terms {
                    grid[*r as usize][*n as usize] = c.clone();
                }
                for row in grid {
                    let cells: Vec<String> = row.iter().map(BigInt::to_string).collect();
                    writeln!(out, "{}", cells.join(", ")).unwrap();
                }
            }
            Record::Trivariate { terms } => {
                writeln!(out, "# n k r coeff").unwrap();
                for (n, k, r, c) in terms {
                    writeln!(out, "{n} {k} {r} {c}").unwrap();
                }
            }
            Record::Rational { rf, .. } => {
                writeln!(out, "{}", rf.render()).unwrap();
            }
            Record::Table { rows, .. } => {
                writeln!(out, "# n r count").unwrap();
                for (n, r, c) in rows {
                    writeln!(out, "{n} {r} {c}").unwrap();
                }
            }
            Record::Joint { rows, .. } => {
                writeln!(out, "# n k r count").unwrap();
                for (n, k, r, c) in rows {
                    writeln!(out, "{n} {k} {r} {c}").unwrap();
                }
            }
            Record::Verification(checks) => {
                for c in checks {
                    if c.passed {
                        writeln!(out, "PASS {}", c.name).unwrap();
                    } else {
                        writeln!(out, "FAIL {}: {}", c.name, c.detail).unwrap();
                    }
                }
                let passed = checks.iter().filter(|c| c.passed).count();
                writeln!(out, "{passed}/{} identities passed", checks.len()).unwrap();
            }
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        match self {
            Record::Bivariate { terms, .. } => {
                writeln!(out, "n,r,coeff").unwrap();
                for (n, r, c) in terms {
                    writeln!(out, "{n},{r},{c}").unwrap();
                }
            }
            Record::Trivariate { terms } => {
                writeln!(out, "n,k,r,coeff").unwrap();
                for (n, k, r, c) in terms {
                    writeln!(out, "{n},{k},{r},{c}").unwrap();
                }
            }
            Record::Rational { name, r, rf } => {
                writeln!(out, "series,r,degree,coeff").unwrap();
                for (d, c) in rf.numerator.coefficients().iter().enumerate() {
                    writeln!(out, "{name},{r},{d},{c}").unwrap();
                }
            }
            Record::Table { rows, .. } => {
                writeln!(out, "n,r,count").unwrap();
                for (n, r, c) in rows {
                    writeln!(out, "{n},{r},{c}").unwrap();
                }
            }
            Record::Joint { rows, .. } => {
                writeln!(out, "n,k,r,count").unwrap();
                for (n, k, r, c) in rows {
                    writeln!(out, "{n},{k},{r},{c}").unwrap();
                }
            }
            Record::Verification(checks) => {
                writeln!(out, "name,passed").unwrap();
                for c in checks {
                    writeln!(out, "{},{}", c.name, c.passed).unwrap();
                }
            }
        }
        out
    }
}
