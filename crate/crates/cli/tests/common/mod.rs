//! Published closed forms of AR(r, z) and Aaron(r, z), entered as printed
//! (factored, lowest degree first inside each factor), plus helpers to run
//! the binary.
#![allow(dead_code)]

use std::process::{Command, Output};

use patfrac::ratrec::RationalFn;
use patfrac::ZPoly;

/// One printed entry: product of factors over `(1 - 2z)^k`, or over
/// `(-1 + 2z)^k` when `negated_denominator` is set.
pub struct PrintedForm {
    pub factors: Vec<Vec<i64>>,
    pub scalar: i64,
    pub denom_power: u32,
    pub negated_denominator: bool,
    /// The printed sign disagrees with the enumerated counts (every
    /// coefficient of the printed expansion is the negated count).
    pub sign_erratum: bool,
}

impl PrintedForm {
    /// The entry over `(1 - 2z)^k`, normalizing a `(-1 + 2z)^k` denominator.
    pub fn normalized(&self) -> RationalFn {
        let num = self
            .factors
            .iter()
            .fold(ZPoly::from_i64(&[self.scalar]), |acc, f| {
                &acc * &ZPoly::from_i64(f)
            });
        if self.negated_denominator {
            RationalFn::from_negated_denominator(num, self.denom_power)
        } else {
            RationalFn::new(num, self.denom_power)
        }
    }
}

fn z(k: usize) -> Vec<i64> {
    let mut v = vec![0; k + 1];
    v[k] = 1;
    v
}

fn form(factors: Vec<Vec<i64>>, scalar: i64, k: u32, negated: bool, erratum: bool) -> PrintedForm {
    PrintedForm {
        factors,
        scalar,
        denom_power: k,
        negated_denominator: negated,
        sign_erratum: erratum,
    }
}

/// AR(r, z) for r = 0..=7.
pub fn ar_printed() -> Vec<PrintedForm> {
    vec![
        form(vec![vec![1, -1]], 1, 1, false, false),
        form(vec![z(3)], 1, 2, false, false),
        form(vec![vec![1, -1], z(4)], 1, 3, false, false),
        form(vec![vec![1, -1], vec![1, -1], z(5)], 1, 4, false, false),
        form(vec![z(4), vec![-1, 6, -13, 11, -3, 1]], 1, 5, true, false),
        form(
            vec![z(5), vec![2, -14, 37, -44, 22, -4, 1]],
            1,
            6,
            false,
            false,
        ),
        form(
            vec![vec![1, -1], vec![1, -1], z(6), vec![-3, 18, -37, 27, -3, 1]],
            1,
            7,
            true,
            false,
        ),
        form(
            vec![
                z(5),
                vec![1, -12, 64, -196, 373, -450, 343, -164, 47, -6, 1],
            ],
            1,
            8,
            false,
            false,
        ),
    ]
}

/// Aaron(r, z) for r = 0..=6. Entries 2, 3 and 6 carry the wrong overall sign.
pub fn aaron_printed() -> Vec<PrintedForm> {
    vec![
        form(vec![z(3)], 1, 2, false, false),
        form(vec![z(5)], 2, 3, false, false),
        form(vec![z(4), vec![-1, 4, -6, 1]], 1, 4, false, true),
        form(vec![z(5), vec![-1, 1], vec![1, -4, 5]], 2, 5, false, true),
        form(vec![z(6), vec![5, -30, 65, -55, 12, 1]], 1, 6, false, false),
        form(
            vec![z(7), vec![-4, 27, -69, 80, -40, 6, 1]],
            -2,
            7,
            false,
            false,
        ),
        form(
            vec![
                z(6),
                vec![-1, 1],
                vec![-2, 20, -91, 231, -329, 240, -77, 13, 3],
            ],
            -1,
            8,
            false,
            true,
        ),
    ]
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_patfrac"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn patfrac")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

pub fn fixture_lines(name: &str) -> Vec<String> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(path)
        .expect("fixture")
        .lines()
        .map(str::to_owned)
        .collect()
}
