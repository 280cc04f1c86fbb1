//! Brute-force ground truth: enumerate permutations and count patterns.
//!
//! Nothing here is clever on purpose. The full-scan tables walk every
//! permutation of `1..=n` and count triples directly; they are the reference
//! every generating-function coefficient is checked against.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::par::Strategy;

/// Largest `n` enumerated without an explicit override (12! is about 4.8e8).
pub const DESK_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(
        "nmax = {0} exceeds the enumeration cap of {DESK_CAP}; pass an override to run it anyway"
    )]
    AboveCap(usize),
    #[error("not a permutation of 1..={n}: {letters:?}")]
    InvalidPermutation { n: usize, letters: Vec<u32> },
}

/// A rearrangement of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    letters: Vec<u32>,
}

impl Permutation {
    pub fn new(letters: Vec<u32>) -> Result<Self, OracleError> {
        let n = letters.len();
        let mut seen = vec![false; n];
        for &l in &letters {
            let i = l as usize;
            if i == 0 || i > n || seen[i - 1] {
                return Err(OracleError::InvalidPermutation { n, letters });
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { letters })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            letters: (1..=n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn reversed(&self) -> Permutation {
        Permutation {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn counts(&self) -> PatternCounts {
        count_patterns(&self.letters)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PatternCounts {
    pub count132: u64,
    pub count123: u64,
    pub count12: u64,
}

/// Counts 132-, 123- and 12-patterns by scanning every pair and triple.
/// Only relative order matters, so any sequence of distinct values works.
pub fn count_patterns(p: &[u32]) -> PatternCounts {
    let n = p.len();
    let mut c = PatternCounts::default();
    for i in 0..n {
        for j in i + 1..n {
            if p[i] < p[j] {
                c.count12 += 1;
            }
            for k in j + 1..n {
                let (a, b, d) = (p[i], p[j], p[k]);
                if a < d && d < b {
                    c.count132 += 1;
                } else if a < b && b < d {
                    c.count123 += 1;
                }
            }
        }
    }
    c
}

/// Number of falling triples `i<j<k` with `p[i] > p[j] > p[k]`.
pub fn count_321(p: &[u32]) -> u64 {
    let n = p.len();
    let mut c = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if p[i] > p[j] && p[j] > p[k] {
                    c += 1;
                }
            }
        }
    }
    c
}

/// Number of falling pairs (inversions).
pub fn count_21(p: &[u32]) -> u64 {
    let n = p.len();
    let mut c = 0;
    for i in 0..n {
        for j in i + 1..n {
            if p[i] > p[j] {
                c += 1;
            }
        }
    }
    c
}

/// Rearranges `v` into its lexicographic successor; returns `false` (leaving
/// `v` sorted ascending) when `v` was the last permutation.
pub fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Calls `visit` on every permutation of `1..=n` whose first letter is `first`.
fn for_each_with_first(n: usize, first: u32, mut visit: impl FnMut(&[u32])) {
    let mut p: Vec<u32> = Vec::with_capacity(n);
    p.push(first);
    p.extend((1..=n as u32).filter(|&l| l != first));
    loop {
        visit(&p);
        if !next_permutation(&mut p[1..]) {
            break;
        }
    }
}

/// Counts indexed by `(n, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternTable {
    rows: BTreeMap<(usize, usize), BigUint>,
    nmax: usize,
}

impl PatternTable {
    fn empty(nmax: usize) -> Self {
        PatternTable {
            rows: BTreeMap::new(),
            nmax,
        }
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    /// Count for `(n, r)`; zero when absent.
    pub fn get(&self, n: usize, r: usize) -> BigUint {
        self.rows.get(&(n, r)).cloned().unwrap_or_default()
    }

    /// Nonzero cells sorted by `(n, r)`.
    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &BigUint)> {
        self.rows.iter()
    }

    pub fn row_sum(&self, n: usize) -> BigUint {
        self.rows
            .range((n, 0)..=(n, usize::MAX))
            .map(|(_, c)| c)
            .sum()
    }

    fn add_count(&mut self, n: usize, r: usize, c: u64) {
        if c > 0 {
            *self.rows.entry((n, r)).or_default() += c;
        }
    }

    fn merge(mut self, other: PatternTable) -> PatternTable {
        for (k, v) in other.rows {
            *self.rows.entry(k).or_default() += v;
        }
        self.nmax = self.nmax.max(other.nmax);
        self
    }
}

/// Counts indexed by `(n, k, r)`: length, rising pairs, rising triples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JointTable {
    cells: BTreeMap<(usize, usize, usize), BigUint>,
    nmax: usize,
}

impl JointTable {
    pub fn nmax(&self) -> usize {
        self.nmax
    }

    pub fn get(&self, n: usize, k: usize, r: usize) -> BigUint {
        self.cells.get(&(n, k, r)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize, usize), &BigUint)> {
        self.cells.iter()
    }
}

/// Which permutations a table counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Avoiding,
    ExactlyOne132,
}

impl Class {
    fn admits(self, c: &PatternCounts) -> bool {
        match self {
            Class::Avoiding => c.count132 == 0,
            Class::ExactlyOne132 => c.count132 == 1,
        }
    }
}

/// Enumeration options shared by the table builders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Enumeration {
    pub strategy: Strategy,
    /// Allow `nmax` above [`DESK_CAP`].
    pub allow_large: bool,
}

fn check_cap(nmax: usize, opts: Enumeration) -> Result<(), OracleError> {
    if nmax > DESK_CAP && !opts.allow_large {
        Err(OracleError::AboveCap(nmax))
    } else {
        Ok(())
    }
}

/// Work items: one per `(n, first letter)`, plus the empty permutation.
fn work_items(nmax: usize) -> Vec<(usize, u32)> {
    let mut items = vec![(0, 0)];
    for n in 1..=nmax {
        for first in 1..=n as u32 {
            items.push((n, first));
        }
    }
    items
}

fn scan_class(nmax: usize, class: Class, opts: Enumeration) -> Result<PatternTable, OracleError> {
    check_cap(nmax, opts)?;
    let items = work_items(nmax);
    Ok(opts.strategy.map_reduce(
        &items,
        || PatternTable::empty(nmax),
        |mut table, &(n, first)| {
            if n == 0 {
                if class.admits(&PatternCounts::default()) {
                    table.add_count(0, 0, 1);
                }
                return table;
            }
            let mut counts = vec![0u64; binomial(n, 3) + 1];
            for_each_with_first(n, first, |p| {
                let c = count_patterns(p);
                if class.admits(&c) {
                    counts[c.count123 as usize] += 1;
                }
            });
            for (r, c) in counts.into_iter().enumerate() {
                table.add_count(n, r, c);
            }
            table
        },
        PatternTable::merge,
    ))
}

/// `f_r(n)`: 132-avoiding permutations of `n` letters with exactly `r` rising triples, `n <= nmax`.
pub fn f_table(nmax: usize) -> Result<PatternTable, OracleError> {
    f_table_with(nmax, Enumeration::default())
}

pub fn f_table_with(nmax: usize, opts: Enumeration) -> Result<PatternTable, OracleError> {
    scan_class(nmax, Class::Avoiding, opts)
}

/// `g_r(n)`: permutations of `n` letters with exactly one 132-pattern and `r` rising triples.
pub fn g_table(nmax: usize) -> Result<PatternTable, OracleError> {
    g_table_with(nmax, Enumeration::default())
}

pub fn g_table_with(nmax: usize, opts: Enumeration) -> Result<PatternTable, OracleError> {
    scan_class(nmax, Class::ExactlyOne132, opts)
}

/// For 132-avoiders: counts by `(n, rising pairs, rising triples)`.
pub fn joint_table(nmax: usize) -> Result<JointTable, OracleError> {
    joint_table_with(nmax, Enumeration::default())
}

pub fn joint_table_with(nmax: usize, opts: Enumeration) -> Result<JointTable, OracleError> {
    check_cap(nmax, opts)?;
    let items = work_items(nmax);
    let merge = |mut a: JointTable, b: JointTable| {
        for (k, v) in b.cells {
            *a.cells.entry(k).or_default() += v;
        }
        a
    };
    Ok(opts.strategy.map_reduce(
        &items,
        || JointTable {
            cells: BTreeMap::new(),
            nmax,
        },
        |mut table, &(n, first)| {
            if n == 0 {
                table.cells.insert((0, 0, 0), BigUint::one());
                return table;
            }
            let mut local: BTreeMap<(usize, usize, usize), u64> = BTreeMap::new();
            for_each_with_first(n, first, |p| {
                let c = count_patterns(p);
                if c.count132 == 0 {
                    *local
                        .entry((n, c.count12 as usize, c.count123 as usize))
                        .or_default() += 1;
                }
            });
            for (k, v) in local {
                *table.cells.entry(k).or_default() += v;
            }
            table
        },
        merge,
    ))
}

/// Depth-first generation of permutations with at most `max132` copies of
/// 132, extending a prefix one letter at a time and abandoning it as soon as
/// the prefix already holds too many. A pattern in a prefix stays in every
/// extension, so no admissible permutation is lost.
fn pruned_scan(nmax: usize, class: Class, opts: Enumeration) -> Result<PatternTable, OracleError> {
    check_cap(nmax, opts)?;
    let limit: u64 = match class {
        Class::Avoiding => 0,
        Class::ExactlyOne132 => 1,
    };

    struct Walk {
        n: usize,
        limit: u64,
        class: Class,
        prefix: Vec<u32>,
        used: Vec<bool>,
        counts: Vec<u64>,
    }

    impl Walk {
        fn go(&mut self, c132: u64, c123: u64) {
            if self.prefix.len() == self.n {
                if self.class.admits(&PatternCounts {
                    count132: c132,
                    count123: c123,
                    count12: 0,
                }) {
                    self.counts[c123 as usize] += 1;
                }
                return;
            }
            for l in 1..=self.n as u32 {
                if self.used[l as usize - 1] {
                    continue;
                }
                // new triples all end at the appended letter
                let (mut add132, mut add123) = (0u64, 0u64);
                let m = self.prefix.len();
                for i in 0..m {
                    for j in i + 1..m {
                        let (a, b) = (self.prefix[i], self.prefix[j]);
                        if a < l && l < b {
                            add132 += 1;
                        } else if a < b && b < l {
                            add123 += 1;
                        }
                    }
                }
                if c132 + add132 > self.limit {
                    continue;
                }
                self.used[l as usize - 1] = true;
                self.prefix.push(l);
                self.go(c132 + add132, c123 + add123);
                self.prefix.pop();
                self.used[l as usize - 1] = false;
            }
        }
    }

    let mut table = PatternTable::empty(nmax);
    if class.admits(&PatternCounts::default()) {
        table.add_count(0, 0, 1);
    }
    for n in 1..=nmax {
        let mut w = Walk {
            n,
            limit,
            class,
            prefix: Vec::with_capacity(n),
            used: vec![false; n],
            counts: vec![0; binomial(n, 3) + 1],
        };
        w.go(0, 0);
        for (r, c) in w.counts.into_iter().enumerate() {
            table.add_count(n, r, c);
        }
    }
    Ok(table)
}

/// Same as [`f_table`], generated with prefix pruning instead of a full scan.
pub fn f_table_pruned(nmax: usize, opts: Enumeration) -> Result<PatternTable, OracleError> {
    pruned_scan(nmax, Class::Avoiding, opts)
}

/// Same as [`g_table`], generated with prefix pruning instead of a full scan.
pub fn g_table_pruned(nmax: usize, opts: Enumeration) -> Result<PatternTable, OracleError> {
    pruned_scan(nmax, Class::ExactlyOne132, opts)
}

/// Catalan number `C(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigInt {
    let mut c = BigInt::one();
    // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step
    for k in 0..n {
        c = c * (2 * (2 * k + 1)) / (k + 2);
    }
    c
}

/// Total number of permutations of each length up to `nmax` with exactly one 132-pattern.
pub fn exactly_one_132_totals(nmax: usize) -> Vec<BigUint> {
    (0..=nmax)
        .map(|n| {
            if n == 0 {
                return BigUint::zero();
            }
            let mut p: Vec<u32> = (1..=n as u32).collect();
            let mut total = 0u64;
            loop {
                if count_patterns(&p).count132 == 1 {
                    total += 1;
                }
                if !next_permutation(&mut p) {
                    break;
                }
            }
            BigUint::from(total)
        })
        .collect()
}
