//! Generating functions for 123-patterns in 132-avoiding permutations.
//!
//! `P(q, z, t)` weights each 132-avoider by `z^len t^(rising pairs) q^(rising triples)`
//! and satisfies `P = 1 + z P(q, zt, tq) P`. Its continued fraction has level-n
//! numerator `z t^n q^C(n,2)`. Writing `P = B(q, zt, tq) / B(q, z, t)`, the
//! denominator satisfies `B = B(q, zt, tq) - z B(q, t^2 q z, t q^2)` and has an
//! explicit lattice-sum form. `Q(q, z, t)` is the same weight summed over
//! permutations with exactly one 132-pattern.
//!
//! Everything here is a truncated-series computation in [`TriSeries`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::par::Strategy;
use crate::series::{ExponentTriple, SeriesError, TriSeries, TruncationOrder, ZSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenfunError {
    #[error("q-power {r} is beyond the truncation nq = {nq}")]
    PowerOutOfRange { r: u32, nq: u32 },
    #[error("B iteration did not settle within {cap} steps at {order}")]
    NoFixpoint { cap: u32, order: TruncationOrder },
    #[error("lattice sum produced an invalid exponent for j = {j:?}: {what}")]
    BadExponent { j: Vec<u32>, what: &'static str },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Truncation and continued-fraction depth for the solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub nz: u32,
    pub nq: u32,
    /// Continued-fraction depth; `None` picks [`SolverConfig::default_depth`].
    pub depth: Option<u32>,
}

impl SolverConfig {
    pub fn new(nz: u32, nq: u32) -> Self {
        SolverConfig {
            nz,
            nq,
            depth: None,
        }
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn order(&self) -> TruncationOrder {
        TruncationOrder::new(self.nz, self.nq)
    }

    /// Smallest depth whose omitted tail cannot reach a retained term:
    /// `min(nz + 1, first n with C(n, 2) > nq)`.
    pub fn default_depth(&self) -> u32 {
        let mut n = 0u32;
        while binomial(n as u64, 2) <= self.nq as u64 {
            n += 1;
        }
        n.min(self.nz + 1)
    }

    pub fn depth(&self) -> u32 {
        self.depth.unwrap_or_else(|| self.default_depth())
    }

    fn check_power(&self, r: u32) -> Result<(), GenfunError> {
        if r > self.nq {
            Err(GenfunError::PowerOutOfRange { r, nq: self.nq })
        } else {
            Ok(())
        }
    }
}

/// `P(q, zt, tq)`.
pub fn shift_zt(s: &TriSeries) -> TriSeries {
    s.substitute(1, 0, 1)
}

/// `B(q, t^2 q z, t q^2)`.
pub fn shift_t2qz(s: &TriSeries) -> TriSeries {
    s.substitute(2, 1, 2)
}

/// Solves `P = 1 + z P(q, zt, tq) P`.
///
/// The fixed-point iteration is run one `z`-degree at a time: the right-hand
/// side at degree `n` only involves degrees below `n`, and substitution keeps
/// `z`-degree, so
/// `P_n = z * sum_{i + j = n - 1} P_i(q, zt, tq) P_j`.
/// This reaches the same fixed point as whole-series iteration from `P = 1`
/// with the cost of a single product.
pub fn solve_p(config: &SolverConfig) -> TriSeries {
    solve_p_strata(config).into_series(config.order())
}

/// Strata of `P` by `z`-degree, together with their `(zt, tq)` images.
struct Strata {
    parts: Vec<TriSeries>,
    shifted: Vec<TriSeries>,
}

impl Strata {
    fn into_series(self, order: TruncationOrder) -> TriSeries {
        self.parts
            .iter()
            .fold(TriSeries::zero(order), |acc, p| &acc + p)
    }
}

/// `sum_{i + j = n} a_i b_j` over strata.
fn convolve(a: &[TriSeries], b: &[TriSeries], n: usize, order: TruncationOrder) -> TriSeries {
    (0..=n)
        .filter(|&i| i < a.len() && n - i < b.len())
        .fold(TriSeries::zero(order), |acc, i| &acc + &(&a[i] * &b[n - i]))
}

fn solve_p_strata(config: &SolverConfig) -> Strata {
    let order = config.order();
    let mut parts = vec![TriSeries::one(order)];
    let mut shifted = vec![shift_zt(&parts[0])];
    for n in 1..=config.nz as usize {
        let pn = convolve(&shifted, &parts, n - 1, order).shift(1, 0, 0);
        shifted.push(shift_zt(&pn));
        parts.push(pn);
    }
    Strata { parts, shifted }
}

/// Evaluates the finite continued fraction bottom-up,
/// `F <- 1 / (1 - z t^n q^C(n,2) F)` for `n = depth - 1, ..., 0`.
pub fn contfrac_p(config: &SolverConfig) -> Result<TriSeries, GenfunError> {
    let order = config.order();
    let mut f = TriSeries::one(order);
    for n in (0..config.depth()).rev() {
        let numerator = TriSeries::monomial(1, n as i64, binomial(n as i64, 2), 1, order)?;
        f = (&numerator * &f).reciprocal_one_minus()?;
    }
    Ok(f)
}

/// Solves
/// `Q = z P(q,zt,qt) Q + z Q(q,zt,qt) P + t^2 z^2 P(q,zt,qt) (P - 1)`
/// for the weight of permutations with exactly one 132-pattern.
///
/// `P` is solved first and held fixed; the equation is then linear in `Q` and
/// every right-hand term carries a factor `z`, so the same degree-by-degree
/// sweep as in [`solve_p`] yields the fixed point.
pub fn solve_q(config: &SolverConfig) -> TriSeries {
    let order = config.order();
    let p = solve_p_strata(config);
    let nz = config.nz as usize;

    let mut p_minus_one = p.parts.clone();
    p_minus_one[0] = TriSeries::zero(order);

    let mut parts: Vec<TriSeries> = vec![TriSeries::zero(order)];
    let mut shifted: Vec<TriSeries> = vec![TriSeries::zero(order)];
    for n in 1..=nz {
        let linear = &convolve(&p.shifted, &parts, n - 1, order)
            + &convolve(&shifted, &p.parts, n - 1, order);
        let mut qn = linear.shift(1, 0, 0);
        if n >= 2 {
            qn = &qn + &convolve(&p.shifted, &p_minus_one, n - 2, order).shift(2, 2, 0);
        }
        shifted.push(shift_zt(&qn));
        parts.push(qn);
    }
    parts.iter().fold(TriSeries::zero(order), |acc, s| &acc + s)
}

/// One application of `B -> B(q, zt, tq) - z B(q, t^2 q z, t q^2)`.
pub fn b_step(b: &TriSeries) -> TriSeries {
    &shift_zt(b) - &shift_t2qz(b).shift(1, 0, 0)
}

/// Iterates [`b_step`] from `B = 1` until the series stops changing.
///
/// The cap is `max(nz, nq) + 2` steps; exceeding it is reported rather than
/// returning a possibly unsettled series.
pub fn iterate_b(config: &SolverConfig) -> Result<TriSeries, GenfunError> {
    let order = config.order();
    let cap = config.nz.max(config.nq) + 2;
    let mut b = TriSeries::one(order);
    for _ in 0..cap {
        let next = b_step(&b);
        if next == b {
            return Ok(b);
        }
        b = next;
    }
    Err(GenfunError::NoFixpoint { cap, order })
}

/// Evaluates the lattice-sum form of `B`:
///
/// `B = 1 + sum_{m>=1} (-z q^3 t^-2)^m sum_{j_1..j_m >= 2}
///      t^(sum r j_r) q^((sum_{r,s} min(r,s) j_r j_s - 5 sum r j_r) / 2)`.
pub fn explicit_b(config: &SolverConfig) -> Result<TriSeries, GenfunError> {
    explicit_b_with(config, Strategy::default())
}

pub fn explicit_b_with(
    config: &SolverConfig,
    strategy: Strategy,
) -> Result<TriSeries, GenfunError> {
    let order = config.order();
    let mut b = TriSeries::one(order);
    for m in 1..=config.nz {
        b = &b + &lattice_stratum(m, config, strategy)?;
    }
    Ok(b)
}

/// Hard ceiling on any single summation index.
fn index_cap(nq: u32) -> u32 {
    2 * nq + 10
}

/// Doubled `q`-exponent `6m + sum min(r,s) j_r j_s - 5 sum r j_r` for a full
/// index vector (1-based `r`).
fn doubled_q_exponent(j: &[u32]) -> i64 {
    let m = j.len() as i64;
    let mut quad = 0i64;
    let mut weighted = 0i64;
    // sum_{r,s} min(r,s) j_r j_s = sum_r r j_r^2 + 2 sum_{r<s} r j_r j_s
    for (ri, &jr) in j.iter().enumerate() {
        let r = ri as i64 + 1;
        let jr = jr as i64;
        quad += r * jr * jr + 2 * jr * weighted;
        weighted += r * jr;
    }
    6 * m + quad - 5 * weighted
}

/// `t`-exponent `sum r j_r - 2m`.
fn t_exponent(j: &[u32]) -> i64 {
    let weighted: i64 = j
        .iter()
        .enumerate()
        .map(|(ri, &jr)| (ri as i64 + 1) * jr as i64)
        .sum();
    weighted - 2 * j.len() as i64
}

/// The `z^m` part of the lattice sum. Indices are enumerated in
/// lexicographic order; a partial assignment is abandoned once the exponent
/// with every remaining index at 2 already exceeds `nq`. The `q`-exponent
/// never decreases when one index grows (others held at >= 2), so this bound
/// also ends the scan of the current index.
fn lattice_stratum(
    m: u32,
    config: &SolverConfig,
    strategy: Strategy,
) -> Result<TriSeries, GenfunError> {
    let order = config.order();
    let m_us = m as usize;
    let limit = 2 * config.nq as i64;
    let cap = index_cap(config.nq);
    let sign: i64 = if m.is_multiple_of(2) { 1 } else { -1 };

    let bound = |prefix: &[u32]| -> i64 {
        let mut j = prefix.to_vec();
        j.resize(m_us, 2);
        doubled_q_exponent(&j)
    };

    // partition on j_1
    let firsts: Vec<u32> = (2..=cap).take_while(|&j1| bound(&[j1]) <= limit).collect();

    type Acc = Result<HashMap<ExponentTriple, BigInt>, GenfunError>;
    let fold = |acc: Acc, &j1: &u32| -> Acc {
        let mut acc = acc?;
        let mut j = Vec::with_capacity(m_us);
        j.push(j1);
        walk(&mut j, m_us, limit, cap, &bound, &mut |leaf: &[u32]| {
            let dq = doubled_q_exponent(leaf);
            let t = t_exponent(leaf);
            if dq < 0 || t < 0 {
                return Err(GenfunError::BadExponent {
                    j: leaf.to_vec(),
                    what: "negative",
                });
            }
            if dq % 2 != 0 {
                return Err(GenfunError::BadExponent {
                    j: leaf.to_vec(),
                    what: "half-integral q-power",
                });
            }
            let e = ExponentTriple::new(m, t as u32, (dq / 2) as u32);
            *acc.entry(e).or_default() += sign;
            Ok(())
        })?;
        Ok(acc)
    };
    let reduce = |a: Acc, b: Acc| -> Acc {
        let (mut a, b) = (a?, b?);
        for (e, c) in b {
            *a.entry(e).or_default() += c;
        }
        Ok(a)
    };
    let acc = strategy.map_reduce(&firsts, || Ok(HashMap::new()), fold, reduce)?;
    Ok(TriSeries::from_terms(acc, order))
}

fn walk(
    j: &mut Vec<u32>,
    m: usize,
    limit: i64,
    cap: u32,
    bound: &dyn Fn(&[u32]) -> i64,
    leaf: &mut dyn FnMut(&[u32]) -> Result<(), GenfunError>,
) -> Result<(), GenfunError> {
    if j.len() == m {
        return leaf(j);
    }
    for next in 2..=cap {
        j.push(next);
        if bound(j) > limit {
            j.pop();
            break;
        }
        walk(j, m, limit, cap, bound, leaf)?;
        j.pop();
    }
    Ok(())
}

/// `phi_m(q, t)`, the `z^m` coefficient of `B`, from the recursion
/// `phi_m(q,t) = -sum_{j>=2} t^(jm-2) q^(m C(j,2) - 2j + 3) phi_{m-1}(q, t q^j)`
/// with `phi_0 = 1`. Returned as a `z`-free series.
pub fn phi_m(m: u32, config: &SolverConfig) -> TriSeries {
    let order = config.order();
    let cap = index_cap(config.nq);
    let mut phi = TriSeries::one(order);
    for level in 1..=m as u64 {
        let mut next = TriSeries::zero(order);
        for j in 2..=cap as u64 {
            let q_shift = level * binomial(j, 2) + 3 - 2 * j;
            if q_shift > config.nq as u64 {
                break;
            }
            let t_shift = j * level - 2;
            let term = phi
                .substitute(0, 0, j as u32)
                .shift(0, t_shift as u32, q_shift as u32);
            next = &next - &term;
        }
        phi = next;
    }
    phi
}

/// `-sum_{j>=0} t^j q^C(j,2)` truncated at `q^nq`, the closed form of `phi_1`.
pub fn phi1_closed_form(config: &SolverConfig) -> TriSeries {
    let order = config.order();
    let terms = (0u32..)
        .map(|j| (j, binomial(j as u64, 2)))
        .take_while(|&(_, q)| q <= config.nq as u64)
        .map(|(j, q)| (ExponentTriple::new(0, j, q as u32), -BigInt::one()));
    TriSeries::from_terms(terms, order)
}

/// `AR(r, z) = sum_n f_r(n) z^n`, the `q^r` coefficient of `P(q, z, 1)`.
pub fn ar_series(r: u32, config: &SolverConfig) -> Result<ZSeries, GenfunError> {
    config.check_power(r)?;
    Ok(solve_p(config).set_t_one().coeff_q(r)?)
}

/// `Aaron(r, z) = sum_n g_r(n) z^n`, the `q^r` coefficient of `Q(q, z, 1)`.
pub fn aaron_series(r: u32, config: &SolverConfig) -> Result<ZSeries, GenfunError> {
    config.check_power(r)?;
    Ok(solve_q(config).set_t_one().coeff_q(r)?)
}

/// All of `AR(0..=nq, z)` from one solve.
pub fn ar_table(config: &SolverConfig) -> Result<Vec<ZSeries>, GenfunError> {
    let p = solve_p(config).set_t_one();
    (0..=config.nq)
        .map(|r| p.coeff_q(r).map_err(GenfunError::from))
        .collect()
}

/// All of `Aaron(0..=nq, z)` from one solve.
pub fn aaron_table(config: &SolverConfig) -> Result<Vec<ZSeries>, GenfunError> {
    let q = solve_q(config).set_t_one();
    (0..=config.nq)
        .map(|r| q.coeff_q(r).map_err(GenfunError::from))
        .collect()
}

/// `1 + z P(q,zt,tq) P - P`; zero iff `p` solves the functional equation.
pub fn p_residual(p: &TriSeries) -> TriSeries {
    let one = TriSeries::one(p.order());
    &(&one + &(&shift_zt(p) * p).shift(1, 0, 0)) - p
}

/// Residual of the one-132 equation for a candidate `q` given `p`.
pub fn q_residual(p: &TriSeries, q: &TriSeries) -> TriSeries {
    let one = TriSeries::one(p.order());
    let sp = shift_zt(p);
    let rhs =
        &(&(&sp * q) + &(&shift_zt(q) * p)).shift(1, 0, 0) + &(&sp * &(p - &one)).shift(2, 2, 0);
    &rhs - q
}

/// `P B - B(q, zt, tq)`; zero iff `P = B(q,zt,tq) / B`.
pub fn quotient_residual(p: &TriSeries, b: &TriSeries) -> TriSeries {
    &(p * b) - &shift_zt(b)
}

/// Total count of `z^n` in `P(1, z, 1)`, read off a series with `nq` large
/// enough to hold every rising-triple count of length `n`.
pub fn total_at(s: &TriSeries, n: u32) -> BigInt {
    s.terms()
        .filter(|(e, _)| e.z == n)
        .map(|(_, c)| c)
        .fold(BigInt::zero(), |a, c| a + c)
}
