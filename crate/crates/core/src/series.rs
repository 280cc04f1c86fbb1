//! Truncated formal power series in `z`, `t`, `q` with big-integer coefficients.
//!
//! A [`TriSeries`] lives in the quotient ring `Z[t][[z, q]] / (z^(nz+1), q^(nq+1))`:
//! terms whose `z`-exponent exceeds `nz` or whose `q`-exponent exceeds `nq` are
//! dropped as soon as they are produced. `t`-exponents are never truncated,
//! because every substitution used downstream turns `t` into `t * q^k`, so
//! a large `t`-power only ever feeds into larger `q`-powers.
//!
//! Invariants:
//! - no stored coefficient is zero, so equality of series is structural equality
//! - every stored exponent triple lies inside the truncation order

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::par::Strategy;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(TruncationOrder, TruncationOrder),
    #[error("negative exponent in monomial z^{z} t^{t} q^{q}")]
    NegativeExponent { z: i64, t: i64, q: i64 },
    #[error("series has a term with neither z nor q (z^0 t^{t} q^0); 1/(1-s) would not terminate")]
    NonNilpotent { t: u32 },
    #[error("index z^{z} q^{q} lies beyond truncation order {order}")]
    OutOfRange {
        z: u32,
        q: u32,
        order: TruncationOrder,
    },
    #[error("series still depends on t (term with t^{0}); evaluate at t = 1 first")]
    DependsOnT(u32),
}

/// Exponents of `z^z t^t q^q`. Ordering is lexicographic in `(z, t, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentTriple {
    pub z: u32,
    pub t: u32,
    pub q: u32,
}

impl ExponentTriple {
    pub const ZERO: ExponentTriple = ExponentTriple { z: 0, t: 0, q: 0 };

    pub fn new(z: u32, t: u32, q: u32) -> Self {
        ExponentTriple { z, t, q }
    }
}

impl Add for ExponentTriple {
    type Output = ExponentTriple;

    fn add(self, rhs: ExponentTriple) -> ExponentTriple {
        ExponentTriple {
            z: self.z + rhs.z,
            t: self.t + rhs.t,
            q: self.q + rhs.q,
        }
    }
}

/// Largest retained `z`- and `q`-exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncationOrder {
    pub nz: u32,
    pub nq: u32,
}

impl TruncationOrder {
    pub fn new(nz: u32, nq: u32) -> Self {
        TruncationOrder { nz, nq }
    }

    #[inline]
    pub fn retains(&self, e: ExponentTriple) -> bool {
        e.z <= self.nz && e.q <= self.nq
    }
}

impl fmt::Display for TruncationOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(nz={}, nq={})", self.nz, self.nq)
    }
}

/// A truncated power series in `z`, `t`, `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriSeries {
    terms: BTreeMap<ExponentTriple, BigInt>,
    order: TruncationOrder,
}

impl TriSeries {
    pub fn zero(order: TruncationOrder) -> Self {
        TriSeries {
            terms: BTreeMap::new(),
            order,
        }
    }

    pub fn one(order: TruncationOrder) -> Self {
        Self::constant(1, order)
    }

    pub fn constant(value: impl Into<BigInt>, order: TruncationOrder) -> Self {
        let mut s = Self::zero(order);
        s.insert(ExponentTriple::ZERO, value.into());
        s
    }

    /// `coeff * z^z t^t q^q`. Exponents are signed so that callers assembling
    /// net exponents (e.g. a `t^{-2m}` prefactor) get a checked error instead
    /// of a wrapped value.
    pub fn monomial(
        z: i64,
        t: i64,
        q: i64,
        coeff: impl Into<BigInt>,
        order: TruncationOrder,
    ) -> Result<Self, SeriesError> {
        if z < 0 || t < 0 || q < 0 {
            return Err(SeriesError::NegativeExponent { z, t, q });
        }
        let mut s = Self::zero(order);
        // anything past u32 is necessarily past the truncation order
        if let (Ok(z), Ok(t), Ok(q)) = (u32::try_from(z), u32::try_from(t), u32::try_from(q)) {
            s.insert(ExponentTriple { z, t, q }, coeff.into());
        }
        Ok(s)
    }

    /// Builds a series from raw terms, summing duplicates and dropping zeros
    /// and anything outside `order`.
    pub fn from_terms<I>(terms: I, order: TruncationOrder) -> Self
    where
        I: IntoIterator<Item = (ExponentTriple, BigInt)>,
    {
        let mut s = Self::zero(order);
        for (e, c) in terms {
            s.accumulate(e, c);
        }
        s
    }

    pub fn order(&self) -> TruncationOrder {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in `(z, t, q)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentTriple, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, z: u32, t: u32, q: u32) -> Result<BigInt, SeriesError> {
        if z > self.order.nz || q > self.order.nq {
            return Err(SeriesError::OutOfRange {
                z,
                q,
                order: self.order,
            });
        }
        Ok(self
            .terms
            .get(&ExponentTriple { z, t, q })
            .cloned()
            .unwrap_or_default())
    }

    /// Largest `t`-exponent present, if any.
    pub fn max_t(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.t).max()
    }

    fn insert(&mut self, e: ExponentTriple, c: BigInt) {
        if !c.is_zero() && self.order.retains(e) {
            self.terms.insert(e, c);
        }
    }

    fn accumulate(&mut self, e: ExponentTriple, c: BigInt) {
        if c.is_zero() || !self.order.retains(e) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_order(&self, other: &TriSeries) -> Result<(), SeriesError> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &TriSeries) -> Result<TriSeries, SeriesError> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(*e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TriSeries) -> Result<TriSeries, SeriesError> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(*e, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &TriSeries) -> Result<TriSeries, SeriesError> {
        self.try_mul_with(other, Strategy::default())
    }

    /// Truncated product. Products landing past `nz` or `nq` are never formed.
    pub fn try_mul_with(
        &self,
        other: &TriSeries,
        strategy: Strategy,
    ) -> Result<TriSeries, SeriesError> {
        self.check_order(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(TriSeries::zero(self.order));
        }
        // iterate over the shorter operand on the outside
        let (outer, inner) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let order = self.order;
        let buckets = ZBuckets::new(inner);
        let outer_terms: Vec<(ExponentTriple, &BigInt)> =
            outer.terms.iter().map(|(e, c)| (*e, c)).collect();

        let acc = strategy.map_reduce(
            &outer_terms,
            HashMap::new,
            |mut acc: HashMap<ExponentTriple, BigInt>, &(e1, c1)| {
                buckets.mul_term_into(e1, c1, order, &mut acc);
                acc
            },
            merge_maps,
        );
        Ok(TriSeries::from_terms(acc, order))
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, k: &BigInt) -> TriSeries {
        if k.is_zero() {
            return TriSeries::zero(self.order);
        }
        TriSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
            order: self.order,
        }
    }

    /// Multiplies by the monomial `z^dz t^dt q^dq`.
    pub fn shift(&self, dz: u32, dt: u32, dq: u32) -> TriSeries {
        let d = ExponentTriple::new(dz, dt, dq);
        let mut out = TriSeries::zero(self.order);
        for (e, c) in &self.terms {
            out.insert(*e + d, c.clone());
        }
        out
    }

    /// Substitutes `z -> z t^delta q^beta` and `t -> t q^gamma`, so that
    /// `z^a t^b q^c` maps to `z^a t^(delta a + b) q^(beta a + gamma b + c)`.
    ///
    /// `(1, 0, 1)` is `(z, t) -> (zt, tq)`; `(2, 1, 2)` is `(z, t) -> (t^2 q z, t q^2)`.
    /// This is a ring morphism of the truncated ring since no exponent decreases.
    pub fn substitute(&self, delta: u32, beta: u32, gamma: u32) -> TriSeries {
        let mut out = TriSeries::zero(self.order);
        for (e, c) in &self.terms {
            let t = delta as u64 * e.z as u64 + e.t as u64;
            let q = beta as u64 * e.z as u64 + gamma as u64 * e.t as u64 + e.q as u64;
            if q > self.order.nq as u64 {
                continue;
            }
            let t = u32::try_from(t).expect("t-exponent overflow");
            out.accumulate(
                ExponentTriple {
                    z: e.z,
                    t,
                    q: q as u32,
                },
                c.clone(),
            );
        }
        out
    }

    /// `1 / (1 - self)` in the truncated ring.
    ///
    /// Every term must carry a positive power of `z` or `q`, which makes
    /// `self` nilpotent modulo the truncation and the geometric sum finite.
    /// The sum is assembled grade by grade, where the grade of a term is its
    /// `z`-exponent plus its `q`-exponent: with `r = 1 + self * r`, the grade-g
    /// part of `r` only needs grades below `g`.
    pub fn reciprocal_one_minus(&self) -> Result<TriSeries, SeriesError> {
        if let Some(e) = self.terms.keys().find(|e| e.z == 0 && e.q == 0) {
            return Err(SeriesError::NonNilpotent { t: e.t });
        }
        let order = self.order;
        let max_grade = (order.nz + order.nq) as usize;
        let grade = |e: &ExponentTriple| (e.z + e.q) as usize;

        let mut s_by_grade: Vec<Vec<(ExponentTriple, &BigInt)>> = vec![Vec::new(); max_grade + 1];
        for (e, c) in &self.terms {
            s_by_grade[grade(e)].push((*e, c));
        }
        let mut r_by_grade: Vec<Vec<(ExponentTriple, BigInt)>> = vec![Vec::new(); max_grade + 1];
        r_by_grade[0].push((ExponentTriple::ZERO, BigInt::one()));

        for g in 1..=max_grade {
            let mut acc: HashMap<ExponentTriple, BigInt> = HashMap::new();
            for h in 1..=g {
                for (es, cs) in &s_by_grade[h] {
                    for (er, cr) in &r_by_grade[g - h] {
                        let e = *es + *er;
                        if order.retains(e) {
                            *acc.entry(e).or_default() += *cs * cr;
                        }
                    }
                }
            }
            r_by_grade[g] = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        Ok(TriSeries::from_terms(
            r_by_grade.into_iter().flatten(),
            order,
        ))
    }

    /// Evaluates at `t = 1`.
    pub fn set_t_one(&self) -> TriSeries {
        TriSeries::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (ExponentTriple { t: 0, ..*e }, c.clone())),
            self.order,
        )
    }

    /// The `z`-series multiplying `q^r`. The series must be free of `t`.
    pub fn coeff_q(&self, r: u32) -> Result<ZSeries, SeriesError> {
        if r > self.order.nq {
            return Err(SeriesError::OutOfRange {
                z: 0,
                q: r,
                order: self.order,
            });
        }
        if let Some(e) = self.terms.keys().find(|e| e.t != 0) {
            return Err(SeriesError::DependsOnT(e.t));
        }
        let mut coeffs = vec![BigInt::zero(); self.order.nz as usize + 1];
        for (e, c) in &self.terms {
            if e.q == r {
                coeffs[e.z as usize] = c.clone();
            }
        }
        Ok(ZSeries::new(coeffs))
    }

    /// The terms with `z`-exponent exactly `a`, kept at the same order.
    pub fn z_stratum(&self, a: u32) -> TriSeries {
        TriSeries {
            terms: self
                .terms
                .range(ExponentTriple::new(a, 0, 0)..ExponentTriple::new(a + 1, 0, 0))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            order: self.order,
        }
    }

    /// Re-truncates to a smaller order.
    pub fn truncate(&self, order: TruncationOrder) -> TriSeries {
        assert!(
            order.nz <= self.order.nz && order.nq <= self.order.nq,
            "truncate can only shrink the order"
        );
        TriSeries::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone())), order)
    }
}

fn merge_maps(
    mut a: HashMap<ExponentTriple, BigInt>,
    mut b: HashMap<ExponentTriple, BigInt>,
) -> HashMap<ExponentTriple, BigInt> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    for (e, c) in b {
        *a.entry(e).or_default() += c;
    }
    a
}

/// Terms of one factor grouped by `z`-exponent, each group sorted by `q`, so
/// a product can stop scanning as soon as the truncation is exceeded.
struct ZBuckets<'a> {
    by_z: Vec<Vec<(ExponentTriple, &'a BigInt)>>,
}

impl<'a> ZBuckets<'a> {
    fn new(s: &'a TriSeries) -> Self {
        let mut by_z: Vec<Vec<(ExponentTriple, &BigInt)>> =
            vec![Vec::new(); s.order.nz as usize + 1];
        for (e, c) in &s.terms {
            by_z[e.z as usize].push((*e, c));
        }
        for bucket in &mut by_z {
            bucket.sort_by_key(|(e, _)| e.q);
        }
        ZBuckets { by_z }
    }

    fn mul_term_into(
        &self,
        e1: ExponentTriple,
        c1: &BigInt,
        order: TruncationOrder,
        acc: &mut HashMap<ExponentTriple, BigInt>,
    ) {
        let room_z = (order.nz - e1.z) as usize;
        let room_q = order.nq - e1.q;
        for bucket in self.by_z.iter().take(room_z + 1) {
            for (e2, c2) in bucket {
                if e2.q > room_q {
                    break;
                }
                *acc.entry(e1 + *e2).or_default() += c1 * *c2;
            }
        }
    }
}

impl fmt::Display for TriSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (name, p) in [("z", e.z), ("t", e.t), ("q", e.q)] {
                match p {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

// Operator forms panic on mismatched orders; the `try_*` methods report it.

impl Add for &TriSeries {
    type Output = TriSeries;
    fn add(self, rhs: &TriSeries) -> TriSeries {
        self.try_add(rhs).expect("add")
    }
}

impl Sub for &TriSeries {
    type Output = TriSeries;
    fn sub(self, rhs: &TriSeries) -> TriSeries {
        self.try_sub(rhs).expect("sub")
    }
}

impl Mul for &TriSeries {
    type Output = TriSeries;
    fn mul(self, rhs: &TriSeries) -> TriSeries {
        self.try_mul(rhs).expect("mul")
    }
}

impl Neg for &TriSeries {
    type Output = TriSeries;
    fn neg(self) -> TriSeries {
        TriSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            order: self.order,
        }
    }
}

/// A truncated univariate series `c_0 + c_1 z + ... + c_nz z^nz`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSeries {
    coefficients: Vec<BigInt>,
}

impl ZSeries {
    /// Panics on an empty coefficient vector; a series always has `nz + 1 >= 1` entries.
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        assert!(
            !coefficients.is_empty(),
            "ZSeries needs at least one coefficient"
        );
        ZSeries { coefficients }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn nz(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coefficients.get(n)
    }

    pub fn truncate(&self, nz: usize) -> ZSeries {
        assert!(nz <= self.nz());
        ZSeries::new(self.coefficients[..=nz].to_vec())
    }
}

impl fmt::Display for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coefficients.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
