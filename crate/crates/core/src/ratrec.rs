//! Closed forms `N(z) / (1 - 2z)^k` recovered from truncated `z`-series.
//!
//! Only powers of `(1 - 2z)` are tried as denominators. A candidate `k` is
//! accepted when `s * (1 - 2z)^k` has at least `k + guard` vanishing
//! coefficients at the top of the window; the smallest such `k` wins, which
//! also makes the numerator coprime to `1 - 2z`.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::series::ZSeries;

/// Default number of trailing zeros demanded beyond the numerator degree.
pub const DEFAULT_GUARD: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatrecError {
    #[error("no rational form N(z)/(1-2z)^k found for a series through z^{nz} with guard {guard}")]
    NoRationalForm { nz: usize, guard: usize },
    #[error("guard must be at least 3, got {0}")]
    GuardTooSmall(usize),
}

/// Integer polynomial in `z`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    coefficients: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        ZPoly { coefficients }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        ZPoly::default()
    }

    pub fn one() -> Self {
        ZPoly::from_i64(&[1])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        ZPoly { coefficients: c }
    }

    /// `1 - 2z`.
    pub fn one_minus_two_z() -> Self {
        ZPoly::from_i64(&[1, -2])
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coefficients.iter().position(|c| !c.is_zero())
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coefficients.get(k).cloned().unwrap_or_default()
    }

    pub fn pow(&self, k: u32) -> ZPoly {
        (0..k).fold(ZPoly::one(), |acc, _| &acc * self)
    }

    /// Drops the factor `z^v`, `v` being the valuation.
    pub fn without_z_power(&self) -> ZPoly {
        match self.valuation() {
            Some(v) => ZPoly::new(self.coefficients[v..].to_vec()),
            None => ZPoly::zero(),
        }
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, rhs: &ZPoly) -> ZPoly {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        ZPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, rhs: &ZPoly) -> ZPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }
}

/// Writes `c0 + c1*z + ...` in ascending degree, e.g. `1 - 6*z + 13*z^2`.
fn write_expanded(f: &mut fmt::Formatter<'_>, p: &ZPoly) -> fmt::Result {
    let mut first = true;
    for (k, c) in p.coefficients.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        first = false;
        match (k, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (_, true) => write_z_power(f, k)?,
            (_, false) => {
                write!(f, "{mag}*")?;
                write_z_power(f, k)?;
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

fn write_z_power(f: &mut fmt::Formatter<'_>, k: usize) -> fmt::Result {
    if k == 1 {
        write!(f, "z")
    } else {
        write!(f, "z^{k}")
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expanded(f, self)
    }
}

/// `numerator / (1 - 2z)^denom_power`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    pub numerator: ZPoly,
    pub denom_power: u32,
}

impl RationalFn {
    pub fn new(numerator: ZPoly, denom_power: u32) -> Self {
        RationalFn {
            numerator,
            denom_power,
        }
    }

    pub fn zero() -> Self {
        RationalFn::new(ZPoly::zero(), 0)
    }

    /// Puts a form printed over `(-1 + 2z)^k` onto `(1 - 2z)^k` by
    /// multiplying numerator and denominator by `(-1)^k`.
    pub fn from_negated_denominator(numerator: ZPoly, denom_power: u32) -> Self {
        let numerator = if denom_power % 2 == 1 {
            -&numerator
        } else {
            numerator
        };
        RationalFn::new(numerator, denom_power)
    }

    /// Truncated expansion through `z^nz`.
    pub fn expand(&self, nz: usize) -> ZSeries {
        let mut c: Vec<BigInt> = (0..=nz).map(|k| self.numerator.coeff(k)).collect();
        // divide by (1 - 2z) denom_power times: c_k += 2 c_{k-1}
        for _ in 0..self.denom_power {
            for k in 1..=nz {
                let prev = c[k - 1].clone();
                c[k] += prev * 2;
            }
        }
        ZSeries::new(c)
    }

    /// Canonical text: `N / (1-2*z)^k`. A numerator with `z`-valuation
    /// `v > 0` is written `z^v*(...)` (or `c*z^v` when the cofactor is a
    /// constant); a multi-term numerator is parenthesized. Zero is `0`.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(v) = self.numerator.valuation() else {
            return write!(f, "0");
        };
        let cofactor = self.numerator.without_z_power();
        let multi_term = cofactor
            .coefficients
            .iter()
            .filter(|c| !c.is_zero())
            .count()
            > 1;
        if v == 0 {
            if multi_term {
                write!(f, "(")?;
                write_expanded(f, &cofactor)?;
                write!(f, ")")?;
            } else {
                write_expanded(f, &cofactor)?;
            }
        } else if multi_term {
            write_z_power(f, v)?;
            write!(f, "*(")?;
            write_expanded(f, &cofactor)?;
            write!(f, ")")?;
        } else {
            let c = &cofactor.coefficients[0];
            if c.is_one() {
            } else if (-c).is_one() {
                write!(f, "-")?;
            } else {
                write!(f, "{c}*")?;
            }
            write_z_power(f, v)?;
        }
        write!(f, " / (1-2*z)^{}", self.denom_power)
    }
}

/// Tries a fixed denominator power: returns the numerator when `s (1 - 2z)^k`
/// vanishes above degree `nz - k - guard` and re-expands to `s`.
pub fn fit_with_power(s: &ZSeries, k: u32, guard: usize) -> Option<RationalFn> {
    let nz = s.nz();
    let allowed = nz.checked_sub(k as usize + guard)?;
    let mut window: Vec<BigInt> = s.coefficients().to_vec();
    for _ in 0..k {
        for i in (1..=nz).rev() {
            let prev = window[i - 1].clone();
            window[i] -= prev * 2;
        }
    }
    if !window[allowed + 1..].iter().all(Zero::is_zero) {
        return None;
    }
    let candidate = RationalFn::new(ZPoly::new(window[..=allowed].to_vec()), k);
    (candidate.expand(nz) == *s).then_some(candidate)
}

/// Finds the smallest `k` such that `s (1 - 2z)^k` is a polynomial whose
/// degree leaves at least `k + guard` zero coefficients at the top of the
/// window, and returns that polynomial over `(1 - 2z)^k`. The result expands
/// back to `s` exactly.
pub fn reconstruct(s: &ZSeries, guard: usize) -> Result<RationalFn, RatrecError> {
    if guard < 3 {
        return Err(RatrecError::GuardTooSmall(guard));
    }
    let nz = s.nz();
    if s.coefficients().iter().all(Zero::is_zero) {
        return Ok(RationalFn::zero());
    }
    let max_k = nz.saturating_sub(guard) as u32;
    (0..=max_k)
        .find_map(|k| fit_with_power(s, k, guard))
        .ok_or(RatrecError::NoRationalForm { nz, guard })
}

/// Expansion of `r` through `z^nz`.
pub fn expand(r: &RationalFn, nz: usize) -> ZSeries {
    r.expand(nz)
}

/// Canonical text of `r`.
pub fn render(r: &RationalFn) -> String {
    r.render()
}
