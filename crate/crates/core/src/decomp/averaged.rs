//! The √D-conjugated forms `ω⁽ˣ⁾ = √D⁽ˣ⁾ ρ⁽ˣ⁾ √δ⁻¹` and
//! `W⁽ˣʸ⁾ = √D⁽ˣ⁾ R⁽ˣʸ⁾ √D⁽ʸ⁾⁻¹`.
//!
//! Entries are irrational in general, so identities are checked on squares,
//! which is exact because every entry involved is nonnegative.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::incidence::IncidenceTables;
use crate::matrix::{DiagonalSizes, LabeledIntMatrix, RationalMatrix};
use crate::params::LambdaTable;

/// `coeff · √radicand` with a square-free integer radicand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtEntry {
    pub coeff: BigRational,
    pub radicand: BigInt,
}

impl SqrtEntry {
    /// `n · √(a / b)` written as `c · √r`.
    pub fn new(n: &BigInt, a: u64, b: u64) -> Self {
        // √(a/b) = √(a·b) / b
        let mut outside = BigInt::one();
        let mut inside = BigInt::from(a) * BigInt::from(b);
        let mut p = BigInt::from(2);
        while &p * &p <= inside {
            let sq = &p * &p;
            while inside.is_multiple_of(&sq) {
                inside /= &sq;
                outside *= &p;
            }
            p += 1;
        }
        Self { coeff: BigRational::new(n * outside, BigInt::from(b)), radicand: inside }
    }

    /// The square of the entry, exactly.
    pub fn squared(&self) -> BigRational {
        &self.coeff * &self.coeff * BigRational::from_integer(self.radicand.clone())
    }
}

impl fmt::Display for SqrtEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "0");
        }
        if self.radicand.is_one() {
            return write!(f, "{}", self.coeff);
        }
        if !self.coeff.is_one() {
            write!(f, "{}", self.coeff)?;
        }
        write!(f, "√{}", self.radicand)
    }
}

/// `ω⁽ˣ⁾` for display.
pub fn omega(rho: &LabeledIntMatrix, dx: &DiagonalSizes, delta: &DiagonalSizes) -> Result<Vec<Vec<SqrtEntry>>> {
    if rho.rows() != dx.len() || rho.cols() != delta.len() {
        return Err(Error::DimensionMismatch("omega"));
    }
    Ok((0..rho.rows())
        .map(|i| (0..rho.cols()).map(|j| SqrtEntry::new(rho.get(i, j), dx.get(i), delta.get(j))).collect())
        .collect())
}

/// Entrywise square of `ω⁽ᵉ⁾ (ω⁽ᶠ⁾)ᵀ`:
/// `D⁽ᵉ⁾_a D⁽ᶠ⁾_b ((ρ⁽ᵉ⁾ δ⁻¹ (ρ⁽ᶠ⁾)ᵀ)_{ab})²`.
pub fn omega_product_squared(
    rho_e: &LabeledIntMatrix,
    rho_f: &LabeledIntMatrix,
    de: &DiagonalSizes,
    df: &DiagonalSizes,
    delta: &DiagonalSizes,
) -> Result<RationalMatrix> {
    if rho_e.cols() != delta.len() || rho_f.cols() != delta.len() || rho_e.rows() != de.len() || rho_f.rows() != df.len() {
        return Err(Error::DimensionMismatch("omega product"));
    }
    Ok(RationalMatrix::from_fn(rho_e.rows(), rho_f.rows(), |a, b| {
        let mut s = BigRational::zero();
        for c in 0..delta.len() {
            let p = rho_e.get(a, c) * rho_f.get(b, c);
            if !p.is_zero() {
                s += BigRational::new(p, BigInt::from(delta.get(c)));
            }
        }
        &s * &s * BigRational::from_integer(BigInt::from(de.get(a)) * BigInt::from(df.get(b)))
    }))
}

/// Entrywise square of `Σ_j λ_{e+f-j, j} (W⁽ʲᵉ⁾)ᵀ W⁽ʲᶠ⁾`, computed from `R` and
/// `D` alone: `(Σ_j λ Σ_c D⁽ʲ⁾_c R⁽ʲᵉ⁾_{ca} R⁽ʲᶠ⁾_{cb})² / (D⁽ᵉ⁾_a D⁽ᶠ⁾_b)`.
pub fn w_sum_squared(tables: &IncidenceTables, table: &LambdaTable, e: usize, f: usize) -> Result<RationalMatrix> {
    if e + f > table.t() {
        return Err(Error::LevelOrder("e + f <= t"));
    }
    let (de, df) = (tables.sizes(e)?, tables.sizes(f)?);
    let mut sums = alloc::vec![BigInt::zero(); de.len() * df.len()];
    for j in 0..=e.min(f) {
        let lambda = table.integer(e + f - j, j)?;
        let (re, rf, dj) = (tables.r(j, e)?, tables.r(j, f)?, tables.sizes(j)?);
        for a in 0..de.len() {
            for b in 0..df.len() {
                let mut s = BigInt::zero();
                for c in 0..dj.len() {
                    s += re.get(c, a) * rf.get(c, b) * BigInt::from(dj.get(c));
                }
                sums[a * df.len() + b] += &lambda * s;
            }
        }
    }
    Ok(RationalMatrix::from_fn(de.len(), df.len(), |a, b| {
        let s = &sums[a * df.len() + b];
        BigRational::new(s * s, BigInt::from(de.get(a)) * BigInt::from(df.get(b)))
    }))
}
