//! Parameter arithmetic of `t-(v,k,λ)` designs.
//!
//! `λ_s` is the number of blocks through a fixed `s`-set and `λ_{i,j}` the
//! number of blocks containing a fixed `i`-set and missing a disjoint fixed
//! `j`-set:
//!
//! ```text
//! λ_s     = λ · C(v-s, t-s) / C(k-s, t-s)
//! λ_{i,j} = λ · C(v-i-j, k-i) / C(v-t, k-t)
//! ```
//!
//! Values are exact rationals; integrality is a separate question answered by
//! [`check_admissible`] and [`LambdaTable::is_integral`].

use core::fmt;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::binom::binomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DesignParams {
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DesignParams {
    /// Requires `t <= k <= v - t` and `λ >= 1`.
    pub fn new(t: u64, v: u64, k: u64, lambda: u64) -> Result<Self> {
        let err = |reason| Err(Error::InvalidParams { t, v, k, lambda, reason });
        if lambda == 0 {
            return err("lambda must be positive");
        }
        if t > k {
            return err("t must not exceed k");
        }
        if t.checked_add(k).is_none_or(|s| s > v) {
            return err("k must not exceed v - t");
        }
        Ok(Self { t, v, k, lambda })
    }

    pub fn t(&self) -> usize {
        self.t as usize
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn v(&self) -> usize {
        self.v as usize
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({},{},{})", self.t, self.v, self.k, self.lambda)
    }
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// `λ_s` for `0 <= s <= t`.
pub fn lambda_s(p: &DesignParams, s: usize) -> Result<BigRational> {
    let (t, v, k) = (p.t as i64, p.v as i64, p.k as i64);
    let s = s as i64;
    if s > t {
        return Err(Error::LambdaIndex { i: s as usize, j: 0, t: p.t() });
    }
    Ok(ratio(BigInt::from(p.lambda) * binomial(v - s, t - s), binomial(k - s, t - s)))
}

/// `λ_{i,j}` for `i + j <= t`.
pub fn lambda_ij(p: &DesignParams, i: usize, j: usize) -> Result<BigRational> {
    if i + j > p.t() {
        return Err(Error::LambdaIndex { i, j, t: p.t() });
    }
    let (t, v, k) = (p.t as i64, p.v as i64, p.k as i64);
    let (i, j) = (i as i64, j as i64);
    Ok(ratio(BigInt::from(p.lambda) * binomial(v - i - j, k - i), binomial(v - t, k - t)))
}

/// All `λ_{i,j}` with `i + j <= t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaTable {
    t: usize,
    /// `rows[n][j]` holds `λ_{n-j, j}`.
    rows: Vec<Vec<BigRational>>,
}

impl LambdaTable {
    pub fn t(&self) -> usize {
        self.t
    }

    /// `λ_{i,j}`; panics if `i + j > t`.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.rows[i + j][j]
    }

    /// `λ_{i,j}` as an integer.
    pub fn integer(&self, i: usize, j: usize) -> Result<BigInt> {
        if i + j > self.t {
            return Err(Error::LambdaIndex { i, j, t: self.t });
        }
        let value = self.get(i, j);
        if value.is_integer() {
            Ok(value.to_integer())
        } else {
            Err(Error::NonIntegralLambda { i, j })
        }
    }

    /// `λ_s = λ_{s,0}` as an integer.
    pub fn lambda_s(&self, s: usize) -> Result<BigInt> {
        self.integer(s, 0)
    }

    /// Triangle rows: row `n` lists `λ_{n,0}, λ_{n-1,1}, …, λ_{0,n}`.
    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(BigRational::is_integer)
    }
}

impl fmt::Display for LambdaTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, row) in self.rows.iter().enumerate() {
            write!(f, "{:width$}", "", width = 2 * (self.t - n))?;
            for (j, value) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "λ{},{}={}", n - j, j, value)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub fn lambda_triangle(p: &DesignParams) -> LambdaTable {
    let t = p.t();
    let rows = (0..=t)
        .map(|n| (0..=n).map(|j| lambda_ij(p, n - j, j).expect("i + j <= t")).collect())
        .collect();
    LambdaTable { t, rows }
}

/// First `s` with a non-integral `λ_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonIntegralLambda {
    pub s: usize,
    pub value: BigRational,
}

/// Necessary integrality conditions: every `λ_s`, `0 <= s <= t`, is an integer.
pub fn check_admissible(p: &DesignParams) -> core::result::Result<(), NonIntegralLambda> {
    for s in 0..=p.t() {
        let value = lambda_s(p, s).expect("s <= t");
        if !value.is_integer() {
            return Err(NonIntegralLambda { s, value });
        }
    }
    Ok(())
}

pub fn is_admissible(p: &DesignParams) -> bool {
    check_admissible(p).is_ok()
}

/// Checks `λ_x = Σ_{j=0}^{y} λ_{x+j, y-j} · C(y, j)` exactly.
pub fn pascal_check(p: &DesignParams, x: usize, y: usize) -> Result<bool> {
    if x + y > p.t() {
        return Err(Error::LambdaIndex { i: x, j: y, t: p.t() });
    }
    let mut sum = BigRational::zero();
    for j in 0..=y {
        sum += lambda_ij(p, x + j, y - j)? * BigRational::from_integer(binomial(y as i64, j as i64));
    }
    Ok(sum == lambda_s(p, x)?)
}
