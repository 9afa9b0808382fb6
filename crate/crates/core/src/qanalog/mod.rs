//! Subspace designs: Gaussian binomials, the two `λ_{i,j}` variants and
//! brute-force counting over small vector spaces.
//!
//! ```text
//! λ⁽¹⁾_{i,j} = #{B : I <= B <= J}         = λ · [v-i-j, k-i]_q / [v-t, k-t]_q
//! λ⁽²⁾_{i,j} = #{B : I <= B, J ∩ B = 0}   = q^{j(k-i)} · λ⁽¹⁾_{i,j}
//! ```
//!
//! with `dim I = i` and, for `λ⁽¹⁾`, `dim J = v-j`, `I <= J`; for `λ⁽²⁾`,
//! `dim J = j`, `I ∩ J = 0`.

mod field;
mod subspace;

use core::fmt;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub use field::{is_prime, prime_power, Field};
pub use subspace::{
    brute_subspaces, count_avoiding, count_between, verify_intersection_identity, SubspaceRep, VectorSet, VectorSpace,
    DEFAULT_SUBSPACE_CAP, DEFAULT_VECTOR_CAP,
};

/// Parameters of a `t-(v,k,λ)_q` subspace design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QDesignParams {
    pub q: u64,
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl QDesignParams {
    /// Requires `q` a prime power, `t <= k <= v - t` and `λ >= 1`.
    pub fn new(q: u64, t: u64, v: u64, k: u64, lambda: u64) -> Result<Self> {
        let err = |reason| Err(Error::InvalidParams { t, v, k, lambda, reason });
        if prime_power(q).is_none() {
            return err("q must be a prime power");
        }
        if lambda == 0 {
            return err("lambda must be positive");
        }
        if t > k {
            return err("t must not exceed k");
        }
        if t.checked_add(k).is_none_or(|s| s > v) {
            return err("k must not exceed v - t");
        }
        Ok(Self { q, t, v, k, lambda })
    }

    /// The complete design of all `k`-subspaces, as a `t`-design.
    pub fn complete(q: u64, t: u64, v: u64, k: u64) -> Result<Self> {
        let lambda = if t <= k && k <= v { gauss_binom(v - t, k - t, q) } else { BigInt::zero() };
        let lambda = u64::try_from(lambda).map_err(|_| Error::Overflow("lambda of the complete design"))?;
        Self::new(q, t, v, k, lambda.max(1))
    }
}

impl fmt::Display for QDesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-({},{},{})_{}", self.t, self.v, self.k, self.lambda, self.q)
    }
}

/// `[n, m]_q`, zero when `m > n`. For `q >= 2` it is the exact quotient
/// `∏_{i<m} (q^{n-i} - 1) / (q^{i+1} - 1)`; smaller `q` evaluate the
/// polynomial.
pub fn gauss_binom(n: u64, m: u64, q: u64) -> BigInt {
    if m > n {
        return BigInt::zero();
    }
    if q < 2 {
        let value = GaussPoly::new(n as usize, m as usize).eval(&BigRational::from_integer(q.into()));
        return value.to_integer();
    }
    let q = BigInt::from(q);
    let (mut num, mut den) = (BigInt::one(), BigInt::one());
    for i in 0..m {
        num *= Pow::pow(&q, n - i) - 1u32;
        den *= Pow::pow(&q, i + 1) - 1u32;
    }
    assert!((&num % &den).is_zero(), "Gaussian binomial quotient is not exact");
    num / den
}

fn check_indices(p: &QDesignParams, i: usize, j: usize) -> Result<()> {
    if i + j > p.t as usize {
        return Err(Error::LambdaIndex { i, j, t: p.t as usize });
    }
    Ok(())
}

/// `λ⁽¹⁾_{i,j}` for `i + j <= t`.
pub fn q_lambda1(p: &QDesignParams, i: usize, j: usize) -> Result<BigRational> {
    check_indices(p, i, j)?;
    let (i, j) = (i as u64, j as u64);
    let num = BigInt::from(p.lambda) * gauss_binom(p.v - i - j, p.k - i, p.q);
    Ok(BigRational::new(num, gauss_binom(p.v - p.t, p.k - p.t, p.q)))
}

/// `λ⁽²⁾_{i,j} = q^{j(k-i)} λ⁽¹⁾_{i,j}` for `i + j <= t`.
pub fn q_lambda2(p: &QDesignParams, i: usize, j: usize) -> Result<BigRational> {
    let l1 = q_lambda1(p, i, j)?;
    let factor = Pow::pow(BigInt::from(p.q), j as u64 * (p.k - i as u64));
    Ok(l1 * BigRational::from_integer(factor))
}

/// A Gaussian binomial as a polynomial in `q` with integer coefficients,
/// built by `[n,m] = [n-1,m-1] + q^m [n-1,m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussPoly {
    /// Coefficient of `q^d` at index `d`.
    coeffs: Vec<BigInt>,
}

impl GaussPoly {
    pub fn new(n: usize, m: usize) -> Self {
        if m > n {
            return Self { coeffs: Vec::new() };
        }
        // row[m'] = [n', m'] for the current n'.
        let mut row: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n1 in 1..=n {
            let mut next = Vec::with_capacity(n1 + 1);
            for m1 in 0..=n1 {
                let mut c: Vec<BigInt> = if m1 >= 1 { row[m1 - 1].clone() } else { Vec::new() };
                if m1 < n1 {
                    let shifted = &row[m1];
                    if c.len() < shifted.len() + m1 {
                        c.resize(shifted.len() + m1, BigInt::zero());
                    }
                    for (d, a) in shifted.iter().enumerate() {
                        c[d + m1] += a;
                    }
                }
                next.push(c);
            }
            row = next;
        }
        Self { coeffs: row.swap_remove(m) }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }
}

/// `λ⁽¹⁾_{i,j}` with the Gaussian binomials evaluated as polynomials at `x`.
/// At `x = 1` this is the ordinary `λ_{i,j}` of a `t-(v,k,λ)` design.
pub fn q_lambda1_at(p: &QDesignParams, i: usize, j: usize, x: &BigRational) -> Result<BigRational> {
    check_indices(p, i, j)?;
    let (v, k, t) = (p.v as usize, p.k as usize, p.t as usize);
    let num = GaussPoly::new(v - i - j, k - i).eval(x);
    let den = GaussPoly::new(v - t, k - t).eval(x);
    Ok(num / den * BigRational::from_integer(p.lambda.into()))
}

/// One comparison of a formula against a brute-force count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaCheck {
    pub i: usize,
    pub j: usize,
    pub formula1: BigRational,
    pub count1: u64,
    pub formula2: BigRational,
    pub count2: u64,
}

impl LambdaCheck {
    pub fn holds(&self) -> bool {
        self.formula1 == BigRational::from_integer(self.count1.into())
            && self.formula2 == BigRational::from_integer(self.count2.into())
    }
}

/// Counts both λ-variants in the complete design of `k`-subspaces of
/// `GF(q)^v`, for every `i + j <= t` and random `I`, `J`, and pairs them with
/// the formulas.
pub fn check_complete_design<R: Rng + ?Sized>(q: u64, t: u64, v: u64, k: u64, rng: &mut R) -> Result<Vec<LambdaCheck>> {
    let p = QDesignParams::complete(q, t, v, k)?;
    let space = VectorSpace::new(q, v as usize)?;
    let design = space.subspaces(k as usize)?;
    let mut out = Vec::new();
    for n in 0..=t as usize {
        for j in 0..=n {
            let i = n - j;
            // λ⁽¹⁾: I <= J with dim J = v - j.
            let (i_sub, _) = space.random_extension(&space.zero(), i, rng);
            let (j_big, _) = space.random_extension(&i_sub, v as usize - j, rng);
            let count1 = count_between(&space, &design, &i_sub, &j_big);
            // λ⁽²⁾: dim J = j and I ∩ J = 0.
            let (_, j_small) = space.random_extension(&i_sub, i + j, rng);
            let count2 = count_avoiding(&space, &design, &i_sub, &j_small);
            out.push(LambdaCheck { i, j, formula1: q_lambda1(&p, i, j)?, count1, formula2: q_lambda2(&p, i, j)?, count2 });
        }
    }
    Ok(out)
}
