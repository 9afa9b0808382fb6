//! Small finite fields as lookup tables.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `GF(q)` for a prime `q < 256` or `q ∈ {4, 8, 9}`.
///
/// Elements are `0..q`. For prime powers an element's base-`p` digits are
/// the coefficients of a polynomial reduced modulo a fixed irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    q: u64,
    p: u64,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Irreducible polynomials, lowest coefficient first, monic.
const IRREDUCIBLE: [(u64, u64, &[u64]); 3] = [(4, 2, &[1, 1, 1]), (8, 2, &[1, 1, 0, 1]), (9, 3, &[1, 0, 1])];

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `Some((p, e))` when `n = p^e` with `p` prime and `e >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let p = (2..=n).find(|d| n % d == 0)?;
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

impl Field {
    pub fn new(q: u64) -> Result<Self> {
        if is_prime(q) && q < 256 {
            let add = table(q, |a, b| (a + b) % q);
            let mul = table(q, |a, b| (a * b) % q);
            return Ok(Self::finish(q, q, add, mul));
        }
        let &(_, p, poly) = IRREDUCIBLE.iter().find(|(order, _, _)| *order == q).ok_or(Error::UnsupportedField { q })?;
        let degree = poly.len() - 1;
        let digits = |mut a: u64| {
            let mut d = vec![0; degree];
            for x in d.iter_mut() {
                *x = a % p;
                a /= p;
            }
            d
        };
        let undigits = |d: &[u64]| d.iter().rev().fold(0, |acc, &x| acc * p + x);
        let add = table(q, |a, b| {
            let (x, y) = (digits(a), digits(b));
            undigits(&x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect::<Vec<_>>())
        });
        let mul = table(q, |a, b| {
            let (x, y) = (digits(a), digits(b));
            let mut prod = vec![0; 2 * degree];
            for (i, u) in x.iter().enumerate() {
                for (j, v) in y.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + u * v) % p;
                }
            }
            // Reduce with x^degree = -(lower terms of poly).
            for top in (degree..prod.len()).rev() {
                let c = prod[top];
                if c == 0 {
                    continue;
                }
                prod[top] = 0;
                for (i, &pc) in poly[..degree].iter().enumerate() {
                    let idx = top - degree + i;
                    prod[idx] = (prod[idx] + c * (p - pc % p)) % p;
                }
            }
            undigits(&prod[..degree])
        });
        Ok(Self::finish(q, p, add, mul))
    }

    fn finish(q: u64, p: u64, add: Vec<u8>, mul: Vec<u8>) -> Self {
        let n = q as usize;
        let neg = (0..n).map(|a| (0..n).find(|&b| add[a * n + b] == 0).expect("additive inverse") as u8).collect();
        let inv = (0..n)
            .map(|a| if a == 0 { 0 } else { (0..n).find(|&b| mul[a * n + b] == 1).expect("field has no zero divisors") as u8 })
            .collect();
        Self { q, p, add, mul, neg, inv }
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}

fn table(q: u64, f: impl Fn(u64, u64) -> u64) -> Vec<u8> {
    let mut t = Vec::with_capacity((q * q) as usize);
    for a in 0..q {
        for b in 0..q {
            t.push(f(a, b) as u8);
        }
    }
    t
}
