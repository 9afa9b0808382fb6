//! Subspaces of `GF(q)^v` by brute force, for counting oracles.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::field::Field;
use crate::error::{Error, Result};

/// Largest `q^v` accepted by default.
pub const DEFAULT_VECTOR_CAP: u64 = 1 << 16;
/// Largest number of subspaces held at one dimension.
pub const DEFAULT_SUBSPACE_CAP: usize = 1_000_000;

/// A subspace by its reduced row-echelon basis: nonzero rows, strictly
/// increasing pivots, pivot entries 1 and zeros above and below them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubspaceRep {
    basis: Vec<Vec<u8>>,
}

impl SubspaceRep {
    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// A set of vectors of `GF(q)^v` as a bitset over their codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSet {
    bits: Vec<u64>,
}

impl VectorSet {
    pub fn contains(&self, code: u32) -> bool {
        self.bits[(code / 64) as usize] >> (code % 64) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &VectorSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Whether the two sets share only the zero vector (code 0).
    pub fn meets_trivially(&self, other: &VectorSet) -> bool {
        self.bits.iter().zip(&other.bits).enumerate().all(|(w, (a, b))| a & b == if w == 0 { a & b & 1 } else { 0 })
    }

    pub fn intersection(&self, other: &VectorSet) -> VectorSet {
        VectorSet { bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `GF(q)^v` with vectors coded as base-`q` integers, first coordinate most
/// significant.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    field: Field,
    v: usize,
    size: u64,
}

impl VectorSpace {
    pub fn new(q: u64, v: usize) -> Result<Self> {
        Self::with_cap(q, v, DEFAULT_VECTOR_CAP)
    }

    pub fn with_cap(q: u64, v: usize, cap: u64) -> Result<Self> {
        let field = Field::new(q)?;
        let size = u32::try_from(v).ok().and_then(|e| q.checked_pow(e)).filter(|&s| s <= cap);
        let size = size.ok_or(Error::SubspaceCapExceeded { q, v, cap })?;
        Ok(Self { field, v, size })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.v
    }

    pub fn vector_count(&self) -> u64 {
        self.size
    }

    pub fn encode(&self, x: &[u8]) -> u32 {
        x.iter().fold(0u32, |acc, &c| acc * self.field.order() as u32 + u32::from(c))
    }

    pub fn decode(&self, mut code: u32) -> Vec<u8> {
        let q = self.field.order() as u32;
        let mut x = vec![0; self.v];
        for c in x.iter_mut().rev() {
            *c = (code % q) as u8;
            code /= q;
        }
        x
    }

    /// Canonical basis of the span of `rows`.
    pub fn rref(&self, mut rows: Vec<Vec<u8>>) -> SubspaceRep {
        let f = &self.field;
        let mut rank = 0;
        for col in 0..self.v {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(rank, pivot);
            let inv = f.inv(rows[rank][col]);
            for x in rows[rank].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                let factor = row[col];
                if r != rank && factor != 0 {
                    for (x, &p) in row.iter_mut().zip(&pivot_row) {
                        *x = f.sub(*x, f.mul(factor, p));
                    }
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        SubspaceRep { basis: rows }
    }

    /// All vectors of the subspace.
    pub fn span(&self, s: &SubspaceRep) -> VectorSet {
        let f = &self.field;
        let mut bits = vec![0u64; (self.size as usize).div_ceil(64)];
        let mut members = vec![vec![0u8; self.v]];
        for b in &s.basis {
            let mut next = Vec::with_capacity(members.len() * f.order() as usize);
            for m in &members {
                for c in 0..f.order() as u8 {
                    next.push(m.iter().zip(b).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect::<Vec<u8>>());
                }
            }
            members = next;
        }
        for m in &members {
            let code = self.encode(m);
            bits[(code / 64) as usize] |= 1 << (code % 64);
        }
        VectorSet { bits }
    }

    pub fn sum(&self, a: &SubspaceRep, b: &SubspaceRep) -> SubspaceRep {
        self.rref(a.basis.iter().chain(&b.basis).cloned().collect())
    }

    pub fn zero(&self) -> SubspaceRep {
        SubspaceRep { basis: Vec::new() }
    }

    /// All `d`-dimensional subspaces, sorted by basis, found by extending
    /// every `(d-1)`-dimensional subspace by every vector outside it.
    pub fn subspaces(&self, d: usize) -> Result<Vec<SubspaceRep>> {
        let cap_error = || Error::SubspaceCapExceeded { q: self.field.order(), v: self.v, cap: DEFAULT_SUBSPACE_CAP as u64 };
        if d > self.v {
            return Ok(Vec::new());
        }
        let mut level: BTreeSet<SubspaceRep> = BTreeSet::from([self.zero()]);
        for _ in 0..d {
            let mut next = BTreeSet::new();
            for s in &level {
                let span = self.span(s);
                for code in 0..self.size as u32 {
                    if span.contains(code) {
                        continue;
                    }
                    let mut rows = s.basis.clone();
                    rows.push(self.decode(code));
                    next.insert(self.rref(rows));
                    if next.len() > DEFAULT_SUBSPACE_CAP {
                        return Err(cap_error());
                    }
                }
            }
            level = next;
        }
        Ok(level.into_iter().collect())
    }

    /// Extends `base` by random vectors until it has dimension `d`. Returns
    /// the extension and the subspace spanned by the added vectors alone,
    /// which meets `base` trivially.
    pub fn random_extension<R: Rng + ?Sized>(&self, base: &SubspaceRep, d: usize, rng: &mut R) -> (SubspaceRep, SubspaceRep) {
        assert!(base.dim() <= d && d <= self.v, "dimension out of range");
        let mut current = base.clone();
        let mut added = Vec::new();
        while current.dim() < d {
            let code = rng.gen_range(0..self.size as u32);
            if self.span(&current).contains(code) {
                continue;
            }
            let w = self.decode(code);
            added.push(w.clone());
            let mut rows = current.basis.clone();
            rows.push(w);
            current = self.rref(rows);
        }
        (current, self.rref(added))
    }
}

/// All `d`-dimensional subspaces of `GF(q)^v`.
pub fn brute_subspaces(q: u64, v: usize, d: usize) -> Result<Vec<SubspaceRep>> {
    VectorSpace::new(q, v)?.subspaces(d)
}

/// `#{B ∈ design : I <= B <= J}`.
pub fn count_between(space: &VectorSpace, design: &[SubspaceRep], i: &SubspaceRep, j: &SubspaceRep) -> u64 {
    let (si, sj) = (space.span(i), space.span(j));
    design
        .iter()
        .filter(|b| {
            let sb = space.span(b);
            si.is_subset_of(&sb) && sb.is_subset_of(&sj)
        })
        .count() as u64
}

/// `#{B ∈ design : I <= B, J ∩ B = 0}`.
pub fn count_avoiding(space: &VectorSpace, design: &[SubspaceRep], i: &SubspaceRep, j: &SubspaceRep) -> u64 {
    let (si, sj) = (space.span(i), space.span(j));
    design
        .iter()
        .filter(|b| {
            let sb = space.span(b);
            si.is_subset_of(&sb) && sj.meets_trivially(&sb)
        })
        .count() as u64
}

/// For random `I` (dim `i`) and `J` (dim `j`) with `I ∩ J = 0`, checks over
/// all `k`-subspaces `B` that `I <= B` and `J ∩ B = 0` hold exactly when
/// `B ∩ (I + J) = I`.
pub fn verify_intersection_identity<R: Rng + ?Sized>(q: u64, v: usize, k: usize, i: usize, j: usize, rng: &mut R) -> Result<bool> {
    if i + j > k || k > v {
        return Err(Error::Invalid(alloc::format!("need i + j <= k <= v, got i={i} j={j} k={k} v={v}")));
    }
    let space = VectorSpace::new(q, v)?;
    let (i_sub, _) = space.random_extension(&space.zero(), i, rng);
    let (ij, j_sub) = space.random_extension(&i_sub, i + j, rng);
    let (si, sj, sij) = (space.span(&i_sub), space.span(&j_sub), space.span(&ij));
    Ok(space.subspaces(k)?.iter().all(|b| {
        let sb = space.span(b);
        let left = si.is_subset_of(&sb) && sj.meets_trivially(&sb);
        let right = sb.intersection(&sij) == si;
        left == right
    }))
}
