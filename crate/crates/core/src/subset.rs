//! Subsets of a ground set with at most 64 points, stored as bit masks.

use core::cmp::Ordering;
use core::fmt;

use alloc::vec::Vec;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_POINTS: usize = 64;

/// A finite set of points `0..64`.
///
/// Ordering is lexicographic on the increasing point sequence, which is the
/// order used for canonical representatives and default cell order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// Builds a subset from point indices. Order does not matter; repeated
    /// or out-of-range points are rejected.
    pub fn from_points(points: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &p in points {
            if p >= MAX_POINTS {
                return Err(Error::PointOutOfRange { point: p, v: MAX_POINTS });
            }
            if bits & (1 << p) != 0 {
                return Err(Error::RepeatedPoint { point: p });
            }
            bits |= 1 << p;
        }
        Ok(Subset(bits))
    }

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, point: usize) -> bool {
        point < MAX_POINTS && self.0 & (1 << point) != 0
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub const fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    /// True when every point is `< v`.
    pub const fn fits(self, v: usize) -> bool {
        v >= MAX_POINTS || self.0 >> v == 0
    }

    pub fn points(self) -> Points {
        Points(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.points().collect()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.points().cmp(other.points())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Increasing iterator over the points of a [`Subset`].
#[derive(Clone, Debug)]
pub struct Points(u64);

impl Iterator for Points {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Points {}

/// All `x`-subsets of `{0, …, v-1}` in lexicographic order.
pub fn k_subsets(v: usize, x: usize) -> impl Iterator<Item = Subset> {
    (0..v).combinations(x).map(|pts| {
        Subset(pts.iter().fold(0u64, |acc, &p| acc | (1 << p)))
    })
}
