//! Bounded integer solutions of linear equality systems, plus the drivers
//! that enumerate decomposition matrices with it.
//!
//! The search is a depth-first assignment in a fixed variable order with
//! ascending values. Before a variable is assigned, every row containing it
//! narrows its range to the values for which the row residual can still be
//! met by the untouched variables' bound intervals. The output order is
//! therefore fully determined by the system.

mod canon;
mod rho;

pub use canon::{canonical_form, ClassPermutations};
pub use rho::{enumerate_rho1, extend_rho, column_types, RhoExtension};

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Default limit on the number of collected solutions.
pub const DEFAULT_SOLUTION_CAP: usize = 1_000_000;

/// Magnitude limit for every partial row sum, leaving headroom in `i64`.
const MAGNITUDE_LIMIT: i128 = 1 << 60;

/// `Σ_i a_{r,i} x_i = b_r` for every row `r`, with `lo_i <= x_i <= hi_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    bounds: Vec<(i64, i64)>,
    rows: Vec<(Vec<(usize, i64)>, i64)>,
    order: Vec<usize>,
}

impl LinearSystem {
    /// A system without rows. The variable order defaults to index order.
    pub fn new(bounds: Vec<(i64, i64)>) -> Result<Self> {
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if lo > hi {
                return Err(Error::Invalid(alloc::format!("variable {i} has empty bounds [{lo}, {hi}]")));
            }
            if i128::from(lo).abs().max(i128::from(hi).abs()) > MAGNITUDE_LIMIT {
                return Err(Error::Overflow("variable bound"));
            }
        }
        let order = (0..bounds.len()).collect();
        Ok(Self { bounds, rows: Vec::new(), order })
    }

    /// Adds a dense row.
    pub fn add_row(&mut self, coeffs: &[i64], rhs: i64) -> Result<()> {
        if coeffs.len() != self.bounds.len() {
            return Err(Error::DimensionMismatch("row length differs from variable count"));
        }
        let terms: Vec<_> = coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, &c)| (i, c)).collect();
        self.push_row(terms, rhs)
    }

    /// Adds a row given as `(variable, coefficient)` pairs. Repeated
    /// variables are merged.
    pub fn add_sparse_row(&mut self, terms: &[(usize, i64)], rhs: i64) -> Result<()> {
        let mut dense: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for &(i, c) in terms {
            if i >= self.bounds.len() {
                return Err(Error::DimensionMismatch("variable index out of range"));
            }
            match dense.iter_mut().find(|(j, _)| *j == i) {
                Some(entry) => entry.1 = entry.1.checked_add(c).ok_or(Error::Overflow("coefficient"))?,
                None => dense.push((i, c)),
            }
        }
        dense.retain(|(_, c)| *c != 0);
        dense.sort_unstable();
        self.push_row(dense, rhs)
    }

    fn push_row(&mut self, terms: Vec<(usize, i64)>, rhs: i64) -> Result<()> {
        let mut total = i128::from(rhs).abs();
        for &(i, c) in &terms {
            let (lo, hi) = self.bounds[i];
            total += i128::from(c).abs() * i128::from(lo).abs().max(i128::from(hi).abs());
        }
        if total > MAGNITUDE_LIMIT {
            return Err(Error::Overflow("row magnitude"));
        }
        self.rows.push((terms, rhs));
        Ok(())
    }

    /// Sets the assignment order; `order` must be a permutation of the
    /// variable indices.
    pub fn set_order(&mut self, order: Vec<usize>) -> Result<()> {
        let mut seen = vec![false; self.bounds.len()];
        if order.len() != seen.len() {
            return Err(Error::Invalid("variable order has the wrong length".into()));
        }
        for &i in &order {
            if i >= seen.len() || core::mem::replace(&mut seen[i], true) {
                return Err(Error::Invalid("variable order is not a permutation".into()));
            }
        }
        self.order = order;
        Ok(())
    }

    pub fn variable_count(&self) -> usize {
        self.bounds.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn bounds(&self) -> &[(i64, i64)] {
        &self.bounds
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Dense coefficient vector and right-hand side of row `r`.
    pub fn row(&self, r: usize) -> (Vec<i64>, i64) {
        let mut dense = vec![0; self.bounds.len()];
        for &(i, c) in &self.rows[r].0 {
            dense[i] = c;
        }
        (dense, self.rows[r].1)
    }

    pub fn is_satisfied(&self, x: &[i64]) -> bool {
        x.len() == self.bounds.len()
            && x.iter().zip(&self.bounds).all(|(v, (lo, hi))| lo <= v && v <= hi)
            && self.rows.iter().all(|(terms, rhs)| {
                terms.iter().map(|&(i, c)| i128::from(c) * i128::from(x[i])).sum::<i128>() == i128::from(*rhs)
            })
    }

    /// All solutions in search order.
    pub fn solutions(&self) -> Solutions<'_> {
        Solutions::new(self, self.bounds.len(), &[], false)
    }

    /// Solutions whose first `prefix.len()` variables, in assignment order,
    /// take the given values.
    pub fn solutions_with_prefix(&self, prefix: &[i64]) -> Solutions<'_> {
        Solutions::new(self, self.bounds.len(), prefix, false)
    }

    /// Feasible partial assignments of the first `depth` variables in
    /// assignment order, in search order. Concatenating
    /// [`solutions_with_prefix`](Self::solutions_with_prefix) over these
    /// reproduces [`solutions`](Self::solutions) exactly.
    pub fn prefixes(&self, depth: usize) -> Vec<Vec<i64>> {
        Solutions::new(self, depth.min(self.bounds.len()), &[], true).collect()
    }
}

/// Result of [`solve_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionStream {
    pub solutions: Vec<Vec<i64>>,
    /// The cap was reached before the search finished.
    pub truncated: bool,
}

/// Collects solutions in search order, stopping after `cap` of them.
pub fn solve_all(sys: &LinearSystem, cap: Option<usize>) -> SolutionStream {
    collect_capped(sys.solutions(), cap)
}

pub fn collect_capped<T>(iter: impl Iterator<Item = T>, cap: Option<usize>) -> SolutionStream
where
    T: Into<Vec<i64>>,
{
    let mut solutions = Vec::new();
    let mut iter = iter.peekable();
    let truncated = loop {
        if cap.is_some_and(|c| solutions.len() >= c) {
            break iter.peek().is_some();
        }
        match iter.next() {
            Some(s) => solutions.push(s.into()),
            None => break false,
        }
    };
    SolutionStream { solutions, truncated }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

/// Streaming iterator over solutions (or prefixes) of a [`LinearSystem`].
///
/// Yields assignments indexed by variable, except for prefix enumeration,
/// which yields values in assignment order.
#[derive(Debug, Clone)]
pub struct Solutions<'a> {
    sys: &'a LinearSystem,
    /// Bounds after propagation, by position.
    bounds: Vec<(i64, i64)>,
    /// `terms[p]`: rows containing the variable at position `p`.
    terms: Vec<Vec<(usize, i64)>>,
    partial: Vec<i64>,
    rest_min: Vec<i64>,
    rest_max: Vec<i64>,
    values: Vec<i64>,
    upper: Vec<i64>,
    depth: usize,
    base: usize,
    limit: usize,
    /// Yield values in assignment order.
    raw: bool,
    state: State,
}

impl<'a> Solutions<'a> {
    fn new(sys: &'a LinearSystem, limit: usize, prefix: &[i64], raw: bool) -> Self {
        let n = sys.bounds.len();
        let tightened = tighten(sys);
        let mut state = if tightened.is_some() { State::Fresh } else { State::Done };
        let var_bounds = tightened.unwrap_or_else(|| sys.bounds.clone());
        let bounds: Vec<(i64, i64)> = sys.order.iter().map(|&i| var_bounds[i]).collect();
        let mut position = vec![0; n];
        for (p, &i) in sys.order.iter().enumerate() {
            position[i] = p;
        }
        let mut terms = vec![Vec::new(); n];
        let mut rest_min = vec![0; sys.rows.len()];
        let mut rest_max = vec![0; sys.rows.len()];
        for (r, (row, rhs)) in sys.rows.iter().enumerate() {
            if row.is_empty() && *rhs != 0 {
                state = State::Done;
            }
            for &(i, c) in row {
                terms[position[i]].push((r, c));
                let (lo, hi) = contribution(c, var_bounds[i]);
                rest_min[r] += lo;
                rest_max[r] += hi;
            }
        }
        let mut s = Self {
            sys,
            bounds,
            terms,
            partial: vec![0; sys.rows.len()],
            rest_min,
            rest_max,
            values: vec![0; n],
            upper: vec![0; n],
            depth: 0,
            base: 0,
            limit,
            raw,
            state,
        };
        if prefix.len() > limit {
            s.state = State::Done;
        }
        for &value in prefix {
            if s.state == State::Done {
                break;
            }
            match s.range(s.depth) {
                Some((lo, hi)) if lo <= value && value <= hi => {
                    s.assign(s.depth, value);
                    s.upper[s.depth] = value;
                    s.depth += 1;
                }
                _ => s.state = State::Done,
            }
        }
        s.base = s.depth;
        s
    }

    fn bounds_at(&self, p: usize) -> (i64, i64) {
        self.bounds[p]
    }

    /// Values of the variable at position `p` that keep every row it
    /// occurs in satisfiable.
    fn range(&self, p: usize) -> Option<(i64, i64)> {
        let (mut lo, mut hi) = self.bounds_at(p);
        for &(r, c) in &self.terms[p] {
            let (cmin, cmax) = contribution(c, self.bounds_at(p));
            let residual = self.sys.rows[r].1 - self.partial[r];
            // c·value must lie in [a, b].
            let a = residual - (self.rest_max[r] - cmax);
            let b = residual - (self.rest_min[r] - cmin);
            if a > b {
                return None;
            }
            let (l, h) = if c > 0 {
                (Integer::div_ceil(&a, &c), Integer::div_floor(&b, &c))
            } else {
                (Integer::div_ceil(&b, &c), Integer::div_floor(&a, &c))
            };
            lo = lo.max(l);
            hi = hi.min(h);
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }

    fn assign(&mut self, p: usize, value: i64) {
        self.values[p] = value;
        let bounds = self.bounds_at(p);
        for &(r, c) in &self.terms[p] {
            let (cmin, cmax) = contribution(c, bounds);
            self.partial[r] += c * value;
            self.rest_min[r] -= cmin;
            self.rest_max[r] -= cmax;
        }
    }

    fn unassign(&mut self, p: usize) {
        let value = self.values[p];
        let bounds = self.bounds_at(p);
        for &(r, c) in &self.terms[p] {
            let (cmin, cmax) = contribution(c, bounds);
            self.partial[r] -= c * value;
            self.rest_min[r] += cmin;
            self.rest_max[r] += cmax;
        }
    }

    /// Assigns positions from `depth` on with their smallest feasible
    /// values. Returns `false` at the first empty range.
    fn descend(&mut self) -> bool {
        while self.depth < self.limit {
            match self.range(self.depth) {
                Some((lo, hi)) => {
                    self.upper[self.depth] = hi;
                    self.assign(self.depth, lo);
                    self.depth += 1;
                }
                None => return false,
            }
        }
        true
    }

    /// Moves to the next value of the deepest position that has one.
    fn backtrack(&mut self) -> bool {
        while self.depth > self.base {
            let p = self.depth - 1;
            let value = self.values[p];
            self.unassign(p);
            if value < self.upper[p] {
                self.assign(p, value + 1);
                return true;
            }
            self.depth -= 1;
        }
        false
    }

    fn emit(&self) -> Vec<i64> {
        if self.raw {
            return self.values[..self.limit].to_vec();
        }
        let mut out = vec![0; self.values.len()];
        for (p, &i) in self.sys.order.iter().enumerate() {
            out[i] = self.values[p];
        }
        out
    }
}

impl Iterator for Solutions<'_> {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        loop {
            match self.state {
                State::Done => return None,
                State::Fresh => self.state = State::Running,
                State::Running => {
                    if !self.backtrack() {
                        self.state = State::Done;
                        return None;
                    }
                }
            }
            if self.descend() {
                let out = self.emit();
                if self.depth == self.base {
                    // Nothing left to vary.
                    self.state = State::Done;
                }
                return Some(out);
            }
        }
    }
}

/// Narrows every variable's bounds to the values each row alone still
/// allows, repeating until nothing changes. `None` means infeasible.
fn tighten(sys: &LinearSystem) -> Option<Vec<(i64, i64)>> {
    let mut bounds = sys.bounds.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for (terms, rhs) in &sys.rows {
            let (mut smin, mut smax) = (0, 0);
            for &(i, c) in terms {
                let (a, b) = contribution(c, bounds[i]);
                smin += a;
                smax += b;
            }
            if *rhs < smin || *rhs > smax {
                return None;
            }
            for &(i, c) in terms {
                let (cmin, cmax) = contribution(c, bounds[i]);
                let a = rhs - (smax - cmax);
                let b = rhs - (smin - cmin);
                let (l, h) = if c > 0 {
                    (Integer::div_ceil(&a, &c), Integer::div_floor(&b, &c))
                } else {
                    (Integer::div_ceil(&b, &c), Integer::div_floor(&a, &c))
                };
                let narrowed = (bounds[i].0.max(l), bounds[i].1.min(h));
                if narrowed.0 > narrowed.1 {
                    return None;
                }
                if narrowed != bounds[i] {
                    let (nmin, nmax) = contribution(c, narrowed);
                    smin += nmin - cmin;
                    smax += nmax - cmax;
                    bounds[i] = narrowed;
                    changed = true;
                }
            }
        }
    }
    Some(bounds)
}

fn contribution(c: i64, (lo, hi): (i64, i64)) -> (i64, i64) {
    let (a, b) = (c * lo, c * hi);
    (a.min(b), a.max(b))
}
