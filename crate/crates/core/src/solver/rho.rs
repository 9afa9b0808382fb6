//! Enumeration of `ρ⁽¹⁾` candidates and one-level extension of a ρ-chain.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::canon::{canonical_form, ClassPermutations};
use super::{LinearSystem, Solutions};
use crate::decomp::{theorem1_rhs, DecompositionState};
use crate::error::{Error, Result};
use crate::incidence::{choose, IncidenceTables};
use crate::matrix::{index_labels, IntMatrix, Label, LabeledIntMatrix};
use crate::params::{lambda_triangle, DesignParams};

fn to_i64(a: &BigInt, context: &'static str) -> Result<i64> {
    a.to_i64().ok_or(Error::Overflow(context))
}

/// `ρ` entry `= multiplier · variable`, so that `D_a ρ / δ` is integral.
fn multiplier(point_class_size: u64, block_class_size: u64) -> i64 {
    (block_class_size / point_class_size.gcd(&block_class_size)) as i64
}

/// All columns `c` of `ρ⁽¹⁾` admissible for a block class of size `s`:
/// `Σ_a D⁽¹⁾_a c_a = k·s`, `0 <= c_a <= min(λ₁, s)` and `s | D⁽¹⁾_a c_a`.
pub fn column_types(tables: &IncidenceTables, p: &DesignParams, s: u64) -> Result<Vec<Vec<i64>>> {
    let d = tables.sizes(1)?;
    let lambda1 = to_i64(&lambda_triangle(p).lambda_s(1)?, "lambda_1")?;
    let cap = lambda1.min(s as i64);
    let mults: Vec<i64> = d.as_slice().iter().map(|&da| multiplier(da, s)).collect();
    let mut sys = LinearSystem::new(mults.iter().map(|m| (0, cap / m)).collect())?;
    let coeffs: Vec<i64> = d.as_slice().iter().zip(&mults).map(|(&da, m)| da as i64 * m).collect();
    sys.add_row(&coeffs, p.k as i64 * s as i64)?;
    Ok(sys.solutions().map(|y| y.iter().zip(&mults).map(|(v, m)| v * m).collect()).collect())
}

/// All `ρ⁽¹⁾` for the block-class sizes `rho0`, one per class under row
/// permutations preserving point-class sizes and column permutations
/// preserving `rho0` values.
///
/// Constraints: row sums `λ₁`, column types from [`column_types`], and
/// `ρ⁽¹⁾ (κ⁽¹⁾)ᵀ` equal to the product right-hand side at `e = f = 1` when
/// `t >= 2`. Representatives come back sorted.
pub fn enumerate_rho1(tables: &IncidenceTables, p: &DesignParams, rho0: &[u64]) -> Result<Vec<LabeledIntMatrix>> {
    if rho0.contains(&0) {
        return Err(Error::Invalid("block class sizes must be positive".into()));
    }
    let table = lambda_triangle(p);
    let lambda0 = table.lambda_s(0)?;
    if BigInt::from(rho0.iter().sum::<u64>()) != lambda0 {
        return Ok(Vec::new());
    }
    let lambda1 = to_i64(&table.lambda_s(1)?, "lambda_1")?;
    let d: Vec<i64> = tables.sizes(1)?.as_slice().iter().map(|&x| x as i64).collect();
    let n = d.len();
    let rhs = if p.t() >= 2 {
        let m = theorem1_rhs(tables, &table, 1, 1)?;
        let mut out = vec![vec![0i64; n]; n];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                *x = to_i64(m.get(a, b), "product right-hand side")?;
            }
        }
        Some(out)
    } else {
        None
    };

    // Columns grouped by ρ⁽⁰⁾ value; within a group types are chosen in
    // non-decreasing order.
    let mut values: Vec<u64> = rho0.to_vec();
    values.sort_unstable();
    values.dedup();
    let types = values.iter().map(|&s| column_types(tables, p, s)).collect::<Result<Vec<_>>>()?;
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for (g, &s) in values.iter().enumerate() {
        slots.extend(rho0.iter().enumerate().filter(|(_, &x)| x == s).map(|(j, _)| (j, g)));
    }

    let mut search = Rho1Search {
        d: &d,
        rho0,
        lambda1,
        rhs: rhs.as_deref(),
        types: &types,
        slots: &slots,
        chosen: vec![0; slots.len()],
        row_sums: vec![0; n],
        gram: vec![vec![0; n]; n],
        found: BTreeSet::new(),
        row_perms: ClassPermutations::new(&d),
    };
    search.run(0);

    let labels = tables.labels(1)?.to_vec();
    search
        .found
        .into_iter()
        .map(|rows| {
            let m = IntMatrix::from_i64_rows(&rows)?;
            LabeledIntMatrix::new(labels.clone(), index_labels(rho0.len()), m)
        })
        .collect()
}

struct Rho1Search<'a> {
    d: &'a [i64],
    rho0: &'a [u64],
    lambda1: i64,
    rhs: Option<&'a [Vec<i64>]>,
    types: &'a [Vec<Vec<i64>>],
    slots: &'a [(usize, usize)],
    chosen: Vec<usize>,
    row_sums: Vec<i64>,
    gram: Vec<Vec<i64>>,
    found: BTreeSet<Vec<Vec<i64>>>,
    row_perms: ClassPermutations,
}

impl Rho1Search<'_> {
    fn run(&mut self, depth: usize) {
        if depth == self.slots.len() {
            self.complete();
            return;
        }
        let (j, g) = self.slots[depth];
        let start = if depth > 0 && self.slots[depth - 1].1 == g { self.chosen[depth - 1] } else { 0 };
        let delta = self.rho0[j] as i64;
        for t in start..self.types[g].len() {
            let column = &self.types[g][t];
            if !self.apply(column, delta, 1) {
                self.apply(column, delta, -1);
                continue;
            }
            self.chosen[depth] = t;
            self.run(depth + 1);
            self.apply(column, delta, -1);
        }
    }

    /// Adds (`sign = 1`) or removes a column; reports whether all partial
    /// sums stay within their targets.
    fn apply(&mut self, column: &[i64], delta: i64, sign: i64) -> bool {
        let mut ok = true;
        for (a, &c) in column.iter().enumerate() {
            self.row_sums[a] += sign * c;
            ok &= self.row_sums[a] <= self.lambda1;
        }
        if let Some(rhs) = self.rhs {
            for (a, &ca) in column.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (b, &cb) in column.iter().enumerate() {
                    // κ_b = D_b ρ_b / δ is integral by construction of the types.
                    self.gram[a][b] += sign * ca * (self.d[b] * cb / delta);
                    ok &= self.gram[a][b] <= rhs[a][b];
                }
            }
        }
        ok
    }

    fn complete(&mut self) {
        if self.row_sums.iter().any(|&s| s != self.lambda1) {
            return;
        }
        if let Some(rhs) = self.rhs {
            if self.gram.iter().zip(rhs).any(|(g, r)| g != r) {
                return;
            }
        }
        let n = self.d.len();
        let mut rows = vec![vec![0; self.rho0.len()]; n];
        for (depth, &(j, g)) in self.slots.iter().enumerate() {
            for (a, row) in rows.iter_mut().enumerate() {
                row[j] = self.types[g][self.chosen[depth]][a];
            }
        }
        self.found.insert(canonical_form(&rows, &self.row_perms, self.rho0));
    }
}

/// The linear system for `ρ⁽ᵉ⁺¹⁾` given `ρ⁽⁰⁾ … ρ⁽ᵉ⁾`.
///
/// Variables are the entries of `ρ⁽ᵉ⁺¹⁾` in column-major order, each
/// scaled by the smallest multiplier that makes the derived `κ⁽ᵉ⁺¹⁾`
/// integral.
#[derive(Debug, Clone)]
pub struct RhoExtension {
    level: usize,
    rows: usize,
    cols: usize,
    multipliers: Vec<i64>,
    row_labels: Vec<Label>,
    col_labels: Vec<Label>,
    system: LinearSystem,
    diagnostic: Option<String>,
}

/// Builds the system for `ρ⁽ᵉ⁺¹⁾`:
///
/// * `R⁽ˣ'ᵉ⁺¹⁾ ρ⁽ᵉ⁺¹⁾ = C(k-x, e+1-x) ρ⁽ˣ⁾` for `x <= e`;
/// * `ρ⁽ᵉ⁺¹⁾ (κ⁽ᶠ⁾)ᵀ` equal to the product right-hand side for `e+1+f <= t`;
/// * `0 <= entry <= min(λ_{e+1}, δ_j)`.
///
/// A right-hand side that cannot be formed (a non-integral `κ⁽ᶠ⁾` or `λ`)
/// yields an extension without solutions and a diagnostic.
pub fn extend_rho(tables: &IncidenceTables, state: &DecompositionState, e: usize) -> Result<RhoExtension> {
    let p = *state.params();
    let y = e + 1;
    if e > state.top_level() {
        return Err(Error::LevelOutOfRange { level: e, max: state.top_level() });
    }
    if y > p.k() {
        return Err(Error::LevelOrder("e + 1 <= k"));
    }
    let n = tables.cell_count(y)?;
    let cols = state.column_count();
    let dy = tables.sizes(y)?.clone();
    let delta = state.delta();
    let table = lambda_triangle(&p);
    let mut diagnostic = None;

    let lambda_y = if y <= p.t() {
        match table.lambda_s(y) {
            Ok(l) => Some(to_i64(&l, "lambda")?),
            Err(err) => {
                diagnostic = Some(format!("{err}"));
                None
            }
        }
    } else {
        None
    };
    let var = |a: usize, j: usize| j * n + a;
    let mut multipliers = vec![0; n * cols];
    let mut bounds = vec![(0, 0); n * cols];
    for j in 0..cols {
        for a in 0..n {
            let m = multiplier(dy.get(a), delta.get(j));
            let cap = lambda_y.map_or(delta.get(j) as i64, |l| l.min(delta.get(j) as i64));
            multipliers[var(a, j)] = m;
            bounds[var(a, j)] = (0, cap / m);
        }
    }
    let mut system = LinearSystem::new(bounds)?;

    for x in 0..=e {
        let r = tables.r(x, y)?;
        let rho_x = state.rho(x).expect("x <= top level");
        let c = to_i64(&choose(p.k() - x, y - x), "binomial")?;
        for b in 0..r.rows() {
            for j in 0..cols {
                let terms: Vec<(usize, i64)> = (0..n)
                    .filter_map(|a| {
                        let coeff = r.get(b, a).to_i64()? * multipliers[var(a, j)];
                        (coeff != 0).then_some((var(a, j), coeff))
                    })
                    .collect();
                let rhs = c * to_i64(rho_x.get(b, j), "rho entry")?;
                system.add_sparse_row(&terms, rhs)?;
            }
        }
    }

    for f in (0..=e).filter(|f| y + f <= p.t()) {
        let kappa = match state.kappa(tables, f) {
            Ok(k) => k,
            Err(err) => {
                diagnostic.get_or_insert(format!("kappa({f}) is not integral: {err}"));
                continue;
            }
        };
        let rhs = match theorem1_rhs(tables, &table, y, f) {
            Ok(r) => r,
            Err(err) => {
                diagnostic.get_or_insert(format!("right-hand side ({y}, {f}) unavailable: {err}"));
                continue;
            }
        };
        for a in 0..n {
            for b in 0..kappa.rows() {
                let mut terms = Vec::new();
                for j in 0..cols {
                    let coeff = to_i64(kappa.get(b, j), "kappa entry")? * multipliers[var(a, j)];
                    if coeff != 0 {
                        terms.push((var(a, j), coeff));
                    }
                }
                system.add_sparse_row(&terms, to_i64(rhs.get(a, b), "right-hand side")?)?;
            }
        }
    }

    if diagnostic.is_some() {
        system = LinearSystem::new(Vec::new())?;
        system.add_row(&[], 1)?;
    }
    Ok(RhoExtension {
        level: y,
        rows: n,
        cols,
        multipliers,
        row_labels: tables.labels(y)?.to_vec(),
        col_labels: state.col_labels().to_vec(),
        system,
        diagnostic,
    })
}

impl RhoExtension {
    /// The level `e + 1` being solved for.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn system(&self) -> &LinearSystem {
        &self.system
    }

    /// Why the system was left without solutions, if it was.
    pub fn diagnostic(&self) -> Option<&str> {
        self.diagnostic.as_deref()
    }

    /// Converts a solution of [`system`](Self::system) to `ρ⁽ᵉ⁺¹⁾`.
    pub fn to_matrix(&self, solution: &[i64]) -> Result<LabeledIntMatrix> {
        if solution.len() != self.rows * self.cols {
            return Err(Error::DimensionMismatch("solution length"));
        }
        let m = IntMatrix::from_fn(self.rows, self.cols, |a, j| {
            let v = j * self.rows + a;
            BigInt::from(solution[v] * self.multipliers[v])
        });
        LabeledIntMatrix::new(self.row_labels.clone(), self.col_labels.clone(), m)
    }

    /// Variable values of a matrix, the inverse of [`to_matrix`](Self::to_matrix).
    pub fn to_solution(&self, rho: &IntMatrix) -> Option<Vec<i64>> {
        if rho.rows() != self.rows || rho.cols() != self.cols {
            return None;
        }
        let mut out = vec![0; self.rows * self.cols];
        for j in 0..self.cols {
            for a in 0..self.rows {
                let v = j * self.rows + a;
                let value = rho.get(a, j).to_i64()?;
                if value % self.multipliers[v] != 0 {
                    return None;
                }
                out[v] = value / self.multipliers[v];
            }
        }
        Some(out)
    }

    /// Raw solutions in search order.
    pub fn raw_solutions(&self) -> Solutions<'_> {
        self.system.solutions()
    }

    /// `ρ⁽ᵉ⁺¹⁾` candidates in search order.
    pub fn solutions(&self) -> impl Iterator<Item = LabeledIntMatrix> + '_ {
        self.raw_solutions().map(|s| self.to_matrix(&s).expect("solution has the system's shape"))
    }

    /// Whether `rho` is among the solutions.
    pub fn contains(&self, rho: &IntMatrix) -> bool {
        self.to_solution(rho).is_some_and(|s| self.system.is_satisfied(&s))
    }
}
