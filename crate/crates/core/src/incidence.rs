//! Cell-level incidence matrices of a tactical sequence.
//!
//! For cells `𝒳 ∈ 𝔓_x` and `𝒴 ∈ 𝔓_y` with `x <= y`:
//!
//! * `R⁽ˣʸ⁾[𝒳][𝒴]` counts the members of `𝒴` containing a representative of `𝒳`;
//! * `K⁽ˣʸ⁾[𝒳][𝒴]` counts the members of `𝒳` contained in a representative of `𝒴`;
//! * `D⁽ˣ⁾` is the diagonal of cell sizes, and `D⁽ˣ⁾ R⁽ˣʸ⁾ = K⁽ˣʸ⁾ D⁽ʸ⁾`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::binom::{binomial, BinomialTable};
use crate::error::{Error, Result};
use crate::matrix::{index_labels, DiagonalSizes, IntMatrix, Label, LabeledIntMatrix};
pub use crate::matrix::is_positive_definite;
use crate::permgroup::TacticalSequence;

fn check_levels(seq: &TacticalSequence, x: usize, y: usize) -> Result<()> {
    if x > y {
        return Err(Error::LevelOrder("x <= y"));
    }
    seq.level(y).map(|_| ())
}

fn cell_labels(seq: &TacticalSequence, x: usize) -> Result<Vec<Label>> {
    Ok(seq.level(x)?.representatives().into_iter().map(Label::Cell).collect())
}

/// `R⁽ˣʸ⁾` by direct counting.
pub fn compute_r(seq: &TacticalSequence, x: usize, y: usize) -> Result<LabeledIntMatrix> {
    check_levels(seq, x, y)?;
    let (lower, upper) = (seq.level(x)?, seq.level(y)?);
    let mut counts = IntMatrix::zeros(lower.len(), upper.len());
    for (i, cell) in lower.cells().iter().enumerate() {
        let rep = cell.representative();
        let mut row = alloc::vec![0u64; upper.len()];
        for (ys, cy) in upper.members_with_cells() {
            if rep.is_subset_of(ys) {
                row[cy] += 1;
            }
        }
        for (j, c) in row.into_iter().enumerate() {
            counts.set(i, j, BigInt::from(c));
        }
    }
    LabeledIntMatrix::new(cell_labels(seq, x)?, cell_labels(seq, y)?, counts)
}

/// `K⁽ˣʸ⁾` by direct counting.
pub fn compute_k(seq: &TacticalSequence, x: usize, y: usize) -> Result<LabeledIntMatrix> {
    check_levels(seq, x, y)?;
    let (lower, upper) = (seq.level(x)?, seq.level(y)?);
    let mut counts = IntMatrix::zeros(lower.len(), upper.len());
    for (j, cell) in upper.cells().iter().enumerate() {
        let rep = cell.representative();
        let mut col = alloc::vec![0u64; lower.len()];
        for (xs, cx) in lower.members_with_cells() {
            if xs.is_subset_of(rep) {
                col[cx] += 1;
            }
        }
        for (i, c) in col.into_iter().enumerate() {
            counts.set(i, j, BigInt::from(c));
        }
    }
    LabeledIntMatrix::new(cell_labels(seq, x)?, cell_labels(seq, y)?, counts)
}

/// Diagonal `D⁽ˣ⁾` of cell sizes.
pub fn compute_d(seq: &TacticalSequence, x: usize) -> Result<DiagonalSizes> {
    DiagonalSizes::new(seq.level(x)?.sizes())
}

/// `K = D_x · R · D_y⁻¹`, entrywise and exact.
pub fn derive_k_from_r(r: &LabeledIntMatrix, dx: &DiagonalSizes, dy: &DiagonalSizes) -> Result<LabeledIntMatrix> {
    scale_rows_cols(r, dx, dy, "K = D R D^-1")
}

/// `D_x · M · D_y⁻¹` with an exactness check on every entry.
pub(crate) fn scale_rows_cols(
    m: &LabeledIntMatrix,
    row_sizes: &DiagonalSizes,
    col_sizes: &DiagonalSizes,
    context: &'static str,
) -> Result<LabeledIntMatrix> {
    if row_sizes.len() != m.rows() || col_sizes.len() != m.cols() {
        return Err(Error::DimensionMismatch(context));
    }
    let mut out = IntMatrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let num = m.get(i, j) * BigInt::from(row_sizes.get(i));
            let (q, rem) = num.div_rem(&BigInt::from(col_sizes.get(j)));
            if !rem.is_zero() {
                return Err(Error::InexactDivision { context, row: i, col: j });
            }
            out.set(i, j, q);
        }
    }
    m.with_matrix(out)
}

/// `R⁽ˣ'ˣ⁺¹⁾ ⋯ R⁽ʸ⁻¹'ʸ⁾ / (y-x)!` for a chain of adjacent matrices.
pub fn chain_expand(chain: &[LabeledIntMatrix]) -> Result<LabeledIntMatrix> {
    let (first, rest) = chain.split_first().ok_or(Error::Invalid("empty chain".into()))?;
    let mut product = first.clone();
    let mut factorial = BigInt::from(1u32);
    for (n, m) in rest.iter().enumerate() {
        product = product.mul(m)?;
        factorial *= BigInt::from(n as u64 + 2);
    }
    let entries = product.matrix().exact_div(&factorial, "chain product / (y-x)!")?;
    product.with_matrix(entries)
}

/// A chain matrix whose row sums are not `v - i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainSumViolation {
    /// Lower level `i` of the offending `R⁽ⁱ'ⁱ⁺¹⁾`.
    pub level: usize,
    pub row: usize,
    pub expected: BigInt,
    pub found: BigInt,
}

/// Checks that `chain[n]`, read as `R⁽ⁱ'ⁱ⁺¹⁾` with `i = start + n`, has
/// constant row sum `v - i`.
pub fn check_chain_sums(chain: &[LabeledIntMatrix], v: usize, start: usize) -> core::result::Result<(), ChainSumViolation> {
    for (n, m) in chain.iter().enumerate() {
        let level = start + n;
        let expected = BigInt::from(v as i64 - level as i64);
        for (row, sum) in m.matrix().row_sums().into_iter().enumerate() {
            if sum != expected {
                return Err(ChainSumViolation { level, row, expected, found: sum });
            }
        }
    }
    Ok(())
}

/// `Σ_{Z∈𝒵} C(#(X∩Z), y)` for `y <= min(x, z)`; equals `(K⁽ʸˣ⁾)ᵀ R⁽ʸᶻ⁾`.
pub fn kr_closed_form_low(seq: &TacticalSequence, x: usize, y: usize, z: usize) -> Result<LabeledIntMatrix> {
    if y > x.min(z) {
        return Err(Error::LevelOrder("y <= min(x, z)"));
    }
    seq.level(x.max(z))?;
    let table = BinomialTable::new(seq.v());
    closed_form(seq, x, z, |xs, zs| table.get(xs.intersection(zs).len() as i64, y as i64))
}

/// `Σ_{Z∈𝒵} C(v - #(X∪Z), v - y)` for `max(x, z) <= y <= v`; equals
/// `R⁽ˣʸ⁾ (K⁽ᶻʸ⁾)ᵀ`.
pub fn kr_closed_form_high(seq: &TacticalSequence, x: usize, y: usize, z: usize) -> Result<LabeledIntMatrix> {
    let v = seq.v();
    if x.max(z) > y || y > v {
        return Err(Error::LevelOrder("max(x, z) <= y <= v"));
    }
    seq.level(x.max(z))?;
    let table = BinomialTable::new(v);
    closed_form(seq, x, z, |xs, zs| {
        table.get((v - xs.union(zs).len()) as i64, (v - y) as i64)
    })
}

fn closed_form(
    seq: &TacticalSequence,
    x: usize,
    z: usize,
    term: impl Fn(crate::Subset, crate::Subset) -> BigInt,
) -> Result<LabeledIntMatrix> {
    let (px, pz) = (seq.level(x)?, seq.level(z)?);
    let m = IntMatrix::from_fn(px.len(), pz.len(), |i, j| {
        let rep = px.cell(i).representative();
        pz.cell(j).members().iter().map(|&zs| term(rep, zs)).sum()
    });
    LabeledIntMatrix::new(cell_labels(seq, x)?, cell_labels(seq, z)?, m)
}

/// All `R⁽ˣʸ⁾`, `K⁽ˣʸ⁾` and `D⁽ˣ⁾` for `0 <= x <= y <= s`.
///
/// Built either from an explicit [`TacticalSequence`] or from a chain
/// `R⁽⁰¹⁾, …, R⁽ˢ⁻¹'ˢ⁾` alone, which determines every other matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceTables {
    v: usize,
    sizes: Vec<DiagonalSizes>,
    /// `r[x][y - x]`
    r: Vec<Vec<LabeledIntMatrix>>,
    k: Vec<Vec<LabeledIntMatrix>>,
}

impl IncidenceTables {
    pub fn from_sequence(seq: &TacticalSequence) -> Result<Self> {
        let s = seq.depth();
        let sizes = (0..=s).map(|x| compute_d(seq, x)).collect::<Result<Vec<_>>>()?;
        let mut r = Vec::with_capacity(s + 1);
        let mut k = Vec::with_capacity(s + 1);
        for x in 0..=s {
            r.push((x..=s).map(|y| compute_r(seq, x, y)).collect::<Result<Vec<_>>>()?);
            k.push((x..=s).map(|y| compute_k(seq, x, y)).collect::<Result<Vec<_>>>()?);
        }
        Ok(Self { v: seq.v(), sizes, r, k })
    }

    /// Derives all matrices from `chain[i] = R⁽ⁱ'ⁱ⁺¹⁾`. Rows and columns get
    /// positional labels.
    pub fn from_chain(v: usize, chain: &[IntMatrix]) -> Result<Self> {
        let s = chain.len();
        if s > v {
            return Err(Error::LevelOutOfRange { level: s, max: v });
        }
        let mut dims = Vec::with_capacity(s + 1);
        dims.push(1usize);
        for (i, m) in chain.iter().enumerate() {
            if m.rows() != dims[i] {
                return Err(Error::DimensionMismatch("adjacent chain matrices"));
            }
            if !m.is_nonnegative() {
                return Err(Error::Invalid(format!("R({i},{}) has negative entries", i + 1)));
            }
            dims.push(m.cols());
        }
        let labeled: Vec<LabeledIntMatrix> = chain
            .iter()
            .map(|m| LabeledIntMatrix::unlabeled(m.clone()))
            .collect();
        check_chain_sums(&labeled, v, 0).map_err(|e| {
            Error::Invalid(format!(
                "R({},{}) row {} sums to {}, expected {}",
                e.level,
                e.level + 1,
                e.row,
                e.found,
                e.expected
            ))
        })?;

        let mut r: Vec<Vec<LabeledIntMatrix>> = Vec::with_capacity(s + 1);
        for x in 0..=s {
            let mut row = Vec::with_capacity(s + 1 - x);
            row.push(LabeledIntMatrix::unlabeled(IntMatrix::identity(dims[x])));
            for y in x + 1..=s {
                row.push(chain_expand(&labeled[x..y])?);
            }
            r.push(row);
        }
        let mut sizes = Vec::with_capacity(s + 1);
        for top in &r[0] {
            let row = top.matrix().row(0).iter().map(|a| a.to_u64()).collect::<Option<Vec<_>>>();
            let row = row.ok_or(Error::Overflow("cell sizes"))?;
            sizes.push(DiagonalSizes::new(row)?);
        }
        let mut k = Vec::with_capacity(s + 1);
        for x in 0..=s {
            k.push(
                (x..=s)
                    .map(|y| derive_k_from_r(&r[x][y - x], &sizes[x], &sizes[y]))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(Self { v, sizes, r, k })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn depth(&self) -> usize {
        self.sizes.len() - 1
    }

    fn check(&self, x: usize, y: usize) -> Result<()> {
        if x > y {
            return Err(Error::LevelOrder("x <= y"));
        }
        if y > self.depth() {
            return Err(Error::LevelOutOfRange { level: y, max: self.depth() });
        }
        Ok(())
    }

    pub fn r(&self, x: usize, y: usize) -> Result<&LabeledIntMatrix> {
        self.check(x, y)?;
        Ok(&self.r[x][y - x])
    }

    pub fn k(&self, x: usize, y: usize) -> Result<&LabeledIntMatrix> {
        self.check(x, y)?;
        Ok(&self.k[x][y - x])
    }

    pub fn sizes(&self, x: usize) -> Result<&DiagonalSizes> {
        self.check(x, x)?;
        Ok(&self.sizes[x])
    }

    pub fn labels(&self, x: usize) -> Result<&[Label]> {
        Ok(self.r(x, x)?.row_labels())
    }

    /// Number of cells at level `x`.
    pub fn cell_count(&self, x: usize) -> Result<usize> {
        Ok(self.sizes(x)?.len())
    }

    /// The adjacent chain `R⁽⁰¹⁾, …, R⁽ˢ⁻¹'ˢ⁾`.
    pub fn chain(&self) -> Vec<IntMatrix> {
        (0..self.depth()).map(|i| self.r[i][1].matrix().clone()).collect()
    }
}

/// Positional labels for `n` columns, for decomposition matrices without
/// concrete block cells.
pub fn column_labels(n: usize) -> Vec<Label> {
    index_labels(n)
}

/// `C(n, k)` as used by the incidence identities.
pub fn choose(n: usize, k: usize) -> BigInt {
    binomial(n as i64, k as i64)
}
