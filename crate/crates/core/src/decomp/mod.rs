//! Tactical decomposition matrices of a design whose blocks are a union of
//! cells of `𝔓_k`.
//!
//! For a block selection `𝔅 ⊆ 𝔓_k`, `ρ⁽ˣ⁾` is the restriction of `R⁽ˣᵏ⁾` to
//! the selected columns and `κ⁽ˣ⁾ = D⁽ˣ⁾ ρ⁽ˣ⁾ δ⁻¹`, where `δ` holds the sizes
//! of the selected cells. `κ` is always derived, never stored.

pub mod averaged;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::incidence::{choose, compute_r, is_positive_definite, scale_rows_cols, IncidenceTables};
use crate::matrix::{index_labels, DiagonalSizes, IntMatrix, Label, LabeledIntMatrix, RationalMatrix, RationalSymMatrix};
use crate::params::{lambda_s, DesignParams, LambdaTable};
use crate::permgroup::TacticalSequence;
use crate::subset::{k_subsets, Subset};

/// A set `𝔅` of cells of `𝔓_k`, in column order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockSelection {
    k: usize,
    cells: Vec<usize>,
}

impl BlockSelection {
    pub fn new(k: usize, cells: Vec<usize>) -> Self {
        Self { k, cells }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn validate(&self, seq: &TacticalSequence) -> Result<()> {
        let level = seq.level(self.k)?;
        let mut seen = vec![false; level.len()];
        for &c in &self.cells {
            if c >= level.len() {
                return Err(Error::InvalidSelection(format!("cell {c} does not exist at level {}", self.k)));
            }
            if core::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidSelection(format!("cell {c} selected twice")));
            }
        }
        Ok(())
    }

    /// Selected cell sizes, i.e. the diagonal of `δ` and the row `ρ⁽⁰⁾`.
    pub fn sizes(&self, seq: &TacticalSequence) -> Result<DiagonalSizes> {
        self.validate(seq)?;
        let level = seq.level(self.k)?;
        DiagonalSizes::new(self.cells.iter().map(|&c| level.cell(c).len() as u64).collect())
    }

    /// All blocks of the design `⋃𝔅`, in column order.
    pub fn blocks(&self, seq: &TacticalSequence) -> Result<Vec<Subset>> {
        self.validate(seq)?;
        let level = seq.level(self.k)?;
        Ok(self.cells.iter().flat_map(|&c| level.cell(c).members().iter().copied()).collect())
    }

    pub fn column_labels(&self, seq: &TacticalSequence) -> Result<Vec<Label>> {
        let level = seq.level(self.k)?;
        Ok(self.cells.iter().map(|&c| Label::Cell(level.cell(c).representative())).collect())
    }
}

/// `ρ⁽ˣ⁾`: the columns of `R⁽ˣᵏ⁾` belonging to the selection.
pub fn rho_from_selection(seq: &TacticalSequence, sel: &BlockSelection, x: usize) -> Result<LabeledIntMatrix> {
    sel.validate(seq)?;
    if x > sel.k() {
        return Err(Error::LevelOrder("x <= k"));
    }
    let r = compute_r(seq, x, sel.k())?;
    LabeledIntMatrix::new(r.row_labels().to_vec(), sel.column_labels(seq)?, r.matrix().select_columns(sel.cells()))
}

/// `κ⁽ˣ⁾ = D⁽ˣ⁾ ρ⁽ˣ⁾ δ⁻¹`. A remainder means `ρ⁽ˣ⁾` cannot belong to a
/// design with these cell sizes.
pub fn kappa_from_rho(rho: &LabeledIntMatrix, dx: &DiagonalSizes, delta: &DiagonalSizes) -> Result<LabeledIntMatrix> {
    scale_rows_cols(rho, dx, delta, "kappa = D rho delta^-1")
}

/// `ρ⁽ˣ⁾ = R⁽ˣʸ⁾ ρ⁽ʸ⁾ / C(k-x, y-x)`.
pub fn reduce_rho(tables: &IncidenceTables, rho_y: &LabeledIntMatrix, x: usize, y: usize, k: usize) -> Result<LabeledIntMatrix> {
    if y > k {
        return Err(Error::LevelOrder("x <= y <= k"));
    }
    let product = tables.r(x, y)?.mul(rho_y)?;
    let entries = product.matrix().exact_div(&choose(k - x, y - x), "R rho / C(k-x, y-x)")?;
    product.with_matrix(entries)
}

/// `ρ⁽ᵉ⁾ (κ⁽ᶠ⁾)ᵀ` counted from the explicit blocks: entry `([E], 𝓕)` is
/// `Σ_{F∈𝓕} #{B : E ∪ F ⊆ B}`.
pub fn product_lhs(
    seq: &TacticalSequence,
    sel: &BlockSelection,
    params: &DesignParams,
    e: usize,
    f: usize,
) -> Result<LabeledIntMatrix> {
    if e + f > params.t() {
        return Err(Error::LevelOrder("e + f <= t"));
    }
    let blocks = sel.blocks(seq)?;
    let (pe, pf) = (seq.level(e)?, seq.level(f)?);
    let m = IntMatrix::from_fn(pe.len(), pf.len(), |i, j| {
        let rep = pe.cell(i).representative();
        let count: usize = pf
            .cell(j)
            .members()
            .iter()
            .map(|&fs| {
                let target = rep.union(fs);
                blocks.iter().filter(|b| target.is_subset_of(**b)).count()
            })
            .sum();
        BigInt::from(count)
    });
    LabeledIntMatrix::new(
        pe.representatives().into_iter().map(Label::Cell).collect(),
        pf.representatives().into_iter().map(Label::Cell).collect(),
        m,
    )
}

/// `Σ_{j=0}^{min(e,f)} λ_{e+f-j, j} (K⁽ʲᵉ⁾)ᵀ R⁽ʲᶠ⁾`, which depends only on the
/// tactical sequence and the design parameters.
pub fn theorem1_rhs(tables: &IncidenceTables, table: &LambdaTable, e: usize, f: usize) -> Result<LabeledIntMatrix> {
    if e + f > table.t() {
        return Err(Error::LevelOrder("e + f <= t"));
    }
    let mut acc: Option<LabeledIntMatrix> = None;
    for j in 0..=e.min(f) {
        let lambda = table.integer(e + f - j, j)?;
        let term = tables.k(j, e)?.transpose().mul(tables.r(j, f)?)?;
        let term = term.matrix().scale(&lambda);
        acc = Some(match acc {
            None => LabeledIntMatrix::new(tables.labels(e)?.to_vec(), tables.labels(f)?.to_vec(), term)?,
            Some(prev) => {
                let sum = prev.matrix().add(&term)?;
                prev.with_matrix(sum)?
            }
        });
    }
    Ok(acc.expect("j = 0 is always present"))
}

/// `ρ⁽ˣ⁾ δ⁻¹ (ρ⁽ˣ⁾)ᵀ`, congruent (via `√D⁽ˣ⁾`) to `ω⁽ˣ⁾ (ω⁽ˣ⁾)ᵀ`.
pub fn gram_matrix(rho_x: &LabeledIntMatrix, delta: &DiagonalSizes) -> Result<RationalSymMatrix> {
    if rho_x.cols() != delta.len() {
        return Err(Error::DimensionMismatch("rho vs. delta"));
    }
    let n = rho_x.rows();
    let m = RationalMatrix::from_fn(n, n, |a, b| {
        let mut sum = BigRational::zero();
        for c in 0..rho_x.cols() {
            let p = rho_x.get(a, c) * rho_x.get(b, c);
            if !p.is_zero() {
                sum += BigRational::new(p, BigInt::from(delta.get(c)));
            }
        }
        sum
    });
    RationalSymMatrix::new(m)
}

/// One line of [`fisher_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FisherLine {
    pub x: usize,
    /// `#𝔅`
    pub block_classes: usize,
    /// `#𝔓_x`
    pub point_classes: usize,
    /// `#𝔅 >= #𝔓_x`
    pub holds: bool,
    /// Whether the Gram matrix of `ρ⁽ˣ⁾` is positive definite.
    pub gram_positive_definite: bool,
}

/// The Fisher-type bound `#𝔅 >= #𝔓_x` for `x <= ⌊t/2⌋`, together with the
/// definiteness of the corresponding Gram matrix.
pub fn fisher_check(seq: &TacticalSequence, sel: &BlockSelection, params: &DesignParams) -> Result<Vec<FisherLine>> {
    let delta = sel.sizes(seq)?;
    (0..=params.t() / 2)
        .map(|x| {
            let point_classes = seq.level(x)?.len();
            let rho = rho_from_selection(seq, sel, x)?;
            let gram = gram_matrix(&rho, &delta)?;
            Ok(FisherLine {
                x,
                block_classes: sel.len(),
                point_classes,
                holds: sel.len() >= point_classes,
                gram_positive_definite: is_positive_definite(&gram),
            })
        })
        .collect()
}

/// Outcome of [`verify_design`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DesignVerdict {
    /// Every t-subset lies in exactly `lambda` blocks.
    Design { lambda: u64 },
    /// `subset` lies in `count` blocks while the first t-subset lies in `expected`.
    Deviates { subset: Subset, count: u64, expected: u64 },
}

/// Counts, for every t-subset of `{0, …, v-1}`, the blocks containing it.
pub fn verify_design(v: usize, blocks: &[Subset], t: usize) -> Result<DesignVerdict> {
    if let Some(&first) = blocks.first() {
        for (index, &b) in blocks.iter().enumerate() {
            if b.len() != first.len() {
                return Err(Error::UnequalBlockSizes { index, block: b, expected: first.len(), found: b.len() });
            }
            if !b.fits(v) {
                return Err(Error::PointOutOfRange { point: b.points().last().unwrap_or(0), v });
            }
        }
    }
    let mut expected: Option<u64> = None;
    for ts in k_subsets(v, t) {
        let count = blocks.iter().filter(|b| ts.is_subset_of(**b)).count() as u64;
        match expected {
            None => expected = Some(count),
            Some(e) if e != count => return Ok(DesignVerdict::Deviates { subset: ts, count, expected: e }),
            Some(_) => {}
        }
    }
    Ok(DesignVerdict::Design { lambda: expected.unwrap_or(0) })
}

/// A block-class structure `ρ⁽⁰⁾, ρ⁽¹⁾, …, ρ⁽ᵉ⁾` sharing column labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionState {
    params: DesignParams,
    /// `levels[x]` is `ρ⁽ˣ⁾`; `levels[0]` is the single row of class sizes.
    levels: Vec<LabeledIntMatrix>,
}

impl DecompositionState {
    /// A state holding only `ρ⁽⁰⁾`. Columns get positional labels unless
    /// `col_labels` is given.
    pub fn new(params: DesignParams, rho0: &[u64], col_labels: Option<Vec<Label>>) -> Result<Self> {
        DiagonalSizes::new(rho0.to_vec())?;
        let labels = col_labels.unwrap_or_else(|| index_labels(rho0.len()));
        let row = IntMatrix::from_fn(1, rho0.len(), |_, j| BigInt::from(rho0[j]));
        let rho0 = LabeledIntMatrix::new(vec![Label::Cell(Subset::EMPTY)], labels, row)?;
        Ok(Self { params, levels: vec![rho0] })
    }

    /// Validates `levels[0..]` as `ρ⁽⁰⁾, ρ⁽¹⁾, …`.
    pub fn from_levels(params: DesignParams, levels: Vec<LabeledIntMatrix>) -> Result<Self> {
        let mut it = levels.into_iter();
        let first = it.next().ok_or(Error::Invalid("a state needs rho(0)".into()))?;
        if first.rows() != 1 {
            return Err(Error::DimensionMismatch("rho(0) must be a single row"));
        }
        let rho0 = first
            .matrix()
            .row(0)
            .iter()
            .map(|a| a.to_u64())
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Invalid("rho(0) entries must be positive integers".into()))?;
        let mut state = Self::new(params, &rho0, Some(first.col_labels().to_vec()))?;
        state.levels[0] = first;
        for m in it {
            state.push_level(m)?;
        }
        Ok(state)
    }

    /// `ρ⁽⁰⁾ … ρ⁽ᵉ⁾` of the design `⋃𝔅`.
    pub fn from_selection(seq: &TacticalSequence, sel: &BlockSelection, params: DesignParams, e: usize) -> Result<Self> {
        let levels = (0..=e).map(|x| rho_from_selection(seq, sel, x)).collect::<Result<Vec<_>>>()?;
        Self::from_levels(params, levels)
    }

    /// Appends `ρ⁽ᵉ⁺¹⁾` after checking shape and entry bounds.
    pub fn push_level(&mut self, rho: LabeledIntMatrix) -> Result<()> {
        let x = self.levels.len();
        if rho.cols() != self.column_count() {
            return Err(Error::DimensionMismatch("rho column count"));
        }
        if rho.col_labels() != self.col_labels() {
            return Err(Error::Invalid(format!("rho({x}) column labels differ from rho(0)")));
        }
        let delta = self.delta();
        let lambda_bound = if x <= self.params.t() {
            let l = lambda_s(&self.params, x)?;
            l.is_integer().then(|| l.to_integer())
        } else {
            None
        };
        for i in 0..rho.rows() {
            for j in 0..rho.cols() {
                let a = rho.get(i, j);
                let over_lambda = lambda_bound.as_ref().is_some_and(|l| a > l);
                if a < &BigInt::zero() || a > &BigInt::from(delta.get(j)) || over_lambda {
                    return Err(Error::Invalid(format!("rho({x}) entry ({i}, {j}) = {a} is out of range")));
                }
            }
        }
        self.levels.push(rho);
        Ok(())
    }

    pub fn params(&self) -> &DesignParams {
        &self.params
    }

    /// Highest level `e` present.
    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[LabeledIntMatrix] {
        &self.levels
    }

    pub fn rho(&self, x: usize) -> Option<&LabeledIntMatrix> {
        self.levels.get(x)
    }

    pub fn column_count(&self) -> usize {
        self.levels[0].cols()
    }

    pub fn col_labels(&self) -> &[Label] {
        self.levels[0].col_labels()
    }

    pub fn rho0(&self) -> Vec<u64> {
        self.levels[0].matrix().row(0).iter().map(|a| a.to_u64().expect("validated")).collect()
    }

    /// `δ`, the diagonal of block-class sizes.
    pub fn delta(&self) -> DiagonalSizes {
        DiagonalSizes::new(self.rho0()).expect("validated")
    }

    /// `κ⁽ˣ⁾`, derived from `ρ⁽ˣ⁾`.
    pub fn kappa(&self, tables: &IncidenceTables, x: usize) -> Result<LabeledIntMatrix> {
        let rho = self.rho(x).ok_or(Error::LevelOutOfRange { level: x, max: self.top_level() })?;
        kappa_from_rho(rho, tables.sizes(x)?, &self.delta())
    }
}
