//! The indexing step: assigning a cell of `𝔓_k` to every column of a
//! ρ-chain and checking that the resulting block set is a design.

use alloc::vec;
use alloc::vec::Vec;

use crate::decomp::{verify_design, BlockSelection, DecompositionState, DesignVerdict};
use crate::error::{Error, Result};
use crate::incidence::compute_r;
use crate::matrix::LabeledIntMatrix;
use crate::params::DesignParams;
use crate::permgroup::TacticalSequence;
use crate::subset::Subset;

/// A ρ-chain `ρ⁽⁰⁾ … ρ⁽ᵉ⁾` to be realised by cells of `𝔓_k`.
#[derive(Debug, Clone)]
pub struct IndexingProblem<'a> {
    seq: &'a TacticalSequence,
    state: &'a DecompositionState,
    /// `r_k[x] = R⁽ˣᵏ⁾` for `x <= e`.
    r_k: Vec<LabeledIntMatrix>,
}

impl<'a> IndexingProblem<'a> {
    pub fn new(seq: &'a TacticalSequence, state: &'a DecompositionState) -> Result<Self> {
        let k = state.params().k();
        if seq.depth() < k {
            return Err(Error::LevelOutOfRange { level: k, max: seq.depth() });
        }
        if state.top_level() > k {
            return Err(Error::LevelOrder("chain levels must not exceed k"));
        }
        let r_k = (0..=state.top_level()).map(|x| compute_r(seq, x, k)).collect::<Result<Vec<_>>>()?;
        for (x, r) in r_k.iter().enumerate() {
            if r.rows() != state.rho(x).expect("x <= top level").rows() {
                return Err(Error::DimensionMismatch("rho rows differ from the partition's cell count"));
            }
        }
        Ok(Self { seq, state, r_k })
    }

    pub fn params(&self) -> &DesignParams {
        self.state.params()
    }

    pub fn column_count(&self) -> usize {
        self.state.column_count()
    }

    fn column_matches(&self, cell: usize, j: usize, x: usize) -> bool {
        let (r, rho) = (&self.r_k[x], self.state.rho(x).expect("x <= top level"));
        (0..r.rows()).all(|a| r.get(a, cell) == rho.get(a, j))
    }

    /// Chain columns `j` and `i` agree at every level.
    fn same_chain_column(&self, i: usize, j: usize) -> bool {
        self.state.levels().iter().all(|m| (0..m.rows()).all(|a| m.get(a, i) == m.get(a, j)))
    }
}

/// Cells `𝓑` of `𝔓_k` with `#𝓑 = ρ⁽⁰⁾_j` whose `R⁽ˣᵏ⁾` column equals column
/// `j` of `ρ⁽ˣ⁾` at every level, in cell order. Higher levels are checked
/// first since they discriminate most.
pub fn column_candidates(prob: &IndexingProblem<'_>, j: usize) -> Result<Vec<usize>> {
    if j >= prob.column_count() {
        return Err(Error::DimensionMismatch("column index out of range"));
    }
    let level = prob.seq.level(prob.params().k())?;
    let size = prob.state.rho0()[j];
    Ok((0..level.len())
        .filter(|&c| level.cell(c).len() as u64 == size)
        .filter(|&c| (0..=prob.state.top_level()).rev().all(|x| prob.column_matches(c, j, x)))
        .collect())
}

/// A design found by [`index_designs`], with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedDesign {
    pub params: DesignParams,
    /// Cell of `𝔓_k` assigned to each column.
    pub assignment: Vec<usize>,
    pub selection: BlockSelection,
    pub blocks: Vec<Subset>,
    /// `λ` as recounted over all t-subsets.
    pub lambda_verified: u64,
}

/// All assignments of pairwise distinct candidate cells to the columns
/// whose block union is a `t-(v,k,λ)` design. Columns that agree at every
/// level receive increasing cells, so each design appears once.
pub fn index_designs(prob: &IndexingProblem<'_>) -> Result<Vec<IndexedDesign>> {
    let n = prob.column_count();
    let candidates = (0..n).map(|j| column_candidates(prob, j)).collect::<Result<Vec<_>>>()?;
    // Latest earlier column identical to column j, if any.
    let twin: Vec<Option<usize>> = (0..n).map(|j| (0..j).rev().find(|&i| prob.same_chain_column(i, j))).collect();
    let level = prob.seq.level(prob.params().k())?;
    let mut used = vec![false; level.len()];
    let mut assignment = vec![0; n];
    let mut found = Vec::new();
    search(prob, &candidates, &twin, 0, &mut used, &mut assignment, &mut found)?;
    Ok(found)
}

fn search(
    prob: &IndexingProblem<'_>,
    candidates: &[Vec<usize>],
    twin: &[Option<usize>],
    j: usize,
    used: &mut [bool],
    assignment: &mut [usize],
    found: &mut Vec<IndexedDesign>,
) -> Result<()> {
    if j == candidates.len() {
        let p = *prob.params();
        let selection = BlockSelection::new(p.k(), assignment.to_vec());
        let blocks = selection.blocks(prob.seq)?;
        if let DesignVerdict::Design { lambda } = verify_design(prob.seq.v(), &blocks, p.t())? {
            if lambda == p.lambda && !blocks.is_empty() {
                found.push(IndexedDesign { params: p, assignment: assignment.to_vec(), selection, blocks, lambda_verified: lambda });
            }
        }
        return Ok(());
    }
    let floor = twin[j].map(|i| assignment[i]);
    for &c in &candidates[j] {
        if used[c] || floor.is_some_and(|f| c <= f) {
            continue;
        }
        used[c] = true;
        assignment[j] = c;
        search(prob, candidates, twin, j + 1, used, assignment, found)?;
        used[c] = false;
    }
    Ok(())
}

/// Whether every level of `state` equals `R⁽ˣᵏ⁾` restricted to the columns of `sel`.
pub fn reproduces_chain(seq: &TacticalSequence, sel: &BlockSelection, state: &DecompositionState) -> Result<bool> {
    for (x, rho) in state.levels().iter().enumerate() {
        let r = compute_r(seq, x, sel.k())?;
        let same = (0..rho.rows()).all(|a| {
            sel.cells().iter().enumerate().all(|(j, &c)| r.get(a, c) == rho.get(a, j))
        });
        if !same {
            return Ok(false);
        }
    }
    Ok(true)
}
