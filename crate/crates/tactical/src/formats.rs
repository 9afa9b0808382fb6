//! JSON file formats shared by the commands.
//!
//! Points inside files are written in the base recorded in the file's
//! `one_based` field, so every file can be read back without extra flags.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use tactical_core::decomp::DecompositionState;
use tactical_core::indexer::IndexedDesign;
use tactical_core::{DesignParams, IntMatrix, Label, LabeledIntMatrix, PointBase, Subset};

pub fn base(one_based: bool) -> PointBase {
    if one_based {
        PointBase::One
    } else {
        PointBase::Zero
    }
}

pub fn subset_to_json(s: Subset, base: PointBase) -> Vec<usize> {
    s.points().map(|p| base.to_label(p)).collect()
}

pub fn subset_from_json(points: &[usize], base: PointBase) -> Result<Subset> {
    let offset = base.offset();
    let shifted = points
        .iter()
        .map(|&p| p.checked_sub(offset).ok_or_else(|| anyhow!("point {p} is below the first point {offset}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subset::from_points(&shifted)?)
}

/// A row or column label: a cell by its representative, or a position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelJson {
    Index(usize),
    Cell(Vec<usize>),
}

impl LabelJson {
    pub fn from_label(l: &Label, base: PointBase) -> Self {
        match *l {
            Label::Cell(s) => LabelJson::Cell(subset_to_json(s, base)),
            Label::Index(i) => LabelJson::Index(i),
        }
    }

    pub fn to_label(&self, base: PointBase) -> Result<Label> {
        Ok(match self {
            LabelJson::Cell(points) => Label::Cell(subset_from_json(points, base)?),
            LabelJson::Index(i) => Label::Index(*i),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub row_labels: Vec<LabelJson>,
    pub col_labels: Vec<LabelJson>,
    pub rows: Vec<Vec<i64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &LabeledIntMatrix, base: PointBase) -> Result<Self> {
        Ok(Self {
            row_labels: m.row_labels().iter().map(|l| LabelJson::from_label(l, base)).collect(),
            col_labels: m.col_labels().iter().map(|l| LabelJson::from_label(l, base)).collect(),
            rows: int_rows(m.matrix())?,
        })
    }

    pub fn to_matrix(&self, base: PointBase) -> Result<LabeledIntMatrix> {
        let rows = self.row_labels.iter().map(|l| l.to_label(base)).collect::<Result<Vec<_>>>()?;
        let cols = self.col_labels.iter().map(|l| l.to_label(base)).collect::<Result<Vec<_>>>()?;
        let m = if self.rows.is_empty() { IntMatrix::zeros(0, cols.len()) } else { IntMatrix::from_i64_rows(&self.rows)? };
        Ok(LabeledIntMatrix::new(rows, cols, m)?)
    }
}

pub fn int_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    m.to_i64_rows().ok_or_else(|| anyhow!("matrix entry exceeds the 64-bit range of the file format"))
}

pub fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| anyhow!("{x} exceeds the 64-bit range of the file format"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub t: u64,
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl From<DesignParams> for ParamsJson {
    fn from(p: DesignParams) -> Self {
        Self { t: p.t, v: p.v, k: p.k, lambda: p.lambda }
    }
}

impl ParamsJson {
    pub fn to_params(self) -> Result<DesignParams> {
        Ok(DesignParams::new(self.t, self.v, self.k, self.lambda)?)
    }
}

/// A list of ρ-chains `ρ⁽⁰⁾ … ρ⁽ᵉ⁾` for one parameter set. Written by
/// `search` and `extend --dump`, read by `extend` and `index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainsJson {
    #[serde(default)]
    pub one_based: bool,
    pub design: ParamsJson,
    pub chains: Vec<Vec<MatrixJson>>,
    /// The writer stopped at a cap.
    #[serde(default)]
    pub truncated: bool,
}

impl ChainsJson {
    pub fn new(params: DesignParams, one_based: bool) -> Self {
        Self { one_based, design: params.into(), chains: Vec::new(), truncated: false }
    }

    pub fn push(&mut self, state: &DecompositionState) -> Result<()> {
        let b = base(self.one_based);
        let chain = state.levels().iter().map(|m| MatrixJson::from_matrix(m, b)).collect::<Result<Vec<_>>>()?;
        self.chains.push(chain);
        Ok(())
    }

    pub fn states(&self) -> Result<Vec<DecompositionState>> {
        let params = self.design.to_params()?;
        let b = base(self.one_based);
        self.chains
            .iter()
            .enumerate()
            .map(|(i, chain)| {
                let levels = chain.iter().map(|m| m.to_matrix(b)).collect::<Result<Vec<_>>>()?;
                DecompositionState::from_levels(params, levels).with_context(|| format!("chain {i}"))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignJson {
    /// Cell of `𝔓_k` per column, in the problem's cell order.
    pub cells: Vec<usize>,
    /// Blocks grouped by column.
    pub orbits: Vec<Vec<Vec<usize>>>,
    pub lambda_verified: u64,
}

/// Designs found by `index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignsJson {
    #[serde(default)]
    pub one_based: bool,
    pub design: ParamsJson,
    pub designs: Vec<DesignJson>,
}

impl DesignsJson {
    pub fn push(&mut self, seq: &tactical_core::TacticalSequence, d: &IndexedDesign) -> Result<()> {
        let b = base(self.one_based);
        let level = seq.level(d.params.k())?;
        let orbits = d
            .assignment
            .iter()
            .map(|&c| level.cell(c).members().iter().map(|&s| subset_to_json(s, b)).collect())
            .collect();
        self.designs.push(DesignJson { cells: d.assignment.clone(), orbits, lambda_verified: d.lambda_verified });
        Ok(())
    }
}

/// A plain block list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlocksJson {
    #[serde(default)]
    pub one_based: bool,
    pub v: usize,
    pub blocks: Vec<Vec<usize>>,
}

/// Input of `verify`: a block list or the output of `index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockSource {
    Blocks(BlocksJson),
    Designs(DesignsJson),
}

impl BlockSource {
    /// `(v, block sets)`; one entry per design.
    pub fn block_sets(&self) -> Result<(usize, Vec<Vec<Subset>>)> {
        match self {
            BlockSource::Blocks(b) => {
                let bs = base(b.one_based);
                let blocks = b.blocks.iter().map(|p| subset_from_json(p, bs)).collect::<Result<Vec<_>>>()?;
                Ok((b.v, vec![blocks]))
            }
            BlockSource::Designs(d) => {
                let bs = base(d.one_based);
                let sets = d
                    .designs
                    .iter()
                    .map(|x| x.orbits.iter().flatten().map(|p| subset_from_json(p, bs)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Ok((d.design.v as usize, sets))
            }
        }
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn ensure(cond: bool, msg: impl Into<String>) -> Result<()> {
    if !cond {
        bail!(msg.into());
    }
    Ok(())
}
