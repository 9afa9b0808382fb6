//! Problem files: a group (or an `R`-chain) plus design parameters.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use tactical_core::incidence::IncidenceTables;
use tactical_core::permgroup::build_sequence;
use tactical_core::{DesignParams, GeneratorSet, IntMatrix, PointBase, TacticalSequence};

use crate::formats::{base, read_json, subset_from_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub t: u64,
    pub k: u64,
    pub lambda: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest number of solutions kept by `extend --dump`.
    #[serde(default)]
    pub solutions: Option<usize>,
}

/// Explicit cell orders: level → one member of each cell, in the wanted order.
pub type CellOrder = BTreeMap<usize, Vec<Vec<usize>>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub v: usize,
    /// Cycle notation, one string per generator.
    #[serde(default)]
    pub generators: Vec<String>,
    /// `R⁽ⁱ'ⁱ⁺¹⁾` for `i = 0, 1, …`, used instead of a group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Vec<Vec<i64>>>>,
    #[serde(default)]
    pub one_based: bool,
    pub design: DesignSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cell_order: CellOrder,
    #[serde(default)]
    pub caps: Caps,
}

/// A loaded problem. Without a group there is no sequence, only tables.
#[derive(Debug, Clone)]
pub struct Problem {
    pub file: ProblemFile,
    pub params: DesignParams,
    pub seq: Option<TacticalSequence>,
    pub tables: IncidenceTables,
}

impl Problem {
    pub fn load(path: &Path, paper_order: Option<&Path>) -> Result<Self> {
        let file: ProblemFile = read_json(path)?;
        let extra = paper_order.map(read_json::<CellOrder>).transpose()?;
        Self::new(file, extra.as_ref()).with_context(|| format!("problem {}", path.display()))
    }

    pub fn new(mut file: ProblemFile, paper_order: Option<&CellOrder>) -> Result<Self> {
        let d = file.design;
        let params = DesignParams::new(d.t, file.v as u64, d.k, d.lambda)?;
        if let Some(extra) = paper_order {
            file.cell_order.extend(extra.iter().map(|(k, v)| (*k, v.clone())));
        }
        let b = file.base();
        let (seq, tables) = match &file.chain {
            Some(chain) => {
                if !file.generators.is_empty() {
                    bail!("give either generators or a chain, not both");
                }
                if !file.cell_order.is_empty() {
                    bail!("cell orders need a group");
                }
                let chain = chain.iter().map(|m| IntMatrix::from_i64_rows(m)).collect::<Result<Vec<_>, _>>()?;
                (None, IncidenceTables::from_chain(file.v, &chain)?)
            }
            None => {
                let g = GeneratorSet::parse(file.v, &file.generators, b)?;
                let mut seq = build_sequence(&g, params.k())?;
                for (&level, members) in &file.cell_order {
                    let members = members.iter().map(|m| subset_from_json(m, b)).collect::<Result<Vec<_>>>()?;
                    seq.order_level_by(level, &members).with_context(|| format!("cell order of level {level}"))?;
                }
                let tables = IncidenceTables::from_sequence(&seq)?;
                (Some(seq), tables)
            }
        };
        let problem = Self { file, params, seq, tables };
        if let Some(rho0) = &problem.file.rho0 {
            problem.check_rho0(rho0)?;
        }
        Ok(problem)
    }

    pub fn base(&self) -> PointBase {
        self.file.base()
    }

    pub fn seq(&self) -> Result<&TacticalSequence> {
        self.seq.as_ref().ok_or_else(|| anyhow!("this command needs a group, but the problem only gives an R-chain"))
    }

    pub fn rho0(&self) -> Result<&[u64]> {
        self.file.rho0.as_deref().ok_or_else(|| anyhow!("the problem file has no rho0"))
    }

    /// Every class size must be the size of a distinct cell of `𝔓_k`.
    fn check_rho0(&self, rho0: &[u64]) -> Result<()> {
        let Some(seq) = &self.seq else { return Ok(()) };
        let mut available: BTreeMap<u64, usize> = BTreeMap::new();
        for s in seq.level(self.params.k())?.sizes() {
            *available.entry(s).or_default() += 1;
        }
        for &s in rho0 {
            match available.get_mut(&s) {
                Some(n) if *n > 0 => *n -= 1,
                _ => bail!("rho0 asks for more cells of size {s} than the {}-subset orbits provide", self.params.k),
            }
        }
        Ok(())
    }
}

impl ProblemFile {
    pub fn base(&self) -> PointBase {
        base(self.one_based)
    }
}
