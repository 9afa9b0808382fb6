//! The 3-(10,4,1) case under a group of order 3 fixing one point.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use anyhow::{ensure, Context, Result};
use num_bigint::BigInt;
use tactical_core::decomp::{theorem1_rhs, verify_design, DecompositionState, DesignVerdict};
use tactical_core::indexer::{column_candidates, index_designs, IndexingProblem};
use tactical_core::params::lambda_triangle;
use tactical_core::solver::{canonical_form, enumerate_rho1, extend_rho, ClassPermutations};
use tactical_core::{IntMatrix, LabeledIntMatrix, Subset, TacticalSequence};
use tactical::formats::{int_rows, subset_from_json, BlocksJson};
use tactical::parallel;
use tactical::problem::{Problem, ProblemFile};

use crate::read;

type Rows = Vec<Vec<i64>>;

#[derive(serde::Deserialize)]
struct Data {
    lambda: Vec<Vec<i64>>,
    partition1: Vec<Vec<Vec<usize>>>,
    partition2: Vec<Vec<Vec<usize>>>,
    #[serde(rename = "R01")]
    r01: Rows,
    #[serde(rename = "K01")]
    k01: Rows,
    #[serde(rename = "R02")]
    r02: Rows,
    #[serde(rename = "K02")]
    k02: Rows,
    #[serde(rename = "R12")]
    r12: Rows,
    #[serde(rename = "K12")]
    k12: Rows,
    rho1: Vec<Rows>,
    rho2: Rows,
    rhs_transposed: Rows,
    design: Vec<Vec<Vec<usize>>>,
    column4_candidates: Vec<Vec<usize>>,
    column5_candidates: Vec<Vec<usize>>,
}

struct Case {
    problem: Problem,
    data: Data,
}

fn case() -> &'static Case {
    static CASE: OnceLock<Case> = OnceLock::new();
    CASE.get_or_init(|| Case {
        problem: Problem::new(read::<ProblemFile>("ten_points.json"), None).expect("problem loads"),
        data: read("ten_points_data.json"),
    })
}

fn sorted<T: Ord + Clone>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort();
    v
}

fn members(seq: &TacticalSequence, x: usize, cell: usize) -> Result<Vec<Vec<usize>>> {
    Ok(sorted(&seq.level(x)?.cell(cell).members().iter().map(|s| s.to_vec()).collect::<Vec<_>>()))
}

/// `(ρ⁽⁰⁾, ρ⁽¹⁾)` with the reference `ρ⁽¹⁾`.
fn state_with_rho1(rho1: &Rows) -> Result<DecompositionState> {
    let c = case();
    let mut state = DecompositionState::new(c.problem.params, c.problem.rho0()?, None)?;
    let labels = c.problem.tables.labels(1)?.to_vec();
    state.push_level(LabeledIntMatrix::new(labels, state.col_labels().to_vec(), IntMatrix::from_i64_rows(rho1)?)?)?;
    Ok(state)
}

pub fn criterion3() -> Result<String> {
    let c = case();
    let table = lambda_triangle(&c.problem.params);
    ensure!(table.is_integral(), "triangle is not integral");
    for (n, row) in c.data.lambda.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            ensure!(table.integer(n - j, j)? == BigInt::from(want), "lambda_({},{j}) differs from {want}", n - j);
        }
    }
    Ok("30; 12 18; 4 8 10; 1 3 5 5".into())
}

pub fn criterion4() -> Result<String> {
    let c = case();
    let seq = c.problem.seq()?;
    for (x, reference) in [(1, &c.data.partition1), (2, &c.data.partition2)] {
        ensure!(seq.level(x)?.len() == reference.len(), "level {x} has {} cells", seq.level(x)?.len());
        for (cell, want) in reference.iter().enumerate() {
            ensure!(members(seq, x, cell)? == sorted(want), "cell {cell} of level {x} differs");
        }
    }
    let rho0 = c.problem.rho0()?;
    let reps = enumerate_rho1(&c.problem.tables, &c.problem.params, rho0)?;
    ensure!(reps.len() == 8, "{} representatives instead of 8", reps.len());
    let perms = ClassPermutations::new(c.problem.tables.sizes(1)?.as_slice());
    let canon = |rows: &Rows| canonical_form(rows, &perms, rho0);
    let found: BTreeSet<Rows> = reps.iter().map(|m| int_rows(m.matrix()).map(|r| canon(&r))).collect::<Result<_>>()?;
    let reference: BTreeSet<Rows> = c.data.rho1.iter().map(canon).collect();
    ensure!(reference.len() == 8, "reference matrices fall into {} classes", reference.len());
    ensure!(found == reference, "representatives differ from the reference classes");
    Ok("8 classes, each matching one reference matrix".into())
}

pub fn criterion5() -> Result<String> {
    let c = case();
    let mut counts = Vec::new();
    for (i, rho1) in c.data.rho1.iter().enumerate() {
        let state = state_with_rho1(rho1)?;
        let ext = extend_rho(&c.problem.tables, &state, 1)?;
        counts.push(parallel::run(ext.system(), 0).count);
        if i == 7 {
            let rho2 = IntMatrix::from_i64_rows(&c.data.rho2)?;
            ensure!(ext.contains(&rho2), "the reference rho(2) is not among the extensions");
        }
    }
    let want = [0, 0, 0, 0, 0, 0, 0, 47_040];
    ensure!(counts == want, "counts {counts:?}, expected {want:?}");
    Ok(format!("counts {counts:?}"))
}

pub fn criterion6() -> Result<String> {
    let c = case();
    let seq = c.problem.seq()?;
    let mut state = state_with_rho1(&c.data.rho1[7])?;
    let labels = c.problem.tables.labels(2)?.to_vec();
    state.push_level(LabeledIntMatrix::new(labels, state.col_labels().to_vec(), IntMatrix::from_i64_rows(&c.data.rho2)?)?)?;
    let prob = IndexingProblem::new(seq, &state)?;
    let designs = index_designs(&prob)?;
    ensure!(designs.len() == 1, "{} designs instead of 1", designs.len());
    let d = &designs[0];

    let reference: BlocksJson = read("ten_points_design.json");
    let base = tactical::formats::base(reference.one_based);
    let want: BTreeSet<Subset> = reference.blocks.iter().map(|b| subset_from_json(b, base)).collect::<Result<_>>()?;
    let got: BTreeSet<Subset> = d.blocks.iter().copied().collect();
    ensure!(got.len() == 30 && got == want, "block set differs from the reference design");
    let orbits: BTreeSet<Vec<Vec<usize>>> = d.assignment.iter().map(|&cell| members(seq, 4, cell)).collect::<Result<_>>()?;
    let reference_orbits: BTreeSet<Vec<Vec<usize>>> = c.data.design.iter().map(|o| sorted(o)).collect();
    ensure!(orbits == reference_orbits, "orbits differ from the reference ones");

    let verdict = verify_design(seq.v(), &d.blocks, 3)?;
    ensure!(verdict == DesignVerdict::Design { lambda: 1 }, "verification gave {verdict:?}");

    for (j, want) in [(3, &c.data.column4_candidates), (4, &c.data.column5_candidates)] {
        let cands = column_candidates(&prob, j).with_context(|| format!("column {j}"))?;
        let sets: Vec<Vec<Vec<usize>>> = cands.iter().map(|&cell| members(seq, 4, cell)).collect::<Result<_>>()?;
        ensure!(sets == vec![sorted(want)], "column {j} candidates {sets:?}");
    }
    Ok("one design, 30 blocks, lambda 1 at t = 3, column candidates match".into())
}

pub fn criterion7() -> Result<String> {
    let c = case();
    let t = &c.problem.tables;
    let reference = [
        ("R(0,1)", t.r(0, 1)?, &c.data.r01),
        ("K(0,1)", t.k(0, 1)?, &c.data.k01),
        ("R(0,2)", t.r(0, 2)?, &c.data.r02),
        ("K(0,2)", t.k(0, 2)?, &c.data.k02),
        ("R(1,2)", t.r(1, 2)?, &c.data.r12),
        ("K(1,2)", t.k(1, 2)?, &c.data.k12),
    ];
    for (name, m, rows) in reference {
        ensure!(m.matrix() == &IntMatrix::from_i64_rows(rows)?, "{name} differs");
    }
    let table = lambda_triangle(&c.problem.params);
    let rhs21 = theorem1_rhs(t, &table, 2, 1)?;
    ensure!(
        rhs21.matrix().transpose() == IntMatrix::from_i64_rows(&c.data.rhs_transposed)?,
        "rhs(2,1) differs from the reference 4x15 matrix"
    );
    // rhs(1,1) = λ₂ J D⁽¹⁾ + λ_{1,1} I
    let rhs11 = theorem1_rhs(t, &table, 1, 1)?;
    let (l2, l11) = (table.integer(2, 0)?, table.integer(1, 1)?);
    let d = t.sizes(1)?;
    let closed = IntMatrix::from_fn(d.len(), d.len(), |a, b| &l2 * d.get(b) + if a == b { l11.clone() } else { BigInt::from(0) });
    ensure!(rhs11.matrix() == &closed, "rhs(1,1) differs from its closed form");
    Ok("R/K inputs match; rhs(2,1) equals the reference 15-column matrix transposed; rhs(1,1) closed form".into())
}
