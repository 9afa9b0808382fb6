//! The two small worked examples on six points.

use std::collections::BTreeMap;

use anyhow::{ensure, Result};
use tactical_core::decomp::{kappa_from_rho, rho_from_selection, BlockSelection};
use tactical_core::params::lambda_triangle;
use tactical_core::IntMatrix;
use tactical::formats::subset_to_json;
use tactical::problem::{Problem, ProblemFile};

use crate::read;

type Rows = Vec<Vec<i64>>;

#[derive(serde::Deserialize)]
struct Reference {
    #[serde(rename = "R")]
    r: BTreeMap<String, Rows>,
    #[serde(rename = "K")]
    k: BTreeMap<String, Rows>,
}

#[derive(serde::Deserialize)]
struct SixPointDesign {
    cells: Vec<usize>,
    blocks: Vec<Vec<Vec<usize>>>,
    lambda: Vec<Vec<i64>>,
    rho: Vec<Rows>,
    kappa: Vec<Rows>,
}

pub fn six_points() -> Problem {
    Problem::new(read::<ProblemFile>("six_points.json"), None).expect("six-point problem loads")
}

fn same(m: &IntMatrix, rows: &Rows) -> bool {
    IntMatrix::from_i64_rows(rows).is_ok_and(|p| &p == m)
}

pub fn criterion1() -> Result<String> {
    let p = six_points();
    let reference: Reference = read("six_points_matrices.json");
    let mut checked = 0;
    for (which, table) in [("R", &reference.r), ("K", &reference.k)] {
        for (key, rows) in table {
            let (x, y) = (key[..1].parse()?, key[1..].parse()?);
            let m = if which == "R" { p.tables.r(x, y)? } else { p.tables.k(x, y)? };
            ensure!(same(m.matrix(), rows), "{which}({x},{y}) differs from the reference matrix");
            checked += 1;
        }
    }
    ensure!(checked == 20, "expected 20 reference matrices, found {checked}");
    Ok(format!("{checked} matrices equal"))
}

pub fn criterion2() -> Result<String> {
    let p = six_points();
    let seq = p.seq()?;
    let ex: SixPointDesign = read("six_points_design.json");
    let sel = BlockSelection::new(3, ex.cells.clone());
    let blocks: Vec<Vec<Vec<usize>>> = ex
        .cells
        .iter()
        .map(|&c| seq.level(3).map(|l| l.cell(c).members().iter().map(|&s| subset_to_json(s, p.base())).collect()))
        .collect::<Result<_, _>>()?;
    for (mine, reference) in blocks.iter().zip(&ex.blocks) {
        let (mut a, mut b) = (mine.clone(), reference.clone());
        a.sort();
        b.sort();
        ensure!(a == b, "orbit {mine:?} differs from the reference {reference:?}");
    }
    let delta = sel.sizes(seq)?;
    for x in 0..=2 {
        let rho = rho_from_selection(seq, &sel, x)?;
        ensure!(same(rho.matrix(), &ex.rho[x]), "rho({x}) differs");
        let kappa = kappa_from_rho(&rho, p.tables.sizes(x)?, &delta)?;
        ensure!(same(kappa.matrix(), &ex.kappa[x]), "kappa({x}) differs");
    }
    let table = lambda_triangle(&p.params);
    for (i_plus_j, row) in ex.lambda.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            ensure!(table.integer(i_plus_j - j, j)? == num_bigint::BigInt::from(want), "lambda_({},{j}) differs", i_plus_j - j);
        }
    }
    Ok("rho and kappa for levels 0-2, triangle 10; 5 5; 2 3 2".into())
}
