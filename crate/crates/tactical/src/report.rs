//! Plain-text rendering.

use std::fmt::Write;

use tactical_core::params::LambdaTable;
use tactical_core::{Label, LabeledIntMatrix, PointBase, Subset};

pub fn subset(s: Subset, base: PointBase) -> String {
    let points: Vec<String> = s.points().map(|p| base.to_label(p).to_string()).collect();
    format!("{{{}}}", points.join(","))
}

pub fn label(l: &Label, base: PointBase) -> String {
    match *l {
        Label::Cell(s) => subset(s, base),
        Label::Index(i) => format!("#{i}"),
    }
}

/// Right-aligned entries with row labels in front.
pub fn matrix(m: &LabeledIntMatrix, base: PointBase) -> String {
    let labels: Vec<String> = m.row_labels().iter().map(|l| label(l, base)).collect();
    let lw = labels.iter().map(String::len).max().unwrap_or(0);
    let cells: Vec<Vec<String>> = (0..m.rows()).map(|a| (0..m.cols()).map(|j| m.get(a, j).to_string()).collect()).collect();
    let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for (l, row) in labels.iter().zip(&cells) {
        let entries: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{l:>lw$} | {}", entries.join(" "));
    }
    out
}

/// The triangle `λ_{n-j, j}`, one line per `n`, centred.
pub fn triangle(table: &LambdaTable) -> String {
    let rows: Vec<Vec<String>> = table.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    triangle_rows(&rows)
}

pub fn triangle_rows(rows: &[Vec<String>]) -> String {
    let lines: Vec<String> = rows.iter().map(|r| r.join("   ")).collect();
    let width = lines.iter().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for l in lines {
        let pad = (width - l.len()) / 2;
        let _ = writeln!(out, "{}{l}", " ".repeat(pad));
    }
    out
}
