//! Splitting a solver run over threads without changing its output order.

use rayon::prelude::*;
use tactical_core::solver::LinearSystem;

/// Solution count plus the first `cap` solutions in search order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelRun {
    pub count: u64,
    pub solutions: Vec<Vec<i64>>,
    pub truncated: bool,
}

/// Smallest prefix depth giving at least `target` subtrees (or all variables).
pub fn split_depth(sys: &LinearSystem, target: usize) -> usize {
    let n = sys.variable_count();
    (1..=n).find(|&d| sys.prefixes(d).len() >= target).unwrap_or(n)
}

/// Counts all solutions and keeps the first `cap` in the sequential order.
/// Runs on the current rayon pool.
pub fn run(sys: &LinearSystem, cap: usize) -> ParallelRun {
    let threads = rayon::current_num_threads();
    if threads <= 1 {
        return sequential(sys, cap);
    }
    let depth = split_depth(sys, 8 * threads);
    let parts: Vec<(u64, Vec<Vec<i64>>)> = sys
        .prefixes(depth)
        .par_iter()
        .map(|prefix| count_keeping(sys.solutions_with_prefix(prefix), cap))
        .collect();
    let count = parts.iter().map(|p| p.0).sum();
    let mut solutions = Vec::new();
    for (_, kept) in parts {
        let room = cap - solutions.len();
        solutions.extend(kept.into_iter().take(room));
    }
    ParallelRun { count, truncated: count > solutions.len() as u64, solutions }
}

pub fn sequential(sys: &LinearSystem, cap: usize) -> ParallelRun {
    let (count, solutions) = count_keeping(sys.solutions(), cap);
    ParallelRun { count, truncated: count > solutions.len() as u64, solutions }
}

fn count_keeping(iter: impl Iterator<Item = Vec<i64>>, cap: usize) -> (u64, Vec<Vec<i64>>) {
    let mut kept = Vec::new();
    let mut count = 0;
    for s in iter {
        if kept.len() < cap {
            kept.push(s);
        }
        count += 1;
    }
    (count, kept)
}
