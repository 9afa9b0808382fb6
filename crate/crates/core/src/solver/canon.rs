//! Canonical representatives of integer matrices under row permutations
//! inside row classes and column permutations inside column groups.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;

/// Row permutations that only exchange rows carrying the same class key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPermutations {
    rows: usize,
    classes: Vec<Vec<usize>>,
}

impl ClassPermutations {
    /// Rows `i` and `j` may be exchanged iff `keys[i] == keys[j]`.
    pub fn new<K: Ord>(keys: &[K]) -> Self {
        let mut by_key: BTreeMap<&K, Vec<usize>> = BTreeMap::new();
        for (i, key) in keys.iter().enumerate() {
            by_key.entry(key).or_default().push(i);
        }
        Self { rows: keys.len(), classes: by_key.into_values().collect() }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Number of permutations in the group.
    pub fn order(&self) -> u128 {
        self.classes.iter().map(|c| (1..=c.len() as u128).product::<u128>()).product()
    }

    /// Every permutation as an image vector: new row `i` is old row `p[i]`.
    pub fn iter(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let per_class = self
            .classes
            .iter()
            .map(|c| c.iter().copied().permutations(c.len()).collect::<Vec<_>>())
            .collect::<Vec<_>>();
        let combos: alloc::boxed::Box<dyn Iterator<Item = Vec<Vec<usize>>>> = if per_class.is_empty() {
            alloc::boxed::Box::new(core::iter::once(Vec::new()))
        } else {
            alloc::boxed::Box::new(per_class.into_iter().multi_cartesian_product())
        };
        combos.map(move |arrangement| {
            let mut p = vec![0; self.rows];
            for (class, images) in self.classes.iter().zip(arrangement) {
                for (&slot, image) in class.iter().zip(images) {
                    p[slot] = image;
                }
            }
            p
        })
    }
}

/// Sorts the columns of `rows` inside each column group (columns with equal
/// `col_keys`), keeping the group positions fixed.
pub fn sort_columns_within_groups<K: Ord>(rows: &[Vec<i64>], col_keys: &[K]) -> Vec<Vec<i64>> {
    let mut out = rows.to_vec();
    let mut groups: BTreeMap<&K, Vec<usize>> = BTreeMap::new();
    for (j, key) in col_keys.iter().enumerate() {
        groups.entry(key).or_default().push(j);
    }
    for positions in groups.values() {
        let mut columns: Vec<Vec<i64>> = positions.iter().map(|&j| rows.iter().map(|r| r[j]).collect()).collect();
        columns.sort();
        for (&j, column) in positions.iter().zip(columns) {
            for (r, value) in out.iter_mut().zip(column) {
                r[j] = value;
            }
        }
    }
    out
}

/// The row-major lexicographically smallest image of `rows` under the
/// allowed row and column permutations.
pub fn canonical_form<K: Ord>(rows: &[Vec<i64>], row_perms: &ClassPermutations, col_keys: &[K]) -> Vec<Vec<i64>> {
    row_perms
        .iter()
        .map(|p| {
            let permuted: Vec<Vec<i64>> = p.iter().map(|&i| rows[i].clone()).collect();
            sort_columns_within_groups(&permuted, col_keys)
        })
        .min()
        .unwrap_or_default()
}
