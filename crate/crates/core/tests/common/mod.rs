#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use tactical_core::decomp::BlockSelection;
use tactical_core::incidence::compute_r;
use tactical_core::solver::LinearSystem;
use tactical_core::{GeneratorSet, Permutation, TacticalSequence};

/// A permutation of `0..v` that moves a random subset of the points.
pub fn random_permutation<R: Rng>(rng: &mut R, v: usize) -> Permutation {
    let mut support: Vec<usize> = (0..v).collect();
    support.shuffle(rng);
    support.truncate(rng.gen_range(2..=v));
    let mut images: Vec<usize> = (0..v).collect();
    let mut shuffled = support.clone();
    shuffled.shuffle(rng);
    for (&a, &b) in support.iter().zip(&shuffled) {
        images[a] = b;
    }
    Permutation::from_images(&images).unwrap()
}

/// One or two random generators on `v` points; sometimes the trivial group.
pub fn random_group<R: Rng>(rng: &mut R, v: usize) -> GeneratorSet {
    let count = rng.gen_range(0..=2);
    let gens = (0..count).map(|_| random_permutation(rng, v)).collect();
    GeneratorSet::new(v, gens).unwrap()
}

/// Up to `limit` G-invariant `t-(v,k,λ)` designs, as unions of orbits solving
/// `R⁽ᵗᵏ⁾ x = λ 1` with `x ∈ {0,1}`. Skipped when the orbit count exceeds
/// `max_orbits`.
pub fn orbit_designs(seq: &TacticalSequence, t: usize, k: usize, lambda: i64, limit: usize, max_orbits: usize) -> Vec<BlockSelection> {
    let r = compute_r(seq, t, k).unwrap();
    if r.cols() > max_orbits {
        return Vec::new();
    }
    let mut sys = LinearSystem::new(vec![(0, 1); r.cols()]).unwrap();
    for a in 0..r.rows() {
        let row: Vec<i64> = (0..r.cols()).map(|c| i64::try_from(r.get(a, c)).unwrap()).collect();
        sys.add_row(&row, lambda).unwrap();
    }
    sys.solutions()
        .take(limit)
        .map(|x| BlockSelection::new(k, x.iter().enumerate().filter(|(_, &b)| b == 1).map(|(c, _)| c).collect()))
        .collect()
}
